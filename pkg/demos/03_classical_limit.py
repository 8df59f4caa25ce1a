# # The classical limit
#
# At q = 1 with R equal to the flip, the same identities speak about an
# ordinary matrix X with commuting entries.  The classical module checks
# them directly, with no quantum machinery involved.

# %%

import random

from qchn.chn import algebra, chn_residual
from qchn.classical import classical_chn_check, classical_symfun, random_matrix, specialize_quantum
from qchn.rmatrix import HeckeData

x = random_matrix(3, random.Random(1))
for row in x:
    print([str(v) for v in row])

s, e, h = classical_symfun(x, 4)
print("power sums:", [str(v) for v in s])
print("elementary:", [str(v) for v in e])
print("complete:  ", [str(v) for v in h])

# # Wedge-power identities for a numeric matrix
#
# Every residual below is an exact rational matrix, and all of them vanish.

# %%

for j in range(1, 5):
    res = classical_chn_check(x, j)
    print(j, {v: all(c == 0 for row in m for c in row) for v, m in res.items()})

# # Quantum objects at q = 1
#
# Build the residual with the flip as R-matrix and substitute X for T.

# %%

rtt = algebra(HeckeData.classical(3), "rtt")
print("sigma_3(X) =", specialize_quantum(rtt.elem_sym(3), x), " e_3 =", e[3])
res = specialize_quantum(chn_residual(rtt, 3, "le"), x)
print("residual at j=3:", [[str(v) for v in row] for row in res])
