# # Hecke R-matrices and their projectors
#
# Build the standard GL(3) R-matrix with a symbolic parameter q, check the
# braid and Hecke relations exactly, then grow the q-antisymmetrizer tower
# until it dies.

# %%

from fractions import Fraction

from qchn.projectors import antisymmetrizer, symmetrizer
from qchn.rmatrix import HeckeData, check_hecke, check_ybe, permutation_op
from qchn.scalars import specialize
from qchn.tensorspace import generic_rank

hd = HeckeData.standard(3)
r = hd.rhat
print("nonzero entries of R:", len(r.entries))

# # Certification
#
# Both residuals are operators whose entries live in Q(q).  "Zero" means
# every entry is the canonical zero, not merely small.

# %%

print("braid residual zero:", check_ybe(r).is_zero())
print("Hecke residual zero:", check_hecke(r).is_zero())

# # The tower
#
# Each level is a projector. Its trace is a Laurent polynomial equal to its
# rank, so the dimensions of the q-deformed exterior powers show up as
# plain integers.

# %%

for k in range(1, 5):
    a = antisymmetrizer(r, k)
    s = symmetrizer(r, k)
    print(f"k={k}  tr A = {a.trace()}  tr S = {s.trace()}  rank A at q=3/2: {generic_rank(a, [Fraction(3, 2)])}")

# The antisymmetrizer vanishes at level 4, so the height is 3.

# %%

print("height:", hd.ensure_height())
d_r, d_l = hd.ensure_d()
print("D_r diagonal:", [str(d_r[(i, i)]) for i in range(3)])
print("D_l diagonal:", [str(d_l[(i, i)]) for i in range(3)])

# # Classical limit
#
# Setting q = 1 turns R into the flip of V (x) V.

# %%

flip = r.map(specialize(1))
print("R at q=1 is the flip:", flip == permutation_op(3, Fraction(1)))
