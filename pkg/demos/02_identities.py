# # Matrix identities in the RTT algebra of GL_q(2)
#
# The generators T^i_j do not commute.  An identity holds when its left
# side minus its right side lies in the two-sided ideal generated by the
# quadratic RTT relations.  We decide that degree by degree with exact
# rational linear algebra at a few sample values of q.

# %%

from qchn.chn import algebra, chn_residual, verify
from qchn.rmatrix import HeckeData
from qchn.scalars import sample_points

hd = HeckeData.standard(2)
rtt = algebra(hd, "rtt")
samples = sample_points(3, seed=0)
print("samples:", [str(s) for s in samples])

# # Ingredients
#
# sigma_2 is the q-analogue of the determinant (up to a power of q).

# %%

print("sigma_1 =", rtt.elem_sym(1).format(2))
print("sigma_2 =", rtt.elem_sym(2).format(2))

# # A residual
#
# The residual of the degree-2 identity is a 2x2 matrix of noncommutative
# polynomials.  It is not zero as written, only modulo the relations.

# %%

res = chn_residual(rtt, 2, "le")
print("entry (0,0):", res[(0, 0)].format(2) if (0, 0) in res.entries else "0")
cert = verify(hd, "rtt", "chn", "le", 2, samples)
print(cert.identity, cert.verdict, cert.system_dims)

# # Where the coefficient sits matters
#
# Moving sigma_k to the other side of the matrix power breaks the
# identity, and the certificate says which entries fail.

# %%

bad = verify(hd, "rtt", "chn", "le", 2, samples, flip_side=True)
print(bad.identity, bad.verdict, bad.failures[:2])

# # The rest of the family

# %%

for family, variant, j in [
    ("newton", "qNewton", 3),
    ("ch", "hc1", 1),
    ("inverse", "inv1", 3),
    ("qdet", "qdet", 1),
    ("commute", "commute", 1),
]:
    c = verify(hd, "rtt", family, variant, j, samples, l=3 if family == "commute" else None)
    print(f"{c.identity:40s} {c.verdict}")

for variant in ("wedge", "sym"):
    c = verify(hd, "re", "chn", variant, 3, samples)
    print(f"{c.identity:40s} {c.verdict}")
