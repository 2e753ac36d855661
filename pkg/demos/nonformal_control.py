# Two non-formal algebras and the Massey products that detect them.

from pathlib import Path

from ratmodels import (formality_check, load_model, massey_triple, odd_spherical_retract,
                       sphere_mapping_space_model)
from ratmodels.formality import massey_search

MODELS = Path(__file__).resolve().parent / "models"

# Λ(x, y, z) with |x| = |y| = 3, |z| = 5 and dz = xy.
N = load_model(MODELS / "nonformal.model").algebra()
x, y, z = N.gen("x"), N.gen("y"), N.gen("z")

# x*x = 0 on the nose, and xy = dz, so <x, x, y> is defined.
ms = massey_triple(N, x, x, y)
print("u =", ms.u, " v =", ms.v)
print(ms)

# H^5(N) = 0, so nothing can absorb the class of x*z.
print("dim H^5 =", N.cohomology(5).dimension)
print(formality_check(N, 12))


# Maps from S^3 into Y.  Here S^3 is its own odd spherical retract, but Y is
# only 3-connected, one short of what the mapping-space argument needs.

Y = load_model(MODELS / "Y.model").algebra()
S3 = load_model(MODELS / "S3.model").algebra()
print("odd spherical retract of S^3:", odd_spherical_retract(S3) is not None)

F = sphere_mapping_space_model(Y, 3).algebra
for g in F.generators:
    print(f"  d {g.name} = {F.dgen(g.name)}")

v = formality_check(F, 12)
print(v)
print(v.massey)

# the same triple turns up in a plain search
print(massey_search(F, 12))
