# Maps from S^2 into a space Y whose cohomology is not free.
#
# Y has minimal model Λ(x1, x2, y) with |x1| = |x2| = 4 and dy = x1*x2,
# so H*(Y) = Q[x1,x2]/(x1x2).  The space of maps S^2 -> Y turns out to be
# formal anyway.  S^2 has no odd spherical retract, so nothing forces H*(Y)
# to be free here.

from pathlib import Path

from ratmodels import (CohomologyAlgebra, cohomology_dims, formality_check, is_free_graded_commutative,
                       load_model, odd_spherical_retract, regular_sequence_check,
                       sphere_mapping_space_model)

MODELS = Path(__file__).resolve().parent / "models"

Y = load_model(MODELS / "Y.model").algebra()
print(Y)
print("H*(Y) dims:", cohomology_dims(Y, 16))


# The cohomology of Y is not free graded commutative: x1*x2 = 0.

HY = CohomologyAlgebra(Y, 16).algebra
print("H*(Y) free?", is_free_graded_commutative(HY, 16))


# S^2 has no odd-dimensional spherical retract.

S2 = load_model(MODELS / "S2.model").algebra()
print("odd spherical retract of S^2:", odd_spherical_retract(S2))


# Model of the mapping space: double the generators, shift the copies down by 2.
# The differential on the copies is the suspension of d.

F = sphere_mapping_space_model(Y, 2).algebra
for g in F.generators:
    print(f"  d {g.name} = {F.dgen(g.name)}")


# Both odd differentials are polynomials in the even generators, and they
# form a regular sequence, so F is a Koszul complex.

dy, dyb = F.dgen("y"), F.dgen("y_bar")
print(regular_sequence_check([dy, dyb], 16))
print(regular_sequence_check([dyb, dy], 16))


# Formality through degree 14, first by the Koszul route and then by an
# explicit map to cohomology found generator by generator.

v = formality_check(F, 14)
print(v)
w = formality_check(F, 14, use_koszul=False)
print(w)
for g in F.generators:
    print(f"  psi({g.name}) = {w.witness.images[g]}")
