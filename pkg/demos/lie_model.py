# A Lie model for a mapping space, built as A⊗L.
#
# A is a finite model of S^2 and L is the free Lie algebra on two generators
# of degree 3, a Lie model of S^4 ∨ S^4.

from pathlib import Path

from ratmodels import (cohomology_dims, cstar, evaluation_maps, finite_dimensional_model,
                       load_model, mapping_space_lie_model)

MODELS = Path(__file__).resolve().parent / "models"

S2 = load_model(MODELS / "S2.model").algebra()
A, proj = finite_dimensional_model(S2, 12)
print("A dims:", A.dims())

L = load_model(MODELS / "L33.model").algebra()
print("dim L_n:", [L.dim(n) for n in range(1, 13)])

M = mapping_space_lie_model(A, L)
print("dim (A⊗L)_n:", [M.dim(n) for n in range(1, 11)])


# Brackets and the differential on A⊗L, checked on every basis pair and
# triple of total degree at most 8.

print(M.validate(8))


# Evaluation at the base point, and the section through constant maps.

ev, const = evaluation_maps(M)
a1 = L.gen("a1")
print("ev(const(a1)) =", ev(const(a1)))


# Dualize to a Sullivan algebra.  Generators in the top degree only carry
# part of their differential.

res = cstar(M, 10)
C = res.algebra
print(C)
print("partial:", sorted(res.partial))
print("H dims:", cohomology_dims(C, 9))
