"""From Lie models to Sullivan algebras, and sphere-mapping-space models.

``cstar`` dualizes the Chevalley–Eilenberg construction of a free DGL.
``sphere_mapping_space_model`` doubles a minimal Sullivan algebra ΛZ into
Λ(Z ⊕ Z̄) with the degree -p suspension derivation S.

Sign convention for ``cstar``: for generators x_a, x_b dual to basis
elements e_a, e_b of L,

    d x = -Σ <x, ∂e> x_e  +  Σ_{a<b} (-1)^{|e_a|+1} <x, [e_a,e_b]> x_a x_b
          + ½ Σ_a (-1)^{|e_a|+1} <x, [e_a,e_a]> x_a^2

With one odd Lie generator a of degree 3 this gives ΛV = Λ(x4, w7) with
d w = ½ x4^2, i.e. the constant c = 1/2.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .cdga import CDGAMorphism, Element, Generator, SullivanAlgebra
from .dgl import TensorLieModel, bracket
from .exceptions import ConnectivityViolation, DifferentialError, ModelError


LINEAR_SIGN = -1


def quadratic_sign(deg_a, deg_b):
    return -1 if deg_a % 2 == 0 else 1


@dataclass
class CStarResult:
    algebra: SullivanAlgebra
    duals: dict                 # generator name -> (Lie degree, Lie basis element)
    partial: frozenset          # generators whose differential is truncated
    max_degree: int

    def linear_part(self, name):
        return _split(self.algebra.dgen(name))[0]

    def quadratic_part(self, name):
        return _split(self.algebra.dgen(name))[1]


def _split(e):
    lin, quad, other = {}, {}, {}
    for m, c in e.terms.items():
        length = sum(x for _, x in m)
        (lin if length == 1 else quad if length == 2 else other)[m] = c
    if other:
        raise ArithmeticError("differential has components outside V ⊕ Λ²V")
    return Element(lin), Element(quad)


def _lie_structure(L):
    """(basis, boundary, bracket, coordinates) callables for a free DGL or an A⊗L model."""
    if isinstance(L, TensorLieModel):
        return L.basis, L.D, L.bracket, L.coordinates
    return L.lie_basis, L.boundary, bracket, L.coordinates


def cstar(L, max_degree, linear_sign=None, quad_sign=None):
    """Sullivan algebra C*(L) truncated to generators of degree <= max_degree.

    ``L`` is a free DGL, or the DGL A⊗L of a mapping space (its positive
    degrees are dualized; connectivity makes that the whole of it).
    """
    if max_degree < 2:
        raise ValueError("max_degree must be at least 2")
    linear_sign = LINEAR_SIGN if linear_sign is None else linear_sign
    quad_sign = quadratic_sign if quad_sign is None else quad_sign
    basis_of, boundary, brk, coords = _lie_structure(L)
    gens = {}        # Lie degree -> list of Generator
    duals = {}
    for k in range(1, max_degree):
        basis = basis_of(k)
        names = [f"v{k + 1}" if len(basis) == 1 else f"v{k + 1}_{j + 1}" for j in range(len(basis))]
        gens[k] = [Generator(nm, k + 1) for nm in names]
        for nm, b in zip(names, basis):
            duals[nm] = (k, b)
    diff = {g: Element() for glist in gens.values() for g in glist}
    for k in range(1, max_degree - 1):
        # linear part: x dual to e in L_k picks up ∂ of basis elements of L_{k+1}
        for i, b in enumerate(basis_of(k + 1)):
            db = boundary(b)
            if not db:
                continue
            for j, c in enumerate(coords(db, k)):
                if c:
                    g = gens[k][j]
                    diff[g] = diff[g] + Element.gen(gens[k + 1][i]) * (linear_sign * c)
    for ka in range(1, max_degree):
        for kb in range(ka, max_degree - ka):
            k = ka + kb
            for ia, ea in enumerate(basis_of(ka)):
                for ib, eb in enumerate(basis_of(kb)):
                    if ka == kb and ib < ia:
                        continue
                    br = brk(ea, eb)
                    if not br:
                        continue
                    coeff = Fraction(quad_sign(ka, kb))
                    if ka == kb and ia == ib:
                        coeff /= 2
                    xab = Element.gen(gens[ka][ia]) * Element.gen(gens[kb][ib])
                    for j, c in enumerate(coords(br, k)):
                        if c:
                            g = gens[k][j]
                            diff[g] = diff[g] + xab * (coeff * c)
    partial = frozenset(g.name for g in gens.get(max_degree - 1, []))
    all_gens = [g for glist in gens.values() for g in glist]
    label = getattr(L, "name", None) or ("A⊗L" if isinstance(L, TensorLieModel) else "L")
    alg = SullivanAlgebra(all_gens, diff, name=f"C*({label})", partial=partial)
    return CStarResult(alg, duals, partial, max_degree)


class SuspensionDerivation:
    """Derivation S of degree -p with S(z) = z̄ and S(z̄) = 0.

    ``S(ab) = S(a) b + (-1)^{p|a|} a S(b)``.
    """

    def __init__(self, algebra, bar, p):
        self.algebra = algebra
        self.bar = dict(bar)             # Generator -> Generator
        self.p = p
        self._cache = {}

    def __call__(self, e):
        out = {}
        for m, c in e.terms.items():
            for m2, c2 in self._mono(m).terms.items():
                out[m2] = out.get(m2, 0) + c * c2
        return Element(out)

    def _mono(self, m):
        if m in self._cache:
            return self._cache[m]
        if not m:
            res = Element()
        else:
            g, e = m[0]
            rest = ((g, e - 1),) + m[1:] if e > 1 else m[1:]
            head = Element.gen(self.bar[g]) if g in self.bar else Element()
            res = head * Element.monomial(rest)
            srest = self._mono(rest)
            if srest:
                t = Element.gen(g) * srest
                res = res + (-t if (self.p * g.degree) % 2 else t)
        self._cache[m] = res
        return res


def apply_suspension(S, e):
    return S(e)


def bar_name(name):
    return f"{name}_bar"


@dataclass
class SphereMappingModel:
    algebra: SullivanAlgebra
    source: SullivanAlgebra
    p: int
    suspension: SuspensionDerivation
    bar: dict                              # source generator name -> bar generator name
    lower_grading: dict = field(default_factory=dict)

    def restriction_equals_source(self):
        names = [g.name for g in self.source.generators]
        sub = self.algebra.sub_algebra(names)
        return all(sub.dgen(n) == self.source.dgen(n) for n in names)


def sphere_mapping_space_model(Y, p, lower_grading=None):
    """Sullivan model Λ(Z ⊕ Z̄) of the space of maps S^p → Y.

    For odd p, d(z̄) = -S(dz) with S an odd derivation; for even p S is an
    even derivation and d(z̄) = +S(dz).  Either way [d, S] is a derivation
    vanishing on ΛZ, which is what makes d^2 = 0.

    ``lower_grading`` (generator name -> k) is copied onto the bar
    generators when given.
    """
    if p < 1:
        raise ValueError("sphere dimension must be positive")
    if not Y.is_minimal():
        raise ModelError("sphere_mapping_space_model requires a minimal model of Y")
    for g in Y.generators:
        if g.degree <= p:
            raise ConnectivityViolation(
                f"generator {g.name} has degree {g.degree} <= p = {p}")
    bars = {g: Generator(bar_name(g.name), g.degree - p) for g in Y.generators}
    taken = {g.name for g in Y.generators}
    for b in bars.values():
        if b.name in taken:
            raise ModelError(f"name clash for shifted generator {b.name}")
    all_gens = list(Y.generators) + list(bars.values())
    S = SuspensionDerivation(None, bars, p)
    diff = {g: Y.differential[g] for g in Y.generators}
    # odd p: d(z̄) = -S(dz); even p: d(z̄) = +S(dz), the only sign with d^2 = 0
    sign = -1 if p % 2 else 1
    for g, b in bars.items():
        diff[b] = S(Y.differential[g]) * sign
    try:
        alg = SullivanAlgebra(all_gens, diff, name=f"F(S^{p},{Y.name or 'Y'})")
    except DifferentialError as exc:
        raise DifferentialError(f"doubled model fails d^2 = 0: {exc}") from exc
    S.algebra = alg
    if not alg.is_minimal():
        raise ArithmeticError("doubled model is not minimal")
    grading = {}
    if lower_grading:
        for g in Y.generators:
            k = lower_grading[g.name]
            grading[g.name] = k
            grading[bars[g].name] = k
    return SphereMappingModel(alg, Y, p, S, {g.name: b.name for g, b in bars.items()}, grading)


def sphere_model_maps(model):
    """Inclusion ΛZ → Λ(Z⊕Z̄) and the projection killing Z̄.

    These are the Sullivan-side duals of the evaluation maps (section and
    projection) of the mapping-space Lie model; the projection composed with
    the inclusion is the identity of ΛZ.
    """
    Y, F = model.source, model.algebra
    inc = CDGAMorphism(Y, F, {g.name: F.gen(g.name) for g in Y.generators}, name="inclusion")
    proj = CDGAMorphism(F, Y, {g.name: Y.gen(g.name) for g in Y.generators}, name="projection")
    return inc, proj
