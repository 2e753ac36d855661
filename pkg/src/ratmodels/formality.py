"""Minimal and bigraded models, and bounded-degree formality analysis.

Every certificate produced here is re-verified by linear algebra before it
is returned; a formality statement always carries its degree bound.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from . import linalg
from .cdga import (CDGAMorphism, CohomologyAlgebra, Element, FiniteCDGA, Generator,
                   SullivanAlgebra, check_morphism)
from .exceptions import (ModelError, NonHomogeneousInput, NotAMorphism, NotARetract,
                         NotSimplyConnected)

CERTIFIED_FORMAL = "CERTIFIED_FORMAL"
CERTIFIED_NONFORMAL = "CERTIFIED_NONFORMAL"
INCONCLUSIVE = "INCONCLUSIVE"

DEFAULT_BACKTRACK_CAP = 64


class MasseyUndefined(ModelError):
    """The triple Massey product is not defined (a product is nonzero in cohomology)."""


class WitnessNotFound(LookupError):
    pass


# -- minimal models ---------------------------------------------------------

@dataclass
class MinimalModel:
    algebra: SullivanAlgebra
    morphism: CDGAMorphism
    max_degree: int


def _unit(j, n):
    return [Fraction(int(i == j)) for i in range(n)]


def _single_generator_name(e):
    if len(e.terms) == 1:
        (m, c), = e.terms.items()
        if c == 1 and len(m) == 1 and m[0][1] == 1:
            return m[0][0].name
    return None


def _fresh(prefix, n, used):
    k = 1
    while f"{prefix}{n}_{k}" in used:
        k += 1
    return f"{prefix}{n}_{k}"


def minimal_model(A, max_degree):
    """Minimal Sullivan model ``m: ΛV → A`` with H(m) iso through ``max_degree``.

    Built degree by degree: closed generators fill the cokernel of H^n(m),
    then generators of degree n kill the kernel of H^{n+1}(m).  Generators
    of degree ``max_degree`` are closed; killers stop one degree below.
    """
    if A.cohomology(0).dimension != 1:
        raise ModelError("H^0 must be one-dimensional")
    if A.cohomology(1).dimension:
        raise NotSimplyConnected("H^1 != 0")
    gens, diff, images = [], {}, {}
    used = set()

    def current():
        M = SullivanAlgebra(gens, diff, check=False)
        return M, CDGAMorphism(M, A, {g.name: images[g] for g in gens})

    for n in range(2, max_degree + 1):
        M, m = current()
        HA = A.cohomology(n)
        span = linalg.EchelonSpan(HA.dimension,
                                  [HA.classify(m(r)) for r in M.cohomology(n).representatives])
        for j in range(HA.dimension):
            u = _unit(j, HA.dimension)
            if span.add(u):
                rep = HA.representatives[j]
                name = _single_generator_name(rep)
                if name is None or name in used:
                    name = _fresh("v", n, used)
                used.add(name)
                g = Generator(name, n)
                gens.append(g)
                images[g] = rep
        if n == max_degree:
            break
        M, m = current()
        HM = M.cohomology(n + 1)
        if not HM.dimension:
            continue
        HA1 = A.cohomology(n + 1)
        cols = [HA1.classify(m(r)) for r in HM.representatives]
        mat = linalg.transpose(cols, HA1.dimension) if HA1.dimension else \
            [[Fraction(0)] * HM.dimension]
        for kv in linalg.kernel_basis(mat, HM.dimension):
            z = HM.element_of(kv)
            target = A.vector(m(z), n + 1)
            if not any(target):
                pre = [Fraction(0)] * A.dim(n)
            else:
                pre = linalg.solve(A.d_matrix(n), target) if A.dim(n) else None
            if pre is None:
                raise ArithmeticError("kernel class of H(m) is not a boundary in A")
            name = _fresh("w", n, used)
            used.add(name)
            g = Generator(name, n)
            gens.append(g)
            diff[g] = z
            images[g] = A.element(pre, n)
    M = SullivanAlgebra(gens, diff, name=f"min({A.name or ''})")
    m = CDGAMorphism(M, A, {g.name: images[g] for g in gens}, name="m")
    report = check_morphism(m, max_degree)
    if not report.is_quasi_isomorphism():
        raise ArithmeticError("minimal model map is not a quasi-isomorphism")
    if not M.is_minimal():
        raise ArithmeticError("constructed model is not minimal")
    return MinimalModel(M, m, max_degree)


# -- bigraded models --------------------------------------------------------

def lower_degree(m, grading):
    return sum(grading[g.name] * e for g, e in m)


@dataclass
class BigradedModel:
    """Sullivan algebra with a lower grading on generators, and ρ: ΛZ → (H, 0)."""
    algebra: SullivanAlgebra
    lower: dict                         # generator name -> k
    rho: CDGAMorphism = None
    max_degree: int = None

    def generators_in(self, k):
        return [g for g in self.algebra.generators if self.lower[g.name] == k]

    def check_grading(self):
        """Every d(z) with z in Z_k lies in (ΛZ)_{k-1}; Z_0 is closed."""
        for g in self.algebra.generators:
            k = self.lower[g.name]
            dz = self.algebra.differential[g]
            if k == 0 and dz:
                return False
            if any(lower_degree(m, self.lower) != k - 1 for m in dz.terms):
                return False
        return True


def bigraded_model(H, max_degree):
    """Halperin–Stasheff bigraded model of a zero-differential algebra ``H``."""
    for n in range(H.top_degree + 1 if isinstance(H, FiniteCDGA) else max_degree + 1):
        for b in H.basis(n):
            if H.d(Element.monomial(b)):
                raise ModelError("bigraded_model requires zero differential")
    if H.dim(1):
        raise NotSimplyConnected("H^1 != 0")
    gens, diff, images, lower = [], {}, {}, {}
    used = set()

    def current():
        M = SullivanAlgebra(gens, diff, check=False)
        return M, CDGAMorphism(M, H, {g.name: images[g] for g in gens})

    def split(M, n):
        parts = {}
        for i, mono in enumerate(M.basis(n)):
            parts.setdefault(lower_degree(mono, lower), []).append(i)
        return parts

    for n in range(2, max_degree + 1):
        M, rho = current()
        span = linalg.EchelonSpan(H.dim(n))
        z0 = split(M, n).get(0, [])
        for i in z0:
            span.add(H.vector(rho(Element.monomial(M.basis(n)[i])), n))
        for j, b in enumerate(H.basis(n)):
            if span.add(_unit(j, H.dim(n))):
                name = b[0][0].name if len(b) == 1 and b[0][1] == 1 else None
                if name is None or name in used:
                    name = _fresh("z", n, used)
                used.add(name)
                g = Generator(name, n)
                gens.append(g)
                images[g] = Element.monomial(b)
                lower[name] = 0
        M, rho = current()
        top = split(M, n + 1)
        low = split(M, n)
        dmat = M.d_matrix(n)
        basis_top = M.basis(n + 1)
        for k in sorted(top):
            idx = top[k]
            sub_basis = [basis_top[i] for i in idx]
            if k == 0:
                cols = [H.vector(rho(Element.monomial(mono)), n + 1) for mono in sub_basis]
            else:
                cols = [M.vector(M.d(Element.monomial(mono)), n + 2) for mono in sub_basis]
            rows = len(cols[0]) if cols else 0
            mat = linalg.transpose(cols, rows) if rows else [[Fraction(0)] * len(idx)]
            cycles = linalg.kernel_basis(mat, len(idx))
            if not cycles:
                continue
            bnd = []
            for j in low.get(k + 1, []):
                col = [dmat[i][j] for i in idx]
                bnd.append(col)
            bspan = linalg.EchelonSpan(len(idx), bnd)
            full = linalg.EchelonSpan(len(idx), bspan.rows)
            for zv in cycles:
                if full.add(zv):
                    rv = bspan.reduce(zv)
                    z = Element({mono: c for mono, c in zip(sub_basis, rv) if c})
                    name = _fresh("z", n, used)
                    used.add(name)
                    g = Generator(name, n)
                    gens.append(g)
                    diff[g] = z
                    images[g] = Element()
                    lower[name] = k + 1
    M = SullivanAlgebra(gens, diff, name=f"bigraded({H.name or ''})")
    rho = CDGAMorphism(M, H, {g.name: images[g] for g in gens}, name="rho")
    B = BigradedModel(M, lower, rho, max_degree)
    if not B.check_grading():
        raise ArithmeticError("bigrading law violated")
    if not check_morphism(rho, max_degree).is_quasi_isomorphism():
        raise ArithmeticError("rho is not a quasi-isomorphism up to the bound")
    return B


# -- verdicts ---------------------------------------------------------------

@dataclass
class FormalityVerdict:
    status: str
    max_degree: int
    method: str = None
    witness: CDGAMorphism = None        # ψ: model → (H, 0)
    cohomology: object = None           # target of ψ
    massey: object = None
    model_map: CDGAMorphism = None      # m: minimal model → input
    notes: list = field(default_factory=list)
    verified: bool = False

    def __str__(self):
        return f"{self.status}(max_degree={self.max_degree}, method={self.method})"


@dataclass
class NotApplicable:
    reason: str
    witness: object = None

    def __bool__(self):
        return False


# -- regular sequences and the Koszul route ---------------------------------

@dataclass
class RegularityVerdict:
    status: str                  # REGULAR_UP_TO_BOUND or NOT_REGULAR
    max_degree: int
    index: int = None            # position of the first zero divisor
    witness: Element = None      # g != 0 in R/(f_0..f_{i-1}) with g·f_i = 0
    witness_degree: int = None

    @property
    def regular(self):
        return self.status == "REGULAR_UP_TO_BOUND"


def polynomial_ring(polys, ring=None):
    gens = set(ring or ())
    for f in polys:
        gens |= f.generators()
    for g in gens:
        if g.odd:
            raise NonHomogeneousInput(f"generator {g.name} is odd; polynomials must be in even generators")
    return SullivanAlgebra(sorted(gens, key=lambda g: g.key), name="Q[E]")


def regular_sequence_check(polys, max_degree, ring=None):
    """Check degreewise that each f_{i+1} is a non-zerodivisor modulo (f_1..f_i)."""
    degs = []
    for f in polys:
        if not f.is_homogeneous() or f.is_zero():
            raise NonHomogeneousInput(f"{f} is not a nonzero homogeneous polynomial")
        d = f.degree()
        if d <= 0:
            raise NonHomogeneousInput(f"{f} has non-positive degree")
        degs.append(d)
    R = polynomial_ring(polys, ring)
    for i, f in enumerate(polys):
        Q = FiniteCDGA.from_relations(R, polys[:i], max_degree, truncated=True)
        k = degs[i]
        for n in range(0, max_degree - k + 1):
            if not Q.dim(n):
                continue
            cols = [Q.vector(Q.mul(Element.monomial(b), f), n + k) for b in Q.basis(n)]
            rows = Q.dim(n + k)
            mat = linalg.transpose(cols, rows) if rows else [[Fraction(0)] * len(cols)]
            ker = linalg.kernel_basis(mat, len(cols))
            if ker:
                return RegularityVerdict("NOT_REGULAR", max_degree, i, Q.element(ker[0], n), n)
    return RegularityVerdict("REGULAR_UP_TO_BOUND", max_degree)


def koszul_formality(alg, max_degree):
    """Certify formality when d(even) = 0 and the odd differentials form a regular sequence."""
    if not isinstance(alg, SullivanAlgebra):
        return NotApplicable("not a Sullivan algebra")
    evens = [g for g in alg.generators if not g.odd]
    odds = [g for g in alg.generators if g.odd]
    for g in evens:
        if alg.differential[g]:
            return NotApplicable(f"even generator {g.name} is not closed")
    for g in odds:
        if any(h.odd for h in alg.differential[g].generators()):
            return NotApplicable(f"d({g.name}) is not a polynomial in even generators")
    active = [g for g in odds if alg.differential[g]]
    passive = [g for g in odds if not alg.differential[g]]
    polys = [alg.differential[g] for g in active]
    reg = regular_sequence_check(polys, max_degree, ring=evens) if polys else \
        RegularityVerdict("REGULAR_UP_TO_BOUND", max_degree)
    if not reg.regular:
        return NotApplicable("odd differentials do not form a regular sequence", reg)
    free = SullivanAlgebra(evens + passive, name="Q[E]⊗Λ(O0)")
    target = FiniteCDGA.from_relations(free, polys, max_degree,
                                       name="Q[E]/(dO)", truncated=True)
    images = {g.name: Element.gen(g) for g in evens + passive}
    psi = CDGAMorphism(alg, target, images, name="psi")
    report = check_morphism(psi, max_degree)
    if not report.is_quasi_isomorphism():
        raise ArithmeticError("Koszul quotient map is not a quasi-isomorphism")
    return FormalityVerdict(CERTIFIED_FORMAL, max_degree, "koszul", psi, target,
                            notes=["odd differentials form a regular sequence"], verified=True)


# -- Massey products --------------------------------------------------------

@dataclass
class MasseySystem:
    a: Element
    b: Element
    c: Element
    u: Element                   # du = ab
    v: Element                   # dv = bc
    value: Element               # u c - (-1)^{|a|} a v
    degree: int
    value_class: list
    indeterminacy: list          # basis vectors of [a]H + H[c] in H^degree
    avoids_zero: bool

    def __str__(self):
        return (f"<{self.a}, {self.b}, {self.c}> ∋ [{self.value}]  "
                f"(indeterminacy dim {len(self.indeterminacy)}, "
                f"{'nonzero' if self.avoids_zero else 'contains 0'})")


def _bounding(alg, e):
    n = e.degree()
    if n is None:
        return Element()
    x = linalg.solve(alg.d_matrix(n - 1), alg.vector(e, n)) if alg.dim(n - 1) else None
    if x is None:
        return None
    return alg.element(x, n - 1)


def massey_triple(alg, a, b, c, max_degree=None):
    """Triple Massey product ⟨a, b, c⟩ of closed homogeneous elements."""
    for e in (a, b, c):
        if e.is_zero() or not alg.is_cocycle(e):
            raise ModelError(f"{e} is not a nonzero cocycle")
    da, db, dc = a.degree(), b.degree(), c.degree()
    N = da + db + dc - 1
    if max_degree is not None and N > max_degree:
        raise ValueError(f"Massey product lands in degree {N} > {max_degree}")
    u = _bounding(alg, alg.mul(a, b))
    v = _bounding(alg, alg.mul(b, c))
    if u is None or v is None:
        raise MasseyUndefined("[a][b] or [b][c] is nonzero")
    sign = -1 if da % 2 else 1
    value = alg.mul(u, c) - alg.mul(a, v) * sign
    H = alg.cohomology(N)
    cls = H.classify(value)
    ind = linalg.EchelonSpan(H.dimension)
    for h in alg.cohomology(da + db - 1).representatives:
        ind.add(H.classify(alg.mul(h, c)))
    for h in alg.cohomology(db + dc - 1).representatives:
        ind.add(H.classify(alg.mul(a, h)))
    return MasseySystem(a, b, c, u, v, value, N, cls, list(ind.rows), not ind.contains(cls))


def massey_search(alg, max_degree):
    """First nonvanishing triple Massey product among cohomology basis classes."""
    reps = [(n, r) for n in range(1, max_degree + 1)
            for r in alg.cohomology(n).representatives]
    for (na, a), (nb, b), (nc, c) in iproduct(reps, repeat=3):
        if na + nb + nc - 1 > max_degree:
            continue
        try:
            ms = massey_triple(alg, a, b, c, max_degree)
        except MasseyUndefined:
            continue
        if ms.avoids_zero:
            return ms
    return None


# -- the ψ search -----------------------------------------------------------

def _coefficient_tuples(k):
    """Integer coefficient vectors of length k in order of increasing size."""
    if k == 0:
        yield ()
        return
    size = 0
    while True:
        vals = sorted(range(-size, size + 1), key=lambda x: (abs(x), -x))
        for t in iproduct(vals, repeat=k):
            if max(abs(x) for x in t) == size:
                yield t
        size += 1


class _PsiSearch:
    def __init__(self, M, CA, max_degree, cap):
        self.M = M
        self.CA = CA
        self.P = CA.algebra
        self.max_degree = max_degree
        self.cap = cap
        self.branches = 0
        gens = [g for g in M.generators if g.degree <= max_degree]
        self.degrees = sorted({g.degree for g in gens})
        self.by_degree = {n: [g for g in gens if g.degree == n] for n in self.degrees}
        self.images = {}

    def run(self):
        return self._solve(0)

    def _candidates(self, n):
        M, P, CA = self.M, self.P, self.CA
        gens = self.by_degree[n]
        h = P.dim(n)
        H = M.cohomology(n)
        if h == 0:
            yield {g: Element() for g in gens}
            return
        C = CA.class_matrix(n)
        nvar = len(gens) * h
        rows, rhs = [], []
        partial = CDGAMorphism(M, P, {g.name: v for g, v in self.images.items()})
        for j, rep in enumerate(H.representatives):
            lin = {g: rep.coefficient(((g, 1),)) for g in gens}
            rest = Element({mono: c for mono, c in rep.terms.items()
                            if not (len(mono) == 1 and mono[0][0] in lin and mono[0][1] == 1)})
            known = CA.classify(partial(rest), n) if rest else [Fraction(0)] * h
            target = [Fraction(int(i == j)) - known[i] for i in range(H.dimension)]
            for i in range(H.dimension):
                row = [Fraction(0)] * nvar
                for gi, g in enumerate(gens):
                    if lin[g]:
                        for t in range(h):
                            row[gi * h + t] = lin[g] * C[i][t]
                rows.append(row)
                rhs.append(target[i])
        if rows:
            x0 = linalg.solve(rows, rhs)
            if x0 is None:
                return
            kern = linalg.kernel_basis(rows, nvar)
        else:
            x0 = [Fraction(0)] * nvar
            kern = [_unit(j, nvar) for j in range(nvar)]
        for coeffs in _coefficient_tuples(len(kern)):
            x = list(x0)
            for c, kv in zip(coeffs, kern):
                if c:
                    x = [xi + c * ki for xi, ki in zip(x, kv)]
            yield {g: P.element(x[gi * h:(gi + 1) * h], n) for gi, g in enumerate(gens)}
            if not kern:
                return

    def _consistent(self, n):
        # ψ(dv) = 0 for every assigned v whose differential only involves assigned generators
        P = self.P
        psi = CDGAMorphism(self.M, P, {g.name: v for g, v in self.images.items()})
        assigned = set(self.images)
        for g in assigned:
            dv = self.M.differential[g]
            if dv.generators() <= assigned and psi(dv):
                return False
        return True

    def _identity_on_cohomology(self, lo, hi):
        # classes in degrees lo..hi only involve generators assigned so far
        psi = CDGAMorphism(self.M, self.P, {g.name: v for g, v in self.images.items()})
        for n in range(lo, hi + 1):
            H = self.M.cohomology(n)
            for j, r in enumerate(H.representatives):
                if self.CA.classify(psi(r), n) != _unit(j, H.dimension):
                    return False
        return True

    def _solve(self, i):
        if i == len(self.degrees):
            return True
        n = self.degrees[i]
        first = True
        for cand in self._candidates(n):
            if not first:
                self.branches += 1
                if self.branches > self.cap:
                    return None
            first = False
            self.images.update(cand)
            hi = self.degrees[i + 1] - 1 if i + 1 < len(self.degrees) else self.max_degree
            if self._consistent(n) and self._identity_on_cohomology(n, hi):
                res = self._solve(i + 1)
                if res:
                    return True
                if res is None:
                    return None
            for g in cand:
                del self.images[g]
        return False


def formality_check(A, max_degree, backtrack_cap=DEFAULT_BACKTRACK_CAP, use_koszul=True):
    """Bounded-degree formality analysis of a Sullivan algebra or finite CDGA."""
    notes = []
    if use_koszul and isinstance(A, SullivanAlgebra):
        kv = koszul_formality(A, max_degree)
        if kv:
            return kv
        notes.append(f"koszul route not applicable: {kv.reason}")
    if isinstance(A, SullivanAlgebra) and A.is_minimal():
        M, m = A, CDGAMorphism.identity(A)
    else:
        try:
            mm = minimal_model(A, max_degree)
        except NotSimplyConnected as exc:
            return FormalityVerdict(INCONCLUSIVE, max_degree, None, notes=notes + [str(exc)])
        M, m = mm.algebra, mm.morphism
    CA = CohomologyAlgebra(M, max_degree)
    search = _PsiSearch(M, CA, max_degree, backtrack_cap)
    found = search.run()
    if found:
        psi = CDGAMorphism(M, CA.algebra, {g.name: v for g, v in search.images.items()}, name="psi")
        verify_psi(psi, CA, max_degree)
        return FormalityVerdict(CERTIFIED_FORMAL, max_degree, "psi-search", psi, CA.algebra,
                                model_map=m,
                                notes=notes + [f"{search.branches} alternative branches explored"],
                                verified=True)
    if found is None:
        notes.append(f"psi search exceeded backtrack cap {backtrack_cap}")
    else:
        notes.append("no psi with H(psi) = id exists along the explored choices")
    ms = massey_search(M, max_degree)
    if ms is not None:
        return FormalityVerdict(CERTIFIED_NONFORMAL, max_degree, "massey", massey=ms,
                                model_map=m, notes=notes, verified=ms.avoids_zero)
    notes.append("no nonvanishing triple Massey product up to the bound")
    return FormalityVerdict(INCONCLUSIVE, max_degree, None, notes=notes)


def verify_psi(psi, CA, max_degree):
    """Morphism axioms plus H(ψ) = id (through the presentation of H) in every degree."""
    check_morphism(psi, max_degree)
    for n in range(max_degree + 1):
        H = psi.source.cohomology(n)
        for j, r in enumerate(H.representatives):
            if CA.classify(psi(r), n) != _unit(j, H.dimension):
                raise NotAMorphism(f"H(psi) differs from the identity in degree {n}")
    return True


# -- power witnesses dw' = w^n + Ω ----------------------------------------

@dataclass
class PowerWitness:
    w_prime: Element
    n: int
    omega: Element


def lemma37_witness(B, w, search_degree):
    """Find w' with dw' = w^n + Ω, Ω decomposable without a w^n component."""
    alg = B.algebra
    g = alg.generator(w) if isinstance(w, str) else w
    if g.odd:
        raise ValueError(f"{g.name} is odd; the search needs an even generator")
    if B.lower[g.name] < 1:
        raise ValueError(f"{g.name} has lower grading 0")
    n = 2
    while n * g.degree - 1 <= search_degree:
        power = ((g, n),)
        for cand in alg.generators:
            if cand.degree != n * g.degree - 1:
                continue
            c = alg.differential[cand].coefficient(power)
            if c:
                wp = Element.gen(cand) * (1 / c)
                omega = alg.d(wp) - Element.monomial(power)
                return PowerWitness(wp, n, omega)
        n += 1
    raise WitnessNotFound(f"no witness for {g.name} up to degree {search_degree} "
                          "(existence is only guaranteed in the untruncated model)")


# -- retract transfer -------------------------------------------------------

@dataclass
class RetractReport:
    b_verdict: FormalityVerdict
    a_verdict: FormalityVerdict = None
    conclusion: str = ""


def retract_transfer_check(f, g, max_degree, backtrack_cap=DEFAULT_BACKTRACK_CAP):
    """Check that formality passes from B to A along f: A → B, g: B → A with g∘f = id."""
    A = f.source
    gf = g.compose(f)
    for gen in A.generators:
        if gf.images[gen] != A.normal_form(Element.gen(gen)):
            raise NotARetract(f"g∘f({gen.name}) = {gf.images[gen]}")
    check_morphism(f, max_degree)
    check_morphism(g, max_degree)
    if A.cohomology(1).dimension:
        raise NotSimplyConnected("H^1(A) != 0")
    vb = formality_check(f.target, max_degree, backtrack_cap)
    rep = RetractReport(vb)
    if vb.status != CERTIFIED_FORMAL:
        rep.conclusion = "B not certified formal; nothing to transfer"
        return rep
    va = formality_check(A, max_degree, backtrack_cap)
    rep.a_verdict = va
    if va.status == CERTIFIED_FORMAL:
        rep.conclusion = "confirmed: A formal up to the bound"
    elif va.status == CERTIFIED_NONFORMAL:
        rep.conclusion = "CONTRADICTION: A certified non-formal although B is formal"
    else:
        rep.conclusion = "unconfirmed at this bound (A inconclusive)"
    return rep
