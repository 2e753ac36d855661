"""Free graded-commutative algebras, Sullivan algebras and their quotients.

Elements are sparse rational combinations of monomials.  A monomial is a
tuple of ``(Generator, exponent)`` pairs sorted by ``(degree, name)``; the
empty tuple is the unit.  Odd generators appear with exponent 1 only.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .exceptions import (DifferentialError, ModelError, NotAMorphism,
                         TopDegreeNotFound)


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    @property
    def key(self):
        return (self.degree, self.name)

    @property
    def odd(self):
        return self.degree % 2 == 1

    def __lt__(self, other):
        return self.key < other.key


ONE = ()


def monomial_degree(m):
    return sum(g.degree * e for g, e in m)


def monomial_str(m):
    if not m:
        return "1"
    return "*".join(g.name if e == 1 else f"{g.name}^{e}" for g, e in m)


def monomial_mul(m1, m2):
    """Product of two monomials as ``(sign, monomial)``; sign 0 means zero."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    # Koszul sign: each odd factor of m2 passes the odd factors of m1 that sort after it
    odd1 = [g.key for g, _ in m1 if g.odd]
    sign = 1
    if odd1:
        for g, _ in m2:
            if g.odd:
                k = g.key
                for k1 in odd1:
                    if k1 == k:
                        return 0, None
                    if k1 > k:
                        sign = -sign
    merged = dict(m1)
    for g, e in m2:
        merged[g] = merged.get(g, 0) + e
    return sign, tuple(sorted(merged.items(), key=lambda ge: ge[0].key))


def _frac(c):
    return c if isinstance(c, Fraction) else Fraction(c)


class Element:
    """Immutable rational combination of monomials in canonical form."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _frac(c)
                if c:
                    clean[m] = c
        self.terms = dict(sorted(clean.items(), key=lambda mc: _mono_sort_key(mc[0])))
        self._hash = None

    @classmethod
    def gen(cls, g):
        return cls({((g, 1),): 1})

    @classmethod
    def scalar(cls, c):
        return cls({ONE: c})

    @classmethod
    def monomial(cls, m, c=1):
        return cls({m: c})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self):
        return {monomial_degree(m) for m in self.terms}

    def degree(self):
        """Degree of a nonzero homogeneous element (None for zero)."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element {self}")
        return degs.pop()

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def homogeneous_parts(self):
        parts = {}
        for m, c in self.terms.items():
            parts.setdefault(monomial_degree(m), {})[m] = c
        return {n: Element(t) for n, t in sorted(parts.items())}

    def coefficient(self, m):
        return self.terms.get(m, Fraction(0))

    def generators(self):
        return {g for m in self.terms for g, _ in m}

    def __add__(self, other):
        if not isinstance(other, Element):
            other = Element.scalar(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Element(t)

    __radd__ = __add__

    def __neg__(self):
        return Element({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Element):
            c = _frac(other)
            return Element({m: c * x for m, x in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                s, m = monomial_mul(m1, m2)
                if s:
                    out[m] = out.get(m, 0) + s * c1 * c2
        return Element(out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n):
        out = Element.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Element):
            if isinstance(other, (int, Fraction)):
                other = Element.scalar(other)
            else:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.terms.items():
            neg = c < 0
            a = -c if neg else c
            ms = monomial_str(m)
            if m == ONE:
                body = str(a)
            elif a == 1:
                body = ms
            else:
                body = f"{a}*{ms}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Element({self})"


def _mono_sort_key(m):
    # degree first, then lexicographic on (generator key, -exponent)
    return (monomial_degree(m), tuple((g.key, -e) for g, e in m))


def as_generators(gens):
    out = []
    for g in gens:
        if not isinstance(g, Generator):
            g = Generator(*g)
        out.append(g)
    return out


class GradedAlgebra:
    """Shared degreewise linear algebra for Sullivan algebras and quotients.

    Subclasses provide ``basis(n)``, ``d(e)``, ``mul(a, b)`` and
    ``normal_form(e)``.
    """

    def _init_caches(self):
        self._index = {}
        self._coh = {}
        self._dmat = {}

    def basis_index(self, n):
        if n not in self._index:
            self._index[n] = {m: i for i, m in enumerate(self.basis(n))}
        return self._index[n]

    def dim(self, n):
        return len(self.basis(n))

    def vector(self, e, n):
        idx = self.basis_index(n)
        v = [Fraction(0)] * len(idx)
        for m, c in self.normal_form(e).terms.items():
            try:
                v[idx[m]] = c
            except KeyError:
                raise ValueError(f"{monomial_str(m)} is not a degree-{n} basis monomial") from None
        return v

    def element(self, vec, n):
        return Element({m: c for m, c in zip(self.basis(n), vec) if c})

    def d_matrix(self, n):
        """Matrix of d from degree n to degree n+1 (rows index degree n+1)."""
        if n not in self._dmat:
            cols = [self.vector(self.d(Element.monomial(m)), n + 1) for m in self.basis(n)]
            self._dmat[n] = linalg.transpose(cols, self.dim(n + 1)) if cols else \
                [[] for _ in range(self.dim(n + 1))]
        return self._dmat[n]

    def cohomology(self, n):
        if n not in self._coh:
            self._coh[n] = CohomologySpace(self, n)
        return self._coh[n]

    def is_cocycle(self, e):
        return self.d(e).is_zero()

    def unit(self):
        return Element.scalar(1)


class SullivanAlgebra(GradedAlgebra):
    """Free graded-commutative algebra with a differential given on generators.

    ``partial`` names generators whose differential is known to be truncated;
    the d^2 check skips them.
    """

    def __init__(self, generators, differential=None, name=None, partial=(), check=True):
        gens = sorted(as_generators(generators), key=lambda g: g.key)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ModelError(f"duplicate generator names in {names}")
        for g in gens:
            if g.degree < 1:
                raise ModelError(f"generator {g.name} has degree {g.degree} < 1")
        self.generators = tuple(gens)
        self.name = name
        self.partial = frozenset(partial)
        self._by_name = {g.name: g for g in gens}
        diff = {}
        for key, val in (differential or {}).items():
            g = self._by_name[key] if isinstance(key, str) else key
            if g not in self.generators:
                raise ModelError(f"differential given on unknown generator {g}")
            if not isinstance(val, Element):
                val = Element.scalar(val)
            unknown = val.generators() - set(self.generators)
            if unknown:
                raise ModelError(f"d({g.name}) uses unknown generators {sorted(x.name for x in unknown)}")
            if val and val.degrees() != {g.degree + 1}:
                raise DifferentialError(
                    f"d({g.name}) = {val} has degree {sorted(val.degrees())}, expected {g.degree + 1}")
            diff[g] = val
        self.differential = {g: diff.get(g, Element()) for g in self.generators}
        self._dmono = {}
        self._basis = {}
        self._init_caches()
        if check:
            for g in self.generators:
                if g.name in self.partial:
                    continue
                dd = self.d(self.differential[g])
                if dd:
                    raise DifferentialError(f"d^2({g.name}) = {dd} != 0")

    def __repr__(self):
        return f"SullivanAlgebra({self.name or ''}: {', '.join(f'{g.name}:{g.degree}' for g in self.generators)})"

    def gen(self, name):
        return Element.gen(self._by_name[name])

    def generator(self, name):
        return self._by_name[name]

    def gens(self):
        return [Element.gen(g) for g in self.generators]

    def dgen(self, name):
        return self.differential[self._by_name[name]]

    def normal_form(self, e):
        return e

    def mul(self, a, b):
        return a * b

    def d(self, e):
        out = {}
        for m, c in e.terms.items():
            for m2, c2 in self._d_monomial(m).terms.items():
                out[m2] = out.get(m2, 0) + c * c2
        return Element(out)

    def _d_monomial(self, m):
        if m in self._dmono:
            return self._dmono[m]
        if not m:
            res = Element()
        else:
            g, e = m[0]
            rest = ((g, e - 1),) + m[1:] if e > 1 else m[1:]
            # d(g * rest) = dg * rest + (-1)^|g| g * d(rest)
            res = self.differential[g] * Element.monomial(rest)
            drest = self._d_monomial(rest)
            if drest:
                t = Element.gen(g) * drest
                res = res + (t if g.degree % 2 == 0 else -t)
        self._dmono[m] = res
        return res

    def basis(self, n):
        """All monomials of degree n in a fixed deterministic order."""
        if n in self._basis:
            return self._basis[n]
        gens = self.generators
        out = []

        def rec(i, remaining, acc):
            if remaining == 0:
                out.append(tuple(acc))
                return
            if i == len(gens):
                return
            g = gens[i]
            emax = remaining // g.degree
            if g.odd:
                emax = min(emax, 1)
            for e in range(emax, -1, -1):
                if e:
                    acc.append((g, e))
                rec(i + 1, remaining - e * g.degree, acc)
                if e:
                    acc.pop()

        if n >= 0:
            rec(0, n, [])
        self._basis[n] = tuple(out)
        return self._basis[n]

    def is_minimal(self):
        return all(is_decomposable(self.differential[g]) for g in self.generators)

    def closed_generators(self):
        return [g for g in self.generators if not self.differential[g]]

    def sub_algebra(self, names, name=None):
        """Sub-Sullivan algebra on a d-stable set of generators."""
        keep = [self._by_name[n] for n in names]
        diff = {g: self.differential[g] for g in keep}
        return SullivanAlgebra(keep, diff, name=name)


def is_decomposable(e):
    """True when every monomial is a product of at least two generators."""
    return all(sum(ex for _, ex in m) >= 2 for m in e.terms)


def word_length(m):
    return sum(e for _, e in m)


class CohomologySpace:
    """Cohomology in a single degree with deterministic representatives."""

    def __init__(self, alg, n):
        self.algebra = alg
        self.degree = n
        dim_n = alg.dim(n)
        self.cocycles = linalg.kernel_basis(alg.d_matrix(n), dim_n) if dim_n else []
        prev = alg.basis(n - 1) if n >= 1 else ()
        images = [alg.vector(alg.d(Element.monomial(m)), n) for m in prev]
        self.boundaries = linalg.EchelonSpan(dim_n, images)
        full = linalg.EchelonSpan(dim_n, self.boundaries.rows)
        reps = []
        for z in self.cocycles:
            if full.add(z):
                reps.append(self.boundaries.reduce(z))
        self.rep_vectors = reps
        self.representatives = [alg.element(v, n) for v in reps]
        self.dimension = len(reps)

    def __len__(self):
        return self.dimension

    def __getitem__(self, i):
        return (self.dimension, self.representatives)[i]

    def __iter__(self):
        yield self.dimension
        yield self.representatives

    def classify(self, e):
        """Coordinates of the class of the cocycle ``e`` in the representative basis."""
        alg = self.algebra
        if e.is_zero():
            return [Fraction(0)] * self.dimension
        if e.degree() != self.degree:
            raise ValueError(f"{e} does not have degree {self.degree}")
        if not alg.is_cocycle(e):
            raise ValueError(f"{e} is not a cocycle")
        v = self.boundaries.reduce(alg.vector(e, self.degree))
        cols = self.boundaries.rows + self.rep_vectors
        coeffs = linalg.express(cols, v)
        if coeffs is None:
            raise ArithmeticError("cocycle not in span of boundaries and representatives")
        return coeffs[len(self.boundaries.rows):]

    def is_exact(self, e):
        return not any(self.classify(e))

    def element_of(self, coords):
        out = Element()
        for c, r in zip(coords, self.representatives):
            if c:
                out = out + r * c
        return out


def cohomology(alg, n):
    """Cohomology space ``H^n``; unpacks as ``(dimension, representatives)``."""
    return alg.cohomology(n)


def basis_in_degree(alg, n):
    return list(alg.basis(n))


def mul(a, b):
    return a * b


def apply_differential(alg, e):
    return alg.d(e)


def cohomology_dims(alg, max_degree):
    return [alg.cohomology(n).dimension for n in range(max_degree + 1)]


class FiniteCDGA(GradedAlgebra):
    """Quotient of a Sullivan algebra by a d-stable ideal, zero above ``top_degree``.

    The ideal is given degreewise as spans of coefficient vectors on the
    free algebra's monomial basis; the quotient basis in each degree is the
    set of non-pivot monomials.  ``truncated`` marks quotients where the
    vanishing above ``top_degree`` is an artificial cut rather than a
    property of the algebra being modelled.
    """

    def __init__(self, free, top_degree, ideal=None, name=None, truncated=False, check=True):
        self.free = free
        self.top_degree = top_degree
        self.name = name
        self.truncated = truncated
        self.generators = free.generators
        self._ideal = {}
        for n in range(top_degree + 1):
            vecs = (ideal or {}).get(n, [])
            self._ideal[n] = linalg.EchelonSpan(free.dim(n), vecs)
        self._qbasis = {}
        self._init_caches()
        if check:
            self._check_ideal()

    @classmethod
    def from_relations(cls, free, relations, top_degree, name=None, truncated=False):
        """Quotient by the ideal generated by homogeneous ``relations``."""
        rels = []
        for r in relations:
            if r.is_zero():
                continue
            rels.append((r, r.degree()))
        ideal = {}
        for n in range(top_degree + 1):
            vecs = []
            for r, k in rels:
                if k > n:
                    continue
                for m in free.basis(n - k):
                    vecs.append(free.vector(r * Element.monomial(m), n))
            ideal[n] = vecs
        return cls(free, top_degree, ideal, name=name, truncated=truncated)

    def __repr__(self):
        return f"FiniteCDGA({self.name or ''}: top {self.top_degree}, dims {self.dims()})"

    def _check_ideal(self):
        free = self.free
        for n in range(self.top_degree + 1):
            for row in self._ideal[n].rows:
                e = free.element(row, n)
                if self.normal_form(free.d(e)):
                    raise DifferentialError(f"ideal is not d-stable in degree {n}")
                for g in free.generators:
                    if n + g.degree <= self.top_degree and \
                            self.normal_form(e * Element.gen(g)):
                        raise ModelError(f"ideal not closed under multiplication in degree {n}")

    def ideal_basis(self, n):
        if n > self.top_degree:
            return [self.free.vector(Element.monomial(m), n) for m in self.free.basis(n)]
        return list(self._ideal[n].rows)

    def basis(self, n):
        if n in self._qbasis:
            return self._qbasis[n]
        if n < 0 or n > self.top_degree:
            out = ()
        else:
            piv = set(self._ideal[n].pivots)
            out = tuple(m for i, m in enumerate(self.free.basis(n)) if i not in piv)
        self._qbasis[n] = out
        return out

    def dims(self):
        return [self.dim(n) for n in range(self.top_degree + 1)]

    def total_dimension(self):
        return sum(self.dims())

    def normal_form(self, e):
        out = {}
        for n, part in e.homogeneous_parts().items():
            if n > self.top_degree:
                continue
            span = self._ideal[n]
            if not len(span):
                out.update(part.terms)
                continue
            v = span.reduce(self.free.vector(part, n))
            out.update({m: c for m, c in zip(self.free.basis(n), v) if c})
        return Element(out)

    def d(self, e):
        return self.normal_form(self.free.d(e))

    def mul(self, a, b):
        return self.normal_form(a * b)

    def gen(self, name):
        return self.normal_form(self.free.gen(name))

    def generator(self, name):
        return self.free.generator(name)

    def multiplication_table(self):
        """Products of basis monomials, keyed by pairs of monomials."""
        table = {}
        for i in range(self.top_degree + 1):
            for j in range(self.top_degree + 1 - i):
                for a in self.basis(i):
                    for b in self.basis(j):
                        table[(a, b)] = self.mul(Element.monomial(a), Element.monomial(b))
        return table

    def has_zero_differential(self):
        return all(not self.d(Element.monomial(m))
                   for n in range(self.top_degree + 1) for m in self.basis(n))


class CDGAMorphism:
    """Algebra map determined by images of the source's free generators.

    For a ``FiniteCDGA`` source the generators are those of the underlying
    free algebra; well-definedness on the ideal is part of ``check``.
    """

    def __init__(self, source, target, images, name=None):
        self.source = source
        self.target = target
        self.name = name
        imgs = {}
        for g in source.generators:
            val = images.get(g.name, images.get(g, None)) if isinstance(images, dict) else None
            if val is None:
                val = Element()
            imgs[g] = target.normal_form(val)
        self.images = imgs
        self._cache = {}

    @classmethod
    def identity(cls, alg):
        return cls(alg, alg, {g.name: Element.gen(g) for g in alg.generators}, name="id")

    def image_of(self, name):
        for g, v in self.images.items():
            if g.name == name:
                return v
        raise KeyError(name)

    def _mono(self, m):
        if m in self._cache:
            return self._cache[m]
        out = self.target.unit()
        for g, e in m:
            for _ in range(e):
                out = self.target.mul(out, self.images[g])
                if not out:
                    break
        self._cache[m] = out
        return out

    def __call__(self, e):
        out = {}
        for m, c in e.terms.items():
            for m2, c2 in self._mono(m).terms.items():
                out[m2] = out.get(m2, 0) + c * c2
        return Element(out)

    def compose(self, other):
        """``self ∘ other``."""
        return CDGAMorphism(other.source, self.target,
                            {g.name: self(v) for g, v in other.images.items()})

    def cohomology_matrix(self, n):
        hs = self.source.cohomology(n)
        ht = self.target.cohomology(n)
        cols = [ht.classify(self(r)) for r in hs.representatives]
        return linalg.transpose(cols, ht.dimension) if cols else [[] for _ in range(ht.dimension)]


@dataclass
class MorphismReport:
    valid: bool
    cohomology: list = field(default_factory=list)   # (degree, dim source, dim target, rank)

    def is_quasi_isomorphism(self):
        return all(s == t == r for _, s, t, r in self.cohomology)

    def rank(self, n):
        for deg, _, _, r in self.cohomology:
            if deg == n:
                return r
        raise KeyError(n)


def check_morphism(f, max_degree):
    """Verify ``f`` is a CDGA morphism and report its cohomology ranks.

    Raises ``NotAMorphism`` naming the first violated relation.
    """
    src, tgt = f.source, f.target
    for g, v in f.images.items():
        if v and v.degrees() != {g.degree}:
            raise NotAMorphism(f"image of {g.name} has degree {sorted(v.degrees())}, expected {g.degree}")
    for g in src.generators:
        lhs = f(src.d(Element.gen(g)))
        rhs = tgt.d(f.images[g])
        if lhs != rhs:
            raise NotAMorphism(f"f(d {g.name}) = {lhs} but d f({g.name}) = {rhs}")
    if isinstance(src, FiniteCDGA):
        free = src.free
        for n in range(max_degree + 1):
            for row in src.ideal_basis(n):
                r = free.element(row, n)
                img = f(r)
                if img:
                    raise NotAMorphism(f"relation {r} maps to {img} != 0")
    rows = []
    for n in range(max_degree + 1):
        m = f.cohomology_matrix(n)
        rows.append((n, src.cohomology(n).dimension, tgt.cohomology(n).dimension,
                     linalg.rank(m) if m and m[0] else 0))
    return MorphismReport(True, rows)


def finite_dimensional_model(alg, check_bound, top_degree=None):
    """Finite-dimensional quotient of ``alg`` by an acyclic differential ideal.

    The top cohomological degree p is detected when not given: H^n must
    vanish for p < n <= check_bound over a window at least as long as the
    largest generator degree.  Returns ``(A, projection)``.
    """
    if top_degree is None:
        dims = cohomology_dims(alg, check_bound)
        p = max(n for n, d in enumerate(dims) if d)
        window = max((g.degree for g in alg.generators), default=0)
        if check_bound - p < max(window, 1):
            raise TopDegreeNotFound(
                f"cohomology nonzero in degree {p}; no vanishing window of length "
                f"{window} below the bound {check_bound}")
    else:
        p = top_degree
        for n in range(p + 1, check_bound + 1):
            if alg.cohomology(n).dimension:
                raise TopDegreeNotFound(f"H^{n} != 0 above the stated top degree {p}")
    kernel = linalg.kernel_basis(alg.d_matrix(p), alg.dim(p)) if alg.dim(p) else []
    _, kpiv = linalg.rref(kernel) if kernel else ([], [])
    kpiv = set(kpiv)
    dimp = alg.dim(p)
    complement = [[Fraction(int(i == j)) for i in range(dimp)] for j in range(dimp) if j not in kpiv]
    A = FiniteCDGA(alg, p, {p: complement}, name=f"{alg.name or 'A'}/I")
    proj = CDGAMorphism(alg, A, {g.name: Element.gen(g) for g in alg.generators}, name="projection")
    report = check_morphism(proj, check_bound)
    if not report.is_quasi_isomorphism():
        raise ArithmeticError("finite model projection is not a quasi-isomorphism")
    return A, proj


@dataclass
class SphericalRetract:
    t: Generator
    sphere: SullivanAlgebra
    i: CDGAMorphism
    q: CDGAMorphism


def exterior_on(name, degree):
    return SullivanAlgebra([(name, degree)], name=f"Λ({name})")


def odd_spherical_retract(alg):
    """Retract of ``alg`` onto an exterior algebra on a closed odd generator.

    Returns None when no odd generator is closed.
    """
    if not alg.is_minimal():
        raise ModelError("odd_spherical_retract requires a minimal Sullivan algebra")
    t = next((g for g in alg.generators if g.odd and not alg.differential[g]), None)
    if t is None:
        return None
    sphere = exterior_on(t.name, t.degree)
    i = CDGAMorphism(sphere, alg, {t.name: Element.gen(t)}, name="i")
    q = CDGAMorphism(alg, sphere, {t.name: sphere.gen(t.name)}, name="q")
    check_morphism(i, t.degree)
    check_morphism(q, t.degree)
    qi = q.compose(i)
    if qi.images != CDGAMorphism.identity(sphere).images:
        raise ArithmeticError("q∘i is not the identity")
    return SphericalRetract(t, sphere, i, q)


def push_retract(ret, projection):
    """Transport a spherical retract along ``projection: ΛV → A``."""
    A = projection.target
    i = projection.compose(ret.i)
    q = CDGAMorphism(A, ret.sphere, {g.name: v for g, v in ret.q.images.items()}, name="q")
    check_morphism(q, A.top_degree + 1)
    if q.compose(i).images != CDGAMorphism.identity(ret.sphere).images:
        raise ArithmeticError("pushed retract fails q∘i = id")
    return SphericalRetract(ret.t, ret.sphere, i, q)


def free_dimension_series(gen_counts, max_degree):
    """Degreewise dimensions of the free graded-commutative algebra.

    ``gen_counts[n]`` is the number of generators in degree n.
    """
    series = [0] * (max_degree + 1)
    series[0] = 1
    for n, k in enumerate(gen_counts):
        if n == 0 or not k:
            continue
        for _ in range(k):
            if n % 2:
                for j in range(max_degree, n - 1, -1):
                    series[j] += series[j - n]
            else:
                for j in range(n, max_degree + 1):
                    series[j] += series[j - n]
    return series


@dataclass
class FreenessVerdict:
    status: str                 # FREE, NOT_FREE, FREE_UP_TO_BOUND
    degree: int = None          # first failing degree for NOT_FREE
    bound: int = None
    dims: list = None
    indecomposables: list = None
    free_dims: list = None

    def __str__(self):
        if self.status == "NOT_FREE":
            return f"NOT_FREE(degree {self.degree})"
        if self.status == "FREE_UP_TO_BOUND":
            return f"FREE_UP_TO_BOUND({self.bound})"
        return "FREE"


def indecomposable_dims(H, max_degree):
    counts = [0] * (max_degree + 1)
    for n in range(1, max_degree + 1):
        span = linalg.EchelonSpan(H.dim(n))
        for i in range(1, n):
            for a in H.basis(i):
                for b in H.basis(n - i):
                    prod = H.mul(Element.monomial(a), Element.monomial(b))
                    if prod:
                        span.add(H.vector(prod, n))
        counts[n] = H.dim(n) - len(span)
    return counts


def is_free_graded_commutative(H, max_degree):
    """Decide whether a zero-differential algebra is free graded-commutative.

    Compares the algebra's dimensions with those of the free algebra on its
    indecomposables, degree by degree.
    """
    if not H.has_zero_differential():
        raise ModelError("is_free_graded_commutative needs an algebra with zero differential")
    bound = max_degree
    if H.truncated:
        bound = min(bound, H.top_degree)
    dims = [H.dim(n) for n in range(bound + 1)]
    ind = indecomposable_dims(H, bound)
    free = free_dimension_series(ind, bound)
    for n in range(bound + 1):
        if free[n] != dims[n]:
            return FreenessVerdict("NOT_FREE", n, bound, dims, ind, free)
    finite_free = all(k == 0 for n, k in enumerate(ind) if n % 2 == 0)
    if not H.truncated and finite_free:
        top_free = sum(n * k for n, k in enumerate(ind))
        if top_free <= bound and H.top_degree <= bound:
            return FreenessVerdict("FREE", None, bound, dims, ind, free)
    return FreenessVerdict("FREE_UP_TO_BOUND", None, bound, dims, ind, free)


class CohomologyAlgebra:
    """Presentation of ``H^{<=max_degree}(alg)`` as a truncated quotient algebra.

    ``algebra`` is a ``FiniteCDGA`` with zero differential whose generators
    are cohomology generators of ``source``; ``reps`` maps each of them to a
    cocycle representative.  A generator whose representative is a single
    generator of ``source`` reuses that name.
    """

    def __init__(self, source, max_degree):
        self.source = source
        self.max_degree = max_degree
        gens = []
        reps = {}
        ideal = {}
        used = set()
        for n in range(1, max_degree + 1):
            H = source.cohomology(n)
            free = SullivanAlgebra(gens, check=False)
            cols = [H.classify(self._evaluate(m, free, reps)) for m in free.basis(n)]
            span = linalg.EchelonSpan(H.dimension, cols)
            for j in range(H.dimension):
                unit = [Fraction(int(i == j)) for i in range(H.dimension)]
                if span.contains(unit):
                    continue
                span.add(unit)
                rep = H.representatives[j]
                name = _rep_name(rep, n, used)
                used.add(name)
                g = Generator(name, n)
                gens.append(g)
                reps[g] = rep
            free = SullivanAlgebra(gens, check=False)
            cols = [H.classify(self._evaluate(m, free, reps)) for m in free.basis(n)]
            mat = linalg.transpose(cols, H.dimension) if cols else []
            ideal[n] = linalg.kernel_basis(mat, len(cols)) if cols else []
        self.free = SullivanAlgebra(gens, name=f"H({source.name or ''})")
        self.reps = reps
        self.algebra = FiniteCDGA(self.free, max_degree, ideal, name=f"H({source.name or ''})",
                                  truncated=True)
        self._to_class = {}

    def _evaluate(self, m, free, reps):
        out = self.source.unit()
        for g, e in m:
            for _ in range(e):
                out = self.source.mul(out, reps[g])
        return out

    def representative(self, e):
        """A cocycle of the source representing the element ``e`` of ``algebra``."""
        out = Element()
        for m, c in self.algebra.normal_form(e).terms.items():
            out = out + self._evaluate(m, self.free, self.reps) * c
        return out

    def class_matrix(self, n):
        """Matrix of the isomorphism ``algebra^n → H^n(source)``."""
        if n not in self._to_class:
            H = self.source.cohomology(n)
            cols = [H.classify(self.representative(Element.monomial(m))) for m in self.algebra.basis(n)]
            self._to_class[n] = linalg.transpose(cols, H.dimension) if cols else []
        return self._to_class[n]

    def classify(self, e, n):
        """Coordinates of ``e`` (in ``algebra``) as a class of ``H^n(source)``."""
        v = self.algebra.vector(e, n)
        m = self.class_matrix(n)
        return linalg.matvec(m, v) if m else []


def _rep_name(rep, n, used):
    if len(rep.terms) == 1:
        (m, c), = rep.terms.items()
        if c == 1 and len(m) == 1 and m[0][1] == 1 and m[0][0].name not in used:
            return m[0][0].name
    k = 1
    while f"h{n}_{k}" in used:
        k += 1
    return f"h{n}_{k}"


def cohomology_algebra(alg, max_degree):
    return CohomologyAlgebra(alg, max_degree)
