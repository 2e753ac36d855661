"""Free differential graded Lie algebras inside the tensor algebra.

Lie elements are stored as rational combinations of words in the
generators; the bracket is the graded commutator.  Everything that claims a
structural property (Jacobi, D^2 = 0, ...) does so only up to an explicit
degree bound.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from . import linalg
from .cdga import ONE, Element, FiniteCDGA, SullivanAlgebra, monomial_degree, monomial_str
from .exceptions import ConnectivityViolation, DifferentialError, ModelError, NotARetract


@dataclass(frozen=True)
class LieGenerator:
    name: str
    degree: int

    @property
    def key(self):
        return (self.degree, self.name)


def word_degree(w):
    return sum(g.degree for g in w)


def word_str(w):
    return "".join(f"({g.name})" if len(w) > 1 else g.name for g in w) if w else "1"


class LieElement:
    """Rational combination of tensor words, kept in canonical sorted form."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for w, c in terms.items():
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    clean[w] = c
        self.terms = dict(sorted(clean.items(), key=lambda wc: (len(wc[0]), [g.key for g in wc[0]])))

    @classmethod
    def gen(cls, g):
        return cls({(g,): 1})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degree(self):
        degs = {word_degree(w) for w in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("inhomogeneous Lie element")
        return degs.pop()

    def __add__(self, other):
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return LieElement(t)

    def __neg__(self):
        return LieElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Fraction(c)
        return LieElement({w: c * x for w, x in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def tensor(self, other):
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return LieElement(out)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms.items():
            ws = "⊗".join(g.name for g in w)
            s = ws if c == 1 else (f"-{ws}" if c == -1 else f"{c}*{ws}")
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"LieElement({self})"


def _word_bracket(w1, w2):
    s = -1 if (word_degree(w1) * word_degree(w2)) % 2 else 1
    return w1 + w2, w2 + w1, -s


def bracket(x, y):
    """Graded commutator ``x⊗y - (-1)^{|x||y|} y⊗x``, extended bilinearly over words."""
    out = {}
    for w1, c1 in x.terms.items():
        for w2, c2 in y.terms.items():
            a, b, s = _word_bracket(w1, w2)
            c = c1 * c2
            out[a] = out.get(a, 0) + c
            out[b] = out.get(b, 0) + s * c
    return LieElement(out)


class FreeDGL:
    """Free graded Lie algebra on generators of degree >= 1 with a boundary of degree -1."""

    def __init__(self, generators, boundary=None, name=None):
        gens = []
        for g in generators:
            if not isinstance(g, LieGenerator):
                g = LieGenerator(*g)
            if g.degree < 1:
                raise ModelError(f"Lie generator {g.name} has degree {g.degree} < 1")
            gens.append(g)
        gens.sort(key=lambda g: g.key)
        if len({g.name for g in gens}) != len(gens):
            raise ModelError("duplicate Lie generator names")
        self.generators = tuple(gens)
        self.name = name
        self._by_name = {g.name: g for g in gens}
        bd = {}
        for key, val in (boundary or {}).items():
            g = self._by_name[key] if isinstance(key, str) else key
            if val and val.degree() != g.degree - 1:
                raise DifferentialError(f"∂{g.name} has degree {val.degree()}, expected {g.degree - 1}")
            bd[g] = val
        self.boundary_map = {g: bd.get(g, LieElement()) for g in gens}
        self._words = {}
        self._basis = {}
        self._bvec = {}
        self._coord = {}
        self._seqs = {}
        for g in gens:
            dd = self.boundary(self.boundary_map[g])
            if dd:
                raise DifferentialError(f"∂²({g.name}) = {dd} != 0")

    def __repr__(self):
        return f"FreeDGL({', '.join(f'{g.name}:{g.degree}' for g in self.generators)})"

    def gen(self, name):
        return LieElement.gen(self._by_name[name])

    def generator(self, name):
        return self._by_name[name]

    def boundary(self, x):
        out = {}
        for w, c in x.terms.items():
            sign = 1
            for i, g in enumerate(w):
                dg = self.boundary_map[g]
                if dg:
                    for w2, c2 in dg.terms.items():
                        nw = w[:i] + w2 + w[i + 1:]
                        out[nw] = out.get(nw, 0) + sign * c * c2
                if g.degree % 2:
                    sign = -sign
        return LieElement(out)

    def is_minimal(self):
        return all(all(len(w) >= 2 for w in v.terms) for v in self.boundary_map.values())

    def words(self, n):
        """Tensor words of degree n, in a fixed order."""
        if n not in self._words:
            out = []

            def rec(rem, acc):
                if rem == 0:
                    if acc:
                        out.append(tuple(acc))
                    return
                for g in self.generators:
                    if g.degree <= rem:
                        acc.append(g)
                        rec(rem - g.degree, acc)
                        acc.pop()

            rec(n, [])
            self._words[n] = out
        return self._words[n]

    def word_vector(self, x, n):
        idx = {w: i for i, w in enumerate(self.words(n))}
        v = [Fraction(0)] * len(idx)
        for w, c in x.terms.items():
            v[idx[w]] = c
        return v

    def right_nested(self, seq):
        x = LieElement.gen(seq[-1])
        for g in reversed(seq[:-1]):
            x = bracket(LieElement.gen(g), x)
        return x

    def lie_basis(self, n):
        """Basis of L_n drawn from right-nested brackets ``[g1,[g2,[...,gk]]]``."""
        if n in self._basis:
            return self._basis[n]
        span = linalg.EchelonSpan(len(self.words(n)))
        basis, vecs, seqs = [], [], []
        for w in self.words(n):
            x = self.right_nested(w)
            if not x:
                continue
            v = self.word_vector(x, n)
            if span.add(v):
                basis.append(x)
                vecs.append(v)
                seqs.append(w)
        self._basis[n] = basis
        self._seqs[n] = seqs
        self._bvec[n] = vecs
        if vecs:
            _, piv = linalg.rref(vecs)
            sub = [[v[c] for c in piv] for v in vecs]
            self._coord[n] = (piv, _inverse(sub))
        else:
            self._coord[n] = ([], [])
        return basis

    def basis_sequences(self, n):
        """Generator sequences whose right-nested brackets form ``lie_basis(n)``."""
        self.lie_basis(n)
        return self._seqs[n]

    def dim(self, n):
        return len(self.lie_basis(n)) if n >= 1 else 0

    def coordinates(self, x, n, check=False):
        """Coordinates of ``x`` in ``lie_basis(n)``."""
        basis = self.lie_basis(n)
        if x.is_zero():
            return [Fraction(0)] * len(basis)
        piv, inv = self._coord[n]
        v = self.word_vector(x, n)
        # coords·B = v restricted to the pivot columns of B
        coords = [sum((v[c] * inv[r][j] for r, c in enumerate(piv) if v[c]), Fraction(0))
                  for j in range(len(basis))]
        if check and _combine(basis, coords) != x:
            raise ValueError(f"{x} is not in the free Lie algebra in degree {n}")
        return coords

    def boundary_matrix(self, n):
        """Matrix of ∂: L_n → L_{n-1} in the chosen bases."""
        cols = [self.coordinates(self.boundary(b), n - 1) for b in self.lie_basis(n)]
        return linalg.transpose(cols, self.dim(n - 1)) if cols else [[] for _ in range(self.dim(n - 1))]

    def homology(self, n):
        return LieHomology(self, n)


def lie_basis_in_degree(L, n):
    return list(L.lie_basis(n))


class LieHomology:
    """``H_n(L, ∂)`` with deterministic representatives."""

    def __init__(self, L, n):
        self.degree = n
        dn = L.dim(n)
        cycles = linalg.kernel_basis(L.boundary_matrix(n), dn) if dn else []
        above = L.boundary_matrix(n + 1)
        bnd = linalg.transpose(above, 0) if above and above[0] else []
        boundaries = linalg.EchelonSpan(dn, bnd)
        full = linalg.EchelonSpan(dn, boundaries.rows)
        reps = []
        for z in cycles:
            if full.add(z):
                reps.append(boundaries.reduce(z))
        basis = L.lie_basis(n)
        self.representatives = [_combine(basis, v) for v in reps]
        self.dimension = len(reps)

    def __iter__(self):
        yield self.dimension
        yield self.representatives


def homology(L, n):
    return L.homology(n)


def _inverse(m):
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    r, _ = linalg.rref(aug)
    return [row[n:] for row in r]


def _combine(basis, coeffs):
    out = LieElement()
    for c, b in zip(coeffs, basis):
        if c:
            out = out + b * c
    return out


def finite_degrees(A):
    """Degrees in which a finite-dimensional graded algebra may be nonzero."""
    if isinstance(A, FiniteCDGA):
        return range(A.top_degree + 1)
    if isinstance(A, SullivanAlgebra) and all(g.odd for g in A.generators):
        return range(sum(g.degree for g in A.generators) + 1)
    raise ModelError("the algebra factor must be finite-dimensional")


class MixedElement:
    """Element of A⊗L: rational combination of (A-monomial, tensor word) pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return MixedElement(t)

    def __neg__(self):
        return MixedElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return MixedElement({k: Fraction(c) * x for k, x in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, MixedElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree(self):
        degs = {word_degree(w) - monomial_degree(a) for a, w in self.terms}
        if len(degs) > 1:
            raise ValueError("inhomogeneous element of A⊗L")
        return degs.pop() if degs else None

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{monomial_str(a)}⊗{'⊗'.join(g.name for g in w)}"
                          for (a, w), c in sorted(self.terms.items(), key=str))

    __repr__ = __str__


def tensor(a, x):
    """``a ⊗ x`` for an algebra element ``a`` and a Lie element ``x``."""
    out = {}
    for m, c in a.terms.items():
        for w, c2 in x.terms.items():
            out[(m, w)] = out.get((m, w), 0) + c * c2
    return MixedElement(out)


class TensorLieModel:
    """The DGL (A⊗L, D) of a finite CDGA A and a free DGL L.

    Grading ``|a⊗l| = |l| - |a|``; bracket
    ``[a⊗l, a'⊗l'] = (-1)^{|a'||l|} aa'⊗[l,l']``; differential
    ``D(a⊗l) = dA(a)⊗l + (-1)^{|a|} a⊗∂l``.
    """

    def __init__(self, A, L, check_connectivity=True):
        self.A = A
        self.L = L
        self.a_degrees = list(finite_degrees(A))
        self._basis = {}
        if check_connectivity:
            for i in self.a_degrees:
                if not A.dim(i):
                    continue
                for j in range(1, i + 1):
                    if L.dim(j):
                        raise ConnectivityViolation(
                            f"A^{i}⊗L_{j} is nonzero in degree {j - i} <= 0")

    def element(self, a, x):
        return tensor(self.A.normal_form(a), x)

    def bracket(self, x, y):
        A = self.A
        out = {}
        for (a1, w1), c1 in x.terms.items():
            l1 = word_degree(w1)
            for (a2, w2), c2 in y.terms.items():
                s = -1 if (monomial_degree(a2) * l1) % 2 else 1
                prod = A.mul(Element.monomial(a1), Element.monomial(a2))
                if not prod:
                    continue
                p, q, t = _word_bracket(w1, w2)
                for m, cm in prod.terms.items():
                    c = s * c1 * c2 * cm
                    out[(m, p)] = out.get((m, p), 0) + c
                    out[(m, q)] = out.get((m, q), 0) + t * c
        return MixedElement(out)

    def D(self, x):
        A, L = self.A, self.L
        out = {}
        for (a, w), c in x.terms.items():
            da = A.d(Element.monomial(a))
            for m, cm in da.terms.items():
                out[(m, w)] = out.get((m, w), 0) + c * cm
            s = -1 if monomial_degree(a) % 2 else 1
            dl = L.boundary(LieElement({w: 1}))
            for w2, cw in dl.terms.items():
                out[(a, w2)] = out.get((a, w2), 0) + s * c * cw
        return MixedElement(out)

    def basis(self, n):
        if n not in self._basis:
            out = []
            for i in self.a_degrees:
                for a in self.A.basis(i):
                    for b in self.L.lie_basis(n + i) if n + i >= 1 else []:
                        out.append(tensor(Element.monomial(a), b))
            self._basis[n] = out
        return self._basis[n]

    def dim(self, n):
        return len(self.basis(n))

    def coordinates(self, x, n):
        """Coordinates of ``x`` in ``basis(n)``."""
        parts = {}
        for (a, w), c in x.terms.items():
            parts.setdefault(a, {})[w] = c
        out = []
        for i in self.a_degrees:
            if n + i < 1:
                continue
            for a in self.A.basis(i):
                k = self.L.dim(n + i)
                if not k:
                    continue
                xa = parts.pop(a, None)
                out.extend(self.L.coordinates(LieElement(xa), n + i, check=True) if xa
                           else [Fraction(0)] * k)
        if any(parts.values()):
            raise ValueError(f"{x} is not in A⊗L in degree {n}")
        return out

    def degrees_up_to(self, max_degree):
        lo = 1 - max(self.a_degrees)
        return [n for n in range(lo, max_degree + 1) if self.basis(n)]

    def validate(self, max_degree):
        """Check D^2 = 0, antisymmetry, Jacobi and the derivation rule.

        Pairs and triples range over basis elements whose degrees sum to at
        most ``max_degree``.
        """
        rep = StructureReport(max_degree)
        degs = self.degrees_up_to(max_degree)
        elems = [(n, x) for n in degs for x in self.basis(n)]
        for n, x in elems:
            rep.d_squared += 1
            if self.D(self.D(x)):
                rep.failures.append(("D^2", str(x)))
        for (n1, x), (n2, y) in iproduct(elems, repeat=2):
            if n1 + n2 > max_degree:
                continue
            xy = self.bracket(x, y)
            s = -1 if (n1 * n2) % 2 else 1
            rep.antisymmetry += 1
            if xy + self.bracket(y, x) * s:
                rep.failures.append(("antisymmetry", str(x), str(y)))
            rep.derivation += 1
            t = -1 if n1 % 2 else 1
            if self.D(xy) != self.bracket(self.D(x), y) + self.bracket(x, self.D(y)) * t:
                rep.failures.append(("derivation", str(x), str(y)))
        for (n1, x), (n2, y), (n3, z) in iproduct(elems, repeat=3):
            if n1 + n2 + n3 > max_degree:
                continue
            rep.jacobi += 1
            s = -1 if (n1 * n2) % 2 else 1
            lhs = self.bracket(x, self.bracket(y, z))
            rhs = self.bracket(self.bracket(x, y), z) + self.bracket(y, self.bracket(x, z)) * s
            if lhs != rhs:
                rep.failures.append(("jacobi", str(x), str(y), str(z)))
        return rep


@dataclass
class StructureReport:
    max_degree: int
    d_squared: int = 0
    antisymmetry: int = 0
    jacobi: int = 0
    derivation: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def mapping_space_lie_model(A, L):
    return TensorLieModel(A, L)


class DGLMorphism:
    """Linear map between DGLs given by a function on elements."""

    def __init__(self, source, target, func, name=None):
        self.source = source
        self.target = target
        self.func = func
        self.name = name

    def __call__(self, x):
        return self.func(x)

    def compose(self, other):
        return DGLMorphism(other.source, self.target, lambda x: self(other(x)))

    def check(self, max_degree):
        """Verify compatibility with differential and bracket on basis elements."""
        src, tgt = self.source, self.target
        elems = [(n, x) for n in _degrees(src, max_degree) for x in _basis(src, n)]
        for n, x in elems:
            if self(_D(src, x)) != _D(tgt, self(x)):
                return False
        for (n1, x), (n2, y) in iproduct(elems, repeat=2):
            if n1 + n2 <= max_degree and \
                    self(_bracket(src, x, y)) != _bracket(tgt, self(x), self(y)):
                return False
        return True


def _degrees(M, max_degree):
    if isinstance(M, TensorLieModel):
        return M.degrees_up_to(max_degree)
    return range(1, max_degree + 1)


def _basis(M, n):
    return M.basis(n) if isinstance(M, TensorLieModel) else M.lie_basis(n)


def _D(M, x):
    return M.D(x) if isinstance(M, TensorLieModel) else M.boundary(x)


def _bracket(M, x, y):
    return M.bracket(x, y) if isinstance(M, TensorLieModel) else bracket(x, y)


def evaluation_maps(M):
    """Projection A⊗L → L (through A → A^0 = Q) and section L → A⊗L (l ↦ 1⊗l)."""

    def project(x):
        return LieElement({w: c for (a, w), c in x.terms.items() if a == ONE})

    def section(x):
        return tensor(Element.scalar(1), x)

    return (DGLMorphism(M, M.L, project, name="projection"),
            DGLMorphism(M.L, M, section, name="section"))


def induced_map(f, source_model, target_model):
    """``f⊗id`` for a CDGA morphism ``f`` between the algebra factors."""

    def apply(x):
        out = MixedElement()
        for (a, w), c in x.terms.items():
            img = target_model.A.normal_form(f(Element.monomial(a)))
            out = out + tensor(img, LieElement({w: c}))
        return out

    return DGLMorphism(source_model, target_model, apply)


def tensor_retract(M, i, q, max_degree=None):
    """Lift ``i: Λt → A``, ``q: A → Λt`` with ``q∘i = id`` to ``I = i⊗id``, ``Q = q⊗id``.

    Returns ``(T, I, Q)`` where ``T = Λt⊗L``.
    """
    sphere = i.source
    for g in sphere.generators:
        if q(i(Element.gen(g))) != Element.gen(g):
            raise NotARetract(f"q∘i({g.name}) != {g.name}")
    T = TensorLieModel(sphere, M.L)
    I = induced_map(i, T, M)
    Q = induced_map(q, M, T)
    if max_degree is not None:
        for n in T.degrees_up_to(max_degree):
            for x in T.basis(n):
                if Q(I(x)) != x:
                    raise NotARetract(f"Q∘I({x}) != {x}")
    return T, I, Q
