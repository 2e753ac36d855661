"""Exact linear algebra over the rationals.

Matrices are plain lists of rows whose entries are ``Fraction``.  Nothing
here mutates its arguments.
"""

from fractions import Fraction


def to_fraction_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def zeros(nrows, ncols):
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def transpose(m, ncols=None):
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    if not a:
        return []
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [Fraction(0)] * ncols
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def matvec(m, v):
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0))
            for row in m]


def rref(m):
    """Reduced row-echelon form and pivot columns.

    Pivoting takes the leftmost column with a nonzero entry at or below the
    current row, and within it the lowest row index.
    """
    a = [[Fraction(x) for x in row] for row in m]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        if inv != 1:
            a[r] = [x * inv for x in a[r]]
        prow = a[r]
        for i in range(nrows):
            f = a[i][c]
            if i != r and f:
                a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m):
    return len(rref(m)[1])


def kernel_basis(m, ncols=None):
    """Basis of ``{x : m x = 0}``; one vector per free column, in column order."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if not m:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(r, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def solve(m, b):
    """One solution of ``m x = b`` with free variables set to zero, or None."""
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    if nrows == 0:
        return [] if not b else None
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(m, b)]
    r, pivots = rref(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(r, pivots):
        x[pc] = row[ncols]
    return x


def row_space_basis(vectors):
    """Nonzero rows of the rref of ``vectors`` (canonical basis of their span)."""
    if not vectors:
        return [], []
    r, pivots = rref(vectors)
    return r[:len(pivots)], pivots


class EchelonSpan:
    """Incrementally maintained reduced echelon basis of a subspace.

    ``reduce`` returns the canonical remainder of a vector modulo the span,
    which is zero exactly when the vector lies in it.
    """

    def __init__(self, dim, vectors=()):
        self.dim = dim
        self.rows = []
        self.pivots = []
        for v in vectors:
            self.add(v)

    def __len__(self):
        return len(self.rows)

    def reduce(self, v):
        v = list(v)
        for row, pc in zip(self.rows, self.pivots):
            f = v[pc]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def contains(self, v):
        return not any(self.reduce(v))

    def add(self, v):
        """Add ``v``; returns True when the span grew."""
        v = self.reduce(v)
        pc = next((i for i, x in enumerate(v) if x), None)
        if pc is None:
            return False
        inv = 1 / v[pc]
        v = [x * inv for x in v]
        for i, row in enumerate(self.rows):
            f = row[pc]
            if f:
                self.rows[i] = [x - f * y for x, y in zip(row, v)]
        k = 0
        while k < len(self.pivots) and self.pivots[k] < pc:
            k += 1
        self.rows.insert(k, v)
        self.pivots.insert(k, pc)
        return True


def express(vectors, target):
    """Coefficients ``c`` with ``sum c_i vectors_i = target``, or None.

    ``vectors`` are columns of the system; free coefficients are zero.
    """
    if not vectors:
        return [] if not any(target) else None
    return solve(transpose(vectors), target)
