"""Plain-text model files.

A file holds one or more sections::

    # the model of Y
    [Y]
    x1, x2 : 4
    y : 7
    d y = x1*x2

    [L lie]
    a, b : 2
    c : 7
    d c = [a,[a,b]]     # in a lie section "d" is the boundary, of degree -1

    [S2]
    x : 2
    y : 3
    d y = x^2
    top 2               # quotient: everything above degree 2 is zero

``relation <expr>`` adds ideal generators to a ``top`` section (the ideal
must be closed under d).  ``truncate N`` instead of ``top N`` marks an
artificial cut.  Expressions use
rational literals (``3``, ``-1/2``), generator names, ``+ - * ^``,
parentheses, and ``[x,y]`` brackets in lie sections.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .cdga import Element, FiniteCDGA, Generator, SullivanAlgebra
from .dgl import FreeDGL, LieElement, LieGenerator, bracket
from .exceptions import DifferentialError, ModelError, ModelParseError

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[-+*^/()\[\],]))")
_SECTION = re.compile(r"^\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*(lie)?\s*\]$")


@dataclass
class Section:
    name: str
    kind: str                      # "sullivan", "finite" or "lie"
    algebra: object
    relations: list = field(default_factory=list)
    top: int = None
    truncated: bool = False


class ModelFile:
    def __init__(self, sections):
        self.sections = dict(sections)

    def __getitem__(self, name):
        return self.sections[name]

    def __iter__(self):
        return iter(self.sections.values())

    def __len__(self):
        return len(self.sections)

    def names(self):
        return list(self.sections)

    def algebra(self, name=None):
        """The algebra of section ``name``, or of the only/first section."""
        if name is None:
            if not self.sections:
                raise ModelError("model file has no sections")
            return next(iter(self.sections.values())).algebra
        if name not in self.sections:
            raise ModelError(f"no section named {name!r}")
        return self.sections[name].algebra


# -- expressions ------------------------------------------------------------

class _Parser:
    def __init__(self, text, line, col0, gens, lie):
        self.line = line
        self.gens = gens
        self.lie = lie
        self.toks = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ModelParseError(f"unexpected character {text[pos]!r}", line, col0 + pos + 1)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), col0 + m.start(kind) + 1))
            pos = m.end()
        self.i = 0
        self.end_col = col0 + len(text) + 1

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self.end_col)

    def take(self, sym=None):
        tok = self.peek()
        if sym is not None and tok[1] != sym:
            raise ModelParseError(f"expected {sym!r}", self.line, tok[2])
        if tok[0] is None:
            raise ModelParseError("unexpected end of expression", self.line, tok[2])
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ModelParseError(msg, self.line, tok[2])

    def parse(self):
        if not self.toks:
            raise self.error("empty expression")
        v = self.expr()
        if self.peek()[0] is not None:
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            w = self.term()
            v = self.add(v, w if op == "+" else self.scale(w, -1))
        return v

    def term(self):
        sign = 1
        while self.peek()[1] in ("+", "-"):
            if self.take()[1] == "-":
                sign = -sign
        v = self.power()
        while self.peek()[1] == "*":
            tok = self.take()
            v = self.mul(v, self.power(), tok)
        return self.scale(v, sign) if sign < 0 else v

    def power(self):
        v = self.atom()
        if self.peek()[1] == "^":
            tok = self.take()
            k = self.take()
            if k[0] != "num":
                raise ModelParseError("exponent must be a non-negative integer", self.line, k[2])
            if self.lie and not isinstance(v, Fraction):
                raise ModelParseError("powers of Lie elements are not defined", self.line, tok[2])
            v = v ** int(k[1])
        return v

    def atom(self):
        kind, val, col = self.peek()
        if kind == "num":
            self.take()
            num = Fraction(int(val))
            if self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "num" or int(den[1]) == 0:
                    raise ModelParseError("bad rational literal", self.line, den[2])
                num /= int(den[1])
            return num
        if kind == "name":
            self.take()
            if val not in self.gens:
                raise ModelParseError(f"unknown generator {val!r}", self.line, col)
            g = self.gens[val]
            return LieElement.gen(g) if self.lie else Element.gen(g)
        if val == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        if val == "[":
            if not self.lie:
                raise ModelParseError("brackets are only allowed in lie sections", self.line, col)
            self.take()
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take("]")
            if isinstance(a, Fraction) or isinstance(b, Fraction):
                raise ModelParseError("bracket of a scalar", self.line, col)
            return bracket(a, b)
        raise self.error("expected a number, generator, '(' or '['" if kind else "unexpected end of expression")

    # arithmetic that works for scalars, Elements and LieElements

    def add(self, a, b):
        if self.lie:
            if isinstance(a, Fraction) and isinstance(b, Fraction):
                return a + b
            if isinstance(a, Fraction) or isinstance(b, Fraction):
                if (a if isinstance(a, Fraction) else b) == 0:
                    return b if isinstance(a, Fraction) else a
                raise self.error("cannot add a scalar to a Lie element")
            return a + b
        return _el(a) + _el(b)

    def scale(self, v, c):
        if isinstance(v, Fraction):
            return v * c
        return v * Fraction(c)

    def mul(self, a, b, tok):
        if self.lie:
            if isinstance(a, Fraction):
                return b * a if not isinstance(b, Fraction) else a * b
            if isinstance(b, Fraction):
                return a * b
            raise ModelParseError("use [x,y] for brackets; '*' is scalar multiplication", self.line, tok[2])
        return _el(a) * _el(b)


def _el(v):
    return Element.scalar(v) if isinstance(v, Fraction) else v


def parse_expression(text, generators, lie=False, line=None):
    """Parse one expression over ``generators`` (dict name -> Generator)."""
    v = _Parser(text, line, 0, generators, lie).parse()
    if lie:
        if isinstance(v, Fraction):
            if v:
                raise ModelParseError("a Lie expression cannot be a nonzero scalar", line)
            return LieElement()
        return v
    return _el(v)


# -- files ------------------------------------------------------------------

def _strip_comment(raw):
    return raw.split("#", 1)[0]


def parse_model(text):
    """Parse model text into a ``ModelFile`` of validated algebras."""
    blocks = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("["):
            m = _SECTION.match(line)
            if not m:
                raise ModelParseError("malformed section header", lineno, 1)
            current = {"name": m.group(1), "lie": bool(m.group(2)), "lines": [], "line": lineno}
            if any(b["name"] == current["name"] for b in blocks):
                raise ModelParseError(f"duplicate section {current['name']!r}", lineno, 1)
            blocks.append(current)
            continue
        if current is None:
            current = {"name": "model", "lie": False, "lines": [], "line": lineno}
            blocks.append(current)
        col = len(raw) - len(raw.lstrip()) + 1
        current["lines"].append((lineno, col, line))
    return ModelFile((b["name"], _build_section(b)) for b in blocks)


def _build_section(block):
    lie = block["lie"]
    gens, diffs, rels = {}, [], []
    top = truncate = None
    for lineno, col, line in block["lines"]:
        head = line.split(None, 1)[0]
        if head == "d" and "=" in line:
            lhs, rhs = line.split("=", 1)
            parts = lhs.split()
            if len(parts) != 2:
                raise ModelParseError("expected 'd <generator> = <expression>'", lineno, col)
            diffs.append((lineno, col, col + len(lhs), parts[1], rhs))
        elif head in ("top", "truncate"):
            if lie:
                raise ModelParseError(f"'{head}' is not allowed in a lie section", lineno, col)
            rest = line[len(head):].strip()
            if not rest.isdigit():
                raise ModelParseError(f"'{head}' needs a non-negative integer", lineno, col)
            if top is not None or truncate is not None:
                raise ModelParseError("top degree given twice", lineno, col)
            if head == "top":
                top = int(rest)
            else:
                truncate = int(rest)
        elif head == "relation":
            if lie:
                raise ModelParseError("'relation' is not allowed in a lie section", lineno, col)
            rels.append((lineno, col - 1 + len(head), line[len(head):]))
        elif ":" in line:
            names, deg = line.split(":", 1)
            deg = deg.strip()
            if not re.fullmatch(r"-?\d+", deg):
                raise ModelParseError(f"bad degree {deg!r}", lineno, col + len(names) + 1)
            for nm in names.split(","):
                nm = nm.strip()
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
                    raise ModelParseError(f"bad generator name {nm!r}", lineno, col)
                if nm == "d":
                    raise ModelParseError("'d' is reserved", lineno, col)
                if nm in gens:
                    raise ModelParseError(f"generator {nm!r} declared twice", lineno, col)
                gens[nm] = (LieGenerator if lie else Generator)(nm, int(deg))
        else:
            raise ModelParseError(f"cannot parse line {line!r}", lineno, col)
    shift = -1 if lie else 1
    differential = {}
    for lineno, col, offset, name, rhs in diffs:
        if name not in gens:
            raise ModelParseError(f"differential of undeclared generator {name!r}", lineno, col)
        if gens[name] in differential:
            raise ModelParseError(f"differential of {name!r} given twice", lineno, col)
        val = _Parser(rhs, lineno, offset, gens, lie).parse()
        if lie:
            if isinstance(val, Fraction):
                if val:
                    raise ModelParseError("a Lie expression cannot be a nonzero scalar", lineno, col)
                val = LieElement()
        else:
            val = _el(val)
        if val:
            try:
                deg = val.degree()
            except ValueError:
                raise DifferentialError(f"line {lineno}: d({name}) = {val} is not homogeneous")
            want = gens[name].degree + shift
            if deg != want:
                raise DifferentialError(
                    f"line {lineno}: d({name}) = {val} has degree {deg}, expected {want}")
        differential[gens[name]] = val
    name = block["name"]
    if lie:
        return Section(name, "lie", FreeDGL(list(gens.values()), differential, name=name))
    alg = SullivanAlgebra(list(gens.values()), differential, name=name)
    if top is None and truncate is None:
        if rels:
            raise ModelParseError("'relation' needs a 'top' or 'truncate' line", rels[0][0], 1)
        return Section(name, "sullivan", alg)
    relations = []
    for lineno, offset, rhs in rels:
        r = _el(_Parser(rhs, lineno, offset, gens, False).parse())
        if not r.is_homogeneous():
            raise ModelParseError(f"relation {r} is not homogeneous", lineno, offset + 1)
        relations.append(r)
    bound = top if top is not None else truncate
    fin = FiniteCDGA.from_relations(alg, relations, bound, name=name, truncated=truncate is not None)
    return Section(name, "finite", fin, relations, bound, truncate is not None)


# -- printing ---------------------------------------------------------------

def lie_expression(L, x):
    """``x`` as a combination of right-nested brackets of ``L``'s basis."""
    if not x:
        return "0"
    n = x.degree()
    coords = L.coordinates(x, n, check=True)
    parts = []
    for c, seq in zip(coords, L.basis_sequences(n)):
        if not c:
            continue
        s = seq[-1].name
        for g in reversed(seq[:-1]):
            s = f"[{g.name},{s}]"
        a = -c if c < 0 else c
        body = s if a == 1 else f"{a}*{s}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def format_section(sec):
    kind = " lie" if sec.kind == "lie" else ""
    out = [f"[{sec.name}{kind}]"]
    alg = sec.algebra
    gens = alg.generators
    for g in gens:
        out.append(f"{g.name} : {g.degree}")
    if sec.kind == "lie":
        for g in gens:
            val = alg.boundary_map[g]
            if val:
                out.append(f"d {g.name} = {lie_expression(alg, val)}")
    else:
        free = alg.free if sec.kind == "finite" else alg
        for g in gens:
            val = free.differential[g]
            if val:
                out.append(f"d {g.name} = {val}")
        if sec.kind == "finite":
            out.append(f"{'truncate' if sec.truncated else 'top'} {sec.top}")
            for r in sec.relations:
                out.append(f"relation {r}")
    return "\n".join(out) + "\n"


def format_model(model):
    return "\n".join(format_section(s) for s in model)


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())
