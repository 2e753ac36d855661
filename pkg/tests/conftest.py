from pathlib import Path

import pytest

from ratmodels import Element, FiniteCDGA, Generator, SullivanAlgebra, load_model

MODELS = Path(__file__).resolve().parent.parent / "demos" / "models"


def model(name):
    return load_model(MODELS / f"{name}.model").algebra()


def sullivan(gens_text, diff=None, name=None):
    """``sullivan("x1:4 x2:4 y:7", {"y": "x1*x2"})``."""
    from ratmodels.modelfile import parse_expression
    gens = [Generator(n, int(d)) for n, d in (t.split(":") for t in gens_text.split())]
    table = {g.name: g for g in gens}
    d = {k: parse_expression(v, table) for k, v in (diff or {}).items()}
    return SullivanAlgebra(gens, d, name=name)


def quotient(gens_text, relations, top, truncated=True, name=None):
    """Zero-differential quotient of a free algebra by monomial-style relations."""
    from ratmodels.modelfile import parse_expression
    free = sullivan(gens_text)
    table = {g.name: g for g in free.generators}
    rels = [parse_expression(r, table) for r in relations]
    return FiniteCDGA.from_relations(free, rels, top, name=name, truncated=truncated)


def g(alg, name):
    return Element.gen(alg.generator(name))


@pytest.fixture
def Y():
    return model("Y")


@pytest.fixture
def S2():
    return model("S2")


@pytest.fixture
def S4():
    return model("S4")


@pytest.fixture
def nonformal():
    return model("nonformal")
