"""Command-line front end.

    ratmodels COMMAND FILE... [--max-degree N] [--backtrack-cap K]

Every command prints a plain-text report; output is deterministic for
identical inputs and flags.  Exit status is 0 on success, 1 on bad input and
2 when an internal consistency check fails.
"""

import argparse
import sys
from fractions import Fraction

from .bridge import cstar, sphere_mapping_space_model
from .cdga import (CohomologyAlgebra, FiniteCDGA, SullivanAlgebra, check_morphism,
                   cohomology_dims, finite_dimensional_model, is_free_graded_commutative,
                   odd_spherical_retract)
from .dgl import mapping_space_lie_model
from .exceptions import ConnectivityViolation, ModelError, TopDegreeNotFound
from .formality import (CERTIFIED_FORMAL, CERTIFIED_NONFORMAL, DEFAULT_BACKTRACK_CAP,
                        bigraded_model, formality_check, massey_triple,
                        minimal_model, regular_sequence_check, verify_psi)
from .modelfile import Section, format_section, load_model, parse_expression

COMMANDS = ("check", "cohomology", "minimal-model", "bigraded-model", "formality", "massey",
            "regular-seq", "cstar", "map-model", "sphere-map", "audit")


class InputError(Exception):
    pass


class Report:
    """Ordered sections of key/value lines."""

    def __init__(self, command):
        self.command = command
        self.sections = []
        self.section("input").append(("command", command))

    def section(self, title):
        for t, rows in self.sections:
            if t == title:
                return rows
        rows = []
        self.sections.append((title, rows))
        return rows

    def add(self, title, key, value):
        self.section(title).append((key, value))

    def get(self, title, key):
        for k, v in self.section(title):
            if k == key:
                return v
        raise KeyError(key)

    def render(self):
        out = []
        for title, rows in self.sections:
            if not rows:
                continue
            out.append(f"[{title}]")
            for k, v in rows:
                text = _fmt(v)
                if "\n" in text:
                    out.append(f"{k}:")
                    out.extend("  " + line for line in text.rstrip("\n").split("\n"))
                else:
                    out.append(f"{k}: {text}")
            out.append("")
        return "\n".join(out)

    __str__ = render


def _fmt(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return ", ".join(_fmt(x) for x in v) if v else "(none)"
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


# -- helpers ----------------------------------------------------------------

def _section(path, name=None):
    mf = load_model(path)
    if not len(mf):
        raise InputError(f"{path}: no model sections")
    if name is None:
        return next(iter(mf))
    if name not in mf.sections:
        raise InputError(f"{path}: no section {name!r}")
    return mf[name]


def _algebra(sec, allow_lie=False):
    if sec.kind == "lie" and not allow_lie:
        raise InputError(f"section {sec.name!r} is a lie section; this command needs a CDGA")
    return sec.algebra


def _need_bound(args):
    if args.max_degree is None:
        raise InputError(f"{args.command} requires --max-degree")
    if args.max_degree < 0:
        raise InputError("--max-degree must be non-negative")
    return args.max_degree


def _generators(alg):
    return [f"{g.name}:{g.degree}" for g in alg.generators]


def _differentials(rep, title, alg):
    diff = alg.free.differential if isinstance(alg, FiniteCDGA) else alg.differential
    for g in alg.generators:
        rep.add(title, f"d {g.name}", diff[g])


def _echo_input(rep, args):
    for i, f in enumerate(args.files):
        rep.add("input", "file" if i == 0 or args.command in ("map-model", "audit") else "argument", f)
    if args.section:
        rep.add("input", "section", args.section)
    if args.max_degree is not None:
        rep.add("input", "max_degree", args.max_degree)


def _cohomology_rows(rep, title, alg, bound):
    for n in range(bound + 1):
        H = alg.cohomology(n)
        reps = [str(r) for r in H.representatives]
        line = f"{H.dimension}" + (f"  [{'; '.join(reps)}]" if reps else "")
        rep.add(title, f"H^{n}", line)


# -- commands ---------------------------------------------------------------

def cmd_check(args, rep):
    sec = _section(args.files[0], args.section)
    alg = sec.algebra
    rep.add("result", "section", sec.name)
    rep.add("result", "kind", sec.kind)
    rep.add("result", "generators", _generators(alg))
    if sec.kind == "lie":
        for g in alg.generators:
            rep.add("result", f"∂ {g.name}", alg.boundary_map[g])
        rep.add("result", "boundary_squares_to_zero", True)
        rep.add("result", "minimal", alg.is_minimal())
        if args.max_degree is not None:
            rep.add("result", "dims", [alg.dim(n) for n in range(1, args.max_degree + 1)])
        return
    _differentials(rep, "result", alg)
    rep.add("result", "d_squares_to_zero", True)
    if sec.kind == "finite":
        rep.add("result", "top_degree", sec.top)
        rep.add("result", "truncated", sec.truncated)
        rep.add("result", "dims", alg.dims())
    else:
        rep.add("result", "minimal", alg.is_minimal())
        if args.max_degree is not None:
            rep.add("result", "dims", [alg.dim(n) for n in range(args.max_degree + 1)])


def cmd_cohomology(args, rep):
    bound = _need_bound(args)
    sec = _section(args.files[0], args.section)
    alg = sec.algebra
    if sec.kind == "lie":
        for n in range(1, bound + 1):
            H = alg.homology(n)
            rep.add("homology", f"H_{n}", H.dimension)
        return
    if isinstance(alg, FiniteCDGA) and alg.truncated:
        rep.add("warnings", "truncation", f"algebra truncated at degree {alg.top_degree}")
    _cohomology_rows(rep, "cohomology", alg, bound)
    rep.add("summary", "dims", cohomology_dims(alg, bound))


def cmd_minimal_model(args, rep):
    bound = _need_bound(args)
    alg = _algebra(_section(args.files[0], args.section))
    mm = minimal_model(alg, bound)
    M = mm.algebra
    rep.add("minimal_model", "generators", _generators(M))
    _differentials(rep, "minimal_model", M)
    for g in M.generators:
        rep.add("quasi_isomorphism", f"m({g.name})", mm.morphism.images[g])
    rep.add("verification", "quasi_isomorphism_through", bound)
    rep.add("verification", "minimal", M.is_minimal())


def _zero_differential_algebra(sec, bound, rep):
    alg = sec.algebra
    if isinstance(alg, FiniteCDGA) and alg.has_zero_differential():
        return alg
    rep.add("notes", "input", "differential is nonzero; using a presentation of its cohomology")
    return CohomologyAlgebra(alg, bound).algebra


def cmd_bigraded_model(args, rep):
    bound = _need_bound(args)
    sec = _section(args.files[0], args.section)
    _algebra(sec)
    H = _zero_differential_algebra(sec, bound, rep)
    B = bigraded_model(H, bound)
    for g in B.algebra.generators:
        k = B.lower[g.name]
        rep.add("bigraded_model", f"{g.name}", f"degree {g.degree}, lower {k}, d = {B.algebra.differential[g]}")
    for g in B.algebra.generators:
        rep.add("rho", f"rho({g.name})", B.rho.images[g])
    rep.add("verification", "grading_law", B.check_grading())
    rep.add("verification", "quasi_isomorphism_through", bound)


def _reverify(verdict):
    """Re-check a certificate immediately before it is reported."""
    if verdict.status == CERTIFIED_FORMAL:
        psi = verdict.witness
        report = check_morphism(psi, verdict.max_degree)
        if verdict.method == "koszul":
            if not report.is_quasi_isomorphism():
                raise ArithmeticError("stale Koszul certificate")
        else:
            verify_psi(psi, CohomologyAlgebra(psi.source, psi.target.top_degree), verdict.max_degree)
    elif verdict.status == CERTIFIED_NONFORMAL:
        ms = verdict.massey
        src = verdict.model_map.source     # Massey products live on the minimal model
        again = massey_triple(src, ms.a, ms.b, ms.c, verdict.max_degree)
        if not again.avoids_zero or again.value_class != ms.value_class:
            raise ArithmeticError("stale Massey certificate")
    return True


def _report_verdict(rep, v, title="formality"):
    rep.add(title, "status", v.status)
    rep.add(title, "bound", v.max_degree)
    if v.method:
        rep.add(title, "method", v.method)
    if v.status == CERTIFIED_FORMAL:
        psi = v.witness
        rep.add(title, "target", f"{psi.target.name}, dims {psi.target.dims()}")
        for g in psi.source.generators:
            if g.degree <= v.max_degree:
                rep.add(title, f"psi({g.name})", psi.images[g])
    if v.status == CERTIFIED_NONFORMAL:
        ms = v.massey
        rep.add(title, "massey", f"<{ms.a}, {ms.b}, {ms.c}>")
        rep.add(title, "massey_value", ms.value)
        rep.add(title, "massey_degree", ms.degree)
        rep.add(title, "indeterminacy_dimension", len(ms.indeterminacy))
    for i, note in enumerate(v.notes):
        rep.add(title, f"note_{i + 1}", note)
    rep.add(title, "certificate_reverified", _reverify(v) if v.status != "INCONCLUSIVE" else False)


def run_formality(alg, bound, cap, use_koszul=True):
    return formality_check(alg, bound, cap, use_koszul=use_koszul)


def cmd_formality(args, rep):
    bound = _need_bound(args)
    alg = _algebra(_section(args.files[0], args.section))
    rep.add("input", "backtrack_cap", args.backtrack_cap)
    v = run_formality(alg, bound, args.backtrack_cap, use_koszul=not args.no_koszul)
    _report_verdict(rep, v)


def _gen_table(alg):
    gens = alg.free.generators if isinstance(alg, FiniteCDGA) else alg.generators
    return {g.name: g for g in gens}


def cmd_massey(args, rep):
    bound = _need_bound(args)
    if len(args.files) != 4:
        raise InputError("massey needs FILE A B C")
    alg = _algebra(_section(args.files[0], args.section))
    table = _gen_table(alg)
    a, b, c = (alg.normal_form(parse_expression(t, table)) for t in args.files[1:])
    ms = massey_triple(alg, a, b, c, bound)
    rep.add("massey", "triple", f"<{a}, {b}, {c}>")
    rep.add("massey", "u", ms.u)
    rep.add("massey", "v", ms.v)
    rep.add("massey", "value", ms.value)
    rep.add("massey", "degree", ms.degree)
    rep.add("massey", "class", ms.value_class)
    rep.add("massey", "indeterminacy_dimension", len(ms.indeterminacy))
    rep.add("massey", "avoids_zero", ms.avoids_zero)


def cmd_regular_seq(args, rep):
    bound = _need_bound(args)
    if len(args.files) < 2:
        raise InputError("regular-seq needs FILE POLY...")
    alg = _algebra(_section(args.files[0], args.section))
    table = _gen_table(alg)
    polys = [parse_expression(t, table) for t in args.files[1:]]
    ring = [g for g in table.values() if not g.odd]
    v = regular_sequence_check(polys, bound, ring=ring)
    rep.add("regular_sequence", "ring", f"Q[{', '.join(g.name for g in ring)}]")
    rep.add("regular_sequence", "sequence", [str(p) for p in polys])
    rep.add("regular_sequence", "status", v.status)
    rep.add("regular_sequence", "bound", bound)
    if not v.regular:
        rep.add("regular_sequence", "zero_divisor_index", v.index + 1)
        rep.add("regular_sequence", "witness", f"{v.witness} (degree {v.witness_degree})")


def _emit_model(rep, title, alg, name):
    sec = Section(name, "sullivan", alg)
    rep.add(title, "model", format_section(sec))


def cmd_cstar(args, rep):
    bound = _need_bound(args)
    sec = _section(args.files[0], args.section)
    if sec.kind != "lie":
        raise InputError("cstar needs a lie section")
    res = cstar(sec.algebra, bound)
    alg = res.algebra
    rep.add("cstar", "generators", _generators(alg))
    _differentials(rep, "cstar", alg)
    for g in alg.generators:
        deg, b = res.duals[g.name]
        rep.add("duality", g.name, f"dual to L_{deg} basis element {b}")
    if res.partial:
        rep.add("warnings", "partial", sorted(res.partial))
    _emit_model(rep, "cstar", alg, f"C_{sec.name}")


def _finite_model(sec, check_bound, rep):
    alg = sec.algebra
    if isinstance(alg, FiniteCDGA):
        return alg
    if all(g.odd for g in alg.generators):
        return alg
    A, _ = finite_dimensional_model(alg, check_bound)
    rep.add("finite_model", "dims", A.dims())
    return A


def cmd_map_model(args, rep):
    bound = _need_bound(args)
    if len(args.files) != 2:
        raise InputError("map-model needs XFILE LFILE")
    xsec = _section(args.files[0])
    lsec = _section(args.files[1])
    if lsec.kind != "lie":
        raise InputError(f"{args.files[1]}: expected a lie section")
    A = _finite_model(xsec, args.check_bound, rep)
    M = mapping_space_lie_model(A, lsec.algebra)
    for n in M.degrees_up_to(bound):
        rep.add("mapping_space_lie_model", f"dim {n}", M.dim(n))
    sr = M.validate(bound)
    rep.add("validation", "bound", bound)
    for key in ("d_squared", "antisymmetry", "jacobi", "derivation"):
        rep.add("validation", key, getattr(sr, key))
    rep.add("validation", "ok", sr.ok)
    if not sr.ok:
        raise ArithmeticError(f"A⊗L fails its structure checks: {sr.failures[:3]}")
    if args.cstar:
        res = cstar(M, bound)
        rep.add("cstar", "generators", _generators(res.algebra))
        _differentials(rep, "cstar", res.algebra)
        if res.partial:
            rep.add("warnings", "partial", sorted(res.partial))


def cmd_sphere_map(args, rep):
    if args.p is None:
        raise InputError("sphere-map requires --p")
    alg = _algebra(_section(args.files[0], args.section))
    rep.add("input", "p", args.p)
    F = sphere_mapping_space_model(alg, args.p)
    out = F.algebra
    rep.add("sphere_mapping_model", "generators", _generators(out))
    _differentials(rep, "sphere_mapping_model", out)
    rep.add("verification", "d_squares_to_zero", True)
    rep.add("verification", "minimal", out.is_minimal())
    rep.add("verification", "restricts_to_source", F.restriction_equals_source())
    if args.max_degree is not None:
        rep.add("cohomology", "dims", cohomology_dims(out, args.max_degree))
    _emit_model(rep, "sphere_mapping_model", out, f"F_S{args.p}_{alg.name or 'Y'}")


def _sphere_dimension(dims):
    nz = [n for n, d in enumerate(dims) if d]
    if len(nz) == 2 and nz[0] == 0 and dims[0] == 1 and dims[nz[1]] == 1:
        return nz[1]
    return None


def cmd_audit(args, rep):
    bound = _need_bound(args)
    if len(args.files) != 2:
        raise InputError("audit needs XFILE YFILE")
    xsec, ysec = _section(args.files[0]), _section(args.files[1])
    X, Y = _algebra(xsec), _algebra(ysec)
    if not (isinstance(Y, SullivanAlgebra) and Y.is_minimal()):
        raise InputError("the Y model must be a minimal Sullivan algebra")
    # X side
    xdims = cohomology_dims(X, bound)
    N = max(n for n, d in enumerate(xdims) if d)
    rep.add("X", "cohomology_dims", xdims)
    if N == bound:
        rep.add("warnings", "X_top_degree", "H(X) nonzero at the bound; top degree N not determined")
    rep.add("X", "top_degree_N", N)
    MX = X if isinstance(X, SullivanAlgebra) and X.is_minimal() else minimal_model(X, bound).algebra
    ret = odd_spherical_retract(MX)
    a1 = ret is not None
    if a1:
        rep.add("X", "assumption_1", f"holds (closed odd generator {ret.t.name} of degree {ret.t.degree})")
    else:
        rep.add("X", "assumption_1", "fails (no odd spherical retract)")
    # Y side
    m = min((g.degree for g in Y.generators), default=bound + 1) - 1
    rep.add("Y", "connectivity_m", m)
    conn = m >= N + 1
    rep.add("Y", "connectivity_hypothesis", f"{'holds' if conn else 'fails'} (m={m}, N={N}, need m >= N+1)")
    HY = CohomologyAlgebra(Y, bound).algebra
    free = is_free_graded_commutative(HY, bound)
    rep.add("Y", "cohomology_dims", [HY.dim(n) for n in range(bound + 1)])
    rep.add("Y", "free_graded_commutative", str(free))
    # mapping space
    F = None
    p = _sphere_dimension(xdims)
    if p is not None:
        try:
            F = sphere_mapping_space_model(Y, p).algebra
            rep.add("mapping_space", "model", f"sphere mapping model, p = {p}")
        except ConnectivityViolation as exc:
            rep.add("mapping_space", "model", f"not built: {exc}")
    elif args.lie:
        lsec = _section(args.lie)
        A = _finite_model(xsec, args.check_bound, rep)
        F = cstar(mapping_space_lie_model(A, lsec.algebra), bound).algebra
        rep.add("mapping_space", "model", "C*(A⊗L)")
        rep.add("warnings", "mapping_space", "C*(A⊗L) is truncated; top-degree generators are partial")
    else:
        rep.add("mapping_space", "model", "not built (X is not a rational sphere; pass --lie)")
    verdict = None
    if F is not None:
        rep.add("mapping_space", "generators", _generators(F))
        verdict = run_formality(F, bound, args.backtrack_cap)
        _report_verdict(rep, verdict, "mapping_space")
    # conclusion
    status = verdict.status if verdict else "NOT_BUILT"
    f_word = {CERTIFIED_FORMAL: "F formal", CERTIFIED_NONFORMAL: "F not formal"}.get(
        status, "F formality undecided")
    y_word = "H(Y) not free" if free.status == "NOT_FREE" else "H(Y) free up to the bound"
    if not a1:
        rep.add("conclusion", "summary",
                "assumption 1 fails (no odd spherical retract); formality of F does NOT force "
                f"free cohomology; observed: {f_word}, {y_word}")
        if status == CERTIFIED_FORMAL and free.status == "NOT_FREE":
            rep.add("conclusion", "interpretation",
                    "counterexample pattern: assumption 1 is necessary")
        return
    rep.add("conclusion", "prediction", "F formal => H(Y) free (Y a product of Eilenberg-MacLane spaces)")
    if free.status == "NOT_FREE":
        rep.add("conclusion", "diagnostic", f"H(Y) is NOT_FREE (degree {free.degree}); F is expected non-formal")
    if not conn:
        rep.add("conclusion", "hypotheses", "connectivity hypothesis m >= N+1 fails; prediction is outside the theorem")
    if status == CERTIFIED_FORMAL and free.status == "NOT_FREE":
        verdict_line = ("INCONSISTENT with the theorem" if conn
                        else "no contradiction, since the hypotheses are not met")
    elif status == CERTIFIED_FORMAL:
        verdict_line = "consistent: F formal and H(Y) free up to the bound"
    elif status == CERTIFIED_NONFORMAL and free.status == "NOT_FREE":
        verdict_line = "consistent: F certified non-formal, as predicted"
    else:
        verdict_line = "no conclusion at this bound"
    rep.add("conclusion", "summary", f"assumption 1 holds; observed: {f_word}, {y_word}; {verdict_line}")


HANDLERS = {
    "check": cmd_check,
    "cohomology": cmd_cohomology,
    "minimal-model": cmd_minimal_model,
    "bigraded-model": cmd_bigraded_model,
    "formality": cmd_formality,
    "massey": cmd_massey,
    "regular-seq": cmd_regular_seq,
    "cstar": cmd_cstar,
    "map-model": cmd_map_model,
    "sphere-map": cmd_sphere_map,
    "audit": cmd_audit,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="ratmodels", description="Exact rational models and formality checks.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("files", nargs="+", help="model file, followed by command-specific arguments")
    ap.add_argument("--max-degree", type=int, default=None)
    ap.add_argument("--format", choices=["text"], default="text")
    ap.add_argument("--backtrack-cap", type=int, default=DEFAULT_BACKTRACK_CAP)
    ap.add_argument("--section", default=None, help="section of the model file to use")
    ap.add_argument("--p", type=int, default=None, help="sphere dimension for sphere-map")
    ap.add_argument("--check-bound", type=int, default=12,
                    help="degree bound for locating the top cohomology of X (map-model, audit)")
    ap.add_argument("--cstar", action="store_true", help="map-model: also dualize A⊗L")
    ap.add_argument("--lie", default=None, help="audit: Lie model file of Y for non-sphere X")
    ap.add_argument("--no-koszul", action="store_true", help="formality: skip the Koszul fast path")
    return ap


def run_command(name, argv):
    """Run one command given its argument list; returns the Report."""
    args = build_parser().parse_args([name] + list(argv))
    rep = Report(args.command)
    _echo_input(rep, args)
    HANDLERS[args.command](args, rep)
    return rep


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    rep = Report(args.command)
    try:
        _echo_input(rep, args)
        HANDLERS[args.command](args, rep)
    except (InputError, ModelError, OSError, TopDegreeNotFound, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # an internal check failed
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(rep.render())
    return 0


if __name__ == "__main__":
    sys.exit(main())
