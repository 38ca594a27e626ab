"""``knotcalc`` command line interface.

Every subcommand writes one JSON report to stdout::

    {"command": ..., "inputs": ..., "outputs": ..., "certificates": [...], "diagnostics": [...]}

Exit codes: 0 success, 1 bad input or error diagnostics, 2 usage errors,
3 a certified identity failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from mpmath import MPContext

from . import bounds as gb
from . import handles, jsj, lattice, linalg, presentation
from .errors import CertificateError, InputError, KnotcalcError, PrecisionError, certify

EXIT_OK, EXIT_INPUT, EXIT_USAGE, EXIT_CERTIFICATE = 0, 1, 2, 3


class Report:
    def __init__(self, command: str):
        self.command = command
        self.inputs: dict = {}
        self.outputs: dict = {}
        self.certificates: list[str] = []
        self.diagnostics: list[dict] = []

    def certify(self, condition: bool, identity: str) -> None:
        certify(condition, identity)
        self.certificates.append(identity)

    def error(self, message: str, **extra) -> None:
        self.diagnostics.append({"severity": "error", "message": message, **extra})

    def warn(self, message: str, **extra) -> None:
        self.diagnostics.append({"severity": "warning", "message": message, **extra})

    @property
    def failed(self) -> bool:
        return any(d["severity"] == "error" for d in self.diagnostics)

    def to_json(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "outputs": self.outputs,
                "certificates": self.certificates, "diagnostics": self.diagnostics}


# ------------------------------------------------------------------- input

def _read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _read_json(arg: str, key: str):
    text = _read_text(arg)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", exc.pos) from None
    # accept a previous knotcalc report in place of the bare object
    if isinstance(obj, dict) and "command" in obj and "outputs" in obj:
        for section in (obj["outputs"], obj["inputs"]):
            if isinstance(section, dict) and key in section:
                return section[key]
        raise InputError(f"report has no {key!r} to read")
    return obj


def _read_matrix(arg: str) -> linalg.IntMatrix:
    return linalg.IntMatrix.from_json(_read_json(arg, "matrix"))


def _read_tree(arg: str) -> jsj.DecoratedTree:
    return jsj.DecoratedTree.from_json(_read_json(arg, "tree"))


def _read_catalog(arg: str | None) -> jsj.HyperbolicCatalog:
    if not arg:
        return jsj.EMPTY_CATALOG
    return jsj.HyperbolicCatalog.from_json(_read_json(arg, "catalog"))


def _num(x, dps: int) -> str:
    return MPContext().nstr(x, dps) if not isinstance(x, (int, str)) else str(x)


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A,B integers, got {text!r}") from None
    return a, b


# ------------------------------------------------------------ subcommands

def cmd_plen(args, rep: Report) -> None:
    p = presentation.parse_presentation(_read_text(args.presentation))
    rep.inputs["presentation"] = args.presentation
    rep.outputs.update({
        "presentation": presentation.serialize(p),
        "generators": len(p.generators),
        "relator_lengths": list(p.lengths),
        "length": presentation.presentation_length(p),
    })


def cmd_triangulate(args, rep: Report) -> None:
    p = presentation.parse_presentation(_read_text(args.presentation))
    rep.inputs["presentation"] = args.presentation
    t = presentation.triangularize(p)
    before = presentation.presentation_length(p)
    after = presentation.presentation_length(t)
    inv_before = linalg.smith_normal_form(presentation.abelianization_matrix(p))
    inv_after = linalg.smith_normal_form(presentation.abelianization_matrix(t))
    rep.certify(t.is_triangular, "every relator has length 2 or 3")
    rep.certify(before == after, "presentation length preserved")
    # abelianization: free rank and torsion must agree
    free_b = len(p.generators) - len(inv_before.d)
    free_a = len(t.generators) - len(inv_after.d)
    tors_b = [x for x in inv_before.d if x > 1]
    tors_a = [x for x in inv_after.d if x > 1]
    rep.certify(free_b == free_a and tors_b == tors_a, "abelianization invariant factors preserved")
    rep.outputs.update({
        "presentation": presentation.serialize(t),
        "generators": len(t.generators),
        "relators": len(t.relators),
        "length": after,
        "abelianization": {"free_rank": free_a, "torsion": tors_a},
    })


def cmd_snf(args, rep: Report) -> None:
    A = _read_matrix(args.matrix)
    rep.inputs["matrix"] = A.to_json()
    sf = linalg.smith_normal_form(A)
    tors = linalg.torsion_orders(A)
    rep.certificates += ["left*A*right = diag(d)", "d[i] divides d[i+1]",
                         "det(left) = ±1 and det(right) = ±1"]
    rep.outputs.update({
        "d": list(sf.d),
        "rank": len(sf.d),
        "left": sf.left.to_json(),
        "right": sf.right.to_json(),
        "torsion_orders": list(tors.orders),
        "max_order": tors.max_order,
    })


def cmd_kernel_basis(args, rep: Report) -> None:
    A = _read_matrix(args.matrix)
    rep.inputs["matrix"] = A.to_json()
    fs = linalg.bounded_kernel_basis(A)
    rep.certificates.append("A*u = 0 for all solutions")
    rep.certify(linalg.same_rational_span(fs.solutions, linalg.rational_kernel_basis(A), A.cols),
                "solutions span the rational kernel")
    if fs.column_condition:
        rep.certificates.append(f"|u[i]| <= 3^{fs.rank} and at most {fs.rank + 1} nonzero entries")
    rep.outputs.update({
        "solutions": [list(u) for u in fs.solutions],
        "pivot_columns": list(fs.pivot_columns),
        "independent_rows": list(fs.independent_rows),
        "det_P": fs.det_P,
        "rank": fs.rank,
        "column_condition": fs.column_condition,
        "entry_bound": 3 ** fs.rank,
    })


def cmd_cycles(args, rep: Report) -> None:
    h = handles.HandleComplex.from_json(_read_json(args.complex, "complex"))
    rep.inputs["complex"] = h.to_json()
    diags = handles.validate_handle_complex(h)
    for d in diags:
        rep.error(d.message, cell=d.cell)
    if diags:
        return
    A = handles.contribution_matrix(h)
    gens = handles.bounded_cycle_generators(h)
    p = linalg.rank(A)
    rep.certificates += ["every generator is a cycle", f"coefficients bounded by 3^{p}"]
    out_gens = []
    for g in gens:
        out_gens.append({"coefficients": dict(g.coefficients),
                         "weighted_area": str(handles.weighted_area(g, h))})
    rep.outputs.update({"matrix": A.to_json(), "rank": p, "coefficient_bound": 3 ** p,
                        "generators": out_gens, "total_area": str(h.total_area)})
    if args.plen is not None:
        budget = handles.area_budget(args.plen)
        rep.inputs["plen"] = args.plen
        rep.outputs["area_budget"] = budget
        if h.total_area <= args.plen and p <= 3 * args.plen:
            rep.certify(all(handles.weighted_area(g, h) <= budget for g in gens),
                        f"weighted areas within 27^n(9n^2+4n) for n={args.plen}")
        else:
            rep.warn("area budget not applicable: total area > plen or rank > 3*plen")
    if args.torsion_rows:
        rows = _read_matrix(args.torsion_rows)
        chk = handles.torsion_bound_check(h, rows)
        rep.inputs["torsion_rows"] = rows.to_json()
        rep.certify(chk.ok, f"max torsion order {chk.max_order} <= 2*3^{chk.wide_rows}")
        rep.outputs["torsion"] = chk._asdict()


def cmd_zeta(args, rep: Report) -> None:
    omega = lattice.LatticeVector(*args.omega)
    rep.inputs.update({"omega": list(args.omega), "m": args.m, "t": args.t})
    z = lattice.find_zeta(omega, args.m, args.t)
    s = omega + z.zeta
    rep.certificates += ["zeta is primitive", f"omega + zeta in {args.m}Z + {args.m}Z"]
    frac = lattice.ExtendedLatticeElement.fraction(omega, args.m)
    phi_frac = lattice.phi_zeta(frac, z)
    phi_omega = lattice.phi_zeta(lattice.ExtendedLatticeElement.lattice(omega, omega, args.m), z)
    rep.certify(args.m * phi_frac == phi_omega, "m * phi(omega/m) = phi(omega)")
    rep.outputs.update({
        "bezout": list(lattice.solve_diophantine(omega.x, omega.y)),
        "zeta": [z.zeta.x, z.zeta.y],
        "zeta_primitive": True,
        "omega_plus_zeta": [s.x, s.y],
        "phi_omega_over_m": phi_frac,
        "phi_omega": phi_omega,
    })


def _tree_entry(t: jsj.DecoratedTree) -> dict:
    return {"code": jsj.canonical_form(t), "tree": t.to_json()}


def cmd_enum_knots(args, rep: Report) -> None:
    cat = _read_catalog(args.catalog)
    if args.rank is not None:
        b = jsj.EnumerationBounds.for_rank(args.rank, args.max_p, args.max_q, args.max_r)
    elif args.max_vertices is not None:
        b = jsj.EnumerationBounds(args.max_vertices, args.max_p, args.max_q, args.max_r)
    else:
        raise InputError("give --max-vertices or --rank")
    rep.inputs.update({"max_vertices": b.max_vertices, "max_p": b.max_abs_p, "max_q": b.max_q,
                       "max_r": b.max_r, "catalog": cat.to_json()})
    trees = jsj.enumerate_trees(b, cat)
    rep.certificates.append("canonical codes pairwise distinct")
    rep.outputs["count"] = len(trees)
    if args.codes_only:
        rep.outputs["codes"] = [jsj.canonical_form(t) for t in trees]
    else:
        rep.outputs["trees"] = [_tree_entry(t) for t in trees]


def _tree_diagnostics(rep: Report, t, cat) -> bool:
    diags = jsj.validate_tree(t, cat)
    for d in diags:
        rep.error(d.message, node=d.node)
    return not diags


def cmd_validate(args, rep: Report) -> None:
    cat = _read_catalog(args.catalog)
    t = _read_tree(args.tree)
    rep.inputs["tree"] = t.to_json()
    ok = _tree_diagnostics(rep, t, cat)
    rep.outputs["valid"] = ok
    if ok:
        rep.outputs["code"] = jsj.canonical_form(t)
        rep.outputs["pieces"] = len(t.nodes)


def cmd_desatellite(args, rep: Report) -> None:
    cat = _read_catalog(args.catalog)
    t = _read_tree(args.tree)
    rep.inputs.update({"tree": t.to_json(), "edge": args.edge})
    if not _tree_diagnostics(rep, t, cat):
        return
    out = jsj.desatellite(t, args.edge, cat)
    rep.certificates += ["result validates", "vertex count decreased"]
    rep.outputs.update({"tree": out.to_json(), "code": jsj.canonical_form(out),
                        "pieces": len(out.nodes)})


def cmd_winding(args, rep: Report) -> None:
    cat = _read_catalog(args.catalog)
    t = _read_tree(args.tree)
    rep.inputs.update({"tree": t.to_json(), "node": args.node})
    if not _tree_diagnostics(rep, t, cat):
        return
    path = jsj.winding_path(t, args.node)
    flagged = [s.child for s in path if s.hyperbolic]
    if flagged:
        rep.warn("hyperbolic edges contribute the trivial divisor 1", edges=flagged)
    rep.outputs.update({
        "divisibility": jsj.winding_divisibility(t, args.node),
        "path": [s._asdict() for s in path],
        "hyperbolic_edges": flagged,
    })


def cmd_bounds(args, rep: Report) -> None:
    n, dps = args.plen, args.precision
    if n < 0:
        raise InputError("--plen must be nonnegative")
    rep.inputs.update({"plen": n, "vol": args.vol, "eps": args.eps, "precision": dps})
    consts = gb.bound_constants(n)
    g = gb.global_bounds(n, args.vol, args.eps, dps)
    out = {
        "T": {"value": consts.T, "formula": "2*3^n"},
        "A_over_pi": {"value": consts.A_over_pi, "formula": "27^n*(9n^2+4n)"},
        "cable_q_cutoff": {"value": consts.T, "formula": "q <= T(n) = 2*3^n"},
        "volume_bound": {"pi_coefficient": n, "value": _num(g["volume_bound"], dps),
                         "formula": "pi*n"},
        "gromov_norm_bound": {"value": _num(g["gromov_norm_bound"], dps),
                              "formula": f"pi*n/v3, v3 >= {gb.V3_INTERVAL[0]}"},
        "critical_geodesic_length": {"value": _num(gb.critical_geodesic_length(n, dps), dps),
                                     "formula": "sup l: pi*sinh^2(r(l)) > A(n), "
                                                "sinh^2(r) = sqrt(1-c)/c - 1/2, c = 4*pi*l/sqrt(3)"},
        "critical_cone_order": {"value": gb.critical_cone_order(n, dps),
                                "formula": "min q: pi*(1/(4 sin^2(pi/q)) - 1) > A(n)"},
        "tube_r_max": {"value": _num(g["tube_r_max"], dps), "formula": "arcsinh(sqrt(A(n)/pi))"},
    }
    rep.certificates += ["critical geodesic length bracketed by interval arithmetic",
                         "critical cone order certified at q-1 and q"]
    if "degree_bound" in g:
        out["degree_bound"] = {"value": g["degree_bound"], "formula": "floor(pi*n/vol)"}
    if "diam_thick" in g:
        out["omega"] = {"value": _num(g["omega"], dps), "formula": "pi*(sinh(eps)-eps)"}
        out["diam_thick"] = {"value": _num(g["diam_thick"], dps), "formula": "2*pi*eps*n/omega"}
        out["diam_total"] = {"value": _num(g["diam_total"], dps),
                             "formula": "diam_thick + 2*(eps + 2*tube_r_max)"}
    if args.tree:
        cat = _read_catalog(args.catalog)
        t = _read_tree(args.tree)
        rep.inputs["tree"] = t.to_json()
        if _tree_diagnostics(rep, t, cat):
            st = jsj.piece_stats(t, cat, n, args.rank, dps)
            out["piece_stats"] = st.__dict__.copy()
            if st.volume_ok is None:
                rep.warn("volume comparison not certified at this precision")
    rep.outputs.update(out)


# ------------------------------------------------------------------ parser

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS,
                        help="working precision in decimal digits (default 50)")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--catalog", default=argparse.SUPPRESS,
                        help="hyperbolic catalog JSON file")
    return common


def build_parser() -> argparse.ArgumentParser:
    # a fresh parent per parser: set_defaults below must not leak into the subcommands
    parser = argparse.ArgumentParser(prog="knotcalc", parents=[_common()],
                                     description="Exact kernels for knot complements and group presentations.")
    parser.set_defaults(precision=gb.DEFAULT_DPS, format="json", catalog=None)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help):
        sp = sub.add_parser(name, parents=[_common()], help=help)
        sp.set_defaults(func=func)
        return sp

    sp = add("plen", cmd_plen, "presentation length")
    sp.add_argument("presentation", help="presentation text, file, or - for stdin")
    sp = add("triangulate", cmd_triangulate, "triangular presentation of equal length")
    sp.add_argument("presentation")
    sp = add("snf", cmd_snf, "Smith normal form of an integer matrix")
    sp.add_argument("matrix", help='JSON {"rows","cols","entries"}: file, literal, or -')
    sp = add("kernel-basis", cmd_kernel_basis, "bounded integral kernel basis")
    sp.add_argument("matrix")
    sp = add("cycles", cmd_cycles, "bounded relative cycles of a handle complex")
    sp.add_argument("complex", help="handle complex JSON")
    sp.add_argument("--plen", type=int, default=None, help="check weighted areas against A(plen)")
    sp.add_argument("--torsion-rows", default=None, help="presentation matrix for the torsion check")
    sp = add("zeta", cmd_zeta, "slope zeta and phi_zeta for an extended lattice")
    sp.add_argument("--omega", type=_pair, required=True, metavar="A,B")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--t", type=int, default=0)
    sp = add("enum-knots", cmd_enum_knots, "enumerate decorated JSJ trees")
    sp.add_argument("--max-vertices", type=int, default=None)
    sp.add_argument("--rank", type=int, default=None, help="use 4n-3 vertices for rank n")
    sp.add_argument("--max-p", type=int, required=True)
    sp.add_argument("--max-q", type=int, required=True)
    sp.add_argument("--max-r", type=int, default=2)
    sp.add_argument("--codes-only", action="store_true")
    sp = add("desatellite", cmd_desatellite, "cut an edge and rewrite the parent piece")
    sp.add_argument("tree")
    sp.add_argument("--edge", required=True, help="id of the child node below the edge")
    sp = add("validate", cmd_validate, "check a decorated tree")
    sp.add_argument("tree")
    sp = add("winding", cmd_winding, "winding divisibility of a subtree")
    sp.add_argument("tree")
    sp.add_argument("--node", required=True)
    sp = add("bounds", cmd_bounds, "closed-form hyperbolic bounds")
    sp.add_argument("--plen", type=int, required=True)
    sp.add_argument("--vol", default=None)
    sp.add_argument("--eps", default=None)
    sp.add_argument("--tree", default=None, help="also report piece statistics for this tree")
    sp.add_argument("--rank", type=int, default=None)
    return parser


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    return str(obj)


def _text(obj, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        return [line for k, v in obj.items() for line in _text(v, f"{prefix}{k}.")]
    if isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        return [line for i, v in enumerate(obj) for line in _text(v, f"{prefix}{i}.")]
    return [f"{prefix.rstrip('.')}: {json.dumps(obj, default=_jsonable)}"]


def render(rep: Report, fmt: str) -> str:
    if fmt == "text":
        lines = [f"command: {rep.command}"] + _text(rep.outputs)
        lines += [f"certified: {c}" for c in rep.certificates]
        lines += [f"{d['severity']}: {d['message']}" for d in rep.diagnostics]
        return "\n".join(lines) + "\n"
    return json.dumps(rep.to_json(), indent=2, default=_jsonable) + "\n"


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    rep = Report(args.command)
    code = EXIT_OK
    try:
        args.func(args, rep)
        if rep.failed:
            code = EXIT_INPUT
    except CertificateError as exc:
        rep.diagnostics.append({"severity": "error", "kind": "certificate", "message": str(exc)})
        code = EXIT_CERTIFICATE
    except (InputError, PrecisionError) as exc:
        diag = {"severity": "error", "message": str(exc)}
        if getattr(exc, "position", None) is not None:
            diag["position"] = exc.position
        rep.diagnostics.append(diag)
        code = EXIT_INPUT
    except KnotcalcError as exc:  # pragma: no cover - every subclass is handled above
        rep.error(str(exc))
        code = EXIT_INPUT
    stdout.write(render(rep, args.format))
    if code != EXIT_OK:
        for d in rep.diagnostics:
            if d["severity"] == "error":
                print(f"knotcalc {args.command}: {d['message']}", file=sys.stderr)
    return code


def main() -> None:
    # A(n)/pi is reported exactly; for large n it has more digits than the default str() guard allows
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    sys.exit(run())


if __name__ == "__main__":
    main()
