"""Command line entry point.

    quasitoric <inspect|atlas|project|verify|example> ... [--samples N] [--seed S]
               [--tol-psi X] [--radius R] [--out PATH]

Every command writes one JSON report (to ``--out`` or stdout). Exit codes:
0 success, 1 I/O error, 2 invalid input (bad spec, non-simple polytope,
point outside ``C^d_Delta``), 3 failed checks.
"""

import argparse
import hashlib
import json
import math
import sys
from itertools import permutations

import numpy as np

from . import __version__
from . import atlas as atl
from . import fixtures, kempfness, lattice, moment
from .errors import ChartDomainError, ConvergenceError, NonSimpleError, QuasitoricError
from .polytope import parse_spec, zero_set
from .verify import RunConfig, recognize, run_suite

EXIT_OK, EXIT_IO, EXIT_INPUT, EXIT_CHECKS = 0, 1, 2, 3
EXAMPLES = ("interval", "triangle", "pentagon", "square")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


# -- JSON -------------------------------------------------------------------------------

def jsonable(x):
    """Plain JSON data: complex numbers as ``[re, im]``, non-finite floats as
    strings. Floats keep their shortest round-trip repr."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [jsonable(float(x.real)), jsonable(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


def dumps(report):
    return json.dumps(jsonable(report), indent=2, sort_keys=False, allow_nan=False) + "\n"


# -- input --------------------------------------------------------------------------------

def read_spec(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise CliError(f"{path} is not UTF-8", EXIT_INPUT) from None
    return text, hashlib.sha256(raw).hexdigest()


def parse_point(text):
    """Comma or whitespace separated complex numbers (``1``, ``0.5-2j``), or a
    JSON list whose entries are numbers or ``[re, im]`` pairs."""
    text = text.strip()
    if text.startswith("["):
        vals = json.loads(text)
        return np.array([complex(*v) if isinstance(v, list) else complex(v) for v in vals])
    tokens = text.replace(",", " ").split()
    return np.array([complex(t.replace(" ", "")) for t in tokens])


def base_report(command, digest, config, source):
    return {
        "tool": {"name": "quasitoric", "version": __version__},
        "command": command,
        "input": {"source": source, "sha256": digest},
        "config": {
            "eps_geom": config.eps_geom, "eps_lin": config.eps_lin,
            "tol_psi": config.tol_psi, "h_fd": config.h_fd, "radius": config.radius,
            "samples": config.samples, "seed": config.seed, "rng": "numpy PCG64",
        },
    }


# -- report sections ----------------------------------------------------------------------

def polytope_section(p):
    out = {"n": p.n, "d": p.d, "normals": p.normals, "offsets": p.offsets}
    try:
        verts = p.vertices
    except NonSimpleError as exc:
        out["simple"] = False
        out["nonsimple_vertex"] = {"point": exc.point,
                                   "facets": [j + 1 for j in exc.active]}
        return out
    out["simple"] = True
    out["vertices"] = [{"point": v.point, "facets": [j + 1 for j in v.active]}
                       for v in verts]
    faces = sorted(p.faces, key=lambda f: (len(f), sorted(f)))
    out["faces"] = [[j + 1 for j in sorted(f)] for f in faces]
    return out


def atlas_section(A, config):
    p = A.polytope
    charts = []
    for c in A:
        order = lattice.gamma_order(c.gamma_gens)
        charts.append({
            "index": c.index + 1,
            "facets": [j + 1 for j in c.active],
            "vertex": c.vertex.point,
            "gamma_generators": [{"word": g.word, "phase": g.phase} for g in c.gamma_gens],
            "gamma_order": order,
            "gamma_trivial": order == 1,
        })
    transitions = [{"source": i + 1, "target": j + 1, "matrix": T}
                   for (i, j), T in A.transition_matrices().items() if i != j]
    out = {
        "kernel_basis": A.kernel.matrix,
        "quasilattice": A.quasilattice.generators,
        "charts": charts,
        "all_gamma_trivial": all(c["gamma_trivial"] for c in charts),
        "transitions": transitions,
    }
    kind, prm = recognize(p)
    if kind == "interval":
        b = A.kernel.matrix[:, 0]
        out["interval"] = {"s": prm["s"], "t": prm["t"],
                           "n_direction_ratio": float(b[1] / b[0]),
                           "transition_slope": float(atl.transition_matrix(A[0], A[1])[0, 0])}
    out["cocycle"] = cocycle_section(A, config)
    return out


def cocycle_section(A, config, tol=1e-8):
    rng = np.random.default_rng(config.seed)
    per = max(1, min(config.samples, 5))
    worst, count = 0.0, 0
    n = A.polytope.n
    for i, j, k in permutations(range(len(A)), 3):
        for _ in range(per):
            s = np.exp(0.5 * rng.normal(size=n)) * np.exp(2j * np.pi * rng.random(n))
            worst = max(worst, atl.cocycle_residual(A, i, j, k, s, radius=config.radius))
            count += 1
    return {"samples": count, "max_residual": worst, "tolerance": tol,
            "status": "pass" if worst <= tol else "fail"}


def face_diagnosis(p, z):
    zs = sorted(zero_set(z, p.eps))
    face = set(zs)
    inside = any(face <= set(v.active) for v in p.vertices)
    return {"zero_coordinates": [j + 1 for j in zs], "is_face": inside}


# -- commands ------------------------------------------------------------------------------

def load_polytope(text):
    try:
        return parse_spec(text)
    except QuasitoricError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None


def cmd_inspect(text, digest, config, source):
    report = base_report("inspect", digest, config, source)
    p = load_polytope(text)
    report["polytope"] = polytope_section(p)
    report["status"] = "ok" if report["polytope"]["simple"] else "non-simple"
    return report, EXIT_OK if report["polytope"]["simple"] else EXIT_INPUT


def _require_simple(p, report):
    report["polytope"] = polytope_section(p)
    if not report["polytope"]["simple"]:
        v = report["polytope"]["nonsimple_vertex"]
        report["status"] = "non-simple"
        report["error"] = (f"non-simple vertex {list(map(float, v['point']))} "
                           f"lies on facets {v['facets']}")
        return False
    return True


def cmd_atlas(text, digest, config, source):
    report = base_report("atlas", digest, config, source)
    p = load_polytope(text)
    if not _require_simple(p, report):
        return report, EXIT_INPUT
    report["atlas"] = atlas_section(atl.build_atlas(p), config)
    report["status"] = report["atlas"]["cocycle"]["status"]
    return report, EXIT_OK if report["status"] == "pass" else EXIT_CHECKS


def cmd_project(text, digest, config, source, point):
    report = base_report("project", digest, config, source)
    p = load_polytope(text)
    if not _require_simple(p, report):
        return report, EXIT_INPUT
    if len(point) != p.d:
        raise CliError(f"point has {len(point)} coordinates, expected d = {p.d}", EXIT_INPUT)
    A = atl.build_atlas(p)
    report["point"] = point
    try:
        proj = kempfness.project_to_level(p, A.kernel, point, tol=config.tol_psi)
    except ChartDomainError as exc:
        report["status"] = "outside"
        report["error"] = str(exc)
        report["face_diagnosis"] = face_diagnosis(p, point)
        return report, EXIT_INPUT
    except ConvergenceError as exc:
        report["status"] = "no-convergence"
        report["error"] = str(exc)
        return report, EXIT_CHECKS
    chart = A.chart_for(proj.w)
    complex_slice = atl.to_slice(chart, point)
    sympl_slice = kempfness.chi_inverse_lift(chart, A.kernel, complex_slice, tol=config.tol_psi)
    back = kempfness.chi_lift(chart, sympl_slice)
    psi = float(np.abs(moment.moment_Psi(p, A.kernel, proj.w)).max())
    report["projection"] = {
        "Y": proj.Y,
        "exponent": A.kernel.matrix @ proj.Y,
        "w": proj.w,
        "psi_residual": psi,
        "iterations": proj.iterations,
        "chart": chart.index + 1,
        "chart_facets": [j + 1 for j in chart.active],
        "complex_slice": complex_slice,
        "symplectic_slice": sympl_slice,
        "roundtrip_residual": atl.model_distance(chart, back, complex_slice, config.radius),
    }
    report["status"] = "pass" if psi <= config.tol_psi else "fail"
    return report, EXIT_OK if report["status"] == "pass" else EXIT_CHECKS


def _verify_into(report, p, config):
    records, ctx = run_suite(p, config)
    report["checks"] = [r.as_dict() for r in records]
    if ctx is not None:
        st = ctx.stats
        report["solver"] = {"solves": st.solves, "iterations": st.iterations,
                            "max_iterations": st.max_iterations,
                            "max_residual": st.max_residual}
    failed = [r.name for r in records if r.status == "fail"]
    report["failed"] = failed
    report["status"] = "fail" if failed else "pass"
    return EXIT_CHECKS if failed else EXIT_OK


def cmd_verify(text, digest, config, source):
    report = base_report("verify", digest, config, source)
    p = load_polytope(text)
    if not _require_simple(p, report):
        return report, EXIT_INPUT
    report["atlas"] = atlas_section(atl.build_atlas(p), config)
    return report, _verify_into(report, p, config)


def cmd_example(name, config, s=None, t=None):
    if name not in EXAMPLES:
        raise CliError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}",
                       EXIT_INPUT)
    params = {k: v for k, v in (("s", s), ("t", t)) if v is not None}
    if params and name not in ("interval", "triangle"):
        raise CliError(f"example {name!r} takes no parameters", EXIT_INPUT)
    text = fixtures.spec_text(name, **params)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    report = base_report("example", digest, config, f"example:{name}")
    report["spec"] = json.loads(text)
    p = load_polytope(text)
    if not _require_simple(p, report):
        return report, EXIT_INPUT
    report["atlas"] = atlas_section(atl.build_atlas(p), config)
    code = _verify_into(report, p, config)
    if report["atlas"]["cocycle"]["status"] != "pass":
        report["status"], code = "fail", EXIT_CHECKS
    return report, code


# -- argument parsing ------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, default=100, help="samples per check (default 100)")
    common.add_argument("--seed", type=int, default=7, help="PCG64 seed (default 7)")
    common.add_argument("--tol-psi", type=float, default=RunConfig.tol_psi,
                        help="level-set residual tolerance (default 1e-10)")
    common.add_argument("--radius", type=int, default=RunConfig.radius,
                        help="word-search radius for chart-group equality (default 3)")
    common.add_argument("--out", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="quasitoric",
                                     description="Charts, projections and Kaehler forms "
                                                 "of quasitoric quotients of simple polytopes.")
    parser.add_argument("--version", action="version", version=f"quasitoric {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, hlp in (("inspect", "validate a spec, list vertices and faces"),
                      ("atlas", "vertex charts, chart groups, transitions, cocycle check"),
                      ("verify", "run the full check suite on a polytope")):
        sp = sub.add_parser(name, parents=[common], help=hlp)
        sp.add_argument("spec", help="polytope spec file (JSON)")
    sp = sub.add_parser("project", parents=[common],
                        help="project a point of C^d onto the level set")
    sp.add_argument("spec")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--point", help="coordinates, e.g. '1,1' or '1+2j, 0.5'")
    group.add_argument("--point-file", help="file holding the coordinates")
    sp = sub.add_parser("example", parents=[common], help="run a built-in worked example")
    sp.add_argument("name", help=", ".join(EXAMPLES))
    sp.add_argument("--s", type=float, help="parameter s (interval, triangle)")
    sp.add_argument("--t", type=float, help="parameter t (interval, triangle)")
    return parser


def emit(report, out):
    text = dumps(report)
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc.strerror}", EXIT_IO) from None
    print(f"{report['command']}: {report.get('status', 'ok')} -> {out}")


def run(argv=None):
    """Parse ``argv`` and execute; returns the exit code."""
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(tol_psi=args.tol_psi, radius=args.radius,
                           samples=args.samples, seed=args.seed)
    except ValueError as exc:
        print(f"quasitoric: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.command == "example":
            report, code = cmd_example(args.name, config, args.s, args.t)
        else:
            text, digest = read_spec(args.spec)
            if args.command == "project":
                if args.point is not None:
                    raw = args.point
                else:
                    try:
                        with open(args.point_file, encoding="utf-8") as fh:
                            raw = fh.read()
                    except OSError as exc:
                        raise CliError(f"cannot read {args.point_file}: {exc.strerror}",
                                       EXIT_IO) from None
                try:
                    point = parse_point(raw)
                except ValueError as exc:
                    raise CliError(f"cannot parse point: {exc}", EXIT_INPUT) from None
                report, code = cmd_project(text, digest, config, args.spec, point)
            else:
                fn = {"inspect": cmd_inspect, "atlas": cmd_atlas, "verify": cmd_verify}
                report, code = fn[args.command](text, digest, config, args.spec)
        emit(report, args.out)
    except CliError as exc:
        print(f"quasitoric: error: {exc}", file=sys.stderr)
        return exc.code
    if code == EXIT_INPUT and "error" in report:
        print(f"quasitoric: error: {report['error']}", file=sys.stderr)
    if code == EXIT_CHECKS and report.get("failed"):
        print("quasitoric: failed checks: " + ", ".join(report["failed"]), file=sys.stderr)
    return code


def main():
    sys.exit(run())
