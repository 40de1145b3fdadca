"""Batch command-line frontend.

Each subcommand runs one module pipeline, writes its numeric artifacts
(CSV with full-precision scientific notation, JSON, optionally SVG) into
the output directory, and finishes with a manifest.json recording the
configuration, library versions, wall time, and a SHA-256 per output
file. All sampling is driven by the --seed flag, so identical
invocations produce identical numeric files.

Exit codes: 0 on success, 1 on numerical failure (a GeometryError from
the modules), 2 on input problems (bad flags, missing or malformed
files).
"""

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np
import scipy

from . import __version__
from .forms import GeometryError, QuadraticSpace, standard_space
from .model import HPoint, HalfspaceDomain, hilbert_distance, \
    omega_membership, pair_class
from .graphs import constant_graph, equatorial_graph, folded_boundary_graph, \
    isotropic_boundary_graph, lipschitz_check, maximal_graph
from .crowns import crown_orbit_graph, detect_crowns
from .groups import BendDatum, CoxeterDiagram, HnnLetter, bend_amalgam, \
    bend_hnn, canonical_X, det_roots, gt_polygon, signature_scan, \
    toy_bend_datum, word_ball
from .anosov import gap_series, limit_cone_sample, negativity_test, \
    sample_limit_set


class InputError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


def _load_json(path):
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as err:
        raise InputError("%s: %s" % (path, err.strerror or err))
    except json.JSONDecodeError as err:
        raise InputError("%s: line %d column %d: %s"
                         % (path, err.lineno, err.colno, err.msg))


def _as_matrix(data, origin):
    try:
        matrix = np.array(data, dtype=float)
    except (TypeError, ValueError):
        raise InputError("%s: expected a rectangular numeric array" % origin)
    if matrix.ndim != 2:
        raise InputError("%s: expected a matrix (list of rows)" % origin)
    return matrix


def _as_vector(data, origin):
    try:
        vec = np.array(data, dtype=float)
    except (TypeError, ValueError):
        raise InputError("%s: expected a numeric vector" % origin)
    if vec.ndim != 1:
        raise InputError("%s: expected a flat vector" % origin)
    return vec


def _read_csv_rows(path):
    rows = []
    try:
        with open(path) as handle:
            for line_no, line in enumerate(handle, 1):
                line = line.strip()
                if not line:
                    continue
                fields = line.split(",")
                try:
                    rows.append([float(f) for f in fields])
                except ValueError:
                    if line_no == 1:
                        continue
                    raise InputError("%s: line %d: non-numeric field"
                                     % (path, line_no))
    except OSError as err:
        raise InputError("%s: %s" % (path, err.strerror or err))
    if not rows:
        raise InputError("%s: no numeric rows" % path)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InputError("%s: rows have inconsistent width" % path)
    return np.array(rows)


def _resolve_tol(args):
    if args.tol is not None:
        return args.tol
    env = os.environ.get("PQGEO_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise InputError("PQGEO_TOL is not a number: %r" % env)
    return None


def _space_from_args(args, tol):
    if getattr(args, "gram", None):
        gram = _as_matrix(_load_json(args.gram), args.gram)
        try:
            return QuadraticSpace(gram, tol=tol)
        except GeometryError as err:
            raise InputError("%s: %s" % (args.gram, err))
    if getattr(args, "p", None) is not None and \
            getattr(args, "q", None) is not None:
        return standard_space(args.p, args.q + 1, tol=tol)
    raise InputError("need either --gram or both --p and --q")


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    return "%.16e" % value


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(_fmt(v) for v in row) + "\n")


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def _write_json(path, obj):
    with open(path, "w") as handle:
        json.dump(_clean(obj), handle, indent=2, sort_keys=True)
        handle.write("\n")


def _svg_scatter(path, points, xlabel, ylabel, title):
    width = height = 480
    pad = 48.0
    parts = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
             'viewBox="0 0 %d %d">' % (width, height, width, height),
             '<rect width="%d" height="%d" fill="white"/>' % (width, height)]
    if points:
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        xmin, xmax = min(xs), max(xs)
        ymin, ymax = min(ys), max(ys)
        if xmax - xmin < 1e-12:
            xmin, xmax = xmin - 1.0, xmax + 1.0
        if ymax - ymin < 1e-12:
            ymin, ymax = ymin - 1.0, ymax + 1.0
        span_x = xmax - xmin
        span_y = ymax - ymin
        xmin, xmax = xmin - 0.05 * span_x, xmax + 0.05 * span_x
        ymin, ymax = ymin - 0.05 * span_y, ymax + 0.05 * span_y

        def sx(x):
            return pad + (x - xmin) / (xmax - xmin) * (width - 2 * pad)

        def sy(y):
            return height - pad - (y - ymin) / (ymax - ymin) * \
                (height - 2 * pad)

        parts.append('<g stroke="#888" stroke-width="1">')
        parts.append('<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f"/>'
                     % (pad, height - pad, width - pad, height - pad))
        parts.append('<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f"/>'
                     % (pad, pad, pad, height - pad))
        parts.append('</g>')
        parts.append('<g font-family="sans-serif" font-size="11" '
                     'fill="#444">')
        parts.append('<text x="%.2f" y="%.2f">%.4g</text>'
                     % (pad, height - pad + 14, xmin))
        parts.append('<text x="%.2f" y="%.2f" text-anchor="end">%.4g</text>'
                     % (width - pad, height - pad + 14, xmax))
        parts.append('<text x="%.2f" y="%.2f">%.4g</text>'
                     % (4, height - pad, ymin))
        parts.append('<text x="%.2f" y="%.2f">%.4g</text>' % (4, pad, ymax))
        parts.append('</g>')
        parts.append('<g fill="#1f6fb2" fill-opacity="0.75">')
        for x, y in points:
            parts.append('<circle cx="%.2f" cy="%.2f" r="3"/>'
                         % (sx(x), sy(y)))
        parts.append('</g>')
    else:
        parts.append('<text x="%d" y="%d" font-family="sans-serif" '
                     'font-size="14" text-anchor="middle">no points</text>'
                     % (width // 2, height // 2))
    parts.append('<g font-family="sans-serif" font-size="13" fill="#111">')
    parts.append('<text x="%d" y="20" text-anchor="middle">%s</text>'
                 % (width // 2, title))
    parts.append('<text x="%d" y="%d" text-anchor="middle">%s</text>'
                 % (width // 2, height - 8, xlabel))
    parts.append('<text x="14" y="%d" text-anchor="middle" '
                 'transform="rotate(-90 14 %d)">%s</text>'
                 % (height // 2, height // 2, ylabel))
    parts.append('</g>')
    parts.append('</svg>')
    with open(path, "w", newline="") as handle:
        handle.write("\n".join(parts) + "\n")


def _run_classify_pair(args, tol):
    space = _space_from_args(args, tol)
    x = _as_vector(_load_json(args.x), args.x)
    y = _as_vector(_load_json(args.y), args.y)
    px = HPoint(space, x, normalize=True)
    py = HPoint(space, y, normalize=True)
    kind = pair_class(px, py)
    value = float(space.eval(px.vec, py.vec))
    _write_json(os.path.join(args.out, "classify-pair.json"),
                {"class": kind, "pairing": value,
                 "x": px.vec, "y": py.vec})
    return ["classify-pair.json"], "pair class: %s (b = %.12g)" % (kind,
                                                                   value)


def _run_hilbert_dist(args, tol):
    space = _space_from_args(args, tol)
    constraints = _as_matrix(_load_json(args.domain), args.domain)
    domain = HalfspaceDomain(space, constraints)
    y = _as_vector(_load_json(args.y), args.y)
    z = _as_vector(_load_json(args.z), args.z)
    dist = hilbert_distance(domain, y, z)
    _write_json(os.path.join(args.out, "hilbert-dist.json"),
                {"distance": dist, "constraints": constraints.shape[0]})
    return ["hilbert-dist.json"], "hilbert distance: %.16g" % dist


def _run_omega_test(args, tol):
    space = _space_from_args(args, tol)
    constraints = _as_matrix(_load_json(args.domain), args.domain)
    domain = HalfspaceDomain(space, constraints)
    x = _as_vector(_load_json(args.x), args.x)
    status, worst = omega_membership(domain, x)
    _write_json(os.path.join(args.out, "omega-test.json"),
                {"status": status, "worst_constraint": worst})
    return ["omega-test.json"], "omega membership: %s (constraint %d)" \
        % (status, worst)


def _parse_floats(text, origin):
    try:
        return [float(f) for f in text.split(",")]
    except ValueError:
        raise InputError("%s: expected comma-separated numbers" % origin)


def _graph_from_args(args):
    family = args.family
    if family in ("crown-orbit", "maximal-crown"):
        if family == "maximal-crown":
            if args.p is None:
                raise InputError("--family=maximal-crown needs --p")
            if args.q is not None and args.q != args.p - 1:
                raise InputError("maximal-crown orbits need q = p - 1")
            tau = np.full(args.p, 1.0 / math.sqrt(args.p))
        else:
            if not args.tau:
                raise InputError("--family=crown-orbit needs --tau")
            tau = np.array(_parse_floats(args.tau, "--tau"))
            if args.p is not None and args.p != tau.size:
                raise InputError("--p disagrees with the length of --tau")
        return crown_orbit_graph(tau)
    if args.p is None or args.q is None:
        raise InputError("--family=%s needs --p and --q" % family)
    builders = {
        "constant": constant_graph,
        "maximal": maximal_graph,
        "equatorial": equatorial_graph,
        "isotropic-boundary": isotropic_boundary_graph,
        "folded-boundary": folded_boundary_graph,
    }
    return builders[family](args.p, args.q)


def _run_graph_check(args, tol):
    graph = _graph_from_args(args)
    report = lipschitz_check(graph, pairs=args.pairs, rng=args.seed)
    U = graph.sample_domain(args.samples, rng=args.seed)
    V = graph.evaluate(U)
    header = ["u%d" % i for i in range(U.shape[1])] + \
        ["v%d" % (i + 1) for i in range(V.shape[1])]
    _write_csv(os.path.join(args.out, "graph-samples.csv"), header,
               np.hstack((U, V)))
    payload = {
        "family": args.family,
        "max_ratio": report.max_ratio,
        "margin": report.margin,
        "strict": report.strict,
        "violations": report.violations,
        "pairs_used": report.pairs_used,
        "kernel_dim": report.kernel_dim,
    }
    _write_json(os.path.join(args.out, "graph-report.json"), payload)
    summary = "family %s: max ratio %.6f, strict=%s" % (
        args.family, report.max_ratio, report.strict)
    if report.kernel_dim is not None:
        summary += ", kernel dim %d" % report.kernel_dim
    return ["graph-samples.csv", "graph-report.json"], summary


def _run_crown_scan(args, tol):
    space = _space_from_args(args, tol)
    rows = _read_csv_rows(args.input)
    if rows.shape[1] != space.dim:
        raise InputError("%s: rows have %d columns, form has dimension %d"
                         % (args.input, rows.shape[1], space.dim))
    scan = detect_crowns(space, rows, args.j, max_results=args.max_results,
                         max_subsets=args.max_subsets)
    crowns = [{"indices": c.indices, "lifts": c.lifts, "pairing": c.pairing}
              for c in scan]
    _write_json(os.path.join(args.out, "crowns.json"),
                {"j": args.j, "count": len(scan), "complete": scan.complete,
                 "crowns": crowns})
    return ["crowns.json"], "found %d %d-crowns (complete=%s)" % (
        len(scan), args.j, scan.complete)


def _run_coxeter_scan(args, tol):
    data = _load_json(args.diagram)
    try:
        diagram = CoxeterDiagram.from_dict(data)
    except GeometryError as err:
        raise InputError("%s: %s" % (args.diagram, err))
    if args.steps < 2:
        raise InputError("--steps must be at least 2")
    grid = np.linspace(args.t_min, args.t_max, args.steps)
    rows = signature_scan(diagram, grid)
    table = [(r.t, r.signature.pos, r.signature.neg, r.signature.null,
              r.det, r.relation_residual) for r in rows]
    _write_csv(os.path.join(args.out, "coxeter-scan.csv"),
               ["t", "pos", "neg", "null", "det", "max-relation-residual"],
               table)
    outputs = ["coxeter-scan.csv"]
    summary = "%d grid rows" % len(rows)
    if len(diagram.infinite_pairs()) == 1:
        roots = det_roots(diagram)
        _write_json(os.path.join(args.out, "det-roots.json"),
                    {"roots": roots.roots,
                     "coefficients": roots.coefficients,
                     "residuals": roots.residuals,
                     "both_positive": roots.both_positive})
        outputs.append("det-roots.json")
        summary += "; det roots %.12g, %.12g" % roots.roots
    return outputs, summary


def _run_gt_polygon(args, tol):
    poly = gt_polygon(args.k, args.n, args.q)
    space = poly.space
    table = []
    count = 2 * poly.k
    for j in range(count):
        v = poly.vertices[j]
        nxt = poly.vertices[(j + 1) % count]
        table.append([j] + list(v) + [space.eval(v), space.eval(v, nxt)])
    header = ["index"] + ["x%d" % i for i in range(2 + args.q)] + \
        ["norm", "edge_pairing"]
    _write_csv(os.path.join(args.out, "gt-polygon.csv"), header, table)
    _write_json(os.path.join(args.out, "gt-polygon.json"),
                {"k": poly.k, "n": poly.n, "q": args.q, "alpha": poly.alpha,
                 "edge_pairing": poly.edge_pairing})
    return ["gt-polygon.csv", "gt-polygon.json"], \
        "2k = %d vertices, alpha = %.12g" % (count, poly.alpha)


def _bend_datum_from_json(path, tol):
    data = _load_json(path)
    for field in ("gram", "factors", "edge_groups", "factor_chains",
                  "direction"):
        if field not in data:
            raise InputError("%s: missing field '%s'" % (path, field))
    gram = _as_matrix(data["gram"], path + ":gram")
    space = QuadraticSpace(gram, tol=tol)
    factors = [[_as_matrix(g, path + ":factors") for g in gens]
               for gens in data["factors"]]
    edge_groups = [[_as_matrix(g, path + ":edge_groups") for g in gens]
                   for gens in data["edge_groups"]]
    letters = []
    for spec_ in data.get("stable_letters", []):
        letters.append(HnnLetter(_as_matrix(spec_["matrix"],
                                            path + ":stable_letters"),
                                 spec_.get("edge", 0),
                                 spec_.get("chain", ())))
    positions = [[tuple(pair) for pair in entry]
                 for entry in data.get("edge_positions", [])]
    datum = BendDatum(space, factors, edge_groups, data["factor_chains"],
                      edge_positions=positions, stable_letters=letters)
    direction = _as_matrix(data["direction"], path + ":direction")
    return datum, direction


def _run_bend(args, tol):
    if args.toy:
        datum = toy_bend_datum()
        direction = canonical_X(2, 1, 1)
    elif args.datum:
        datum, direction = _bend_datum_from_json(args.datum, tol)
    else:
        raise InputError("need --datum or --toy")
    bent = bend_amalgam(datum, args.factor, direction, args.s)
    letters = [bend_hnn(datum, i, direction, args.s)
               for i in range(len(datum.stable_letters))]
    form_residual = 0.0
    for gens in bent:
        for g in gens:
            form_residual = max(form_residual,
                                datum.space.isometry_residual(g))
    for g in letters:
        form_residual = max(form_residual, datum.space.isometry_residual(g))
    edge_residual = 0.0
    for positions in datum.edge_positions:
        mats = [bent[f][pos] for f, pos in positions]
        for i in range(1, len(mats)):
            edge_residual = max(edge_residual,
                                float(np.max(np.abs(mats[i] - mats[0]))))
    hnn_residual = 0.0
    for letter, bent_letter in zip(datum.stable_letters, letters):
        inv = np.linalg.inv(bent_letter)
        images = datum.edge_groups[letter.edge]
        if letter.edge < len(datum.edge_positions) and \
                len(datum.edge_positions[letter.edge]) >= 2:
            positions = datum.edge_positions[letter.edge]
            f0, p0 = positions[0]
            f1, p1 = positions[-1]
            pairs = [(bent[f0][p0], bent[f1][p1])]
        else:
            pairs = [(h, h) for h in images]
        for source, target in pairs:
            hnn_residual = max(hnn_residual, float(np.max(np.abs(
                bent_letter @ source @ inv - target))))
    payload = {
        "s": args.s,
        "factor": args.factor,
        "factors": [[g for g in gens] for gens in bent],
        "stable_letters": letters,
        "residuals": {"form": form_residual, "edge": edge_residual,
                      "hnn": hnn_residual},
    }
    _write_json(os.path.join(args.out, "bend.json"), payload)
    return ["bend.json"], \
        "bent factor %d at s=%g; residuals form %.3g, edge %.3g, hnn %.3g" \
        % (args.factor, args.s, form_residual, edge_residual, hnn_residual)


def _generators_from_args(args, space):
    data = _load_json(args.gens)
    if not isinstance(data, list) or not data:
        raise InputError("%s: expected a non-empty list of matrices"
                         % args.gens)
    gens = [_as_matrix(m, args.gens) for m in data]
    for g in gens:
        if g.shape != (space.dim, space.dim):
            raise InputError("%s: generator shape %s does not match "
                             "form dimension %d"
                             % (args.gens, g.shape, space.dim))
    return gens


def _run_anosov_diagnose(args, tol):
    space = _space_from_args(args, tol)
    gens = _generators_from_args(args, space)
    ball = word_ball(gens, args.L)
    series = gap_series(ball, args.r)
    _write_csv(os.path.join(args.out, "gaps.csv"),
               ["length", "min", "median", "count"], series.rows())
    points = sample_limit_set(space, ball, args.gap_threshold)
    lifts = np.array([pt.lift for pt in points]) if points else \
        np.zeros((0, space.dim))
    _write_csv(os.path.join(args.out, "limit-set.csv"),
               ["x%d" % i for i in range(space.dim)], lifts)
    rays = limit_cone_sample(ball, args.r)
    _write_csv(os.path.join(args.out, "cone-rays.csv"),
               ["lambda%d" % (i + 1) for i in range(args.r)], rays)
    chart = args.chart.split(",")
    if len(chart) != 2:
        raise InputError("--chart needs two comma-separated indices")
    try:
        ci, cj = int(chart[0]), int(chart[1])
    except ValueError:
        raise InputError("--chart needs integer indices")
    if not (0 <= ci < space.dim and 0 <= cj < space.dim):
        raise InputError("--chart indices out of range for dimension %d"
                         % space.dim)
    _svg_scatter(os.path.join(args.out, "limit-set.svg"),
                 [(row[ci], row[cj]) for row in lifts],
                 "x%d" % ci, "x%d" % cj, "sampled limit set")
    negativity = None
    if len(points) >= 2:
        report = negativity_test(space, points)
        negativity = {"status": report.status, "margin": report.margin,
                      "witness": report.witness}
    _write_json(os.path.join(args.out, "diagnose.json"),
                {"ball_size": len(ball), "limit_points": len(points),
                 "cone_rays": int(rays.shape[0]), "negativity": negativity})
    summary = "ball %d, limit points %d, rays %d" % (len(ball), len(points),
                                                     rays.shape[0])
    if negativity:
        summary += ", negativity %s (margin %.6g)" % (
            negativity["status"], negativity["margin"])
    return ["gaps.csv", "limit-set.csv", "cone-rays.csv", "limit-set.svg",
            "diagnose.json"], summary


def _run_limit_cone(args, tol):
    space = _space_from_args(args, tol)
    gens = _generators_from_args(args, space)
    ball = word_ball(gens, args.L)
    rays = limit_cone_sample(ball, args.r)
    _write_csv(os.path.join(args.out, "cone-rays.csv"),
               ["lambda%d" % (i + 1) for i in range(args.r)], rays)
    return ["cone-rays.csv"], "%d cone rays from a ball of %d" % (
        rays.shape[0], len(ball))


HANDLERS = {
    "classify-pair": _run_classify_pair,
    "hilbert-dist": _run_hilbert_dist,
    "omega-test": _run_omega_test,
    "graph-check": _run_graph_check,
    "crown-scan": _run_crown_scan,
    "coxeter-scan": _run_coxeter_scan,
    "gt-polygon": _run_gt_polygon,
    "bend": _run_bend,
    "anosov-diagnose": _run_anosov_diagnose,
    "limit-cone": _run_limit_cone,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="seed for all pseudo-random sampling")
    common.add_argument("--tol", type=float, default=None,
                        help="tolerance override (default: PQGEO_TOL or "
                             "builtin)")
    common.add_argument("--out", default=".",
                        help="output directory for artifacts")

    parser = argparse.ArgumentParser(
        prog="pqgeo",
        description="desk-scale computations in pseudo-Riemannian "
                    "hyperbolic geometry")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify-pair", parents=[common],
                        help="classify a pair of interior points")
    sp.add_argument("--gram", help="JSON Gram matrix file")
    sp.add_argument("--p", type=int, help="spacelike rank of the model")
    sp.add_argument("--q", type=int,
                    help="timelike rank of the model (form has q+1 minus "
                         "signs)")
    sp.add_argument("--x", required=True, help="JSON vector file")
    sp.add_argument("--y", required=True, help="JSON vector file")

    sp = sub.add_parser("hilbert-dist", parents=[common],
                        help="Hilbert distance inside a half-space domain")
    sp.add_argument("--gram", help="JSON Gram matrix file")
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--domain", required=True,
                    help="JSON list of constraint lifts")
    sp.add_argument("--y", required=True, help="JSON vector file")
    sp.add_argument("--z", required=True, help="JSON vector file")

    sp = sub.add_parser("omega-test", parents=[common],
                        help="membership in the invisible domain")
    sp.add_argument("--gram", help="JSON Gram matrix file")
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--domain", required=True,
                    help="JSON list of constraint lifts")
    sp.add_argument("--x", required=True, help="JSON vector file")

    sp = sub.add_parser("graph-check", parents=[common],
                        help="Lipschitz check of a builtin graph family")
    sp.add_argument("--family", required=True,
                    choices=["constant", "maximal", "equatorial",
                             "isotropic-boundary", "folded-boundary",
                             "crown-orbit", "maximal-crown"])
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--tau", help="comma-separated weights for crown-orbit")
    sp.add_argument("--pairs", type=int, default=2000)
    sp.add_argument("--samples", type=int, default=256,
                    help="rows in the emitted sample CSV")

    sp = sub.add_parser("crown-scan", parents=[common],
                        help="detect crowns among boundary samples")
    sp.add_argument("--input", required=True,
                    help="CSV of boundary lifts, one per row")
    sp.add_argument("--gram", help="JSON Gram matrix file")
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--j", type=int, default=2)
    sp.add_argument("--max-results", type=int, default=None)
    sp.add_argument("--max-subsets", type=int, default=2000000)

    sp = sub.add_parser("coxeter-scan", parents=[common],
                        help="signature scan of a deformed Cartan matrix")
    sp.add_argument("--diagram", required=True,
                    help="JSON diagram file with an 'm' order matrix")
    sp.add_argument("--t-min", type=float, default=0.0)
    sp.add_argument("--t-max", type=float, default=5.0)
    sp.add_argument("--steps", type=int, default=500)

    sp = sub.add_parser("gt-polygon", parents=[common],
                        help="equilateral polygon vertex configuration")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, default=1)

    sp = sub.add_parser("bend", parents=[common],
                        help="bend an amalgam factor and HNN letters")
    sp.add_argument("--datum", help="JSON bend datum file")
    sp.add_argument("--toy", action="store_true",
                    help="use the builtin O(2,2) toy datum")
    sp.add_argument("--s", type=float, required=True,
                    help="bending parameter")
    sp.add_argument("--factor", type=int, default=1,
                    help="index of the factor to bend")

    sp = sub.add_parser("anosov-diagnose", parents=[common],
                        help="spectral diagnostics of a generated group")
    sp.add_argument("--gens", required=True,
                    help="JSON list of generator matrices")
    sp.add_argument("--gram", help="JSON Gram matrix file")
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--L", type=int, default=8, help="word-ball radius")
    sp.add_argument("--r", type=int, default=2,
                    help="Jordan projection rank")
    sp.add_argument("--gap-threshold", type=float, default=1.0,
                    help="minimum top eigenvalue gap for limit points")
    sp.add_argument("--chart", default="0,1",
                    help="coordinate pair for the SVG scatter")

    sp = sub.add_parser("limit-cone", parents=[common],
                        help="sample limit-cone rays of a generated group")
    sp.add_argument("--gens", required=True,
                    help="JSON list of generator matrices")
    sp.add_argument("--gram", help="JSON Gram matrix file")
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--L", type=int, default=6)
    sp.add_argument("--r", type=int, default=2)

    return parser


def _write_manifest(args, outputs, wall_time):
    config = {}
    for key, value in sorted(vars(args).items()):
        config[key] = value
    listed = []
    for name in outputs:
        path = os.path.join(args.out, name)
        blob = open(path, "rb").read()
        listed.append({"path": name, "bytes": len(blob),
                       "sha256": hashlib.sha256(blob).hexdigest()})
    manifest = {
        "config": config,
        "versions": {
            "pqgeo": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": sys.version.split()[0],
        },
        "wall_time_seconds": wall_time,
        "outputs": listed,
    }
    _write_json(os.path.join(args.out, "manifest.json"), manifest)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    start = time.perf_counter()
    try:
        tol = _resolve_tol(args)
        os.makedirs(args.out, exist_ok=True)
        outputs, summary = HANDLERS[args.command](args, tol)
        _write_manifest(args, outputs, time.perf_counter() - start)
    except InputError as err:
        print("error: %s" % err, file=sys.stderr)
        return 2
    except GeometryError as err:
        print("error: %s" % err, file=sys.stderr)
        return 1
    except OSError as err:
        print("error: %s" % err, file=sys.stderr)
        return 2
    print(summary)
    return 0


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
