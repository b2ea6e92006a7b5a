"""Command-line front end.

Every command writes one JSON report (stdout or --out). Exit codes:
0 success, 2 axiom violations found, 3 invalid input.
"""
from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .algebra import AlgebraError, check_partial_algebra, check_postmeasure, compose_metric
from .audit import DistanceFn, UndefinedDistance, _jsonable, audit_distance
from .expr import ExpressionError, compile_expr, make_F, make_G
from .geo import embed_distance, gh_correspondence, parse_grid
from .hyperpath import GridSample, build_hypergraph, dm_distance
from .integral import (
    DiscreteMeasureSpace,
    IndexedSet,
    Kernel,
    check_kernel_conditions,
    coupled_integral_distance,
    extended_distance,
    kernel_family_uniform,
    lambda_bound,
    lp_integral_distance,
    uniform_distance,
    weighted_integral_distance,
)
from .io import load_space, parse_number, read_csv_rows, space_from_obj, union_cloud
from .metric import FORMULATIONS, VECTOR_METRICS, FiniteMetricSpace, MetricError, PointSet, hausdorff
from .plotting import render_series, write_series, write_series_csv
from .relational import cur_distance, lr_distance, parse_selection, ur_distance
from .svmetric import (
    check_sv_metric,
    hausdorff_sv_metric,
    sup_postmeasure,
    sv_topology,
    symmetric_difference_sv,
    verify_decomposition,
)

SCHEMA = "ghdist.report/1"
EXIT_OK, EXIT_VIOLATIONS, EXIT_INVALID = 0, 2, 3
DIST_FAMILIES = ("hausdorff", "ur", "cur", "lr", "lp", "coupled", "weighted", "extended", "uniform")
AUDIT_ONLY = ("median_gap",)
ALGEBRA_CHECK_LIMIT = 40


class InvalidInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# -- helpers ---------------------------------------------------------------


def _num(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else float(v)
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def _value_block(v) -> dict:
    out = {"value": _num(v)}
    if isinstance(v, Fraction) and v.denominator != 1:
        out["value_exact"] = str(v)
    return out


def _digest(paths) -> str:
    h = hashlib.sha256()
    for p in sorted(str(p) for p in paths if p):
        h.update(p.encode())
        h.update(b"\0")
        h.update(Path(p).read_bytes())
    return h.hexdigest()


def _labels(spec: str, space: FiniteMetricSpace) -> PointSet:
    """Comma-separated point labels (or indices when labels do not match)."""
    toks = [t.strip() for t in spec.split(",") if t.strip()]
    if not toks:
        raise InvalidInput("empty point list")
    idx = set()
    for t in toks:
        lab = parse_number(t) if _is_number(t) else t
        if lab in space.points:
            idx.add(space.index(lab))
        elif isinstance(lab, int) and 0 <= lab < len(space):
            idx.add(lab)
        else:
            raise InvalidInput(f"unknown point {t!r}")
    return space.subset(idx)


def _is_number(t: str) -> bool:
    try:
        parse_number(t)
        return True
    except ValueError:
        return False


def _line(spec: str) -> FiniteMetricSpace:
    return FiniteMetricSpace.line([parse_number(t) for t in spec.split(",") if t.strip()])


def _ground(args) -> FiniteMetricSpace:
    if getattr(args, "line", None):
        return _line(args.line)
    path = getattr(args, "space", None) or getattr(args, "ground", None)
    if not path:
        raise InvalidInput("give a space file (--space/--ground) or --line")
    return load_space(path, kind=args.kind, metric=args.metric)


def _pad(members, size):
    ms = sorted(members)
    return tuple(ms + [ms[-1]] * (size - len(ms)))


def _indexed_pair(A: PointSet, B: PointSet):
    size = max(len(A), len(B))
    Y = DiscreteMeasureSpace.counting(size)
    return IndexedSet(A.space, Y, _pad(A.members, size)), IndexedSet(B.space, Y, _pad(B.members, size))


def _p(s):
    if s is None:
        return 1
    if str(s).lower() in ("inf", "infinity"):
        return math.inf
    v = parse_number(str(s))
    if v < 1:
        raise InvalidInput(f"p must be >= 1 or inf, got {s}")
    return v


def _set_distance(args, space: FiniteMetricSpace):
    """A callable on PointSet pairs for the chosen family."""
    fam = args.family
    if fam == "hausdorff":
        if args.formulation not in FORMULATIONS:
            raise InvalidInput(f"unknown formulation {args.formulation!r}")
        return DistanceFn(lambda A, B: hausdorff(A, B, args.formulation), f"hausdorff[{args.formulation}]")
    if fam in ("ur", "lr"):
        sel = parse_selection(args.sel)
        fn = ur_distance if fam == "ur" else lr_distance
        return DistanceFn(lambda A, B: fn(sel, A, B), f"{fam}[{args.sel}]")
    if fam == "cur":
        fam_spec = args.cur_family
        family = "all_complete" if fam_spec == "all_complete" else [parse_selection(s) for s in fam_spec.split("+")]
        return DistanceFn(lambda A, B: cur_distance(family, A, B), f"cur[{fam_spec}]")
    if fam == "median_gap":
        return DistanceFn(_median_gap, "median_gap (deliberately broken)")
    nu = DiscreteMeasureSpace.counting(len(space))
    p = _p(args.p)
    if fam == "lp":
        return DistanceFn(lambda A, B: lp_integral_distance(*_indexed_pair(A, B), nu, None, p), f"lp[p={args.p}]")
    if fam == "uniform":
        return DistanceFn(lambda A, B: uniform_distance(*_indexed_pair(A, B)), "uniform")

    def with_kernel(op):
        def d(A, B):
            f, g = _indexed_pair(A, B)
            return op(f, g, kernel_family_uniform([f, g]))

        return d

    if fam == "coupled":
        return DistanceFn(with_kernel(lambda f, g, K: coupled_integral_distance(f, g, nu, K, p)), f"coupled[p={args.p}]")
    if fam == "weighted":
        a, b = parse_number(args.alpha), parse_number(args.beta)
        return DistanceFn(
            with_kernel(lambda f, g, K: weighted_integral_distance(f, g, nu, K, a, b, p)), f"weighted[p={args.p}]"
        )
    if fam == "extended":
        F, G = make_F(args.F), make_G(args.G)
        return DistanceFn(with_kernel(lambda f, g, K: extended_distance(f, g, nu, K, F, G)), f"extended[{args.F},{args.G}]")
    raise InvalidInput(f"unknown family {fam!r}")


def _median_gap(A: PointSet, B: PointSet):
    """|median(A) - median(B)| of point indices: a non-metric self-test."""
    def med(S):
        s = sorted(S.members)
        return Fraction(s[(len(s) - 1) // 2] + s[len(s) // 2], 2)

    return abs(med(A) - med(B))


def _pair_inputs(args):
    """(space, A, B, input paths) from --a/--b clouds or --space with --A/--B."""
    if args.a and args.b:
        a_rows, b_rows = read_csv_rows(args.a), read_csv_rows(args.b)
        if not a_rows or not b_rows:
            raise InvalidInput("empty point cloud")
        space, A, B = union_cloud(a_rows, b_rows, args.metric)
        return space, A, B, [args.a, args.b]
    if args.A and args.B:
        space = _ground(args)
        src = getattr(args, "space", None) or getattr(args, "ground", None)
        return space, _labels(args.A, space), _labels(args.B, space), [src]
    raise InvalidInput("give --a/--b point clouds, or a space with --A/--B")


# -- fixture files for the integral family ---------------------------------


def _measure(obj, n=None) -> DiscreteMeasureSpace:
    if obj is None:
        return DiscreteMeasureSpace.counting(n)
    if isinstance(obj, list):
        return DiscreteMeasureSpace(tuple(range(len(obj))), tuple(parse_number(str(w)) for w in obj))
    weights = [parse_number(str(w)) for w in obj["weights"]]
    return DiscreteMeasureSpace(tuple(obj.get("carrier", range(len(weights)))), tuple(weights))


def load_integral_fixture(path):
    """{"X": space, "nu": weights, "Y": weights, "f": [...], "g": [...],
    "rho": [...], "sets": {...}, "kernels": {"f|g": dense array}}."""
    obj = json.loads(Path(path).read_text())
    space = space_from_obj(obj["X"])
    nu = _measure(obj.get("nu"), len(space))
    Y = _measure(obj.get("Y"), len(obj["f"]) if "f" in obj else None)
    named = dict(obj.get("sets", {}))
    for key in ("f", "g"):
        if key in obj:
            named[key] = obj[key]
    sets = {k: IndexedSet(space, Y, tuple(v)) for k, v in named.items()}
    kernels = {}
    for key, arr in obj.get("kernels", {}).items():
        a, b = key.split("|")
        kernels[(sets[a], sets[b])] = Kernel([[[parse_number(str(v)) for v in row] for row in plane] for plane in arr])
    rho = [parse_number(str(r)) for r in obj["rho"]] if "rho" in obj else None
    return space, nu, Y, sets, kernels, rho, obj


# -- commands --------------------------------------------------------------


def cmd_dist(args):
    if args.fixture:
        space, nu, Y, sets, kernels, rho, _ = load_integral_fixture(args.fixture)
        f, g = sets["f"], sets["g"]
        K = kernel_family_uniform([f, g])
        K.update(kernels)
        p = _p(args.p)
        fam = args.family
        if fam == "lp":
            v = lp_integral_distance(f, g, nu, rho, p)
        elif fam == "coupled":
            v = coupled_integral_distance(f, g, nu, K, p)
        elif fam == "weighted":
            v = weighted_integral_distance(f, g, nu, K, parse_number(args.alpha), parse_number(args.beta), p)
        elif fam == "extended":
            v = extended_distance(f, g, nu, K, make_F(args.F), make_G(args.G))
        elif fam == "uniform":
            v = uniform_distance(f, g)
        else:
            raise InvalidInput(f"family {fam!r} takes point sets, not an indexed fixture")
        out = {"family": fam, **_value_block(v)}
        if fam == "lp" and not math.isinf(p):
            out["lambda_bound"] = _num(lambda_bound(f, g, nu, rho, p))
            out["uniform_metric"] = _num(uniform_distance(f, g))
        return out, [args.fixture], EXIT_OK
    space, A, B, paths = _pair_inputs(args)
    d = _set_distance(args, space)
    try:
        v = d(A, B)
    except UndefinedDistance as exc:
        return {"family": d.label, "value": None, "undefined": str(exc)}, paths, EXIT_OK
    return {"family": d.label, **_value_block(v), "A": A.labels(), "B": B.labels()}, paths, EXIT_OK


def cmd_audit(args):
    if args.corpus_seed is not None or not (args.space or args.line):
        rng = random.Random(args.seed if args.corpus_seed is None else args.corpus_seed)
        from .corpus import random_integer_space

        space = random_integer_space(rng, args.points, k=rng.randint(2, 9))
        paths = []
    else:
        space = _ground(args)
        paths = [args.space] if args.space else []
    sets = space.all_subsets(args.max_size)
    if args.limit:
        sets = sets[: args.limit]
    d = _set_distance(args, space)
    rep = audit_distance(d, sets, args.tolerance)
    code = EXIT_OK if rep.ok else EXIT_VIOLATIONS
    return {"family": d.label, "sets": len(sets), "report": rep.to_dict()}, paths, code


def cmd_decompose(args):
    space = _ground(args)
    sets = space.all_subsets(args.max_size)
    rep = verify_decomposition(sets)
    dsv = hausdorff_sv_metric(sets, "values")
    thr = hausdorff_sv_metric(sets, "threshold")
    reports = {"decomposition": rep}
    for key, d in (("values", dsv), ("threshold", thr)):
        reports[f"sv_metric_{key}"] = check_sv_metric(d)
        pm = sup_postmeasure(d.algebra)
        reports[f"postmeasure_{key}"] = check_postmeasure(pm, args.tolerance)
        if len(d.algebra.elements) <= ALGEBRA_CHECK_LIMIT:
            reports[f"algebra_{key}"] = check_partial_algebra(d.algebra)
        reports[f"composed_{key}"] = audit_distance(compose_metric(pm, d), sets, args.tolerance)
    ok = all(r.ok for r in reports.values())
    skipped = [k for k in ("values", "threshold") if f"algebra_{k}" not in reports]
    out = {"sets": len(sets), "all_hold": ok, "reports": {k: r.to_dict() for k, r in reports.items()}}
    if skipped:
        out["algebra_check_skipped"] = f"more than {ALGEBRA_CHECK_LIMIT} algebra elements for: {', '.join(skipped)}"
    return out, [args.space] if args.space else [], EXIT_OK if ok else EXIT_VIOLATIONS


def _parse_family_of_sets(spec: str) -> list[frozenset]:
    """'x,y;z' -> [{x,y},{z}]; '{}' or empty items give the empty set."""
    out = []
    for part in spec.split(";"):
        part = part.strip().strip("{}")
        out.append(frozenset(t.strip() for t in part.split(",") if t.strip()))
    return out


def cmd_topology(args):
    Z = [t.strip() for t in args.Z.split(",") if t.strip()]
    if args.carrier == "all":
        M = None
    elif args.carrier == "proper":
        M = [frozenset(c) for r in range(1, len(Z)) for c in itertools.combinations(Z, r)]
    else:
        M = _parse_family_of_sets(args.carrier)
    d = symmetric_difference_sv(Z, M)
    pool = _parse_family_of_sets(args.eps_pool) if args.eps_pool else [frozenset([z]) for z in Z]
    for e in pool:
        if not e <= set(Z):
            raise InvalidInput(f"radius {sorted(e)} is not a subset of Z")
    top = sv_topology(d, pool, max_carrier=args.guard)
    sv_rep = check_sv_metric(d)
    opens = top.sorted_opens()
    out = {
        "carrier": [sorted(m) for m in d.carrier],
        "eps_pool": [sorted(e) for e in pool],
        "open_set_count": len(opens),
        "open_sets": [[sorted(m) for m in o] for o in opens],
        "is_topology": top.is_topology(),
        "is_discrete": top.is_discrete(),
        "sv_metric": sv_rep.to_dict(),
    }
    return out, [], EXIT_OK if sv_rep.ok else EXIT_VIOLATIONS


def cmd_hyperpath(args):
    ground = _ground(args)
    G = build_hypergraph(ground, args.m, args.rule)
    A, B = _labels(args.from_, ground), _labels(args.to, ground)
    dist, path = dm_distance(G, A, B)
    out = {
        "rule": G.rule.kind,
        "m": args.m,
        "vertices": len(G.vertices),
        "edges": G.graph.number_of_edges(),
        "distance": _num(dist),
        "path": [sorted(ground.points[i] for i in v) for v in path],
        "dH_of_endpoints": _num(hausdorff(A, B)),
    }
    if isinstance(dist, Fraction) and dist.denominator != 1:
        out["distance_exact"] = str(dist)
    return out, [args.ground] if args.ground else [], EXIT_OK


def _geo_base(spec: str):
    if spec == "hausdorff":
        return hausdorff
    kind, _, arg = spec.partition(":")
    if kind == "ur":
        sel = parse_selection(arg)
        return lambda A, B: ur_distance(sel, A, B)
    if kind == "cur":
        family = "all_complete" if arg in ("", "all_complete") else [parse_selection(s) for s in arg.split("+")]
        return lambda A, B: cur_distance(family, A, B)
    raise InvalidInput(f"unknown base {spec!r}; use hausdorff, ur:<sel> or cur:<family>")


def cmd_geo(args):
    X = load_space(args.x, kind=args.kind, metric=args.metric)
    Y = load_space(args.y, kind=args.kind, metric=args.metric)
    gh, R = gh_correspondence(X, Y)
    out = {"gh": _num(gh), "correspondence": [[X.points[x], Y.points[y]] for x, y in R]}
    if isinstance(gh, Fraction) and gh.denominator != 1:
        out["gh_exact"] = str(gh)
    if args.mode == "embed":
        grid = parse_grid(args.grid, X, Y)
        v, cross = embed_distance(X, Y, grid, _geo_base(args.base))
        out.update({"base": args.base, "grid": args.grid, "candidates": len(grid), "embed": _num(v), "cross": _jsonable(cross)})
        if isinstance(v, Fraction) and v.denominator != 1:
            out["embed_exact"] = str(v)
    return out, [args.x, args.y], EXIT_OK


def cmd_kernels_check(args):
    space, nu, Y, sets, kernels, rho, obj = load_integral_fixture(args.fixture)
    family = kernel_family_uniform(list(sets.values()))
    family.update(kernels)
    if "triples" in obj:
        triples = [tuple(sets[k] for k in t) for t in obj["triples"]]
    else:
        triples = list(itertools.product(sets.values(), repeat=3))
    rep = check_kernel_conditions(family, triples, args.tolerance)
    names = {v: k for k, v in sets.items()}
    out = {"sets": {k: list(v.f) for k, v in sets.items()}, "triples": len(triples), "report": rep.to_dict()}
    for v, raw in zip(out["report"]["violations"], rep.violations):
        v["witness"] = [names[w] if isinstance(w, IndexedSet) else _jsonable(w) for w in raw.witness]
    if rep.ok:
        p = _p(args.p)
        audit = audit_distance(
            lambda f, g: coupled_integral_distance(f, g, nu, family, p),
            list(sets.values()),
            args.tolerance,
            same=lambda f, g: frozenset(f.f) == frozenset(g.f),
            triples=[(a, c, b) for a, c, b in triples],
        )
        out["coupled_audit"] = audit.to_dict()
        code = EXIT_OK if audit.by_axiom("triangle") == [] else EXIT_VIOLATIONS
    else:
        code = EXIT_VIOLATIONS
    return out, [args.fixture], code


def cmd_series(args):
    if not args.out_stem:
        raise InvalidInput("series needs --stem for the CSV/PNG output")
    if args.kind == "p-sweep":
        space, A, B, paths = _pair_inputs(args)
        f, g = _indexed_pair(A, B)
        nu = DiscreteMeasureSpace.counting(len(space))
        ps = [_p(s) for s in args.ps.split(",")]
        dH = hausdorff(A, B)
        du = uniform_distance(f, g)
        rows = []
        for p in ps:
            v = lp_integral_distance(f, g, nu, None, p)
            bound = math.inf if math.isinf(p) else float(lambda_bound(f, g, nu, None, p)) * float(du)
            rows.append((p, float(v), bound, float(dH)))
        header = ("p", "d_p", "lambda_times_du", "d_H")
        csv_path, png_path = _write_p(args.out_stem, header, rows)
    elif args.kind == "k-refine":
        ground = _ground(args)
        paths = [args.ground] if args.ground else []
        fx, gx = compile_expr(args.f_expr, ("y",)), compile_expr(args.g_expr, ("y",))
        snap = _snapper(ground)
        ks = [int(k) for k in args.ks.split(",")]
        rows = []
        for k in ks:
            S = GridSample.from_function(lambda y: snap(fx(y[0])), k, 1)
            T = GridSample.from_function(lambda y: snap(gx(y[0])), k, 1)
            m = max(len(S.image()), len(T.image()))
            G = build_hypergraph(ground, m, args.rule)
            d, _ = dm_distance(G, S.image(), T.image())
            rows.append((k, S.node_count, float(d), float(hausdorff(PointSet(ground, S.image()), PointSet(ground, T.image())))))
        header = ("k", "grid_nodes", "d_m", "d_H")
        csv_path, png_path = write_series(args.out_stem, header, rows, x=0, ys=(2, 3), title=f"grid refinement ({args.rule} moves)")
    else:  # pragma: no cover
        raise InvalidInput(args.kind)
    out = {"kind": args.kind, "csv": str(csv_path), "png": str(png_path), "header": list(header), "rows": [[_num(v) for v in r] for r in rows]}
    return out, paths, EXIT_OK


def _write_p(stem, header, rows):
    """The CSV keeps the p = inf row; the figure plots finite p only."""
    stem = Path(stem)
    csv_path = write_series_csv(stem.with_suffix(".csv"), header, rows)
    finite = [r for r in rows if not math.isinf(r[0])]
    png_path = render_series(stem.with_suffix(".png"), header, finite, x=0, ys=(1, 2, 3), title="integral distance against p", logx=True)
    return csv_path, png_path


def _snapper(ground: FiniteMetricSpace):
    """Map a real value to the nearest point of a line ground space."""
    if ground.coords is None or any(len(c) != 1 for c in ground.coords):
        raise InvalidInput("k-refine needs a 1-D ground space")
    pos = [c[0] for c in ground.coords]

    def snap(v):
        return min(range(len(pos)), key=lambda i: (abs(pos[i] - v), i))

    return snap


# -- parser ----------------------------------------------------------------


def _space_args(p, *, ground_name="space"):
    p.add_argument(f"--{ground_name}", help="space file: JSON, matrix CSV or point-cloud CSV")
    p.add_argument("--line", help="points on the real line, e.g. 0,1,2,3")
    p.add_argument("--kind", choices=("auto", "matrix", "points"), default="auto", help="how to read a CSV space file")
    p.add_argument("--metric", choices=sorted(VECTOR_METRICS), default="euclidean", help="metric for point clouds")


def _family_args(p, families):
    p.add_argument("--family", choices=families, default="hausdorff")
    p.add_argument("--formulation", default="maxsup", help=f"one of {', '.join(FORMULATIONS)}")
    p.add_argument("--sel", default="rh", help="selection: rh | complete | full | closest | nearest | threshold:<r> | custom:<json>")
    p.add_argument("--cur-family", default="all_complete", help="all_complete or selections joined by '+'")
    p.add_argument("--p", default="1", help="exponent >= 1 or inf")
    p.add_argument("--alpha", default="1")
    p.add_argument("--beta", default="0")
    p.add_argument("--F", default="identity", help="identity | sqrt | power:<p> | expression in t")
    p.add_argument("--G", default="absdiff", help="absdiff | absdiff:<p> | sum | cross | expression in r, s, t")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ghdist", description="Hausdorff-type distances on finite metric spaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--tolerance", type=float, default=None, help="comparison slack (default: 0 exact, 1e-9 floats)")
    parser.add_argument("--seed", type=int, default=0, help="seed for generated fixtures")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--timing", action="store_true", help="add wall-clock time to the report")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dist", help="distance between two sets")
    _space_args(p)
    _family_args(p, DIST_FAMILIES)
    p.add_argument("--a", help="point-cloud CSV for the first set")
    p.add_argument("--b", help="point-cloud CSV for the second set")
    p.add_argument("--A", help="labels of the first set in --space")
    p.add_argument("--B", help="labels of the second set in --space")
    p.add_argument("--fixture", help="integral fixture JSON with f and g")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("audit", help="exhaustive metric-axiom audit over all subsets")
    _space_args(p)
    _family_args(p, DIST_FAMILIES + AUDIT_ONLY)
    p.add_argument("--max-size", type=int, default=None, help="largest subset size")
    p.add_argument("--limit", type=int, default=None, help="audit only the first N subsets")
    p.add_argument("--points", type=int, default=5, help="size of a generated space")
    p.add_argument("--corpus-seed", type=int, default=None, help="generate a random integer space with this seed")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("decompose", help="verify d_H = sup of the set-valued metric")
    _space_args(p)
    p.add_argument("--max-size", type=int, default=None)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("topology", help="topology of the symmetric-difference sv-metric")
    p.add_argument("--Z", required=True, help="ground elements, e.g. x,y,z")
    p.add_argument("--carrier", default="all", help="all | proper | explicit family 'x;x,y;...'")
    p.add_argument("--eps-pool", help="radii as subsets of Z, e.g. 'x;y' (default: all singletons)")
    p.add_argument("--guard", type=int, default=12, help="largest carrier to enumerate")
    p.set_defaults(func=cmd_topology)

    p = sub.add_parser("hyperpath", help="shortest move path between two subsets")
    _space_args(p, ground_name="ground")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rule", default="complete", help="complete | swap | step")
    p.add_argument("--from", dest="from_", required=True)
    p.add_argument("--to", required=True)
    p.set_defaults(func=cmd_hyperpath)

    p = sub.add_parser("geo", help="distances between two finite metric spaces")
    p.add_argument("mode", choices=("gh", "embed"))
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--kind", choices=("auto", "matrix", "points"), default="auto")
    p.add_argument("--metric", choices=sorted(VECTOR_METRICS), default="euclidean")
    p.add_argument("--grid", default="auto:5", help="auto:<k> or values:<v1,v2,...>")
    p.add_argument("--base", default="hausdorff", help="hausdorff | ur:<sel> | cur:<family>")
    p.set_defaults(func=cmd_geo)

    p = sub.add_parser("kernels-check", help="check kernel conditions on an integral fixture")
    p.add_argument("--fixture", required=True)
    p.add_argument("--p", default="1")
    p.set_defaults(func=cmd_kernels_check)

    p = sub.add_parser("series", help="CSV series plus a PNG figure")
    p.add_argument("kind", choices=("p-sweep", "k-refine"))
    _space_args(p, ground_name="ground")
    p.add_argument("--stem", dest="out_stem", help="output path without extension")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--A")
    p.add_argument("--B")
    p.add_argument("--ps", default="1,2,4,8,16,inf")
    p.add_argument("--f-expr", default="0", help="f(y) on [0,1], snapped to the nearest ground point")
    p.add_argument("--g-expr", default="y")
    p.add_argument("--ks", default="1,2,3,4")
    p.add_argument("--rule", default="complete")
    p.set_defaults(func=cmd_series)
    return parser


def run(argv=None) -> tuple[dict, int, str | None]:
    """Parse, execute and wrap the results; returns (report, exit code, --out)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    results, paths, code = args.func(args)
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "timing")}
    report = {
        "schema": SCHEMA,
        "command": args.command,
        "config": config,
        "inputs_digest": _digest(paths),
        "seed": args.seed,
        "results": results,
    }
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - t0, 6)
    return report, code, args.out


def to_json(obj):
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    return _jsonable(obj)


def main(argv=None) -> int:
    try:
        report, code, out = run(argv)
    except (InvalidInput, MetricError, AlgebraError, ExpressionError, ValueError, KeyError, FileNotFoundError) as exc:
        print(f"ghdist: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = json.dumps(to_json(report), indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
