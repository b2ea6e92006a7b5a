"""Reading distance matrices and point clouds from CSV / JSON."""
from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

from .metric import VECTOR_METRICS, FiniteMetricSpace, MetricError


def parse_number(token: str):
    """int, Fraction ("a/b") or float, in that order of preference."""
    token = token.strip()
    try:
        return int(token)
    except ValueError:
        pass
    if "/" in token:
        return Fraction(token)
    return float(token)


def read_csv_rows(path) -> list[list]:
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    out = []
    for row in rows:
        try:
            out.append([parse_number(c) for c in row if c.strip()])
        except ValueError as exc:
            raise MetricError(f"{path}: non-numeric entry in row {row}") from exc
    return out


def load_matrix_csv(path) -> FiniteMetricSpace:
    rows = read_csv_rows(path)
    return FiniteMetricSpace(list(range(len(rows))), rows)


def load_points_csv(path, metric: str = "euclidean") -> FiniteMetricSpace:
    if metric not in VECTOR_METRICS:
        raise MetricError(f"unknown metric {metric!r}; expected one of {sorted(VECTOR_METRICS)}")
    return FiniteMetricSpace.from_coords(read_csv_rows(path), metric)


def _json_number(v):
    if isinstance(v, str):
        return parse_number(v)
    return v


def space_from_obj(obj: dict) -> FiniteMetricSpace:
    """{"points": [...], "dmat": [[...]]} or {"coords": [[...]], "metric": ...}."""
    if "dmat" in obj:
        dmat = [[_json_number(v) for v in row] for row in obj["dmat"]]
        points = obj.get("points", list(range(len(dmat))))
        points = [tuple(p) if isinstance(p, list) else p for p in points]
        return FiniteMetricSpace(points, dmat)
    if "coords" in obj:
        coords = [[_json_number(v) for v in row] for row in obj["coords"]]
        sp = FiniteMetricSpace.from_coords(coords, obj.get("metric", "euclidean"))
        if "points" in obj:
            sp = FiniteMetricSpace(obj["points"], sp.dmat, coords=sp.coords, metric=sp.metric)
        return sp
    raise MetricError("space object needs either 'dmat' or 'coords'")


def load_space_json(path) -> FiniteMetricSpace:
    return space_from_obj(json.loads(Path(path).read_text()))


def load_space(path, *, kind: str = "auto", metric: str = "euclidean") -> FiniteMetricSpace:
    """Load a space from JSON, a square distance-matrix CSV or a point-cloud CSV.

    ``kind="auto"`` treats a CSV as a distance matrix when it is square,
    symmetric with zero diagonal, and as a point cloud otherwise.
    """
    path = Path(path)
    if path.suffix.lower() == ".json":
        return load_space_json(path)
    if kind == "matrix":
        return load_matrix_csv(path)
    if kind == "points":
        return load_points_csv(path, metric)
    rows = read_csv_rows(path)
    n = len(rows)
    square = all(len(r) == n for r in rows)
    if square and all(rows[i][i] == 0 for i in range(n)) and all(rows[i][j] == rows[j][i] for i in range(n) for j in range(n)):
        return FiniteMetricSpace(list(range(n)), rows)
    return FiniteMetricSpace.from_coords(rows, metric)


def space_to_obj(space: FiniteMetricSpace) -> dict:
    def num(v):
        return str(v) if isinstance(v, Fraction) and v.denominator != 1 else (int(v) if isinstance(v, Fraction) else v)

    return {"points": list(space.points), "dmat": [[num(v) for v in row] for row in space.dmat]}


def union_cloud(a_rows, b_rows, metric: str = "euclidean"):
    """Ambient space spanned by two point clouds, with the two index sets.

    Duplicate coordinates are merged so the result is a genuine metric.
    """
    coords: list[tuple] = []
    where: dict[tuple, int] = {}
    sets = []
    for rows in (a_rows, b_rows):
        idx = set()
        for r in rows:
            key = tuple(r)
            if key not in where:
                where[key] = len(coords)
                coords.append(key)
            idx.add(where[key])
        sets.append(idx)
    space = FiniteMetricSpace.from_coords(coords, metric)
    return space, space.subset(sets[0]), space.subset(sets[1])
