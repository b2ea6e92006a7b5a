"""Finite metric spaces, point sets and the Hausdorff distance.

Everything here works on finite carriers, so every inf/sup is a min/max.
Distances keep whatever number type they were given: ints and Fractions
stay exact, floats stay floats.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Callable, Hashable, Iterable, Iterator, Sequence

FORMULATIONS = ("maxsup", "inf_r", "sup_union", "sup_ambient")

FLOAT_TOL = 1e-9


class MetricError(ValueError):
    """Raised when a matrix or set fails a structural precondition."""


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def default_tolerance(*values) -> float:
    """0 when every value is an exact rational, FLOAT_TOL otherwise."""
    return 0 if all(is_exact(v) for v in values) else FLOAT_TOL


def _as_matrix(dmat) -> tuple[tuple, ...]:
    rows = tuple(tuple(_scalar(v) for v in row) for row in dmat)
    n = len(rows)
    for row in rows:
        if len(row) != n:
            raise MetricError(f"distance matrix is not square ({n} rows, row of length {len(row)})")
    return rows


def _scalar(v):
    # numpy scalars -> python numbers so exactness checks behave
    if hasattr(v, "item") and not isinstance(v, (int, float, Fraction)):
        v = v.item()
    if isinstance(v, bool) or not isinstance(v, Real):
        raise MetricError(f"non-numeric distance entry {v!r}")
    return v


def triangle_violations(dmat: Sequence[Sequence], tol=None) -> list[tuple[int, int, int]]:
    """All (i, j, k) with dmat[i][j] > dmat[i][k] + dmat[k][j] + tol."""
    n = len(dmat)
    out = []
    for i, j, k in itertools.product(range(n), repeat=3):
        lhs, rhs = dmat[i][j], dmat[i][k] + dmat[k][j]
        t = default_tolerance(lhs, rhs) if tol is None else tol
        if lhs > rhs + t:
            out.append((i, j, k))
    return out


class FiniteMetricSpace:
    """A finite set of labelled points with a validated distance matrix.

    ``coords`` and ``metric`` are optional; they are present when the space
    was built from a point cloud and are needed only by distances that use
    vector structure.
    """

    __slots__ = ("points", "dmat", "coords", "metric", "_index")

    def __init__(self, points: Sequence[Hashable], dmat, *, coords=None, metric=None, check=True):
        self.points = tuple(points)
        self.dmat = _as_matrix(dmat)
        if len(self.dmat) != len(self.points):
            raise MetricError(f"{len(self.points)} points but a {len(self.dmat)}x{len(self.dmat)} matrix")
        if len(set(self.points)) != len(self.points):
            raise MetricError("point labels must be distinct")
        self.coords = None if coords is None else tuple(tuple(c) for c in coords)
        self.metric = metric
        self._index = {p: i for i, p in enumerate(self.points)}
        if check:
            self._validate()

    def _validate(self) -> None:
        n = len(self.dmat)
        if n == 0:
            raise MetricError("empty space")
        for i in range(n):
            if self.dmat[i][i] != 0:
                raise MetricError(f"nonzero diagonal at {i}")
            for j in range(i + 1, n):
                a, b = self.dmat[i][j], self.dmat[j][i]
                if a != b:
                    raise MetricError(f"asymmetric entries at ({i}, {j}): {a} vs {b}")
                if a <= 0:
                    raise MetricError(f"distinct points {i}, {j} at distance {a}")
        bad = triangle_violations(self.dmat)
        if bad:
            i, j, k = bad[0]
            raise MetricError(f"triangle inequality fails at ({i}, {j}) via {k}")

    @classmethod
    def line(cls, positions: Iterable[Real]) -> "FiniteMetricSpace":
        """Points on the real line with d = |x - y|; labels are the positions."""
        pos = list(positions)
        return cls(pos, [[abs(a - b) for b in pos] for a in pos], coords=[(p,) for p in pos], metric="euclidean")

    @classmethod
    def from_coords(cls, coords, metric: str = "euclidean", points=None) -> "FiniteMetricSpace":
        coords = [tuple(_scalar(c) for c in row) for row in coords]
        fn = VECTOR_METRICS[metric]
        dmat = [[fn(a, b) for b in coords] for a in coords]
        if points is None:
            points = list(range(len(coords)))
        return cls(points, dmat, coords=coords, metric=metric)

    @classmethod
    def from_semimetric(cls, points, ds) -> "FiniteMetricSpace":
        """Build a metric space from a semimetric via shortest chains.

        Points that the chain closure puts at distance zero are merged; the
        labels of merged points become tuples of the originals.
        """
        dps = semimetric_to_pseudometric(ds)
        classes, dm = pseudometric_quotient(dps)
        pts = list(points)
        labels = [pts[c[0]] if len(c) == 1 else tuple(pts[i] for i in c) for c in classes]
        return cls(labels, dm)

    def __len__(self) -> int:
        return len(self.points)

    def index(self, point) -> int:
        return self._index[point]

    def d(self, i: int, j: int):
        return self.dmat[i][j]

    def subset(self, indices: Iterable[int]) -> "PointSet":
        return PointSet(self, frozenset(indices))

    def subset_of_points(self, labels: Iterable[Hashable]) -> "PointSet":
        return PointSet(self, frozenset(self._index[p] for p in labels))

    def all_subsets(self, max_size: int | None = None) -> list["PointSet"]:
        """Every nonempty subset, ordered by size then lexicographically."""
        n = len(self)
        top = n if max_size is None else min(n, max_size)
        return [PointSet(self, frozenset(c)) for r in range(1, top + 1) for c in itertools.combinations(range(n), r)]

    def diameter(self):
        return max(max(row) for row in self.dmat)

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={len(self)})"


def _euclidean(a, b):
    if len(a) == 1:
        return abs(a[0] - b[0])
    return sum((x - y) ** 2 for x, y in zip(a, b)) ** 0.5


VECTOR_METRICS: dict[str, Callable] = {
    "euclidean": _euclidean,
    "manhattan": lambda a, b: sum(abs(x - y) for x, y in zip(a, b)),
    "chebyshev": lambda a, b: max(abs(x - y) for x, y in zip(a, b)),
}


@dataclass(frozen=True, eq=False)
class PointSet:
    """A nonempty subset of a FiniteMetricSpace, stored as point indices."""

    space: FiniteMetricSpace
    members: frozenset

    def __post_init__(self):
        if not isinstance(self.members, frozenset):
            object.__setattr__(self, "members", frozenset(self.members))
        if not self.members:
            raise MetricError("a PointSet must be nonempty")
        n = len(self.space)
        for i in self.members:
            if not isinstance(i, int) or not 0 <= i < n:
                raise MetricError(f"point index {i!r} out of range for a space of {n} points")

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.space is other.space and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.space), self.members))

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i) -> bool:
        return i in self.members

    def labels(self) -> list:
        return [self.space.points[i] for i in self]

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.labels())) + "}"


def _same_space(A: PointSet, B: PointSet) -> FiniteMetricSpace:
    if A.space is not B.space:
        raise MetricError("point sets live in different spaces")
    return A.space


def dist_point_set(x: int, A: PointSet):
    """Distance from point index x to the set A."""
    n = len(A.space)
    if not 0 <= x < n:
        raise MetricError(f"point index {x} out of range for a space of {n} points")
    row = A.space.dmat[x]
    return min(row[a] for a in A.members)


def closed_neighborhood(A: PointSet, r) -> PointSet:
    """All points of the ambient space within distance r of A."""
    if r < 0:
        raise MetricError(f"negative radius {r}")
    X = A.space
    return PointSet(X, frozenset(x for x in range(len(X)) if dist_point_set(x, A) <= r))


def directed_hausdorff(A: PointSet, B: PointSet):
    return max(dist_point_set(a, B) for a in A.members)


def hausdorff(A: PointSet, B: PointSet, formulation: str = "maxsup"):
    """Hausdorff distance between two point sets of the same space.

    The four formulations are the max of directed distances, the least
    radius r with A u B inside both closed r-neighbourhoods, and the sup of
    |dist(x, A) - dist(x, B)| over A u B or over the whole space.
    """
    X = _same_space(A, B)
    if formulation == "maxsup":
        return max(directed_hausdorff(A, B), directed_hausdorff(B, A))
    if formulation == "inf_r":
        union = A.members | B.members
        # the infimum is attained at one of these radii
        candidates = sorted({dist_point_set(x, A) for x in range(len(X))} | {dist_point_set(x, B) for x in range(len(X))})
        for r in candidates:
            both = closed_neighborhood(A, r).members & closed_neighborhood(B, r).members
            if union <= both:
                return r
        raise AssertionError("no candidate radius covers A u B")  # pragma: no cover
    if formulation in ("sup_union", "sup_ambient"):
        pts = A.members | B.members if formulation == "sup_union" else range(len(X))
        return max(abs(dist_point_set(x, A) - dist_point_set(x, B)) for x in pts)
    raise MetricError(f"unknown formulation {formulation!r}; expected one of {FORMULATIONS}")


def uniform_metric(f: Sequence[int], g: Sequence[int], space: FiniteMetricSpace):
    """sup_y d(f(y), g(y)) for two families indexed by the same Y.

    ``f`` and ``g`` may be sequences (index set range(len)) or mappings.
    """
    if hasattr(f, "keys"):
        if set(f.keys()) != set(g.keys()):
            raise MetricError("families have different index sets")
        keys = list(f.keys())
        return max(space.dmat[f[y]][g[y]] for y in keys)
    if len(f) != len(g):
        raise MetricError(f"index sets differ in size ({len(f)} vs {len(g)})")
    return max(space.dmat[a][b] for a, b in zip(f, g))


def semimetric_to_pseudometric(ds) -> list[list]:
    """Shortest-chain closure of a symmetric, zero-diagonal matrix.

    Plain Floyd-Warshall so exact inputs give exact outputs.
    """
    d = [list(row) for row in _as_matrix(ds)]
    n = len(d)
    for i in range(n):
        if d[i][i] != 0:
            raise MetricError(f"nonzero diagonal at {i}")
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                raise MetricError(f"asymmetric entries at ({i}, {j})")
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            di = d[i]
            for j in range(n):
                via = dik + dk[j]
                if via < di[j]:
                    di[j] = via
    return d


def pseudometric_quotient(dps) -> tuple[list[list[int]], list[list]]:
    """Merge points at distance zero; returns (classes, metric on classes)."""
    d = _as_matrix(dps)
    n = len(d)
    classes: list[list[int]] = []
    seen = set()
    for i in range(n):
        if i in seen:
            continue
        cls = [j for j in range(n) if d[i][j] == 0]
        seen.update(cls)
        classes.append(cls)
    dm = [[d[a[0]][b[0]] for b in classes] for a in classes]
    return classes, dm


def quasimetric_to_metric(dq, mode: str = "max") -> list[list]:
    """Symmetrize a quasimetric by max or sum of the two directions."""
    d = _as_matrix(dq)
    n = len(d)
    for i in range(n):
        if d[i][i] != 0:
            raise MetricError(f"nonzero diagonal at {i}")
    bad = triangle_violations(d)
    if bad:
        raise MetricError(f"input violates the triangle inequality at {bad[0]}")
    if mode == "max":
        combine = max
    elif mode == "sum":
        combine = lambda a, b: a + b  # noqa: E731
    else:
        raise MetricError(f"mode must be 'max' or 'sum', got {mode!r}")
    return [[combine(d[i][j], d[j][i]) for j in range(n)] for i in range(n)]
