"""Distances between finite metric spaces.

The Gromov-Hausdorff distance is computed from correspondences: half the
least distortion over complete relations between the two point sets.
Embedding distances search a finite grid of gluings (metrics on the
disjoint union) and take the least value of a set distance between the
two images.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .metric import FiniteMetricSpace, MetricError, PointSet, hausdorff, is_exact, triangle_violations

EXHAUSTIVE_LIMIT = 30
GRID_GUARD = 200_000


def _half(t):
    if isinstance(t, int) or isinstance(t, Fraction):
        v = Fraction(t) / 2
        return v.numerator if v.denominator == 1 else v
    return t / 2


def distortion(X: FiniteMetricSpace, Y: FiniteMetricSpace, R: Sequence[tuple[int, int]]):
    """max |d_X(x,x') - d_Y(y,y')| over pairs (x,y), (x',y') of R."""
    R = list(R)
    return max((abs(X.dmat[x][x2] - Y.dmat[y][y2]) for (x, y), (x2, y2) in itertools.product(R, repeat=2)), default=0)


def minimal_correspondences(X: FiniteMetricSpace, Y: FiniteMetricSpace):
    """Relations graph(phi) u graph(psi)^T for maps phi: X -> Y, psi: Y -> X.

    Every correspondence contains one of these, and distortion only grows
    with the relation, so they suffice for the minimum.
    """
    nX, nY = len(X), len(Y)
    seen = set()
    for phi in itertools.product(range(nY), repeat=nX):
        for psi in itertools.product(range(nX), repeat=nY):
            R = frozenset(enumerate(phi)) | frozenset((x, y) for y, x in enumerate(psi))
            if R not in seen:
                seen.add(R)
                yield R


def _feasible(X: FiniteMetricSpace, Y: FiniteMetricSpace, t) -> frozenset | None:
    """A correspondence of distortion <= t, by backtracking, or None.

    Variables are the rows x (choose some partner y) then the columns y;
    every chosen pair must be compatible with all pairs chosen so far.
    """
    nX, nY = len(X), len(Y)
    DX, DY = X.dmat, Y.dmat

    def ok(p, q):
        return abs(DX[p[0]][q[0]] - DY[p[1]][q[1]]) <= t

    chosen: list[tuple[int, int]] = []

    def covered_y(y):
        return any(c[1] == y for c in chosen)

    def place(slot: int) -> bool:
        if slot == nX + nY:
            return True
        if slot < nX:
            x = slot
            cands = [(x, y) for y in range(nY)]
        else:
            y = slot - nX
            if covered_y(y):
                return place(slot + 1)
            cands = [(x, y) for x in range(nX)]
        for p in cands:
            if p in chosen:
                if place(slot + 1):
                    return True
                continue
            if all(ok(p, q) for q in chosen):
                chosen.append(p)
                if place(slot + 1):
                    return True
                chosen.pop()
        return False

    return frozenset(chosen) if place(0) else None


def gh_correspondence(X: FiniteMetricSpace, Y: FiniteMetricSpace, method: str = "auto"):
    """(GH distance, an optimal correspondence as sorted (x, y) pairs)."""
    if method == "auto":
        method = "exhaustive" if len(X) * len(Y) <= 9 else "threshold"
    if method == "exhaustive":
        if len(X) * len(Y) > EXHAUSTIVE_LIMIT:
            raise ValueError(f"|X||Y| = {len(X) * len(Y)} exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}")
        best, arg = None, None
        for R in minimal_correspondences(X, Y):
            dis = distortion(X, Y, R)
            if best is None or dis < best:
                best, arg = dis, R
                if dis == 0:
                    break
        return _half(best), sorted(arg)
    if method != "threshold":
        raise ValueError(f"unknown method {method!r}")
    cands = sorted(
        {0}
        | {
            abs(X.dmat[a][b] - Y.dmat[c][d])
            for a, b in itertools.combinations_with_replacement(range(len(X)), 2)
            for c, d in itertools.combinations_with_replacement(range(len(Y)), 2)
        }
    )
    lo, hi = 0, len(cands) - 1
    best = _feasible(X, Y, cands[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        R = _feasible(X, Y, cands[mid])
        if R is not None:
            hi, best = mid, R
        else:
            lo = mid + 1
    if best is None or distortion(X, Y, best) > cands[lo]:  # pragma: no cover
        best = _feasible(X, Y, cands[lo])
    return _half(distortion(X, Y, best)), sorted(best)


def gh_distance(X: FiniteMetricSpace, Y: FiniteMetricSpace, method: str = "auto"):
    return gh_correspondence(X, Y, method)[0]


def isometric(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> bool:
    return len(X) == len(Y) and _feasible(X, Y, 0) is not None


# -- gluings ---------------------------------------------------------------


@dataclass
class GluingSpace:
    """The disjoint union of X and Y with cross distances ``cross[x][y]``."""

    X: FiniteMetricSpace
    Y: FiniteMetricSpace
    cross: tuple
    space: FiniteMetricSpace

    @classmethod
    def build(cls, X: FiniteMetricSpace, Y: FiniteMetricSpace, cross) -> "GluingSpace":
        cross = tuple(tuple(row) for row in cross)
        if len(cross) != len(X) or any(len(row) != len(Y) for row in cross):
            raise MetricError(f"cross matrix must be {len(X)}x{len(Y)}")
        space = FiniteMetricSpace(
            [("X", p) for p in X.points] + [("Y", q) for q in Y.points], gluing_matrix(X, Y, cross)
        )
        return cls(X, Y, cross, space)

    def image_X(self) -> PointSet:
        return PointSet(self.space, frozenset(range(len(self.X))))

    def image_Y(self) -> PointSet:
        n = len(self.X)
        return PointSet(self.space, frozenset(range(n, n + len(self.Y))))


def gluing_matrix(X: FiniteMetricSpace, Y: FiniteMetricSpace, cross) -> list[list]:
    nX = len(X)
    rows = [list(X.dmat[i]) + list(cross[i]) for i in range(nX)]
    rows += [[cross[i][j] for i in range(nX)] + list(Y.dmat[j]) for j in range(len(Y))]
    return rows


def is_valid_gluing(X: FiniteMetricSpace, Y: FiniteMetricSpace, cross) -> bool:
    if any(c <= 0 for row in cross for c in row):
        return False
    return not triangle_violations(gluing_matrix(X, Y, cross))


def correspondence_gluing(X: FiniteMetricSpace, Y: FiniteMetricSpace, R, r) -> list[list]:
    """cross(x, y) = min over (x', y') in R of d_X(x, x') + r + d_Y(y', y).

    This is a metric whenever r > 0 and 2r >= dis(R), and then the Hausdorff
    distance of the two images is exactly r.
    """
    return [
        [min(X.dmat[x][a] + r + Y.dmat[b][y] for a, b in R) for y in range(len(Y))]
        for x in range(len(X))
    ]


def auto_grid(X: FiniteMetricSpace, Y: FiniteMetricSpace, k: int) -> list[list[list]]:
    """Correspondence gluings at radii h, 2h, ..., kh with h = max diameter / (k - 1)."""
    if k < 2:
        raise ValueError("auto grids need k >= 2")
    diam = max(X.diameter() if len(X) > 1 else 0, Y.diameter() if len(Y) > 1 else 0)
    if diam == 0:
        diam = 1
    h = Fraction(diam, k - 1) if is_exact(diam) else diam / (k - 1)
    radii = [h * i for i in range(1, k + 1)]
    out, seen = [], set()
    for R in minimal_correspondences(X, Y):
        for r in radii:
            cross = correspondence_gluing(X, Y, R, r)
            key = tuple(map(tuple, cross))
            if key not in seen:
                seen.add(key)
                out.append(cross)
    return out


def grid_resolution(X: FiniteMetricSpace, Y: FiniteMetricSpace, k: int):
    diam = max(X.diameter() if len(X) > 1 else 0, Y.diameter() if len(Y) > 1 else 0) or 1
    return Fraction(diam, k - 1) if is_exact(diam) else diam / (k - 1)


def values_grid(X: FiniteMetricSpace, Y: FiniteMetricSpace, values: Sequence) -> list[list[list]]:
    """Every cross matrix with entries from ``values``."""
    cells = len(X) * len(Y)
    if len(values) ** cells > GRID_GUARD:
        raise ValueError(f"{len(values)}^{cells} candidate gluings exceed the guard of {GRID_GUARD}")
    out = []
    for combo in itertools.product(values, repeat=cells):
        out.append([list(combo[i * len(Y):(i + 1) * len(Y)]) for i in range(len(X))])
    return out


def parse_grid(spec: str, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> list[list[list]]:
    """``auto:<k>`` or ``values:<v1>,<v2>,...``."""
    from .io import parse_number

    kind, _, arg = spec.partition(":")
    if kind == "auto":
        return auto_grid(X, Y, int(arg or 5))
    if kind == "values":
        vals = [parse_number(v) for v in arg.split(",") if v.strip()]
        if not vals:
            raise ValueError("values grid needs at least one value")
        return values_grid(X, Y, vals)
    raise ValueError(f"unknown grid {spec!r}; use auto:<k> or values:<v1,...>")


def embed_distance(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    grid: Sequence,
    base: Callable[[PointSet, PointSet], object] = hausdorff,
):
    """Least base(image X, image Y) over the valid gluings in ``grid``.

    Returns (value, cross matrix of the best gluing).
    """
    best, arg = None, None
    for cross in grid:
        if not is_valid_gluing(X, Y, cross):
            continue
        Z = GluingSpace.build(X, Y, cross)
        v = base(Z.image_X(), Z.image_Y())
        if best is None or v < best:
            best, arg = v, cross
    if best is None:
        raise MetricError("no valid gluing in the grid")
    return best, arg
