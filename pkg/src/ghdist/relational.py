"""Relations between point sets and the relational Hausdorff distances.

A selection is any callable (A, B) -> Relation. Upper relational distances
take the largest selected pair distance, collective ones minimize that over
a family of selections, and lower relational distances take d_H between the
domain and range of the selected relation.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .audit import AxiomReport, UndefinedDistance
from .metric import PointSet, _same_space, dist_point_set, hausdorff

ENUMERATION_LIMIT = 12


@dataclass(frozen=True)
class Relation:
    A: PointSet
    B: PointSet
    pairs: frozenset

    def __post_init__(self):
        _same_space(self.A, self.B)
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        for a, b in self.pairs:
            if a not in self.A or b not in self.B:
                raise ValueError(f"pair ({a}, {b}) is not in A x B")

    @classmethod
    def from_matrix(cls, A: PointSet, B: PointSet, mask) -> "Relation":
        mask = np.asarray(mask, dtype=bool)
        rows, cols = list(A), list(B)
        if mask.shape != (len(rows), len(cols)):
            raise ValueError(f"mask shape {mask.shape} does not match {len(rows)}x{len(cols)}")
        return cls(A, B, frozenset((rows[i], cols[j]) for i, j in zip(*np.nonzero(mask))))

    def matrix(self) -> np.ndarray:
        rows, cols = list(self.A), list(self.B)
        out = np.zeros((len(rows), len(cols)), dtype=bool)
        ri = {a: i for i, a in enumerate(rows)}
        ci = {b: j for j, b in enumerate(cols)}
        for a, b in self.pairs:
            out[ri[a], ci[b]] = True
        return out

    def domain(self) -> frozenset:
        return frozenset(a for a, _ in self.pairs)

    def range(self) -> frozenset:
        return frozenset(b for _, b in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


Selection = Callable[[PointSet, PointSet], Relation]


def is_complete(R: Relation) -> bool:
    return R.domain() == R.A.members and R.range() == R.B.members


def is_intersection_complete(R: Relation) -> bool:
    """Whether R is an intersection of complete relations on A x B.

    Each missing pair (a, b) must be avoidable by some complete superset:
    a needs another partner (|B| >= 2 or a already in dom R) and b needs
    another partner (|A| >= 2 or b already in ran R).
    """
    if is_complete(R):
        return True
    dom, ran = R.domain(), R.range()
    nA, nB = len(R.A), len(R.B)
    for a, b in itertools.product(R.A, R.B):
        if (a, b) in R.pairs:
            continue
        if not ((nB >= 2 or a in dom) and (nA >= 2 or b in ran)):
            return False
    return True


def complete_supersets(R: Relation) -> Iterable[frozenset]:
    """Brute force: every complete relation on A x B containing R."""
    free = [p for p in itertools.product(R.A, R.B) if p not in R.pairs]
    for r in range(len(free) + 1):
        for extra in itertools.combinations(free, r):
            S = R.pairs | frozenset(extra)
            if {a for a, _ in S} == R.A.members and {b for _, b in S} == R.B.members:
                yield S


def ur_distance(sel: Selection, A: PointSet, B: PointSet):
    R = sel(A, B)
    if not R.pairs:
        raise UndefinedDistance(f"selection is empty on {A} x {B}")
    X = A.space
    return max(X.dmat[a][b] for a, b in R.pairs)


def canonical_RH(A: PointSet, B: PointSet) -> Relation:
    """Pairs at distance at most d_H(A, B)."""
    dH = hausdorff(A, B)
    X = _same_space(A, B)
    return Relation(A, B, frozenset((a, b) for a in A for b in B if X.dmat[a][b] <= dH))


def full_relation(A: PointSet, B: PointSet) -> Relation:
    return Relation(A, B, frozenset(itertools.product(A, B)))


def nearest_complete(A: PointSet, B: PointSet) -> Relation:
    """Every point paired with all of its nearest points on the other side."""
    X = _same_space(A, B)
    pairs = set()
    for a in A:
        m = dist_point_set(a, B)
        pairs |= {(a, b) for b in B if X.dmat[a][b] == m}
    for b in B:
        m = dist_point_set(b, A)
        pairs |= {(a, b) for a in A if X.dmat[a][b] == m}
    return Relation(A, B, frozenset(pairs))


def closest_pairs(A: PointSet, B: PointSet) -> Relation:
    """Only the globally closest pairs. Not TI-compatible: d^R is the gap
    between the sets, which breaks the triangle inequality."""
    X = _same_space(A, B)
    m = min(X.dmat[a][b] for a in A for b in B)
    return Relation(A, B, frozenset((a, b) for a in A for b in B if X.dmat[a][b] == m))


def nearest_point(A: PointSet, B: PointSet) -> Relation:
    """The smallest-index point of A paired with its first nearest point in B."""
    X = _same_space(A, B)
    a = min(A.members)
    b = min(B, key=lambda j: (X.dmat[a][j], j))
    return Relation(A, B, frozenset({(a, b)}))


def threshold_selection(r) -> Selection:
    def sel(A: PointSet, B: PointSet) -> Relation:
        X = _same_space(A, B)
        return Relation(A, B, frozenset((a, b) for a in A for b in B if X.dmat[a][b] <= r))

    sel.__name__ = f"threshold:{r}"
    return sel


def custom_selection(table: dict) -> Selection:
    """Selection from explicit tables keyed by "A|B" with A, B comma lists of
    point labels; values are lists of [a, b] label pairs. Pairs not listed
    fall back to the diagonal when A == B and are otherwise empty."""
    parsed = {}
    for key, pairs in table.items():
        left, right = key.split("|")
        parsed[(_labels(left), _labels(right))] = [tuple(p) for p in pairs]

    def sel(A: PointSet, B: PointSet) -> Relation:
        X = _same_space(A, B)
        key = (tuple(sorted(map(str, A.labels()))), tuple(sorted(map(str, B.labels()))))
        if key in parsed:
            lookup = {str(p): i for i, p in enumerate(X.points)}
            return Relation(A, B, frozenset((lookup[str(a)], lookup[str(b)]) for a, b in parsed[key]))
        if A == B:
            return Relation(A, B, frozenset((a, a) for a in A))
        return Relation(A, B, frozenset())

    sel.__name__ = "custom"
    return sel


def _labels(s: str) -> tuple:
    return tuple(sorted(x.strip() for x in s.split(",") if x.strip()))


SELECTIONS: dict[str, Selection] = {
    "rh": canonical_RH,
    "complete": nearest_complete,
    "full": full_relation,
    "closest": closest_pairs,
    "nearest": nearest_point,
}


def parse_selection(spec: str) -> Selection:
    """rh | complete | full | closest | nearest | threshold:<r> | custom:<json or path>."""
    if spec in SELECTIONS:
        return SELECTIONS[spec]
    if spec.startswith("threshold:"):
        from .io import parse_number

        return threshold_selection(parse_number(spec.split(":", 1)[1]))
    if spec.startswith("custom:"):
        payload = spec.split(":", 1)[1]
        try:
            table = json.loads(payload)
        except json.JSONDecodeError:
            with open(payload) as fh:
                table = json.load(fh)
        return custom_selection(table)
    raise ValueError(f"unknown selection {spec!r}")


def check_selection(sel: Selection, sets: Sequence[PointSet], kind: str = "ur") -> AxiomReport:
    """UR selections must give the diagonal on (A, A); LR ones a symmetric relation."""
    rep = AxiomReport(subject=f"{kind} selection shape: {getattr(sel, '__name__', 'selection')}")
    for A in sets:
        R = sel(A, A)
        rep.tick("diagonal" if kind == "ur" else "symmetric")
        if kind == "ur" and R.pairs != frozenset((a, a) for a in A):
            rep.add("diagonal", (A,), f"R(A,A) = {sorted(R.pairs)}")
        if kind == "lr" and R.pairs != frozenset((b, a) for a, b in R.pairs):
            rep.add("symmetric", (A,), f"S(A,A) = {sorted(R.pairs)}")
    return rep


def check_ti_criterion(sel: Selection, sets: Sequence[PointSet]) -> AxiomReport:
    """For every (A, B, C) and selected (a, b) in R(A, B), look for selected
    pairs (a', c1) in R(A, C) and (c2, b') in R(C, B) with
    d(a, b) <= d(a', c1) + d(c2, b'). Minima are attained on finite sets, so
    no slack is needed."""
    rep = AxiomReport(subject=f"TI-criterion: {getattr(sel, '__name__', 'selection')}")
    sets = list(sets)
    rel = {(A, B): sel(A, B) for A in sets for B in sets}
    X = sets[0].space if sets else None

    def longest(R: Relation):
        return max(((X.dmat[a][b], (a, b)) for a, b in R.pairs), default=None)

    top = {k: longest(R) for k, R in rel.items()}
    for A, B, C in itertools.product(sets, repeat=3):
        R_ab = rel[(A, B)]
        if not R_ab.pairs:
            continue
        left, right = top[(A, C)], top[(C, B)]
        for a, b in sorted(R_ab.pairs):
            rep.tick("ti")
            dab = X.dmat[a][b]
            if left is None or right is None:
                rep.add("ti", (A, B, C, (a, b)), "R(A,C) or R(C,B) is empty")
                continue
            if dab > left[0] + right[0]:
                rep.add("ti", (A, B, C, (a, b)), f"d(a,b) = {dab} > best {left[0]} + {right[0]} via {left[1]}, {right[1]}")
    return rep


def cur_distance(family, A: PointSet, B: PointSet, *, method: str = "auto", enumeration_limit: int = ENUMERATION_LIMIT):
    """inf over the family of the upper relational distance.

    ``family="all_complete"`` ranges over every complete relation on A x B.
    That case is enumerated when |A||B| <= enumeration_limit, otherwise
    solved exactly by threshold search: the least r whose r-threshold
    relation is complete.
    """
    if isinstance(family, str):
        if family != "all_complete":
            raise ValueError(f"unknown family {family!r}")
        if method == "enumerate" or (method == "auto" and len(A) * len(B) <= enumeration_limit):
            return _cur_enumerate(A, B)
        return _cur_threshold(A, B)
    family = list(family)
    if not family:
        raise ValueError("empty family of selections")
    values = []
    for sel in family:
        try:
            values.append(ur_distance(sel, A, B))
        except UndefinedDistance:
            continue
    if not values:
        raise UndefinedDistance("every selection in the family is empty on this pair")
    return min(values)


def _cur_enumerate(A: PointSet, B: PointSet):
    X = _same_space(A, B)
    cells = list(itertools.product(A, B))
    rows, cols = list(A), list(B)
    row_mask = {a: 0 for a in rows}
    col_mask = {b: 0 for b in cols}
    for k, (a, b) in enumerate(cells):
        row_mask[a] |= 1 << k
        col_mask[b] |= 1 << k
    weights = [X.dmat[a][b] for a, b in cells]
    best = None
    for s in range(1, 1 << len(cells)):
        if any(not s & m for m in row_mask.values()) or any(not s & m for m in col_mask.values()):
            continue
        v = max(w for k, w in enumerate(weights) if s >> k & 1)
        if best is None or v < best:
            best = v
    return best


def _cur_threshold(A: PointSet, B: PointSet):
    X = _same_space(A, B)
    radii = sorted({X.dmat[a][b] for a in A for b in B})

    def complete_at(r) -> bool:
        return all(any(X.dmat[a][b] <= r for b in B) for a in A) and all(any(X.dmat[a][b] <= r for a in A) for b in B)

    lo, hi = 0, len(radii) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if complete_at(radii[mid]):
            hi = mid
        else:
            lo = mid + 1
    return radii[lo]


def lr_distance(sel: Selection, A: PointSet, B: PointSet):
    R = sel(A, B)
    dom, ran = R.domain(), R.range()
    if not dom or not ran:
        raise UndefinedDistance(f"selection on {A} x {B} has empty domain or range")
    X = A.space
    return hausdorff(PointSet(X, dom), PointSet(X, ran))


def check_lr_chain_condition(sel: Selection, sets: Sequence[PointSet]) -> AxiomReport:
    """ran S(A, B) == dom S(B, C) for every triple."""
    rep = AxiomReport(subject=f"LR chain condition: {getattr(sel, '__name__', 'selection')}")
    sets = list(sets)
    rel = {(A, B): sel(A, B) for A in sets for B in sets}
    if len(sets) < 3:
        rep.notes.append("fewer than three sets: vacuous")
        return rep
    for A, B, C in itertools.product(sets, repeat=3):
        rep.tick("chain")
        left, right = rel[(A, B)].range(), rel[(B, C)].domain()
        if left != right:
            rep.add("chain", (A, B, C), f"ran S(A,B) = {sorted(left)} but dom S(B,C) = {sorted(right)}")
    return rep


def intersect_selections(*sels: Selection) -> Selection:
    """Pairwise intersection, the R subset R' n R'' ingredient of directed families."""

    def sel(A, B):
        pairs = sels[0](A, B).pairs
        for s in sels[1:]:
            pairs = pairs & s(A, B).pairs
        return Relation(A, B, pairs)

    sel.__name__ = "&".join(getattr(s, "__name__", "sel") for s in sels)
    return sel


def is_directed_family(family: Sequence[Selection], sets: Sequence[PointSet]) -> bool:
    """For every two members some member lies inside both, on all listed pairs."""
    family = list(family)
    tables = [{(A, B): s(A, B).pairs for A in sets for B in sets} for s in family]
    for i, j in itertools.product(range(len(family)), repeat=2):
        if not any(all(t[k] <= tables[i][k] & tables[j][k] for k in t) for t in tables):
            return False
    return True
