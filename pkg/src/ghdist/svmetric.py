"""Set-valued metrics, their balls and topologies, and the two set-valued
factorizations of the Hausdorff distance (sup of a finite value set, and
sup of a complement-of-radii set)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

from .algebra import (
    AlgebraError,
    Interval,
    PartialAlgebra,
    Postmeasure,
    minkowski_sum,
    powerset_algebra,
    sup_algebra,
    sup_of,
)
from .audit import AxiomReport
from .metric import PointSet, _same_space, closed_neighborhood, dist_point_set, hausdorff

DEFAULT_TOPOLOGY_GUARD = 12


@dataclass
class SvMetric:
    carrier: list
    algebra: PartialAlgebra
    dmap: Callable[[Any, Any], Any]
    name: str = "sv-metric"
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.carrier = list(self.carrier)

    def value(self, a, b):
        key = (a, b)
        if key not in self._cache:
            self._cache[key] = self.dmap(a, b)
        return self._cache[key]


@dataclass(frozen=True)
class FiniteTopology:
    carrier: tuple
    open_sets: frozenset

    def is_topology(self) -> bool:
        M = frozenset(self.carrier)
        if frozenset() not in self.open_sets or M not in self.open_sets:
            return False
        return all(a | b in self.open_sets and a & b in self.open_sets for a, b in itertools.combinations(self.open_sets, 2))

    def is_discrete(self) -> bool:
        return all(frozenset([m]) in self.open_sets for m in self.carrier)

    def sorted_opens(self) -> list[list]:
        index = {m: i for i, m in enumerate(self.carrier)}
        return sorted((sorted(o, key=index.__getitem__) for o in self.open_sets), key=lambda o: (len(o), [index[m] for m in o]))


def check_sv_metric(d: SvMetric) -> AxiomReport:
    """Symmetry, triangle inequality and faithfulness over the whole carrier."""
    alg = d.algebra
    rep = AxiomReport(subject=f"sv-metric axioms: {d.name}")
    C = d.carrier
    for a, b in itertools.product(C, repeat=2):
        v = d.value(a, b)
        rep.tick("membership")
        if not alg.contains(v):
            rep.add("membership", (a, b), f"value {v!r} outside the algebra")
        rep.tick("faithfulness")
        if alg.is_zero(v) != (a == b):
            rep.add("faithfulness", (a, b), f"d = {v!r}")
        rep.tick("symmetry")
        if not alg.eq(v, d.value(b, a)):
            rep.add("symmetry", (a, b), f"{v!r} vs {d.value(b, a)!r}")
    for a, c, b in itertools.product(C, repeat=3):
        rep.tick("triangle")
        via = alg.join(d.value(a, c), d.value(c, b))
        if not alg.leq(d.value(a, b), via):
            rep.add("triangle", (a, c, b), f"d(a,b) = {d.value(a, b)!r} not below {via!r}")
    return rep


def sv_ball(d: SvMetric, m, eps) -> frozenset:
    """Points m' of the carrier with d(m, m') strictly below eps."""
    alg = d.algebra
    if not alg.lt(alg.zero, eps):
        raise AlgebraError(f"ball radius {eps!r} must be strictly above zero")
    return frozenset(x for x in d.carrier if alg.lt(d.value(m, x), eps))


def sv_topology(d: SvMetric, eps_pool: Sequence, max_carrier: int = DEFAULT_TOPOLOGY_GUARD) -> FiniteTopology:
    """Topology generated by the balls B_eps(m), m in carrier, eps in pool."""
    if not eps_pool:
        raise AlgebraError("empty radius pool")
    C = d.carrier
    if len(C) > max_carrier:
        raise AlgebraError(f"carrier of {len(C)} points exceeds the guard of {max_carrier}")
    bit = {m: 1 << i for i, m in enumerate(C)}
    full = (1 << len(C)) - 1

    def mask(s):
        out = 0
        for m in s:
            out |= bit[m]
        return out

    subbase = {mask(sv_ball(d, m, eps)) for m in C for eps in eps_pool}
    base = {full}
    for s in subbase:
        base |= {b & s for b in base}
    opens = {0}
    for b in base:
        opens |= {o | b for o in opens}
    sets = frozenset(frozenset(m for m in C if o & bit[m]) for o in opens)
    return FiniteTopology(tuple(C), sets)


def symmetric_difference_sv(Z: Iterable[Hashable], M: Iterable[Iterable] | None = None) -> SvMetric:
    """The internal sv-metric (A, B) -> A symmetric-difference B.

    ``M=None`` takes every nonempty subset of Z.
    """
    Z = list(Z)
    if M is None:
        M = [frozenset(c) for r in range(1, len(Z) + 1) for c in itertools.combinations(Z, r)]
    M = [frozenset(m) for m in M]
    if not M:
        raise AlgebraError("empty carrier")
    return SvMetric(M, powerset_algebra(Z), lambda a, b: a ^ b, name="symmetric difference")


def ball_bound(A: frozenset, eps: frozenset, Z: Iterable) -> set[frozenset]:
    """{(A - alpha) | beta : alpha in eps&A, beta in eps-A, alpha|beta a proper subset of eps}."""
    inside = sorted(eps & A, key=repr)
    outside = sorted(eps - A, key=repr)
    out = set()
    for r in range(len(inside) + 1):
        for alpha in itertools.combinations(inside, r):
            for s in range(len(outside) + 1):
                for beta in itertools.combinations(outside, s):
                    if len(alpha) + len(beta) < len(eps):
                        out.add((A - frozenset(alpha)) | frozenset(beta))
    return out


def pair_ball_cases(A: frozenset, x, y) -> set[frozenset]:
    """The three-case superset of B_{x,y}(A) for distinct x, y."""
    if x in A and y in A:
        return {A, A - {x}, A - {y}}
    if x in A and y not in A:
        return {A, A - {x}, A | {y}}
    if x not in A and y not in A:
        return {A, A | {x}, A | {y}}
    # x outside, y inside: same as case two with the roles swapped
    return {A, A - {y}, A | {x}}


# -- Hausdorff factorizations ---------------------------------------------

DSV_VARIANTS = ("pointwise", "union", "ambient")


def dsv_values(A: PointSet, B: PointSet, variant: str = "pointwise") -> frozenset:
    """{dist(a, B) : a in A} u {dist(b, A) : b in B}.

    ``union`` and ``ambient`` give {|dist(x,A) - dist(x,B)|} over A u B or
    over the whole space; ``union`` equals ``pointwise`` as a set.
    """
    X = _same_space(A, B)
    if variant == "pointwise":
        return frozenset(dist_point_set(a, B) for a in A.members) | frozenset(dist_point_set(b, A) for b in B.members)
    if variant in ("union", "ambient"):
        pts = A.members | B.members if variant == "union" else range(len(X))
        return frozenset(abs(dist_point_set(x, A) - dist_point_set(x, B)) for x in pts)
    raise ValueError(f"unknown variant {variant!r}")


def dsv_complement_threshold(A: PointSet, B: PointSet) -> Interval:
    """The set {r > 0 : A u B not inside A_r n B_r}, as the interval (0, t).

    t is the least radius at which A sits in B's closed neighbourhood and B
    in A's; it is found by scanning the finitely many radii at which either
    containment can start to hold.
    """
    _same_space(A, B)
    radii = sorted({0} | {dist_point_set(a, B) for a in A.members} | {dist_point_set(b, A) for b in B.members})
    for r in radii:
        if A.members <= closed_neighborhood(B, r).members and B.members <= closed_neighborhood(A, r).members:
            return Interval(r)
    raise AssertionError("no radius achieved containment")  # pragma: no cover


def hausdorff_sv_metric(sets: Sequence[PointSet], kind: str = "values") -> SvMetric:
    """The sv-metric behind d_H on a finite family of point sets.

    ``kind="values"`` uses dsv_values, ``kind="threshold"`` uses the
    complement-threshold intervals; both land in a sup algebra whose
    listed carrier is the zero class plus every value taken.
    """
    if kind == "values":
        fn = dsv_values
        zero = frozenset({0})
    elif kind == "threshold":
        fn = dsv_complement_threshold
        zero = Interval(0)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    sets = list(sets)
    table = {(a, b): fn(a, b) for a in sets for b in sets}
    carrier = [zero] + list(dict.fromkeys(table.values()))
    alg = sup_algebra(carrier)
    return SvMetric(sets, alg, lambda a, b: table[(a, b)] if (a, b) in table else fn(a, b), name=f"d_sv[{kind}]")


def sup_postmeasure(alg: PartialAlgebra) -> Postmeasure:
    return Postmeasure(alg, sup_of, name="sup")


def verify_decomposition(sets: Sequence[PointSet], *, triples: bool = True) -> AxiomReport:
    """Check sup(dsv) = d_H and sup(threshold) = d_H on all pairs, and the
    componentwise triangle inequality for both set-valued maps on all triples."""
    sets = list(sets)
    rep = AxiomReport(subject="decomposition of the Hausdorff distance")
    vals, thr = {}, {}
    for A, B in itertools.product(sets, repeat=2):
        dH = hausdorff(A, B)
        v = vals[(A, B)] = dsv_values(A, B)
        t = thr[(A, B)] = dsv_complement_threshold(A, B)
        rep.tick("sup_values")
        if max(v) != dH:
            rep.add("sup_values", (A, B), f"sup dsv = {max(v)} but d_H = {dH}")
        rep.tick("sup_threshold")
        if t.t != dH:
            rep.add("sup_threshold", (A, B), f"threshold = {t.t} but d_H = {dH}")
        rep.tick("zero_iff_equal")
        if (v == frozenset({0})) != (A == B):
            rep.add("zero_iff_equal", (A, B), f"dsv = {sorted(v)}")
        rep.tick("symmetric")
        if (B, A) in vals and vals[(B, A)] != v:
            rep.add("symmetric", (A, B), "dsv(A,B) != dsv(B,A)")
    if triples:
        for A, C, B in itertools.product(sets, repeat=3):
            rep.tick("triangle_values")
            via = minkowski_sum(vals[(A, C)], vals[(C, B)])
            if not max(vals[(A, B)]) <= max(via):
                rep.add("triangle_values", (A, C, B), f"{max(vals[(A, B)])} > sup of componentwise sum {max(via)}")
            rep.tick("triangle_threshold")
            via_t = minkowski_sum(thr[(A, C)], thr[(C, B)])
            if not thr[(A, B)].t <= via_t.t:
                rep.add("triangle_threshold", (A, C, B), f"{thr[(A, B)].t} > {via_t.t}")
    return rep


def ball_inclusion_check(d: SvMetric, pm: Postmeasure) -> AxiomReport:
    """For strictly monotone mu: B_eps(m) under d sits inside the real ball of
    radius mu(eps) under mu o d, for every m and every listed eps above zero."""
    alg = d.algebra
    rep = AxiomReport(subject=f"ball inclusion: {pm.name} o {d.name}")
    for eps in alg.elements:
        if not alg.lt(alg.zero, eps):
            continue
        r = pm(eps)
        for m in d.carrier:
            rep.tick("inclusion")
            inner = sv_ball(d, m, eps)
            outer = frozenset(x for x in d.carrier if pm(d.value(m, x)) < r)
            if not inner <= outer:
                rep.add("inclusion", (m, eps), f"{len(inner - outer)} points escape")
    return rep
