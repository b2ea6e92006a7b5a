"""Partial algebras, postmeasures and their axiom checkers.

A partial algebra here is an ordered carrier with a commutative join and a
least element. The order is allowed to be a preorder: every algebra carries
an element equivalence ``eq`` and strict order means "leq and not eq". For
power-set algebras eq is set equality; for the sup-ordered algebra of
finite sets of reals it is equality of sups.

``elements`` is always a finite list that the checkers enumerate. Some
algebras (the sup algebra, path families) live inside an infinite ambient
algebra; for those ``contains`` decides ambient membership and joins of
listed elements are allowed to land outside the list.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Any, Callable, Hashable, Iterable, Sequence

from .audit import AxiomReport, DistanceFn
from .metric import default_tolerance


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Interval:
    """The half-open interval (0, t); t = 0 stands for the empty set.

    Used as the canonical representative of a complement set whose only
    relevant feature is its supremum.
    """

    t: Any

    def __post_init__(self):
        if self.t < 0:
            raise AlgebraError(f"negative threshold {self.t}")

    def __repr__(self) -> str:
        return f"(0,{self.t})" if self.t else "{}"


def sup_of(elem):
    """Supremum of a finite set of reals or of an Interval."""
    if isinstance(elem, Interval):
        return elem.t
    return max(elem)


def minkowski_sum(R, S):
    """Componentwise sum {r + s}; for intervals (0,a) + (0,b) = (0,a+b)."""
    if isinstance(R, Interval) and isinstance(S, Interval):
        return Interval(R.t + S.t)
    if isinstance(R, Interval) or isinstance(S, Interval):
        raise AlgebraError("cannot mix interval and finite-set elements")
    return frozenset(r + s for r in R for s in S)


@dataclass
class PartialAlgebra:
    elements: list
    leq: Callable[[Any, Any], bool]
    join: Callable[[Any, Any], Any]
    zero: Any
    eq: Callable[[Any, Any], bool] = field(default=lambda a, b: a == b)
    contains: Callable[[Any], bool] | None = None
    name: str = "partial algebra"

    def __post_init__(self):
        self.elements = list(self.elements)
        if not self.elements:
            raise AlgebraError("a partial algebra needs at least one element")
        if self.contains is None:
            listed = self.elements
            self.contains = lambda e: any(self.eq(e, x) for x in listed)
        if not self.contains(self.zero):
            raise AlgebraError(f"zero {self.zero!r} is not an element")
        for a, b in itertools.combinations_with_replacement(self.elements, 2):
            if not self.contains(self.join(a, b)):
                raise AlgebraError(f"join({a!r}, {b!r}) = {self.join(a, b)!r} is not an element: carrier not closed")

    def lt(self, a, b) -> bool:
        return self.leq(a, b) and not self.eq(a, b)

    def is_zero(self, e) -> bool:
        return self.eq(e, self.zero)

    def index_of(self, e) -> int:
        for i, x in enumerate(self.elements):
            if self.eq(e, x):
                return i
        raise AlgebraError(f"{e!r} is not a listed element")


@dataclass
class Postmeasure:
    algebra: PartialAlgebra
    mu: Callable[[Any], Real]
    name: str = "postmeasure"

    def __call__(self, e):
        return self.mu(e)


def powerset_algebra(Z: Iterable[Hashable], carrier: Iterable[Iterable] | None = None) -> PartialAlgebra:
    """Subsets of Z under inclusion and union, zero = empty set.

    ``carrier=None`` takes the full power set of Z.
    """
    Z = list(Z)
    if carrier is None:
        carrier = [frozenset(c) for r in range(len(Z) + 1) for c in itertools.combinations(Z, r)]
    else:
        carrier = list(dict.fromkeys(frozenset(c) for c in carrier))
    zset = frozenset(Z)
    for c in carrier:
        if not c <= zset:
            raise AlgebraError(f"{set(c)} is not a subset of Z")
    if frozenset() not in carrier:
        raise AlgebraError("carrier must contain the empty set")
    members = set(carrier)
    return PartialAlgebra(
        elements=carrier,
        leq=lambda a, b: a <= b,
        join=lambda a, b: a | b,
        zero=frozenset(),
        contains=lambda e: e in members,
        name=f"power-set algebra on {len(Z)} points",
    )


def _is_finite_nonneg_set(e) -> bool:
    if isinstance(e, Interval):
        return True
    return isinstance(e, frozenset) and bool(e) and all(isinstance(v, Real) and v >= 0 for v in e)


def sup_algebra(carrier: Iterable[Iterable[Real]]) -> PartialAlgebra:
    """Finite nonempty subsets of [0, inf) ordered by sup, joined by Minkowski sum.

    Element equality is equality of sups, so the zero class is every set
    with sup 0, i.e. {0}. The ambient algebra is closed under Minkowski
    sums; joins of listed elements need not be listed.
    """
    elems = []
    for c in carrier:
        e = c if isinstance(c, Interval) else frozenset(c)
        if not _is_finite_nonneg_set(e):
            raise AlgebraError(f"{c!r} is not a finite nonempty subset of [0, inf)")
        elems.append(e)
    elems = list(dict.fromkeys(elems))
    if not any(sup_of(e) == 0 for e in elems):
        raise AlgebraError("carrier must contain the zero class {0}")
    kinds = {isinstance(e, Interval) for e in elems}
    zero = Interval(0) if kinds == {True} else frozenset({0})
    return PartialAlgebra(
        elements=elems,
        leq=lambda a, b: sup_of(a) <= sup_of(b),
        join=minkowski_sum,
        zero=zero,
        eq=lambda a, b: sup_of(a) == sup_of(b),
        contains=_is_finite_nonneg_set,
        name="sup algebra",
    )


def _label(e) -> str:
    if isinstance(e, frozenset):
        return "{" + ",".join(sorted(map(str, e))) + "}"
    return repr(e)


def check_partial_algebra(alg: PartialAlgebra) -> AxiomReport:
    """Exhaustive check of the four partial-algebra axioms plus preorder laws."""
    rep = AxiomReport(subject=f"partial algebra: {alg.name}")
    E = alg.elements
    n = len(E)
    leq = [[alg.leq(a, b) for b in E] for a in E]
    eq = [[alg.eq(a, b) for b in E] for a in E]
    joins = [[alg.join(a, b) for b in E] for a in E]

    for i in range(n):
        rep.tick("reflexive")
        if not leq[i][i]:
            rep.add("reflexive", (_label(E[i]),))
    for i, j, k in itertools.product(range(n), repeat=3):
        if leq[i][j] and leq[j][k]:
            rep.tick("transitive")
            if not leq[i][k]:
                rep.add("transitive", tuple(_label(E[x]) for x in (i, j, k)))
    antisym_fail = [(i, j) for i in range(n) for j in range(i + 1, n) if leq[i][j] and leq[j][i] and not eq[i][j]]
    if antisym_fail:
        i, j = antisym_fail[0]
        rep.notes.append(f"order is not antisymmetric modulo eq, e.g. {_label(E[i])} ~ {_label(E[j])}")

    for i in range(n):
        rep.tick("zero")
        if not alg.leq(alg.zero, E[i]):
            rep.add("zero", (_label(alg.zero), _label(E[i])), "zero is not below this element")

    for i, j in itertools.product(range(n), repeat=2):
        rep.tick("closure")
        if not alg.contains(joins[i][j]):
            rep.add("closure", (_label(E[i]), _label(E[j])), f"join = {_label(joins[i][j])}")
        if j >= i:
            rep.tick("commutative")
            if not alg.eq(joins[i][j], joins[j][i]):
                rep.add("commutative", (_label(E[i]), _label(E[j])), f"{_label(joins[i][j])} vs {_label(joins[j][i])}")

    for i, j, k in itertools.product(range(n), repeat=3):
        if leq[i][j]:
            rep.tick("monotone_join")
            if not alg.leq(joins[i][k], joins[j][k]):
                rep.add("monotone_join", tuple(_label(E[x]) for x in (i, j, k)), "R <= S but R+T not <= S+T")

    strict = [(i, j) for i in range(n) for j in range(n) if leq[i][j] and not eq[i][j]]
    for (i, j), (k, l) in itertools.product(strict, repeat=2):
        rep.tick("strict_join")
        a, b = joins[i][k], joins[j][l]
        if not (alg.leq(a, b) and not alg.eq(a, b)):
            rep.add("strict_join", tuple(_label(E[x]) for x in (i, j, k, l)), "R < S and R' < S' but R+R' not < S+S'")
    return rep


def check_postmeasure(pm: Postmeasure, tolerance=None) -> AxiomReport:
    """Faithfulness, monotonicity and subadditivity over the listed carrier."""
    alg = pm.algebra
    rep = AxiomReport(subject=f"postmeasure: {pm.name} on {alg.name}")
    E = alg.elements
    vals = [pm(e) for e in E]

    def tol(*v):
        return default_tolerance(*v) if tolerance is None else tolerance

    for e, v in zip(E, vals):
        rep.tick("faithfulness")
        zero_val = abs(v) <= tol(v)
        if zero_val != alg.is_zero(e):
            rep.add("faithfulness", (_label(e),), f"mu = {v}, is zero element: {alg.is_zero(e)}")
    for (a, va), (b, vb) in itertools.product(zip(E, vals), repeat=2):
        if alg.lt(a, b):
            rep.tick("monotone")
            if va > vb + tol(va, vb):
                rep.add("monotone", (_label(a), _label(b)), f"mu(R) = {va} > mu(S) = {vb}")
        rep.tick("subadditive")
        vj = pm(alg.join(a, b))
        if vj > va + vb + tol(vj, va, vb):
            rep.add("subadditive", (_label(a), _label(b)), f"mu(R+S) = {vj} > {va} + {vb}")
    return rep


def compose_metric(pm: Postmeasure, dsv) -> DistanceFn:
    """The real-valued distance (a, b) -> mu(dsv(a, b))."""
    alg = pm.algebra

    def composed(a, b):
        e = dsv.value(a, b)
        if not alg.contains(e):
            raise AlgebraError(f"dsv({a!r}, {b!r}) = {e!r} lies outside the algebra")
        return pm(e)

    return DistanceFn(composed, f"{pm.name} o {getattr(dsv, 'name', 'dsv')}")


def cardinality(e) -> int:
    return len(e)


def find_order_embedding(alg: PartialAlgebra, additive: bool = False):
    """Search for a map f into the reals that is injective on eq-classes and
    strictly monotone (a < b implies f(a) < f(b)).

    With ``additive=True`` it also asks f(a + b) = f(a) + f(b) whenever the
    join of two listed elements is listed, via an LP. Returns a dict
    element-index -> value, or None when no embedding was found. A None in
    additive mode is a certificate only for the listed carrier.
    """
    E = alg.elements
    n = len(E)
    cls = []
    for i in range(n):
        for c, rep_i in enumerate(cls):
            if alg.eq(E[i], E[rep_i]):
                break
        else:
            cls.append(i)
    class_of = [next(c for c, r in enumerate(cls) if alg.eq(E[i], E[r])) for i in range(n)]
    m = len(cls)
    lt = {(a, b) for a in range(m) for b in range(m) if alg.lt(E[cls[a]], E[cls[b]])}

    if not additive:
        from graphlib import CycleError, TopologicalSorter

        ts = TopologicalSorter({b: {a for (a, bb) in lt if bb == b} for b in range(m)})
        try:
            order = list(ts.static_order())
        except CycleError:
            return None
        rank = {c: r for r, c in enumerate(order)}
        return {i: rank[class_of[i]] for i in range(n)}

    import numpy as np
    from scipy.optimize import linprog

    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for a, b in lt:
        row = np.zeros(m)
        row[a], row[b] = 1, -1
        A_ub.append(row)
        b_ub.append(-1.0)
    for i, j in itertools.product(range(n), repeat=2):
        k = next((x for x in range(n) if alg.eq(alg.join(E[i], E[j]), E[x])), None)
        if k is None:
            continue
        row = np.zeros(m)
        row[class_of[k]] += 1
        row[class_of[i]] -= 1
        row[class_of[j]] -= 1
        A_eq.append(row)
        b_eq.append(0.0)
    res = linprog(
        c=np.zeros(m),
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(A_eq) if A_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=[(None, None)] * m,
        method="highs",
    )
    if not res.success:
        return None
    vals = res.x
    if len(set(np.round(vals, 9))) < m:
        return None
    return {i: float(vals[class_of[i]]) for i in range(n)}


# -- JSON fixtures ---------------------------------------------------------

_BUILTIN_LEQ = {
    "subset": lambda a, b: a <= b,
    "sup": lambda a, b: sup_of(a) <= sup_of(b),
}
_BUILTIN_JOIN = {"union": lambda a, b: a | b, "minkowski": minkowski_sum}
_BUILTIN_EQ = {"identity": lambda a, b: a == b, "sup": lambda a, b: sup_of(a) == sup_of(b)}


def _elem_from_json(v):
    if isinstance(v, list):
        return frozenset(Fraction(x) if isinstance(x, str) else x for x in v)
    return v


def algebra_from_json(obj: dict) -> PartialAlgebra:
    """Build an algebra from {"elements", "leq", "join", "zero"[, "eq"]}.

    ``leq`` is "builtin:<name>" or a list of [i, j] index pairs; ``join``
    is "builtin:<name>" or an n x n table of element indices; ``zero`` is an
    element index. With tables, elements are represented by their indices.
    """
    raw = obj["elements"]
    n = len(raw)
    leq_spec, join_spec = obj["leq"], obj["join"]
    eq_spec = obj.get("eq", "builtin:identity")
    tabular = not (isinstance(leq_spec, str) and isinstance(join_spec, str))
    if tabular:
        elems = list(range(n))
        if isinstance(leq_spec, str) or isinstance(join_spec, str):
            raise AlgebraError("mixing builtin and tabular leq/join is not supported")
        pairs = {(int(i), int(j)) for i, j in leq_spec}
        table = [[int(v) for v in row] for row in join_spec]
        if len(table) != n or any(len(r) != n for r in table):
            raise AlgebraError("join table must be n x n")
        if any(not 0 <= v < n for r in table for v in r):
            raise AlgebraError("join table refers to a missing element: carrier not closed")
        return PartialAlgebra(
            elements=elems,
            leq=lambda a, b: (a, b) in pairs,
            join=lambda a, b: table[a][b],
            zero=int(obj["zero"]),
            name=obj.get("name", "tabular algebra"),
        )
    elems = [_elem_from_json(v) for v in raw]
    leq = _BUILTIN_LEQ[leq_spec.split(":", 1)[1]]
    join = _BUILTIN_JOIN[join_spec.split(":", 1)[1]]
    eq = _BUILTIN_EQ[eq_spec.split(":", 1)[1]]
    # sup/Minkowski algebras live in the closed ambient algebra of finite sets
    contains = _is_finite_nonneg_set if join_spec == "builtin:minkowski" else None
    return PartialAlgebra(
        elements=elems,
        leq=leq,
        join=join,
        zero=elems[int(obj["zero"])],
        eq=eq,
        contains=contains,
        name=obj.get("name", "algebra"),
    )


def algebra_to_json(alg: PartialAlgebra) -> dict:
    """Tabular serialization; every join of listed elements must be listed."""
    E = alg.elements
    table = [[alg.index_of(alg.join(a, b)) for b in E] for a in E]
    leq = [[i, j] for i, a in enumerate(E) for j, b in enumerate(E) if alg.leq(a, b)]
    return {
        "name": alg.name,
        "elements": [sorted(e, key=repr) if isinstance(e, frozenset) else e for e in E],
        "leq": leq,
        "join": table,
        "zero": alg.index_of(alg.zero),
    }
