"""Exhaustive counterexample search for the metric axioms.

Reports are plain data: a list of violations with witnesses plus counters.
Every axiom checker in the package returns an AxiomReport.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Sequence

from .metric import default_tolerance


class UndefinedDistance(ValueError):
    """A distance family has no value on this pair (e.g. an empty relation)."""


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": [_jsonable(w) for w in self.witness], "detail": self.detail}


@dataclass
class AxiomReport:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, witness: tuple, detail: str = "") -> None:
        self.violations.append(Violation(axiom, tuple(witness), detail))

    def tick(self, what: str, n: int = 1) -> None:
        self.checked[what] = self.checked.get(what, 0) + n

    def by_axiom(self, axiom: str) -> list[Violation]:
        return [v for v in self.violations if v.axiom == axiom]

    def extend(self, other: "AxiomReport", prefix: str = "") -> None:
        for v in other.violations:
            self.violations.append(Violation(prefix + v.axiom, v.witness, v.detail))
        for k, n in other.checked.items():
            self.tick(prefix + k, n)
        self.notes.extend(other.notes)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "violation_count": len(self.violations),
            "violations": [v.to_dict() for v in self.violations],
            "checked": dict(sorted(self.checked.items())),
            "notes": list(self.notes),
        }


# Same structure, different producers.
AuditReport = AxiomReport
VerificationReport = AxiomReport


def _jsonable(x: Any):
    if isinstance(x, Fraction):
        return float(x) if x.denominator != 1 else int(x)
    if isinstance(x, (frozenset, set)):
        return sorted((_jsonable(v) for v in x), key=repr)
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return repr(x)


@dataclass(frozen=True)
class DistanceFn:
    """A labelled binary distance on some family of objects.

    The wrapped function may raise UndefinedDistance; the auditor records
    those pairs instead of failing.
    """

    func: Callable[[Any, Any], Any]
    label: str

    def __call__(self, a, b):
        return self.func(a, b)


def audit_distance(
    d: Callable,
    items: Sequence[Hashable],
    tolerance=None,
    *,
    same: Callable[[Any, Any], bool] | None = None,
    triples: Sequence[tuple] | None = None,
) -> AxiomReport:
    """Check symmetry, faithfulness and the triangle inequality exhaustively.

    ``tolerance=None`` means exact comparison for rational values and 1e-9
    when floats are involved. ``same`` decides when two items are the same
    point (default ``==``). ``triples`` restricts the triangle check to the
    given (a, c, b) triples, testing d(a, b) <= d(a, c) + d(c, b).
    """
    label = getattr(d, "label", getattr(d, "__name__", "distance"))
    report = AxiomReport(subject=f"metric axioms: {label}")
    same = same or (lambda a, b: a == b)
    items = list(items)
    cache: dict[tuple[int, int], Any] = {}
    index = {id(x): i for i, x in enumerate(items)}

    def value(i: int, j: int):
        key = (i, j)
        if key not in cache:
            try:
                cache[key] = d(items[i], items[j])
            except UndefinedDistance as exc:
                cache[key] = None
                report.add("undefined", (items[i], items[j]), str(exc))
        return cache[key]

    def tol(*vals):
        return default_tolerance(*vals) if tolerance is None else tolerance

    n = len(items)
    for i, j in itertools.product(range(n), repeat=2):
        dij = value(i, j)
        if dij is None:
            continue
        if j == i or same(items[i], items[j]):
            report.tick("faithfulness")
            if dij > tol(dij):
                report.add("faithfulness", (items[i], items[j]), f"d = {dij} for the same point")
        else:
            report.tick("faithfulness")
            if dij < 0:
                report.add("nonnegativity", (items[i], items[j]), f"d = {dij}")
            elif dij <= tol(dij):
                report.add("faithfulness", (items[i], items[j]), f"d = {dij} for distinct points")
        if j > i:
            dji = value(j, i)
            if dji is None:
                continue
            report.tick("symmetry")
            if abs(dij - dji) > tol(dij, dji):
                report.add("symmetry", (items[i], items[j]), f"d(a,b) = {dij}, d(b,a) = {dji}")

    if triples is None:
        triple_iter = ((i, k, j) for i, j, k in itertools.product(range(n), repeat=3))
    else:
        def _idx(x):
            if id(x) in index:
                return index[id(x)]
            return items.index(x)
        triple_iter = ((_idx(a), _idx(c), _idx(b)) for a, c, b in triples)

    for i, k, j in triple_iter:
        dij, dik, dkj = value(i, j), value(i, k), value(k, j)
        if dij is None or dik is None or dkj is None:
            continue
        report.tick("triangle")
        if dij > dik + dkj + tol(dij, dik, dkj):
            report.add(
                "triangle",
                (items[i], items[k], items[j]),
                f"d(a,b) = {dij} > d(a,c) + d(c,b) = {dik} + {dkj}",
            )
    return report
