"""Path distances on the hyperspace FS_m(X) of subsets with at most m points.

Vertices are nonempty subsets of a finite ground space, edges join subsets
allowed by a move rule and carry their Hausdorff distance as weight, and
d_m is the shortest-path length. Path families with concatenation and
minimum length form a partial algebra with a postmeasure.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import networkx as nx

from .algebra import PartialAlgebra, Postmeasure, check_postmeasure
from .audit import AxiomReport
from .metric import FiniteMetricSpace, MetricError, PointSet, default_tolerance, hausdorff
from .svmetric import SvMetric

VERTEX_GUARD = 5000
SIMPLE_PATH_GUARD = 10

MOVE_RULES = ("complete", "single_point_swap", "single_point_step")
_RULE_ALIASES = {"swap": "single_point_swap", "step": "single_point_step"}


@dataclass(frozen=True)
class MoveRule:
    kind: str

    def __post_init__(self):
        kind = _RULE_ALIASES.get(self.kind, self.kind)
        if kind not in MOVE_RULES:
            raise ValueError(f"unknown move rule {self.kind!r}; choose from {', '.join(MOVE_RULES)}")
        object.__setattr__(self, "kind", kind)


def metric_neighbors(ground: FiniteMetricSpace) -> set[frozenset]:
    """Pairs {i, j} with no third point k satisfying d(i,k) + d(k,j) = d(i,j)."""
    D = ground.dmat
    n = len(ground)
    out = set()
    for i, j in itertools.combinations(range(n), 2):
        tol = default_tolerance(D[i][j])
        if not any(abs(D[i][k] + D[k][j] - D[i][j]) <= tol for k in range(n) if k not in (i, j)):
            out.add(frozenset((i, j)))
    return out


def _allowed(rule: str, A: frozenset, B: frozenset, nbrs: set) -> bool:
    if rule == "complete":
        return True
    out, inn = A - B, B - A
    if len(out) > 1 or len(inn) > 1:
        return False
    if rule == "single_point_swap":
        return True
    # single_point_step: the moved, added or removed point is a neighbour
    if out and inn:
        return frozenset(out | inn) in nbrs
    (p,) = out or inn
    rest = A & B
    return any(frozenset((p, q)) in nbrs for q in rest)


@dataclass
class HyperGraph:
    ground: FiniteMetricSpace
    m: int
    rule: MoveRule
    vertices: list = field(default_factory=list)
    graph: nx.Graph = field(default_factory=nx.Graph, repr=False)

    def point_set(self, v: frozenset) -> PointSet:
        return PointSet(self.ground, v)

    def vertex(self, spec) -> frozenset:
        """Accept a PointSet, an iterable of point indices, or a vertex."""
        if isinstance(spec, PointSet):
            if spec.space is not self.ground:
                raise MetricError("point set from another space")
            v = spec.members
        else:
            v = frozenset(spec)
        if v not in self.graph:
            raise KeyError(f"{sorted(v)} is not a vertex (size must be 1..{self.m})")
        return v

    def weight(self, u, v):
        return self.graph[u][v]["weight"]

    def path_length(self, path: Sequence) -> object:
        return sum((self.weight(a, b) for a, b in zip(path, path[1:])), 0)


def build_hypergraph(ground: FiniteMetricSpace, m: int, rule, guard: int = VERTEX_GUARD) -> HyperGraph:
    rule = rule if isinstance(rule, MoveRule) else MoveRule(rule)
    n = len(ground)
    if m < 1:
        raise ValueError("m must be at least 1")
    top = min(m, n)
    count = sum(math.comb(n, r) for r in range(1, top + 1))
    if count > guard:
        raise ValueError(f"{count} vertices exceed the guard of {guard}")
    vertices = [frozenset(c) for r in range(1, top + 1) for c in itertools.combinations(range(n), r)]
    G = nx.Graph()
    G.add_nodes_from(vertices)
    nbrs = metric_neighbors(ground) if rule.kind == "single_point_step" else set()
    for A, B in itertools.combinations(vertices, 2):
        if _allowed(rule.kind, A, B, nbrs):
            G.add_edge(A, B, weight=hausdorff(PointSet(ground, A), PointSet(ground, B)))
    return HyperGraph(ground, m, rule, vertices, G)


def dm_distance(G: HyperGraph, A, B):
    """Shortest-path length and one shortest path (vertex list).

    Returns (math.inf, []) when B is unreachable from A.
    """
    a, b = G.vertex(A), G.vertex(B)
    try:
        length, path = nx.single_source_dijkstra(G.graph, a, b, weight="weight")
    except nx.NetworkXNoPath:
        return math.inf, []
    return length, path


def all_dm(G: HyperGraph) -> dict:
    """All-pairs d_m as {(u, v): value}; unreachable pairs are absent."""
    out = {}
    for u, lengths in nx.all_pairs_dijkstra_path_length(G.graph, weight="weight"):
        for v, d in lengths.items():
            out[(u, v)] = d
    return out


# -- grid samples ----------------------------------------------------------


def grid_nodes(k: int, n: int) -> list[tuple[Fraction, ...]]:
    """{0, 1/k, ..., 1}^n in lexicographic order."""
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    axis = [Fraction(i, k) for i in range(k + 1)]
    return list(itertools.product(axis, repeat=n))


@dataclass(frozen=True)
class GridSample:
    k: int
    n: int
    f: dict

    def __post_init__(self):
        missing = [y for y in grid_nodes(self.k, self.n) if y not in self.f]
        if missing:
            raise ValueError(f"grid node {tuple(str(c) for c in missing[0])} is not mapped")

    @classmethod
    def from_function(cls, fn: Callable, k: int, n: int) -> "GridSample":
        return cls(k, n, {y: fn(y) for y in grid_nodes(k, n)})

    @classmethod
    def from_values(cls, values: Sequence[int], k: int, n: int = 1) -> "GridSample":
        nodes = grid_nodes(k, n)
        if len(values) != len(nodes):
            raise ValueError(f"{len(values)} values for {len(nodes)} grid nodes")
        return cls(k, n, dict(zip(nodes, values)))

    @property
    def node_count(self) -> int:
        return (self.k + 1) ** self.n

    def image(self) -> frozenset:
        return frozenset(self.f[y] for y in grid_nodes(self.k, self.n))


def grid_sample(sample: GridSample, G: HyperGraph | None = None, m: int | None = None) -> frozenset:
    """The image A_m = f(Y_m) as a hypergraph vertex."""
    img = sample.image()
    cap = G.m if G is not None else m
    if cap is not None and len(img) > cap:
        raise ValueError(f"image has {len(img)} points, more than m = {cap}")
    if G is not None:
        return G.vertex(img)
    return img


# -- path families ---------------------------------------------------------
#
# A path is a tuple of segments, each segment a tuple of vertices walking
# along edges. Concatenation appends segments, so lengths add exactly even
# when the end of one path is not the start of the next.


def trivial_path(v: frozenset) -> tuple:
    return ((v,),)


def path_from_vertices(vertices: Sequence[frozenset]) -> tuple:
    return (tuple(vertices),)


def segmented_length(G: HyperGraph, path: tuple):
    return sum((G.path_length(seg) for seg in path), 0)


def concat_families(P: frozenset, Q: frozenset) -> frozenset:
    return frozenset(p + q for p in P for q in Q)


def simple_path_family(G: HyperGraph, A: frozenset, B: frozenset, guard: int = SIMPLE_PATH_GUARD) -> frozenset:
    """Every simple A -> B path, or the trivial path when A = B."""
    if len(G.vertices) > guard:
        raise ValueError(f"simple-path enumeration limited to {guard} vertices")
    if A == B:
        return frozenset({trivial_path(A)})
    return frozenset(path_from_vertices(p) for p in nx.all_simple_paths(G.graph, A, B))


def l_min(G: HyperGraph) -> Callable[[frozenset], object]:
    seg_cache: dict = {}

    def seg_len(seg):
        if seg not in seg_cache:
            seg_cache[seg] = G.path_length(seg)
        return seg_cache[seg]

    def mu(P: frozenset):
        if not P:
            return math.inf
        return min(sum((seg_len(seg) for seg in p), 0) for p in P)

    return mu


def path_algebra(G: HyperGraph, families: Iterable[frozenset]) -> PartialAlgebra:
    """Families ordered by minimum length, joined by concatenation.

    Element equality is equal minimum length, so the zero is the class of
    families that contain a trivial path.
    """
    mu = l_min(G)
    families = list(dict.fromkeys(families))
    zero = frozenset({trivial_path(G.vertices[0])})
    valid = set(G.graph.nodes)

    def contains(P) -> bool:
        return bool(P) and all(
            all(v in valid for v in seg) and all(G.graph.has_edge(a, b) for a, b in zip(seg, seg[1:])) for p in P for seg in p
        )

    return PartialAlgebra(
        elements=[zero] + [P for P in families if P != zero],
        leq=lambda P, Q: mu(P) <= mu(Q),
        join=concat_families,
        zero=zero,
        eq=lambda P, Q: mu(P) == mu(Q),
        contains=contains,
        name="path families",
    )


def path_sv_metric(G: HyperGraph, carrier: Sequence[frozenset] | None = None) -> tuple[SvMetric, Postmeasure]:
    """The multipath-valued metric (all simple paths) and l_min on it."""
    carrier = list(G.vertices if carrier is None else carrier)
    table = {(a, b): simple_path_family(G, a, b) for a in carrier for b in carrier}
    alg = path_algebra(G, table.values())
    d = SvMetric(carrier, alg, lambda a, b: table[(a, b)], name=f"paths[{G.rule.kind}]")
    return d, Postmeasure(alg, l_min(G), name="l_min")


def check_pathlength_postmeasure(G: HyperGraph, samples: Sequence[tuple]) -> AxiomReport:
    """Faithfulness, monotonicity and exact additivity of l_min on the path
    families of the sampled vertex pairs."""
    rep = AxiomReport(subject=f"l_min on path families [{G.rule.kind}]")
    mu = l_min(G)
    fams = []
    for a, b in samples:
        a, b = G.vertex(a), G.vertex(b)
        P = simple_path_family(G, a, b)
        if not P:
            rep.notes.append(f"no path between {sorted(a)} and {sorted(b)}")
            continue
        fams.append(((a, b), P))
    for (ab, P) in fams:
        rep.tick("faithfulness")
        has_trivial = any(all(len(seg) == 1 for seg in p) for p in P)
        if (mu(P) == 0) != has_trivial:
            rep.add("faithfulness", (ab,), f"l_min = {mu(P)}")
    for (ab, P), (cd, Q) in itertools.product(fams, repeat=2):
        rep.tick("additivity")
        joined = mu(concat_families(P, Q))
        expected = mu(P) + mu(Q)
        if abs(joined - expected) > default_tolerance(joined, expected):
            rep.add("additivity", (ab, cd), f"l_min(join) = {joined} vs {expected}")
        rep.tick("subadditivity")
        if joined > expected + default_tolerance(joined, expected):
            rep.add("subadditivity", (ab, cd), f"{joined} > {expected}")
    if fams:
        alg = path_algebra(G, [P for _, P in fams])
        rep.extend(check_postmeasure(Postmeasure(alg, mu, name="l_min")), prefix="algebra.")
    return rep


def refine_series(ground: FiniteMetricSpace, f: Callable, g: Callable, ks: Sequence[int], n: int = 1, rule="complete"):
    """d_m between grid samples of f and g for each k, with m = the node count."""
    out = []
    for k in ks:
        A = GridSample.from_function(f, k, n)
        B = GridSample.from_function(g, k, n)
        m = max(len(A.image()), len(B.image()))
        G = build_hypergraph(ground, m, rule)
        d, _ = dm_distance(G, A.image(), B.image())
        out.append((k, A.node_count, d, hausdorff(PointSet(ground, A.image()), PointSet(ground, B.image()))))
    return out
