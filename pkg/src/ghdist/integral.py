"""Integral generalized Hausdorff distances on discrete measure spaces.

Sets are handled in parameterized form: an IndexedSet is a map f from a
finite index space Y into the points of a FiniteMetricSpace, and its
unordered form is the image q(f). Integrals are weighted sums.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Callable, Mapping, Sequence

import numpy as np

from .audit import AxiomReport
from .metric import VECTOR_METRICS, FiniteMetricSpace, MetricError, PointSet, default_tolerance, dist_point_set


@dataclass(frozen=True)
class DiscreteMeasureSpace:
    carrier: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "weights", tuple(self.weights))
        if len(self.carrier) != len(self.weights):
            raise ValueError("one weight per carrier element")
        for w in self.weights:
            if not w > 0:
                raise ValueError(f"weights must be strictly positive, got {w}; drop null points instead")

    @classmethod
    def counting(cls, n_or_carrier) -> "DiscreteMeasureSpace":
        carrier = range(n_or_carrier) if isinstance(n_or_carrier, int) else n_or_carrier
        carrier = tuple(carrier)
        return cls(carrier, (1,) * len(carrier))

    @classmethod
    def uniform_probability(cls, n: int) -> "DiscreteMeasureSpace":
        return cls(tuple(range(n)), (Fraction(1, n),) * n)

    def __len__(self) -> int:
        return len(self.carrier)

    def total(self):
        return sum(self.weights)


@dataclass(frozen=True, eq=False)
class IndexedSet:
    """A parameterized set: f[i] is the point index of the i-th element of Y."""

    space: FiniteMetricSpace
    Y: DiscreteMeasureSpace
    f: tuple

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))
        if len(self.f) != len(self.Y):
            raise ValueError(f"map has {len(self.f)} values for an index space of {len(self.Y)}")
        if not self.f:
            raise ValueError("empty parameterization")
        n = len(self.space)
        for x in self.f:
            if not 0 <= x < n:
                raise MetricError(f"point index {x} out of range")

    def __eq__(self, other):
        if not isinstance(other, IndexedSet):
            return NotImplemented
        return self.space is other.space and self.Y == other.Y and self.f == other.f

    def __hash__(self):
        return hash((id(self.space), self.Y, self.f))

    def __repr__(self):
        return f"IndexedSet{self.f}"


def unorder(f: IndexedSet) -> PointSet:
    """The image of the parameterization (closure is trivial on finite spaces)."""
    return PointSet(f.space, frozenset(f.f))


def _check_pair(f: IndexedSet, g: IndexedSet) -> FiniteMetricSpace:
    if f.space is not g.space:
        raise MetricError("indexed sets live in different spaces")
    if f.Y != g.Y:
        raise MetricError("indexed sets use different index spaces")
    return f.space


def _delta(f: IndexedSet, g: IndexedSet) -> frozenset:
    return frozenset(f.f) ^ frozenset(g.f)


def _root(total, p):
    if p == 1:
        return total
    return float(total) ** (1.0 / p)


def _is_inf(p) -> bool:
    return isinstance(p, str) and p.lower() in ("inf", "infinity") or (isinstance(p, Real) and math.isinf(p))


def _check_p(p):
    if _is_inf(p):
        return math.inf
    if not p >= 1:
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    return p


def lp_integral_distance(f: IndexedSet, g: IndexedSet, nu: DiscreteMeasureSpace, rho=None, p=1):
    """(sum_x |dist(x,q f) - dist(x,q g)|^p rho_fg(x) nu(x))^(1/p), rho_fg = rho on q f u q g.

    For p = inf: max over the whole space of |dist(x,q f) - dist(x,q g)|.
    """
    X = _check_pair(f, g)
    p = _check_p(p)
    if len(nu) != len(X):
        raise ValueError("nu must weight every point of the space")
    A, B = unorder(f), unorder(g)
    if math.isinf(p):
        return max(abs(dist_point_set(x, A) - dist_point_set(x, B)) for x in range(len(X)))
    rho = (1,) * len(X) if rho is None else tuple(rho)
    if any(not r > 0 for r in rho):
        raise ValueError("rho must be strictly positive")
    support = A.members | B.members
    total = sum(abs(dist_point_set(x, A) - dist_point_set(x, B)) ** p * rho[x] * nu.weights[x] for x in sorted(support))
    return _root(total, p)


def lambda_bound(f: IndexedSet, g: IndexedSet, nu: DiscreteMeasureSpace, rho=None, p=1):
    """(integral of rho over q f u q g)^(1/p)."""
    X = _check_pair(f, g)
    p = _check_p(p)
    if math.isinf(p):
        raise ValueError("the bound is defined for finite p only")
    rho = (1,) * len(X) if rho is None else tuple(rho)
    support = frozenset(f.f) | frozenset(g.f)
    return _root(sum(rho[x] * nu.weights[x] for x in sorted(support)), p)


def uniform_distance(f: IndexedSet, g: IndexedSet):
    X = _check_pair(f, g)
    return max(X.dmat[a][b] for a, b in zip(f.f, g.f))


class Kernel:
    """Values c(x, y, y') on X x Y x Y stored as an array."""

    def __init__(self, values):
        arr = np.asarray(values, dtype=object)
        if arr.ndim != 3:
            raise ValueError("kernel must be a 3-d array indexed [x][y][y']")
        if arr.shape[1] != arr.shape[2]:
            raise ValueError("kernel y and y' axes must match")
        for v in arr.flat:
            if v < 0:
                raise ValueError("kernel values must be nonnegative")
        self.values = arr

    def __call__(self, x, y, y2):
        return self.values[x, y, y2]

    @property
    def shape(self):
        return self.values.shape

    def scaled(self, s) -> "Kernel":
        return Kernel(self.values * s)

    def tolist(self):
        return self.values.tolist()


def uniform_kernel(f: IndexedSet, g: IndexedSet) -> Kernel:
    """chi_Delta(x) / mu(Y): supported on the symmetric difference of images."""
    X = _check_pair(f, g)
    delta = _delta(f, g)
    total = f.Y.total()
    w = Fraction(1) / total if isinstance(total, (int, Fraction)) else 1.0 / total
    n, m = len(X), len(f.Y)
    vals = np.zeros((n, m, m), dtype=object)
    for x in delta:
        vals[x, :, :] = w
    vals[vals == 0] = 0
    return Kernel(vals)


def kernel_family_uniform(sets: Sequence[IndexedSet]) -> dict:
    return {(f, g): uniform_kernel(f, g) for f in sets for g in sets}


def _kernel_for(kernels: Mapping, f, g) -> Kernel:
    try:
        k = kernels[(f, g)]
    except KeyError:
        raise KeyError(f"no kernel for the pair ({f}, {g})") from None
    return k if isinstance(k, Kernel) else Kernel(k)


def coupled_integral_distance(f: IndexedSet, g: IndexedSet, nu: DiscreteMeasureSpace, kernels: Mapping, p=1):
    """(sum_{x,y,y'} |d(x,f y) - d(x,g y')|^p c_fg(x,y,y') nu(x) mu(y) mu(y'))^(1/p)."""
    X = _check_pair(f, g)
    p = _check_p(p)
    if math.isinf(p):
        raise ValueError("coupled distance needs finite p")
    c = _kernel_for(kernels, f, g)
    mu = f.Y.weights
    D = X.dmat
    total = 0
    for x in range(len(X)):
        for (y, fy), (y2, gy) in itertools.product(enumerate(f.f), enumerate(g.f)):
            w = c(x, y, y2)
            if w:
                total += abs(D[x][fy] - D[x][gy]) ** p * w * nu.weights[x] * mu[y] * mu[y2]
    return _root(total, p)


def _as_weight(w) -> Callable:
    if w is None:
        return lambda x, y, y2: 0
    if callable(w):
        return w
    if isinstance(w, Real):
        return lambda x, y, y2: w
    arr = np.asarray(w, dtype=object)
    return lambda x, y, y2: arr[x, y, y2]


def weighted_integral_distance(
    f: IndexedSet, g: IndexedSet, nu: DiscreteMeasureSpace, kernels: Mapping, alpha=1, beta=0, p=1
):
    """Coupled distance plus a vector term beta * d(x - f y, x - g y')^p.

    Needs a space built from coordinates; the vector term uses the same
    norm metric that built the space.
    """
    X = _check_pair(f, g)
    if X.coords is None or X.metric not in VECTOR_METRICS:
        raise MetricError("weighted distance needs a space with coordinates and a vector metric")
    p = _check_p(p)
    if math.isinf(p):
        raise ValueError("weighted distance needs finite p")
    a_fn, b_fn = _as_weight(alpha), _as_weight(beta)
    norm = VECTOR_METRICS[X.metric]
    c = _kernel_for(kernels, f, g)
    mu = f.Y.weights
    D, P = X.dmat, X.coords
    total = 0
    for x in range(len(X)):
        for (y, fy), (y2, gy) in itertools.product(enumerate(f.f), enumerate(g.f)):
            w = c(x, y, y2)
            if not w:
                continue
            u = tuple(a - b for a, b in zip(P[x], P[fy]))
            v = tuple(a - b for a, b in zip(P[x], P[gy]))
            term = a_fn(x, y, y2) * abs(D[x][fy] - D[x][gy]) ** p + b_fn(x, y, y2) * norm(u, v) ** p
            total += term * w * nu.weights[x] * mu[y] * mu[y2]
    return _root(total, p)


def extended_distance(f: IndexedSet, g: IndexedSet, nu: DiscreteMeasureSpace, kernels: Mapping, F: Callable, G: Callable):
    """F[ sum G(d(x,f y), d(x,g y'), d(f y, g y')) c_fg nu mu mu ]."""
    X = _check_pair(f, g)
    c = _kernel_for(kernels, f, g)
    mu = f.Y.weights
    D = X.dmat
    total = 0
    for x in range(len(X)):
        for (y, fy), (y2, gy) in itertools.product(enumerate(f.f), enumerate(g.f)):
            w = c(x, y, y2)
            if not w:
                continue
            gv = G(D[x][fy], D[x][gy], D[fy][gy])
            if gv < 0:
                raise ValueError(f"G produced a negative value {gv}")
            total += gv * w * nu.weights[x] * mu[y] * mu[y2]
    out = F(total)
    if out < 0:
        raise ValueError(f"F produced a negative value {out}")
    return out


def check_kernel_conditions(kernels: Mapping, triples: Sequence[tuple], tolerance=None) -> AxiomReport:
    """Pointwise check of the support, positivity, marginal and chaining
    conditions on every pair and triple (f, h, g) listed.

    Conditions: (i) c_fg vanishes off Delta(q f, q g); (ii) c_fg > 0 on a
    nonempty Delta; (iii) sum_y c mu <= 1; (iv) sum_y' c mu <= 1;
    (v) sum_y'' c_fh(x,y,y'') c_hg(x,y'',y') mu(y'') >= c_fg(x,y,y').
    Witnesses are (x, y, y').
    """
    rep = AxiomReport(subject="kernel conditions")

    def tol(*v):
        return default_tolerance(*v) if tolerance is None else tolerance

    pairs = []
    for f, h, g in triples:
        for pr in ((f, h), (h, g), (f, g)):
            if pr not in pairs:
                pairs.append(pr)

    for f, g in pairs:
        X = _check_pair(f, g)
        c = _kernel_for(kernels, f, g)
        n, m = len(X), len(f.Y)
        if c.shape != (n, m, m):
            rep.add("shape", (f, g), f"kernel shape {c.shape}, expected {(n, m, m)}")
            continue
        mu = f.Y.weights
        delta = _delta(f, g)
        for x, y, y2 in itertools.product(range(n), range(m), range(m)):
            v = c(x, y, y2)
            if x not in delta:
                rep.tick("i")
                if v != 0:
                    rep.add("i", (f, g, (x, y, y2)), f"c = {v} outside the symmetric difference")
            else:
                rep.tick("ii")
                if not v > 0:
                    rep.add("ii", (f, g, (x, y, y2)), f"c = {v} on the symmetric difference")
        for x, y2 in itertools.product(range(n), range(m)):
            s = sum(c(x, y, y2) * mu[y] for y in range(m))
            rep.tick("iii")
            if s > 1 + tol(s):
                rep.add("iii", (f, g, (x, "*", y2)), f"integral over y = {s}")
        for x, y in itertools.product(range(n), range(m)):
            s = sum(c(x, y, y2) * mu[y2] for y2 in range(m))
            rep.tick("iv")
            if s > 1 + tol(s):
                rep.add("iv", (f, g, (x, y, "*")), f"integral over y' = {s}")

    for f, h, g in triples:
        X = _check_pair(f, g)
        _check_pair(f, h)
        c_fg, c_fh, c_hg = (_kernel_for(kernels, *pr) for pr in ((f, g), (f, h), (h, g)))
        mu = f.Y.weights
        m = len(f.Y)
        for x, y, y2 in itertools.product(range(len(X)), range(m), range(m)):
            rep.tick("v")
            chain = sum(c_fh(x, y, y3) * c_hg(x, y3, y2) * mu[y3] for y3 in range(m))
            target = c_fg(x, y, y2)
            if chain + tol(chain, target) < target:
                rep.add("v", (f, h, g, (x, y, y2)), f"chained mass {chain} < c_fg = {target}")
    return rep


def surjections(Y_size: int, image: Sequence[int], budget: int):
    """Maps range(Y_size) onto ``image``, in lexicographic order, at most ``budget``."""
    image = sorted(set(image))
    count = 0
    for combo in itertools.product(image, repeat=Y_size):
        if set(combo) == set(image):
            yield combo
            count += 1
            if count >= budget:
                return


def check_welldefined(dist_op: Callable, f: IndexedSet, g: IndexedSet, budget: int = 256, tolerance=None) -> AxiomReport:
    """Re-evaluate ``dist_op`` over other parameterizations of the same images.

    Reports the spread max - min of the values found; a nonzero spread
    means the distance depends on the labelling, not just the sets.
    """
    _check_pair(f, g)
    rep = AxiomReport(subject=f"well-definedness: {getattr(dist_op, '__name__', 'distance')}")
    base = dist_op(f, g)
    values = [(base, f.f, g.f)]
    m = len(f.Y)
    for h1 in surjections(m, f.f, budget):
        for h2 in surjections(m, g.f, budget):
            if len(values) >= budget:
                break
            if h1 == f.f and h2 == g.f:
                continue
            F1 = IndexedSet(f.space, f.Y, h1)
            G1 = IndexedSet(g.space, g.Y, h2)
            values.append((dist_op(F1, G1), h1, h2))
    rep.tick("parameterizations", len(values))
    lo = min(values, key=lambda t: t[0])
    hi = max(values, key=lambda t: t[0])
    spread = hi[0] - lo[0]
    if spread > (default_tolerance(hi[0], lo[0]) if tolerance is None else tolerance):
        rep.add("welldefined", (lo[1:], hi[1:]), f"values range from {lo[0]} to {hi[0]} (spread {spread})")
    rep.notes.append(f"spread = {spread}")
    return rep
