"""Seeded random fixtures: small metric spaces and indexed-set pairs."""
from __future__ import annotations

import itertools
import random

from .integral import DiscreteMeasureSpace, IndexedSet
from .metric import FiniteMetricSpace

DEFAULT_SEED = 20240611


def random_integer_space(rng: random.Random, n: int = 5, k: int = 5) -> FiniteMetricSpace:
    """Integer distances drawn from [k, 2k]; any such matrix is a metric."""
    D = [[0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        D[i][j] = D[j][i] = rng.randint(k, 2 * k)
    return FiniteMetricSpace(list(range(n)), D)


def random_planar_space(rng: random.Random, n: int = 5) -> FiniteMetricSpace:
    """Uniform points in the unit square with the euclidean metric."""
    return FiniteMetricSpace.from_coords([(rng.random(), rng.random()) for _ in range(n)], "euclidean")


def random_line_space(rng: random.Random, n: int = 5, span: int = 20) -> FiniteMetricSpace:
    return FiniteMetricSpace.line(sorted(rng.sample(range(span), n)))


def mixed_corpus(seed: int = DEFAULT_SEED, count: int = 20, n: int = 5) -> list[FiniteMetricSpace]:
    """Half integer spaces, half planar float spaces, from one generator."""
    rng = random.Random(seed)
    half = count // 2
    spaces = [random_integer_space(rng, n, k=rng.randint(2, 9)) for _ in range(half)]
    spaces += [random_planar_space(rng, n) for _ in range(count - half)]
    return spaces


def random_indexed_pair(rng: random.Random, space: FiniteMetricSpace, y_size: int, weighted: bool = False):
    """Two random maps from a y_size index space into ``space``."""
    n = len(space)
    if weighted:
        Y = DiscreteMeasureSpace(tuple(range(y_size)), tuple(rng.randint(1, 4) for _ in range(y_size)))
    else:
        Y = DiscreteMeasureSpace.counting(y_size)
    f = IndexedSet(space, Y, tuple(rng.randrange(n) for _ in range(y_size)))
    g = IndexedSet(space, Y, tuple(rng.randrange(n) for _ in range(y_size)))
    return f, g


def random_measure(rng: random.Random, n: int) -> DiscreteMeasureSpace:
    return DiscreteMeasureSpace(tuple(range(n)), tuple(rng.randint(1, 5) for _ in range(n)))
