"""Minimum-weight matching of largest cardinality on small complete graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cache

EXACT_THRESHOLD = 20


@dataclass(frozen=True)
class MatchingResult:
    pairs: tuple[tuple[int, int], ...]
    total_weight: object
    is_exact: bool


def _check(weights) -> int:
    m = len(weights)
    if m < 2:
        raise ValueError("matching needs at least two nodes")
    for i in range(m):
        if len(weights[i]) != m:
            raise ValueError("weight matrix must be square")
        for j in range(i + 1, m):
            if weights[i][j] != weights[j][i]:
                raise ValueError(f"weight matrix not symmetric at ({i}, {j})")
    return m


def min_weight_matching(weights, exact_threshold: int = EXACT_THRESHOLD) -> MatchingResult:
    """Largest-cardinality matching, minimum total weight among those.

    ``math.inf`` marks a missing pair.  Up to ``exact_threshold`` nodes a
    subset DP gives the exact answer; beyond it the cheapest remaining
    pair is taken greedily and ``is_exact`` is False.
    """
    m = _check(weights)
    if m <= exact_threshold:
        return _exact(weights, m)
    return _greedy(weights, m)


def _exact(weights, m: int) -> MatchingResult:
    full = (1 << m) - 1

    @cache
    def best(mask: int):
        # value is (-pairs, weight, pairs) so min() prefers cardinality then weight
        if mask == full:
            return (0, 0, ())
        i = (~mask & (mask + 1)).bit_length() - 1
        rest = mask | (1 << i)
        options = [best(rest)]
        for j in range(i + 1, m):
            if mask >> j & 1 or weights[i][j] == math.inf:
                continue
            sub = best(rest | (1 << j))
            options.append((sub[0] - 1, sub[1] + weights[i][j], ((i, j),) + sub[2]))
        return min(options)

    _, total, pairs = best(0)
    best.cache_clear()
    return MatchingResult(pairs, total, True)


def _greedy(weights, m: int) -> MatchingResult:
    order = sorted(
        (weights[i][j], i, j) for i in range(m) for j in range(i + 1, m) if weights[i][j] != math.inf
    )
    used = set()
    pairs = []
    total = 0
    for w, i, j in order:
        if i in used or j in used:
            continue
        used.update((i, j))
        pairs.append((i, j))
        total += w
    return MatchingResult(tuple(sorted(pairs)), total, False)
