"""r-th powers of k-uniform tight paths and cycles.

An (r,k)-path on an ordered sequence has as edges every k-subset of every
window of k+r-1 consecutive vertices; the cycle version also uses the
windows that wrap around.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import InvalidArgument
from .hypergraph import Hypergraph


@dataclass(frozen=True)
class PowerParams:
    k: int
    r: int

    def __post_init__(self):
        if self.k < 2:
            raise InvalidArgument(f"k must be >= 2, got {self.k}")
        if self.r < 1:
            raise InvalidArgument(f"r must be >= 1, got {self.r}")

    @property
    def h(self) -> int:
        """Length of a path end, k+r-2."""
        return self.k + self.r - 2

    @property
    def window(self) -> int:
        return self.k + self.r - 1

    @property
    def sigma(self) -> Fraction:
        return Fraction(1, comb(self.h, self.k - 1))


def g(params: PowerParams, b: int) -> int:
    """Edge count of the (r,k)-path on b vertices."""
    k, r = params.k, params.r
    if b < k + r - 1:
        raise InvalidArgument(f"path length {b} below k+r-1 = {k + r - 1}")
    return comb(k + r - 1, k) + (b - (k + r - 1)) * comb(k + r - 2, k - 1)


def g_closed_form(params: PowerParams, b: int) -> Fraction:
    # (b - (k-1)(k+r-1)/k) * C(k+r-2, k-1); integral whenever b >= k+r-1
    k, r = params.k, params.r
    return (b - Fraction((k - 1) * (k + r - 1), k)) * comb(k + r - 2, k - 1)


def _check_distinct(seq: Sequence[int]) -> None:
    if len(set(seq)) != len(seq):
        raise InvalidArgument("sequence repeats a vertex")


def _window_edges(params: PowerParams, seq: Sequence[int], windows) -> frozenset:
    out = set()
    for w in windows:
        for e in combinations(sorted(w), params.k):
            out.add(e)
    return frozenset(out)


def power_path_edges(params: PowerParams, seq: Sequence[int]) -> frozenset:
    w = params.window
    if len(seq) < w:
        raise InvalidArgument(f"path needs at least {w} vertices, got {len(seq)}")
    _check_distinct(seq)
    return _window_edges(params, seq, (seq[i:i + w] for i in range(len(seq) - w + 1)))


def power_cycle_edges(params: PowerParams, seq: Sequence[int]) -> frozenset:
    w = params.window
    n = len(seq)
    if n < params.k + params.r:
        raise InvalidArgument(f"cycle needs at least k+r = {params.k + params.r} vertices, got {n}")
    _check_distinct(seq)
    seq = list(seq)
    wrapped = seq + seq[: w - 1]
    return _window_edges(params, seq, (wrapped[i:i + w] for i in range(n)))


def tight_path_edges(k: int, seq: Sequence[int]) -> frozenset:
    """Consecutive k-tuples of seq (the r = 1 case), empty if seq is shorter than k."""
    return frozenset(tuple(sorted(seq[i:i + k])) for i in range(len(seq) - k + 1))


def missing_path_edges(H: Hypergraph, params: PowerParams, seq: Sequence[int]) -> frozenset:
    return frozenset(e for e in power_path_edges(params, seq) if e not in H.edges)


def is_power_path(H: Hypergraph, params: PowerParams, seq: Sequence[int]) -> bool:
    """True iff every edge forced on seq is present in H (spanning not required)."""
    return all(e in H.edges for e in power_path_edges(params, seq))


def is_power_cycle(H: Hypergraph, params: PowerParams, seq: Sequence[int]) -> bool:
    return all(e in H.edges for e in power_cycle_edges(params, seq))


def ends(params: PowerParams, seq: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    h = params.h
    if len(seq) < 2 * h:
        raise InvalidArgument(f"path of {len(seq)} vertices has overlapping ends (needs >= {2 * h})")
    seq = tuple(seq)
    return seq[:h], seq[-h:]
