"""Seeded random hypergraphs, multi-round exposure, reserve sets and test hosts.

Randomness is counter-based: the coin for a k-set is a SplitMix64 hash of the
run key and the k-set's colex rank, so a sample depends only on (seed, n, k, p)
and not on enumeration order or platform.  Derived seeds follow the rule
``derive_seed(seed, *labels)``: fold each label into the seed with
``splitmix64(state ^ splitmix64(label_word))``, where an integer label is its own
word and a string label is the first 8 bytes of its BLAKE2b digest.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import InvalidArgument
from .hypergraph import Hypergraph, codegree_counts, load

MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _splitmix_array(x: np.ndarray) -> np.ndarray:
    z = x + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _label_word(label) -> int:
    if isinstance(label, (int, np.integer)):
        return int(label) & MASK64
    digest = hashlib.blake2b(str(label).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_seed(seed: int, *labels) -> int:
    state = int(seed) & MASK64
    for label in labels:
        state = splitmix64(state ^ splitmix64(_label_word(label)))
    return state


def uniforms(seed: int, counters: np.ndarray) -> np.ndarray:
    """One U[0,1) draw per counter, keyed by seed."""
    key = np.uint64(splitmix64(int(seed) & MASK64))
    bits = _splitmix_array(_splitmix_array(counters.astype(np.uint64)) ^ key)
    return (bits >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


@lru_cache(maxsize=16)
def _ksets(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """All k-subsets of range(n) (rows ascending) and their colex ranks."""
    if n < k:
        return np.zeros((0, k), dtype=np.int64), np.zeros(0, dtype=np.uint64)
    arr = np.fromiter((v for c in combinations(range(n), k) for v in c), dtype=np.int64, count=comb(n, k) * k)
    arr = arr.reshape(-1, k)
    ranks = np.zeros(len(arr), dtype=np.uint64)
    for i in range(k):
        table = np.array([comb(v, i + 1) for v in range(n)], dtype=np.uint64)
        ranks += table[arr[:, i]]
    arr.setflags(write=False)
    ranks.setflags(write=False)
    return arr, ranks


def sample_gnp(n: int, k: int, p: float, seed: int) -> Hypergraph:
    """Binomial random k-graph: each k-set kept independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise InvalidArgument(f"edge probability must lie in [0, 1], got {p}")
    arr, ranks = _ksets(n, k)
    keep = uniforms(seed, ranks) < p
    edges = frozenset(map(tuple, arr[keep].tolist()))
    return Hypergraph(n, k, edges)


@dataclass(frozen=True)
class RoundSplit:
    p: float
    t: int
    p_round: float
    saturated: bool = False


def split_rounds(p: float, t: int) -> RoundSplit:
    """Per-round probability p' with (1-p')^t = 1-p."""
    if t < 1:
        raise InvalidArgument("round count must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise InvalidArgument(f"edge probability must lie in [0, 1], got {p}")
    if p == 1.0:
        return RoundSplit(p, t, 1.0, saturated=t > 1)
    if t == 1:
        return RoundSplit(p, 1, p)
    # -expm1(log1p(-p)/t) keeps precision for small p
    return RoundSplit(p, t, float(-np.expm1(np.log1p(-p) / t)))


def sample_rounds(n: int, k: int, split: RoundSplit, seed: int) -> list[Hypergraph]:
    return [sample_gnp(n, k, split.p_round, derive_seed(seed, "round", i)) for i in range(split.t)]


def sample_reserve(n: int, eta: float, seed: int) -> frozenset:
    """Each vertex joins independently with probability eta."""
    if not 0.0 <= eta <= 1.0:
        raise InvalidArgument(f"reserve probability must lie in [0, 1], got {eta}")
    u = uniforms(derive_seed(seed, "reserve"), np.arange(n, dtype=np.uint64))
    return frozenset(np.flatnonzero(u < eta).tolist())


def reserve_codegree(H: Hypergraph, R) -> int:
    """min over (k-1)-sets S of deg_H(S, R)."""
    counts = codegree_counts(H, R)
    if len(counts) < comb(H.n, H.k - 1):
        return 0
    return min(counts.values())


def check_reserve(H: Hypergraph, R, threshold: float, eta: float | None = None) -> bool:
    """|R| <= 2*eta*n (when eta is given) and every (k-1)-set has >= threshold completions in R."""
    R = frozenset(R)
    if not R:
        return False
    if eta is not None and len(R) > 2 * eta * H.n:
        return False
    return reserve_codegree(H, R) >= threshold


def bernoulli_host(n: int, k: int, q: float, seed: int) -> Hypergraph:
    return sample_gnp(n, k, q, seed)


def intersecting_host(n: int, k: int, a: int) -> Hypergraph:
    """All k-sets meeting A = {0, .., a-1}; (k-1)-sets outside A have codegree exactly a."""
    if not 0 <= a <= n:
        raise InvalidArgument(f"need 0 <= a <= n, got a={a}, n={n}")
    return Hypergraph(n, k, frozenset(e for e in combinations(range(n), k) if e[0] < a))


def parse_host(spec: str, n: int, k: int, seed: int) -> Hypergraph:
    """Build a host from ``bernoulli:q``, ``intersecting:a`` (a vertex count, or a fraction of n when written with a point), ``empty``, ``complete`` or ``file:PATH``."""
    kind, _, arg = spec.partition(":")
    if kind == "bernoulli":
        return bernoulli_host(n, k, float(arg), derive_seed(seed, "host"))
    if kind == "intersecting":
        a = int(arg) if arg.isdigit() else round(float(arg) * n)
        return intersecting_host(n, k, a)
    if kind == "empty":
        return Hypergraph.empty(n, k)
    if kind == "complete":
        return Hypergraph.complete(n, k)
    if kind == "file":
        return load(arg)
    raise InvalidArgument(f"unknown host spec {spec!r}")
