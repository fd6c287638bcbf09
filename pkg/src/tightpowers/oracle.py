"""Exact search for spanning (r,k)-cycles and (r,k)-paths on small vertex sets.

The search grows an ordering one vertex at a time.  A vertex v may follow the
last h = k+r-2 vertices w only if every k-subset of w+v containing v is an
edge; with completion bitmasks that is an AND over the (k-1)-subsets of w.
Dead states (visited set, ordered window) are memoised.  For cycles the first
h vertices are fixed per sub-search, since the wrap-around windows depend on
them; vertex 0 always comes first, and among the two directions of a cycle
only the one whose second vertex is smaller than its last is reported.
"""

from __future__ import annotations

import sys
from itertools import combinations, permutations
from typing import Iterable

from .errors import InvalidArgument, TooLarge
from .hypergraph import Hypergraph, iter_bits, vertex_mask
from .powers import PowerParams, is_power_cycle, is_power_path

DEFAULT_CAP = 14


class _Extender:
    def __init__(self, H: Hypergraph, params: PowerParams):
        self.k = params.k
        self.h = params.h
        self.comp = H.completions
        self.full = (1 << H.n) - 1
        self._cache: dict[int, int] = {}

    def allowed(self, window: tuple[int, ...]) -> int:
        """Vertices that may follow ``window`` (the last <= h vertices)."""
        if len(window) < self.k - 1:
            return self.full
        wm = vertex_mask(window)
        got = self._cache.get(wm)
        if got is None:
            got = self.full
            comp = self.comp
            for sub in combinations(window, self.k - 1):
                got &= comp.get(vertex_mask(sub), 0)
                if not got:
                    break
            self._cache[wm] = got
        return got


def _check_size(H: Hypergraph, size: int, cap: int) -> None:
    if size > cap:
        raise TooLarge(f"{size} vertices exceed the oracle cap {cap}")


def find_power_ham_cycle(H: Hypergraph, params: PowerParams, cap: int = DEFAULT_CAP):
    """A cyclic ordering of all vertices certifying an (r,k)-cycle in H, or None."""
    n, h = H.n, params.h
    if H.k != params.k:
        raise InvalidArgument("host uniformity does not match params.k")
    if n < params.k + params.r:
        raise InvalidArgument(f"cycles need n >= k+r = {params.k + params.r}")
    _check_size(H, n, cap)
    ext = _Extender(H, params)
    full = (1 << n) - 1

    # ordered starts of length h beginning at vertex 0
    starts = []

    def grow_start(seq, mask):
        if len(seq) == h:
            starts.append(tuple(seq))
            return
        for v in iter_bits(ext.allowed(tuple(seq)) & ~mask):
            seq.append(v)
            grow_start(seq, mask | (1 << v))
            seq.pop()

    grow_start([0], 1)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * n + 100))
    try:
        for start in starts:
            found = _cycle_from(H, params, ext, start, full)
            if found is not None:
                assert is_power_cycle(H, params, found)
                return found
    finally:
        sys.setrecursionlimit(limit)
    return None


def _cycle_from(H, params, ext, start, full):
    h = params.h
    dead: set = set()
    seq = list(start)
    second = start[1] if len(start) > 1 else None

    def closes() -> bool:
        if second is not None and seq[1] > seq[-1]:
            return False
        return is_power_cycle(H, params, seq)

    def dfs(mask: int) -> bool:
        if mask == full:
            return closes()
        window = tuple(seq[-h:])
        key = (mask, window)
        if key in dead:
            return False
        for v in iter_bits(ext.allowed(window) & ~mask):
            seq.append(v)
            if dfs(mask | (1 << v)):
                return True
            seq.pop()
        dead.add(key)
        return False

    if dfs(vertex_mask(start)):
        return tuple(seq)
    return None


def find_power_path_spanning(H: Hypergraph, params: PowerParams, U: Iterable[int], cap: int = DEFAULT_CAP):
    """An ordering of U certifying an (r,k)-path in H, or None."""
    U = sorted(set(U))
    _check_size(H, len(U), cap)
    if len(U) < params.window:
        raise InvalidArgument(f"a power path needs at least {params.window} vertices")
    ext = _Extender(H, params)
    target = vertex_mask(U)
    h = params.h
    dead: set = set()
    seq: list[int] = []

    def dfs(mask: int) -> bool:
        if mask == target:
            return True
        window = tuple(seq[-h:])
        key = (mask, window)
        if key in dead:
            return False
        for v in iter_bits(ext.allowed(window) & target & ~mask):
            seq.append(v)
            if dfs(mask | (1 << v)):
                return True
            seq.pop()
        dead.add(key)
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * len(U) + 100))
    try:
        if dfs(0):
            assert is_power_path(H, params, seq)
            return tuple(seq)
    finally:
        sys.setrecursionlimit(limit)
    return None


def contains_power_path_spanning(H: Hypergraph, params: PowerParams, U: Iterable[int], cap: int = DEFAULT_CAP) -> bool:
    return find_power_path_spanning(H, params, U, cap) is not None


def brute_force_power_cycle(H: Hypergraph, params: PowerParams):
    """Reference search over all orderings with vertex 0 first."""
    for rest in permutations(range(1, H.n)):
        seq = (0,) + rest
        if is_power_cycle(H, params, seq):
            return seq
    return None


def brute_force_power_path(H: Hypergraph, params: PowerParams, U: Iterable[int]):
    for seq in permutations(sorted(U)):
        if seq[0] > seq[-1]:
            continue
        if is_power_path(H, params, seq):
            return seq
    return None


def independent_set_obstruction(H: Hypergraph, params: PowerParams, B) -> bool:
    """True when B certifies that H has no spanning (r,k)-cycle, at any n.

    If no edge of H lies inside B, each cyclic window of k+r-1 vertices holds
    at most k-1 vertices of B; summing over the n windows gives
    (k+r-1)|B| <= (k-1)n, so a larger B rules the cycle out.
    """
    B = frozenset(B)
    if any(B.issuperset(e) for e in H.edges):
        return False
    return params.window * len(B) > (params.k - 1) * H.n
