"""k-uniform hypergraphs on dense integer vertex ids.

Edges are stored as strictly increasing k-tuples in a frozenset, so membership
tests are O(1). A parallel bitmask view (``masks``) and a codegree completion
index (``completions``) are built lazily for the search-heavy callers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable

from .errors import InvalidArgument, ParseError

Edge = tuple[int, ...]


def vertex_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Hypergraph:
    """Immutable k-graph on vertices ``0..n-1``."""

    n: int
    k: int
    edges: frozenset

    def __post_init__(self):
        if self.k < 2:
            raise InvalidArgument(f"uniformity must be >= 2, got {self.k}")
        if self.n < 0:
            raise InvalidArgument("vertex count must be non-negative")
        for e in self.edges:
            if len(e) != self.k:
                raise InvalidArgument(f"edge {e} does not have {self.k} vertices")
            if any(e[i] >= e[i + 1] for i in range(self.k - 1)):
                raise InvalidArgument(f"edge {e} is not strictly increasing")
            if e[0] < 0 or e[-1] >= self.n:
                raise InvalidArgument(f"edge {e} has a vertex outside 0..{self.n - 1}")

    @classmethod
    def from_edges(cls, n: int, k: int, edges: Iterable[Iterable[int]]) -> Hypergraph:
        canon = set()
        for e in edges:
            t = tuple(sorted(e))
            if len(set(t)) != len(t):
                raise InvalidArgument(f"edge {t} repeats a vertex")
            canon.add(t)
        return cls(n, k, frozenset(canon))

    @classmethod
    def empty(cls, n: int, k: int) -> Hypergraph:
        return cls(n, k, frozenset())

    @classmethod
    def complete(cls, n: int, k: int) -> Hypergraph:
        return cls(n, k, frozenset(combinations(range(n), k)))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, vertices) -> bool:
        return tuple(sorted(vertices)) in self.edges

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def masks(self) -> frozenset:
        """Edges as vertex bitmasks."""
        return frozenset(vertex_mask(e) for e in self.edges)

    @cached_property
    def completions(self) -> dict[int, int]:
        """Map from the bitmask of a (k-1)-set S to the bitmask of vertices x with S+x an edge."""
        out: dict[int, int] = {}
        for e in self.edges:
            full = vertex_mask(e)
            for x in e:
                s = full ^ (1 << x)
                out[s] = out.get(s, 0) | (1 << x)
        return out

    def completion_mask(self, subset: Iterable[int]) -> int:
        return self.completions.get(vertex_mask(subset), 0)


def degree_into(H: Hypergraph, S: Iterable[int], T: Iterable[int]) -> int:
    """Number of edges e with S a subset of e and e minus S inside T."""
    S = frozenset(S)
    if not 1 <= len(S) <= H.k - 1:
        raise InvalidArgument(f"|S| must lie in [1, {H.k - 1}], got {len(S)}")
    T = frozenset(T)
    count = 0
    for e in H.edges:
        es = set(e)
        if S <= es and (es - S) <= T:
            count += 1
    return count


def codegree_counts(H: Hypergraph, target: Iterable[int] | None = None) -> Counter:
    """Counter over sorted (k-1)-tuples S of |{x in target : S+x in E(H)}|."""
    tmask = None if target is None else vertex_mask(target)
    counts: Counter = Counter()
    for e in H.edges:
        for i, x in enumerate(e):
            if tmask is None or (tmask >> x) & 1:
                counts[e[:i] + e[i + 1:]] += 1
    return counts


def min_codegree(H: Hypergraph, target: Iterable[int] | None = None) -> int:
    """Minimum over all (k-1)-sets S of deg(S, target); target defaults to V."""
    if H.n < H.k:
        raise InvalidArgument(f"minimum codegree needs n >= k (n={H.n}, k={H.k})")
    counts = codegree_counts(H, target)
    if len(counts) < comb(H.n, H.k - 1):
        return 0
    return min(counts.values())


def link(H: Hypergraph, v: int) -> Hypergraph:
    """(k-1)-graph of sets S with S+v an edge, on the same vertex universe."""
    if not 0 <= v < H.n:
        raise InvalidArgument(f"vertex {v} outside 0..{H.n - 1}")
    if H.k < 3:
        raise InvalidArgument("the link of a 2-graph is not a hypergraph of uniformity >= 2")
    edges = frozenset(tuple(x for x in e if x != v) for e in H.edges if v in e)
    return Hypergraph(H.n, H.k - 1, edges)


def induced(H: Hypergraph, U: Iterable[int]) -> Hypergraph:
    U = frozenset(U)
    return Hypergraph(H.n, H.k, frozenset(e for e in H.edges if U.issuperset(e)))


def union(H1: Hypergraph, H2: Hypergraph, *more: Hypergraph) -> Hypergraph:
    graphs = (H1, H2, *more)
    k = H1.k
    if any(G.k != k for G in graphs):
        raise InvalidArgument("cannot unite hypergraphs of different uniformity")
    n = max(G.n for G in graphs)
    edges = frozenset().union(*(G.edges for G in graphs))
    return Hypergraph(n, k, edges)


def write_text(H: Hypergraph) -> str:
    lines = [f"{H.n} {H.k}"]
    lines.extend(" ".join(map(str, e)) for e in sorted(H.edges))
    return "\n".join(lines) + "\n"


def read_text(text: str) -> Hypergraph:
    header = None
    edges: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            nums = [int(f) for f in fields]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno) from None
        if header is None:
            if len(nums) != 2 or nums[0] < 0 or nums[1] < 2:
                raise ParseError(f"malformed header {line!r}; expected 'n k' with k >= 2", lineno)
            header = (nums[0], nums[1])
            continue
        n, k = header
        if len(nums) != k:
            raise ParseError(f"expected {k} vertex ids, got {len(nums)}", lineno)
        if any(v < 0 or v >= n for v in nums):
            raise ParseError(f"vertex id out of range 0..{n - 1}", lineno)
        if any(nums[i] >= nums[i + 1] for i in range(k - 1)):
            raise ParseError("vertex ids must be strictly ascending", lineno)
        e = tuple(nums)
        if e in edges:
            raise ParseError(f"duplicate edge {e}", lineno)
        edges.add(e)
    if header is None:
        raise ParseError("missing header line", 1)
    return Hypergraph(header[0], header[1], frozenset(edges))


def load(path) -> Hypergraph:
    return read_text(Path(path).read_text())


def dump(H: Hypergraph, path) -> None:
    Path(path).write_text(write_text(H))
