"""Rooted gadgets used by the absorbing and connecting steps.

Gadget vertices are abstract positions ``0..size-1`` laid out in the order the
construction prescribes; ``labels`` keeps the human-readable names. Both gadgets
list only the edges that must come from the random side, the remaining edges of
the surrounding power path being supplied by the host.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .errors import InvalidArgument
from .hypergraph import Hypergraph, write_text
from .powers import PowerParams, power_path_edges, tight_path_edges


@dataclass(frozen=True)
class RootedGadget:
    graph: Hypergraph
    order: tuple[int, ...]
    roots: tuple[int, ...]
    params: PowerParams
    labels: tuple[str, ...] = ()
    name: str = "gadget"

    def __post_init__(self):
        root_set = set(self.roots)
        if any(set(e) <= root_set for e in self.graph.edges):
            raise InvalidArgument("root set spans an edge")
        if not root_set <= set(self.order):
            raise InvalidArgument("roots must be gadget vertices")
        positions = [self.order.index(w) for w in self.roots]
        if positions != sorted(positions):
            raise InvalidArgument("roots must appear in gadget order")

    @property
    def size(self) -> int:
        return len(self.order)

    @property
    def interior(self) -> tuple[int, ...]:
        root_set = set(self.roots)
        return tuple(x for x in self.order if x not in root_set)

    def without_roots(self) -> RootedGadget:
        """Same graph with W empty."""
        return RootedGadget(self.graph, self.order, (), self.params, self.labels, self.name)

    def delete_roots(self) -> RootedGadget:
        """F minus W: root vertices dropped (left isolated), W empty."""
        root_set = set(self.roots)
        edges = frozenset(e for e in self.graph.edges if not root_set & set(e))
        g = Hypergraph(self.graph.n, self.graph.k, edges)
        return RootedGadget(g, self.order, (), self.params, self.labels, self.name + "-minus-roots")


@dataclass(frozen=True)
class AbsorberWitness:
    v: int
    tuple: tuple[int, ...]

    def __post_init__(self):
        if self.v in self.tuple or len(set(self.tuple)) != len(self.tuple):
            raise InvalidArgument("absorber tuple must be distinct and avoid v")

    def inserted(self) -> tuple[int, ...]:
        half = len(self.tuple) // 2
        return self.tuple[:half] + (self.v,) + self.tuple[half:]


def link_path_pattern(params: PowerParams, tuple_: tuple[int, ...]) -> list[tuple[int, ...]]:
    """The (k-1)-sets {v_j..v_{j+k-2}}, j = 1..k+2r-2, that the host link must supply."""
    k = params.k
    return [tuple_[j:j + k - 1] for j in range(len(tuple_) - k + 2)]


def absorber_gadget(params: PowerParams) -> RootedGadget:
    k, r, h = params.k, params.r, params.h
    if k < 3 or r < 2:
        raise InvalidArgument("absorber gadget is defined for k >= 3 and r >= 2")
    size = 2 * h + 1
    v = h
    outer = tuple(range(h)) + tuple(range(h + 1, size))
    e1 = power_path_edges(params, outer)
    full = power_path_edges(params, tuple(range(size)))
    removed = {tuple(sorted((v,) + s)) for s in link_path_pattern(params, outer)}
    e2 = {e for e in full if v in e and e not in removed}
    graph = Hypergraph(size, k, frozenset(e1) | frozenset(e2))
    labels = tuple(f"v{i + 1}" for i in range(h)) + ("v",) + tuple(f"v{i + 1}" for i in range(h, 2 * h))
    return RootedGadget(graph, tuple(range(size)), (v,), params, labels, "absorber")


def absorber_root_degree(params: PowerParams) -> int:
    """Closed form k*C(h,k-1) - (k+2r-2) for the number of gadget edges at the root."""
    k, r = params.k, params.r
    return k * comb(params.h, k - 1) - (k + 2 * r - 2)


def connector_gadget(params: PowerParams, b: int) -> RootedGadget:
    k, h = params.k, params.h
    if b % 2:
        raise InvalidArgument(f"connector interior length must be even, got {b}")
    if b < 2 * k:
        raise InvalidArgument(f"connector interior length must be >= 2k = {2 * k}, got {b}")
    size = 2 * h + b
    order = tuple(range(size))
    full = power_path_edges(params, order)
    w_side = order[: h + b // 2]
    u_side = order[h + b // 2:]
    removed = set(tight_path_edges(k, w_side)) | set(tight_path_edges(k, u_side))
    removed |= set(combinations(order[:h], k)) | set(combinations(order[h + b:], k))
    graph = Hypergraph(size, k, frozenset(e for e in full if e not in removed))
    roots = order[:h] + order[h + b:]
    labels = (
        tuple(f"w{i + 1}" for i in range(h))
        + tuple(f"v{i + 1}" for i in range(b))
        + tuple(f"u{h - i}" for i in range(h))
    )
    return RootedGadget(graph, order, roots, params, labels, "connector")


def path_gadget(params: PowerParams, b: int) -> RootedGadget:
    """Unrooted (r,k)-path on b positions."""
    order = tuple(range(b))
    graph = Hypergraph(b, params.k, power_path_edges(params, order))
    return RootedGadget(graph, order, (), params, tuple(f"v{i + 1}" for i in range(b)), "path")


def absorber_forced_edges(params: PowerParams, w: AbsorberWitness) -> frozenset:
    return power_path_edges(params, w.tuple) | power_path_edges(params, w.inserted())


def missing_edges_for_absorber(H: Hypergraph, params: PowerParams, w: AbsorberWitness) -> frozenset:
    return frozenset(e for e in absorber_forced_edges(params, w) if e not in H.edges)


def is_absorber(H: Hypergraph, params: PowerParams, w: AbsorberWitness) -> bool:
    if len(w.tuple) != 2 * params.h:
        return False
    return not missing_edges_for_absorber(H, params, w)


def gadget_text(gadget: RootedGadget) -> str:
    return write_text(gadget.graph) + "roots: " + " ".join(map(str, gadget.roots)) + "\n"
