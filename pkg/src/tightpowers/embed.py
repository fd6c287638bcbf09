"""Tight-path extension, absorber candidate search and phased greedy embedding.

Random-side gadget edges are tested against ``host | round``: an edge the host
already has costs nothing, any other gadget edge must come from the round used
in that phase and is recorded as consumed from it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import ceil, factorial, log
from typing import Sequence

from .errors import EmbeddingIncomplete, ExtensionFailed, InvalidArgument
from .gadgets import RootedGadget
from .hypergraph import Hypergraph, iter_bits, vertex_mask
from .powers import PowerParams


def extension_mask(G: Hypergraph, params: PowerParams, seq: Sequence[int]) -> int:
    """Bitmask of vertices u such that seq + [u] keeps its last window complete in G.

    Only the k-sets through u are checked; vertices of seq are not excluded.
    """
    k = params.k
    tail = seq[-params.h:] if params.h else ()
    if len(tail) < k - 1:
        return (1 << G.n) - 1
    mask = (1 << G.n) - 1
    for sub in combinations(tail, k - 1):
        mask &= G.completion_mask(sub)
        if not mask:
            break
    return mask


# --- tight-path extension ---------------------------------------------------


def extend_tight_path(H: Hypergraph, params: PowerParams, end: Sequence[int], target, steps: int,
                      avoid, rng: random.Random, working: Hypergraph | None = None) -> tuple[int, ...]:
    """Grow ``end`` by ``steps`` vertices from ``target``, keeping a tight path in H.

    Each new vertex is drawn uniformly among the common completions in H of
    the current (k-1)-suffix that lie in target and outside avoid.  With
    ``working`` the draw is further restricted to vertices keeping the grown
    sequence an (r,k)-path in ``working``.  ``avoid`` is a set and is updated
    in place.
    """
    k = params.k
    if len(end) < k - 1:
        raise InvalidArgument(f"end must have at least k-1 = {k - 1} vertices")
    seq = list(end)
    tmask = vertex_mask(target)
    new = []
    for step in range(steps):
        cand = H.completion_mask(seq[-(k - 1):]) & tmask & ~vertex_mask(avoid) & ~vertex_mask(seq)
        if working is not None:
            cand &= extension_mask(working, params, seq)
        choices = list(iter_bits(cand))
        if not choices:
            raise ExtensionFailed(f"dead end after {step} of {steps} steps", progress=step)
        v = rng.choice(choices)
        seq.append(v)
        new.append(v)
        avoid.add(v)
    return tuple(new)


# --- absorber candidates ----------------------------------------------------


@dataclass
class AbsorberCandidates:
    tuples: list
    attempts: int
    complete: bool


def sample_absorber_candidates(H: Hypergraph, params: PowerParams, v: int, Y, want: int, budget: int,
                               rng: random.Random, working: Hypergraph | None = None) -> AbsorberCandidates:
    """Random walks for ordered 2h-tuples in Y whose consecutive (k-1)-sets lie in the link of v.

    A step from the current (k-2)-suffix s picks the next vertex u with
    probability proportional to one plus the number of continuations of
    (s[1:], u) in the link, which steers walks away from dead ends.  With
    ``working``, every walk must also keep both the tuple and the tuple with v
    inserted in the middle (r,k)-paths in ``working``.
    """
    k, h = params.k, params.h
    Y = frozenset(Y)
    if v in Y:
        raise InvalidArgument("Y must not contain v")
    size = 2 * h
    found: list = []
    seen: set = set()
    if len(Y) < size:
        return AbsorberCandidates(found, 0, want <= 0)
    ymask = vertex_mask(Y)

    def link_next(tail) -> int:
        return H.completion_mask((v, *tail)) & ymask

    attempts = 0
    while len(found) < want and attempts < budget:
        attempts += 1
        seq: list[int] = []
        used = 0
        ok = True
        while len(seq) < size:
            if len(seq) < k - 2:
                cand = ymask & ~used
            else:
                cand = link_next(seq[len(seq) - (k - 2):]) & ~used
            if working is not None:
                cand &= _absorber_mask(working, params, v, seq)
            choices = list(iter_bits(cand))
            if working is not None and len(seq) + 1 == h:
                # v must also fit right after the first half
                choices = [u for u in choices if extension_mask(working, params, seq + [u]) >> v & 1]
            if not choices:
                ok = False
                break
            if len(seq) >= k - 2 and len(seq) + 1 < size:
                weights = []
                for u in choices:
                    tail = (seq + [u])[len(seq) + 1 - (k - 2):] if k > 2 else []
                    weights.append(1 + bin(link_next(tail) & ~(used | (1 << u))).count("1"))
                u = rng.choices(choices, weights)[0]
            else:
                u = rng.choice(choices)
            seq.append(u)
            used |= 1 << u
        if ok:
            t = tuple(seq)
            if t not in seen:
                seen.add(t)
                found.append(t)
    return AbsorberCandidates(found, attempts, len(found) >= want)


def _absorber_mask(G: Hypergraph, params: PowerParams, v: int, prefix: list[int]) -> int:
    """Next vertices keeping both the tuple and the tuple with v inserted (r,k)-paths in G."""
    h = params.h
    mask = extension_mask(G, params, prefix)
    if len(prefix) >= h:
        mask &= extension_mask(G, params, prefix[:h] + [v] + prefix[h:])
    return mask


# --- phased greedy embedding ------------------------------------------------


@dataclass(frozen=True)
class CandidateFamily:
    roots: tuple[int, ...]
    tuples: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(self.roots))
        object.__setattr__(self, "tuples", tuple(tuple(t) for t in self.tuples))
        rs = set(self.roots)
        for t in self.tuples:
            if rs & set(t):
                raise InvalidArgument("candidate tuple meets its own roots")
            if len(set(t)) != len(t):
                raise InvalidArgument("candidate tuple repeats a vertex")


@dataclass(frozen=True)
class PhaseSchedule:
    """``budgets[j]`` candidates are scanned per task in phase j, against round ``rounds[j]``."""

    ell: int
    budgets: tuple[int, ...]
    rounds: tuple[int, ...]

    def __post_init__(self):
        if len(self.budgets) != len(self.rounds) or not self.budgets:
            raise InvalidArgument("one budget and one round index per phase")
        if any(b <= 0 for b in self.budgets):
            raise InvalidArgument("phase budgets must be positive")
        if any(a < b for a, b in zip(self.budgets, self.budgets[1:])):
            raise InvalidArgument("phase budgets must be non-increasing")
        if any(i < 0 for i in self.rounds):
            raise InvalidArgument("round indices must be >= 0")

    @property
    def phases(self) -> int:
        return len(self.budgets)

    def check_rounds(self, available: int) -> None:
        if max(self.rounds) >= available:
            raise InvalidArgument(f"schedule uses round {max(self.rounds)} but only {available} available")

    @classmethod
    def desk(cls, rounds: int, cap: int = 200) -> PhaseSchedule:
        """Scan everything every phase, one fresh round per phase."""
        return cls(rounds - 1, (cap,) * rounds, tuple(range(rounds)))

    @classmethod
    def asymptotic(cls, n: int, ell: int, rounds: int | None = None) -> PhaseSchedule:
        """Budgets ceil(n^(1-j/ell) log n) for j = 0..ell, one round per phase (cycled when fewer rounds exist)."""
        rounds = ell + 1 if rounds is None else rounds
        budgets = tuple(max(1, ceil(n ** (1 - j / ell) * log(max(n, 2)))) for j in range(ell + 1))
        return cls(ell, budgets, tuple(j % rounds for j in range(ell + 1)))


def phase_constant_diagnostic(b: int, ell: int, f: int, beta: float, c: float) -> dict:
    """Both sides of 2^(b+9) (ell+1)^f b! <= c beta^2; reported, never enforced."""
    lhs = 2 ** (b + 9) * (ell + 1) ** f * factorial(b)
    rhs = c * beta ** 2
    return {"lhs": lhs, "rhs": rhs, "holds": lhs <= rhs}


@dataclass
class EmbeddingResult:
    phase: list                       # 1-based phase per task, None if not embedded
    images: list                      # full image in gadget order, None if not embedded
    consumed: dict = field(default_factory=dict)   # round index -> set of edges
    remaining: list = field(default_factory=list)  # unembedded count after each phase

    @property
    def survivors(self) -> list[int]:
        return [i for i, ph in enumerate(self.phase) if ph is None]

    @property
    def complete(self) -> bool:
        return not self.survivors


def gadget_image(gadget: RootedGadget, roots: Sequence[int], interior: Sequence[int]) -> tuple[int, ...]:
    root_set = set(gadget.roots)
    ri, ii = iter(roots), iter(interior)
    return tuple(next(ri) if x in root_set else next(ii) for x in gadget.order)


def image_edges(gadget: RootedGadget, image: Sequence[int]) -> list[tuple[int, ...]]:
    where = dict(zip(gadget.order, image))
    return [tuple(sorted(where[x] for x in e)) for e in gadget.graph.edges]


def greedy_rooted_embed(random_rounds: Sequence[Hypergraph], gadget: RootedGadget, tasks: Sequence[CandidateFamily],
                        schedule: PhaseSchedule, host: Hypergraph | None = None, raise_on_failure: bool = True) -> EmbeddingResult:
    """First-fit embedding of one gadget per task, phase by phase.

    Raises EmbeddingIncomplete (carrying the partial result) when some task is
    still unembedded after the last phase, unless ``raise_on_failure`` is off.
    """
    schedule.check_rounds(len(random_rounds))
    nroots, ninterior = len(gadget.roots), len(gadget.interior)
    used = set()
    for t in tasks:
        if len(t.roots) != nroots:
            raise InvalidArgument("root image size does not match the gadget")
        if used & set(t.roots):
            raise InvalidArgument("root images must be pairwise disjoint")
        used |= set(t.roots)
        if any(len(s) != ninterior for s in t.tuples):
            raise InvalidArgument("candidate length does not match the gadget interior")
    host_edges = host.edges if host is not None else frozenset()
    res = EmbeddingResult([None] * len(tasks), [None] * len(tasks))
    for j, (budget, ridx) in enumerate(zip(schedule.budgets, schedule.rounds)):
        rnd = random_rounds[ridx].edges
        for i, t in enumerate(tasks):
            if res.phase[i] is not None:
                continue
            for s in t.tuples[:budget]:
                if used & set(s):
                    continue
                image = gadget_image(gadget, t.roots, s)
                edges = image_edges(gadget, image)
                if all(e in host_edges or e in rnd for e in edges):
                    res.phase[i] = j + 1
                    res.images[i] = image
                    res.consumed.setdefault(ridx, set()).update(e for e in edges if e not in host_edges)
                    used |= set(s)
                    break
        res.remaining.append(len(res.survivors))
    _certify(random_rounds, gadget, res, host_edges)
    if raise_on_failure and not res.complete:
        raise EmbeddingIncomplete(f"{len(res.survivors)} of {len(tasks)} tasks unembedded", result=res)
    return res


def _certify(random_rounds, gadget, res: EmbeddingResult, host_edges) -> None:
    pool = set()
    for ridx in res.consumed:
        pool |= random_rounds[ridx].edges
    for image in res.images:
        if image is None:
            continue
        for e in image_edges(gadget, image):
            if e not in host_edges and e not in pool:
                raise AssertionError(f"embedded gadget edge {e} is in neither host nor consumed rounds")
