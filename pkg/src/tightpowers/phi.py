"""Rooted density exponents of small gadgets.

With p = n^{-x}, the quantity n^{v_H - |V(H) & W|} p^{e_H} equals n to the power
v_H - roots_H - x*e_H.  The minimum of that exponent over subgraphs H with at
least one edge is computed exactly (``Fraction`` arithmetic throughout).  Only
induced subgraphs need to be scanned: for a fixed vertex set the induced graph
has the most edges, and the objective decreases with e_H.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .errors import InvalidArgument, NoEdges, TooLarge, UnsupportedStructure
from .gadgets import RootedGadget, absorber_gadget, connector_gadget
from .hypergraph import vertex_mask
from .powers import PowerParams, g

NAIVE_LIMIT = 24


@dataclass(frozen=True)
class ExponentQuery:
    gadget: RootedGadget
    x: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        if self.x <= 0:
            raise InvalidArgument("edge exponent x must be positive")


@dataclass(frozen=True)
class PhiReport:
    min_exponent: Fraction
    witness: frozenset
    witness_v: int
    witness_e: int
    witness_roots: int

    @classmethod
    def from_witness(cls, gadget: RootedGadget, x: Fraction, witness) -> PhiReport:
        witness = frozenset(witness)
        e = sum(1 for edge in gadget.graph.edges if witness.issuperset(edge))
        roots = len(witness & set(gadget.roots))
        return cls(len(witness) - roots - x * e, witness, len(witness), e, roots)


def _positions(gadget: RootedGadget) -> dict[int, int]:
    return {vtx: i for i, vtx in enumerate(gadget.order)}


def phi_exponent_naive(q: ExponentQuery) -> PhiReport:
    """Minimum exponent by enumerating every vertex subset of the gadget."""
    gadget = q.gadget
    if not gadget.graph.edges:
        raise NoEdges("gadget has no edges")
    size = gadget.size
    if size > NAIVE_LIMIT:
        raise TooLarge(f"{size} gadget vertices exceed the enumeration limit {NAIVE_LIMIT}; use phi_exponent_dp")
    pos = _positions(gadget)
    subsets = np.arange(1 << size, dtype=np.uint32)
    ecount = np.zeros(1 << size, dtype=np.int32)
    for edge in gadget.graph.edges:
        em = np.uint32(vertex_mask(pos[v] for v in edge))
        ecount += (subsets & em) == em
    rootmask = np.uint32(vertex_mask(pos[v] for v in gadget.roots))
    free = np.bitwise_count(subsets).astype(np.int64) - np.bitwise_count(subsets & rootmask)
    num, den = q.x.numerator, q.x.denominator
    scaled = den * free - num * ecount.astype(np.int64)
    scaled[ecount == 0] = np.iinfo(np.int64).max
    best = int(np.argmin(scaled))
    witness = frozenset(gadget.order[i] for i in range(size) if (best >> i) & 1)
    report = PhiReport.from_witness(gadget, q.x, witness)
    assert report.min_exponent == Fraction(int(scaled[best]), den)
    return report


def phi_exponent_dp(q: ExponentQuery, max_span: int | None = None) -> PhiReport:
    """Minimum exponent by a left-to-right scan over the gadget order.

    The state is the inclusion pattern of the previous ``span`` positions plus
    a flag saying whether an edge has been picked up yet, where ``span`` is the
    largest distance between the first and last position of an edge.  Power
    paths and connectors have span k+r-2; the absorber, whose root sits in the
    middle of its order, has span k+r-1.  Spans beyond ``max_span`` (default
    2(k+r-1)) are rejected.
    """
    gadget = q.gadget
    if not gadget.graph.edges:
        raise NoEdges("gadget has no edges")
    if max_span is None:
        max_span = 2 * gadget.params.window
    pos = _positions(gadget)
    size = gadget.size
    spans = []
    for edge in gadget.graph.edges:
        ps = sorted(pos[v] for v in edge)
        spans.append((ps, ps[-1] - ps[0]))
    span = max(s for _, s in spans)
    if span > max_span:
        raise UnsupportedStructure(f"an edge spans {span + 1} positions; the scan allows at most {max_span + 1}")
    # closing[i]: for edges whose last position is i, the bitmask of the other
    # positions relative to i (bit j <-> position i-1-j)
    closing: list[list[int]] = [[] for _ in range(size)]
    for ps, _ in spans:
        last = ps[-1]
        closing[last].append(vertex_mask(last - 1 - p for p in ps[:-1]))
    is_root = [False] * size
    for w in gadget.roots:
        is_root[pos[w]] = True

    x = q.x
    full = (1 << span) - 1
    # (pattern, seen_edge) -> cost; back[i][(pattern, seen)] = (prev_state, included)
    cost: dict[tuple[int, bool], Fraction] = {(0, False): Fraction(0)}
    back: list[dict] = []
    for i in range(size):
        nxt: dict[tuple[int, bool], Fraction] = {}
        choice: dict = {}
        for (pat, seen), c in cost.items():
            # exclude position i
            key = ((pat << 1) & full, seen)
            if key not in nxt or c < nxt[key]:
                nxt[key], choice[key] = c, ((pat, seen), False)
            # include position i
            gained = sum(1 for m in closing[i] if pat & m == m)
            c2 = c + (0 if is_root[i] else 1) - x * gained
            key = (((pat << 1) | 1) & full, seen or gained > 0)
            if key not in nxt or c2 < nxt[key]:
                nxt[key], choice[key] = c2, ((pat, seen), True)
        cost = nxt
        back.append(choice)
    finals = [(c, s) for s, c in cost.items() if s[1]]
    best_cost, state = min(finals, key=lambda t: t[0])
    chosen = []
    for i in range(size - 1, -1, -1):
        state, included = back[i][state]
        if included:
            chosen.append(gadget.order[i])
    report = PhiReport.from_witness(gadget, x, chosen)
    assert report.min_exponent == best_cost
    return report


def phi_exponent(q: ExponentQuery, engine: str = "dp") -> PhiReport:
    if engine == "naive":
        return phi_exponent_naive(q)
    if engine == "dp":
        return phi_exponent_dp(q)
    if engine == "both":
        a, b = phi_exponent_naive(q), phi_exponent_dp(q)
        if a.min_exponent != b.min_exponent:
            raise AssertionError(f"engines disagree: naive {a.min_exponent} vs dp {b.min_exponent}")
        return b
    raise InvalidArgument(f"unknown engine {engine!r}")


# --- lemma parameter ranges -------------------------------------------------


def absorber_eps_bound(params: PowerParams) -> Fraction:
    """Largest eps admitted by the absorber density lemma."""
    k, r = params.k, params.r
    inner = min(Fraction(2, k * (k + 1)), Fraction(k + 2, comb(k + r - 2, k - 1)))
    return inner / (4 * g(params, 2 * k + 2 * r - 3))


def connector_b_bound(params: PowerParams) -> int:
    """Smallest even b with b >= (k+r)^2 * C(k+r-2, k-1)."""
    b = (params.k + params.r) ** 2 * comb(params.h, params.k - 1)
    return b + (b % 2)


def connector_eps_bound(params: PowerParams, b: int) -> Fraction:
    return Fraction(1, 3 * b * comb(params.h, params.k - 1) ** 2)


def path_eps_bound(params: PowerParams, b: int) -> Fraction:
    """Strict upper bound on eps for the unrooted power-path density statement."""
    return min(Fraction(1, 2 * g(params, b)), Fraction(1, 3 * comb(params.k + params.r - 1, params.k)))


@dataclass
class PhiLemmaReport:
    k: int
    r: int
    b: int
    eps_absorber: Fraction
    eps_connector: Fraction
    absorber_rooted: PhiReport | None = None
    absorber_unrooted: PhiReport | None = None
    connector_rooted: PhiReport | None = None
    connector_unrooted: PhiReport | None = None
    absorber_ok: bool = False
    connector_ok: bool = False
    margins: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


def verify_phi_lemmas(k: int, r: int, b: int | None = None, eps=None, *,
                      eps_absorber=None, eps_connector=None, engine: str = "dp") -> PhiLemmaReport:
    """Check the absorber (>= 1) and connector (>= sigma/2 rooted, >= 1 unrooted) exponents.

    ``eps`` sets both epsilons; the keyword forms override it per gadget.  A
    missing epsilon defaults to the largest value the relevant lemma admits and
    a missing b to the lemma's even-rounded lower bound.  Out-of-range
    parameters are recorded in ``notes`` rather than rejected.
    """
    params = PowerParams(k, r)
    sigma = params.sigma
    b_bound = connector_b_bound(params)
    if b is None:
        b = b_bound
    if eps_absorber is None:
        eps_absorber = absorber_eps_bound(params) if eps is None else eps
    if eps_connector is None:
        eps_connector = connector_eps_bound(params, b) if eps is None else eps
    eps_absorber, eps_connector = Fraction(eps_absorber), Fraction(eps_connector)
    rep = PhiLemmaReport(k, r, b, eps_absorber, eps_connector)

    if b < b_bound:
        rep.notes.append(f"below lemma's b bound: b={b} < {b_bound}")
    if not 0 < eps_absorber <= absorber_eps_bound(params):
        rep.notes.append(f"absorber eps {eps_absorber} outside (0, {absorber_eps_bound(params)}]")
    if not 0 < eps_connector <= connector_eps_bound(params, b):
        rep.notes.append(f"connector eps {eps_connector} outside (0, {connector_eps_bound(params, b)}]")

    def run(gadget, eps_):
        eng = "dp" if engine == "both" and gadget.size > NAIVE_LIMIT else engine
        return phi_exponent(ExponentQuery(gadget, sigma + eps_), eng)

    if k >= 3 and r >= 2:
        A = absorber_gadget(params)
        rep.absorber_rooted = run(A, eps_absorber)
        rep.absorber_unrooted = run(A.delete_roots(), eps_absorber)
        rep.margins["absorber_rooted"] = rep.absorber_rooted.min_exponent - 1
        rep.margins["absorber_unrooted"] = rep.absorber_unrooted.min_exponent - 1
        rep.absorber_ok = all(m >= 0 for m in (rep.margins["absorber_rooted"], rep.margins["absorber_unrooted"]))
    else:
        rep.notes.append("absorber gadget undefined outside k >= 3, r >= 2")

    F = connector_gadget(params, b)
    rep.connector_rooted = run(F, eps_connector)
    rep.connector_unrooted = run(F.delete_roots(), eps_connector)
    rep.margins["connector_rooted"] = rep.connector_rooted.min_exponent - sigma / 2
    rep.margins["connector_unrooted"] = rep.connector_unrooted.min_exponent - 1
    rep.connector_ok = rep.margins["connector_rooted"] >= 0 and rep.margins["connector_unrooted"] >= 0
    return rep
