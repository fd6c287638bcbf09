"""Absorbing path, connections, greedy cover and the four-round Hamilton cycle run.

Rounds are used as follows: round 0 builds the absorbing path on V minus the
reserve R, round 1 feeds the greedy path cover, round 2 sweeps the cover's
leftover into a path built inside R, and round 3 closes all segments into a
cycle through the rest of R.  Unused reserve vertices are finally spliced in
through their absorbers.
"""

from __future__ import annotations

import csv
import io
import random
from itertools import combinations
from dataclasses import dataclass, field
from math import comb, floor

from .embed import (
    CandidateFamily,
    PhaseSchedule,
    extend_tight_path,
    greedy_rooted_embed,
    sample_absorber_candidates,
)
from .errors import (
    AbsorberShortfall,
    EmbeddingIncomplete,
    ExtensionFailed,
    InvalidArgument,
    NoAbsorber,
)
from .gadgets import AbsorberWitness, absorber_gadget, connector_gadget, is_absorber
from .hypergraph import Hypergraph, iter_bits, min_codegree, union, vertex_mask
from .powers import (
    PowerParams,
    is_power_cycle,
    is_power_path,
    power_cycle_edges,
    power_path_edges,
)
from .random_models import check_reserve, derive_seed, reserve_codegree, sample_reserve, sample_rounds, split_rounds

STAGES = ("precheck", "reserve", "absorbing-path", "cover", "sweep", "connect", "absorb", "certify")
ROUND_OF_STAGE = {"absorbing-path": 0, "cover": 1, "sweep": 2, "connect": 3}
FAILURE_COLUMN = {
    "reserve": "fail_reserve",
    "absorbing-path": "fail_absorb",
    "sweep": "fail_absorb",
    "absorb": "fail_absorb",
    "cover": "fail_cover",
    "connect": "fail_connect",
    "certify": "fail_connect",
}


@dataclass(frozen=True)
class PipelineConfig:
    k: int = 3
    r: int = 2
    alpha: float | None = None        # None: measured as min codegree / n
    eps: float | None = None          # reporting only
    eta: float = 0.1                  # reserve probability
    gamma: float = 0.0                # cover stops once leftover <= gamma * |V'|
    lam: float | None = None          # |Z| <= lam * n is reported, not enforced
    b: int | None = None              # connector interior length, default 2k
    m: int | None = None              # cover segment length; None picks one in [2h, m_max] per run
    m_max: int = 12
    candidate_cap: int = 200
    absorber_candidates: int = 20
    absorber_budget: int = 2000
    connector_attempts: int = 400
    connector_candidates: int = 20
    cover_budget: int = 20000
    reserve_retries: int = 20
    stage_retries: int = 3
    rounds: int = 4
    prune: bool = True                # steer candidate search by host | round
    budget_check: bool = True         # reject reserve sizes that cannot close the construction

    def __post_init__(self):
        params = self.params
        if self.b is None:
            object.__setattr__(self, "b", 2 * self.k)
        if self.b % 2 or self.b < 2 * self.k:
            raise InvalidArgument(f"b must be even and >= 2k, got {self.b}")
        if self.m is not None and self.m < 2 * params.h:
            raise InvalidArgument(f"m must be >= 2h = {2 * params.h}, got {self.m}")
        if self.m_max < 2 * params.h:
            raise InvalidArgument(f"m_max must be >= 2h = {2 * params.h}")
        if self.rounds < 4:
            raise InvalidArgument("at least four rounds are needed")
        if not 0 < self.eta < 1:
            raise InvalidArgument("eta must lie in (0, 1)")

    @property
    def params(self) -> PowerParams:
        return PowerParams(self.k, self.r)

    def asymptotic_values(self) -> dict:
        """The proof's eps, m and b for these (k, r); logged for reference only."""
        params = self.params
        sigma = params.sigma
        eps = sigma ** 3 / (24 * (self.k + self.r) ** 2)
        target = 1 / (6 * eps)
        # largest m with g(m) <= 1/(6 eps)
        step = comb(params.h, self.k - 1)
        m = params.window + floor((target - comb(params.window, self.k)) / step)
        b = 4 * (self.k + self.r) ** 2 / sigma
        return {"eps": eps, "m": m, "b": int(b)}


@dataclass
class AbsorbingPath:
    seq: tuple[int, ...]
    absorbers: dict                   # u -> AbsorberWitness
    consumed_absorbers: set = field(default_factory=set)
    consumed_connectors: set = field(default_factory=set)

    @property
    def absorbable(self) -> frozenset:
        return frozenset(self.absorbers)


@dataclass
class ConnectResult:
    ordering: tuple[int, ...]
    interiors: list
    consumed: set


@dataclass
class StageRecord:
    stage: str
    status: str
    detail: str = ""


@dataclass
class PipelineTrace:
    seed: int
    n: int
    records: list = field(default_factory=list)
    consumed: dict = field(default_factory=dict)    # stage -> set of random edges
    ordering: tuple | None = None
    status: str = "running"
    failed_stage: str | None = None
    audit_ok: bool | None = None

    def log(self, stage: str, status: str, detail: str = "") -> None:
        self.records.append(StageRecord(stage, status, detail))

    def fail(self, stage: str, detail: str) -> PipelineTrace:
        self.log(stage, "fail", detail)
        self.status = "failure"
        self.failed_stage = stage
        return self

    @property
    def success(self) -> bool:
        return self.status == "success"

    def to_lines(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stage", "status", "detail"])
        for rec in self.records:
            w.writerow([rec.stage, rec.status, rec.detail])
        return buf.getvalue()


# --- shared helpers ---------------------------------------------------------


def _random_edges(H: Hypergraph, edges) -> set:
    return {e for e in edges if e not in H.edges}


def _find_power_path(G: Hypergraph, params: PowerParams, pool: int, length: int, rng: random.Random,
                     budget: int) -> tuple[int, ...] | None:
    """Randomised DFS for an (r,k)-path on ``length`` vertices inside the bitmask ``pool``."""
    k, h = params.k, params.h
    nodes = 0
    starts = list(iter_bits(pool))
    rng.shuffle(starts)

    def allowed(seq) -> int:
        window = seq[-h:]
        mask = pool
        if len(window) >= k - 1:
            for sub in combinations(window, k - 1):
                mask &= G.completion_mask(sub)
                if not mask:
                    break
        return mask

    for s in starts:
        stack = [([s], 1 << s)]
        while stack:
            nodes += 1
            if nodes > budget:
                return None
            seq, used = stack.pop()
            if len(seq) == length:
                return tuple(seq)
            nxt = list(iter_bits(allowed(seq) & ~used))
            rng.shuffle(nxt)
            for v in nxt:
                stack.append((seq + [v], used | (1 << v)))
    return None


# --- absorption -------------------------------------------------------------


def absorb(P: AbsorbingPath, working: Hypergraph, X) -> tuple[int, ...]:
    """Splice every u in X into its absorber; the first and last h vertices stay put."""
    X = sorted(set(X))
    missing = [u for u in X if u not in P.absorbers]
    if missing:
        raise NoAbsorber(f"vertices without an absorber: {missing}")
    seq = list(P.seq)
    for u in X:
        w = P.absorbers[u]
        half = len(w.tuple) // 2
        left, right = w.tuple[half - 1], w.tuple[half]
        i = seq.index(left)
        if i + 1 >= len(seq) or seq[i + 1] != right:
            raise InvalidArgument(f"absorber of {u} is no longer contiguous in the path")
        seq.insert(i + 1, u)
    out = tuple(seq)
    if X:
        h = len(P.absorbers[X[0]].tuple) // 2
        if out[:h] != P.seq[:h] or out[-h:] != P.seq[-h:]:
            raise AssertionError("absorption moved an end")
        if not is_power_path(working, PowerParams(working.k, h + 2 - working.k), out):
            raise AssertionError("absorbed sequence does not certify in the working graph")
    return out


def build_absorbing_path(H: Hypergraph, round1: Hypergraph, roundC: Hypergraph, Y, Z, cfg: PipelineConfig,
                         rng: random.Random) -> AbsorbingPath:
    """Absorbers in Y for every vertex of Z, chained into one (r,k)-path by connectors inside Y."""
    params = cfg.params
    Y, Z = frozenset(Y), frozenset(Z)
    if Y & Z:
        raise InvalidArgument("Y and Z must be disjoint")
    work1 = union(H, round1)
    prune1 = work1 if cfg.prune else None
    gadget = absorber_gadget(params)
    zs = sorted(Z)
    consumed_abs: set = set()
    if zs:
        # one gadget at a time, each family drawn from what is still free
        witnesses = {}
        used: set = set()
        short = []
        for u in zs:
            found = sample_absorber_candidates(H, params, u, Y - used, cfg.absorber_candidates, cfg.absorber_budget,
                                               rng, prune1)
            res = greedy_rooted_embed([round1], gadget, [CandidateFamily((u,), found.tuples)],
                                      PhaseSchedule.desk(1, cfg.candidate_cap), host=H, raise_on_failure=False)
            if not res.complete:
                short.append(u)
                continue
            consumed_abs |= res.consumed.get(0, set())
            w = AbsorberWitness(u, tuple(x for x in res.images[0] if x != u))
            assert is_absorber(work1, params, w)
            witnesses[u] = w
            used |= set(w.tuple)
        if short:
            raise AbsorberShortfall(short)
        paths = [w.tuple for w in witnesses.values()]
    else:
        witnesses = {}
        seg = _find_power_path(work1, params, vertex_mask(Y), 2 * params.h, rng, cfg.cover_budget)
        if seg is None:
            raise ExtensionFailed("no starting segment in Y", progress=0)
        consumed_abs = _random_edges(H, power_path_edges(params, seg))
        paths = [seg]
    used = set().union(*map(set, paths))
    conn = connect_paths(H, roundC, paths, Y - used, cfg, rng, closed=False)
    return AbsorbingPath(conn.ordering, witnesses, consumed_abs, conn.consumed)


# --- connecting -------------------------------------------------------------


def connect_paths(H: Hypergraph, round_: Hypergraph, paths, reserve, cfg: PipelineConfig, rng: random.Random,
                  closed: bool = True) -> ConnectResult:
    """Join consecutive paths through connectors whose interiors lie in ``reserve``.

    With ``closed`` the last path is joined back to the first and the result
    is a cyclic ordering; otherwise it is a single path.
    """
    params, b = cfg.params, cfg.b
    h = params.h
    paths = [tuple(p) for p in paths]
    if not paths:
        raise InvalidArgument("nothing to connect")
    seen: set = set()
    for p in paths:
        if len(p) < 2 * h:
            raise InvalidArgument(f"paths need at least 2h = {2 * h} vertices")
        if seen & set(p):
            raise InvalidArgument("paths must be pairwise disjoint")
        seen |= set(p)
    reserve = frozenset(reserve)
    if reserve & seen:
        raise InvalidArgument("reserve meets a path")
    t = len(paths)
    pairs = [(i, (i + 1) % t) for i in range(t if closed else t - 1)]
    if not pairs:
        return ConnectResult(paths[0], [], set())
    working = union(H, round_)
    prune = working if cfg.prune else None
    F = connector_gadget(params, b)
    interiors: list = []
    consumed: set = set()
    taken = set(seen)
    for idx, (i, j) in enumerate(pairs):
        a_end, b_end = paths[i][-h:], paths[j][:h]
        cands: list = []
        known: set = set()
        best = 0
        for _ in range(cfg.connector_attempts):
            if len(cands) >= cfg.connector_candidates:
                break
            avoid = set(taken)
            try:
                left = extend_tight_path(H, params, a_end, reserve, b // 2, avoid, rng, prune)
                right = extend_tight_path(H, params, tuple(reversed(b_end)), reserve, b // 2, avoid, rng, prune)
            except ExtensionFailed as exc:
                best = max(best, exc.progress)
                continue
            interior = left + tuple(reversed(right))
            if prune is not None and not is_power_path(working, params, a_end + interior + b_end):
                continue
            if interior not in known:
                known.add(interior)
                cands.append(interior)
        if not cands:
            raise ExtensionFailed(f"no connector interior for pair {idx}", progress=best, pair_index=idx)
        try:
            res = greedy_rooted_embed([round_], F, [CandidateFamily(a_end + b_end, cands)],
                                      PhaseSchedule.desk(1, cfg.candidate_cap), host=H)
        except EmbeddingIncomplete as exc:
            exc.pair_index = idx
            raise
        interior = res.images[0][h:h + b]
        interiors.append(interior)
        consumed |= res.consumed.get(0, set())
        taken |= set(interior)
    order: list[int] = []
    for idx, p in enumerate(paths):
        order.extend(p)
        if idx < len(interiors):
            order.extend(interiors[idx])
    # the paths certify themselves; here only the junction windows are new
    for (i, j), interior in zip(pairs, interiors):
        a_end, b_end = paths[i][-h:], paths[j][:h]
        for e in power_path_edges(params, a_end + interior + b_end):
            if e not in working.edges and not (set(e) <= set(a_end) or set(e) <= set(b_end)):
                raise AssertionError(f"junction edge {e} missing")
    return ConnectResult(tuple(order), interiors, consumed)


# --- covering ---------------------------------------------------------------


def greedy_path_cover(Grand: Hypergraph, U, params: PowerParams, m: int, rng: random.Random,
                      gamma: float = 0.0, budget: int = 20000) -> list[tuple[int, ...]]:
    """Disjoint copies of the (r,k)-path on m vertices inside Grand[U], found greedily."""
    if m < params.window:
        raise InvalidArgument(f"m must be >= k+r-1 = {params.window}")
    U = frozenset(U)
    left = vertex_mask(U)
    paths: list = []
    while bin(left).count("1") >= m and bin(left).count("1") > gamma * len(U):
        p = _find_power_path(Grand, params, left, m, rng, budget)
        if p is None:
            break
        assert is_power_path(Grand, params, p)
        paths.append(p)
        left &= ~vertex_mask(p)
    return paths


# --- vertex budget ----------------------------------------------------------


def segment_length(size: int, cfg: PipelineConfig) -> int:
    """Cover length: cfg.m if fixed, else the m in [2h, m_max] leaving the smallest remainder."""
    if cfg.m is not None:
        return cfg.m
    lo = 2 * cfg.params.h
    return min(range(lo, cfg.m_max + 1), key=lambda m: (size % m if size >= m else size, -m))


def vertex_budget(n: int, rho: int, cfg: PipelineConfig) -> dict:
    """Vertex accounting for a reserve of size rho, assuming the cover leaves only the remainder.

    Absorbers for all of R plus their connectors take 2h*rho + b*(rho-1)
    vertices outside R; the cover remainder u needs its own absorbing path
    inside R, and every connection of the final cycle takes b reserve vertices.
    """
    h, b = cfg.params.h, cfg.b
    p_abs = 2 * h * rho + b * max(rho - 1, 0) if rho else 2 * h
    rest = n - rho - p_abs
    plan = {"rho": rho, "absorbing_path": p_abs, "cover_pool": rest, "feasible": False}
    if rest < 0:
        return plan
    m = segment_length(rest, cfg)
    segs, u = (rest // m, rest % m) if rest >= m else (0, rest)
    sweep = 2 * h * u + b * max(u - 1, 0)
    need = sweep + b * (1 + segs + (u > 0))
    plan.update(m=m, segments=segs, leftover=u, reserve_needed=need, feasible=need <= rho)
    return plan


def feasible_reserve_sizes(n: int, cfg: PipelineConfig) -> list[int]:
    return [rho for rho in range(n + 1) if vertex_budget(n, rho, cfg)["feasible"]]


# --- the full run -----------------------------------------------------------


def run_theorem1(H: Hypergraph, p: float, cfg: PipelineConfig, seed: int) -> PipelineTrace:
    """Four-round construction of an (r,k)-cycle through all of V(H) in H | G(n, p)."""
    params = cfg.params
    n = H.n
    trace = PipelineTrace(seed, n)
    if H.k != params.k:
        raise InvalidArgument("host uniformity does not match the config")
    alpha = cfg.alpha if cfg.alpha is not None else (min_codegree(H) / n if n >= params.k else 0.0)
    delta = min_codegree(H) if n >= params.k else 0
    status = "ok" if delta >= alpha * n else "warn"
    trace.log("precheck", status, f"min_codegree={delta} alpha={alpha:.4f} asymptotic={cfg.asymptotic_values()}")

    split = split_rounds(p, cfg.rounds)
    rounds = sample_rounds(n, params.k, split, seed)
    trace.log("precheck", "ok", f"p={p:.6g} p_round={split.p_round:.6g} rounds={split.t}")

    # reserve
    if cfg.budget_check:
        sizes = feasible_reserve_sizes(n, cfg)
        if not sizes:
            return trace.fail("reserve", f"no reserve size closes the construction at n={n} (b={cfg.b})")
        trace.log("reserve", "ok", f"feasible sizes {sizes[0]}..{sizes[-1]} ({len(sizes)} values)")
    R = None
    for attempt in range(cfg.reserve_retries):
        cand = sample_reserve(n, cfg.eta, derive_seed(seed, "reserve-attempt", attempt))
        if cfg.budget_check and not vertex_budget(n, len(cand), cfg)["feasible"]:
            continue
        thr = alpha * cfg.eta * n / 2
        if check_reserve(H, cand, thr, cfg.eta):
            R = cand
            trace.log("reserve", "ok", f"size={len(R)} codegree_into_reserve={reserve_codegree(H, R)} attempt={attempt}")
            break
    if R is None:
        return trace.fail("reserve", f"no reserve passed after {cfg.reserve_retries} attempts")
    V = frozenset(range(n))

    def attempt_stage(stage, fn):
        last = None
        for a in range(cfg.stage_retries):
            rng = random.Random(derive_seed(seed, stage, a))
            try:
                return fn(rng), None
            except (AbsorberShortfall, ExtensionFailed, EmbeddingIncomplete, NoAbsorber) as exc:
                last = f"{type(exc).__name__}: {exc}"
                trace.log(stage, "retry", f"attempt={a} {last}")
        return None, last

    # absorbing path on V \ R for all of R
    G1, G2, G3, G4 = rounds[:4]
    P_abs, err = attempt_stage("absorbing-path", lambda rng: build_absorbing_path(H, G1, G1, V - R, R, cfg, rng))
    if P_abs is None:
        return trace.fail("absorbing-path", err)
    trace.consumed["absorbing-path"] = P_abs.consumed_absorbers | P_abs.consumed_connectors
    lam_note = "" if cfg.lam is None else f" lam_bound={cfg.lam * n:.1f}"
    trace.log("absorbing-path", "ok", f"absorbers={len(P_abs.absorbers)} length={len(P_abs.seq)}{lam_note}")

    # greedy cover of the rest
    Vp = V - R - set(P_abs.seq)
    grand = union(H, G2)
    cover = greedy_path_cover(grand, Vp, params, segment_length(len(Vp), cfg), random.Random(derive_seed(seed, "cover")), cfg.gamma, cfg.cover_budget)
    covered = set().union(*map(set, cover)) if cover else set()
    U = Vp - covered
    trace.consumed["cover"] = set().union(*(_random_edges(H, power_path_edges(params, c)) for c in cover)) if cover else set()
    trace.log("cover", "ok", f"segments={len(cover)} leftover={len(U)} of {len(Vp)}")

    # sweep the leftover into a path built inside R
    segments = [P_abs.seq, *cover]
    R1 = set(R)
    if U:
        P2, err = attempt_stage("sweep", lambda rng: build_absorbing_path(H, G3, G3, R, U, cfg, rng))
        if P2 is None:
            return trace.fail("sweep", err)
        seg2 = absorb(P2, union(H, G3), U)
        segments.append(seg2)
        R1 -= set(seg2)
        trace.consumed["sweep"] = P2.consumed_absorbers | P2.consumed_connectors
        trace.log("sweep", "ok", f"absorbed={len(U)} length={len(seg2)}")
    else:
        trace.consumed["sweep"] = set()
        trace.log("sweep", "skip", "no leftover")

    conn, err = attempt_stage("connect", lambda rng: connect_paths(H, G4, segments, R1, cfg, rng, closed=True))
    if conn is None:
        return trace.fail("connect", err)
    trace.consumed["connect"] = conn.consumed
    R2 = R1 - set(conn.ordering)
    trace.log("connect", "ok", f"connections={len(conn.interiors)} reserve_left={len(R2)}")

    absorbed = absorb(P_abs, union(H, G1), R2)
    cycle = absorbed + conn.ordering[len(P_abs.seq):]
    trace.log("absorb", "ok", f"absorbed={len(R2)}")

    everything = union(H, *rounds)
    ok = len(cycle) == n and set(cycle) == V and is_power_cycle(everything, params, cycle)
    trace.audit_ok = audit_rounds(H, rounds, trace, cycle, params)
    if not ok:
        return trace.fail("certify", "ordering does not certify")
    trace.ordering = cycle
    trace.status = "success"
    trace.log("certify", "ok", f"n={n} audit={'ok' if trace.audit_ok else 'FAILED'}")
    return trace


def audit_rounds(H: Hypergraph, rounds, trace: PipelineTrace, cycle=None, params: PowerParams | None = None) -> bool:
    """Every consumed edge is absent from H and present in its stage's round; a cycle uses nothing else."""
    for stage, edges in trace.consumed.items():
        rnd = rounds[ROUND_OF_STAGE[stage]].edges
        if any(e in H.edges or e not in rnd for e in edges):
            return False
    if cycle is not None:
        allowed = set().union(*trace.consumed.values()) if trace.consumed else set()
        if any(e not in H.edges and e not in allowed for e in power_cycle_edges(params, cycle)):
            return False
    return True
