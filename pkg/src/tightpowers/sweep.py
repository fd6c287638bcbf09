"""Monte Carlo (n, x) grids with p = n^-x, CSV output and plot-script generation."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import InvalidArgument, ParseError
from .hypergraph import union
from .oracle import DEFAULT_CAP, find_power_ham_cycle
from .pipeline import FAILURE_COLUMN, PipelineConfig, run_theorem1
from .powers import PowerParams
from .random_models import derive_seed, parse_host, sample_gnp

CSV_FIELDS = ("mode", "n", "k", "r", "x", "p", "trials", "successes",
              "fail_reserve", "fail_absorb", "fail_cover", "fail_connect", "mean_ms")
FAIL_FIELDS = ("fail_reserve", "fail_absorb", "fail_cover", "fail_connect")


@dataclass(frozen=True)
class SweepSpec:
    ns: tuple[int, ...]
    xs: tuple[float, ...]
    trials: int = 10
    mode: str = "oracle"
    host: str = "empty"
    seed: int = 0
    k: int = 3
    r: int = 2
    threads: int = 1
    timing: bool = False
    config: PipelineConfig | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidArgument("trials must be >= 1")
        if self.mode not in ("oracle", "pipeline"):
            raise InvalidArgument(f"unknown mode {self.mode!r}")
        if not self.ns or not self.xs:
            raise InvalidArgument("need at least one n and one x")
        if self.mode == "oracle" and max(self.ns) > DEFAULT_CAP:
            raise InvalidArgument(f"oracle mode needs n <= {DEFAULT_CAP}")
        if min(self.ns) < self.k + self.r:
            raise InvalidArgument(f"n must be >= k+r = {self.k + self.r}")


@dataclass
class SweepRow:
    mode: str
    n: int
    k: int
    r: int
    x: float
    p: float
    trials: int
    successes: int = 0
    failures: dict = field(default_factory=lambda: dict.fromkeys(FAIL_FIELDS, 0))
    mean_ms: float | None = None

    @property
    def rate(self) -> float:
        return self.successes / self.trials

    def as_csv(self) -> list[str]:
        ms = "NA" if self.mean_ms is None else f"{self.mean_ms:.3f}"
        return [self.mode, str(self.n), str(self.k), str(self.r), f"{self.x:.6g}", f"{self.p:.6g}",
                str(self.trials), str(self.successes), *(str(self.failures[f]) for f in FAIL_FIELDS), ms]


def trial_seed(base: int, n: int, x: float, trial: int) -> int:
    return derive_seed(base, "cell", n, f"{x:.6g}", trial)


def edge_probability(n: int, x: float) -> float:
    return min(1.0, n ** (-x))


def _one_trial(args) -> tuple[bool, str | None, float]:
    spec, n, x, t = args
    seed = trial_seed(spec.seed, n, x, t)
    p = edge_probability(n, x)
    params = PowerParams(spec.k, spec.r)
    start = time.perf_counter()
    host = parse_host(spec.host, n, spec.k, seed)
    if spec.mode == "oracle":
        G = union(host, sample_gnp(n, spec.k, p, derive_seed(seed, "random")))
        ok, stage = find_power_ham_cycle(G, params) is not None, None
    else:
        cfg = spec.config or PipelineConfig(k=spec.k, r=spec.r)
        trace = run_theorem1(host, p, cfg, seed)
        ok, stage = trace.success, trace.failed_stage
    return ok, stage, (time.perf_counter() - start) * 1000


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    cells = [(n, x) for n in spec.ns for x in spec.xs]
    jobs = [(spec, n, x, t) for n, x in cells for t in range(spec.trials)]
    if spec.threads > 1:
        with ProcessPoolExecutor(spec.threads) as pool:
            results = list(pool.map(_one_trial, jobs, chunksize=max(1, len(jobs) // (4 * spec.threads))))
    else:
        results = [_one_trial(j) for j in jobs]
    rows = []
    it = iter(results)
    for n, x in cells:
        row = SweepRow(spec.mode, n, spec.k, spec.r, x, edge_probability(n, x), spec.trials)
        total = 0.0
        for _ in range(spec.trials):
            ok, stage, ms = next(it)
            total += ms
            if ok:
                row.successes += 1
            elif stage is not None and stage in FAILURE_COLUMN:
                row.failures[FAILURE_COLUMN[stage]] += 1
        if spec.timing:
            row.mean_ms = total / spec.trials
        rows.append(row)
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for row in rows:
        w.writerow(row.as_csv())
    return buf.getvalue()


def read_sweep_csv(text: str) -> list[dict]:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty CSV: header row missing", 1)
    reader = csv.reader(lines)
    header = next(reader)
    if tuple(header) != CSV_FIELDS:
        raise ParseError(f"unexpected header {header}", 1)
    out = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != len(CSV_FIELDS):
            raise ParseError(f"expected {len(CSV_FIELDS)} fields, got {len(rec)}", lineno)
        d = dict(zip(CSV_FIELDS, rec))
        try:
            d["n"], d["trials"], d["successes"] = int(d["n"]), int(d["trials"]), int(d["successes"])
            d["x"], d["p"] = float(d["x"]), float(d["p"])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if d["trials"] < 1 or not 0 <= d["successes"] <= d["trials"]:
            raise ParseError("need 0 <= successes <= trials and trials >= 1", lineno)
        out.append(d)
    return out


_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Success rate against x (p = n^-x), one curve per n. Generated file."""

import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

# n -> [(x, success rate, trials), ...]
DATA = {data}

fig, ax = plt.subplots(figsize=(6, 4))
for n, points in sorted(DATA.items()):
    xs = [pt[0] for pt in points]
    ys = [pt[1] for pt in points]
    ax.plot(xs, ys, marker="o", label=f"n = {{n}}")
ax.axhline(0.5, color="grey", linewidth=0.8, linestyle=":")
ax.set_xlabel("x  (p = n^-x)")
ax.set_ylabel("success rate")
ax.set_ylim(-0.02, 1.02)
if DATA:
    ax.legend()
fig.tight_layout()
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else "sweep.png", dpi=150)
'''


def emit_plot_script(csv_text: str) -> str:
    """A self-contained matplotlib script with the CSV's success rates baked in."""
    rows = read_sweep_csv(csv_text)
    data: dict = {}
    for d in rows:
        data.setdefault(d["n"], []).append((d["x"], round(d["successes"] / d["trials"], 6), d["trials"]))
    for pts in data.values():
        pts.sort()
    if data:
        body = "{\n" + "".join(f"    {n}: {pts!r},\n" for n, pts in sorted(data.items())) + "}"
    else:
        body = "{}"
    return _PLOT_TEMPLATE.format(data=body)
