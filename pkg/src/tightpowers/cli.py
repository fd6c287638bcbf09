"""Command-line front end.

Exit codes: 0 success, 1 stage or search failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path

from .errors import InvalidArgument, ParseError, TooLarge
from .gadgets import absorber_gadget, connector_gadget, gadget_text, path_gadget
from .hypergraph import load, write_text
from .oracle import find_power_ham_cycle
from .phi import (
    ExponentQuery,
    absorber_eps_bound,
    connector_eps_bound,
    path_eps_bound,
    phi_exponent,
    verify_phi_lemmas,
)
from .pipeline import PipelineConfig, run_theorem1
from .powers import PowerParams
from .random_models import derive_seed, parse_host, sample_gnp
from .sweep import SweepSpec, emit_plot_script, rows_to_csv, run_sweep

PHI_FIELDS = ("gadget", "k", "r", "b", "eps", "min_exponent", "witness_v", "witness_e", "witness_roots")


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gadget(a) -> int:
    params = PowerParams(a.k, a.r)
    if a.kind == "absorber":
        gadget = absorber_gadget(params)
    else:
        if a.b is None:
            raise UsageError("connector needs --b")
        gadget = connector_gadget(params, a.b)
    _emit(gadget_text(gadget), a.out)
    return 0


def cmd_phi(a) -> int:
    if a.gadget is not None:
        return _phi_single(a)
    rep = verify_phi_lemmas(a.k, a.r, a.b, None if a.eps is None else Fraction(a.eps), engine=a.engine)
    rows = [
        ("absorber", rep.eps_absorber, rep.absorber_rooted),
        ("absorber-minus-roots", rep.eps_absorber, rep.absorber_unrooted),
        ("connector", rep.eps_connector, rep.connector_rooted),
        ("connector-minus-roots", rep.eps_connector, rep.connector_unrooted),
    ]
    lines = [",".join(PHI_FIELDS)]
    for name, eps, pr in rows:
        if pr is None:
            continue
        b = rep.b if name.startswith("connector") else ""
        lines.append(",".join(map(str, (name, a.k, a.r, b, eps, pr.min_exponent, pr.witness_v, pr.witness_e,
                                        pr.witness_roots))))
    _emit("\n".join(lines) + "\n", a.out)
    for note in rep.notes:
        print(f"note: {note}", file=sys.stderr)
    has_absorber = rep.absorber_rooted is not None
    ok = rep.connector_ok and (rep.absorber_ok or not has_absorber)
    return 0 if ok else 1


def _phi_single(a) -> int:
    params = PowerParams(a.k, a.r)
    if a.gadget == "absorber":
        gadget, b = absorber_gadget(params), ""
        eps = absorber_eps_bound(params) if a.eps is None else Fraction(a.eps)
    else:
        if a.b is None:
            raise UsageError(f"{a.gadget} needs --b")
        b = a.b
        if a.gadget == "connector":
            gadget = connector_gadget(params, b)
            eps = connector_eps_bound(params, b) if a.eps is None else Fraction(a.eps)
        else:
            gadget = path_gadget(params, b)
            # the path bound is strict, so default to half of it
            eps = path_eps_bound(params, b) / 2 if a.eps is None else Fraction(a.eps)
    pr = phi_exponent(ExponentQuery(gadget, params.sigma + eps), a.engine)
    row = (a.gadget, a.k, a.r, b, eps, pr.min_exponent, pr.witness_v, pr.witness_e, pr.witness_roots)
    _emit(",".join(PHI_FIELDS) + "\n" + ",".join(map(str, row)) + "\n", a.out)
    return 0


def cmd_gnp(a) -> int:
    if (a.p is None) == (a.x is None):
        raise UsageError("give exactly one of --p and --x")
    p = a.p if a.p is not None else min(1.0, a.n ** (-a.x))
    _emit(write_text(sample_gnp(a.n, a.k, p, a.seed)), a.out)
    return 0


def cmd_oracle(a) -> int:
    H = load(a.inp)
    found = find_power_ham_cycle(H, PowerParams(H.k, a.r), cap=a.cap)
    text = "NONE\n" if found is None else "FOUND " + " ".join(map(str, found)) + "\n"
    _emit(text, a.out)
    return 0 if found is not None else 1


def cmd_pipeline(a) -> int:
    cfg = PipelineConfig(k=a.k, r=a.r, eta=a.eta, alpha=a.alpha, rounds=a.rounds, b=a.b, m=a.m,
                         budget_check=not a.no_budget_check)
    p = min(1.0, a.n ** (-a.p_exponent))
    traces = []
    for t in range(a.trials):
        seed = a.seed if a.trials == 1 else derive_seed(a.seed, "trial", t)
        H = parse_host(a.host, a.n, a.k, seed)
        tr = run_theorem1(H, p, cfg, seed)
        traces.append(tr)
        where = "" if tr.success else f" at {tr.failed_stage}"
        print(f"trial {t} seed {seed}: {tr.status}{where}")
    if a.trace_out:
        with open(a.trace_out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["stage", "status", "detail"])
            for t, tr in enumerate(traces):
                w.writerow(["trial", str(t), f"seed={tr.seed}"])
                for rec in tr.records:
                    w.writerow([rec.stage, rec.status, rec.detail])
    if a.out and traces and traces[-1].ordering is not None:
        Path(a.out).write_text(" ".join(map(str, traces[-1].ordering)) + "\n")
    wins = sum(tr.success for tr in traces)
    print(f"successes {wins}/{len(traces)}")
    return 0 if wins == len(traces) else 1


def cmd_sweep(a) -> int:
    spec = SweepSpec(tuple(a.n), tuple(a.x), a.trials, a.mode, a.host, a.seed, a.k, a.r, a.threads, a.timing)
    _emit(rows_to_csv(run_sweep(spec)), a.out)
    return 0


def cmd_plot_script(a) -> int:
    _emit(emit_plot_script(Path(a.csv).read_text()), a.out)
    return 0


def _globals(suppress: bool) -> argparse.ArgumentParser:
    # accepted before or after the subcommand; the subcommand copy must not reset them
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    gp = argparse.ArgumentParser(add_help=False)
    gp.add_argument("--seed", type=int, default=d(0))
    gp.add_argument("--threads", type=int, default=d(1))
    gp.add_argument("--out", default=d(None), help="write output here instead of stdout")
    return gp


def build_parser() -> argparse.ArgumentParser:
    common = _globals(suppress=True)
    ap = argparse.ArgumentParser(prog="tightpowers", parents=[_globals(suppress=False)],
                                 description="Powers of tight Hamilton cycles in randomly perturbed hypergraphs")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gadget", parents=[common], help="dump the absorber or connector gadget")
    g.add_argument("kind", choices=("absorber", "connector"))
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--r", type=int, default=2)
    g.add_argument("--b", type=int)
    g.set_defaults(func=cmd_gadget)

    ph = sub.add_parser("phi", parents=[common], help="exact density exponents of both gadgets")
    ph.add_argument("--gadget", choices=("absorber", "connector", "path"),
                    help="one row for this gadget; omit to check both lemmas")
    ph.add_argument("--k", type=int, default=3)
    ph.add_argument("--r", type=int, default=2)
    ph.add_argument("--b", type=int)
    ph.add_argument("--eps", help="rational, e.g. 1/312; default is each bound's largest value")
    ph.add_argument("--engine", choices=("dp", "naive", "both"), default="dp")
    ph.set_defaults(func=cmd_phi)

    gn = sub.add_parser("gnp", parents=[common], help="sample a binomial random k-graph")
    gn.add_argument("--n", type=int, required=True)
    gn.add_argument("--k", type=int, default=3)
    gn.add_argument("--p", type=float)
    gn.add_argument("--x", type=float, help="use p = n^-x")
    gn.set_defaults(func=cmd_gnp)

    o = sub.add_parser("oracle", parents=[common], help="exact search for a spanning (r,k)-cycle")
    o.add_argument("--in", dest="inp", required=True)
    o.add_argument("--r", type=int, required=True)
    o.add_argument("--cap", type=int, default=14)
    o.set_defaults(func=cmd_oracle)

    pl = sub.add_parser("pipeline", parents=[common], help="run the four-round construction")
    pl.add_argument("--host", default="empty", help="bernoulli:q | intersecting:a | empty | complete | file:PATH")
    pl.add_argument("--n", type=int, required=True)
    pl.add_argument("--k", type=int, default=3)
    pl.add_argument("--r", type=int, default=2)
    pl.add_argument("--p-exponent", type=float, required=True, help="p = n^-X")
    pl.add_argument("--trials", type=int, default=1)
    pl.add_argument("--eta", type=float, default=0.1)
    pl.add_argument("--alpha", type=float, help="codegree fraction; default measured from the host")
    pl.add_argument("--rounds", type=int, default=4)
    pl.add_argument("--b", type=int)
    pl.add_argument("--m", type=int)
    pl.add_argument("--no-budget-check", action="store_true")
    pl.add_argument("--trace-out")
    pl.set_defaults(func=cmd_pipeline)

    sw = sub.add_parser("sweep", parents=[common], help="Monte Carlo grid over n and x")
    sw.add_argument("--mode", choices=("oracle", "pipeline"), default="oracle")
    sw.add_argument("--n", type=int, nargs="+", required=True)
    sw.add_argument("--x", type=float, nargs="+", required=True)
    sw.add_argument("--trials", type=int, default=10)
    sw.add_argument("--host", default="empty")
    sw.add_argument("--k", type=int, default=3)
    sw.add_argument("--r", type=int, default=2)
    sw.add_argument("--timing", action="store_true", help="fill mean_ms (makes output run-dependent)")
    sw.set_defaults(func=cmd_sweep)

    ps = sub.add_parser("plot-script", parents=[common], help="write a matplotlib script for a sweep CSV")
    ps.add_argument("--csv", required=True)
    ps.set_defaults(func=cmd_plot_script)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return a.func(a)
    except (UsageError, InvalidArgument, ParseError, TooLarge, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
