"""Command-line entry point.

Exit codes: 0 every check holds, 1 some check fails, 2 usage or domain
error, 3 capacity or budget exceeded.
"""

import argparse
import json
import os
import re
import sys
import time
from dataclasses import asdict, dataclass, field

from . import applications as apps
from . import bounds
from .arith import get_tables
from .constants import DEFAULT_CUTOFF, build_ledger, default_ledger, displayed_comparison
from .errors import CapacityError, DomainError, PrecisionError
from .reports import reports_to_csv, reports_to_json, summarize

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
DEFAULT_SIEVE_LIMIT = int(float(os.environ.get("EXPLICIT_BV_SIEVE_LIMIT", "1e7")))

VERIFY_IDS = ("mvt", "ebvt-psi", "ebvt-pi", "l31a", "l31b", "l31c", "l31d", "l31e", "l31f", "l31g",
              "phi-harmonic", "lemma51", "large-sieve", "bilinear", "pv", "bt",
              "s-recombination", "bridge", "lifting")
APP_NAMES = ("turan", "goldfeld", "pfactor", "order", "least-prime")


@dataclass
class RunConfig:
    command: str
    target: str | None
    sieve_limit: int = DEFAULT_SIEVE_LIMIT
    threads: int = 1
    fmt: str = "text"
    output: str | None = None
    seed: int = 0
    timing: bool = False
    params: dict = field(default_factory=dict)

    def meta(self):
        d = asdict(self)
        d.pop("output")
        return d


def number(s):
    """Parse 1e6, 10^6, 1_000_000 or 0.5; integral values come back as int."""
    s = s.strip().replace("_", "")
    m = re.fullmatch(r"(\d+)\^(\d+)", s)
    try:
        v = int(m.group(1)) ** int(m.group(2)) if m else float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if isinstance(v, float) and v.is_integer() and abs(v) < 2**53:
        return int(v)
    return v


def _parser():
    p = argparse.ArgumentParser(prog="explicit-bv", allow_abbrev=False,
                                description="Evaluate explicit prime-distribution bounds.")
    p.add_argument("--sieve-limit", type=number, default=DEFAULT_SIEVE_LIMIT)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
    p.add_argument("--output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true", help="include wall-time columns")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants")
    c.add_argument("--cutoff", type=number, default=DEFAULT_CUTOFF)

    v = sub.add_parser("verify")
    v.add_argument("target", choices=VERIFY_IDS)
    v.add_argument("--x", type=number, default=10**4)
    v.add_argument("--q", dest="Q", type=number, default=10)
    v.add_argument("--q1", dest="Q1", type=number, default=1)
    v.add_argument("--x-max", type=number, default=10**6)
    v.add_argument("--q-min", type=number, default=3)
    v.add_argument("--q-max", type=number, default=200)
    v.add_argument("--samples", type=number, default=100)
    v.add_argument("--trials", type=number, default=100)
    v.add_argument("--random", type=number, default=100, help="random grid points per part")
    v.add_argument("--theta", type=number, default=0.5)
    v.add_argument("--v", dest="V", type=number, default=563)
    v.add_argument("--v-max", type=number, default=100)
    v.add_argument("--sweep", action="store_true", help="add a worst case over every real x")

    a = sub.add_parser("apps")
    a.add_argument("target", choices=APP_NAMES)
    a.add_argument("--x", type=number, default=10**4)
    a.add_argument("--theta", type=number, default=0.5)
    a.add_argument("--b", type=number, default=2)
    a.add_argument("--u", dest="U", type=number)
    a.add_argument("--v", dest="V", type=number)
    a.add_argument("--t", dest="T", type=number)
    return p


def _config(ns):
    skip = {"command", "target", "sieve_limit", "threads", "fmt", "output", "seed", "timing"}
    params = {k: v for k, v in vars(ns).items() if k not in skip}
    return RunConfig(ns.command, getattr(ns, "target", None), int(ns.sieve_limit), ns.threads, ns.fmt,
                     ns.output, ns.seed, ns.timing, params)


def _tables(cfg, need):
    need = int(need)
    if need > cfg.sieve_limit:
        raise CapacityError(f"requires sieve up to {need}, limit is {cfg.sieve_limit} (--sieve-limit)",
                            requested=need, limit=cfg.sieve_limit, estimate=need)
    return get_tables(max(need, 2))


def run_verify(cfg):
    p, tgt = cfg.params, cfg.target
    x, seed = p["x"], cfg.seed
    if tgt == "mvt":
        return [bounds.verify_mvt(x, p["Q"], _tables(cfg, x), threads=cfg.threads)], {}
    if tgt in ("ebvt-psi", "ebvt-pi"):
        fn = bounds.verify_ebvt_psi if tgt == "ebvt-psi" else bounds.verify_ebvt_pi
        return [fn(x, p["Q"], p["Q1"], _tables(cfg, x), threads=cfg.threads)], {}
    if tgt.startswith("l31"):
        part = tgt[-1]
        xm = p["x_max"]
        if part == "f":
            return bounds.verify_bt(int(p["samples"]), xm, seed=seed, tables=_tables(cfg, xm)), {}
        if part == "g":
            return bounds.verify_mobius_square(xm, p["v_max"],
                                               n_random=int(p["random"]) // 5, seed=seed,
                                               tables=_tables(cfg, xm)), {}
        return bounds.verify_lemma31(part, xm, n_random=int(p["random"]), seed=seed,
                                     tables=_tables(cfg, xm), sweep=p["sweep"]), {}
    if tgt == "phi-harmonic":
        return [bounds.verify_phi_harmonic(x, _tables(cfg, x))], {}
    if tgt == "lemma51":
        return [bounds.verify_lemma51(x, p["theta"], p["V"], _tables(cfg, x))], {}
    if tgt == "large-sieve":
        return bounds.verify_large_sieve(int(p["trials"]), seed=seed), {}
    if tgt == "bilinear":
        return bounds.verify_bilinear(int(p["trials"]), seed=seed), {}
    if tgt == "pv":
        return bounds.verify_pv(int(p["q_max"]), int(p["samples"]), q_min=int(p["q_min"]), seed=seed), {}
    if tgt == "bt":
        xm = p["x_max"]
        return bounds.verify_bt(int(p["samples"]), xm, seed=seed, tables=_tables(cfg, xm)), {}
    if tgt == "s-recombination":
        return bounds.verify_s_recombination(x, p["Q"], _tables(cfg, x)), {}
    if tgt == "bridge":
        return bounds.verify_bridge(x, int(p["Q"]), _tables(cfg, x)), {}
    if tgt == "lifting":
        return bounds.verify_lifting(int(p["Q"]), x, samples=int(p["samples"]), seed=seed,
                                     tables=_tables(cfg, x)), {}
    raise DomainError(f"unknown id {tgt}")


def run_apps(cfg):
    p, tgt = cfg.params, cfg.target
    x, theta = p["x"], p["theta"]
    if tgt == "turan":
        r = apps.turan_sums(x, _tables(cfg, x))
        res = {"sum_omega": r.sum_omega, "sum_omega_sq": r.sum_omega_sq,
               "variance_sum": r.variance_sum, "variance": r.variance, "prime_count": r.prime_count}
        checks = list(r.checks)
        if p["U"] is not None or p["V"] is not None or p["T"] is not None:
            if None in (p["U"], p["V"], p["T"]):
                raise DomainError("--u, --v and --t go together")
            need = max(x, int(p["V"]) ** 2)
            led = apps.turan_rhs_ledger(x, p["U"], p["V"], p["T"], _tables(cfg, need))
            res["pieces"] = led.pieces
            res["piece_bounds"] = led.bounds
            checks += led.checks
        return checks, res
    if tgt == "goldfeld":
        g = apps.goldfeld_sum(x, theta, _tables(cfg, x))
        return g.checks, {"S": g.S, "small": g.small, "full": g.full, "theta_x": g.theta_x,
                          "E1": g.E1, "E2": g.E2, "theta_minus_E1_E2": g.identity_rhs, "S_over_x": g.ratio}
    if tgt == "pfactor":
        return [], {"count": apps.large_factor_count(x, theta, _tables(cfg, x))}
    if tgt == "order":
        o = apps.order_count(x, theta, p["b"], _tables(cfg, x))
        return o.checks, {"count": o.count, "M2": o.M2, "M2_weighted": o.M2_weighted}
    if tgt == "least-prime":
        s = apps.least_prime_scan(x, theta, _tables(cfg, x))
        return [], {"scanned": s.scanned, "witnesses": len(s.witnesses), "first_witness": s.first}
    raise DomainError(f"unknown application {tgt}")


def run_constants(cfg):
    led = default_ledger() if cfg.params["cutoff"] == DEFAULT_CUTOFF else build_ledger(cfg.params["cutoff"])
    cmp_rows = displayed_comparison(led)
    failed = any(r["status"] == "mismatch" for r in cmp_rows)
    if cfg.fmt == "json":
        text = json.dumps({"run": cfg.meta(), "constants": led.as_dict(), "displayed": cmp_rows,
                           "notes": led.notes, "all_match": not failed}, indent=2, sort_keys=True) + "\n"
    elif cfg.fmt == "csv":
        lines = ["name,computed,radius,displayed,tolerance,difference,status"]
        for r in cmp_rows:
            lines.append(",".join("" if r[k] is None else repr(r[k]) if isinstance(r[k], float) else str(r[k])
                                  for k in ("name", "computed", "radius", "displayed", "tolerance",
                                            "difference", "status")))
        text = "\n".join(lines) + "\n"
    else:
        text = led.to_text() + "\n\n" + "\n".join(
            f"{r['name']:18s} {r['status']:9s} computed {r['computed']:.10g} displayed {r['displayed']}"
            for r in cmp_rows) + "\n"
    return text, EXIT_FAIL if failed else EXIT_OK


def _render(cfg, reports, results, elapsed):
    meta = cfg.meta()
    meta["results"] = results
    if cfg.timing:
        meta["elapsed"] = elapsed
    if cfg.fmt == "json":
        return reports_to_json(reports, meta, cfg.timing) + "\n"
    if cfg.fmt == "csv":
        return reports_to_csv(reports, cfg.timing)
    s = summarize(reports)
    lines = [f"# {cfg.command} {cfg.target} seed={cfg.seed}"]
    lines += [f"{k} = {v}" for k, v in results.items()]
    for r in reports:
        params = " ".join(f"{k}={v}" for k, v in r.params.items())
        status = "PASS" if r.holds else "FAIL"
        lines.append(f"{status} {r.ineq} {params} lhs={r.lhs:.10g} rhs={r.rhs:.10g} margin={r.min_margin:.6g}"
                     + (f" ({r.cost:.3f}s)" if cfg.timing else ""))
    lines.append(f"summary: {s['count']} checks, {s['failures']} failures, min margin {s['min_margin']}")
    return "\n".join(lines) + "\n"


def _emit(cfg, text):
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    cfg = _config(ns)
    t0 = time.perf_counter()
    try:
        if cfg.command == "constants":
            text, code = run_constants(cfg)
            _emit(cfg, text)
            return code
        reports, results = (run_verify if cfg.command == "verify" else run_apps)(cfg)
    except CapacityError as e:
        print(f"capacity error: {e}" + (f" (estimate {e.estimate})" if e.estimate else ""), file=sys.stderr)
        return EXIT_CAPACITY
    except (DomainError, PrecisionError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _emit(cfg, _render(cfg, reports, results, time.perf_counter() - t0))
    return EXIT_OK if summarize(reports)["all_hold"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
