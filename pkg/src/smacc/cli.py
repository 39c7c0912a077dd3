"""Command-line front end: simulate, sweep, security, tradeoff.

Every command validates its parameters first, derives everything from an
explicit 64-bit seed, and writes CSV outputs that are byte-identical for
identical (config, seed).  Summary lines go to stdout, diagnostics to
stderr; the exit status is 0 only if every verdict passed.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import tradeoff as tradeoff_mod
from .delivery import decode_user, encode_deliver, measured_rate
from .errors import BoundViolatedError, ParamError, SmaccError, TooLargeError
from .placement import place
from .security import WiretapInstance, mutual_information_oracle, structural_audit
from .system_model import (
    Case,
    FileLibrary,
    memory_accounting,
    min_file_size,
    validate_params,
)
from .traces import (
    write_curves,
    write_delivery_trace,
    write_gap_report,
    write_placement_manifest,
    write_security_report,
)

_DEMAND_STREAM = 0x646D6E64
_GAP_STREAM = 0x67617073
EXHAUSTIVE_DEMAND_LIMIT = 1 << 20


@dataclass
class RunConfig:
    """One command invocation's resolved settings."""

    command: str
    k: int | None = None
    l: int | None = None
    n: int | None = None
    i: int | None = None
    f: str = "auto"
    case: str = "auto"
    seed: int = 1
    demand: str = "random"
    samples: int | None = None
    out: str = "."
    gap: bool = False


_CONFIG_KEYS = {"k", "l", "n", "i", "f", "case", "seed", "demand", "samples", "out", "gap"}


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParamError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ParamError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smacc",
        description="Secure multi-access coded caching simulator and analyzer",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in [
        ("simulate", "place, deliver, decode at every user, and audit one run"),
        ("sweep", "grid of configurations x demand samples with aggregated verdicts"),
        ("security", "exact wiretap mutual-information oracle on a tiny instance"),
        ("tradeoff", "corner points, envelopes, baseline, and gap bounds"),
    ]:
        p = sub.add_parser(name, help=doc)
        p.add_argument("--k", type=int, default=None, help="users/caches (sweep: largest K)")
        p.add_argument("--l", type=int, default=None, help="caches per user")
        p.add_argument("--n", type=int, default=None, help="files in the library")
        p.add_argument("--i", type=int, default=None, help="uncoded data placement parameter")
        p.add_argument("--f", default=None, help="file size in bits, or 'auto'")
        p.add_argument("--case", default=None,
                       choices=["auto", "full-key", "coded-placement"],
                       help="memory point family when i is absent")
        p.add_argument("--seed", type=int, default=None, help="64-bit reproducibility seed")
        p.add_argument("--demand", default=None,
                       help="'random', 'all-distinct', 'exhaustive', or d1,d2,...")
        p.add_argument("--samples", type=int, default=None,
                       help="random demands per config / oracle library samples / gap points")
        p.add_argument("--out", default=None, help="output directory for CSV files")
        p.add_argument("--config", default=None, help="key=value config file (flags win)")
        p.add_argument("--gap", action="store_true", default=None,
                       help="tradeoff: also run the gap-bound check")
    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    file_values = _load_config_file(args.config) if args.config else {}
    for key in _CONFIG_KEYS:
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            value = cli_value
        elif key in file_values:
            raw = file_values[key]
            if key in ("k", "l", "n", "i", "seed", "samples"):
                value = int(raw)
            elif key == "gap":
                value = raw.lower() in ("1", "true", "yes")
            else:
                value = raw
        else:
            continue
        setattr(cfg, key, value)
    return cfg


def _params_from(cfg: RunConfig):
    if cfg.k is None or cfg.l is None or cfg.n is None:
        raise ParamError("--k, --l and --n are required")
    case = None if cfg.case == "auto" else Case(cfg.case)
    if cfg.f == "auto":
        F = min_file_size(cfg.k, cfg.l, i=cfg.i, case=case)
    else:
        F = int(cfg.f)
    return validate_params(K=cfg.k, L=cfg.l, N=cfg.n, F=F, i=cfg.i, case=case)


def _demand_vectors(cfg: RunConfig, params, count: int):
    """Deterministic demand vectors for one configuration."""
    if cfg.demand == "exhaustive":
        if params.N ** params.K > EXHAUSTIVE_DEMAND_LIMIT:
            raise ParamError(
                f"exhaustive demands need N^K <= {EXHAUSTIVE_DEMAND_LIMIT}, "
                f"got {params.N}^{params.K}"
            )
        yield from itertools.product(range(1, params.N + 1), repeat=params.K)
        return
    if cfg.demand == "all-distinct":
        yield tuple(range(1, params.K + 1))
        return
    if cfg.demand == "random":
        rng = np.random.default_rng(
            [cfg.seed, _DEMAND_STREAM, params.K, params.L, params.i or 0]
        )
        for _ in range(count):
            yield tuple(int(x) for x in rng.integers(1, params.N + 1, params.K))
        return
    yield tuple(int(x) for x in cfg.demand.split(","))


def _run_one(params, library, placement, demand) -> dict:
    """Deliver one demand vector, decode at every user, audit and account."""
    delivery = encode_deliver(params, library, placement, demand)
    decode_ok = True
    for k in range(1, params.K + 1):
        got = decode_user(params, placement, delivery, k)
        if not np.array_equal(got, library.file(delivery.demand[k - 1])):
            decode_ok = False
    audit = structural_audit(delivery.transmissions, placement.keyset)
    rate = measured_rate(delivery.transmissions, params.F)
    if params.case is Case.FULL_KEY:
        formula = Fraction(params.K)
    elif params.case is Case.CODED_PLACEMENT:
        formula = Fraction(0)
    else:
        formula = params.K * (1 - Fraction(params.i * params.L, params.K)) ** 2
    accounting = memory_accounting(params)
    bits_ok = all(
        placement.caches.bits_at(c) == accounting.M * params.F
        for c in range(1, params.K + 1)
    )
    return {
        "delivery": delivery,
        "decode_ok": decode_ok,
        "audit": audit,
        "rate": rate,
        "formula": formula,
        "rate_ok": rate == formula,
        "bits_ok": bits_ok,
        "accounting": accounting,
    }


def cmd_simulate(cfg: RunConfig) -> int:
    params = _params_from(cfg)
    if cfg.demand == "exhaustive":
        raise ParamError("simulate runs one demand vector; use sweep for exhaustive demands")
    library = FileLibrary.generate(params.N, params.F, cfg.seed)
    placement = place(params, library, rng_seed=cfg.seed)
    demand = next(iter(_demand_vectors(cfg, params, 1)))
    result = _run_one(params, library, placement, demand)

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    write_placement_manifest(out / "placement_manifest.csv", placement)
    write_delivery_trace(out / "delivery_trace.csv", result["delivery"])

    acc = result["accounting"]
    ok = result["decode_ok"] and result["audit"].passed and result["rate_ok"] and result["bits_ok"]
    print(
        f"case={params.case.value} K={params.K} L={params.L} N={params.N} F={params.F} "
        f"demand={','.join(map(str, demand))} "
        f"M={acc.M} M_D={acc.M_D} M_K={acc.M_K} "
        f"tx={len(result['delivery'].transmissions)} "
        f"rate={result['rate']} formula={result['formula']} "
        f"decode={'OK' if result['decode_ok'] else 'FAIL'} "
        f"audit={'OK' if result['audit'].passed else 'FAIL'} "
        f"bits={'OK' if result['bits_ok'] else 'FAIL'}"
    )
    for violation in result["audit"].violations:
        print(f"audit: {violation}", file=sys.stderr)
    return 0 if ok else 1


def _sweep_configs(cfg: RunConfig):
    k_max = cfg.k if cfg.k is not None else 8
    for K in range(2, k_max + 1):
        N = cfg.n if cfg.n is not None else K
        if N < K:
            continue
        for L in range(1, K):
            yield K, L, None, Case.FULL_KEY
            yield K, L, None, Case.CODED_PLACEMENT
            for i in range(1, K // L + 1):
                yield K, L, i, None


def cmd_sweep(cfg: RunConfig) -> int:
    import csv

    samples = cfg.samples if cfg.samples is not None else 200
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    all_ok = True
    for K, L, i, case in _sweep_configs(cfg):
        N = cfg.n if cfg.n is not None else K
        F = min_file_size(K, L, i=i, case=case)
        params = validate_params(K=K, L=L, N=N, F=F, i=i, case=case)
        library = FileLibrary.generate(N, F, cfg.seed)
        placement = place(params, library, rng_seed=cfg.seed)
        sub = RunConfig(**{**cfg.__dict__, "k": K, "l": L, "n": N, "i": i})
        demands = list(_demand_vectors(sub, params, samples))
        if cfg.demand == "random":
            demands.append(tuple(range(1, K + 1)))  # the all-distinct vector
        failures = {"decode": 0, "rate": 0, "audit": 0, "bits": 0}
        for demand in demands:
            result = _run_one(params, library, placement, demand)
            failures["decode"] += not result["decode_ok"]
            failures["rate"] += not result["rate_ok"]
            failures["audit"] += not result["audit"].passed
            failures["bits"] += not result["bits_ok"]
        ok = not any(failures.values())
        all_ok &= ok
        rows.append([K, L, params.case.value, i if i is not None else "",
                     N, F, len(demands), failures["decode"], failures["rate"],
                     failures["audit"], failures["bits"], "pass" if ok else "fail"])
    with open(out / "sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "l", "case", "i", "n", "f", "demands",
                    "decode_failures", "rate_mismatches", "audit_failures",
                    "bit_mismatches", "verdict"])
        w.writerows(rows)
    print(f"sweep: {len(rows)} configurations, "
          f"{sum(r[6] for r in rows)} deliveries, "
          f"{'all pass' if all_ok else 'FAILURES'}")
    return 0 if all_ok else 1


def cmd_security(cfg: RunConfig) -> int:
    params = _params_from(cfg)
    demand = (
        tuple(int(x) for x in cfg.demand.split(","))
        if cfg.demand not in ("random", "all-distinct", "exhaustive")
        else tuple(range(1, params.K + 1))
    )
    samples = cfg.samples if cfg.samples is not None else 128
    file_bits = params.N * params.F
    key_bits = params.key_count * params.key_bits
    mode = "exhaustive" if file_bits + key_bits <= 16 else "sampled"

    secure = mutual_information_oracle(WiretapInstance(
        params=params, demand=demand, file_mode=mode,
        sample_count=samples, seed=cfg.seed, keyed=True,
    ))
    unkeyed = mutual_information_oracle(WiretapInstance(
        params=params, demand=demand, file_mode=mode,
        sample_count=samples, seed=cfg.seed, keyed=False,
    ))

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = [
        (f"secure-{mode}", secure, "zero" if secure.independent else "positive"),
        (f"unkeyed-{mode}", unkeyed, "zero" if unkeyed.independent else "positive"),
    ]
    write_security_report(out / "security_report.csv", rows)
    ok = secure.independent and unkeyed.positive
    print(
        f"security: mode={mode} secure I={secure.value} "
        f"unkeyed I={'>0' if unkeyed.value is None else unkeyed.value} "
        f"{'pass' if ok else 'FAIL'}"
    )
    return 0 if ok else 1


def cmd_tradeoff(cfg: RunConfig) -> int:
    if cfg.k is None or cfg.l is None or cfg.n is None:
        raise ParamError("--k, --l and --n are required")
    K, L, N = cfg.k, cfg.l, cfg.n
    corners = tradeoff_mod.corner_points(K, L, N)
    curves = {
        "secure": tradeoff_mod.envelope(corners),
        "insecure_baseline": tradeoff_mod.insecure_envelope(K, L, N),
    }
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    write_curves(out / "curve.csv", K, L, N, curves)
    print(f"tradeoff: {len(corners)} secure corners, "
          f"envelope [{curves['secure'].min_memory}, {curves['secure'].max_memory}]")
    if not cfg.gap:
        return 0

    if 2 * L < K or N < 2 * K:
        raise ParamError(f"gap check requires L >= K/2 and N >= 2K, got (K={K}, L={L}, N={N})")
    count = cfg.samples if cfg.samples is not None else 50
    rng = np.random.default_rng([cfg.seed, _GAP_STREAM, K, L, N])
    span = Fraction(2 * N, K) - 1
    points = [Fraction(1), Fraction(2 * N, K)]
    points += [1 + span * Fraction(int(r), 1_000_000) for r in rng.integers(0, 1_000_001, count)]
    evaluation = tradeoff_mod.gap_check(K, L, N, sorted(points))
    write_gap_report(out / "gap.csv", evaluation)
    print(f"gap: bound={evaluation.bound} vs-optimal<={evaluation.vs_optimal_bound} "
          f"samples={len(evaluation.samples)} {'pass' if evaluation.passed else 'FAIL'}")
    return 0 if evaluation.passed else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        handler = {
            "simulate": cmd_simulate,
            "sweep": cmd_sweep,
            "security": cmd_security,
            "tradeoff": cmd_tradeoff,
        }[cfg.command]
        return handler(cfg)
    except (ParamError, TooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BoundViolatedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SmaccError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
