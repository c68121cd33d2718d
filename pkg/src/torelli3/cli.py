"""Command-line frontend.

Exit codes: 0 success (or injective), 1 negative verification result,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import torelli
from .family import (FreeActionViolation, NotNormalizableOverField, ParamPoint, ParamsError,
                     SamplingError, build_pair, load_params, normalize, random_params)
from .geomchecks import DEFAULT_PRIMES, free_action_check, smooth_scan
from .quotient import weight_dims_table
from .scalars import QQ, parse_field, scalar_to_str

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2

COMMANDS = ("verify", "scan", "certificate", "matrices", "dims", "check-action", "smooth-scan")
EMIT_CHOICES = ("l1", "l2", "l3", "l4", "l5", "all")
SCAN_COLUMNS = ("seed", "field", "free_action", "generic_flags", "rank_A", "rank_Dprime",
                "detL5_nonzero", "conclusion")


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    params: str | None
    random: bool
    seed: int
    bound: int
    field: str | None
    samples: int
    primes: tuple[int, ...] | None
    out: str | None
    symbolic: bool
    emit: str
    verbose: bool


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torelli3",
                                description="Exact checks of infinitesimal Torelli for the "
                                            "Z/3-symmetric (3,3) complete-intersection family.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--params", metavar="PATH", help="parameter JSON file")
    p.add_argument("--random", action="store_true", help="sample a random normalized point")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--bound", type=int, default=9, metavar="B")
    p.add_argument("--field", default=None, metavar="rational|fp:P")
    p.add_argument("--samples", type=int, default=100, metavar="N")
    p.add_argument("--primes", default=None, metavar="P1,P2,...")
    p.add_argument("--out", default=None, metavar="PATH")
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--emit", choices=EMIT_CHOICES, default="all")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def parse_config(argv) -> CliConfig:
    ns = build_parser().parse_args(argv)
    primes = None
    if ns.primes is not None:
        try:
            primes = tuple(int(x) for x in ns.primes.split(",") if x.strip())
        except ValueError as exc:
            raise UsageError(f"bad --primes list: {ns.primes}") from exc
        if not primes:
            raise UsageError("--primes is empty")
    if ns.params and ns.random:
        raise UsageError("give exactly one of --params and --random")
    if ns.bound < 1:
        raise UsageError("--bound must be >= 1")
    if ns.samples < 1:
        raise UsageError("--samples must be >= 1")
    if ns.field is not None:
        try:
            parse_field(ns.field)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return CliConfig(ns.command, ns.params, ns.random, ns.seed, ns.bound, ns.field,
                     ns.samples, primes, ns.out, ns.symbolic, ns.emit, ns.verbose)


def _field(cfg: CliConfig):
    return parse_field(cfg.field) if cfg.field else QQ


def resolve_point(cfg: CliConfig, required: bool = True) -> ParamPoint | None:
    if cfg.params:
        try:
            p = load_params(cfg.params)
            if cfg.field:
                p = p.change_ring(_field(cfg))
        except (ParamsError, ValueError, ZeroDivisionError) as exc:
            raise UsageError(str(exc)) from exc
        return p
    if cfg.random:
        return random_params(cfg.seed, _field(cfg), cfg.bound)
    if required:
        raise UsageError("a parameter source is required: --params PATH or --random")
    return None


def _emit(cfg: CliConfig, payload, out=None):
    text = json.dumps(payload, indent=2, default=str)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        (out or sys.stdout).write(text + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_verify(cfg: CliConfig) -> int:
    p = resolve_point(cfg)
    witness = None
    if p.model == "general26":
        try:
            p, witness = normalize(p)
        except FreeActionViolation as exc:
            report = {"conclusion": "non-generic-input", "failed_stage": "free_action",
                      "free_action": free_action_check(build_pair(p)).to_json(),
                      "error": str(exc)}
            _emit(cfg, report)
            print(f"conclusion: non-generic-input (free_action: {exc})")
            return EXIT_NEGATIVE
        except NotNormalizableOverField as exc:
            print(f"cannot normalize over {p.ring}: {exc}", file=sys.stderr)
            return EXIT_NEGATIVE
    try:
        smooth = smooth_scan(build_pair(p), cfg.primes) if cfg.primes else None
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = torelli.verification_report(p, seed=cfg.seed if cfg.random else None,
                                         smooth=smooth)
    if witness is not None:
        report["normalization"] = witness.to_json()
    ranks = report["ranks"]
    print(f"field: {report['field']}")
    print(f"free action: {report['free_action']['passed']}")
    if ranks:
        print("ranks: " + ", ".join(f"{k}={v}" for k, v in ranks.items()))
    print(f"euler in ker C: {report['euler_in_kerC']}")
    print(f"det L5 nonzero: {report['detL5_nonzero']}")
    if report["failed_stage"]:
        print(f"failed stage: {report['failed_stage']}")
    print(f"conclusion: {report['conclusion']}")
    if cfg.out:
        _emit(cfg, report)
    else:
        print(json.dumps(report, indent=2, default=str))
    return EXIT_OK if report["conclusion"] == "injective" else EXIT_NEGATIVE


def scan_row(seed: int, field: str, bound: int) -> dict:
    ring = parse_field(field)
    row = {"seed": seed, "field": str(ring)}
    try:
        t = random_params(seed, ring, bound)
    except SamplingError:
        return {**row, "free_action": False, "generic_flags": False, "rank_A": "",
                "rank_Dprime": "", "detL5_nonzero": "", "conclusion": "sampling-failed"}
    v = torelli.torelli_verdict(t)
    return {**row,
            "free_action": bool(v.free_action and v.free_action["passed"]),
            "generic_flags": all(v.generic_flags.values()) if v.generic_flags else False,
            "rank_A": v.rank_A if v.rank_A is not None else "",
            "rank_Dprime": v.rank_Dprime if v.rank_Dprime is not None else "",
            "detL5_nonzero": v.chain.det_L5_nonzero if v.chain is not None else "",
            "conclusion": v.conclusion}


def _scan_worker(args):
    return scan_row(*args)


def scan_rows(seeds, field: str, bound: int, workers: int | None = None) -> list[dict]:
    jobs = [(s, field, bound) for s in seeds]
    if workers == 1 or len(jobs) == 1:
        rows = [_scan_worker(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_scan_worker, jobs, chunksize=4))
    return sorted(rows, key=lambda r: r["seed"])


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def cmd_scan(cfg: CliConfig) -> int:
    if cfg.params:
        raise UsageError("scan samples random points; --params is not accepted")
    field = cfg.field or "rational"
    seeds = range(cfg.seed, cfg.seed + cfg.samples)
    rows = scan_rows(seeds, field, cfg.bound)
    text = rows_to_csv(rows)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    degenerate = sum(r["conclusion"] != "injective" for r in rows)
    full = sum(r["rank_Dprime"] == 24 for r in rows)
    print(f"samples={len(rows)} rank_Dprime_24={full} non_injective={degenerate} "
          f"degeneracy_frequency={degenerate / len(rows):.4f}", file=sys.stderr)
    return EXIT_OK


def cmd_certificate(cfg: CliConfig) -> int:
    cert = torelli.det_l5_certificate()
    _emit(cfg, cert.to_json())
    return EXIT_OK if cert.passed else EXIT_NEGATIVE


def _matrix_json(M) -> dict:
    return M.to_json()


def cmd_matrices(cfg: CliConfig) -> int:
    wanted = EMIT_CHOICES[:-1] if cfg.emit == "all" else (cfg.emit,)
    if cfg.symbolic:
        if cfg.params or cfg.random:
            raise UsageError("--symbolic takes no parameter source")
        mats = torelli.symbolic_chain()
        payload = {"symbolic": True}
    else:
        p = resolve_point(cfg)
        if p.model != "normalized14":
            p, _ = normalize(p)
        split = torelli.map_C(build_pair(p))
        special = torelli.map_C(build_pair(p.replace(e1=0, g2=0)))
        if not (split.direct_sum and special.direct_sum):
            print("M and M' do not span at this point", file=sys.stderr)
            return EXIT_NEGATIVE
        mats = torelli.chain_L(split.L1, special.L1).matrices
        payload = {"symbolic": False,
                   "params": {k: scalar_to_str(v) for k, v in p.as_dict().items()},
                   "field": str(p.ring)}
    payload["matrices"] = {k: _matrix_json(mats[k]) for k in wanted}
    _emit(cfg, payload)
    return EXIT_OK


def cmd_dims(cfg: CliConfig) -> int:
    p = resolve_point(cfg)
    pair = build_pair(p)
    table = weight_dims_table(pair, range(0, 5))
    payload = {"params": {k: scalar_to_str(v) for k, v in p.as_dict().items()},
               "field": str(p.ring), "pieces": table}
    if all(row["generic"] for row in table if row["degree"] >= 3):
        payload["h1_theta"] = torelli.h1_theta_report(pair).to_json()
    _emit(cfg, payload)
    return EXIT_OK


def cmd_check_action(cfg: CliConfig) -> int:
    p = resolve_point(cfg)
    rep = free_action_check(build_pair(p))
    _emit(cfg, rep.to_json())
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


def cmd_smooth_scan(cfg: CliConfig) -> int:
    p = resolve_point(cfg)
    try:
        rep = smooth_scan(build_pair(p), cfg.primes or DEFAULT_PRIMES)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(cfg, rep.to_json())
    return EXIT_OK if rep.verdict == "no-singular-points" else EXIT_NEGATIVE


HANDLERS = {
    "verify": cmd_verify, "scan": cmd_scan, "certificate": cmd_certificate,
    "matrices": cmd_matrices, "dims": cmd_dims, "check-action": cmd_check_action,
    "smooth-scan": cmd_smooth_scan,
}


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # argparse
        return EXIT_USAGE if exc.code else EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SamplingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (FreeActionViolation, NotNormalizableOverField) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
