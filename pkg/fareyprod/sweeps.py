"""Command bodies shared by the CLI: each turns a RunConfig into rows."""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple, TypeVar

import numpy as np
from sympy import primerange

from .config_handler import RunConfig
from .exceptions import ConfigError
from .mainterms import JumpReport, jump_correlation_report, split_series
from .oracle import oracle_ord_f_series, oracle_ord_g_series
from .output import config_comment, format_ratio
from .products import (
    farey_table,
    integer_farey_scan,
    nu_b_f_series,
    ord_f_direct,
    ord_f_inversion,
    ord_f_psq_closed,
    ord_g_series,
    property_scan,
)
from .sieves import TABLE_HEADER, build_tables, table_rows

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class SweepResult:
    header: List[str]
    rows: List[list]
    summary: List[str] = field(default_factory=list)
    mismatches: int = 0
    comment: str = ""


def parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    """Map fn over items in worker processes, keeping the input order"""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


def _chunks(lo: int, hi: int, parts: int) -> List[Tuple[int, int]]:
    size = max(1, math.ceil((hi - lo + 1) / max(parts, 1)))
    return [(a, min(a + size - 1, hi)) for a in range(lo, hi + 1, size)]


def _direct_chunk(args: Tuple[int, int, int]) -> List[int]:
    p, lo, hi = args
    t = build_tables(hi)
    return [ord_f_direct(p, n, t) for n in range(lo, hi + 1)]


def _psq_chunk(primes: List[int]) -> List[Tuple[int, int, int]]:
    t = build_tables(max(primes) ** 2 - 1)
    return [(p, ord_f_psq_closed(p, t), ord_f_inversion(p, p * p - 1, t)) for p in primes]


def _comment(cfg: RunConfig) -> str:
    return config_comment(cfg.model_dump(), skip=["output_path", "format", "threads"])


def _count_mismatches(columns: Dict[str, np.ndarray]) -> int:
    stacked = np.vstack(list(columns.values()))
    return int((stacked != stacked[0]).any(axis=0).sum())


def _columns_result(n_max: int, columns: Dict[str, np.ndarray]) -> SweepResult:
    """n,value for one method; n,<method>... plus a mismatch count for several"""
    ns = np.arange(1, n_max + 1)
    if len(columns) == 1:
        (values,) = columns.values()
        rows = [[int(n), int(v)] for n, v in zip(ns, values)]
        return SweepResult(header=["n", "value"], rows=rows)
    mismatches = _count_mismatches(columns)
    rows = [[int(n)] + [int(c[i]) for c in columns.values()] for i, n in enumerate(ns)]
    return SweepResult(
        header=["n"] + list(columns),
        rows=rows,
        summary=[f"mismatches: {mismatches}"],
        mismatches=mismatches,
    )


def run_sieve(cfg: RunConfig) -> SweepResult:
    t = build_tables(cfg.n_max)
    return SweepResult(header=list(TABLE_HEADER), rows=list(table_rows(t)))


def run_ordg(cfg: RunConfig) -> SweepResult:
    b = cfg.prime if cfg.prime is not None else cfg.base
    columns: Dict[str, np.ndarray] = {}
    for method in cfg.methods:
        if method == "oracle":
            columns[method] = oracle_ord_g_series(b, cfg.n_max, cfg.oracle_ceiling)[1:]
        else:
            # Ḡₙ has a single closed form; inversion and direct both read it
            columns[method] = ord_g_series(b, (1, cfg.n_max)).values
    return _columns_result(cfg.n_max, columns)


def run_ordf(cfg: RunConfig) -> SweepResult:
    n_max = cfg.n_max
    if cfg.base is not None:
        t = build_tables(n_max)
        return _columns_result(n_max, {"inversion": nu_b_f_series(cfg.base, (1, n_max), t).values})

    p = cfg.prime
    columns: Dict[str, np.ndarray] = {}
    for method in cfg.methods:
        logger.debug("ordf p=%d n<=%d by %s", p, n_max, method)
        if method == "inversion":
            columns[method] = nu_b_f_series(p, (1, n_max), build_tables(n_max)).values
        elif method == "direct":
            tasks = [(p, lo, hi) for lo, hi in _chunks(1, n_max, cfg.threads)]
            parts = parallel_map(_direct_chunk, tasks, cfg.threads)
            columns[method] = np.array([v for part in parts for v in part], dtype=np.int64)
        else:
            columns[method] = oracle_ord_f_series(p, n_max, cfg.oracle_ceiling)[1:]
    return _columns_result(n_max, columns)


def run_table(cfg: RunConfig) -> SweepResult:
    t = build_tables(cfg.n_max)
    rows = [
        [row.r, row.n, row.ord, format_ratio(row.ratio), format_ratio(row.ratio_log)]
        for row in farey_table(cfg.prime, cfg.max_power, t)
    ]
    return SweepResult(header=["r", "N", "ord", "ord_over_N", "ord_over_NlogN"], rows=rows)


def run_remainder(cfg: RunConfig) -> SweepResult:
    lo = 2 if cfg.kind == "mikolas" else 1
    if cfg.n_max < lo:
        raise ConfigError(f"--kind {cfg.kind} needs --n-max >= {lo}")
    t = build_tables(cfg.n_max)
    series = split_series(cfg.kind, (lo, cfg.n_max), t, p=cfg.prime)
    peak = float(np.abs(series.remainder).max())
    return SweepResult(
        header=series.header(), rows=series.rows(), summary=[f"max |remainder|: {peak:.12g}"]
    )


def _scan_integers(cfg: RunConfig) -> SweepResult:
    found = integer_farey_scan(cfg.n_max, build_tables(cfg.n_max))
    largest = found[-1] if found else "none"
    return SweepResult(
        header=["n"],
        rows=[[n] for n in found],
        summary=[f"integral F̄ₙ for {len(found)} values of n <= {cfg.n_max}, largest {largest}"],
    )


def _scan_psq(cfg: RunConfig) -> SweepResult:
    primes = [int(p) for p in primerange(3, cfg.p_max + 1)]
    if not primes:
        raise ConfigError(f"no odd primes up to {cfg.p_max}")
    parts = max(1, min(cfg.threads, len(primes)))
    # interleave so every chunk mixes small and large primes
    chunks = [primes[i::parts] for i in range(parts)]
    results = sorted(r for chunk in parallel_map(_psq_chunk, chunks, cfg.threads) for r in chunk)

    rows = []
    positive = mismatches = 0
    ratios = []
    for p, closed, inverted in results:
        n = p * p - 1
        ratio = closed / (n * math.log(n) / math.log(p))
        ratios.append(ratio)
        positive += closed > 0
        mismatches += closed != inverted
        rows.append([p, n, closed, inverted, ratio])
    return SweepResult(
        header=["p", "N", "closed", "inversion", "ord_over_NlogN"],
        rows=rows,
        summary=[
            f"primes: {len(results)}",
            f"positive values: {positive}",
            f"min ord/(N log_p N): {min(ratios):.6f}",
            f"mismatches: {mismatches}",
        ],
        mismatches=mismatches,
    )


def _scan_properties(cfg: RunConfig) -> SweepResult:
    report = property_scan(cfg.prime, cfg.n_max, build_tables(cfg.n_max))
    p = report.prime
    rows: List[list] = [["P1", k, p**k - 1, v] for k, v in report.p1_values.items()]
    rows += [["P2", k, p**k, v] for k, v in report.p2_values.items()]
    pos, neg, zero = report.fractions()
    return SweepResult(
        header=["property", "k", "n", "ord"],
        rows=rows,
        summary=[
            f"P1 violations (ord > 0 at p^k - 1): {report.p1_violations or 'none'}",
            f"P1 strict violations (ord >= 0 at p^k - 1, k >= 2): "
            f"{report.p1_strict_violations or 'none'}",
            f"P2 violations (ord <= 0 at p^k): {report.p2_violations or 'none'}",
            f"P3 positive {report.positive} ({pos:.4f}), negative {report.negative} "
            f"({neg:.4f}), zero {report.zero} ({zero:.4f})",
            f"P4 max |ord|/(n log_p n): {report.p4_max_ratio:.6f} "
            f"(max {report.p4_max_positive:.6f}, min {report.p4_min_negative:.6f})",
        ],
    )


def run_scan(cfg: RunConfig) -> SweepResult:
    if cfg.scan == "integers":
        return _scan_integers(cfg)
    if cfg.scan == "psq":
        return _scan_psq(cfg)
    return _scan_properties(cfg)


def run_jumps(cfg: RunConfig) -> SweepResult:
    report: JumpReport = jump_correlation_report(cfg.prime, cfg.n_max, build_tables(cfg.n_max))
    return SweepResult(
        header=list(JumpReport.HEADER),
        rows=report.rows,
        summary=[
            f"threshold R_inf: {report.threshold_inf:.6g}",
            f"threshold -R_p1: {report.threshold_p:.6g}",
            f"jumps R_inf: {len(report.jumps_inf)}, -R_p1: {len(report.jumps_p)}, "
            f"common: {len(report.common)}",
            f"median |jump -R_p1| / |jump R_inf|: {report.median_ratio:.4f}",
        ],
    )


COMMANDS: Dict[str, Callable[[RunConfig], SweepResult]] = {
    "sieve": run_sieve,
    "ordg": run_ordg,
    "ordf": run_ordf,
    "table": run_table,
    "remainder": run_remainder,
    "scan": run_scan,
    "jumps": run_jumps,
}


def run_command(cfg: RunConfig) -> SweepResult:
    """Core sweep logic shared by every CLI command"""
    result = COMMANDS[cfg.command](cfg)
    result.comment = _comment(cfg)
    logger.debug("%s produced %d rows", cfg.command, len(result.rows))
    return result
