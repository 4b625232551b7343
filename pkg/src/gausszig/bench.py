"""Microbenchmark harness: warmup then timed iterations, ns/op with t-CIs.

One benchmark condition pairs a sampler with a source. Warmup iterations run
on throwaway state (they also absorb JIT compilation, the analogue of VM
warmup); measurement restarts from the configured seed and times tight batch
fills, at least 10^5 ops per timer read. A fixed-length witness stream is
checksummed before timing so the reported checksum is deterministic under the
seed no matter how many ops the wall clock allows.

Everything runs single-threaded; one condition at a time.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .config import DEFAULT_SEED
from .samplers import make_sampler, require_sanctioned
from .sources import make_source
from .stats import regularized_beta

#: ops per timer read; large enough to keep timer overhead below 0.1%
BATCH_OPS = 1 << 17
#: length of the deterministic checksum witness stream
WITNESS_OPS = 1 << 20
#: coarsest acceptable perf_counter_ns resolution
MAX_TIMER_RESOLUTION_NS = 1_000


class TimerResolutionError(RuntimeError):
    """The monotonic timer is too coarse to benchmark with."""


@dataclass
class BenchConfig:
    """Iteration plan and confidence level for one benchmark run."""

    warmup_iters: int = 5
    warmup_secs: float = 10.0
    measure_iters: int = 5
    measure_secs: float = 10.0
    confidence: float = 0.999
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.measure_iters < 2:
            raise ValueError("need at least 2 measurement iterations for a CI")
        if self.warmup_iters < 0:
            raise ValueError("warmup_iters must be >= 0")
        if self.warmup_secs <= 0 or self.measure_secs <= 0:
            raise ValueError("iteration durations must be positive")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must be in (0, 1)")

    @classmethod
    def paper(cls, seed: int = DEFAULT_SEED) -> "BenchConfig":
        return cls(seed=seed)

    @classmethod
    def smoke(cls, seed: int = DEFAULT_SEED) -> "BenchConfig":
        return cls(warmup_iters=2, warmup_secs=0.1,
                   measure_iters=2, measure_secs=0.1, seed=seed)


@dataclass
class BenchResult:
    """ns/op point estimate with CI half-width and raw iteration data."""

    sampler_id: str
    source_id: str
    ns_per_op: float
    ci_half_width: float
    per_iteration_ns_per_op: list
    ops_total: int
    checksum: int
    seed: int
    confidence: float
    engine_used: str

    def to_dict(self) -> dict:
        return {
            "sampler_id": self.sampler_id,
            "source_id": self.source_id,
            "ns_per_op": self.ns_per_op,
            "ci_half_width": self.ci_half_width,
            "per_iteration_ns_per_op": list(self.per_iteration_ns_per_op),
            "ops_total": self.ops_total,
            "checksum": self.checksum,
            "seed": self.seed,
            "confidence": self.confidence,
            "engine_used": self.engine_used,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchResult":
        return cls(**doc)


@dataclass
class ComparisonRow:
    """Percent-faster relation between two results on the same source."""

    baseline: BenchResult
    candidate: BenchResult
    percent_faster: float = field(init=False)

    def __post_init__(self):
        self.percent_faster = percent_faster(
            self.baseline.ns_per_op, self.candidate.ns_per_op)


def student_t_quantile(confidence: float, dof: int) -> float:
    """Two-sided Student-t quantile for the given confidence level.

    Inverts the t survival function, expressed through the regularized
    incomplete beta, by bisection; works for any level in (0, 1).
    """
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must be in (0, 1), got {confidence}")
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    upper_tail = 0.5 * (1.0 - confidence)

    def sf(t: float) -> float:
        return 0.5 * regularized_beta(0.5 * dof, 0.5, dof / (dof + t * t))

    lo, hi = 0.0, 1e8
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if sf(mid) > upper_tail:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def confidence_interval(xs, level: float):
    """Two-sided Student-t CI (lo, hi) for the mean of xs."""
    xs = list(xs)
    n = len(xs)
    if n < 2:
        raise ValueError(f"confidence interval needs n >= 2, got {n}")
    mean = sum(xs) / n
    var = sum((x - mean) ** 2 for x in xs) / (n - 1)
    half = student_t_quantile(level, n - 1) * math.sqrt(var / n)
    return mean - half, mean + half


def percent_faster(baseline_ns: float, candidate_ns: float) -> float:
    """How much faster the candidate is than the baseline, in percent."""
    if baseline_ns <= 0.0 or candidate_ns <= 0.0:
        raise ValueError("ns/op inputs must be positive")
    return 100.0 * (1.0 - candidate_ns / baseline_ns)


def timer_resolution_ns() -> int:
    """Smallest positive delta observed between successive timer reads."""
    best = None
    prev = time.perf_counter_ns()
    for _ in range(2000):
        now = time.perf_counter_ns()
        if now > prev and (best is None or now - prev < best):
            best = now - prev
        prev = now
    return best if best is not None else MAX_TIMER_RESOLUTION_NS + 1


def _checksum_fold(buf: np.ndarray) -> int:
    return int(np.bitwise_xor.reduce(buf.view(np.uint64)))


def _fresh_pair(sampler_id: str, source_id: str, seed: int):
    return make_sampler(sampler_id), make_source(source_id, seed)


def run_benchmark(sampler_id: str, source_id: str,
                  cfg: BenchConfig | None = None,
                  engine_mode: str = "auto") -> BenchResult:
    """Time one sampler/source pairing per the configured iteration plan."""
    cfg = cfg if cfg is not None else BenchConfig()
    require_sanctioned(source_id, sampler_id)

    if engine_mode not in ("auto", "numba", "python"):
        raise ValueError(f"unknown engine mode: {engine_mode!r}")
    use_numba = engine_mode in ("auto", "numba") and engine.available()
    if engine_mode == "numba" and not engine.available():
        raise RuntimeError("numba engine requested but not available")

    if timer_resolution_ns() > MAX_TIMER_RESOLUTION_NS:
        raise TimerResolutionError(
            f"timer resolution coarser than {MAX_TIMER_RESOLUTION_NS} ns")

    buf = np.empty(BATCH_OPS, dtype=np.float64)

    def fill(sampler, source):
        if use_numba:
            engine.fill_gaussians(sampler, source, buf)
        else:
            for j in range(BATCH_OPS):
                buf[j] = sampler.next_gaussian(source)

    # deterministic checksum witness, outside the timed phase
    sampler, source = _fresh_pair(sampler_id, source_id, cfg.seed)
    witness = np.empty(WITNESS_OPS, dtype=np.float64)
    if use_numba:
        engine.fill_gaussians(sampler, source, witness)
    else:
        for j in range(WITNESS_OPS):
            witness[j] = sampler.next_gaussian(source)
    checksum = _checksum_fold(witness)

    # warmup on throwaway state (includes JIT compilation)
    sampler, source = _fresh_pair(sampler_id, source_id, cfg.seed)
    for _ in range(cfg.warmup_iters):
        t_end = time.perf_counter() + cfg.warmup_secs
        while time.perf_counter() < t_end:
            fill(sampler, source)

    # measurement from a fresh seed-determined stream
    sampler, source = _fresh_pair(sampler_id, source_id, cfg.seed)
    per_iteration = []
    ops_total = 0
    elision_guard = 0
    for _ in range(cfg.measure_iters):
        iter_ns = 0
        iter_ops = 0
        t_end = time.perf_counter() + cfg.measure_secs
        while True:
            t0 = time.perf_counter_ns()
            fill(sampler, source)
            iter_ns += time.perf_counter_ns() - t0
            iter_ops += BATCH_OPS
            elision_guard ^= _checksum_fold(buf)
            if time.perf_counter() >= t_end:
                break
        per_iteration.append(iter_ns / iter_ops)
        ops_total += iter_ops

    lo, hi = confidence_interval(per_iteration, cfg.confidence)
    return BenchResult(
        sampler_id=sampler_id,
        source_id=source_id,
        ns_per_op=sum(per_iteration) / len(per_iteration),
        ci_half_width=0.5 * (hi - lo),
        per_iteration_ns_per_op=per_iteration,
        ops_total=ops_total,
        checksum=checksum,
        seed=cfg.seed,
        confidence=cfg.confidence,
        engine_used="numba" if use_numba else "python",
    )


_CSV_HEADER = "source,sampler,ns_per_op,ci_half_width,iters,ops_total,seed"


def render_table(rows, fmt: str) -> str:
    """Render results as markdown (sources x samplers), CSV, or JSON."""
    rows = list(rows)
    if not rows:
        raise ValueError("no benchmark results to render")
    if fmt == "json":
        return json.dumps([r.to_dict() for r in rows], indent=2)
    if fmt == "csv":
        lines = [_CSV_HEADER]
        for r in rows:
            lines.append(
                f"{r.source_id},{r.sampler_id},{r.ns_per_op:.3f},"
                f"{r.ci_half_width:.3f},{len(r.per_iteration_ns_per_op)},"
                f"{r.ops_total},{r.seed}")
        return "\n".join(lines)
    if fmt == "md":
        samplers = []
        for r in rows:
            if r.sampler_id not in samplers:
                samplers.append(r.sampler_id)
        sources = []
        for r in rows:
            if r.source_id not in sources:
                sources.append(r.source_id)
        cell = {(r.source_id, r.sampler_id): r for r in rows}
        header = "| PRNG | " + " | ".join(samplers) + " |"
        rule = "|---" * (len(samplers) + 1) + "|"
        lines = [header, rule]
        for src in sources:
            cells = []
            for sid in samplers:
                r = cell.get((src, sid))
                cells.append(
                    f"{r.ns_per_op:.3f} ± {r.ci_half_width:.3f} ns/op"
                    if r is not None else "n/a")
            lines.append("| " + src + " | " + " | ".join(cells) + " |")
        return "\n".join(lines)
    raise ValueError(f"unknown table format: {fmt!r}")
