"""Compiled batch kernels for the samplers, bit-identical to the Python path.

The benchmark harness measures these kernels; bulk generation also uses them
when the source supports it. Every kernel mirrors the reference samplers
operation for operation (same draw order, same float expressions), so a batch
fill produces exactly the stream the per-call Python path would. Tests pin
that equivalence.

Kernels are compiled per (sampler, source) pair on first use and cached on
disk by numba.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .samplers import (
    GaussianSampler,
    ModifiedZigguratSampler,
    PolarSampler,
    ZigguratSampler,
)
from .sources import Lcg48, SplitMix64, UniformSource
from .tables import ZigguratTables

try:
    from numba import njit, uint64, float64

    AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a hard dependency
    AVAILABLE = False

_UNIT_SCALE = 1.1102230246251565e-16  # 2^-53
_GUARD = 1_000_000

# LCG double-step constants: one u64 draw advances the 48-bit state twice,
# and a*(a*s + c) + c == a2*s + c2 (mod 2^48) lets both multiplies issue
# independently.
_LCG_A2 = 0xBB20B4600A69
_LCG_C2 = 0x40942DE6BA


def available() -> bool:
    return AVAILABLE


if AVAILABLE:

    @njit(cache=True)
    def _lcg_step(state):
        s = state[0]
        t1 = (uint64(0x5DEECE66D) * s + uint64(0xB)) & uint64(0xFFFFFFFFFFFF)
        t2 = (uint64(0xBB20B4600A69) * s + uint64(0x40942DE6BA)) & uint64(0xFFFFFFFFFFFF)
        state[0] = t2
        return ((t1 >> uint64(16)) << uint64(32)) | (t2 >> uint64(16))

    @njit(cache=True)
    def _sm_step(state):
        s = state[0] + state[1]
        state[0] = s
        z = (s ^ (s >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)
        return z ^ (z >> uint64(31))

    def _make_fill_u64(step):
        @njit(cache=True)
        def fill(state, out):
            for j in range(out.shape[0]):
                out[j] = step(state)
        return fill

    def _make_fill_zig(step):
        @njit(cache=True)
        def fill(state, out, ktab, wtab, ytab, r, idx_shift, idx_mask, m_mask):
            for j in range(out.shape[0]):
                done = False
                for _ in range(_GUARD):
                    u = step(state)
                    i = (u >> idx_shift) & idx_mask
                    m = u & m_mask
                    sgn = 1.0 - 2.0 * float64(u >> uint64(63))
                    if m < ktab[i]:
                        out[j] = float64(m) * wtab[i] * sgn
                        done = True
                        break
                    if i == uint64(0):
                        for _ in range(_GUARD):
                            u1 = float64(step(state) >> uint64(11)) * _UNIT_SCALE
                            u2 = float64(step(state) >> uint64(11)) * _UNIT_SCALE
                            if u1 <= 0.0 or u2 <= 0.0:
                                continue
                            xx = -math.log(u1) / r
                            y = -math.log(u2)
                            if 2.0 * y > xx * xx:
                                out[j] = (r + xx) * sgn
                                done = True
                                break
                        if not done:
                            raise RuntimeError("tail sampler exceeded its iteration guard")
                        break
                    x = float64(m) * wtab[i]
                    y = ytab[i] + (float64(step(state) >> uint64(11)) * _UNIT_SCALE) * (ytab[i + 1] - ytab[i])
                    if y < math.exp(-0.5 * x * x):
                        out[j] = x * sgn
                        done = True
                        break
                if not done:
                    raise RuntimeError("ziggurat exceeded its iteration guard")
        return fill

    def _make_fill_mzig(step):
        @njit(cache=True)
        def fill(state, out, ktab, wtab, ytab, r, idx_mask, sign_bit, m_shift):
            for j in range(out.shape[0]):
                done = False
                for _ in range(_GUARD):
                    u = step(state)
                    i = u & idx_mask
                    m = u >> m_shift
                    sgn = 1.0 - 2.0 * float64((u >> sign_bit) & uint64(1))
                    if m < ktab[i]:
                        out[j] = float64(m) * wtab[i] * sgn
                        done = True
                        break
                    if i == uint64(0):
                        for _ in range(_GUARD):
                            u1 = float64(step(state) >> uint64(11)) * _UNIT_SCALE
                            u2 = float64(step(state) >> uint64(11)) * _UNIT_SCALE
                            if u1 <= 0.0 or u2 <= 0.0:
                                continue
                            xx = -math.log(u1) / r
                            y = -math.log(u2)
                            if 2.0 * y > xx * xx:
                                out[j] = (r + xx) * sgn
                                done = True
                                break
                        if not done:
                            raise RuntimeError("tail sampler exceeded its iteration guard")
                        break
                    x = float64(m) * wtab[i]
                    y = ytab[i] + (float64(step(state) >> uint64(11)) * _UNIT_SCALE) * (ytab[i + 1] - ytab[i])
                    if y < math.exp(-0.5 * x * x):
                        out[j] = x * sgn
                        done = True
                        break
                if not done:
                    raise RuntimeError("modified ziggurat exceeded its iteration guard")
        return fill

    def _make_fill_polar(step):
        @njit(cache=True)
        def fill(state, fstate, out):
            spare = fstate[0]
            have = fstate[1]
            for j in range(out.shape[0]):
                if have != 0.0:
                    out[j] = spare
                    have = 0.0
                    continue
                done = False
                for _ in range(_GUARD):
                    u1 = float64(step(state) >> uint64(11)) * _UNIT_SCALE
                    u2 = float64(step(state) >> uint64(11)) * _UNIT_SCALE
                    v1 = 2.0 * u1 - 1.0
                    v2 = 2.0 * u2 - 1.0
                    s = v1 * v1 + v2 * v2
                    if 0.0 < s < 1.0:
                        mul = math.sqrt(-2.0 * math.log(s) / s)
                        spare = v2 * mul
                        have = 1.0
                        out[j] = v1 * mul
                        done = True
                        break
                if not done:
                    raise RuntimeError("polar method exceeded its iteration guard")
            fstate[0] = spare
            fstate[1] = have
        return fill

    _STEPS = {"lcg48": _lcg_step, "splitmix": _sm_step}
    _FACTORIES = {
        "ziggurat": _make_fill_zig,
        "modified-ziggurat": _make_fill_mzig,
        "polar": _make_fill_polar,
        "u64": _make_fill_u64,
    }
    _KERNELS: dict = {}

    def _kernel(algorithm: str, source_id: str):
        key = (algorithm, source_id)
        if key not in _KERNELS:
            _KERNELS[key] = _FACTORIES[algorithm](_STEPS[source_id])
        return _KERNELS[key]


def supports(source: UniformSource) -> bool:
    """Whether batch kernels exist for this source type."""
    return AVAILABLE and isinstance(source, (Lcg48, SplitMix64))


def _state_array(source: UniformSource) -> np.ndarray:
    if isinstance(source, Lcg48):
        return np.array([source.state], dtype=np.uint64)
    if isinstance(source, SplitMix64):
        return np.array([source.state, source.gamma], dtype=np.uint64)
    raise TypeError(f"no engine support for source {source.source_id!r}")


def _write_back(source: UniformSource, state: np.ndarray) -> None:
    source.state = int(state[0])


@lru_cache(maxsize=16)
def _table_arrays(tables: ZigguratTables):
    ktab = np.array(tables.ktab, dtype=np.uint64)
    wtab = np.array(tables.wtab, dtype=np.float64)
    ytab = np.array(tables.ytab, dtype=np.float64)
    return ktab, wtab, ytab


def fill_u64(source: UniformSource, out: np.ndarray) -> None:
    """Fill a uint64 array with draws, advancing the source in place."""
    if not supports(source):
        for j in range(out.shape[0]):
            out[j] = source.next_u64()
        return
    state = _state_array(source)
    _kernel("u64", source.source_id)(state, out)
    _write_back(source, state)


def fill_gaussians(sampler: GaussianSampler, source: UniformSource,
                   out: np.ndarray) -> None:
    """Fill a float64 array with deviates, advancing sampler and source state.

    Produces exactly the stream `sampler.next_gaussian(source)` would,
    including the polar spare carried across calls. Falls back to the Python
    path for sources without kernel support.
    """
    if not supports(source):
        for j in range(out.shape[0]):
            out[j] = sampler.next_gaussian(source)
        return
    state = _state_array(source)
    if isinstance(sampler, PolarSampler):
        fstate = np.array(
            [sampler.spare if sampler.spare is not None else 0.0,
             1.0 if sampler.spare is not None else 0.0])
        _kernel("polar", source.source_id)(state, fstate, out)
        sampler.spare = float(fstate[0]) if fstate[1] != 0.0 else None
    elif isinstance(sampler, ZigguratSampler):
        t = sampler.tables
        ktab, wtab, ytab = _table_arrays(t)
        _kernel("ziggurat", source.source_id)(
            state, out, ktab, wtab, ytab, t.r,
            np.uint64(63 - t.index_bits), np.uint64(t.n - 1),
            np.uint64((1 << t.mantissa_bits) - 1))
    elif isinstance(sampler, ModifiedZigguratSampler):
        t = sampler.tables
        ktab, wtab, ytab = _table_arrays(t)
        _kernel("modified-ziggurat", source.source_id)(
            state, out, ktab, wtab, ytab, t.r,
            np.uint64(t.n - 1), np.uint64(t.index_bits),
            np.uint64(t.index_bits + 1))
    else:
        raise TypeError(f"no engine kernel for sampler {sampler.algorithm_id!r}")
    _write_back(source, state)


def warm_up(sampler: GaussianSampler, source_id: str) -> None:
    """Force compilation of the kernel a benchmark is about to time."""
    if not AVAILABLE:
        return
    from .sources import make_source

    src = make_source(source_id, 0)
    buf = np.empty(64, dtype=np.float64)
    fill_gaussians(sampler, src, buf)
