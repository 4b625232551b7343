"""Deterministic 64-bit uniform sources behind one pluggable contract.

Samplers take a source as an argument instead of owning one, so any generator
implementing :class:`UniformSource` can drive any sampler. Two production
generators are provided (a 48-bit LCG and SplitMix64) plus a scripted replay
source for tests and diagnostics.

All state is single-owner mutable: never share one instance across threads.
Use :meth:`SplitMix64.split` to fan out independent streams.
"""

from __future__ import annotations

import abc

MASK64 = (1 << 64) - 1
MASK48 = (1 << 48) - 1

# 2^-53, the spacing of the 53-bit uniform grid in [0, 1).
_UNIT_SCALE = 1.1102230246251565e-16

# LCG recurrence constants (48-bit modulus, full period).
LCG_MULT = 0x5DEECE66D
LCG_INC = 0xB

# SplitMix64 default increment and finalizer constants.
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


class ScriptExhausted(RuntimeError):
    """Raised when a ScriptedSource runs past the end of its script."""


class UniformSource(abc.ABC):
    """Contract for a seedable, deterministic 64-bit uniform generator."""

    source_id: str = "abstract"

    @abc.abstractmethod
    def next_u64(self) -> int:
        """Return the next uniform 64-bit unsigned word, advancing the state."""

    def next_f64_unit(self) -> float:
        """Return a uniform real in [0, 1) from the top 53 bits of one draw."""
        return (self.next_u64() >> 11) * _UNIT_SCALE

    def next_bits(self, k: int) -> int:
        """Return k uniform bits, 1 <= k <= 32, from the top of one draw."""
        if not 1 <= k <= 32:
            raise ValueError(f"next_bits requires 1 <= k <= 32, got {k}")
        return self.next_u64() >> (64 - k)


class Lcg48(UniformSource):
    """48-bit linear congruential generator.

    state <- (a*state + c) mod 2^48, with the seed xor-scrambled into the
    initial state. Each next_bits(k) is one step returning the top k bits of
    the new state; next_u64 composes two 32-bit draws. The low-order bits of
    the raw state have short periods (bit j cycles with period 2^(j+1)),
    which is why this source is refused for the modified ziggurat sampler.
    """

    source_id = "lcg48"

    def __init__(self, seed: int):
        self.state = (seed ^ LCG_MULT) & MASK48

    def next_bits(self, k: int) -> int:
        if not 1 <= k <= 32:
            raise ValueError(f"next_bits requires 1 <= k <= 32, got {k}")
        self.state = (LCG_MULT * self.state + LCG_INC) & MASK48
        return self.state >> (48 - k)

    def next_u64(self) -> int:
        hi = self.next_bits(32)
        lo = self.next_bits(32)
        return (hi << 32) | lo


def mix64(z: int) -> int:
    """SplitMix64 finalizer: three xor-shift-multiply stages."""
    z = ((z ^ (z >> 30)) * _MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & MASK64
    return z ^ (z >> 31)


def mix_gamma(z: int) -> int:
    """Derive an odd, bit-rich increment for a split-off generator."""
    z = ((z ^ (z >> 33)) * 0xFF51AFD7ED558CCD) & MASK64
    z = ((z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53) & MASK64
    z = (z ^ (z >> 33)) | 1
    if bin(z ^ (z >> 1)).count("1") < 24:
        z ^= 0xAAAAAAAAAAAAAAAA
    return z


class SplitMix64(UniformSource):
    """SplitMix64: state advances by a fixed odd gamma, output is mix64(state).

    The mix is a bijection of the state, so one stream never repeats a word
    within its 2^64 period. Low-order output bits are full quality, making
    this source safe for the modified ziggurat sampler.
    """

    source_id = "splitmix"

    def __init__(self, seed: int, gamma: int = GOLDEN_GAMMA):
        self.state = seed & MASK64
        self.gamma = (gamma | 1) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + self.gamma) & MASK64
        return mix64(self.state)

    def split(self) -> "SplitMix64":
        """Fork an independent child stream; the parent advances two draws."""
        child_state = self.next_u64()
        child_gamma = mix_gamma(self.next_u64())
        return SplitMix64(child_state, child_gamma)


class ScriptedSource(UniformSource):
    """Replays a fixed list of 64-bit words; running out is a hard error."""

    source_id = "scripted"

    def __init__(self, words):
        self.words = [self._check(w) for w in words]
        self.cursor = 0

    @staticmethod
    def _check(w) -> int:
        w = int(w)
        if not 0 <= w <= MASK64:
            raise ValueError(f"scripted word out of u64 range: {w}")
        return w

    def next_u64(self) -> int:
        if self.cursor >= len(self.words):
            raise ScriptExhausted(
                f"script exhausted after {len(self.words)} words"
            )
        w = self.words[self.cursor]
        self.cursor += 1
        return w

    def remaining(self) -> int:
        return len(self.words) - self.cursor


SOURCE_IDS = ("lcg48", "splitmix")


def make_source(source_id: str, seed: int) -> UniformSource:
    """Instantiate a production source by identifier."""
    if source_id == "lcg48":
        return Lcg48(seed)
    if source_id == "splitmix":
        return SplitMix64(seed)
    raise ValueError(f"unknown source id: {source_id!r}")
