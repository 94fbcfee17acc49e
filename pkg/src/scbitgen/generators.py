"""Bitstream generators: LFSR, low-discrepancy, and thermometer coding.

Every generator produces a *pair* of streams, one per operand of a
two-input stochastic operation.  Sequential generators compare a
per-cycle source value against the input; the parallel thermometer
generator decodes the input level into all of its wires at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .bitstream import Bitstream

# Galois right-shift feedback masks for primitive polynomials, one per width.
DEFAULT_TAP_MASKS = {
    2: 0b11,
    3: 0b110,
    4: 0b1100,
    5: 0b10100,
    6: 0b110000,
    7: 0b1100000,
    8: 0b10111000,
    9: 0x110,
    10: 0x240,
    11: 0x500,
    12: 0xE08,
    13: 0x1C80,
    14: 0x3802,
    15: 0x6000,
    16: 0xB400,
}


class LfsrConfigError(ValueError):
    """Raised for an LFSR whose feedback mask is not maximal-length."""


def default_tap_mask(width: int) -> int:
    try:
        return DEFAULT_TAP_MASKS[width]
    except KeyError:
        raise ValueError(f"no default tap mask for width {width}") from None


@dataclass(frozen=True)
class LfsrConfig:
    """Galois LFSR of ``width`` bits started from ``seed``.

    ``tap_mask`` defaults to the entry in :data:`DEFAULT_TAP_MASKS`.
    """

    width: int
    tap_mask: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.width < 2:
            raise ValueError(f"LFSR width must be >= 2, got {self.width}")
        if self.tap_mask is None:
            object.__setattr__(self, "tap_mask", default_tap_mask(self.width))
        if not 0 < self.tap_mask < (1 << self.width):
            raise ValueError(f"tap mask {self.tap_mask:#x} does not fit {self.width} bits")
        if not 0 <= self.seed < (1 << self.width):
            raise ValueError(f"seed {self.seed} out of range for width {self.width}")

    @property
    def period(self) -> int:
        return 1 << self.width


def galois_step(state: int, tap_mask: int) -> int:
    """One right shift of a Galois LFSR."""
    if state & 1:
        return (state >> 1) ^ tap_mask
    return state >> 1


@lru_cache(maxsize=64)
def _full_cycle(width: int, tap_mask: int) -> tuple[int, ...]:
    # Walk the nonzero cycle starting at the all-ones state, then put the
    # all-zero state last so it sits immediately before all-ones.
    ones = (1 << width) - 1
    states = [ones]
    state = galois_step(ones, tap_mask)
    while state != ones:
        if state == 0 or len(states) >= ones:
            raise LfsrConfigError(
                f"tap mask {tap_mask:#x} is not primitive for width {width}")
        states.append(state)
        state = galois_step(state, tap_mask)
    if len(states) != ones:
        raise LfsrConfigError(
            f"tap mask {tap_mask:#x} is not primitive for width {width}: "
            f"cycle length {len(states)} < {ones}")
    states.append(0)
    return tuple(states)


def is_primitive(width: int, tap_mask: int) -> bool:
    try:
        _full_cycle(width, tap_mask)
    except LfsrConfigError:
        return False
    return True


def lfsr_cycle(width: int, tap_mask: int | None = None) -> np.ndarray:
    """The zero-extended cycle of all ``2**width`` states, starting at 0."""
    if tap_mask is None:
        tap_mask = default_tap_mask(width)
    cycle = np.array(_full_cycle(width, tap_mask), dtype=np.int64)
    return np.roll(cycle, 1)


def lfsr_sequence(cfg: LfsrConfig, length: int | None = None) -> np.ndarray:
    """Emit ``length`` states of the zero-extended Galois LFSR from ``cfg.seed``.

    The default length is one full period.  The sequence wraps around
    for lengths longer than the period.
    """
    if length is None:
        length = cfg.period
    if length < 1:
        raise ValueError(f"sequence length must be >= 1, got {length}")
    cycle = lfsr_cycle(cfg.width, cfg.tap_mask)
    start = int(np.flatnonzero(cycle == cfg.seed)[0])
    idx = (start + np.arange(length)) % cfg.period
    return cycle[idx]


def seed_at_offset(width: int, tap_mask: int | None, offset: int) -> int:
    """State ``offset`` steps after state 0 in the zero-extended cycle."""
    cycle = lfsr_cycle(width, tap_mask)
    return int(cycle[offset % len(cycle)])


def van_der_corput(index: int, width: int) -> int:
    """``width``-bit bit reversal of ``index``."""
    if width < 1:
        raise ValueError(f"width must be >= 1, got {width}")
    if not 0 <= index < (1 << width):
        raise ValueError(f"index {index} out of range for width {width}")
    return int(format(index, f"0{width}b")[::-1], 2)


def van_der_corput_sequence(width: int, length: int | None = None) -> np.ndarray:
    n = 1 << width if length is None else length
    return np.array([van_der_corput(t % (1 << width), width) for t in range(n)],
                    dtype=np.int64)


# --- generator specifications ---------------------------------------------

@dataclass(frozen=True)
class LfsrPair:
    """Two LFSR streams sharing width and polynomial, differing in seed."""

    cfg_a: LfsrConfig
    cfg_b: LfsrConfig
    bsl: int | None = None

    def __post_init__(self):
        if (self.cfg_a.width, self.cfg_a.tap_mask) != (self.cfg_b.width, self.cfg_b.tap_mask):
            raise ValueError("both LFSRs must share width and tap mask")
        if self.bsl is None:
            object.__setattr__(self, "bsl", self.cfg_a.period)
        if not 1 <= self.bsl <= self.cfg_a.period:
            raise ValueError(f"bsl {self.bsl} must be in [1, {self.cfg_a.period}]")

    @classmethod
    def from_seeds(cls, width: int, seed_a: int, seed_b: int,
                   tap_mask: int | None = None, bsl: int | None = None) -> "LfsrPair":
        return cls(LfsrConfig(width, tap_mask, seed_a),
                   LfsrConfig(width, tap_mask, seed_b), bsl)

    @property
    def width(self) -> int:
        return self.cfg_a.width

    @property
    def source_width(self) -> int:
        return self.cfg_a.width

    @property
    def name(self) -> str:
        return "lfsr"


@dataclass(frozen=True)
class LdPair:
    """Counter and bit-reversed counter of ``width`` bits."""

    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")

    @property
    def bsl(self) -> int:
        return 1 << self.width

    @property
    def source_width(self) -> int:
        return self.width

    @property
    def name(self) -> str:
        return "ld"


@dataclass(frozen=True)
class _ThermometerPair:
    levels: int

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")

    @property
    def bsl(self) -> int:
        return self.levels * self.levels

    @property
    def source_width(self) -> int:
        return max(1, math.ceil(math.log2(self.levels)))


@dataclass(frozen=True)
class ThermometerSequentialPair(_ThermometerPair):
    """Fast and slow ``levels``-ary counters feeding two comparators."""

    @property
    def name(self) -> str:
        return "thermo"


@dataclass(frozen=True)
class ParallelThermometerPair(_ThermometerPair):
    """Binary-to-thermometer decoder output, tiled and stretched."""

    @property
    def decoder_input_width(self) -> int:
        return decoder_input_width(self.levels)

    @property
    def name(self) -> str:
        return "parallel-thermo"


GeneratorSpec = Union[LfsrPair, LdPair, ThermometerSequentialPair, ParallelThermometerPair]

THERMOMETER_SPECS = (ThermometerSequentialPair, ParallelThermometerPair)
ThermometerSpec = Union[ThermometerSequentialPair, ParallelThermometerPair]


def decoder_input_width(levels: int) -> int:
    """Input bits of a decoder emitting ``levels`` wires (level K inclusive)."""
    return max(1, math.ceil(math.log2(levels + 1)))


@dataclass(frozen=True)
class InputValue:
    """An ``precision_bits``-bit binary input ``value``, read as value / 2**n."""

    value: int
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < 0:
            raise ValueError("precision_bits must be >= 0")
        if not 0 <= self.value < (1 << self.precision_bits):
            raise ValueError(
                f"value {self.value} not representable in {self.precision_bits} bits")


def source_pair(spec: GeneratorSpec) -> tuple[np.ndarray, np.ndarray]:
    """Per-cycle source values driving the two comparators of ``spec``."""
    if isinstance(spec, LfsrPair):
        return lfsr_sequence(spec.cfg_a, spec.bsl), lfsr_sequence(spec.cfg_b, spec.bsl)
    if isinstance(spec, LdPair):
        return np.arange(spec.bsl, dtype=np.int64), van_der_corput_sequence(spec.width)
    if isinstance(spec, THERMOMETER_SPECS):
        t = np.arange(spec.bsl, dtype=np.int64)
        return t % spec.levels, t // spec.levels
    raise TypeError(f"unknown generator spec: {spec!r}")


def quantize_to_levels(x: InputValue, levels: int) -> int:
    """Round ``x`` onto ``levels`` steps, ties away from zero."""
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    scale = 1 << x.precision_bits
    level = (2 * x.value * levels + scale) // (2 * scale)
    return min(max(level, 0), levels)


def _compare(source: np.ndarray, threshold: int) -> Bitstream:
    return Bitstream.from_array(np.asarray(source) < threshold)


def comparator_bitstream(source: Sequence[int], x: InputValue, width: int) -> Bitstream:
    """Emit 1 on each cycle where the source is below the left-justified input."""
    if x.precision_bits > width:
        raise ValueError(
            f"input precision {x.precision_bits} exceeds source width {width}")
    source = np.asarray(source)
    if source.size and (source.min() < 0 or source.max() >= (1 << width)):
        raise ValueError(f"source values must lie in [0, 2**{width})")
    return _compare(source, x.value << (width - x.precision_bits))


def parallel_thermometer(level: int, levels: int) -> Bitstream:
    """Thermometer code of ``level`` on ``levels`` wires: wire i is ``i < level``."""
    if not 0 <= level <= levels:
        raise ValueError(f"level {level} out of range [0, {levels}]")
    return Bitstream((1 << level) - 1, levels)


def _tile(code: Bitstream, times: int) -> Bitstream:
    bits = 0
    for _ in range(times):
        bits = (bits << code.length) | code.bits
    return Bitstream(bits, code.length * times)


def _stretch(code: Bitstream, times: int) -> Bitstream:
    block = (1 << times) - 1
    bits = 0
    for i in range(code.length):
        if code[i]:
            bits |= block << (i * times)
    return Bitstream(bits, code.length * times)


def thermometer_levels(spec: ThermometerSpec, x1: InputValue,
                       x2: InputValue) -> tuple[int, int]:
    return quantize_to_levels(x1, spec.levels), quantize_to_levels(x2, spec.levels)


def generate_pair_from_levels(spec: ThermometerSpec, level1: int,
                              level2: int) -> tuple[Bitstream, Bitstream]:
    """Stream pair for already-quantized thermometer levels."""
    k = spec.levels
    for level in (level1, level2):
        if not 0 <= level <= k:
            raise ValueError(f"level {level} out of range [0, {k}]")
    if isinstance(spec, ParallelThermometerPair):
        return (_tile(parallel_thermometer(level1, k), k),
                _stretch(parallel_thermometer(level2, k), k))
    fast, slow = source_pair(spec)
    return _compare(fast, level1), _compare(slow, level2)


def generate_pair(spec: GeneratorSpec, x1: InputValue,
                  x2: InputValue) -> tuple[Bitstream, Bitstream]:
    """Convert two binary inputs to a stochastic stream pair."""
    if isinstance(spec, THERMOMETER_SPECS):
        return generate_pair_from_levels(spec, *thermometer_levels(spec, x1, x2))
    src_a, src_b = source_pair(spec)
    w = spec.source_width
    return comparator_bitstream(src_a, x1, w), comparator_bitstream(src_b, x2, w)
