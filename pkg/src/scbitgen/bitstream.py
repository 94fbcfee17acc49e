"""Packed bitstreams carrying stochastic numbers.

A :class:`Bitstream` stores its bits in a single Python integer, bit ``i``
being clock cycle ``i``.  Values are immutable and hashable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np


class Probability(NamedTuple):
    """Unreduced ratio ``ones / length`` of a bitstream."""

    numerator: int
    denominator: int

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


@dataclass(frozen=True)
class Bitstream:
    """A finite stochastic bitstream of ``length`` bits.

    Parameters
    ----------
    bits : int
        Packed bits; bit ``i`` is cycle ``i``.  Bits at or above ``length``
        are discarded on construction.
    length : int
        Bitstream length (BSL), at least 1.
    """

    bits: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"bitstream length must be >= 1, got {self.length}")
        if self.bits < 0:
            raise ValueError("packed bits must be non-negative")
        object.__setattr__(self, "bits", self.bits & ((1 << self.length) - 1))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Bitstream":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
        return cls.from_array(arr)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Bitstream":
        """Pack a 1-D array of truthy/falsy values, element 0 first."""
        arr = np.asarray(arr).astype(bool).ravel()
        if arr.size == 0:
            raise ValueError("bitstream length must be >= 1, got 0")
        packed = np.packbits(arr, bitorder="little")
        return cls(int.from_bytes(packed.tobytes(), "little"), int(arr.size))

    @classmethod
    def from_string(cls, text: str) -> "Bitstream":
        text = "".join(text.split())
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        # cycle 0 is the leftmost character
        return cls(int(text[::-1], 2), len(text))

    @classmethod
    def zeros(cls, length: int) -> "Bitstream":
        return cls(0, length)

    @classmethod
    def ones(cls, length: int) -> "Bitstream":
        return cls((1 << length) - 1, length)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError("bit index out of range")
        return (self.bits >> i) & 1

    def __iter__(self):
        return (int(b) for b in self.to_array())

    def __str__(self) -> str:
        return self.to_string()

    def popcount(self) -> int:
        return self.bits.bit_count()

    def to_array(self) -> np.ndarray:
        raw = self.bits.to_bytes((self.length + 7) // 8, "little")
        arr = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return arr[: self.length]

    def to_string(self) -> str:
        return format(self.bits, f"0{self.length}b")[::-1]

    def permute(self, order) -> "Bitstream":
        """Return the stream with bit ``i`` taken from cycle ``order[i]``."""
        order = np.asarray(order)
        if sorted(order.tolist()) != list(range(self.length)):
            raise ValueError("order must be a permutation of the cycle indices")
        return Bitstream.from_array(self.to_array()[order])


def _check_same_length(*streams: Bitstream) -> int:
    lengths = {s.length for s in streams}
    if len(lengths) != 1:
        raise ValueError(f"bitstream lengths differ: {sorted(lengths)}")
    return lengths.pop()


def estimate(s: Bitstream) -> Probability:
    """Probability of a 1 in ``s`` as an exact, unreduced ratio."""
    if s.length < 1:
        raise ValueError("cannot estimate a zero-length stream")
    return Probability(s.popcount(), s.length)


def bitwise_and(a: Bitstream, b: Bitstream) -> Bitstream:
    n = _check_same_length(a, b)
    return Bitstream(a.bits & b.bits, n)


def bitwise_not(a: Bitstream) -> Bitstream:
    return Bitstream(~a.bits & ((1 << a.length) - 1), a.length)
