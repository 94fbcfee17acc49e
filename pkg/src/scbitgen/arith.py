"""Stochastic arithmetic: AND multiplication and MUX scaled addition."""
from __future__ import annotations

from .bitstream import Bitstream, _check_same_length, bitwise_and


def sc_multiply(a: Bitstream, b: Bitstream) -> Bitstream:
    """Multiply two stochastic numbers with an AND gate."""
    return bitwise_and(a, b)


def sc_scaled_add(a: Bitstream, b: Bitstream, sel: Bitstream) -> Bitstream:
    """MUX addition: take ``a`` where ``sel`` is 1, otherwise ``b``.

    The result estimates ``s*p_a + (1 - s)*p_b`` with ``s`` the select
    stream's probability, i.e. ``(p_a + p_b) / 2`` for a half-weight select.
    """
    n = _check_same_length(a, b, sel)
    mask = (1 << n) - 1
    return Bitstream((a.bits & sel.bits) | (b.bits & ~sel.bits & mask), n)
