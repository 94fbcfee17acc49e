"""Exhaustive accuracy analysis of stochastic multiplication.

MSE values are accumulated as exact rationals and rounded to a float
once, so a zero MSE is decided exactly and results do not depend on
summation order.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import sc_multiply
from .generators import (
    THERMOMETER_SPECS,
    GeneratorSpec,
    InputValue,
    LfsrPair,
    comparator_bitstream,
    default_tap_mask,
    generate_pair_from_levels,
    lfsr_cycle,
    quantize_to_levels,
    source_pair,
)


@dataclass(frozen=True, eq=False)
class MseReport:
    """Two-input multiplication error over every ``(B1, B2)`` input pair.

    ``grid_numerators[B1, B2] / grid_denominator`` is the signed error
    ``estimate - B1*B2/4**n`` held exactly; ``grid`` is its float view.
    """

    spec: GeneratorSpec | None
    precision_bits: int
    grid_numerators: np.ndarray
    grid_denominator: int
    mse_exact: Fraction = field(init=False)

    def __post_init__(self):
        nums = self.grid_numerators
        total = sum(int(v) * int(v) for v in nums.ravel())
        object.__setattr__(
            self, "mse_exact", Fraction(total, self.grid_denominator ** 2 * nums.size))

    @property
    def mse(self) -> float:
        return float(self.mse_exact)

    @property
    def max_abs_error(self) -> float:
        return float(Fraction(int(np.abs(self.grid_numerators).max()), self.grid_denominator))

    @property
    def grid(self) -> np.ndarray:
        return self.grid_numerators / self.grid_denominator

    @property
    def bsl(self) -> int | None:
        return None if self.spec is None else self.spec.bsl

    def zero_fraction(self) -> float:
        """Share of input pairs whose product is exact."""
        return float(np.mean(self.grid_numerators == 0))


def _streams_per_input(spec: GeneratorSpec, n: int):
    inputs = [InputValue(b, n) for b in range(1 << n)]
    if isinstance(spec, THERMOMETER_SPECS):
        k = spec.levels
        levels = [quantize_to_levels(x, k) for x in inputs]
        a = [generate_pair_from_levels(spec, lv, 0)[0] for lv in levels]
        b = [generate_pair_from_levels(spec, 0, lv)[1] for lv in levels]
        return a, b
    w = spec.source_width
    if n > w:
        raise ValueError(f"precision {n} exceeds source width {w}")
    src_a, src_b = source_pair(spec)
    return ([comparator_bitstream(src_a, x, w) for x in inputs],
            [comparator_bitstream(src_b, x, w) for x in inputs])


def mse_multiplication(spec: GeneratorSpec, n: int) -> MseReport:
    """Exhaustive AND-multiplication error of ``spec`` for ``n``-bit inputs."""
    streams_a, streams_b = _streams_per_input(spec, n)
    size = 1 << n
    bsl = spec.bsl
    # error = c/bsl - B1*B2/4**n over the common denominator bsl*4**n
    scale = size * size
    denom = bsl * scale
    nums = np.empty((size, size), dtype=object)
    for b1, sa in enumerate(streams_a):
        for b2, sb in enumerate(streams_b):
            ones = sc_multiply(sa, sb).popcount()
            nums[b1, b2] = ones * scale - b1 * b2 * bsl
    return MseReport(spec, n, _as_int_array(nums), denom)


def _as_int_array(nums: np.ndarray) -> np.ndarray:
    if all(abs(int(v)) < 2 ** 62 for v in nums.ravel()):
        return nums.astype(np.int64)
    return nums


def error_grid_csv(report: MseReport) -> str:
    """Error grid as CSV: header row of B2 values, one row per B1."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    size = report.grid_numerators.shape[1]
    writer.writerow(["B1\\B2", *range(size)])
    for b1, row in enumerate(report.grid):
        writer.writerow([b1, *(repr(float(v)) for v in row)])
    return buf.getvalue()


def read_error_grid_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    return np.array([[float(v) for v in row[1:]] for row in rows[1:]], dtype=float)


@dataclass(frozen=True)
class SeedSearchReport:
    width: int
    tap_mask: int
    precision_bits: int
    bsl: int
    mses: tuple[float, ...]
    exact_mses: tuple[Fraction, ...] = field(repr=False)

    @property
    def offsets(self) -> range:
        return range(1, len(self.mses) + 1)

    @property
    def argmin(self) -> int:
        # ties go to the smallest offset
        return 1 + min(range(len(self.exact_mses)), key=lambda i: (self.exact_mses[i], i))

    @property
    def argmax(self) -> int:
        return 1 + min(range(len(self.exact_mses)), key=lambda i: (-self.exact_mses[i], i))

    @property
    def min_mse(self) -> float:
        return self.mses[self.argmin - 1]

    @property
    def max_mse(self) -> float:
        return self.mses[self.argmax - 1]

    def spec_for(self, offset: int) -> LfsrPair:
        cycle = lfsr_cycle(self.width, self.tap_mask)
        return LfsrPair.from_seeds(self.width, int(cycle[0]), int(cycle[offset]),
                                   self.tap_mask, self.bsl)

    def spec_for_min(self) -> LfsrPair:
        return self.spec_for(self.argmin)

    def to_csv(self) -> str:
        lines = ["offset,mse"]
        lines += [f"{d},{m!r}" for d, m in zip(self.offsets, self.mses)]
        return "\n".join(lines) + "\n"


def seed_search(width: int, tap_mask: int | None = None, n: int = 4,
                bsl: int | None = None, threads: int = 1) -> SeedSearchReport:
    """MSE for every relative seed offset of stream B against stream A at state 0."""
    if tap_mask is None:
        tap_mask = default_tap_mask(width)
    period = 1 << width
    if bsl is None:
        bsl = period
    if n > width:
        raise ValueError(f"precision {n} exceeds LFSR width {width}")
    cycle = lfsr_cycle(width, tap_mask)

    def run(offset: int) -> Fraction:
        spec = LfsrPair.from_seeds(width, int(cycle[0]), int(cycle[offset]), tap_mask, bsl)
        return mse_multiplication(spec, n).mse_exact

    offsets = range(1, period)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            exact = tuple(pool.map(run, offsets))
    else:
        exact = tuple(map(run, offsets))
    return SeedSearchReport(width, tap_mask, n, bsl, tuple(float(m) for m in exact), exact)


def star_discrepancy(values, width: int, n_points: int | None = None) -> float:
    """Exact 1-D star discrepancy of the first ``n_points`` states scaled to [0, 1)."""
    values = np.asarray(values)
    if n_points is None:
        n_points = len(values)
    if n_points < 1:
        raise ValueError("prefix length must be >= 1")
    if n_points > len(values):
        raise ValueError(f"prefix length {n_points} exceeds {len(values)} values")
    pts = np.sort(values[:n_points].astype(np.float64)) / float(1 << width)
    i = np.arange(n_points, dtype=np.float64)
    return float(max(np.abs(i / n_points - pts).max(),
                     np.abs((i + 1) / n_points - pts).max()))


def discrepancy_curve(values, width: int) -> list[tuple[int, float]]:
    """``(N, D*_N)`` for every prefix length ``N``."""
    return [(n, star_discrepancy(values, width, n)) for n in range(1, len(values) + 1)]
