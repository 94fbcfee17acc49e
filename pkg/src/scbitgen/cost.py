"""Hardware cost comparison built on published synthesis results.

Power, area and latency are taken as measured inputs.  Energy and bit
generation efficiency are recomputed from them and cross-checked against
the printed columns.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Iterable, Mapping

from .analysis import mse_multiplication, seed_search
from .generators import (
    GeneratorSpec,
    LdPair,
    ParallelThermometerPair,
    ThermometerSequentialPair,
)

DEFAULT_CLOCK_PERIOD_US = 0.01


class Method(str, Enum):
    LFSR = "LFSR"
    LD = "LD"
    THERMOMETER_SEQUENTIAL = "ThermometerSequential"
    THERMOMETER_PARALLEL = "ThermometerParallel"

    @property
    def is_parallel(self) -> bool:
        return self is Method.THERMOMETER_PARALLEL


# Column headers of the published table, in order.
TABLE_COLUMNS = (
    "Coding Method",
    "Component",
    "Bit Stream Length",
    "Bit Precision",
    "Power (μW)",
    "Area (μm²)",
    "Latency (μs)",
    "Energy (pJ)",
    "Bit Generation Efficiency (bit/pJ)",
)

_METHOD_LABELS = {
    Method.LFSR: "LFSR Sequences",
    Method.LD: "LD Sequences",
    Method.THERMOMETER_SEQUENTIAL: "Traditional Thermometer Coding",
    Method.THERMOMETER_PARALLEL: "Parallel Thermometer Coding",
}


@dataclass(frozen=True)
class SynthesisRecord:
    """One synthesized bitstream generator.

    ``energy`` and ``efficiency`` are the printed values, ``None`` when
    absent; :func:`derive_energy` and :func:`derive_efficiency` recompute
    them from power and latency.
    """

    method: Method
    component_label: str
    bsl: int
    levels: int
    power: float
    area: float
    latency: float
    energy: float | None = None
    efficiency: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        for name in ("power", "area", "latency"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive in {self.component_label!r}")

    @property
    def config(self) -> tuple[Method, int, int]:
        return (self.method, self.bsl, self.levels)

    @property
    def derived_energy(self) -> float:
        return derive_energy(self)

    @property
    def derived_efficiency(self) -> float:
        return derive_efficiency(self)


_BUILTIN_ROWS = [
    (Method.LFSR, "4bit LFSR+Comp.", 16, 16, 6.62, 53.8, 0.16, 1.059, 15.11),
    (Method.LFSR, "6bit LFSR+Comp.", 64, 64, 5.38, 78.15, 0.64, 3.443, 18.59),
    (Method.LFSR, "8bit LFSR+Comp.", 256, 256, 4.9, 99.49, 2.56, 12.54, 20.41),
    (Method.LD, "4bit Counter+Comp.", 16, 16, 6.56, 49.74, 0.16, 1.05, 15.24),
    (Method.LD, "6bit Counter+Comp.", 64, 64, 4.44, 78.15, 0.64, 2.842, 22.52),
    (Method.LD, "7bit Counter+Comp.", 128, 128, 4.51, 91.02, 1.28, 5.773, 22.17),
    (Method.LD, "8bit Counter+Comp.", 256, 256, 4.91, 102.8, 2.56, 12.57, 20.37),
    (Method.THERMOMETER_SEQUENTIAL, "2Bit Counter+Comp.", 16, 4, 9.38, 26.11, 0.16, 1.501, 10.66),
    (Method.THERMOMETER_SEQUENTIAL, "3Bit Counter+Comp.", 64, 8, 7.55, 37.93, 0.64, 4.832, 13.25),
    (Method.THERMOMETER_SEQUENTIAL, "4Bit Counter+Comp.", 256, 16, 5.07, 50.8, 2.56, 12.98, 19.72),
    (Method.THERMOMETER_PARALLEL, "3-4 Decoder", 16, 4, 0.265, 3.352, 0.01, 0.003, 6038),
    (Method.THERMOMETER_PARALLEL, "4-8 Decoder", 64, 8, 0.5, 8.291, 0.01, 0.005, 12800),
    (Method.THERMOMETER_PARALLEL, "5-16 Decoder", 256, 16, 0.81, 20.11, 0.01, 0.008, 31605),
]


def builtin_table() -> list[SynthesisRecord]:
    """The published synthesis table (40 nm), one record per generator."""
    return [SynthesisRecord(*row) for row in _BUILTIN_ROWS]


def derive_energy(r: SynthesisRecord) -> float:
    """Conversion energy in pJ: µW times µs."""
    return r.power * r.latency


def derive_efficiency(r: SynthesisRecord) -> float:
    energy = derive_energy(r)
    if energy == 0:
        raise ZeroDivisionError(f"zero energy for {r.component_label!r}")
    return r.bsl / energy


def latency_model(method: Method | str, bsl: int,
                  clock_period: float = DEFAULT_CLOCK_PERIOD_US) -> float:
    """Conversion latency in µs: one clock per bit, or one clock when parallel."""
    if not clock_period > 0:
        raise ValueError("clock period must be positive")
    if Method(method).is_parallel:
        return clock_period
    return bsl * clock_period


def relative_error(derived: float, printed: float) -> float:
    return abs(derived - printed) / abs(printed)


def round_like(value: float, printed: float) -> float:
    """Round ``value`` half-up to the decimal places shown in ``printed``."""
    text = repr(float(printed))
    places = 0 if text.endswith(".0") else len(text.partition(".")[2])
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def matches_printed(derived: float, printed: float, rel_tol: float = 0.005) -> bool:
    """Whether ``derived``, shown at ``printed``'s precision, is within ``rel_tol``."""
    return relative_error(round_like(derived, printed), printed) <= rel_tol


def _method_from_label(label: str) -> Method:
    for method, text in _METHOD_LABELS.items():
        if label.strip().startswith(text) or label.strip() == method.value:
            return method
    raise ValueError(f"unknown coding method {label!r}")


def _optional_float(text: str) -> float | None:
    text = text.strip()
    return float(text) if text else None


def read_table_csv(text: str) -> list[SynthesisRecord]:
    """Parse records from CSV text using the published column headers."""
    reader = csv.DictReader(io.StringIO(text))
    missing = set(TABLE_COLUMNS[:7]) - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"missing columns: {sorted(missing)}")
    records = []
    for row in reader:
        records.append(SynthesisRecord(
            method=_method_from_label(row["Coding Method"]),
            component_label=row["Component"].strip(),
            bsl=int(row["Bit Stream Length"]),
            levels=int(row["Bit Precision"]),
            power=float(row["Power (μW)"]),
            area=float(row["Area (μm²)"]),
            latency=float(row["Latency (μs)"]),
            energy=_optional_float(row.get("Energy (pJ)") or ""),
            efficiency=_optional_float(row.get("Bit Generation Efficiency (bit/pJ)") or ""),
        ))
    return records


def load_table(path) -> list[SynthesisRecord]:
    with open(path, newline="", encoding="utf-8") as f:
        return read_table_csv(f.read())


def table_csv(records: Iterable[SynthesisRecord], derived: bool = False,
              clock_period: float = DEFAULT_CLOCK_PERIOD_US) -> str:
    """Records as CSV; ``derived`` appends recomputed energy, efficiency and
    modelled latency."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(TABLE_COLUMNS)
    if derived:
        header += ["Derived Energy (pJ)", "Derived Efficiency (bit/pJ)",
                   "Model Latency (μs)"]
    writer.writerow(header)
    for r in records:
        row = [_METHOD_LABELS[r.method], r.component_label, r.bsl, r.levels,
               repr(r.power), repr(r.area), repr(r.latency),
               "" if r.energy is None else repr(r.energy),
               "" if r.efficiency is None else repr(r.efficiency)]
        if derived:
            row += [repr(derive_energy(r)), repr(derive_efficiency(r)),
                    repr(latency_model(r.method, r.bsl, clock_period))]
        writer.writerow(row)
    return buf.getvalue()


# --- accuracy-constrained comparison ---------------------------------------

def accuracy_bound(n: int) -> float:
    """MSE ceiling for ``n``-bit inputs: one over the input precision to the fourth."""
    return 1.0 / float(1 << n) ** 4


@dataclass
class ComparisonReport:
    """Improvement of the cheapest qualifying parallel generator over the
    best qualifying traditional ones.  ``ratios`` is ``None`` when either
    side has no qualifying record."""

    accuracy_bound: float
    precision_bits: int
    qualifying: list[SynthesisRecord]
    parallel: SynthesisRecord | None
    ratios: dict[str, float] | None
    mse: dict[str, float] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return self.ratios is None

    def to_dict(self) -> dict:
        def rec(r):
            d = asdict(r)
            d["method"] = r.method.value
            d["derived_energy"] = derive_energy(r)
            d["derived_efficiency"] = derive_efficiency(r)
            return d

        return {
            "precision_bits": self.precision_bits,
            "accuracy_bound": self.accuracy_bound,
            "empty": self.empty,
            "ratios": self.ratios,
            "parallel": None if self.parallel is None else self.parallel.component_label,
            "qualifying": [rec(r) for r in self.qualifying],
            "mse": self.mse,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"accuracy bound (n={self.precision_bits}): MSE <= {self.accuracy_bound:.6g}"]
        for label, mse in self.mse.items():
            lines.append(f"  {label:<24} MSE {mse:.6g}")
        lines.append("qualifying generators:")
        for r in self.qualifying:
            lines.append(f"  {r.component_label:<24} BSL {r.bsl:>4}  area {r.area:g} µm²  "
                         f"power {r.power:g} µW  energy {derive_energy(r):.6g} pJ")
        if self.empty:
            lines.append("no qualifying traditional or parallel generator")
        else:
            lines.append(f"parallel generator: {self.parallel.component_label}")
            for name, value in self.ratios.items():
                lines.append(f"  {name:<11} {value:.4g}x")
        return "\n".join(lines) + "\n"


def compare_with_accuracy_bound(records: Iterable[SynthesisRecord],
                                mse_by_config: Mapping[tuple, float],
                                n: int = 4) -> ComparisonReport:
    """Compare generators meeting the MSE bound for ``n``-bit inputs.

    ``mse_by_config`` maps ``record.config`` to that configuration's MSE.
    Costs use the minimum over qualifying traditional generators and
    efficiency the maximum, so each ratio is a lower bound on improvement.
    """
    records = list(records)
    bound = accuracy_bound(n)
    missing = [r.component_label for r in records if r.config not in mse_by_config]
    if missing:
        raise KeyError(f"no MSE supplied for {missing}")
    qualifying = [r for r in records if mse_by_config[r.config] <= bound]
    traditional = [r for r in qualifying if not r.method.is_parallel]
    parallel = sorted((r for r in qualifying if r.method.is_parallel), key=lambda r: r.bsl)
    mse = {r.component_label: float(mse_by_config[r.config]) for r in records}
    if not traditional or not parallel:
        return ComparisonReport(bound, n, qualifying, None, None, mse)
    par = parallel[0]
    ratios = {
        "area": min(r.area for r in traditional) / par.area,
        "power": min(r.power for r in traditional) / par.power,
        "energy": min(derive_energy(r) for r in traditional) / derive_energy(par),
        "efficiency": derive_efficiency(par) / max(derive_efficiency(r) for r in traditional),
    }
    return ComparisonReport(bound, n, qualifying, par, ratios, mse)


def record_spec(record: SynthesisRecord, n: int = 4) -> GeneratorSpec:
    """Generator spec simulating ``record`` for ``n``-bit inputs.

    LFSR records pair stream A at state 0 with the minimum-MSE seed for B.
    """
    if record.method in (Method.LFSR, Method.LD):
        width = int(math.log2(record.bsl))
        if 1 << width != record.bsl:
            raise ValueError(f"BSL {record.bsl} is not a power of two")
        if record.method is Method.LD:
            return LdPair(width)
        return seed_search(width, n=n).spec_for_min()
    if record.levels * record.levels != record.bsl:
        raise ValueError(f"thermometer BSL {record.bsl} is not levels squared")
    if record.method is Method.THERMOMETER_PARALLEL:
        return ParallelThermometerPair(record.levels)
    return ThermometerSequentialPair(record.levels)


def mse_by_config(records: Iterable[SynthesisRecord], n: int = 4) -> dict[tuple, float]:
    """Simulated multiplication MSE for each distinct record configuration."""
    out: dict[tuple, float] = {}
    for r in records:
        if r.config not in out:
            out[r.config] = mse_multiplication(record_spec(r, n), n).mse
    return out
