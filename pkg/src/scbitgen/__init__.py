"""Stochastic-computing bitstream generators, accuracy analysis and cost model."""
from .arith import sc_multiply, sc_scaled_add
from .analysis import (
    MseReport,
    SeedSearchReport,
    discrepancy_curve,
    error_grid_csv,
    mse_multiplication,
    read_error_grid_csv,
    seed_search,
    star_discrepancy,
)
from .bitstream import Bitstream, Probability, bitwise_and, bitwise_not, estimate
from .cost import (
    ComparisonReport,
    Method,
    SynthesisRecord,
    builtin_table,
    compare_with_accuracy_bound,
    derive_efficiency,
    derive_energy,
    latency_model,
)
from .generators import (
    InputValue,
    LdPair,
    LfsrConfig,
    LfsrConfigError,
    LfsrPair,
    ParallelThermometerPair,
    ThermometerSequentialPair,
    comparator_bitstream,
    generate_pair,
    lfsr_sequence,
    parallel_thermometer,
    quantize_to_levels,
    source_pair,
    van_der_corput,
)

__version__ = "0.1.0"
