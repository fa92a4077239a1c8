"""Entangling power of quantum channels.

Finite-dimensional Kraus channels, entanglement witnesses, Schmidt-rank-based
channel measures, and certificates separating non-entangling, stochastically
non-entangling, and entangling behaviour. See README.md for a tour.
"""

from .errors import (
    ArityError,
    DimensionError,
    EntpowError,
    IncomparableWitnessError,
    InvalidCutError,
    NotAWitnessError,
    SpecError,
)
from .tensor import (
    DimList,
    OperatorSchmidt,
    dagger,
    is_hermitian,
    kron,
    kron_all,
    numerical_rank,
    operator_schmidt,
    partial_trace,
    partial_transpose,
    schmidt_reconstruct,
    swap_matrix,
)
from .states import (
    BellBasis,
    DensityMatrix,
    ProductStateParam,
    PureState,
    SchmidtDecomposition,
    bell_states,
    is_ppt,
    max_entangled,
    pure_from_density,
    random_product_state,
    random_separable,
    random_state_vector,
    schmidt_decompose,
    schmidt_rank,
)
from .channels import (
    ChoiMatrix,
    KrausChannel,
    MeasurementChannel,
    MixingChannel,
    RandomUnitaryChannel,
    RankBoostChannel,
    choi_apply,
    identity_channel,
    measurement_channel,
    mixing_channel,
    rank_boost_channel,
    random_unitary_channel,
    replacement_channel,
    swap_channel,
    unitary_channel,
)
from .witnesses import (
    MixShiftResult,
    OptimizationResult,
    OptimizerConfig,
    Witness,
    WitnessCheck,
    compare_finer_shifted,
    default_witness_family,
    is_optimal,
    is_trivial,
    is_witness,
    lambda_min,
    max_over_products,
    measurement_scan_min,
    min_over_products,
    mixing_shifted_dual,
    ppt_witness_from_pure,
    schmidt_class_max,
    swap_witness,
    unitary_mix_scan_min,
)
from .power import (
    Certificate,
    ChannelSchmidtBounds,
    KrausStructure,
    ProbeConfig,
    ThresholdReport,
    Violation,
    certify_kraus_channel,
    channel_schmidt_number_bounds,
    channel_schmidt_rank,
    classify_kraus,
    detect_entangling,
    entanglement_annihilating_check,
    nonentangling_threshold,
    replay_violations,
)
from .scans import (
    ScanResult,
    Scenario,
    get_scenario,
    run_scan,
    write_csv,
    zero_contour_residual,
)
from .serialize import (
    certificate_to_json,
    channel_from_json,
    channel_to_json,
    load_spec,
    state_from_json,
    state_to_json,
    witness_from_json,
    witness_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "BellBasis",
    "Certificate",
    "ChannelSchmidtBounds",
    "ChoiMatrix",
    "DensityMatrix",
    "DimList",
    "DimensionError",
    "EntpowError",
    "IncomparableWitnessError",
    "InvalidCutError",
    "KrausChannel",
    "KrausStructure",
    "MeasurementChannel",
    "MixShiftResult",
    "MixingChannel",
    "NotAWitnessError",
    "OperatorSchmidt",
    "OptimizationResult",
    "OptimizerConfig",
    "ProbeConfig",
    "ProductStateParam",
    "PureState",
    "RandomUnitaryChannel",
    "RankBoostChannel",
    "ScanResult",
    "Scenario",
    "SchmidtDecomposition",
    "SpecError",
    "ThresholdReport",
    "Violation",
    "Witness",
    "WitnessCheck",
    "bell_states",
    "certificate_to_json",
    "certify_kraus_channel",
    "channel_from_json",
    "channel_schmidt_number_bounds",
    "channel_schmidt_rank",
    "channel_to_json",
    "choi_apply",
    "classify_kraus",
    "compare_finer_shifted",
    "dagger",
    "default_witness_family",
    "detect_entangling",
    "entanglement_annihilating_check",
    "get_scenario",
    "identity_channel",
    "is_hermitian",
    "is_optimal",
    "is_ppt",
    "is_trivial",
    "is_witness",
    "kron",
    "kron_all",
    "lambda_min",
    "load_spec",
    "max_entangled",
    "max_over_products",
    "measurement_channel",
    "measurement_scan_min",
    "min_over_products",
    "mixing_channel",
    "mixing_shifted_dual",
    "nonentangling_threshold",
    "numerical_rank",
    "operator_schmidt",
    "partial_trace",
    "partial_transpose",
    "ppt_witness_from_pure",
    "pure_from_density",
    "random_product_state",
    "random_separable",
    "random_state_vector",
    "random_unitary_channel",
    "rank_boost_channel",
    "replacement_channel",
    "replay_violations",
    "run_scan",
    "zero_contour_residual",
    "schmidt_class_max",
    "schmidt_decompose",
    "schmidt_rank",
    "schmidt_reconstruct",
    "state_from_json",
    "state_to_json",
    "swap_channel",
    "swap_matrix",
    "swap_witness",
    "unitary_channel",
    "unitary_mix_scan_min",
    "witness_from_json",
    "witness_to_json",
    "write_csv",
]
