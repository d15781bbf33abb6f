"""Correlation bounds of the modified Wigner inequality for two polarization qubits."""

from .bounds import (
    ClassicalBounds,
    ExtremaReport,
    LhvStrategy,
    QuantumBounds,
    classical_enumeration,
    lhv_mixture_value,
    quantum_bounds,
    scan_general_extrema,
    scan_quantum_extrema,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    InternalConsistencyError,
    InvalidDimensionError,
    NumericalConsistencyError,
    WignerError,
)
from .kernel import EigenDecomposition, eigen_hermitian, tensor_product, trace_product
from .qkd import Family, QkdAssessment, SettingTag, determinism_check, qkd_report, qkd_violation_search, settings_set
from .states import (
    BasisSign,
    bell_state,
    delta_state,
    density_from_pure,
    gamma_state,
    phi_xi_state,
    reduced_density,
    rotated_state,
    white_noise_mix,
)
from .sweep import SweepConfig, SweepGrid, check_envelope, run_sweep
from .wigner import (
    AnalyzerSetting,
    FilippSvozil,
    General,
    joint_probability,
    projector,
    wigner_operator,
    wigner_value,
    wigner_values,
)

__version__ = "0.1.0"
