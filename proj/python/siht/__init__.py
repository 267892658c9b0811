"""Sequential iterative hard thresholding for compressed sensing.

Thin wrapper over the native ``_siht`` extension. Arrays are NumPy float64;
matrices are (rows, cols).
"""

from ._siht import (
    IoError,
    ProtocolError,
    draw_phase_sizes,
    dynamic_sample_complexity,
    estimate_expected_md,
    expected_md_lower_bound,
    hard_threshold,
    iht_step,
    phase_diagram,
    recovery_sweep,
    ric,
    run_offline_iht,
    run_siht,
    sample_matrix,
    sample_signal,
    support,
    symmetric_eigenvalues,
    theorem_rhs,
)

__all__ = [
    "IoError",
    "ProtocolError",
    "draw_phase_sizes",
    "dynamic_sample_complexity",
    "estimate_expected_md",
    "expected_md_lower_bound",
    "hard_threshold",
    "iht_step",
    "phase_diagram",
    "recovery_sweep",
    "ric",
    "run_offline_iht",
    "run_siht",
    "sample_matrix",
    "sample_signal",
    "support",
    "symmetric_eigenvalues",
    "theorem_rhs",
]
