"""Shipped cases, the FD2 baseline, convergence sweeps and the CLI."""

from .baseline import baseline_fd2
from .cases import CASE_IDS, builtin_case, quadratic_probe_case, smooth_sine_case
from .convergence import (
    ConvergenceReport,
    ConvergenceRow,
    ExperimentConfig,
    compute_roc,
    emit_field,
    emit_report,
    fitted_order,
    format_report,
    linf_error,
    read_report_csv,
    run_experiment,
)
from .checks import dense_oracle_k, mode_derivative_suite, oracle_check
