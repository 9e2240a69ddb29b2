"""Grid-refinement sweeps, convergence rates and report files."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..assembly import CaseSpec
from ..errors import IoFailure, NonFiniteResult, NonpositiveError
from ..geometry import UniformGrid
from ..solver import solve_case
from .baseline import baseline_fd2
from .cases import CASE_IDS, builtin_case

__all__ = [
    "METHODS",
    "DEFAULT_N_1D",
    "DEFAULT_N_2D",
    "ExperimentConfig",
    "ConvergenceRow",
    "ConvergenceReport",
    "compute_roc",
    "fitted_order",
    "linf_error",
    "run_case",
    "run_experiment",
    "format_report",
    "emit_report",
    "read_report_csv",
    "emit_field",
]

METHODS = ("schur", "fixed-point", "baseline-fd2")
DEFAULT_N_1D = (20, 40, 80, 160, 320, 640)
DEFAULT_N_2D = (20, 40, 80, 160, 320)


@dataclass(frozen=True)
class ExperimentConfig:
    case_id: str
    order: int = 2
    method: str = "schur"
    n_list: tuple[int, ...] = DEFAULT_N_1D
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.case_id not in CASE_IDS:
            raise ValueError(f"unknown case {self.case_id!r}; choose from {CASE_IDS}")
        if self.order not in (2, 4):
            raise ValueError(f"order must be 2 or 4, got {self.order}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.output_format not in ("csv", "md"):
            raise ValueError(f"format must be csv or md, got {self.output_format!r}")
        n_list = tuple(int(n) for n in self.n_list)
        if not n_list:
            raise ValueError("n_list is empty")
        if any(b <= a for a, b in zip(n_list, n_list[1:])):
            raise ValueError(f"n_list must be strictly increasing, got {n_list}")
        if self.method == "baseline-fd2" and self.case_id.startswith("poisson2d"):
            raise ValueError("the FD2 baseline is 1-D only")
        object.__setattr__(self, "n_list", n_list)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    h: float
    linf_error: float
    roc: float | None
    k_abs_errors: tuple[float, ...] = ()


@dataclass
class ConvergenceReport:
    rows: list[ConvergenceRow] = field(default_factory=list)
    case_id: str = ""
    order: int = 2
    method: str = "schur"

    @property
    def n(self) -> np.ndarray:
        return np.array([r.n for r in self.rows])

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.linf_error for r in self.rows])

    @property
    def rocs(self) -> list[float | None]:
        return [r.roc for r in self.rows]

    def k_errors(self, i: int = 0) -> np.ndarray:
        return np.array([r.k_abs_errors[i] for r in self.rows])


def compute_roc(err_coarse: float, err_fine: float) -> float:
    """``log2(err_coarse / err_fine)``, the observed order under grid doubling."""
    if not (err_coarse > 0 and err_fine > 0):
        raise NonpositiveError(f"errors must be positive, got {err_coarse}, {err_fine}")
    return math.log2(err_coarse / err_fine)


def fitted_order(n: Sequence[float], err: Sequence[float]) -> float:
    """Least-squares slope of ``-log(err)`` against ``log(n)``."""
    n = np.asarray(n, dtype=float)
    err = np.asarray(err, dtype=float)
    if np.any(err <= 0):
        raise NonpositiveError("errors must be positive to fit an order")
    slope, _ = np.polyfit(np.log(n), np.log(err), 1)
    return float(-slope)


def linf_error(case: CaseSpec, u_full: np.ndarray) -> float:
    """Maximum nodal error over every grid node."""
    return float(np.max(np.abs(u_full - case.exact_solution(case.grid.coordinates()))))


def run_case(case: CaseSpec, method: str = "schur"):
    """Solve one case; returns ``(u_full, k)`` with ``k`` None for the baseline."""
    if method == "baseline-fd2":
        return baseline_fd2(case), None
    result = solve_case(case, method)
    return result.u_full, result.k


def run_experiment(config: ExperimentConfig) -> ConvergenceReport:
    report = ConvergenceReport(case_id=config.case_id, order=config.order, method=config.method)
    prev_n = prev_err = None
    for n in config.n_list:
        case = builtin_case(config.case_id, n, config.order)
        u_full, k = run_case(case, config.method)
        err = linf_error(case, u_full)
        k_err = () if k is None else tuple(float(e) for e in np.abs(k - case.exact_coefficients))
        roc = compute_roc(prev_err, err) if prev_n is not None and n == 2 * prev_n else None
        row = ConvergenceRow(n, case.grid.spacing[0], err, roc, k_err)
        values = [row.h, row.linf_error, *row.k_abs_errors] + ([] if roc is None else [roc])
        if not all(math.isfinite(v) for v in values):
            raise NonFiniteResult(f"non-finite entry in row {row}")
        report.rows.append(row)
        prev_n, prev_err = n, err
    if config.output_path:
        emit_report(report, config.output_format, config.output_path)
    return report


def _header(report: ConvergenceReport) -> list[str]:
    nk = max((len(r.k_abs_errors) for r in report.rows), default=0)
    return ["N", "h", "linf_error", "roc"] + [f"k_err_{i + 1}" for i in range(nk)]


def _cells(row: ConvergenceRow) -> list[str]:
    roc = "" if row.roc is None else repr(row.roc)
    return [str(row.n), repr(row.h), repr(row.linf_error), roc] + [repr(e) for e in row.k_abs_errors]


def format_report(report: ConvergenceReport, fmt: str = "csv") -> str:
    header = _header(report)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in report.rows:
            writer.writerow(_cells(row))
        return buf.getvalue()
    if fmt == "md":
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        for row in report.rows:
            cells = [str(row.n), f"{row.h:.4e}", f"{row.linf_error:.2e}"]
            cells.append("" if row.roc is None else f"{row.roc:.2f}")
            cells += [f"{e:.2e}" for e in row.k_abs_errors]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit_report(report: ConvergenceReport, fmt: str, path) -> None:
    """Write *report* as CSV (``N,h,linf_error,roc,k_err_1,...``) or a Markdown table."""
    text = format_report(report, fmt)
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_report_csv(path) -> ConvergenceReport:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        nk = len(header) - 4
        rows = [
            ConvergenceRow(
                int(c[0]),
                float(c[1]),
                float(c[2]),
                None if c[3] == "" else float(c[3]),
                tuple(float(v) for v in c[4 : 4 + nk]),
            )
            for c in reader
        ]
    return ConvergenceReport(rows)


def emit_field(grid: UniformGrid, values, path) -> None:
    """Write one ``x[,y],value`` line per node in node order."""
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size != grid.num_nodes:
        raise ValueError(f"{values.size} values for {grid.num_nodes} nodes")
    data = np.column_stack([grid.coordinates(), values])
    try:
        np.savetxt(path, data, delimiter=",", fmt="%.17g")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
