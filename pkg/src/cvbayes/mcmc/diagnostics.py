"""Chain diagnostics: autocorrelation, effective sample size, Geweke check.

The effective sample size uses the initial-positive-sequence truncation:
ESS = n / (1 + 2 * sum(acf_k)), with the sum cut at the first even-lag pair
(acf_2m + acf_2m+1) that is nonpositive.  The Geweke score compares the
first 10% of a chain with the last 50%, standardising each segment mean by
its own ESS-adjusted variance.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..exceptions import DegenerateChainError, ValidationError
from ..validation import check_vector

#: slack factor allowed above n for antithetic chains
_ESS_CAP = 1.05
#: autocorrelation lags stored in a ChainReport
_REPORT_LAGS = 50


@dataclass
class ChainReport:
    """Summary of one sampler run (all per-coordinate arrays share order).

    ``kind`` is "metropolis", "gibbs" or "independent" (direct draws from a
    closed-form posterior); the acceptance-rate band of the convergence gate
    only applies to the first two.
    """

    kind: str
    acceptance_rate: float
    n_retained: int
    ess: np.ndarray
    geweke_z: np.ndarray
    acf: np.ndarray
    param_names: tuple[str, ...] | None = None
    step_scales: np.ndarray | None = None
    scale_trace: np.ndarray | None = None
    trace_path: str | None = None
    converged: bool | None = None

    @property
    def min_ess(self) -> float:
        return float(np.min(self.ess))

    @property
    def max_abs_geweke(self) -> float:
        return float(np.max(np.abs(self.geweke_z)))

    def summary_dict(self) -> dict:
        max_z = self.max_abs_geweke
        out = {
            "kind": self.kind,
            "acceptance_rate": self.acceptance_rate,
            "n_retained": self.n_retained,
            "min_ess": self.min_ess,
            # infinite z marks a degenerate chain; JSON has no Infinity
            "max_abs_geweke": max_z if np.isfinite(max_z) else None,
            "converged": self.converged,
        }
        if self.trace_path is not None:
            out["trace_path"] = self.trace_path
        return out


@dataclass(frozen=True)
class GateThresholds:
    acceptance_band: tuple[float, float] = (0.15, 0.45)
    min_ess: float = 400.0
    max_abs_geweke: float = 3.0


def autocorrelation(draws, max_lag: int | None = None) -> np.ndarray:
    """Sample autocorrelations rho_0..rho_max_lag (FFT-based, biased acov)."""
    x = check_vector(draws, "draws", min_length=2)
    n = x.size
    if max_lag is None:
        max_lag = n - 1
    max_lag = min(int(max_lag), n - 1)
    if np.ptp(x) == 0.0:
        raise DegenerateChainError("constant chain has no autocorrelation")
    x = x - x.mean()
    var = float(np.dot(x, x)) / n
    if var == 0.0:
        raise DegenerateChainError("constant chain has no autocorrelation")
    nfft = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, nfft)
    acov = np.fft.irfft(f * np.conj(f))[: max_lag + 1].real / n
    return acov / acov[0]


def effective_sample_size(draws, min_draws: int = 100) -> float:
    """ESS by initial-positive-sequence truncation; in (0, 1.05 * n]."""
    x = check_vector(draws, "draws", min_length=1)
    if x.size < min_draws:
        raise ValidationError(f"ESS needs at least {min_draws} draws, got {x.size}")
    rho = autocorrelation(x)
    n = x.size
    tail = 0.0
    m = 1
    while 2 * m + 1 < rho.size:
        pair = rho[2 * m] + rho[2 * m + 1]
        if pair <= 0.0:
            break
        tail += pair
        m += 1
    tau = 1.0 + 2.0 * rho[1] + 2.0 * tail if rho.size > 1 else 1.0
    tau = max(tau, 1.0 / _ESS_CAP)
    return min(n / tau, _ESS_CAP * n)


def geweke_z(draws, first: float = 0.1, last: float = 0.5) -> float:
    """Standardised difference between early and late segment means."""
    x = check_vector(draws, "draws", min_length=20)
    n = x.size
    a = x[: max(int(first * n), 10)]
    b = x[-max(int(last * n), 10):]
    if np.ptp(a) == 0.0 or np.ptp(b) == 0.0:
        raise DegenerateChainError("constant chain segment in Geweke check")
    var_a, var_b = float(a.var(ddof=1)), float(b.var(ddof=1))
    se2 = var_a / effective_sample_size(a, min_draws=10) + var_b / effective_sample_size(b, min_draws=10)
    return float((a.mean() - b.mean()) / np.sqrt(se2))


def summarize_chain(
    draws: np.ndarray,
    kind: str,
    acceptance_rate: float,
    param_names: tuple[str, ...] | None = None,
    step_scales: np.ndarray | None = None,
    scale_trace: np.ndarray | None = None,
) -> ChainReport:
    """Build a ChainReport from a retained draw matrix (n_draws, n_coords)."""
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    if draws.ndim != 2:
        raise ValidationError("draw matrix must be 2-d (n_draws, n_coords)")
    n, d = draws.shape
    ess = np.empty(d)
    zscores = np.empty(d)
    acf = np.empty((d, min(_REPORT_LAGS, n - 1) + 1))
    for j in range(d):
        col = draws[:, j]
        try:
            ess[j] = effective_sample_size(col)
            zscores[j] = geweke_z(col)
            acf[j] = autocorrelation(col, max_lag=acf.shape[1] - 1)
        except DegenerateChainError:
            ess[j] = 0.0
            zscores[j] = np.inf
            acf[j] = np.nan
            acf[j, 0] = 1.0
    return ChainReport(
        kind=kind,
        acceptance_rate=float(acceptance_rate),
        n_retained=n,
        ess=ess,
        geweke_z=zscores,
        acf=acf,
        param_names=param_names,
        step_scales=None if step_scales is None else np.asarray(step_scales, dtype=float),
        scale_trace=scale_trace,
    )


def convergence_gate(report: ChainReport, thresholds: GateThresholds | None = None) -> bool:
    """Scalar convergence decision; also stored on ``report.converged``.

    Independent (non-MCMC) draws converge by construction and always pass;
    their diagnostics are reported but not thresholded.
    """
    if report.kind == "independent":
        report.converged = True
        return True
    t = thresholds or GateThresholds()
    lo, hi = t.acceptance_band
    ok = (
        lo <= report.acceptance_rate <= hi
        and report.min_ess >= t.min_ess
        and report.max_abs_geweke < t.max_abs_geweke
    )
    report.converged = bool(ok)
    return report.converged


def write_trace_csv(path, draws: np.ndarray, param_names) -> None:
    """Trace export: columns ``iteration`` + one per coordinate."""
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", *param_names])
        for i, row in enumerate(draws):
            writer.writerow([i, *(repr(float(v)) for v in row)])


def write_acf_csv(path, acf: np.ndarray, param_names) -> None:
    """ACF export: columns ``lag`` + one autocorrelation column per coordinate."""
    acf = np.atleast_2d(np.asarray(acf, dtype=float))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lag", *(f"acf_{p}" for p in param_names)])
        for lag in range(acf.shape[1]):
            writer.writerow([lag, *(repr(float(v)) for v in acf[:, lag])])


def read_trace_csv(path) -> tuple[tuple[str, ...], np.ndarray]:
    """Read a trace written by :func:`write_trace_csv`."""
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or len(rows) < 2:
        raise ValidationError(f"{path}: empty or header-only trace file")
    header = rows[0]
    if not header or header[0] != "iteration" or len(header) < 2:
        raise ValidationError(f"{path}: expected header 'iteration,<param>,...'")
    try:
        data = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
    except ValueError as exc:
        raise ValidationError(f"{path}: non-numeric trace entry ({exc})") from exc
    return tuple(header[1:]), data
