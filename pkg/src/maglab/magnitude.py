"""Similarity matrices, PSD diagnostics, weightings, magnitude, scale sweeps.

The similarity matrix of a finite metric space has entries exp(-d(x, y)).
When it is positive definite the space's magnitude is the sum of the
weighting w solving  Z w = 1.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .errors import (
    DegenerateQuadraticForm,
    EigensolverFailure,
    InsufficientRecords,
    NotPositiveDefinite,
)
from .metric_core import FiniteMetricSpace, scale_space

FULL_EIG_MAX_SIZE = 4000
ILL_CONDITION_LIMIT = 1e12


def psd_tolerance(lambda_max: float) -> float:
    """Verdict band: scale-invariant and conservative for entries <= 1."""
    return 1e-9 * max(1.0, lambda_max)


@dataclass(frozen=True)
class SimilarityMatrix:
    z: np.ndarray
    source: FiniteMetricSpace

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        z.setflags(write=False)
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class SpectrumDiagnostics:
    lambda_min: float
    lambda_max: float
    condition_estimate: float
    verdict: str  # PositiveDefinite | PositiveSemidefinite | Indefinite
    tolerance_used: float

    def to_dict(self) -> dict:
        return {
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "condition_estimate": self.condition_estimate,
            "verdict": self.verdict,
            "tolerance_used": self.tolerance_used,
        }


@dataclass(frozen=True)
class MagnitudeReport:
    magnitude: float
    weighting: np.ndarray
    residual: float
    positively_weighted: bool
    diagnostics: SpectrumDiagnostics
    ill_conditioned: bool = False

    def to_dict(self) -> dict:
        return {
            "magnitude": self.magnitude,
            "weighting": np.asarray(self.weighting).tolist(),
            "residual": self.residual,
            "positively_weighted": self.positively_weighted,
            "ill_conditioned": self.ill_conditioned,
            "diagnostics": self.diagnostics.to_dict(),
        }


@dataclass(frozen=True)
class SweepRecord:
    t: float
    lambda_min: float
    verdict: str
    magnitude: Optional[float] = None
    diversity: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "lambda_min": self.lambda_min,
            "verdict": self.verdict,
            "magnitude": self.magnitude,
            "diversity": self.diversity,
        }


@dataclass(frozen=True)
class ScaleSweep:
    records: list
    spec: Optional[object] = None

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_json() if hasattr(self.spec, "to_json") else None,
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "lambda_min", "verdict", "magnitude", "diversity"])
            for r in self.records:
                writer.writerow([r.t, r.lambda_min, r.verdict, r.magnitude, r.diversity])


def similarity(space: FiniteMetricSpace) -> SimilarityMatrix:
    """Entrywise exp(-d), with an exactly unit diagonal."""
    z = np.exp(-space.dist)
    np.fill_diagonal(z, 1.0)
    return SimilarityMatrix(z=z, source=space)


def _extremal_eigenvalues(z: np.ndarray) -> tuple[float, float]:
    n = z.shape[0]
    if n <= FULL_EIG_MAX_SIZE:
        vals = np.linalg.eigvalsh(z)
        return float(vals[0]), float(vals[-1])
    # Lanczos for extremal eigenvalues only; sweeps never need the full
    # spectrum above this size.
    try:
        lo = scipy.sparse.linalg.eigsh(z, k=1, which="SA", return_eigenvectors=False)
        hi = scipy.sparse.linalg.eigsh(z, k=1, which="LA", return_eigenvectors=False)
        return float(lo[0]), float(hi[0])
    except scipy.sparse.linalg.ArpackNoConvergence as exc:
        # fall back to the dense solver rather than giving up
        try:
            vals = np.linalg.eigvalsh(z)
            return float(vals[0]), float(vals[-1])
        except np.linalg.LinAlgError:
            raise EigensolverFailure(
                "Lanczos iteration did not converge",
                iterations=getattr(exc, "maxiter", None),
            ) from exc


def spectrum_diagnostics(space: FiniteMetricSpace) -> SpectrumDiagnostics:
    """Extremal eigenvalues of the similarity matrix and a PSD verdict."""
    z = similarity(space).z
    lo, hi = _extremal_eigenvalues(z)
    tau = psd_tolerance(hi)
    if lo > tau:
        verdict = "PositiveDefinite"
    elif lo >= -tau:
        verdict = "PositiveSemidefinite"
    else:
        verdict = "Indefinite"
    cond = hi / lo if lo > 0 else math.inf
    return SpectrumDiagnostics(
        lambda_min=lo,
        lambda_max=hi,
        condition_estimate=cond,
        verdict=verdict,
        tolerance_used=tau,
    )


def weighting(space: FiniteMetricSpace) -> MagnitudeReport:
    """Solve Z w = 1 by Cholesky with one step of iterative refinement."""
    diag = spectrum_diagnostics(space)
    if diag.verdict != "PositiveDefinite":
        raise NotPositiveDefinite(
            f"similarity matrix is {diag.verdict} (lambda_min={diag.lambda_min:.3g})",
            diagnostics=diag,
        )
    z = similarity(space).z
    ones = np.ones(z.shape[0])
    try:
        factor = scipy.linalg.cho_factor(z, lower=True)
        w = scipy.linalg.cho_solve(factor, ones)
        w = w + scipy.linalg.cho_solve(factor, ones - z @ w)
    except scipy.linalg.LinAlgError:
        # Marginally PD matrices can fail to factor; least squares still
        # yields a usable weighting with an honest residual.
        w, *_ = np.linalg.lstsq(z, ones, rcond=None)
    residual = float(np.abs(z @ w - 1.0).max())
    tau_w = 1e-10 * max(1.0, float(np.abs(w).max()))
    return MagnitudeReport(
        magnitude=float(w.sum()),
        weighting=w,
        residual=residual,
        positively_weighted=bool(w.min() >= -tau_w),
        diagnostics=diag,
        ill_conditioned=bool(diag.condition_estimate > ILL_CONDITION_LIMIT),
    )


def magnitude(space: FiniteMetricSpace) -> float:
    return weighting(space).magnitude


def rayleigh(space: FiniteMetricSpace, mu) -> float:
    """The quotient (sum mu)^2 / (mu' Z mu)."""
    mu = np.asarray(mu, dtype=float)
    z = similarity(space).z
    denom = float(mu @ z @ mu)
    if abs(denom) <= 1e-14 * float(mu @ mu):
        raise DegenerateQuadraticForm("quadratic form vanishes at this vector")
    return float(mu.sum()) ** 2 / denom


def scale_sweep(
    space: FiniteMetricSpace, grid, with_diversity: bool = False
) -> ScaleSweep:
    """Diagnostics (and magnitude/diversity where defined) for each t in grid."""
    ts = sorted(float(t) for t in grid)
    if not ts:
        raise InsufficientRecords("scale grid must be nonempty")
    records = []
    for t in ts:
        scaled = scale_space(space, t)
        diag = spectrum_diagnostics(scaled)
        mag = None
        div = None
        if diag.verdict == "PositiveDefinite":
            mag = weighting(scaled).magnitude
        if with_diversity and diag.verdict in ("PositiveDefinite", "PositiveSemidefinite"):
            from .diversity import max_diversity

            div = max_diversity(scaled).diversity
        records.append(
            SweepRecord(
                t=t, lambda_min=diag.lambda_min, verdict=diag.verdict,
                magnitude=mag, diversity=div,
            )
        )
    return ScaleSweep(records=records, spec=space.provenance)


def magnitude_dimension_estimate(sweep: ScaleSweep, window) -> tuple[float, float]:
    """Least-squares slope of log magnitude against log t over a t-window."""
    lo, hi = window
    pts = [
        (r.t, r.magnitude)
        for r in sweep.records
        if r.magnitude is not None and lo <= r.t <= hi
    ]
    if len(pts) < 3:
        raise InsufficientRecords(
            f"need at least 3 magnitude records in window, have {len(pts)}"
        )
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    n = len(x)
    xbar, ybar = x.mean(), y.mean()
    sxx = float(((x - xbar) ** 2).sum())
    slope = float(((x - xbar) * (y - ybar)).sum()) / sxx
    intercept = ybar - slope * xbar
    resid = y - (intercept + slope * x)
    if n > 2:
        stderr = math.sqrt(float((resid**2).sum()) / (n - 2) / sxx)
    else:
        stderr = 0.0
    return slope, stderr
