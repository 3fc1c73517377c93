"""Negative type testing and stable positive definiteness classification.

A metric space has negative type exactly when its half-snowflake embeds
isometrically in a Hilbert space, which for a finite space reduces to
positive semidefiniteness of the centered Gram matrix built from the
distances themselves:

    G[i][j] = (d(x0, xi) + d(x0, xj) - d(xi, xj)) / 2

Negative type is equivalent to the space being positive definite at every
scale, which is what the scale scan probes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidParams
from .magnitude import psd_tolerance, spectrum_diagnostics
from .metric_core import FiniteMetricSpace, scale_space

DEFAULT_SCAN_SCALES = tuple(2.0**k for k in range(-10, 5))


@dataclass(frozen=True)
class NegativeTypeReport:
    negative_type: bool
    gram_lambda_min: float
    basepoint: int
    witness_vector: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        return {
            "negative_type": self.negative_type,
            "gram_lambda_min": self.gram_lambda_min,
            "basepoint": self.basepoint,
            "witness_vector": (
                None if self.witness_vector is None
                else np.asarray(self.witness_vector).tolist()
            ),
        }


@dataclass(frozen=True)
class StabilityReport:
    records: list  # (t, lambda_min) pairs
    classification: str  # StablyPositiveDefinite | NotStablyPD | Undetermined
    negative_type_report: Optional[NegativeTypeReport] = None
    failing_scales: tuple = ()

    def first_failing_scale(self) -> Optional[float]:
        return self.failing_scales[0] if self.failing_scales else None

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "failing_scales": list(self.failing_scales),
            "records": [{"t": t, "lambda_min": lam} for t, lam in self.records],
            "negative_type": (
                None if self.negative_type_report is None
                else self.negative_type_report.to_dict()
            ),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def negative_type_test(
    space: FiniteMetricSpace, basepoint: int = 0
) -> NegativeTypeReport:
    """Gram PSD test for negative type, with a mean-zero witness on failure."""
    n = len(space)
    if not (0 <= basepoint < n):
        raise InvalidParams(f"basepoint {basepoint} out of range for {n} points")
    d = space.dist
    if n == 1:
        return NegativeTypeReport(True, 0.0, basepoint)
    others = [i for i in range(n) if i != basepoint]
    d0 = d[basepoint, others]
    g = 0.5 * (d0[:, None] + d0[None, :] - d[np.ix_(others, others)])
    vals, vecs = np.linalg.eigh(g)
    lam_min = float(vals[0])
    tau = psd_tolerance(float(vals[-1]))
    if lam_min >= -tau:
        return NegativeTypeReport(True, lam_min, basepoint)
    # Mean-zero vector x with x' D x = -2 u' G u > 0, from the most
    # negative eigenvector u of G.
    u = vecs[:, 0]
    x = np.zeros(n)
    x[others] = u
    x[basepoint] = -u.sum()
    return NegativeTypeReport(False, lam_min, basepoint, witness_vector=x)


def stability_scan(
    space: FiniteMetricSpace, scales=DEFAULT_SCAN_SCALES
) -> StabilityReport:
    """Classify stable positive definiteness from a scale scan plus Gram test."""
    scales = sorted(float(t) for t in scales)
    if not scales or scales[0] <= 0:
        raise InvalidParams("scan scales must be positive")
    records = []
    failing = []
    for t in scales:
        diag = spectrum_diagnostics(scale_space(space, t))
        records.append((t, diag.lambda_min))
        if diag.verdict == "Indefinite":
            failing.append(t)
    nt = negative_type_test(space)
    if failing:
        classification = "NotStablyPD"
    elif nt.negative_type:
        classification = "StablyPositiveDefinite"
    else:
        # A finite scan cannot certify stability by itself; only the Gram
        # test can, and here it declined.
        classification = "Undetermined"
    return StabilityReport(
        records=records,
        classification=classification,
        negative_type_report=nt,
        failing_scales=tuple(failing),
    )
