"""Maximum diversity via simplex-constrained quadratic minimization.

Maximum diversity is 1 / min { mu' Z mu : mu in the probability simplex }.
The minimizer is found by Frank-Wolfe with away steps and exact line
search; linear minimization over the simplex is a single argmin of the
gradient, and away steps identify the support of the optimal measure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import IndefiniteForm, Inconsistent
from .magnitude import similarity, spectrum_diagnostics, weighting
from .metric_core import FiniteMetricSpace

SUPPORT_THRESHOLD = 1e-9


@dataclass(frozen=True)
class DiversityReport:
    diversity: float
    measure: np.ndarray
    support: tuple
    fw_gap: float
    iterations: int
    converged: bool
    upper_bound: float

    def to_dict(self) -> dict:
        return {
            "diversity": self.diversity,
            "upper_bound": self.upper_bound,
            "measure": np.asarray(self.measure).tolist(),
            "support": list(self.support),
            "fw_gap": self.fw_gap,
            "iterations": self.iterations,
            "converged": self.converged,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def max_diversity(
    space: FiniteMetricSpace, tol: float = 1e-8, max_iters: int = 100_000
) -> DiversityReport:
    """Minimize mu' Z mu over the probability simplex from the uniform start.

    Stops when the Frank-Wolfe duality gap falls below tol * q(mu).  The
    returned diversity 1/q(mu) is a certified lower bound on the maximum
    diversity; 1/(q(mu) - gap) is the matching upper bound.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    diag = spectrum_diagnostics(space)
    if diag.verdict == "Indefinite":
        raise IndefiniteForm(
            f"similarity matrix is indefinite (lambda_min={diag.lambda_min:.3g}); "
            "the quadratic form is nonconvex",
            diagnostics=diag,
        )
    z = similarity(space).z
    n = z.shape[0]
    mu = np.full(n, 1.0 / n)
    zmu = z @ mu
    q = float(mu @ zmu)
    gap = math.inf
    converged = False
    iterations = 0

    for iterations in range(1, max_iters + 1):
        g = 2.0 * zmu
        s = int(np.argmin(g))
        gap = float(g @ mu - g[s])
        if gap <= tol * q:
            converged = True
            break

        active = np.flatnonzero(mu > 0.0)
        a = int(active[np.argmax(g[active])])
        fw_score = gap
        away_score = float(g[a] - g @ mu)

        if fw_score >= away_score:
            d = -mu.copy()
            d[s] += 1.0
            zd = z[:, s] - zmu
            gamma_max = 1.0
        else:
            if mu[a] >= 1.0:
                # single-vertex iterate; away step impossible, fall back
                d = -mu.copy()
                d[s] += 1.0
                zd = z[:, s] - zmu
                gamma_max = 1.0
            else:
                d = mu.copy()
                d[a] -= 1.0
                zd = zmu - z[:, a]
                gamma_max = mu[a] / (1.0 - mu[a])

        curvature = float(d @ zd)
        slope = float(g @ d)
        if curvature > 0:
            gamma = min(gamma_max, max(0.0, -slope / (2.0 * curvature)))
        else:
            gamma = gamma_max if slope < 0 else 0.0
        if gamma == 0.0:
            converged = gap <= tol * q
            break
        mu = mu + gamma * d
        np.maximum(mu, 0.0, out=mu)
        zmu = zmu + gamma * zd
        q = float(mu @ zmu)

    total = float(mu.sum())
    if abs(total - 1.0) > 1e-13:
        mu = mu / total
        zmu = z @ mu
        q = float(mu @ zmu)
    support = tuple(int(i) for i in np.flatnonzero(mu > SUPPORT_THRESHOLD))
    upper = 1.0 / (q - gap) if q - max(gap, 0.0) > 0 else math.inf
    return DiversityReport(
        diversity=1.0 / q,
        measure=mu,
        support=support,
        fw_gap=gap,
        iterations=iterations,
        converged=converged,
        upper_bound=upper,
    )


def is_positively_weighted(
    space: FiniteMetricSpace, tol: float = 1e-7
) -> tuple[bool, str]:
    """Decide whether magnitude equals maximum diversity.

    The fast certificate is the sign of the weighting; the cross-check
    compares magnitude with the computed diversity.  Disagreement between
    the two is surfaced as Inconsistent rather than hidden.
    """
    report = weighting(space)  # raises NotPositiveDefinite when not PD
    flag_w = report.positively_weighted
    div = max_diversity(space)
    if not div.converged:
        return flag_w, "weighting_sign_only"
    flag_d = abs(report.magnitude - div.diversity) <= tol * report.magnitude
    if flag_w != flag_d:
        raise Inconsistent(
            f"weighting sign says {flag_w} but |magnitude - diversity| = "
            f"{abs(report.magnitude - div.diversity):.3g} "
            f"(magnitude {report.magnitude:.6g}, diversity {div.diversity:.6g})"
        )
    return flag_w, "weighting_sign"


def diversity_diameter_check(space: FiniteMetricSpace) -> bool:
    """Maximum diversity never exceeds exp(diameter)."""
    report = max_diversity(space)
    return report.diversity <= math.exp(space.diameter) + 1e-9
