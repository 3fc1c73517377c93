"""Net-convergence studies, growth-bound checks, and Fourier-side bounds.

Magnitude of a compact space is approached through finite nets converging
in Hausdorff distance; the growth of t -> |tA| is bracketed below by a
volume ratio and above through a mollifier/Fourier quotient whose key
ingredient is the transform of exp(-|x|^p).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
import scipy.special

from .errors import (
    InvalidParams,
    NegativeRatioOnly,
    NotPositiveDefinite,
    QuadratureDivergence,
)
from .magnitude import magnitude_dimension_estimate, rayleigh, scale_sweep, weighting
from .metric_core import FiniteMetricSpace, SpaceSpec, generate, lp_product
from .negative_type import StabilityReport, stability_scan

# which SpaceSpec parameter a study level substitutes, per family
_LEVEL_PARAM = {
    "interval_net": "n",
    "circle_net": "n",
    "cantor_net": "level",
    "grid_net": "m",
    "sphere_fibonacci_net": "n",
    "hyperbolic_disk_net": "n_r",
    "ultrametric_tree": "n",
    "weighted_tree": "n",
}

TAIL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class StudyRecord:
    level: int
    n_points: int
    gap: Optional[float]
    magnitude: Optional[float]
    failure: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "n_points": self.n_points,
            "gap": self.gap,
            "magnitude": self.magnitude,
            "failure": self.failure,
        }


@dataclass(frozen=True)
class ConvergenceStudy:
    records: list
    extrapolated_limit: Optional[float]
    fit_residual: Optional[float]
    monotone: bool

    def to_dict(self) -> dict:
        return {
            "extrapolated_limit": self.extrapolated_limit,
            "fit_residual": self.fit_residual,
            "monotone": self.monotone,
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["level", "n_points", "gap", "magnitude"])
            for r in self.records:
                writer.writerow([r.level, r.n_points, r.gap, r.magnitude])


def interval_family(
    length: float, kind: str = "uniform", scale: float = 1.0, snowflake: float = 1.0
) -> Callable[[int], SpaceSpec]:
    """Level -> spec for interval nets; 'chebyshev' gives cosine-clustered nets."""
    if kind == "uniform":
        def build(n: int) -> SpaceSpec:
            return SpaceSpec(
                "interval_net", {"length": length, "n": n},
                scale=scale, snowflake=snowflake,
            )
    elif kind == "chebyshev":
        def build(n: int) -> SpaceSpec:
            k = np.arange(n)
            pts = 0.5 * length * (1.0 - np.cos(math.pi * k / max(n - 1, 1)))
            return SpaceSpec(
                "point_cloud_lp", {"points": pts.tolist(), "p": 2.0},
                scale=scale, snowflake=snowflake,
            )
    else:
        raise InvalidParams(f"unknown interval family kind {kind!r}")
    return build


def _spec_for_level(template, level: int) -> SpaceSpec:
    if callable(template):
        return template(level)
    key = _LEVEL_PARAM.get(template.family)
    if key is None:
        raise InvalidParams(
            f"family {template.family!r} has no refinement parameter; "
            "pass a callable template"
        )
    return template.with_params(**{key: level})


def _ambient_gap(coarse: FiniteMetricSpace, fine: FiniteMetricSpace) -> Optional[float]:
    """Hausdorff distance between two nets of one family, in the net metric."""
    if coarse.coords is None or fine.coords is None:
        return None
    a, b = coarse.coords, fine.coords
    spec = fine.provenance
    p = 2.0
    if spec is not None and "p" in spec.params:
        p = float(spec.params["p"])
    diff = np.abs(a[:, None, :] - b[None, :, :])
    if math.isinf(p):
        cross = diff.max(axis=2)
    elif p >= 1:
        cross = (diff**p).sum(axis=2) ** (1.0 / p)
    else:
        cross = (diff**p).sum(axis=2)
    gap = max(cross.min(axis=1).max(), cross.min(axis=0).max())
    # monotone distance transforms commute with the sup-inf structure
    if spec is not None:
        gap = spec.scale * gap**spec.snowflake
    return float(gap)


def _voronoi_cell_measure(space: FiniteMetricSpace) -> Optional[np.ndarray]:
    """1-D cell lengths for a quadrature-weighted Rayleigh lower bound."""
    if space.coords is None or space.coords.shape[1] != 1:
        return None
    x = np.sort(space.coords[:, 0])
    mid = (x[1:] + x[:-1]) / 2.0
    edges = np.concatenate([[x[0]], mid, [x[-1]]])
    return np.diff(edges)


def approx_magnitude(
    template: Union[SpaceSpec, Callable[[int], SpaceSpec]],
    levels,
    quadrature: bool = False,
) -> ConvergenceStudy:
    """Magnitude per refinement level, with a gap-fitted extrapolated limit.

    With ``quadrature`` the recorded value is the cell-measure-weighted
    Rayleigh quotient, a certified lower bound that needs no linear solve.
    """
    levels = sorted(int(k) for k in levels)
    if not levels:
        raise InvalidParams("levels must be nonempty")
    spaces = {}
    records = []
    finest = generate(_spec_for_level(template, levels[-1]))
    for k in levels:
        space = finest if k == levels[-1] else generate(_spec_for_level(template, k))
        spaces[k] = space
        gap = _ambient_gap(space, finest)
        try:
            if quadrature:
                mu = _voronoi_cell_measure(space)
                if mu is None:
                    raise InvalidParams(
                        "quadrature weighting needs 1-D ambient coordinates"
                    )
                value = rayleigh(space, mu)
            else:
                value = weighting(space).magnitude
            records.append(StudyRecord(k, len(space), gap, value))
        except NotPositiveDefinite as exc:
            records.append(
                StudyRecord(k, len(space), gap, None, failure=str(exc))
            )

    good = [r for r in records if r.magnitude is not None]
    mags = [r.magnitude for r in good]
    monotone = all(b >= a - 1e-10 for a, b in zip(mags, mags[1:]))

    limit = None
    residual = None
    fit = [r for r in good if r.gap is not None][-3:]
    if len(fit) >= 2 and any(r.gap > 0 for r in fit):
        # m(k) = m_inf - c * gap(k), solved by least squares over the
        # finest levels where the first-order model is accurate
        g = np.array([r.gap for r in fit])
        m = np.array([r.magnitude for r in fit])
        design = np.stack([np.ones_like(g), -g], axis=1)
        coef, *_ = np.linalg.lstsq(design, m, rcond=None)
        limit = float(coef[0])
        residual = float(np.abs(design @ coef - m).max())
    elif good:
        limit = mags[-1]
        residual = 0.0
    return ConvergenceStudy(
        records=records, extrapolated_limit=limit,
        fit_residual=residual, monotone=monotone,
    )


def lp_ball_volume(n: int, p: float) -> float:
    """Volume of the unit l_p ball in R^n: (2 Gamma(1+1/p))^n / Gamma(1+n/p)."""
    if n < 1 or not p > 0:
        raise InvalidParams("lp_ball_volume needs n >= 1 and p > 0")
    if math.isinf(p):
        return 2.0**n
    g = scipy.special.gamma
    return float((2.0 * g(1.0 + 1.0 / p)) ** n / g(1.0 + n / p))


def growth_lower_bound(n: int, p: float, alpha: float, vol_a: float, t: float) -> float:
    """Volume-ratio lower bound for |tA| in the snowflaked l_p metric."""
    if n < 1 or not p > 0 or not (0 < alpha <= 1) or not vol_a > 0 or not t >= 0:
        raise InvalidParams("growth_lower_bound parameters out of range")
    beta = alpha * min(1.0, p)
    return float(
        vol_a * t**n / (scipy.special.gamma(n / beta + 1.0) * lp_ball_volume(n, p))
    )


@dataclass(frozen=True)
class BoundCheck:
    t: float
    lower_bound: float
    net_magnitude: float
    satisfied: bool

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "lower_bound": self.lower_bound,
            "net_magnitude": self.net_magnitude,
            "satisfied": self.satisfied,
        }


@dataclass(frozen=True)
class GrowthStudy:
    checks: list
    dimension_slope: Optional[float]
    slope_stderr: Optional[float]

    def to_dict(self) -> dict:
        return {
            "dimension_slope": self.dimension_slope,
            "slope_stderr": self.slope_stderr,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "net_magnitude", "lower_bound", "satisfied"])
            for c in self.checks:
                writer.writerow([c.t, c.net_magnitude, c.lower_bound, c.satisfied])


def growth_bound_study(
    template: SpaceSpec, t_grid, margin: float = 0.05
) -> GrowthStudy:
    """Check net magnitudes of a scaled unit-cube grid against the lower bound.

    The margin absorbs both the stated 5% slack and the net-resolution
    deficit of a finite lattice standing in for the solid cube.
    """
    if template.family != "grid_net":
        raise InvalidParams("growth_bound_study expects a grid_net template")
    n = int(template.params.get("n", 2))
    p = float(template.params.get("p", 2.0))
    alpha = template.snowflake
    space = generate(template)
    sweep = scale_sweep(space, t_grid)
    checks = []
    for rec in sweep.records:
        if rec.magnitude is None:
            continue
        lb = growth_lower_bound(n, p, alpha, 1.0, rec.t)
        checks.append(
            BoundCheck(
                t=rec.t,
                lower_bound=lb,
                net_magnitude=rec.magnitude,
                satisfied=rec.magnitude >= lb * (1.0 - margin),
            )
        )
    slope = stderr = None
    if len(checks) >= 3:
        slope, stderr = magnitude_dimension_estimate(
            sweep, (checks[0].t, checks[-1].t)
        )
    return GrowthStudy(checks=checks, dimension_slope=slope, slope_stderr=stderr)


@dataclass(frozen=True)
class FourierReport:
    p: float
    grid: np.ndarray
    values: np.ndarray
    positive: bool
    radially_decreasing: bool
    fitted_c: float
    tail_estimate: float

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "grid": np.asarray(self.grid).tolist(),
            "values": np.asarray(self.values).tolist(),
            "positive": self.positive,
            "radially_decreasing": self.radially_decreasing,
            "fitted_c": self.fitted_c,
            "tail_estimate": self.tail_estimate,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _cosine_transform(f: np.ndarray, x: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    """2 * integral_0^L f(x) cos(2 pi x w) dx by the trapezoid rule.

    Chunked over frequencies so fine spatial grids stay within memory.
    """
    out = np.empty(len(omegas))
    chunk = max(1, int(2e7 / max(len(x), 1)))
    for start in range(0, len(omegas), chunk):
        block = omegas[start : start + chunk]
        kernel = np.cos(2.0 * math.pi * np.outer(block, x))
        out[start : start + len(block)] = 2.0 * np.trapezoid(
            kernel * f[None, :], x, axis=1
        )
    return out


def _stable_density_tail(p: float, length: float) -> float:
    """Exact truncation error integral_L^inf exp(-x^p) dx."""
    inv = 1.0 / p
    return float(
        scipy.special.gamma(inv) * scipy.special.gammaincc(inv, length**p) / p
    )


def gamma_hat_1d(
    p: float, L: float = 40.0, N: int = 2**16, omega_max: float = 10.0,
    n_omega: int = 401,
) -> FourierReport:
    """Sampled transform of exp(-|x|^p) on |w| <= omega_max.

    Uses the convention f_hat(w) = integral f(x) exp(-2 pi i x w) dx; the
    integrand is even, so this is a cosine transform.
    """
    if not (0 < p <= 2):
        raise InvalidParams("gamma_hat_1d needs 0 < p <= 2")
    tail = _stable_density_tail(p, L)
    if tail > TAIL_TOLERANCE:
        raise QuadratureDivergence(
            f"truncation tail {tail:.3g} exceeds tolerance; raise L"
        )
    x = np.linspace(0.0, L, N + 1)
    f = np.exp(-(x**p))
    omegas = np.linspace(0.0, omega_max, n_omega)
    values = _cosine_transform(f, x, omegas)
    positive = bool(values.min() > 0.0)
    dec_tol = 1e-7 * float(values.max())
    decreasing = bool(np.all(np.diff(values) <= dec_tol))
    fitted_c = float((values * (1.0 + omegas) ** (1.0 + p)).min()) if positive else 0.0
    return FourierReport(
        p=p, grid=omegas, values=values, positive=positive,
        radially_decreasing=decreasing, fitted_c=fitted_c, tail_estimate=tail,
    )


@dataclass(frozen=True)
class FourierUpperBound:
    bound: float
    error_estimate: float
    argmax_omega: float

    def __float__(self) -> float:
        return self.bound

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "error_estimate": self.error_estimate,
            "argmax_omega": self.argmax_omega,
        }


def fourier_upper_bound_1d(
    length: float, p: float, alpha: float, mollifier_radius: float,
    omega_max: float = 20.0, n_omega: int = 2001,
) -> FourierUpperBound:
    """Mollifier-quotient upper bound for the magnitude of a 1-D interval.

    Builds a smooth plateau function equal to 1 on [-length, length] (an
    indicator convolved with a normalized bump), and returns the grid
    supremum of its transform divided by the transform of the interval's
    metric kernel exp(-|x|^r), r = alpha * min(1, p).
    """
    if not (0 < p <= 2) or not (0 < alpha <= 1):
        raise InvalidParams("need 0 < p <= 2 and 0 < alpha <= 1")
    if not mollifier_radius > length:
        raise InvalidParams("mollifier_radius must exceed the interval length")
    if length < 0:
        raise InvalidParams("length must be nonnegative")
    r = alpha * min(1.0, p)
    width = mollifier_radius - length
    half = mollifier_radius  # indicator half-width so the plateau covers A - A

    omegas = np.linspace(0.0, omega_max, n_omega)

    # normalized bump transform by quadrature on its support
    xb = np.linspace(-1.0, 1.0, 4097)[1:-1]
    bump = np.exp(1.0 / (xb**2 - 1.0))
    bump_mass = float(np.trapezoid(bump, xb))
    kernel = np.cos(2.0 * math.pi * np.outer(omegas, width * xb))
    bump_hat = np.trapezoid(kernel * bump[None, :], width * xb, axis=1) / (
        width * bump_mass
    )

    with np.errstate(invalid="ignore"):
        indicator_hat = np.where(
            omegas == 0.0,
            2.0 * half,
            np.sin(2.0 * math.pi * half * omegas) / (math.pi * omegas),
        )
    psi_hat = indicator_hat * bump_hat

    gamma = gamma_hat_1d(r, omega_max=omega_max, n_omega=n_omega)
    ratio = psi_hat / gamma.values
    if ratio.max() <= 0:
        raise NegativeRatioOnly("mollifier quotient is nonpositive on the grid")
    idx = int(np.argmax(ratio))
    # quadrature error: tail truncation of the denominator, relative
    err = float(ratio[idx]) * gamma.tail_estimate / float(gamma.values[idx])
    return FourierUpperBound(
        bound=float(ratio[idx]), error_estimate=err, argmax_omega=float(omegas[idx])
    )


def product_counterexample_experiment() -> StabilityReport:
    """The 25-point l_2 product of {0, +-e1, +-e2} in l_1^2 with itself.

    Scanning small scales exhibits negative eigenvalues, so the product is
    not stably positive definite even though each factor is.
    """
    cross = SpaceSpec(
        "point_cloud_lp",
        {"points": [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]], "p": 1.0},
    )
    factor = generate(cross)
    product = lp_product(factor, factor, q=2.0)
    scales = [2.0**-k for k in range(0, 13)]
    return stability_scan(product, scales)


@dataclass(frozen=True)
class WitnessSearchResult:
    found: bool
    subsets_tested: int
    scales_tested: int
    witness_points: Optional[list] = None
    witness_scale: Optional[float] = None
    witness_lambda_min: Optional[float] = None
    witness_seed_index: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "subsets_tested": self.subsets_tested,
            "scales_tested": self.scales_tested,
            "witness_points": self.witness_points,
            "witness_scale": self.witness_scale,
            "witness_lambda_min": self.witness_lambda_min,
            "witness_seed_index": self.witness_seed_index,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def witness_search(
    p: float,
    n: int,
    budget: int,
    seed: int = 0,
    scales=(0.05, 0.1, 0.2, 0.5, 1.0, 2.0),
    max_points: int = 8,
) -> WitnessSearchResult:
    """Seeded random search for a non-PD finite subset of l_p^n.

    Absence of a witness is a valid (and for p <= 2, the expected) result.
    """
    if budget < 0:
        raise InvalidParams("budget must be nonnegative")
    from .magnitude import spectrum_diagnostics

    rng = np.random.default_rng(seed)
    tested = 0
    for trial in range(budget):
        size = int(rng.integers(3, max_points + 1))
        pts = rng.uniform(-1.0, 1.0, size=(size, n))
        space = generate(
            SpaceSpec("point_cloud_lp", {"points": pts.tolist(), "p": p})
        )
        tested += 1
        for t in scales:
            diag = spectrum_diagnostics(
                FiniteMetricSpace(space.labels, t * space.dist)
            )
            if diag.verdict == "Indefinite":
                return WitnessSearchResult(
                    found=True,
                    subsets_tested=tested,
                    scales_tested=len(scales),
                    witness_points=pts.tolist(),
                    witness_scale=float(t),
                    witness_lambda_min=diag.lambda_min,
                    witness_seed_index=trial,
                )
    return WitnessSearchResult(
        found=False, subsets_tested=tested, scales_tested=len(scales)
    )
