"""Validated finite metric spaces, metric transforms, and space generators.

Distances are stored as dense symmetric numpy arrays at full double
precision.  All values are immutable after construction and all operations
are pure functions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .errors import (
    EmptySubset,
    ExponentOutOfRange,
    InvalidMetric,
    InvalidParams,
    NonFiniteEntry,
    NonpositiveScale,
    NonSquareMatrix,
    UnsupportedFamily,
)

TRIANGLE_SLACK = 1e-9  # relative to the largest distance entry

FAMILIES = (
    "interval_net",
    "circle_net",
    "cantor_net",
    "grid_net",
    "sphere_fibonacci_net",
    "hyperbolic_disk_net",
    "complete_bipartite",
    "ultrametric_tree",
    "weighted_tree",
    "point_cloud_lp",
)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpaceSpec:
    """Declarative recipe for a generated metric space.

    The same spec (including seed) always regenerates a bit-identical
    distance matrix.
    """

    family: str
    params: dict = field(default_factory=dict)
    scale: float = 1.0
    snowflake: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedFamily(f"unknown family {self.family!r}")
        if not self.scale > 0:
            raise InvalidParams("scale must be positive")
        if not (0 < self.snowflake <= 1):
            raise InvalidParams("snowflake exponent must lie in (0, 1]")

    def with_params(self, **overrides) -> "SpaceSpec":
        params = dict(self.params)
        params.update(overrides)
        return SpaceSpec(self.family, params, self.scale, self.snowflake, self.seed)

    def to_json(self) -> str:
        return json.dumps(
            {
                "family": self.family,
                "params": self.params,
                "scale": self.scale,
                "snowflake": self.snowflake,
                "seed": self.seed,
            }
        )

    @staticmethod
    def from_json(text: str) -> "SpaceSpec":
        obj = json.loads(text)
        return SpaceSpec(
            family=obj["family"],
            params=obj.get("params", {}),
            scale=obj.get("scale", 1.0),
            snowflake=obj.get("snowflake", 1.0),
            seed=obj.get("seed", 0),
        )


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite metric space: point labels plus a symmetric distance matrix.

    ``coords`` carries ambient coordinates when the generating family has a
    natural embedding (intervals, grids, point clouds); it is metadata only
    and never consulted by the engines.
    """

    labels: tuple
    dist: np.ndarray
    provenance: Optional[SpaceSpec] = None
    coords: Optional[np.ndarray] = None

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise NonSquareMatrix(f"distance matrix has shape {d.shape}")
        if d.shape[0] != len(self.labels):
            raise InvalidParams("label count does not match matrix side")
        if d.shape[0] < 1:
            raise InvalidParams("a metric space needs at least one point")
        # canonical symmetrization: copy the upper triangle to the lower
        d = np.triu(d, 1)
        d = d + d.T
        object.__setattr__(self, "dist", _readonly(d))
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.coords is not None:
            object.__setattr__(self, "coords", _readonly(np.atleast_2d(self.coords)))

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def diameter(self) -> float:
        return float(self.dist.max())

    def subspace(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        idx = list(indices)
        if not idx:
            raise EmptySubset("subspace needs at least one point")
        coords = self.coords[idx] if self.coords is not None else None
        return FiniteMetricSpace(
            labels=tuple(self.labels[i] for i in idx),
            dist=self.dist[np.ix_(idx, idx)],
            coords=coords,
        )


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    worst_triangle_violation: float
    worst_asymmetry: float
    offending_triples: list


def validate_metric(dist) -> ValidationReport:
    """Check the metric axioms on a square matrix, within declared slacks."""
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise NonSquareMatrix(f"matrix has shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise NonFiniteEntry("distance matrix contains non-finite entries")
    n = d.shape[0]
    offending = []

    worst_asym = float(np.abs(d - d.T).max()) if n > 1 else 0.0
    diag_bad = float(np.abs(np.diag(d)).max())
    off = d + np.diag([np.inf] * n)
    nonpos_off = bool(n > 1 and off.min() <= 0)

    slack = TRIANGLE_SLACK * max(1.0, float(np.abs(d).max()))
    worst_tri = 0.0
    for k in range(n):
        excess = d - (d[:, [k]] + d[[k], :])
        m = float(excess.max())
        if m > worst_tri:
            worst_tri = m
        if m > slack and len(offending) < 10:
            i, j = np.unravel_index(np.argmax(excess), excess.shape)
            offending.append((int(i), int(j), int(k)))

    ok = (
        worst_asym <= slack
        and diag_bad == 0.0
        and not nonpos_off
        and worst_tri <= slack
    )
    return ValidationReport(
        ok=ok,
        worst_triangle_violation=worst_tri,
        worst_asymmetry=worst_asym,
        offending_triples=offending,
    )


def _lp_distances(points: np.ndarray, p: float) -> np.ndarray:
    """Pairwise d(x,y) = ||x - y||_p^min(1,p); p may be inf."""
    diff = np.abs(points[:, None, :] - points[None, :, :])
    if math.isinf(p):
        return diff.max(axis=2)
    if p >= 1:
        return (diff**p).sum(axis=2) ** (1.0 / p)
    return (diff**p).sum(axis=2)


def _require(cond: bool, msg: str):
    if not cond:
        raise InvalidParams(msg)


def _gen_interval(params):
    length = float(params.get("length", 1.0))
    n = int(params["n"])
    _require(length > 0 and n >= 1, "interval_net needs length > 0 and n >= 1")
    x = np.linspace(0.0, length, n) if n > 1 else np.array([0.0])
    return np.abs(x[:, None] - x[None, :]), x[:, None]


def _gen_circle(params):
    circumference = float(params.get("circumference", 2 * math.pi))
    n = int(params["n"])
    _require(circumference > 0 and n >= 1, "circle_net needs circumference > 0, n >= 1")
    k = np.arange(n)
    frac = np.abs(k[:, None] - k[None, :]) / n
    frac = np.minimum(frac, 1.0 - frac)
    return circumference * frac, None


def _gen_cantor(params):
    length = float(params.get("length", 1.0))
    level = int(params["level"])
    _require(length > 0 and level >= 1, "cantor_net needs length > 0 and level >= 1")
    pts = np.array([0.0, 1.0])
    for _ in range(level - 1):
        pts = np.concatenate([pts / 3.0, 2.0 / 3.0 + pts / 3.0])
    pts = np.sort(pts) * length
    return np.abs(pts[:, None] - pts[None, :]), pts[:, None]


def _gen_grid(params):
    n = int(params.get("n", 2))
    p = float(params.get("p", 2.0))
    m = int(params["m"])
    _require(n >= 1 and m >= 1 and p > 0, "grid_net needs n,m >= 1 and p > 0")
    axis = np.linspace(0.0, 1.0, m) if m > 1 else np.array([0.0])
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    pts = np.stack([g.ravel() for g in mesh], axis=1)
    return _lp_distances(pts, p), pts


def _gen_sphere(params):
    radius = float(params.get("radius", 1.0))
    n = int(params["n"])
    _require(radius > 0 and n >= 1, "sphere_fibonacci_net needs radius > 0, n >= 1")
    i = np.arange(n)
    z = 1.0 - 2.0 * (i + 0.5) / n
    phi = i * math.pi * (3.0 - math.sqrt(5.0))
    rho = np.sqrt(np.maximum(0.0, 1.0 - z**2))
    pts = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
    cosang = np.clip(pts @ pts.T, -1.0, 1.0)
    return radius * np.arccos(cosang), radius * pts


def _gen_hyperbolic(params):
    r_max = float(params.get("r_max", 1.0))
    n_r = int(params.get("n_r", 3))
    n_theta = int(params.get("n_theta", 6))
    _require(r_max > 0 and n_r >= 1 and n_theta >= 1, "hyperbolic_disk_net params out of range")
    rs = [0.0] + [r_max * j / n_r for j in range(1, n_r + 1)]
    polar = [(0.0, 0.0)]
    for r in rs[1:]:
        for k in range(n_theta):
            polar.append((r, 2 * math.pi * k / n_theta))
    r = np.array([q[0] for q in polar])
    th = np.array([q[1] for q in polar])
    cosh_d = (
        np.cosh(r)[:, None] * np.cosh(r)[None, :]
        - np.sinh(r)[:, None] * np.sinh(r)[None, :] * np.cos(th[:, None] - th[None, :])
    )
    d = np.arccosh(np.maximum(1.0, cosh_d))
    np.fill_diagonal(d, 0.0)
    return d, None


def _gen_bipartite(params):
    m = int(params["m"])
    n = int(params["n"])
    r = float(params.get("r", 1.0))
    _require(m >= 1 and n >= 1 and r > 0, "complete_bipartite needs m,n >= 1 and r > 0")
    total = m + n
    side = np.array([0] * m + [1] * n)
    cross = side[:, None] != side[None, :]
    d = np.where(cross, r, 2.0 * r)
    np.fill_diagonal(d, 0.0)
    return d, None


def _gen_ultrametric(params, seed):
    n = int(params["n"])
    _require(n >= 1, "ultrametric_tree needs n >= 1")
    rng = np.random.default_rng(seed)
    d = np.zeros((n, n))
    clusters = [[i] for i in range(n)]
    height = 0.0
    while len(clusters) > 1:
        height += float(rng.uniform(0.1, 1.0))  # strictly increasing merge heights
        i, j = sorted(rng.choice(len(clusters), size=2, replace=False))
        for a in clusters[i]:
            for b in clusters[j]:
                d[a, b] = d[b, a] = 2.0 * height
        clusters[i] = clusters[i] + clusters[j]
        del clusters[j]
    return d, None


def _gen_weighted_tree(params, seed):
    n = int(params["n"])
    _require(n >= 1, "weighted_tree needs n >= 1")
    rng = np.random.default_rng(seed)
    d = np.zeros((n, n))
    for i in range(1, n):
        parent = int(rng.integers(0, i))
        w = float(rng.uniform(0.5, 2.0))
        for j in range(i):
            d[i, j] = d[j, i] = d[parent, j] + w
        d[i, parent] = d[parent, i] = w
    return d, None


def _gen_point_cloud(params):
    pts = np.asarray(params["points"], dtype=float)
    p = float(params.get("p", 2.0))
    _require(p > 0, "point_cloud_lp needs p > 0")
    if pts.ndim == 1:
        pts = pts[:, None]
    _require(pts.shape[0] >= 1, "point_cloud_lp needs at least one point")
    return _lp_distances(pts, p), pts


def generate(spec: SpaceSpec) -> FiniteMetricSpace:
    """Build the space described by ``spec``, then apply snowflake and scale.

    The returned metric is d' = scale * d_base**snowflake.
    """
    fam = spec.family
    if fam == "interval_net":
        base, coords = _gen_interval(spec.params)
    elif fam == "circle_net":
        base, coords = _gen_circle(spec.params)
    elif fam == "cantor_net":
        base, coords = _gen_cantor(spec.params)
    elif fam == "grid_net":
        base, coords = _gen_grid(spec.params)
    elif fam == "sphere_fibonacci_net":
        base, coords = _gen_sphere(spec.params)
    elif fam == "hyperbolic_disk_net":
        base, coords = _gen_hyperbolic(spec.params)
    elif fam == "complete_bipartite":
        base, coords = _gen_bipartite(spec.params)
    elif fam == "ultrametric_tree":
        base, coords = _gen_ultrametric(spec.params, spec.seed)
    elif fam == "weighted_tree":
        base, coords = _gen_weighted_tree(spec.params, spec.seed)
    elif fam == "point_cloud_lp":
        base, coords = _gen_point_cloud(spec.params)
    else:  # pragma: no cover - SpaceSpec already validates
        raise UnsupportedFamily(fam)

    d = base if spec.snowflake == 1.0 else base**spec.snowflake
    d = d if spec.scale == 1.0 else spec.scale * d
    labels = tuple(range(d.shape[0]))
    return FiniteMetricSpace(labels=labels, dist=d, provenance=spec, coords=coords)


def random_cloud_spec(
    n: int, dim: int, p: float = 2.0, seed: int = 0, box: float = 1.0,
    scale: float = 1.0, snowflake: float = 1.0,
) -> SpaceSpec:
    """A point_cloud_lp spec with seeded uniform coordinates in [0, box]^dim."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, box, size=(n, dim))
    return SpaceSpec(
        "point_cloud_lp",
        {"points": pts.tolist(), "p": p},
        scale=scale,
        snowflake=snowflake,
        seed=seed,
    )


def scale_space(space: FiniteMetricSpace, t: float) -> FiniteMetricSpace:
    """Multiply every distance by t > 0."""
    if not t > 0:
        raise NonpositiveScale(f"scale must be positive, got {t}")
    return FiniteMetricSpace(
        labels=space.labels, dist=t * space.dist,
        provenance=space.provenance, coords=space.coords,
    )


def snowflake_space(space: FiniteMetricSpace, alpha: float) -> FiniteMetricSpace:
    """Raise every distance to the power alpha in (0, 1]."""
    if not (0 < alpha <= 1):
        raise ExponentOutOfRange(
            f"snowflake exponent must lie in (0, 1], got {alpha}"
        )
    return FiniteMetricSpace(
        labels=space.labels, dist=space.dist**alpha,
        provenance=space.provenance, coords=space.coords,
    )


def lp_product(
    a: FiniteMetricSpace, b: FiniteMetricSpace, q: float
) -> FiniteMetricSpace:
    """The l_q product: d((a,b),(a',b')) = (d_A^q + d_B^q)^(1/q)."""
    if not q >= 1:
        raise ExponentOutOfRange(f"product exponent must be >= 1, got {q}")
    da, db = a.dist, b.dist
    if math.isinf(q):
        d = np.maximum(da[:, None, :, None], db[None, :, None, :])
    else:
        d = (da[:, None, :, None] ** q + db[None, :, None, :] ** q) ** (1.0 / q)
    n = len(a) * len(b)
    d = d.reshape(n, n)
    labels = tuple((la, lb) for la in a.labels for lb in b.labels)
    return FiniteMetricSpace(labels=labels, dist=d)


def hausdorff_distance(i_set, j_set, space: FiniteMetricSpace) -> float:
    """Hausdorff distance between two index subsets of a common space."""
    i_idx = list(i_set)
    j_idx = list(j_set)
    if not i_idx or not j_idx:
        raise EmptySubset("Hausdorff distance needs nonempty subsets")
    sub = space.dist[np.ix_(i_idx, j_idx)]
    return float(max(sub.min(axis=1).max(), sub.min(axis=0).max()))


def load_distance_csv(path, force: bool = False) -> FiniteMetricSpace:
    """Load a headerless n x n CSV distance matrix, validating the axioms."""
    d = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    report = validate_metric(d)
    if not report.ok and not force:
        raise InvalidMetric(
            f"{path}: metric axioms violated "
            f"(worst triangle {report.worst_triangle_violation:.3g}, "
            f"worst asymmetry {report.worst_asymmetry:.3g})",
            report=report,
        )
    return FiniteMetricSpace(labels=tuple(range(d.shape[0])), dist=d)
