"""Robustness surfaces: weighted robustness values per failure level.

``r_star`` collapses a metric vector into one scalar with the normalized
principal-component weights, so the intact network always scores 1. The
surface stacks, per failure percentage, the descending-sorted scalars of
all configurations; the unsorted matrix is kept alongside so individual
configurations stay traceable. Values above 1 are legitimate (some metrics
can transiently rise as elements fail) and negatives are reported, flagged,
and never clamped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, NumericalError
from .failures import FailureScenario, ScenarioRun
from .metrics import MetricVector
from .pca import DEFAULT_ALPHA, PcaModel, fit_pca

log = logging.getLogger(__name__)


def r_value(weights: np.ndarray, t: MetricVector | np.ndarray) -> float:
    """Plain weighted sum of metric values (fixed, user-chosen weights).

    Reference operation for comparison against the principal-component
    weighting; no normalization is implied.
    """
    weights = np.asarray(weights, dtype=np.float64)
    values = t.as_array() if isinstance(t, MetricVector) else np.asarray(t, float)
    if weights.shape != values.shape:
        raise InputError(
            f"weight/metric dimension mismatch: {weights.shape} vs {values.shape}"
        )
    return float(np.dot(weights, values))


def r_star(v_hat: np.ndarray, t: MetricVector | np.ndarray) -> float:
    """Robustness scalar: dot product of the normalized PC and the metrics."""
    return r_value(v_hat, t)


@dataclass(frozen=True)
class RobustnessSurface:
    omega: np.ndarray  # (|P|, m), each row sorted descending
    omega_unsorted: np.ndarray  # (|P|, m), column i = configuration i
    percentages: tuple[int, ...]
    scenario: FailureScenario
    pca: PcaModel
    r_star_init: float

    def __post_init__(self):
        self.omega.setflags(write=False)
        self.omega_unsorted.setflags(write=False)

    @property
    def v_hat(self) -> np.ndarray:
        return self.pca.v_hat

    @property
    def t0(self) -> np.ndarray:
        return self.pca.t0

    @property
    def config_count(self) -> int:
        return self.omega.shape[1]

    @property
    def has_negative_values(self) -> bool:
        return bool((self.omega < 0.0).any())

    @property
    def color_scale(self) -> tuple[float, float]:
        """Bounds used by the heatmap ramp: [0, max of the surface]."""
        return 0.0, float(max(self.omega.max(initial=0.0), 0.0))


@dataclass(frozen=True)
class SurfaceSummary:
    mean_per_p: np.ndarray
    variance_per_p: np.ndarray  # population variance across configurations
    area_under_mean: float  # trapezoidal integral over the percentages

    def __post_init__(self):
        self.mean_per_p.setflags(write=False)
        self.variance_per_p.setflags(write=False)


def build_surface(
    run: ScenarioRun | None = None,
    *,
    tensor: np.ndarray | None = None,
    t0: MetricVector | np.ndarray | None = None,
    percentages: Sequence[int] | None = None,
    scenario: FailureScenario | None = None,
    alpha: float = DEFAULT_ALPHA,
) -> RobustnessSurface:
    """Turn a metric tensor into the robustness surface.

    Accepts either a ``ScenarioRun`` or the raw pieces (tensor of shape
    levels x configurations x metrics, intact metric vector, percentage
    list, scenario). Fits one shared principal component across all levels,
    projects every configuration row onto it, and sorts each level's values
    in decreasing order.
    """
    if run is not None:
        tensor = run.tensor
        t0 = run.t0
        percentages = run.plan.percentages
        scenario = run.scenario
    if tensor is None or t0 is None or percentages is None or scenario is None:
        raise InputError("build_surface needs a run or all of its pieces")
    tensor = np.asarray(tensor, dtype=np.float64)
    if tensor.ndim != 3:
        raise InputError(f"expected a 3-d tensor, got shape {tensor.shape}")
    level_count, m, _ = tensor.shape
    if level_count != len(percentages):
        raise InputError(
            f"tensor has {level_count} levels but {len(percentages)} percentages"
        )
    if m < 2:
        raise InputError(f"need >= 2 configurations for covariance, got {m}")

    t0_values = t0.as_array() if isinstance(t0, MetricVector) else np.asarray(t0, float)
    model = fit_pca(list(tensor), t0_values, alpha)

    omega_unsorted = tensor @ model.v_hat  # (|P|, m)
    omega = np.sort(omega_unsorted, axis=1)[:, ::-1].copy()

    init = float(np.dot(model.v_hat, t0_values))
    if abs(init - 1.0) > 1e-9:
        raise NumericalError(
            f"initial robustness normalized to {init!r}, expected 1"
        )
    if (omega < 0.0).any():
        log.warning(
            "surface contains negative robustness values (min %.4g); "
            "reported as computed", float(omega.min())
        )
    return RobustnessSurface(
        omega=omega,
        omega_unsorted=omega_unsorted,
        percentages=tuple(int(p) for p in percentages),
        scenario=scenario,
        pca=model,
        r_star_init=init,
    )


def summarize(surface: RobustnessSurface) -> SurfaceSummary:
    """Per-level mean and population variance, plus area under the mean curve.

    Both statistics are permutation-invariant, so sorted and unsorted
    surfaces summarize identically. The area uses the trapezoidal rule over
    the percentage axis and supports coarse robustness comparisons between
    networks.
    """
    mean = surface.omega.mean(axis=1)
    variance = surface.omega.var(axis=1)  # population: divide by m
    if len(surface.percentages) > 1:
        area = float(np.trapezoid(mean, x=np.asarray(surface.percentages, float)))
    else:
        area = 0.0
    return SurfaceSummary(
        mean_per_p=mean, variance_per_p=variance, area_under_mean=area
    )
