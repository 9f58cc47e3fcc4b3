"""Principal-component machinery for metric matrices.

Pipeline: sample covariance per failure level, entrywise mean across levels,
symmetric eigendecomposition (cyclic Jacobi), component selection by
cumulative eigenvalue energy against a threshold, and normalization of the
leading eigenvector so that its dot product with the intact-network metric
vector equals 1. Metric values enter raw (no standardization); the
normalization step absorbs scale.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateDataError, DomainError, InputError, NumericalError

log = logging.getLogger(__name__)

#: eigenvalue-energy threshold used when none is given
DEFAULT_ALPHA = 0.9


def covariance(a: np.ndarray) -> np.ndarray:
    """Sample covariance (divide by m - 1) of an m x n observation matrix."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise InputError(f"expected a 2-d matrix, got shape {a.shape}")
    m = a.shape[0]
    if m < 2:
        raise DomainError(f"covariance needs >= 2 observations, got {m}")
    centered = a - a.mean(axis=0)
    return centered.T @ centered / (m - 1)


def mean_covariance(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Entrywise arithmetic mean of same-shaped covariance matrices."""
    if len(matrices) == 0:
        raise InputError("no covariance matrices given")
    first = np.asarray(matrices[0], dtype=np.float64)
    acc = first.copy()
    for c in matrices[1:]:
        c = np.asarray(c, dtype=np.float64)
        if c.shape != first.shape:
            raise InputError(f"shape mismatch: {c.shape} vs {first.shape}")
        acc += c
    return acc / len(matrices)


def eigen_symmetric(
    c: np.ndarray,
    *,
    max_dimension: int = 4096,
    max_sweeps: int = 100,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) sorted by descending eigenvalue;
    eigenvectors are the columns of the second array and are orthonormal.
    Convergence: off-diagonal Frobenius mass below 1e-12 of the input norm,
    capped at ``max_sweeps`` full sweeps.
    """
    a = np.array(c, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > max_dimension:
        raise InputError(f"matrix dimension {n} exceeds limit {max_dimension}")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if float(np.abs(a - a.T).max(initial=0.0)) > 1e-8 * scale:
        raise InputError("matrix is not symmetric")
    a = (a + a.T) / 2.0

    vectors = np.eye(n)
    if n <= 1:
        return a.diagonal().copy(), vectors

    norm = float(np.linalg.norm(a))
    threshold = 1e-12 * norm

    def off_diagonal_norm() -> float:
        off = a.copy()
        np.fill_diagonal(off, 0.0)
        return float(np.linalg.norm(off))

    # convergence is tested before each sweep and once after the last
    for sweep in range(max_sweeps + 1):
        if norm == 0.0 or off_diagonal_norm() < threshold:
            break
        if sweep == max_sweeps:
            raise NumericalError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                cos = 1.0 / np.sqrt(1.0 + t * t)
                sin = t * cos
                # A <- J^T A J, applied as column then row updates
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = cos * col_p - sin * col_q
                a[:, q] = sin * col_p + cos * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = cos * row_p - sin * row_q
                a[q, :] = sin * row_p + cos * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vec_p = vectors[:, p].copy()
                vectors[:, p] = cos * vec_p - sin * vectors[:, q]
                vectors[:, q] = sin * vec_p + cos * vectors[:, q]

    eigenvalues = a.diagonal().copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], vectors[:, order]


def energy_quantum(eigenvalues: np.ndarray) -> np.ndarray:
    """Cumulative sums of descending-sorted eigenvalues."""
    return np.cumsum(np.asarray(eigenvalues, dtype=np.float64))


def select_l(energy: np.ndarray, alpha: float) -> int:
    """Smallest component count whose energy share reaches the threshold."""
    if not 0.0 < alpha <= 1.0:
        raise InputError(f"alpha must be in (0, 1], got {alpha}")
    energy = np.asarray(energy, dtype=np.float64)
    total = float(energy[-1])
    if total <= 0.0:
        raise DegenerateDataError("total eigenvalue energy is not positive")
    # first-hit scan instead of bisection: tiny negative tail eigenvalues
    # (PSD rounding slack) can leave the ratios not strictly sorted
    hits = np.flatnonzero(energy / total >= alpha)
    return int(hits[0]) + 1  # never empty: the last ratio is exactly 1


def normalize_pc(v: np.ndarray, t0: np.ndarray) -> np.ndarray:
    """Scale the principal eigenvector so that dot(v_hat, t0) == 1.

    The eigenvector's sign is fixed first (dot(v, t0) > 0); a vanishing
    denominator means no normalization exists and raises with diagnostics.
    """
    v = np.asarray(v, dtype=np.float64)
    t0 = np.asarray(t0, dtype=np.float64)
    if v.shape != t0.shape or v.ndim != 1:
        raise InputError(f"shape mismatch: v {v.shape}, t0 {t0.shape}")
    denom = float(np.dot(t0, v))
    if denom < 0.0:
        v = -v
        denom = -denom
    if denom < 1e-12:
        raise DegenerateDataError(
            "cannot normalize principal component: dot(t0, v) ~ 0 "
            f"(t0={t0.tolist()}, v={v.tolist()})"
        )
    return v / denom


@dataclass(frozen=True)
class PcaModel:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns aligned with eigenvalues
    energy: np.ndarray  # cumulative eigenvalue sums
    alpha: float
    selected_count: int  # components needed to reach alpha
    principal: np.ndarray  # leading eigenvector, sign-fixed
    v_hat: np.ndarray  # normalized principal component
    t0: np.ndarray  # intact-network metric vector

    def __post_init__(self):
        for arr in (
            self.eigenvalues,
            self.eigenvectors,
            self.energy,
            self.principal,
            self.v_hat,
            self.t0,
        ):
            arr.setflags(write=False)

    def to_dict(self) -> dict:
        """JSON-friendly export for independent verification."""
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "eigenvectors_columns": self.eigenvectors.T.tolist(),
            "energy": self.energy.tolist(),
            "alpha": self.alpha,
            "selected_count": self.selected_count,
            "principal": self.principal.tolist(),
            "v_hat": self.v_hat.tolist(),
            "t0": self.t0.tolist(),
        }


def fit_pca(
    level_matrices: Sequence[np.ndarray] | np.ndarray,
    t0: np.ndarray,
    alpha: float = DEFAULT_ALPHA,
) -> PcaModel:
    """Fit the shared principal component across all failure-level matrices.

    Each input matrix holds one configuration per row and one metric per
    column. When more than one component is needed to reach ``alpha`` the
    model still weights with the first component only and logs a warning
    carrying the energy ratios.
    """
    matrices = [np.asarray(m, dtype=np.float64) for m in level_matrices]
    mean_c = mean_covariance([covariance(m) for m in matrices])
    # rounding dust from averaging identical rows leaves a tiny positive
    # trace; anything below squared relative epsilon is still "no variance"
    data_scale = max(
        (float(np.abs(m).max(initial=0.0)) for m in matrices), default=0.0
    )
    floor = mean_c.shape[0] * (1e-12 * max(data_scale, 1e-300)) ** 2
    if float(np.trace(mean_c)) <= floor:
        raise DegenerateDataError(
            "metric matrices carry no variance; increase the number of "
            "configurations or failure levels"
        )
    eigenvalues, eigenvectors = eigen_symmetric(mean_c)
    energy = energy_quantum(eigenvalues)
    selected = select_l(energy, alpha)
    if selected > 1:
        ratios = (energy / energy[-1]).tolist()
        log.warning(
            "energy threshold alpha=%.3g needs %d components (ratios %s); "
            "proceeding with the first component only",
            alpha,
            selected,
            ", ".join(f"{r:.4f}" for r in ratios),
        )
    t0 = np.asarray(t0, dtype=np.float64)
    v = eigenvectors[:, 0].copy()
    if float(np.dot(t0, v)) < 0.0:
        v = -v
    v_hat = normalize_pc(v, t0)
    return PcaModel(
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        energy=energy,
        alpha=alpha,
        selected_count=selected,
        principal=v,
        v_hat=v_hat,
        t0=t0.copy(),
    )
