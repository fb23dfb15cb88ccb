"""
Ridge-regression readout with leave-one-out regularization selection.

The readout minimizes ``sum((y - X w)**2) + r * |w|**2`` over the design
matrix ``X`` whose rows are ``[X_state; u_hat]``. Leave-one-out errors for
a whole grid of ``r`` come from one thin SVD of ``X`` via the hat-matrix
identity ``e_loo = (y - H y) / (1 - diag(H))``.
"""

import logging
import warnings
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..exceptions import TrainingError
from ..models import TrainedReadout

logger = logging.getLogger(__name__)

DEFAULT_RIDGE_GRID: Tuple[float, ...] = tuple(float(r) for r in np.logspace(-8, 4, 13))

_LEVERAGE_TOL = 1e-12


def _check_problem(states, targets) -> Tuple[np.ndarray, np.ndarray]:
    X = np.asarray(states, dtype=float)
    y = np.asarray(targets, dtype=float)
    if X.ndim != 2:
        raise ValueError("design matrix must be two-dimensional")
    if y.ndim != 1 or y.size != X.shape[0]:
        raise ValueError(f"expected {X.shape[0]} targets, got shape {y.shape}")
    if X.shape[0] == 0:
        raise ValueError("design matrix has no rows")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("design matrix and targets must be finite")
    if X.shape[0] <= X.shape[1]:
        logger.warning(
            "Design matrix has %d rows for %d weights; the fit is underdetermined",
            X.shape[0], X.shape[1],
        )
    return X, y


def objective(states, targets, weights, r: float) -> float:
    """Ridge objective ``sum((y - X w)**2) + r |w|**2``."""
    residual = np.asarray(targets, dtype=float) - np.asarray(states, dtype=float) @ weights
    return float(residual @ residual + r * (weights @ weights))


def solve_ridge(X: np.ndarray, y: np.ndarray, r: float) -> np.ndarray:
    if r < 0:
        raise ValueError(f"ridge parameter must be non-negative, got {r}")
    if r == 0 and np.linalg.matrix_rank(X) < X.shape[1]:
        message = "Normal matrix is singular at r=0; using the minimum-norm least-squares solution"
        warnings.warn(message, RuntimeWarning, stacklevel=3)
        logger.warning(message)
        return np.linalg.lstsq(X, y, rcond=None)[0]
    gram = X.T @ X + r * np.eye(X.shape[1])
    try:
        return linalg.solve(gram, X.T @ y, assume_a="pos")
    except (linalg.LinAlgError, ValueError) as exc:
        raise TrainingError(f"ridge normal equations could not be solved at r={r}: {exc}") from exc


def loo_errors(states, targets, grid: Iterable[float]) -> np.ndarray:
    """Mean squared leave-one-out error for every ``r`` in ``grid``."""
    X, y = _check_problem(states, targets)
    U, s, _ = linalg.svd(X, full_matrices=False)
    Uty = U.T @ y
    keep = s > s.max(initial=0.0) * max(X.shape) * np.finfo(float).eps
    s2 = s ** 2
    errors = []
    for r in grid:
        if r < 0:
            raise ValueError(f"ridge parameters must be non-negative, got {r}")
        shrink = np.zeros_like(s)
        shrink[keep] = s2[keep] / (s2[keep] + r)
        fitted = U @ (shrink * Uty)
        leverage = (U ** 2) @ shrink
        denominator = 1.0 - leverage
        if np.any(denominator <= _LEVERAGE_TOL):
            logger.warning("Leverage reaches 1 at r=%g; leave-one-out error is unbounded", r)
            errors.append(np.inf)
            continue
        loo_residual = (y - fitted) / denominator
        errors.append(float(np.mean(loo_residual ** 2)))
    return np.array(errors)


def ridge_train(states, targets, r: float, *, t_sample_ns: Optional[float] = None,
                n_bits: Optional[int] = None) -> TrainedReadout:
    """Closed-form ridge solution at a fixed ``r``."""
    X, y = _check_problem(states, targets)
    weights = solve_ridge(X, y, r)
    residual = y - X @ weights
    loo = loo_errors(X, y, [r])[0]
    return TrainedReadout(
        weights=weights,
        ridge_param=r,
        training_error=float(np.mean(residual ** 2)),
        loo_error=float(loo),
        loo_curve=((float(r), float(loo)),),
        t_sample_ns=t_sample_ns,
        n_bits=n_bits,
    )


def select_ridge_loo(states, targets, grid: Sequence[float] = DEFAULT_RIDGE_GRID, *,
                     t_sample_ns: Optional[float] = None,
                     n_bits: Optional[int] = None) -> TrainedReadout:
    """
    Train at the grid value with the smallest leave-one-out error.

    The grid is sorted ascending, so among equal errors the smallest ``r``
    wins.
    """
    candidates = sorted(set(float(r) for r in grid))
    if not candidates:
        raise ValueError("ridge grid must not be empty")
    X, y = _check_problem(states, targets)
    errors = loo_errors(X, y, candidates)
    if not np.any(np.isfinite(errors)):
        raise TrainingError("leave-one-out error is unbounded for every ridge parameter")
    best = int(np.argmin(errors))
    logger.info("Selected ridge parameter r=%g (LOO MSE %.3e)", candidates[best], errors[best])
    weights = solve_ridge(X, y, candidates[best])
    residual = y - X @ weights
    return TrainedReadout(
        weights=weights,
        ridge_param=candidates[best],
        training_error=float(np.mean(residual ** 2)),
        loo_error=float(errors[best]),
        loo_curve=tuple((r, float(e)) for r, e in zip(candidates, errors)),
        t_sample_ns=t_sample_ns,
        n_bits=n_bits,
    )
