"""
Damped fixed-point iteration shared by the Bishop, G-matrix and factorization
solvers.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .errors import ContractionError, TrustRegionError

logger = logging.getLogger(__name__)


def sup_norm(a: np.ndarray) -> float:
    return float(np.max(np.abs(a), initial=0.0))


@dataclass
class FixedPointResult:
    """Converged iterate with its residual history."""
    x: np.ndarray
    residual: float
    iterations: int
    trace: List[float] = field(default_factory=list)


def damped_picard(
    func: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    tol: float,
    max_iter: int = 200,
    damping: float = 1.0,
    trust_radius: Optional[float] = None,
    residual: Optional[Callable[[np.ndarray, np.ndarray], float]] = None,
    error_cls=ContractionError,
    label: str = "fixed point",
) -> FixedPointResult:
    r"""
    Find a fixed point :math:`x = f(x)` by damped Picard iteration.

    Each step moves ``x <- x + lam * (f(x) - x)``. The damping ``lam`` starts
    at `damping` and is halved whenever the residual grows.

    Parameters
    ----------
    func : Callable[ndarray]
        Map whose fixed point is sought.
    x0 : ndarray
        Starting iterate.
    tol : float
        Stop when the residual at the current iterate is at most `tol`.
    max_iter : int, optional
        Iteration limit (default = 200).
    damping : float, optional
        Initial damping factor (default = 1.0).
    trust_radius : float, optional
        Raise :class:`TrustRegionError` when ``max|x|`` exceeds it.
    residual : Callable[[x, f(x)], float], optional
        Residual measure; defaults to ``max|f(x) - x|``.
    error_cls : type, optional
        Error raised on non-convergence.
    label : str, optional
        Name used in log messages.

    Returns
    -------
    result : FixedPointResult
        The iterate whose residual met `tol`, the residual and the trace.
    """
    x = np.array(x0, copy=True)
    lam = damping
    previous = np.inf
    trace: List[float] = []
    for iteration in range(1, max_iter + 1):
        fx = func(x)
        res = residual(x, fx) if residual is not None else sup_norm(fx - x)
        trace.append(res)
        if not np.isfinite(res):
            raise error_cls(
                f"{label}: non-finite residual at iteration {iteration}",
                {"residual_trace": trace[-10:], "iterations": iteration},
            )
        logger.debug("%s iteration %d: residual %.3e (damping %.3g)", label, iteration, res, lam)
        if res <= tol:
            return FixedPointResult(x, res, iteration, trace)
        if res > previous:
            lam *= 0.5
            logger.debug("%s: residual increased, damping halved to %.3g", label, lam)
        previous = res
        x = x + lam * (fx - x)
        if trust_radius is not None and sup_norm(x) > trust_radius:
            raise TrustRegionError(
                f"{label}: iterate left the trust region |x| <= {trust_radius}",
                {"sup_norm": sup_norm(x), "trust_radius": trust_radius, "iterations": iteration},
            )
    raise error_cls(
        f"{label}: no convergence in {max_iter} iterations (residual {trace[-1]:.3e})",
        {"residual": trace[-1], "residual_trace": trace[-10:], "iterations": max_iter},
    )
