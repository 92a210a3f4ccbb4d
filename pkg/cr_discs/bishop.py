"""
Analytic discs attached to a generic manifold through Bishop's equation.

Given the holomorphic part w of a disc, the real part x of its normal
components solves x = -T1[H(w, x)] + x0 on the boundary; y = H(w, x) then makes
z = x + i y the boundary value of a holomorphic map with A(1) = (w(1), x0 +
i H(w(1), x0)).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .circle_ops import (
    CircleFunction,
    CircleGrid,
    check_holomorphic,
    derivative_at_one,
    fourier,
    interior_eval_values,
    interpolate,
    t1_values,
)
from .errors import (
    ConvergenceError,
    GeometryError,
    NoGoodDiscError,
    PreconditionError,
)
from .fixed_point import damped_picard, sup_norm
from .linalg import distance_to_subspace, realify
from .manifold import GenericManifold, Submanifold, TangencyReport, tangency_check

logger = logging.getLogger(__name__)

W_HOLOMORPHIC_TOLERANCE = 1e-10
CROSSING_XTOL = 1e-10


@dataclass(frozen=True)
class AnalyticDisc:
    """Boundary values of a disc attached to a graph y = H(w, x)."""
    grid: CircleGrid
    w: np.ndarray
    x: np.ndarray
    y: np.ndarray
    x0: np.ndarray
    residual: float
    iterations: int = 0

    @property
    def p(self) -> int:
        return self.w.shape[1]

    @property
    def q(self) -> int:
        return self.x.shape[1]

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def boundary(self) -> np.ndarray:
        """Boundary samples A(zeta_j) with shape (N, n)."""
        return np.concatenate([self.w, self.x + 1j * self.y], axis=1)

    @property
    def base_point(self) -> np.ndarray:
        return self.boundary[0]

    @property
    def params(self) -> np.ndarray:
        """Real parameters (Re w, Im w, x) of the boundary samples."""
        return np.concatenate([self.w.real, self.w.imag, self.x], axis=1)

    def evaluate(self, zeta: Any) -> np.ndarray:
        """A(zeta) for points strictly inside the disc."""
        return interior_eval_values(self.boundary, zeta)

    def at_angle(self, theta: Any) -> np.ndarray:
        """Boundary value at arbitrary angles by trigonometric interpolation."""
        return interpolate(self.boundary, theta)

    def params_at_angle(self, theta: Any) -> np.ndarray:
        w = interpolate(self.w, theta)
        x = interpolate(self.x, theta)
        return np.concatenate([np.real(w), np.imag(w), x], axis=-1)

    def tangent_at_one(self) -> np.ndarray:
        """(d/dtheta) A(e^{i theta}) at theta = 0."""
        return derivative_at_one(self.boundary)

    def dzeta_at_one(self) -> np.ndarray:
        """dA/dzeta at zeta = 1."""
        return -1j * self.tangent_at_one()

    def attachment_residual(self, graph) -> float:
        """Largest |r(A(zeta_j))| over the grid for the graph the disc is attached to."""
        return sup_norm(graph.eval_r(self.boundary))

    def diameter(self) -> float:
        return float(np.max(np.linalg.norm(self.boundary - self.boundary[0], axis=1)))

    def to_dict(self) -> Dict[str, Any]:
        """Fourier coefficients of every component plus solver diagnostics."""
        def coeffs(values):
            c = fourier(values)
            return {"real": np.real(c).tolist(), "imag": np.imag(c).tolist()}

        return {
            "grid": self.grid.size,
            "p": self.p,
            "q": self.q,
            "w": coeffs(self.w),
            "x": coeffs(self.x),
            "y": coeffs(self.y),
            "x0": self.x0.tolist(),
            "residual": self.residual,
            "iterations": self.iterations,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AnalyticDisc":
        grid = CircleGrid(int(data["grid"]))

        def samples(block):
            c = np.array(block["real"]) + 1j * np.array(block["imag"])
            return np.fft.ifft(c * grid.size, axis=0)

        return cls(
            grid,
            samples(data["w"]),
            np.real(samples(data["x"])),
            np.real(samples(data["y"])),
            np.array(data["x0"], dtype=float),
            float(data["residual"]),
            int(data.get("iterations", 0)),
        )


@dataclass(frozen=True)
class BishopParams:
    """Parameters of the deformation families A_{t,tau,a,p0}."""
    t: np.ndarray
    tau: float = 0.0
    a: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    p0_u1: float = 0.0
    p0_w: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    p0_x: np.ndarray = field(default_factory=lambda: np.zeros(0))
    c: float = 0.0

    @classmethod
    def zero(cls, p: int, q: int) -> "BishopParams":
        return cls(
            t=np.zeros(q),
            a=np.zeros(p - 1, dtype=complex),
            p0_w=np.zeros(p - 1, dtype=complex),
            p0_x=np.zeros(q),
        )

    def is_zero(self) -> bool:
        return (
            not np.any(self.t)
            and self.tau == 0.0
            and not np.any(self.a)
            and self.p0_u1 == 0.0
            and not np.any(self.p0_w)
            and not np.any(self.p0_x)
        )

    def check_bounds(self, bound: float) -> None:
        """Raise unless every parameter lies in the smallness box of half-width ``bound``."""
        largest = max(
            float(np.max(np.abs(self.t), initial=0.0)),
            abs(self.tau),
            float(np.max(np.abs(self.a), initial=0.0)),
            abs(self.p0_u1),
            float(np.max(np.abs(self.p0_w), initial=0.0)),
            float(np.max(np.abs(self.p0_x), initial=0.0)),
        )
        if largest > bound:
            raise PreconditionError(
                f"family parameter of size {largest:.3e} is outside the smallness box {bound}",
                {"largest": largest, "bound": bound},
            )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t.tolist(),
            "tau": self.tau,
            "a": [[float(v.real), float(v.imag)] for v in self.a],
            "p0_u1": self.p0_u1,
            "p0_w": [[float(v.real), float(v.imag)] for v in self.p0_w],
            "p0_x": self.p0_x.tolist(),
        }


class BishopSolver:
    """Damped Picard solver for Bishop's equation on a fixed manifold."""

    def __init__(self, manifold: GenericManifold, config: Optional[Dict[str, Any]] = None):
        """
        Initialize solver.

        Args:
            manifold: The manifold M the discs attach to
            config: Optional solver settings (tol, max_iter, damping, trust_radius)
        """
        self.manifold = manifold
        self.config = config or {}
        self.logger = logging.getLogger(self.__class__.__name__)
        self._load_config()

    def _load_config(self) -> None:
        """Load configuration with default values."""
        self.tol = self.config.get("tol", 1e-11)
        self.max_iter = self.config.get("max_iter", 200)
        self.damping = self.config.get("damping", 1.0)
        self.trust_radius = self.config.get("trust_radius", 1.0)

    def solve(
        self,
        w: Any,
        x0: Optional[Sequence[float]] = None,
        deform=None,
        t: Optional[Sequence[float]] = None,
        x_init: Optional[np.ndarray] = None,
    ) -> AnalyticDisc:
        """
        Solve x = -T1[H(w, x)] + x0 for the prescribed holomorphic part w.

        Args:
            w: Boundary values of the holomorphic C^p part, (N, p) or CircleFunction
            x0: Base offset in R^q (default 0)
            deform: Optional DeformedGraph supplying H(w, x, t chi)
            t: Deformation parameter in R^q, used with ``deform``
            x_init: Initial guess for x (default constant x0)

        Returns:
            The attached disc
        """
        manifold = self.manifold
        w_values = w.values if isinstance(w, CircleFunction) else np.asarray(w, dtype=complex)
        if w_values.ndim == 1:
            w_values = w_values[:, None]
        if w_values.shape[1] != manifold.p:
            raise PreconditionError(f"w must have {manifold.p} components, got {w_values.shape[1]}")
        grid = CircleGrid(w_values.shape[0])
        check_holomorphic(w_values, tol=W_HOLOMORPHIC_TOLERANCE)

        base_x = np.zeros(manifold.q) if x0 is None else np.asarray(x0, dtype=float).reshape(manifold.q)
        if deform is not None:
            s = np.outer(deform.chi_values(grid), np.zeros(manifold.q) if t is None else np.asarray(t, dtype=float))

            def height(params):
                return deform.height(params, s)
        else:
            height = manifold.height

        w_block = np.concatenate([w_values.real, w_values.imag], axis=1)

        def bishop_map(x):
            params = np.concatenate([w_block, x], axis=1)
            return base_x[None, :] - t1_values(height(params))

        start = np.tile(base_x, (grid.size, 1)) if x_init is None else np.array(x_init, dtype=float)
        result = damped_picard(
            bishop_map,
            start,
            tol=self.tol,
            max_iter=self.max_iter,
            damping=self.damping,
            trust_radius=self.trust_radius,
            label="bishop",
        )
        x = result.x
        y = height(np.concatenate([w_block, x], axis=1))
        self.logger.debug("Bishop solve converged in %d iterations (residual %.3e)", result.iterations, result.residual)
        return AnalyticDisc(grid, w_values, x, y, base_x, result.residual, result.iterations)


def solve_bishop(
    manifold: GenericManifold,
    w: Any,
    x0: Optional[Sequence[float]] = None,
    deform=None,
    t: Optional[Sequence[float]] = None,
    config: Optional[Dict[str, Any]] = None,
    x_init: Optional[np.ndarray] = None,
) -> AnalyticDisc:
    """Solve Bishop's equation; see :meth:`BishopSolver.solve`."""
    return BishopSolver(manifold, config).solve(w, x0=x0, deform=deform, t=t, x_init=x_init)


def section2_w(grid: CircleGrid, p: int, c: float) -> np.ndarray:
    """w_c(zeta) = (c (1 - zeta), 0, ..., 0)."""
    w = np.zeros((grid.size, p), dtype=complex)
    w[:, 0] = c * (1.0 - grid.zeta)
    return w


def two_component_w(grid: CircleGrid, p: int, c: float) -> np.ndarray:
    """w_c(zeta) = (c (1 - zeta), i c (1 - zeta), 0, ..., 0)."""
    if p < 2:
        raise PreconditionError("the two-component disc needs p >= 2")
    w = section2_w(grid, p, c)
    w[:, 1] = 1j * c * (1.0 - grid.zeta)
    return w


@dataclass(frozen=True)
class CrossingReport:
    """Boundary angles where a disc meets a hypersurface of M."""
    thetas: List[float]
    submanifold: str

    @property
    def count(self) -> int:
        return len(self.thetas)

    def to_dict(self) -> Dict[str, Any]:
        return {"submanifold": self.submanifold, "thetas": self.thetas, "count": self.count}


def find_boundary_crossings(disc: AnalyticDisc, hypersurface: Submanifold, xtol: float = CROSSING_XTOL) -> CrossingReport:
    """
    Locate the boundary angles where the disc meets a codimension-one submanifold.

    Sign changes between grid nodes are bracketed and refined with Brent's
    method on the trigonometric interpolant; nodes where the equation vanishes
    to round-off count as crossings themselves.
    """
    if hypersurface.codim != 1:
        raise PreconditionError(f"{hypersurface.name} must have codimension 1 in M")
    grid = disc.grid
    theta = grid.theta
    values = hypersurface.residual(disc.params)[:, 0]
    scale = max(1.0, float(np.max(np.abs(values))))
    zero = np.abs(values) <= 1e-13 * scale

    def g(angle):
        return float(hypersurface.residual(disc.params_at_angle(angle)[None, :])[0, 0])

    roots = [float(theta[j]) for j in np.flatnonzero(zero)]
    for j in range(grid.size):
        k = (j + 1) % grid.size
        if zero[j] or zero[k] or values[j] * values[k] >= 0.0:
            continue
        upper = theta[k] if k else 2.0 * np.pi
        roots.append(float(brentq(g, theta[j], upper, xtol=xtol)) % (2.0 * np.pi))

    merged: List[float] = []
    for root in sorted(roots):
        if merged and abs(root - merged[-1]) < 1e-8:
            continue
        merged.append(root)
    if len(merged) > 1 and (2.0 * np.pi - merged[-1]) + merged[0] < 1e-8:
        merged.pop()
    return CrossingReport(merged, hypersurface.name)


def build_section2_disc(
    manifold: GenericManifold,
    m1: Submanifold,
    c: float,
    grid: Optional[CircleGrid] = None,
    config: Optional[Dict[str, Any]] = None,
) -> Tuple[AnalyticDisc, CrossingReport]:
    """
    Attach the disc with w_c = (c(1 - zeta), 0, ...) and find where it meets M1.

    Returns:
        The disc and its crossing report, which must list exactly two angles,
        one of them 0

    Raises:
        GeometryError: when the solve fails or the crossing count is not two
    """
    if c <= 0:
        raise PreconditionError(f"disc size must be positive, got {c}")
    grid = grid or CircleGrid()
    try:
        disc = solve_bishop(manifold, section2_w(grid, manifold.p, c), config=config)
    except ConvergenceError as e:
        raise GeometryError(f"disc of size {c} cannot be attached: {e.message}", dict(e.details, c=c)) from e
    crossings = find_boundary_crossings(disc, m1)
    if crossings.count != 2 or crossings.thetas[0] != 0.0:
        raise GeometryError(
            f"disc of size {c} meets {m1.name} at {crossings.count} boundary points, expected 2",
            {"thetas": crossings.thetas, "c": c},
        )
    logger.info("Section disc c=%.3g meets %s at theta=%s", c, m1.name, crossings.thetas)
    return disc, crossings


def two_component_disc(
    manifold: GenericManifold,
    c: float,
    grid: Optional[CircleGrid] = None,
    config: Optional[Dict[str, Any]] = None,
) -> AnalyticDisc:
    """Attach the disc with w_c = (c(1 - zeta), i c(1 - zeta), 0, ...)."""
    grid = grid or CircleGrid()
    return solve_bishop(manifold, two_component_w(grid, manifold.p, c), config=config)


class DiscFamily:
    """
    Finite-dimensional slice of attached discs through the base point.

    The holomorphic part is w_A + sum (alpha + i beta)(zeta^m - 1) e_k over
    components k and modes m = 1..modes, so every member keeps A(1).
    """

    def __init__(
        self,
        manifold: GenericManifold,
        disc: AnalyticDisc,
        modes: int = 3,
        config: Optional[Dict[str, Any]] = None,
        components: Optional[Sequence[int]] = None,
    ):
        self.manifold = manifold
        self.disc = disc
        self.modes = modes
        self.components = list(range(manifold.p)) if components is None else list(components)
        self.solver = BishopSolver(manifold, config)
        zeta = disc.grid.zeta
        self._shapes = [zeta ** m - 1.0 for m in range(1, modes + 1)]

    @property
    def dim(self) -> int:
        return 2 * len(self.components) * self.modes

    def holomorphic_part(self, params: np.ndarray) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        if params.shape != (self.dim,):
            raise PreconditionError(f"slice parameters must have shape ({self.dim},)")
        w = np.array(self.disc.w, copy=True)
        index = 0
        for k in self.components:
            for shape in self._shapes:
                w[:, k] += (params[index] + 1j * params[index + 1]) * shape
                index += 2
        return w

    def __call__(self, params: np.ndarray) -> AnalyticDisc:
        return self.solver.solve(self.holomorphic_part(params), x0=self.disc.x0, x_init=self.disc.x)


def w_slice_family(
    manifold: GenericManifold,
    disc: AnalyticDisc,
    modes: int = 3,
    config: Optional[Dict[str, Any]] = None,
) -> DiscFamily:
    """The standard slice of attached discs through A(1) around ``disc``."""
    return DiscFamily(manifold, disc, modes, config)


@dataclass(frozen=True)
class DiscJacobian:
    """Realified finite-difference Jacobians of the evaluation maps."""
    evaluation: np.ndarray
    tangent: np.ndarray
    theta0: float
    disc: AnalyticDisc

    @property
    def nparams(self) -> int:
        return self.evaluation.shape[1]


def disc_jacobian(
    family: Callable[[np.ndarray], AnalyticDisc],
    params: np.ndarray,
    theta0: float,
    step: float = 1e-5,
) -> DiscJacobian:
    """
    Central-difference Jacobians of A -> A(zeta0) and A -> (d/dtheta) A(1).

    Args:
        family: Map from parameters to attached discs
        params: Base parameters
        theta0: Angle of the boundary point zeta0
        step: Finite-difference step

    Returns:
        DiscJacobian with real 2n x k matrices
    """
    params = np.asarray(params, dtype=float)
    base = family(params)
    n = base.n
    k = params.shape[0]
    evaluation = np.zeros((2 * n, k))
    tangent = np.zeros((2 * n, k))
    for j in range(k):
        shift = np.zeros(k)
        shift[j] = step
        plus, minus = family(params + shift), family(params - shift)
        evaluation[:, j] = realify(plus.at_angle(theta0) - minus.at_angle(theta0)) / (2.0 * step)
        tangent[:, j] = realify(plus.tangent_at_one() - minus.tangent_at_one()) / (2.0 * step)
    return DiscJacobian(evaluation, tangent, theta0, base)


def boundary_clearance(disc: AnalyticDisc, submanifold: Submanifold) -> Tuple[float, int]:
    """
    Smallest distance from the boundary to N relative to |1 - zeta|, away from zeta = 1.

    Returns:
        The clearance and the grid index where it is attained
    """
    zeta = disc.grid.zeta
    distances = submanifold.distance(disc.boundary[1:]) / np.abs(1.0 - zeta[1:])
    index = int(np.argmin(distances))
    return float(distances[index]), index + 1


@dataclass
class GoodDisc:
    """A disc through z0 whose boundary avoids N away from zeta = 1."""
    disc: AnalyticDisc
    v0: np.ndarray
    clearance: float
    crossings: CrossingReport
    tangency: TangencyReport
    perturbation: Optional[Dict[str, Any]] = None
    candidates_tried: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "clearance": self.clearance,
            "v0": [[float(c.real), float(c.imag)] for c in self.v0],
            "crossings": self.crossings.to_dict(),
            "tangency": self.tangency.to_dict(),
            "perturbation": self.perturbation,
            "candidates_tried": self.candidates_tried,
            "residual": self.disc.residual,
        }


def _candidate_perturbations(p: int, delta: float):
    for scale in (0.125, 0.25, 0.5, 1.0):
        for k in range(p):
            for m in (1, 2):
                for phase in (1.0, 1j, -1.0, -1j):
                    yield {"component": k, "mode": m, "coefficient": phase * scale * delta}


def find_good_disc(
    manifold: GenericManifold,
    submanifold: Submanifold,
    m1: Submanifold,
    c: float,
    delta: float,
    grid: Optional[CircleGrid] = None,
    config: Optional[Dict[str, Any]] = None,
) -> GoodDisc:
    """
    Search for a disc near A_c with A(1) = z0 whose boundary avoids N.

    The search starts from the section disc and perturbs its holomorphic part
    by (zeta^m - 1) e_k multiples of growing size up to ``delta``, moving the
    second crossing with M1 off N. Every perturbation vanishes at zeta = 1,
    so A(1) = z0 is kept and the base point never moves; the mode-1 terms
    turn the direction of the disc at z0 instead. Each candidate is verified a posteriori:
    boundary clearance above the configured threshold, and the tangent v0 at 1
    outside both T^c_{z0} M and T_{z0} N.

    Raises:
        PreconditionError: if N has codimension < 2 or T_{z0} N contains T^c_{z0} M
        NoGoodDiscError: if the search budget is exhausted
    """
    config = config or {}
    min_clearance = config.get("min_clearance", 1e-6)
    budget = config.get("search_budget", 64)
    if submanifold.codim < 2:
        raise PreconditionError(f"{submanifold.name} must have codimension >= 2 in M")
    z0 = manifold.base_point
    tangency = tangency_check(submanifold, manifold, z0)
    if tangency.contains_tc:
        raise PreconditionError(f"T_z0 {submanifold.name} contains the complex tangent space")

    disc, crossings = build_section2_disc(manifold, m1, c, grid, config)
    tc = manifold.complex_tangent_basis(z0)
    tn = submanifold.tangent_basis(z0)
    solver = BishopSolver(manifold, config)
    zeta = disc.grid.zeta
    closest = {"clearance": -np.inf}

    def verify(candidate: AnalyticDisc):
        clearance, index = boundary_clearance(candidate, submanifold)
        v0 = candidate.tangent_at_one()
        rv0 = realify(v0)
        transversal = min(distance_to_subspace(rv0, tc), distance_to_subspace(rv0, tn))
        return clearance, index, v0, transversal

    tried = 0
    candidates = [None] + list(_candidate_perturbations(manifold.p, delta))
    for perturbation in candidates[: budget + 1]:
        tried += 1
        if perturbation is None:
            candidate = disc
        else:
            w = np.array(disc.w, copy=True)
            w[:, perturbation["component"]] += perturbation["coefficient"] * (zeta ** perturbation["mode"] - 1.0)
            try:
                candidate = solver.solve(w, x_init=disc.x)
            except ConvergenceError as e:
                logger.debug("Candidate %s failed to attach: %s", perturbation, e.message)
                continue
        clearance, index, v0, transversal = verify(candidate)
        if clearance > closest["clearance"]:
            closest = {"clearance": clearance, "theta": float(disc.grid.theta[index]), "candidate": tried}
        if clearance > min_clearance and transversal > 1e-8:
            if perturbation is not None:
                perturbation = {
                    "component": perturbation["component"],
                    "mode": perturbation["mode"],
                    "coefficient": [float(np.real(perturbation["coefficient"])), float(np.imag(perturbation["coefficient"]))],
                }
            logger.info("Good disc found after %d candidate(s), clearance %.3e", tried, clearance)
            return GoodDisc(candidate, v0, clearance, crossings, tangency, perturbation, tried)
    raise NoGoodDiscError(
        f"no disc within {delta} avoids {submanifold.name} (best clearance {closest['clearance']:.3e})",
        {"closest_approach": closest, "candidates": tried},
    )
