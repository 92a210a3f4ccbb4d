"""
Normal deformations of a manifold along a disc and the disc families they
generate.

M_t = {y = H(w, x, t)} with H = h + kappa(t) mu(w, x), where mu is a bump
centered at A(-1). Discs attached to M_{t chi} are solved from the perturbed
Bishop equation x_t = -T1 H(w, x_t, t chi) + x0 with chi a bump on the circle
supported near -1 and normalized by J(chi) = 1.
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linprog

from .bishop import AnalyticDisc, BishopParams, BishopSolver
from .circle_ops import CircleGrid, derivative_at_one, j_functional_values, t1_values
from .errors import ERankError, PreconditionError
from .fixed_point import damped_picard, sup_norm
from .linalg import RankDecision, numerical_rank, realify
from .manifold import GenericManifold, PolynomialMap, Submanifold, variable_names

logger = logging.getLogger(__name__)

CONE_MARGIN = 1e-6


def _bump(s: np.ndarray) -> np.ndarray:
    inside = np.abs(s) < 1.0
    safe = np.where(inside, s, 0.0)
    return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe ** 2)), 0.0)


def _bump_log_derivative(s: np.ndarray) -> np.ndarray:
    inside = np.abs(s) < 1.0
    safe = np.where(inside, s, 0.0)
    return np.where(inside, -2.0 * safe / (1.0 - safe ** 2) ** 2, 0.0)


class DeformedGraph:
    """The graphs y = h(w, x) + kappa(s) mu(w, x) around a given disc."""

    def __init__(self, manifold: GenericManifold, disc: AnalyticDisc, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the deformation.

        Args:
            manifold: The undeformed manifold M
            disc: Disc whose point A(-1) centers the bump mu
            config: Optional profile settings (kappa_radius, mu_radius, chi_delta)
        """
        self.base = manifold
        self.disc = disc
        self.config = config or {}
        self.logger = logging.getLogger(self.__class__.__name__)
        self._load_config()
        self.center = disc.params[disc.grid.size // 2]
        self._chi_cache: Dict[int, np.ndarray] = {}

    def _load_config(self) -> None:
        self.kappa_radius = self.config.get("kappa_radius", 0.1)
        self.mu_radius = self.config.get("mu_radius", 0.2)
        self.chi_delta = self.config.get("chi_delta", np.pi / 8)

    def kappa(self, s: np.ndarray) -> np.ndarray:
        """Identity near 0, smoothly clipped at kappa_radius; (K, q) -> (K, q)."""
        s = np.atleast_2d(s)
        ratio = np.sum(s ** 2, axis=-1, keepdims=True) / self.kappa_radius ** 2
        return s * (1.0 + ratio ** 2) ** -0.25

    def mu(self, params: np.ndarray) -> np.ndarray:
        scaled = (np.atleast_2d(params) - self.center) / self.mu_radius
        return np.prod(_bump(scaled), axis=-1)

    def mu_gradient(self, params: np.ndarray) -> np.ndarray:
        scaled = (np.atleast_2d(params) - self.center) / self.mu_radius
        return self.mu(params)[:, None] * _bump_log_derivative(scaled) / self.mu_radius

    def height(self, params: np.ndarray, s: np.ndarray) -> np.ndarray:
        params = np.atleast_2d(params)
        return self.base.height(params) + self.kappa(s) * self.mu(params)[:, None]

    def height_x(self, params: np.ndarray, s: np.ndarray) -> np.ndarray:
        params = np.atleast_2d(params)
        grad = self.mu_gradient(params)[:, 2 * self.base.p:]
        return self.base.height_x(params) + self.kappa(s)[:, :, None] * grad[:, None, :]

    def chi_values(self, grid: CircleGrid) -> np.ndarray:
        """Bump supported in |theta - pi| < chi_delta with J(chi) = 1."""
        if grid.size not in self._chi_cache:
            offset = grid.theta - np.pi
            delta = self.chi_delta
            inside = np.abs(offset) < delta
            safe = np.where(inside, offset, 0.0)
            raw = np.where(inside, np.exp(-delta ** 2 / (delta ** 2 - safe ** 2)), 0.0)
            scale = j_functional_values(raw)
            if scale <= 0.0:
                raise PreconditionError(f"bump has non-positive functional {scale:.3e}")
            self._chi_cache[grid.size] = raw / scale
        return self._chi_cache[grid.size]

    def deformation(self, grid: CircleGrid, t: Sequence[float]) -> np.ndarray:
        """s = t chi on the grid, shape (N, q)."""
        return np.outer(self.chi_values(grid), np.asarray(t, dtype=float))

    def attachment_residual(self, disc: AnalyticDisc, t: Sequence[float]) -> float:
        height = self.height(disc.params, self.deformation(disc.grid, t))
        return sup_norm(disc.y - height)


class KGraph:
    """
    The hypersurface K = {v1 = k(u1, u2.., v2.., x)} of M.

    Base points of the translated families are taken on K.
    """

    def __init__(self, manifold: GenericManifold, k: Optional[PolynomialMap] = None):
        p, q = manifold.p, manifold.q
        self.manifold = manifold
        self.names = ["u1"] + [f"u{j}" for j in range(2, p + 1)] + [f"v{j}" for j in range(2, p + 1)] + [
            f"x{j}" for j in range(1, q + 1)
        ]
        self.k = k if k is not None else PolynomialMap([[]], self.names)
        if self.k.ncomp != 1 or self.k.nvars != len(self.names):
            raise PreconditionError(f"k must be one polynomial in {self.names}")
        if self.k.constant_terms()[0] != 0.0:
            raise PreconditionError("K must pass through the origin (k(0) = 0)")

    def _reduced(self, params: np.ndarray) -> np.ndarray:
        p = self.manifold.p
        return np.delete(np.atleast_2d(params), p, axis=-1)

    def v1(self, params: np.ndarray) -> np.ndarray:
        """k evaluated at the K-coordinates of full parameters (the v1 slot is ignored)."""
        return self.k.evaluate(self._reduced(params))[:, 0]

    def as_submanifold(self, name: str = "K") -> Submanifold:
        p = self.manifold.p
        terms = [(tuple(1 if j == p else 0 for j in range(self.manifold.real_dim)), 1.0)]
        for exponents, coefficient in self.k.tables[0]:
            full = list(exponents)
            full.insert(p, 0)
            terms.append((tuple(full), -coefficient))
        return Submanifold(self.manifold, PolynomialMap([terms], variable_names(p, self.manifold.q)), name)


def family_base_params(disc: AnalyticDisc, params: BishopParams, kgraph: Optional[KGraph]) -> np.ndarray:
    """Absolute parameters (Re w, Im w, x) of p0 for the given offsets."""
    p = disc.p
    base = disc.params[0].copy()
    if params.is_zero():
        return base
    offset = np.zeros_like(base)
    offset[0] = params.p0_u1
    offset[1:p] = np.real(params.p0_w)
    offset[p + 1: 2 * p] = np.imag(params.p0_w)
    offset[2 * p:] = params.p0_x
    target = base + offset
    if kgraph is not None:
        target[p] = kgraph.v1(target)[0]
    return target


def build_family(
    disc: AnalyticDisc,
    dg: Optional[DeformedGraph],
    params: BishopParams,
    kgraph: Optional[KGraph] = None,
    manifold: Optional[GenericManifold] = None,
    config: Optional[Dict[str, Any]] = None,
) -> AnalyticDisc:
    """
    Solve for the disc A_{t,tau,a,p0}.

    The holomorphic part is (e^{i tau} w1 + u1^0 + i v1^0, w_k + a_k (zeta - 1)
    + w_k^0) and the base offset x0 + x^0, attached to M_{t chi}; v1^0 is read
    off the K-graph so that A(1) = p0 lies on K.

    Args:
        disc: Base disc A
        dg: Deformation; None solves on the undeformed manifold with t ignored
        params: Family parameters
        kgraph: Graph of K (default v1 = 0)
        manifold: Manifold to use when ``dg`` is None
        config: Solver settings

    Returns:
        The attached disc
    """
    manifold = dg.base if dg is not None else manifold
    if manifold is None:
        raise PreconditionError("build_family needs a deformation or a manifold")
    if dg is None and np.any(params.t):
        raise PreconditionError("deformation parameter t given without a deformed graph")
    config = config or {}
    if "smallness" in config:
        params.check_bounds(config["smallness"])
    p = manifold.p
    target = family_base_params(disc, params, kgraph)
    w = np.array(disc.w, copy=True)
    if not params.is_zero():
        w1_at_one = disc.w[0, 0]
        w[:, 0] = np.exp(1j * params.tau) * (disc.w[:, 0] - w1_at_one) + target[0] + 1j * target[p]
        zeta = disc.grid.zeta
        for k in range(1, p):
            a_k = params.a[k - 1] if len(params.a) >= k else 0.0
            w[:, k] = disc.w[:, k] - disc.w[0, k] + a_k * (zeta - 1.0) + target[k] + 1j * target[p + k]
    x0 = target[2 * p:]
    x_init = disc.x if params.is_zero() else disc.x - disc.x0 + x0
    solver = BishopSolver(manifold, config)
    return solver.solve(w, x0=x0, deform=dg, t=params.t if dg is not None else None, x_init=x_init)


@dataclass(frozen=True)
class GMatrix:
    """Solution of G = I + T1(G H_x(A)) on the grid."""
    values: np.ndarray
    h_x: np.ndarray
    residual: float
    iterations: int

    @property
    def identity_defect(self) -> float:
        """sup |T1 G + G H_x(A)|; vanishes when H_x(A(1)) = 0."""
        return sup_norm(t1_values(self.values) + self.values @ self.h_x)


def solve_g_matrix(
    disc: AnalyticDisc,
    graph: Union[GenericManifold, DeformedGraph],
    t: Optional[Sequence[float]] = None,
    config: Optional[Dict[str, Any]] = None,
) -> GMatrix:
    """
    Solve G = I + T1(G H_x o A) by Picard iteration.

    Args:
        disc: Disc attached to the graph
        graph: The manifold, or a deformed graph together with ``t``
        t: Deformation parameter for a deformed graph
        config: Optional settings (g_tol, max_iter)

    Returns:
        GMatrix with G(1) = I
    """
    config = config or {}
    if isinstance(graph, DeformedGraph):
        t = np.zeros(graph.base.q) if t is None else t
        h_x = graph.height_x(disc.params, graph.deformation(disc.grid, t))
    else:
        h_x = graph.height_x(disc.params)
    q = h_x.shape[1]
    eye = np.eye(q)

    def g_map(g):
        return eye + t1_values(g @ h_x)

    result = damped_picard(
        g_map,
        np.tile(eye, (disc.grid.size, 1, 1)),
        tol=config.get("g_tol", 1e-10),
        max_iter=config.get("max_iter", 200),
        label="G matrix",
    )
    return GMatrix(result.x, h_x, result.residual, result.iterations)


def normal_component(disc: AnalyticDisc) -> np.ndarray:
    """y-coordinates of -dA/dzeta(1), the projection onto T0 C^n / T0 M."""
    return np.imag(-disc.dzeta_at_one()[disc.p:])


@dataclass
class NormalDerivative:
    """D(t) on a t-grid, the difference quotient D'(0) and its functional cross-check."""
    t_values: np.ndarray
    d_values: np.ndarray
    d_prime: np.ndarray
    rank: RankDecision
    cross_check: np.ndarray
    y_dot_functional: np.ndarray
    y_dot_slope: np.ndarray
    chi_functional: float
    g: GMatrix

    @property
    def discrepancy(self) -> float:
        return sup_norm(self.d_prime - self.cross_check)

    @property
    def y_dot_discrepancy(self) -> float:
        return sup_norm(self.y_dot_functional - self.cross_check)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t_values": self.t_values.tolist(),
            "D": self.d_values.tolist(),
            "D_prime": self.d_prime.tolist(),
            "singular_values": self.rank.singular_values.tolist(),
            "rank": self.rank.rank,
            "cross_check": self.cross_check.tolist(),
            "discrepancy": self.discrepancy,
            "Y_dot_functional": self.y_dot_functional.tolist(),
            "Y_dot_discrepancy": self.y_dot_discrepancy,
            "Y_dot_slope_at_one": self.y_dot_slope.tolist(),
            "J_chi": self.chi_functional,
            "G_residual": self.g.residual,
        }


def normal_derivative_map(
    disc: AnalyticDisc,
    dg: DeformedGraph,
    t_values: Optional[Sequence[Sequence[float]]] = None,
    step: float = 1e-4,
    config: Optional[Dict[str, Any]] = None,
) -> NormalDerivative:
    """
    Evaluate D(t) = Pi(-dA_t/dzeta(1)) and its derivative at t = 0.

    Column j of D'(0) is a Richardson-extrapolated central difference in t_j
    (steps h and h/2, fourth order); it is compared with
    J(G chi H_{t_j} o A) where H_{t_j} = mu e_j is the t_j-derivative of H at
    t = 0. The stencil discs also give Ydot_j = dy_t/dt_j, whose functional
    should equal the same column and whose theta-derivative at 1 vanishes.

    Args:
        disc: Base disc attached to M
        dg: Deformation around the disc
        t_values: Points t at which D is reported (default t = 0)
        step: Coarse difference step h in t
        config: Solver settings; stencil solves use stencil_tol (default 1e-13)
    """
    config = dict(config or {})
    q = dg.base.q
    grid = disc.grid
    stencil = dict(config, tol=config.get("stencil_tol", 1e-13), max_iter=config.get("stencil_max_iter", 400))
    solver = BishopSolver(dg.base, stencil)

    def solve(t):
        return solver.solve(disc.w, x0=disc.x0, deform=dg, t=t, x_init=disc.x)

    t_array = np.zeros((1, q)) if t_values is None else np.atleast_2d(np.asarray(t_values, dtype=float))
    d_values = np.array([normal_component(solve(t)) for t in t_array])

    chi = dg.chi_values(grid)
    chi_functional = j_functional_values(chi)
    g = solve_g_matrix(disc, dg.base, config=config)
    mu = dg.mu(disc.params)
    d_prime = np.zeros((q, q))
    cross_check = np.zeros((q, q))
    y_dot_functional = np.zeros((q, q))
    y_dot_slope = np.zeros((q, q))
    def central(j, h):
        shift = np.zeros(q)
        shift[j] = h
        plus, minus = solve(shift), solve(-shift)
        return (normal_component(plus) - normal_component(minus)) / (2.0 * h), (plus.y - minus.y) / (2.0 * h)

    for j in range(q):
        # Richardson: (4 D_{h/2} - D_h) / 3 removes the h^2 term of the central difference.
        coarse_d, coarse_y = central(j, step)
        fine_d, fine_y = central(j, step / 2.0)
        d_prime[:, j] = (4.0 * fine_d - coarse_d) / 3.0
        y_dot = (4.0 * fine_y - coarse_y) / 3.0
        y_dot[0] = 0.0
        y_dot_functional[:, j] = j_functional_values(y_dot)
        y_dot_slope[:, j] = np.real(derivative_at_one(y_dot))
        cross_check[:, j] = j_functional_values((chi * mu)[:, None] * g.values[:, :, j])
    rank = numerical_rank(d_prime, rtol=1e-6)
    logger.info("D'(0) has rank %d of %d (cross-check discrepancy %.2e)", rank.rank, q, sup_norm(d_prime - cross_check))
    return NormalDerivative(t_array, d_values, d_prime, rank, cross_check, y_dot_functional, y_dot_slope, chi_functional, g)


@dataclass
class ParameterBox:
    """Half-widths of the sampled family parameters."""
    t: float = 0.0
    tau: float = 0.0
    a: float = 0.0
    p0_u1: float = 0.0
    p0_w: float = 0.0
    p0_x: float = 0.0
    samples: int = 0
    seed: int = 0

    @property
    def is_empty(self) -> bool:
        return self.samples <= 0

    def sample(self, p: int, q: int) -> List[BishopParams]:
        """The center followed by ``samples`` uniform draws; empty for an empty box."""
        if self.is_empty:
            return []
        rng = np.random.default_rng(self.seed)
        drawn = [BishopParams.zero(p, q)]

        def uniform(width, size):
            return rng.uniform(-width, width, size) if width > 0 else np.zeros(size)

        for _ in range(self.samples):
            a = uniform(self.a, p - 1) + 1j * uniform(self.a, p - 1)
            p0_w = uniform(self.p0_w, p - 1) + 1j * uniform(self.p0_w, p - 1)
            drawn.append(
                BishopParams(
                    t=uniform(self.t, q),
                    tau=float(uniform(self.tau, 1)[0]),
                    a=a,
                    p0_u1=float(uniform(self.p0_u1, 1)[0]),
                    p0_w=p0_w,
                    p0_x=uniform(self.p0_x, q),
                )
            )
        return drawn

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ParameterBox":
        return cls(**data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "tau": self.tau,
            "a": self.a,
            "p0_u1": self.p0_u1,
            "p0_w": self.p0_w,
            "p0_x": self.p0_x,
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class ConeFit:
    """Maximin weight of a target direction in the cone spanned by a cloud."""
    rank: int
    margin: float
    directions: int

    @property
    def interior(self) -> bool:
        return self.margin > CONE_MARGIN

    def to_dict(self) -> Dict[str, Any]:
        return {"rank": self.rank, "margin": self.margin, "interior": self.interior, "directions": self.directions}


def fit_cone(directions: np.ndarray, target: np.ndarray) -> ConeFit:
    """
    Solve max r subject to sum lam_i d_i = target, lam_i >= r, r <= 1.

    A positive optimum means the target is a strictly positive combination of
    every direction, hence interior when the directions span.
    """
    k, dim = directions.shape
    rank = numerical_rank(directions, rtol=1e-6).rank if k else 0
    if k == 0:
        return ConeFit(0, 0.0, 0)
    cost = np.zeros(k + 1)
    cost[-1] = -1.0
    a_eq = np.hstack([directions.T, np.zeros((dim, 1))])
    a_ub = np.hstack([-np.eye(k), np.ones((k, 1))])
    result = linprog(
        cost,
        A_ub=a_ub,
        b_ub=np.zeros(k),
        A_eq=a_eq,
        b_eq=target,
        bounds=[(0, None)] * k + [(0, 1)],
        method="highs",
    )
    margin = float(-result.fun) if result.status == 0 else 0.0
    if rank < dim:
        margin = 0.0
    return ConeFit(rank, margin, k)


def cones_overlap(first: np.ndarray, second: np.ndarray) -> bool:
    """Whether the convex cones spanned by two direction clouds share a nonzero vector."""
    if len(first) == 0 or len(second) == 0:
        return False
    k1, k2 = len(first), len(second)
    dim = first.shape[1]
    a_eq = np.vstack([
        np.hstack([first.T, -second.T]),
        np.hstack([np.ones((1, k1)), np.zeros((1, k2))]),
    ])
    b_eq = np.concatenate([np.zeros(dim), [1.0]])
    result = linprog(np.zeros(k1 + k2), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * (k1 + k2), method="highs")
    return result.status == 0


@dataclass
class WedgeSample:
    """Point and direction clouds of a disc family with provenance per point."""
    points: np.ndarray
    point_disc: np.ndarray
    zetas: np.ndarray
    unattainable: np.ndarray
    subbox: List[str]
    directions: np.ndarray
    v0: np.ndarray
    cone: ConeFit
    subcones: Dict[str, Any]
    params: List[BishopParams] = field(default_factory=list)
    discs: List[AnalyticDisc] = field(default_factory=list)
    attachment: List[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_empty(self) -> bool:
        return len(self.points) == 0

    def header(self) -> List[str]:
        if not self.params:
            return []
        first = self.params[0]
        q = len(first.t)
        n = self.points.shape[1] if self.points.ndim == 2 else 0
        columns = ["disc"] + [f"t{j + 1}" for j in range(q)] + ["tau"]
        for j in range(len(first.a)):
            columns += [f"a{j + 2}_re", f"a{j + 2}_im"]
        columns.append("p0_u1")
        for j in range(len(first.p0_w)):
            columns += [f"p0_w{j + 2}_re", f"p0_w{j + 2}_im"]
        columns += [f"p0_x{j + 1}" for j in range(q)]
        columns += ["zeta_re", "zeta_im"]
        for j in range(n):
            columns += [f"z{j + 1}_re", f"z{j + 1}_im"]
        return columns + ["unattainable", "subbox"]

    def rows(self) -> List[List[Any]]:
        rows = []
        for index, point in enumerate(self.points):
            disc = int(self.point_disc[index])
            params = self.params[disc]
            row: List[Any] = [disc] + [repr(float(v)) for v in params.t] + [repr(float(params.tau))]
            for v in params.a:
                row += [repr(float(v.real)), repr(float(v.imag))]
            row.append(repr(float(params.p0_u1)))
            for v in params.p0_w:
                row += [repr(float(v.real)), repr(float(v.imag))]
            row += [repr(float(v)) for v in params.p0_x]
            zeta = self.zetas[index]
            row += [repr(float(zeta.real)), repr(float(zeta.imag))]
            for v in point:
                row += [repr(float(v.real)), repr(float(v.imag))]
            rows.append(row + [int(self.unattainable[index]), self.subbox[disc]])
        return rows

    def to_csv(self, path: Union[str, Path]) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(self.header())
            writer.writerows(self.rows())

    def summary(self) -> Dict[str, Any]:
        return {
            "points": len(self.points),
            "discs": len(self.discs),
            "unattainable_points": int(np.sum(self.unattainable)) if len(self.unattainable) else 0,
            "directions": len(self.directions),
            "cone": self.cone.to_dict(),
            "subcones": self.subcones,
            "max_attachment_residual": max(self.attachment, default=0.0),
        }


def _empty_sample(dim: int, n: int) -> WedgeSample:
    return WedgeSample(
        points=np.zeros((0, n), dtype=complex),
        point_disc=np.zeros(0, dtype=int),
        zetas=np.zeros(0, dtype=complex),
        unattainable=np.zeros(0, dtype=bool),
        subbox=[],
        directions=np.zeros((0, dim)),
        v0=np.zeros(dim),
        cone=ConeFit(0, 0.0, 0),
        subcones={},
    )


def _subbox_label(params: BishopParams, box: ParameterBox, gap: float) -> str:
    if box.tau <= 0:
        return ""
    if params.tau >= gap * box.tau:
        return "gamma2"
    if params.tau <= -gap * box.tau:
        return "gamma2_prime"
    return ""


def sample_wedge(
    disc: AnalyticDisc,
    dg: Optional[DeformedGraph],
    box: ParameterBox,
    radii: Sequence[float] = (0.95, 0.9, 0.85, 0.8),
    angles: Sequence[float] = (-0.5, -0.25, 0.0, 0.25, 0.5),
    kgraph: Optional[KGraph] = None,
    submanifold: Optional[Submanifold] = None,
    manifold: Optional[GenericManifold] = None,
    config: Optional[Dict[str, Any]] = None,
) -> WedgeSample:
    """
    Sample the family A_{t,tau,a,p0} over a parameter box.

    Directions are dA/dtheta(1) of the discs through z0 (p0 offsets zeroed),
    normalized and written in an orthonormal frame of T_{z0} M. Points are
    A(r e^{i phi}) over the given radii and angles for every sampled disc,
    labeled unattainable when p0 lies on N.

    Raises:
        ERankError: if the direction cloud spans less than T_{z0} M
    """
    config = config or {}
    manifold = dg.base if dg is not None else manifold
    if manifold is None:
        raise PreconditionError("sample_wedge needs a deformation or a manifold")
    dim = manifold.real_dim
    drawn = box.sample(manifold.p, manifold.q)
    if not drawn:
        return _empty_sample(dim, manifold.n)

    frame = manifold.tangent_basis(disc.base_point)

    def direction(candidate: AnalyticDisc) -> np.ndarray:
        v = frame.T @ realify(candidate.tangent_at_one())
        return v / np.linalg.norm(v)

    v0 = direction(disc)
    zetas = np.array([r * np.exp(1j * phi) for r in radii for phi in angles])
    gap = config.get("subbox_gap", 0.25)

    discs: List[AnalyticDisc] = []
    directions: List[np.ndarray] = []
    labels: List[str] = []
    attachment: List[float] = []
    for params in drawn:
        through_z0 = BishopParams(t=params.t, tau=params.tau, a=params.a, p0_w=np.zeros_like(params.p0_w), p0_x=np.zeros_like(params.p0_x))
        member = build_family(disc, dg, params, kgraph, manifold, config)
        anchored = member if params.p0_u1 == 0.0 and not np.any(params.p0_w) and not np.any(params.p0_x) else build_family(
            disc, dg, through_z0, kgraph, manifold, config
        )
        directions.append(direction(anchored))
        discs.append(member)
        labels.append(_subbox_label(params, box, gap))
        if dg is not None:
            attachment.append(dg.attachment_residual(member, params.t))
        else:
            attachment.append(member.attachment_residual(manifold))

    cloud = np.array(directions)
    rank = numerical_rank(cloud, rtol=1e-6).rank
    if rank < dim:
        raise ERankError(
            f"direction cloud has rank {rank}, the tangent space has dimension {dim}",
            {"rank": rank, "dimension": dim},
        )
    cone = fit_cone(cloud, v0)
    first = cloud[[label == "gamma2" for label in labels]]
    second = cloud[[label == "gamma2_prime" for label in labels]]
    subcones = {
        "gamma2": len(first),
        "gamma2_prime": len(second),
        "overlap": cones_overlap(first, second),
    }

    points, owners, point_zetas, unattainable = [], [], [], []
    for index, (params, member) in enumerate(zip(drawn, discs)):
        on_n = False
        if submanifold is not None:
            on_n = submanifold.contains(member.base_point)
        values = member.evaluate(zetas)
        points.append(values)
        owners.extend([index] * len(zetas))
        point_zetas.extend(zetas)
        unattainable.extend([on_n] * len(zetas))

    logger.info("Wedge sample: %d discs, %d points, cone margin %.3e", len(discs), len(owners), cone.margin)
    return WedgeSample(
        points=np.concatenate(points, axis=0),
        point_disc=np.array(owners, dtype=int),
        zetas=np.array(point_zetas),
        unattainable=np.array(unattainable, dtype=bool),
        subbox=labels,
        directions=cloud,
        v0=v0,
        cone=cone,
        subcones=subcones,
        params=drawn,
        discs=discs,
        attachment=attachment,
    )
