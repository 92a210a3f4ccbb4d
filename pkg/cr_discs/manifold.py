"""
Graphed generic manifolds M = {y = h(w, x)} in C^n and submanifolds of M.

Points of C^n are complex vectors (w_1..w_p, z_1..z_q) with z = x + i y. Real
parameters of M are P = (Re w, Im w, x) in R^{2p+q}; every point of M is
``point_from_params(P)``. The height h and submanifold equations are
polynomials in P, handled symbolically with sympy so derivatives are exact.

The complex gradient convention is r_z = [-h_w | -(i/2) I - h_x / 2] with
h_w = (h_u - i h_v) / 2, so that for a real tangent vector A the derivative of
r along A equals 2 Re(r_z A).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import sympy as sym

from .errors import (
    ConfigurationError,
    GeometryError,
    NotGenericError,
    OffManifoldError,
    PreconditionError,
)
from .linalg import (
    complex_structure,
    complexify,
    null_space,
    numerical_rank,
    orthonormal_basis,
    projection_residual,
    realify,
    subspace_containment,
)

logger = logging.getLogger(__name__)

MAX_DEGREE = 4
ON_MANIFOLD_TOLERANCE = 1e-8
SUBSPACE_TOLERANCE = 1e-8

Term = Tuple[Tuple[int, ...], float]


def variable_names(p: int, q: int) -> List[str]:
    return [f"u{k}" for k in range(1, p + 1)] + [f"v{k}" for k in range(1, p + 1)] + [
        f"x{k}" for k in range(1, q + 1)
    ]


class PolynomialMap:
    """
    A polynomial map R^m -> R^k given by coefficient tables.

    Each component is a list of ``(exponents, coefficient)`` terms. The tables
    are kept verbatim so serialization round-trips bit-exactly.
    """

    def __init__(self, tables: Sequence[Sequence[Term]], names: Sequence[str]):
        self.names = list(names)
        self.nvars = len(self.names)
        self.tables: List[List[Term]] = []
        for component in tables:
            terms = []
            for exponents, coefficient in component:
                exponents = tuple(int(e) for e in exponents)
                if len(exponents) != self.nvars or min(exponents, default=0) < 0:
                    raise ConfigurationError(
                        f"monomial exponents {list(exponents)} do not match variables {self.names}"
                    )
                terms.append((exponents, float(coefficient)))
            self.tables.append(terms)
        self.gens = sym.symbols(self.names) if self.nvars else ()
        self.polys = [self._to_poly(terms) for terms in self.tables]
        self._arrays = [self._numeric(poly) for poly in self.polys]
        self._grad_arrays = [
            [self._numeric(poly.diff(gen)) for gen in self.gens] for poly in self.polys
        ]

    def _to_poly(self, terms: List[Term]) -> sym.Poly:
        rep: Dict[Tuple[int, ...], float] = {}
        for exponents, coefficient in terms:
            rep[exponents] = rep.get(exponents, 0.0) + coefficient
        rep = {k: v for k, v in rep.items() if v != 0.0}
        if not rep:
            return sym.Poly(0, *self.gens, domain="RR")
        return sym.Poly.from_dict(rep, *self.gens, domain="RR")

    def _numeric(self, poly: sym.Poly) -> Tuple[np.ndarray, np.ndarray]:
        exps, coeffs = [], []
        for monom, coeff in poly.terms():
            value = float(coeff)
            if value != 0.0:
                exps.append(monom)
                coeffs.append(value)
        if not exps:
            return np.zeros((0, self.nvars), dtype=int), np.zeros(0)
        return np.array(exps, dtype=int), np.array(coeffs)

    @property
    def ncomp(self) -> int:
        return len(self.tables)

    @staticmethod
    def _eval_array(arrays: Tuple[np.ndarray, np.ndarray], points: np.ndarray) -> np.ndarray:
        exps, coeffs = arrays
        if len(coeffs) == 0:
            return np.zeros(points.shape[0])
        monomials = np.prod(points[:, None, :] ** exps[None, :, :], axis=2)
        return monomials @ coeffs

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Values at points of shape (K, m); returns (K, k)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.tables:
            return np.zeros((points.shape[0], 0))
        return np.stack([self._eval_array(a, points) for a in self._arrays], axis=-1)

    def jacobian(self, points: np.ndarray) -> np.ndarray:
        """Jacobian at points of shape (K, m); returns (K, k, m)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.tables:
            return np.zeros((points.shape[0], 0, self.nvars))
        rows = [
            np.stack([self._eval_array(a, points) for a in grads], axis=-1)
            for grads in self._grad_arrays
        ]
        return np.stack(rows, axis=1)

    def total_degree(self) -> int:
        return max((poly.total_degree() for poly in self.polys), default=0)

    def vanishes_to_second_order(self) -> bool:
        """Symbolic check that every component has no constant or linear part."""
        for poly in self.polys:
            if not poly.coeff_monomial(1).is_zero:
                return False
            if any(not poly.coeff_monomial(gen).is_zero for gen in self.gens):
                return False
        return True

    def constant_terms(self) -> List[float]:
        return [float(poly.coeff_monomial(1)) for poly in self.polys]

    def to_tables(self) -> List[List[List[Any]]]:
        return [[[list(exponents), coefficient] for exponents, coefficient in terms] for terms in self.tables]

    @classmethod
    def from_tables(cls, tables: Sequence[Sequence[Sequence[Any]]], names: Sequence[str]) -> "PolynomialMap":
        try:
            parsed = [[(tuple(term[0]), term[1]) for term in component] for component in tables]
        except (TypeError, IndexError) as e:
            raise ConfigurationError(f"malformed polynomial table: {e}")
        return cls(parsed, names)

    def __repr__(self) -> str:
        return f"PolynomialMap({[poly.as_expr() for poly in self.polys]})"


class GenericManifold:
    """A generic manifold y = h(w, x) of CR dimension p and codimension q."""

    def __init__(
        self,
        p: int,
        q: int,
        h: PolynomialMap,
        base_point: Optional[Sequence[complex]] = None,
        max_degree: int = MAX_DEGREE,
    ):
        """
        Initialize and validate the manifold.

        Args:
            p: CR dimension, at least 1
            q: Codimension, at least 1
            h: Height map in the variables (u, v, x)
            base_point: z0, defaults to the origin
            max_degree: Bound on the total degree of h
        """
        if p < 1:
            raise PreconditionError(f"CR dimension p must be >= 1, got {p}")
        if q < 1:
            raise PreconditionError(f"codimension q must be >= 1, got {q}")
        if h.ncomp != q or h.nvars != 2 * p + q:
            raise ConfigurationError(
                f"h must have {q} components in {2 * p + q} variables, got {h.ncomp} in {h.nvars}"
            )
        if h.total_degree() > max_degree:
            raise ConfigurationError(f"h has degree {h.total_degree()} above the bound {max_degree}")
        if not h.vanishes_to_second_order():
            raise PreconditionError("h must satisfy h(0) = 0 and dh(0) = 0")
        self.p = p
        self.q = q
        self.h = h
        self.max_degree = max_degree
        self.base_point = (
            np.zeros(p + q, dtype=complex) if base_point is None else np.asarray(base_point, dtype=complex)
        )
        if self.base_point.shape != (self.n,):
            raise ConfigurationError(f"base point must have {self.n} coordinates")
        off = float(np.max(np.abs(self.eval_r(self.base_point))))
        if off > ON_MANIFOLD_TOLERANCE:
            raise OffManifoldError(f"base point is off the manifold by {off:.3e}")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def real_dim(self) -> int:
        return 2 * self.p + self.q

    def params_of(self, z: np.ndarray) -> np.ndarray:
        """Real parameters (Re w, Im w, x) of points (..., n)."""
        z = np.asarray(z, dtype=complex)
        w, zz = z[..., : self.p], z[..., self.p:]
        return np.concatenate([w.real, w.imag, zz.real], axis=-1)

    def split_params(self, params: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Split parameters into complex w and real x."""
        p = self.p
        return params[..., :p] + 1j * params[..., p: 2 * p], params[..., 2 * p:]

    def join_params(self, w: np.ndarray, x: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        return np.concatenate([w.real, w.imag, np.asarray(x, dtype=float)], axis=-1)

    def point_from_params(self, params: np.ndarray) -> np.ndarray:
        """The point of M above the given parameters."""
        params = np.asarray(params, dtype=float)
        flat = np.atleast_2d(params)
        w, x = self.split_params(flat)
        y = self.h.evaluate(flat)
        z = np.concatenate([w, x + 1j * y], axis=-1)
        return z if params.ndim > 1 else z[0]

    def height(self, params: np.ndarray) -> np.ndarray:
        return self.h.evaluate(params)

    def height_jacobian(self, params: np.ndarray) -> np.ndarray:
        """dh/dP with shape (K, q, 2p+q)."""
        return self.h.jacobian(params)

    def height_x(self, params: np.ndarray) -> np.ndarray:
        return self.height_jacobian(params)[..., 2 * self.p:]

    def height_w(self, params: np.ndarray) -> np.ndarray:
        """Holomorphic derivative h_w = (h_u - i h_v) / 2 with shape (K, q, p)."""
        jac = self.height_jacobian(params)
        p = self.p
        return 0.5 * (jac[..., :p] - 1j * jac[..., p: 2 * p])

    def eval_r(self, z: np.ndarray) -> np.ndarray:
        """r(z) = y - h(w, x); zero exactly on M."""
        z = np.asarray(z, dtype=complex)
        flat = np.atleast_2d(z)
        r = flat[:, self.p:].imag - self.h.evaluate(self.params_of(flat))
        return r if z.ndim > 1 else r[0]

    def r_z(self, z: np.ndarray) -> np.ndarray:
        """Complex gradient of r at points (K, n); returns (K, q, n)."""
        flat = np.atleast_2d(np.asarray(z, dtype=complex))
        params = self.params_of(flat)
        return self.r_z_params(params)

    def r_z_params(self, params: np.ndarray, height_x: Optional[np.ndarray] = None) -> np.ndarray:
        params = np.atleast_2d(params)
        hw = self.height_w(params)
        hx = self.height_x(params) if height_x is None else height_x
        normal = -0.5j * np.eye(self.q)[None, :, :] - 0.5 * hx
        return np.concatenate([-hw, normal], axis=-1)

    def tangent_matrix(self, z: np.ndarray) -> np.ndarray:
        """Complex n x (2p+q) matrix of images of the parameter directions."""
        params = self.params_of(np.asarray(z, dtype=complex))[None, :]
        jac = self.height_jacobian(params)[0]
        p, q = self.p, self.q
        columns = np.zeros((self.n, self.real_dim), dtype=complex)
        for k in range(p):
            columns[k, k] = 1.0
            columns[k, p + k] = 1j
        for k in range(q):
            columns[p + k, 2 * p + k] = 1.0
        columns[p:, :] += 1j * jac
        return columns

    def tangent_basis(self, z: np.ndarray) -> np.ndarray:
        """Orthonormal real basis (2n x (2p+q)) of T_z M."""
        return orthonormal_basis(realify(self.tangent_matrix(z)))

    def complex_tangent_basis(self, z: np.ndarray) -> np.ndarray:
        """Orthonormal real basis (2n x 2p) of T^c_z M = T_z M cap J T_z M."""
        basis = self.tangent_basis(z)
        jb = complex_structure(self.n) @ basis
        coefficients = null_space(projection_residual(jb, basis), rtol=SUBSPACE_TOLERANCE, atol=1e-12)
        tc = orthonormal_basis(basis @ coefficients)
        if tc.shape[1] != 2 * self.p:
            logger.warning("Complex tangent space has real dimension %d, expected %d", tc.shape[1], 2 * self.p)
        return tc

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "q": self.q,
            "max_degree": self.max_degree,
            "h": self.h.to_tables(),
            "base_point": [[float(c.real), float(c.imag)] for c in self.base_point],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GenericManifold":
        try:
            p, q = int(data["p"]), int(data["q"])
        except KeyError as e:
            raise ConfigurationError(f"manifold description is missing {e}")
        h = PolynomialMap.from_tables(data.get("h", [[] for _ in range(q)]), variable_names(p, q))
        base = data.get("base_point")
        base_point = None if base is None else [complex(re, im) for re, im in base]
        return cls(p, q, h, base_point, int(data.get("max_degree", MAX_DEGREE)))


@dataclass(frozen=True)
class DefiningData:
    """r_z at the base point and a right inverse D with r_z(z0) D = I."""
    r_z0: np.ndarray
    d_matrix: np.ndarray
    singular_values: np.ndarray


def build_defining_data(manifold: GenericManifold) -> DefiningData:
    """
    Compute r_z(z0) and its pseudoinverse right factor D.

    Raises:
        NotGenericError: if r_z(z0) has rank below q
    """
    rz0 = manifold.r_z(manifold.base_point)[0]
    decision = numerical_rank(rz0, rtol=SUBSPACE_TOLERANCE)
    if decision.rank < manifold.q:
        raise NotGenericError(
            f"r_z(z0) has rank {decision.rank} < q = {manifold.q}",
            {"singular_values": decision.singular_values.tolist()},
        )
    d_matrix = scipy.linalg.pinv(rz0)
    identity_error = float(np.max(np.abs(rz0 @ d_matrix - np.eye(manifold.q))))
    if identity_error > 1e-12:
        logger.warning("r_z(z0) D deviates from identity by %.3e", identity_error)
    return DefiningData(rz0, d_matrix, decision.singular_values)


class Submanifold:
    """A submanifold of M cut out by polynomial equations g(u, v, x) = 0."""

    def __init__(self, manifold: GenericManifold, equations: PolynomialMap, name: str = "N"):
        if equations.nvars != manifold.real_dim:
            raise ConfigurationError(
                f"{name}: equations must use the {manifold.real_dim} variables of M"
            )
        if not 0 <= equations.ncomp <= 3:
            raise ConfigurationError(f"{name}: codimension in M must be at most 3")
        self.manifold = manifold
        self.equations = equations
        self.name = name
        base_params = manifold.params_of(manifold.base_point)[None, :]
        self.through_base = bool(np.max(np.abs(equations.evaluate(base_params))) <= ON_MANIFOLD_TOLERANCE)
        if self.through_base:
            decision = numerical_rank(equations.jacobian(base_params)[0], rtol=SUBSPACE_TOLERANCE)
            if decision.rank < self.codim:
                raise GeometryError(
                    f"{name}: equation gradients are dependent at z0 (rank {decision.rank})"
                )

    @property
    def codim(self) -> int:
        return self.equations.ncomp

    def residual(self, params: np.ndarray) -> np.ndarray:
        return self.equations.evaluate(params)

    def residual_at(self, z: np.ndarray) -> np.ndarray:
        return self.residual(self.manifold.params_of(np.atleast_2d(z)))

    def contains(self, z: np.ndarray, tol: float = ON_MANIFOLD_TOLERANCE) -> bool:
        z = np.asarray(z, dtype=complex)
        on_m = float(np.max(np.abs(self.manifold.eval_r(z)))) <= tol
        return on_m and float(np.max(np.abs(self.residual_at(z)))) <= tol

    def newton_steps(self, params: np.ndarray) -> np.ndarray:
        """Least-norm first-order steps from params onto the zero set, shape (K, m)."""
        params = np.atleast_2d(params)
        if self.codim == 0:
            return np.zeros_like(params)
        g = self.equations.evaluate(params)
        dg = self.equations.jacobian(params)
        return np.einsum("kmc,kc->km", np.linalg.pinv(dg), g)

    def distance(self, z: np.ndarray) -> np.ndarray:
        """First-order distance estimate (in parameter space) from points of M."""
        steps = self.newton_steps(self.manifold.params_of(np.atleast_2d(z)))
        return np.linalg.norm(steps, axis=-1)

    def nearest(self, z: np.ndarray) -> np.ndarray:
        params = self.manifold.params_of(np.atleast_2d(z))
        return self.manifold.point_from_params(params - self.newton_steps(params))

    def project_params(self, params: np.ndarray, iterations: int = 20, tol: float = 1e-13) -> np.ndarray:
        """Newton projection of parameters onto the submanifold."""
        params = np.array(np.atleast_2d(params), dtype=float)
        for _ in range(iterations):
            step = self.newton_steps(params)
            params = params - step
            if float(np.max(np.abs(step))) <= tol:
                break
        return params

    def tangent_basis(self, z: np.ndarray) -> np.ndarray:
        """Orthonormal real basis of T_z N inside realified C^n."""
        params = self.manifold.params_of(np.asarray(z, dtype=complex))[None, :]
        kernel = null_space(self.equations.jacobian(params)[0], rtol=SUBSPACE_TOLERANCE)
        return orthonormal_basis(realify(self.manifold.tangent_matrix(z) @ kernel))

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "equations": self.equations.to_tables()}

    @classmethod
    def from_dict(cls, manifold: GenericManifold, data: Dict[str, Any], name: str = "N") -> "Submanifold":
        names = variable_names(manifold.p, manifold.q)
        if "equations" not in data:
            raise ConfigurationError(f"submanifold {name} is missing 'equations'")
        return cls(manifold, PolynomialMap.from_tables(data["equations"], names), data.get("name", name))


@dataclass(frozen=True)
class TangencyReport:
    """Whether T_z N contains T^c_z M, with a witness when it does not."""
    contains_tc: bool
    witness: Optional[np.ndarray]
    residual_singular_values: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {
            "contains_Tc": self.contains_tc,
            "witness": None if self.witness is None else [[float(c.real), float(c.imag)] for c in self.witness],
            "residual_singular_values": self.residual_singular_values.tolist(),
        }


def tangency_check(
    submanifold: Submanifold,
    manifold: GenericManifold,
    z: np.ndarray,
    tol: float = SUBSPACE_TOLERANCE,
) -> TangencyReport:
    """
    Decide whether T_z N contains T^c_z M.

    Args:
        submanifold: N
        manifold: M
        z: A point of N

    Returns:
        TangencyReport whose witness, when present, lies in T^c_z M \\ T_z N
    """
    z = np.asarray(z, dtype=complex)
    off_m = float(np.max(np.abs(manifold.eval_r(z))))
    off_n = float(np.max(np.abs(submanifold.residual_at(z))))
    if off_m > ON_MANIFOLD_TOLERANCE or off_n > ON_MANIFOLD_TOLERANCE:
        raise OffManifoldError(
            f"point is off the manifold (r = {off_m:.2e}, {submanifold.name} = {off_n:.2e})",
            {"off_manifold": off_m, "off_submanifold": off_n},
        )
    tc = manifold.complex_tangent_basis(z)
    tn = submanifold.tangent_basis(z)
    contains, witness, singular_values = subspace_containment(tc, tn, rtol=tol)
    return TangencyReport(
        contains,
        None if witness is None else complexify(witness),
        singular_values,
    )
