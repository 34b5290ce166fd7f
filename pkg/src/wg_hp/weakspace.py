"""Weak functions, weak derivatives, stabilizers and discrete norms.

A weak function is a pair (v0, vb): per-element interior polynomials of
degree p plus separate values at the mesh nodes.  The weak derivative of
degree p-1 and the weak convection derivative of degree p are defined
elementwise by integration-by-parts duality against Legendre test
polynomials; both reduce to diagonal solves because the mapped Legendre
mass matrix is diag(h/(2k+1)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre as npleg

from wg_hp.coeffexpr import Expr, evaluate
from wg_hp.polybasis import ElementPoly, gauss_rule, l2_project, legendre_eval
from wg_hp.slmesh import Mesh


class MeshMismatchError(Exception):
    """Operands live on different meshes or degrees."""


def _alt_signs(n: int) -> np.ndarray:
    """(-1)^k for k = 0..n-1, i.e. P_k(-1)."""
    s = np.ones(n)
    s[1::2] = -1.0
    return s


@dataclass(frozen=True)
class BrokenPoly:
    """Mesh-aligned per-element polynomials of one degree."""

    mesh: Mesh
    coeffs: np.ndarray = field(repr=False)  # shape (N, degree+1)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != self.mesh.n_elements:
            raise ValueError("coefficient block count must equal element count")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    def element_poly(self, j: int) -> ElementPoly:
        a, b = self.mesh.element(j)
        return ElementPoly(a, b, self.coeffs[j])

    def l2_norm_sq(self) -> float:
        k = np.arange(self.coeffs.shape[1])
        return float(np.sum(self.coeffs**2 * (self.mesh.widths[:, None] / (2 * k + 1))))

    def l2_norm(self) -> float:
        return np.sqrt(self.l2_norm_sq())


@dataclass(frozen=True)
class WeakFunction:
    """Discrete unknown: interior coefficients (N, p+1) plus node values (N+1,)."""

    mesh: Mesh
    coeffs: np.ndarray = field(repr=False)
    vb: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        v = np.array(self.vb, dtype=float)
        if c.ndim != 2 or c.shape[0] != self.mesh.n_elements:
            raise ValueError("coefficient block count must equal element count")
        if v.shape != (self.mesh.n_elements + 1,):
            raise ValueError("vb length must equal node count")
        c.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "vb", v)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @classmethod
    def zeros(cls, mesh: Mesh, p: int) -> "WeakFunction":
        return cls(mesh, np.zeros((mesh.n_elements, p + 1)), np.zeros(mesh.n_elements + 1))

    @classmethod
    def from_callable(cls, mesh: Mesh, p: int, y, nquad: int | None = None) -> "WeakFunction":
        """Conforming weak function: v0 = elementwise L2 projection of y,
        vb = nodal values of y."""
        coeffs = np.empty((mesh.n_elements, p + 1))
        for j in range(mesh.n_elements):
            coeffs[j] = l2_project(y, p, mesh.element(j), nquad).coeffs
        vb = np.array([float(y(x)) for x in mesh.nodes])
        return cls(mesh, coeffs, vb)

    def element_poly(self, j: int) -> ElementPoly:
        a, b = self.mesh.element(j)
        return ElementPoly(a, b, self.coeffs[j])

    def trace_left(self, j: int) -> float:
        """v0(x_{j}^+): value of element j's interior polynomial at its left end."""
        return float(self.coeffs[j] @ _alt_signs(self.degree + 1))

    def trace_right(self, j: int) -> float:
        """v0(x_{j+1}^-): value of element j's interior polynomial at its right end."""
        return float(np.sum(self.coeffs[j]))

    def jumps(self) -> tuple[np.ndarray, np.ndarray]:
        """(v0 - vb) at the left and right endpoint of every element."""
        alt = _alt_signs(self.degree + 1)
        left = self.coeffs @ alt - self.vb[:-1]
        right = self.coeffs @ np.ones(self.degree + 1) - self.vb[1:]
        return left, right

    def pad_to_degree(self, p: int) -> "WeakFunction":
        """Embed into the degree-p space by zero-padding coefficients."""
        if p < self.degree:
            raise ValueError("cannot pad to a lower degree")
        extra = np.zeros((self.mesh.n_elements, p - self.degree))
        return WeakFunction(self.mesh, np.hstack([self.coeffs, extra]), self.vb)

    def __add__(self, other: "WeakFunction") -> "WeakFunction":
        _check_compatible(self, other)
        return WeakFunction(self.mesh, self.coeffs + other.coeffs, self.vb + other.vb)

    def __sub__(self, other: "WeakFunction") -> "WeakFunction":
        _check_compatible(self, other)
        return WeakFunction(self.mesh, self.coeffs - other.coeffs, self.vb - other.vb)

    def __mul__(self, c: float) -> "WeakFunction":
        return WeakFunction(self.mesh, c * self.coeffs, c * self.vb)

    __rmul__ = __mul__


def _check_compatible(u: WeakFunction, v: WeakFunction):
    if u.mesh.nodes.shape != v.mesh.nodes.shape or not np.array_equal(u.mesh.nodes, v.mesh.nodes):
        raise MeshMismatchError("weak functions live on different meshes")
    if u.degree != v.degree:
        raise MeshMismatchError("weak functions have different degrees")


def default_penalties(mesh: Mesh, p: int, eps1: float) -> np.ndarray:
    """sigma_j = eps1 * p^2 / h_j."""
    return eps1 * p**2 / mesh.widths


def deriv_pairing_matrix(n_test: int, n_trial: int) -> np.ndarray:
    """B[k,m] = int_{-1}^{1} P_m(t) P_k'(t) dt = 2 for m < k with k-m odd."""
    B = np.zeros((n_test, n_trial))
    for k in range(n_test):
        for m in range(min(k, n_trial)):
            if (k - m) % 2 == 1:
                B[k, m] = 2.0
    return B


def weak_derivative(v: WeakFunction) -> BrokenPoly:
    """Degree p-1 weak derivative (duality against q in P_{p-1})."""
    p = v.degree
    if p < 1:
        raise ValueError("weak derivative needs degree p >= 1")
    B = deriv_pairing_matrix(p, p + 1)
    alt = _alt_signs(p)
    k = np.arange(p)
    out = np.empty((v.mesh.n_elements, p))
    for j in range(v.mesh.n_elements):
        h = v.mesh.widths[j]
        rhs = -B @ v.coeffs[j] + v.vb[j + 1] * np.ones(p) - v.vb[j] * alt
        out[j] = (2 * k + 1) / h * rhs
    return BrokenPoly(v.mesh, out)


def weak_convection_derivative(
    v: WeakFunction, b: Expr, b_prime: Expr, nquad: int | None = None
) -> BrokenPoly:
    """Degree p weak convection derivative (duality against (b*q)' terms)."""
    p = v.degree
    if p < 1:
        raise ValueError("weak convection derivative needs degree p >= 1")
    rule = gauss_rule(nquad if nquad is not None else p + 6)
    vander = npleg.legvander(rule.nodes, p)
    dvander = np.column_stack([legendre_eval(k, rule.nodes)[1] for k in range(p + 1)])
    alt = _alt_signs(p + 1)
    k = np.arange(p + 1)
    out = np.empty((v.mesh.n_elements, p + 1))
    for j in range(v.mesh.n_elements):
        a, bnd = v.mesh.element(j)
        h = bnd - a
        x, w = rule.mapped(a, bnd)
        v0 = npleg.legval(rule.nodes, v.coeffs[j])
        bq = evaluate(b, x)
        bpq = evaluate(b_prime, x)
        # int v0 * (b*q)' dx with q = P_k(t), so q' = P_k'(t) * 2/h
        integral = (w * v0 * bpq) @ vander + (w * v0 * bq) @ dvander * (2.0 / h)
        b_right = evaluate(b, v.mesh.nodes[j + 1])
        b_left = evaluate(b, v.mesh.nodes[j])
        rhs = -integral + v.vb[j + 1] * b_right * np.ones(p + 1) - v.vb[j] * b_left * alt
        out[j] = (2 * k + 1) / h * rhs
    return BrokenPoly(v.mesh, out)


def stabilizer_S(u: WeakFunction, v: WeakFunction, sigmas) -> float:
    """sum_j sigma_j * [jump_u * jump_v at the right end + at the left end]."""
    _check_compatible(u, v)
    sig = np.asarray(sigmas, dtype=float)
    ul, ur = u.jumps()
    vl, vr = v.jumps()
    return float(np.sum(sig * (ur * vr + ul * vl)))


def stabilizer_Sc(u: WeakFunction, v: WeakFunction, b: Expr, eps2: float) -> float:
    """Outflow penalty: sum_j eps2 * b(x_j) * jump_u * jump_v at right ends only."""
    _check_compatible(u, v)
    bvals = evaluate(b, u.mesh.nodes[1:])
    _, ur = u.jumps()
    _, vr = v.jumps()
    return float(np.sum(eps2 * bvals * ur * vr))


def jump_seminorm(v: WeakFunction, b: Expr, eps2: float) -> float:
    """|v|_J with right-end jumps weighted by eps2*b, and weight 1/2 on the
    last element."""
    bvals = evaluate(b, v.mesh.nodes[1:])
    weights = np.ones(v.mesh.n_elements)
    weights[-1] = 0.5
    _, vr = v.jumps()
    return float(np.sqrt(np.sum(weights * eps2 * bvals * vr**2)))


def _l2_norm_sq_v0(v: WeakFunction) -> float:
    k = np.arange(v.degree + 1)
    return float(np.sum(v.coeffs**2 * (v.mesh.widths[:, None] / (2 * k + 1))))


def _broken_deriv_norm_sq(v: WeakFunction) -> float:
    total = 0.0
    for j in range(v.mesh.n_elements):
        total += v.element_poly(j).derivative().l2_norm() ** 2
    return total


def norm_p(v: WeakFunction, problem, sigmas) -> float:
    """Energy norm using the weak derivative D_{p-1}."""
    if v.degree < 1:
        raise ValueError("norm_p needs degree p >= 1")
    d = weak_derivative(v)
    sq = (
        problem.eps1 * d.l2_norm_sq()
        + _l2_norm_sq_v0(v)
        + stabilizer_S(v, v, sigmas)
        + stabilizer_Sc(v, v, problem.b, problem.eps2)
        + jump_seminorm(v, problem.b, problem.eps2) ** 2
    )
    return float(np.sqrt(max(sq, 0.0)))


def norm_broken(v: WeakFunction, problem, sigmas) -> float:
    """Energy norm using the broken classical derivative of v0."""
    sq = (
        problem.eps1 * _broken_deriv_norm_sq(v)
        + _l2_norm_sq_v0(v)
        + stabilizer_S(v, v, sigmas)
        + stabilizer_Sc(v, v, problem.b, problem.eps2)
        + jump_seminorm(v, problem.b, problem.eps2) ** 2
    )
    return float(np.sqrt(max(sq, 0.0)))
