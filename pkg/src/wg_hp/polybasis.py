"""Legendre polynomials, Gauss quadrature, L2 projection, and the
derivative-orthogonality interpolant on an arbitrary interval.

Coefficients are always stored against the orthogonal (not orthonormal)
Legendre basis mapped affinely from [-1,1] onto the element, so the mass
matrix is diagonal with entries h/(2k+1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as npleg

DEFAULT_EXTRA_QUAD = 6  # n_q = p + 6 Gauss points for analytic integrands


def legendre_eval(k: int, t):
    """P_k(t) and P_k'(t) by the three-term recurrence; t scalar or array."""
    if k < 0:
        raise ValueError("degree must be >= 0")
    t = np.asarray(t, dtype=float)
    p_prev = np.ones_like(t)
    d_prev = np.zeros_like(t)
    if k == 0:
        return p_prev, d_prev
    p_cur = t.copy()
    d_cur = np.ones_like(t)
    for n in range(2, k + 1):
        p_next = ((2 * n - 1) * t * p_cur - (n - 1) * p_prev) / n
        d_next = d_prev + (2 * n - 1) * p_cur
        p_prev, p_cur = p_cur, p_next
        d_prev, d_cur = d_cur, d_next
    return p_cur, d_cur


@dataclass(frozen=True)
class QuadRule:
    """Gauss-Legendre rule on the reference interval [-1,1]."""

    nodes: np.ndarray
    weights: np.ndarray

    def mapped(self, a: float, b: float):
        """Nodes and weights transported to (a,b)."""
        half = 0.5 * (b - a)
        return a + half * (self.nodes + 1.0), half * self.weights


@lru_cache(maxsize=None)
def gauss_rule(n: int) -> QuadRule:
    """n-point Gauss-Legendre rule; nodes are roots of P_n."""
    if n < 1:
        raise ValueError("need at least one quadrature point")
    i = np.arange(1, n + 1)
    t = np.cos(np.pi * (4 * i - 1) / (4 * n + 2))  # Chebyshev initial guesses
    for _ in range(100):
        p, dp = legendre_eval(n, t)
        dt = p / dp
        t = t - dt
        if np.max(np.abs(dt)) < 1e-15:
            break
    p, dp = legendre_eval(n, t)
    # bisection fallback for any node Newton failed to pin down
    for j in np.nonzero(np.abs(p) > 1e-14)[0]:
        lo, hi = t[j] - 1e-3, t[j] + 1e-3
        flo = legendre_eval(n, lo)[0]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fmid = legendre_eval(n, mid)[0]
            if abs(fmid) <= 1e-15:
                break
            if flo * fmid < 0:
                hi = mid
            else:
                lo, flo = mid, fmid
        t[j] = 0.5 * (lo + hi)
        p[j], dp[j] = legendre_eval(n, t[j])
    w = 2.0 / ((1.0 - t**2) * dp**2)
    order = np.argsort(t)
    nodes, weights = t[order], w[order]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadRule(nodes, weights)


@dataclass(frozen=True)
class ElementPoly:
    """Polynomial on (a,b) in mapped-Legendre coefficients."""

    a: float
    b: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("interval must satisfy a < b")
        c = np.array(self.coeffs, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def width(self) -> float:
        return self.b - self.a

    def to_reference(self, x):
        return 2.0 * (np.asarray(x, dtype=float) - self.a) / self.width - 1.0

    def __call__(self, x):
        return npleg.legval(self.to_reference(x), self.coeffs)

    def derivative(self) -> "ElementPoly":
        if self.degree == 0:
            return ElementPoly(self.a, self.b, np.zeros(1))
        dc = npleg.legder(self.coeffs) * (2.0 / self.width)
        return ElementPoly(self.a, self.b, dc)

    def l2_norm(self) -> float:
        k = np.arange(len(self.coeffs))
        return float(np.sqrt(np.sum(self.coeffs**2 * self.width / (2 * k + 1))))


def _nquad(p: int, nquad: int | None) -> int:
    return nquad if nquad is not None else p + DEFAULT_EXTRA_QUAD


def l2_project(y, p: int, interval, nquad: int | None = None) -> ElementPoly:
    """L2-orthogonal projection of the callable y onto P_p on the interval."""
    if p < 0:
        raise ValueError("degree must be >= 0")
    a, b = interval
    rule = gauss_rule(_nquad(p, nquad))
    x, _ = rule.mapped(a, b)
    fx = np.asarray(y(x), dtype=float)
    vander = npleg.legvander(rule.nodes, p)
    k = np.arange(p + 1)
    c = (2 * k + 1) / 2.0 * ((vander.T * rule.weights) @ np.broadcast_to(fx, x.shape))
    return ElementPoly(a, b, c)


def interpolate(y, p: int, interval, nquad: int | None = None) -> ElementPoly:
    """Interpolant of degree p matching y at both endpoints with
    derivative orthogonal to P_{p-1}'.

    Equivalent to endpoint value plus the integral of the degree-(p-1)
    Legendre truncation of y'; the truncation coefficients are obtained
    from values of y alone via integration by parts.
    """
    if p < 1:
        raise ValueError("interpolation needs degree p >= 1")
    a, b = interval
    rule = gauss_rule(_nquad(p, nquad))
    x, _ = rule.mapped(a, b)
    g = np.broadcast_to(np.asarray(y(x), dtype=float), x.shape)
    ya = float(y(a))
    yb = float(y(b))
    # e_k = (2k+1)/2 * int_{-1}^{1} g'(t) P_k(t) dt, by parts in t
    e = np.empty(p)
    for k in range(p):
        _, dP = legendre_eval(k, rule.nodes)
        moment = float(np.sum(rule.weights * g * dP))
        sign = -1.0 if k % 2 else 1.0
        e[k] = (2 * k + 1) / 2.0 * (yb - ya * sign - moment)
    # e holds the Legendre coefficients of d/dt of y(x(t)), so the plain
    # antiderivative in t recovers the interpolant
    c = npleg.legint(e, lbnd=-1.0)
    c[0] += ya
    return ElementPoly(a, b, c)
