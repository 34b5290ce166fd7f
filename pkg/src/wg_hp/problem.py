"""The continuous two-parameter boundary-value problem.

-eps1*u'' + eps2*b(x)*u'(x) + r(x)*u(x) = f(x) on (0,1), u(0) = u(1) = 0,
with 0 < eps1, eps2 <= 1, b > 0, r >= 0 and r - eps2*b'/2 >= gamma > 0.
Characteristic roots give the layer-strength parameters mu0 <= mu1, and
(eps1, eps2) selects one of three asymptotic regimes that only the mesh
builder dispatches on.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from wg_hp.coeffexpr import Expr, differentiate, evaluate, parse


class AssumptionError(Exception):
    """A positivity/gamma assumption failed at a sample point."""


class Regime(enum.Enum):
    CONVECTION_DIFFUSION = "convection-diffusion"
    REACTION_CONVECTION_DIFFUSION = "reaction-convection-diffusion"
    REACTION_DIFFUSION = "reaction-diffusion"


@dataclass(frozen=True)
class ProblemSpec:
    """Coefficients and parameters of the continuous problem on (0,1)."""

    eps1: float
    eps2: float
    b: Expr
    r: Expr
    f: Expr
    b_prime: Expr = field(default=None)  # derived from b when omitted

    def __post_init__(self):
        if not 0 < self.eps1 <= 1:
            raise ValueError("eps1 must lie in (0,1]")
        if not 0 < self.eps2 <= 1:
            raise ValueError("eps2 must lie in (0,1]")
        if self.b_prime is None:
            object.__setattr__(self, "b_prime", differentiate(self.b))

    @classmethod
    def from_strings(cls, eps1: float, eps2: float, b: str, r: str, f: str) -> "ProblemSpec":
        return cls(eps1, eps2, parse(b), parse(r), parse(f))


def model_problem(eps1: float, eps2: float) -> ProblemSpec:
    """-eps1*u'' + eps2*cos(x)*u' + (1+x)*u = exp(x), the stock test case."""
    return ProblemSpec.from_strings(eps1, eps2, "cos(x)", "1+x", "exp(x)")


def _sample_grid(samples: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, samples)


def validate(spec: ProblemSpec, samples: int = 257) -> float:
    """Check b > 0, r >= 0 and r - eps2*b'/2 > 0 on a sample grid.

    Returns gamma_hat, the sampled minimum of r - eps2*b'/2.  Sampled, not
    proved: a hard error on violation, a warning when gamma_hat is barely
    positive.
    """
    if samples < 2:
        raise ValueError("need at least two sample points")
    x = _sample_grid(samples)
    bv = evaluate(spec.b, x)
    rv = evaluate(spec.r, x)
    gv = rv - spec.eps2 * evaluate(spec.b_prime, x) / 2.0
    for name, vals, ok in (
        ("b(x) > 0", bv, bv > 0),
        ("r(x) >= 0", rv, rv >= 0),
        ("r - eps2*b'/2 > 0", gv, gv > 0),
    ):
        if not np.all(ok):
            i = int(np.argmin(ok))
            raise AssumptionError(
                f"assumption {name} violated at x = {x[i]:.6g} (value {vals[i]:.6g})"
            )
    gamma_hat = float(np.min(gv))
    if gamma_hat < 1e-8:
        warnings.warn(
            f"gamma_hat = {gamma_hat:.3g} is barely positive; the problem is "
            "close to losing unique solvability",
            stacklevel=2,
        )
    return gamma_hat


@dataclass(frozen=True)
class MuPair:
    """Characteristic-root parameters; mu0 measures the layer at x=0 and
    mu1 the (stronger) layer at x=1."""

    mu0: float
    mu1: float

    def __post_init__(self):
        if not 0 < self.mu0 <= self.mu1 * (1 + 1e-12):
            raise ValueError("need 0 < mu0 <= mu1")


def _mu_values(spec: ProblemSpec, x: np.ndarray):
    bv = evaluate(spec.b, x)
    rv = evaluate(spec.r, x)
    root = np.sqrt((spec.eps2 * bv) ** 2 + 4.0 * spec.eps1 * rv)
    lam0 = (-spec.eps2 * bv + root) / (2.0 * spec.eps1)
    lam1 = (spec.eps2 * bv + root) / (2.0 * spec.eps1)
    return lam0, lam1


def compute_mu(spec: ProblemSpec, samples: int = 2049) -> MuPair:
    """Minimize the characteristic-root expressions over a sample grid,
    with one refinement pass around each argmin."""
    x = _sample_grid(samples)
    lam0, lam1 = _mu_values(spec, x)
    mus = []
    for lam in (lam0, lam1):
        i = int(np.argmin(lam))
        lo = x[max(i - 1, 0)]
        hi = x[min(i + 1, samples - 1)]
        xr = np.linspace(lo, hi, 129)
        l0r, l1r = _mu_values(spec, xr)
        refined = l0r if lam is lam0 else l1r
        mus.append(min(float(np.min(lam)), float(np.min(refined))))
    return MuPair(mus[0], mus[1])


# Thresholds are declared conventions; the continuous relations between
# eps1 and eps2 are asymptotic and carry no crisp numeric boundary.
CD_EPS2_THRESHOLD = 0.9
RCD_RATIO = 10.0


def classify_regime(eps1: float, eps2: float) -> Regime:
    if not (0 < eps1 <= 1 and 0 < eps2 <= 1):
        raise ValueError("eps1, eps2 must lie in (0,1]")
    if eps2 > CD_EPS2_THRESHOLD:
        return Regime.CONVECTION_DIFFUSION
    if eps1 <= eps2**2 / RCD_RATIO:
        return Regime.REACTION_CONVECTION_DIFFUSION
    return Regime.REACTION_DIFFUSION
