"""Self-contained property suites behind the `check` command.

Each suite exercises one structural fact of the discretization on the
stock model problem across all three parameter regimes: duality residuals
of the weak derivatives, coercivity and solvability, the equivalence
envelope between the two energy norms, the discrete error-equation
identity, and exact reproduction of polynomial solutions.  A doubled
quadrature order confirms integral values are quadrature-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre as npleg

from wg_hp.assembly import assemble, bilinear_apply, load_apply, solve
from wg_hp.coeffexpr import evaluate
from wg_hp.polybasis import gauss_rule, legendre_eval
from wg_hp.problem import classify_regime, compute_mu, model_problem, validate
from wg_hp.slmesh import build_sbl_mesh
from wg_hp.verify import (
    energy_error,
    error_equation_terms,
    exact_weakfunction,
    interpolant_weakfunction,
    manufacture,
)
from wg_hp.weakspace import (
    WeakFunction,
    default_penalties,
    norm_broken,
    norm_p,
    weak_convection_derivative,
    weak_derivative,
)

# (eps1, eps2) pairs hitting each regime, and the degrees swept per suite
EPS_PAIRS = ((1e-5, 1e-2), (1e-4, 1e-4), (1e-6, 1.0))
DEGREES = (2, 4, 6)

# norm-equivalence precondition on the penalties: eps1*p^2/h_j <= C_sigma * sigma_j
C_SIGMA = 1.0


@dataclass
class SuiteResult:
    name: str
    passed: bool
    n_checks: int
    n_failed: int
    detail: str = ""

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        msg = f"[{status}] {self.name}: {self.n_checks - self.n_failed}/{self.n_checks} checks"
        if self.detail:
            msg += f" ({self.detail})"
        return msg


@dataclass
class _Tally:
    n: int = 0
    failed: int = 0
    notes: list = field(default_factory=list)

    def check(self, ok: bool, note: str = ""):
        self.n += 1
        if not ok:
            self.failed += 1
            if note:
                self.notes.append(note)

    def result(self, name: str, extra: str = "") -> SuiteResult:
        detail = "; ".join(self.notes[:3])
        if extra:
            detail = f"{extra}" + (f"; {detail}" if detail else "")
        return SuiteResult(name, self.failed == 0, self.n, self.failed, detail)


def _cases(kappa: float = 1.0):
    """Yield (problem, mesh, p) over the regime grid and degree sweep."""
    for eps1, eps2 in EPS_PAIRS:
        prob = model_problem(eps1, eps2)
        regime = classify_regime(eps1, eps2)
        mu = compute_mu(prob)
        for p in DEGREES:
            mesh = build_sbl_mesh(regime, kappa, p, mu=mu, eps1=eps1, eps2=eps2)
            yield prob, mesh, p


def _random_weakfunction(rng, mesh, p) -> WeakFunction:
    coeffs = rng.standard_normal((mesh.n_elements, p + 1))
    vb = rng.standard_normal(mesh.n_elements + 1)
    vb[0] = vb[-1] = 0.0  # discrete space has vanishing boundary node values
    return WeakFunction(mesh, coeffs, vb)


def _sigmas(problem, mesh, p, sigma_override):
    if sigma_override is None:
        return default_penalties(mesh, p, problem.eps1)
    return np.full(mesh.n_elements, float(sigma_override))


def suite_definition_residuals(rng, nquad=None, **_) -> SuiteResult:
    """Both weak derivatives satisfy their defining duality relation
    against every admissible test polynomial."""
    tally = _Tally()
    worst = 0.0
    for prob, mesh, p in _cases():
        v = _random_weakfunction(rng, mesh, p)
        d = weak_derivative(v)
        dc = weak_convection_derivative(v, prob.b, prob.b_prime, nquad)
        rule = gauss_rule((nquad or p + 6) + p)
        for j in range(mesh.n_elements):
            a, b = mesh.element(j)
            h = b - a
            x, w = rule.mapped(a, b)
            v0 = npleg.legval(rule.nodes, v.coeffs[j])
            scale = max(1.0, float(np.max(np.abs(v.coeffs[j]))) + abs(v.vb[j]) + abs(v.vb[j + 1]))
            for k in range(p):
                q = npleg.legval(rule.nodes, np.eye(p)[k])
                dq = legendre_eval(k, rule.nodes)[1] * (2.0 / h)
                lhs = float(np.sum(w * npleg.legval(rule.nodes, d.coeffs[j]) * q))
                rhs = (
                    -float(np.sum(w * v0 * dq))
                    + v.vb[j + 1] * 1.0
                    - v.vb[j] * (-1.0) ** k
                )
                resid = abs(lhs - rhs) / scale
                worst = max(worst, resid)
                tally.check(resid <= 1e-10, f"D residual {resid:.2e} (p={p})")
            bv = evaluate(prob.b, x)
            bpv = evaluate(prob.b_prime, x)
            for k in range(p + 1):
                q = npleg.legval(rule.nodes, np.eye(p + 1)[k])
                dq = legendre_eval(k, rule.nodes)[1] * (2.0 / h)
                lhs = float(np.sum(w * npleg.legval(rule.nodes, dc.coeffs[j]) * q))
                rhs = (
                    -float(np.sum(w * v0 * (bpv * q + bv * dq)))
                    + v.vb[j + 1] * evaluate(prob.b, b)
                    - v.vb[j] * evaluate(prob.b, a) * (-1.0) ** k
                )
                resid = abs(lhs - rhs) / scale
                worst = max(worst, resid)
                tally.check(resid <= 1e-10, f"Dc residual {resid:.2e} (p={p})")
    return tally.result("definition-residuals", f"worst residual {worst:.2e}")


def suite_coercivity_solve(rng, nquad=None, sigma_override=None, **_) -> SuiteResult:
    """Penalty condition, a provable coercivity bound, solvability of the
    assembled system, and Galerkin orthogonality of the computed solution."""
    tally = _Tally()
    for prob, mesh, p in _cases():
        gamma_hat = validate(prob)
        sigmas = _sigmas(prob, mesh, p, sigma_override)
        required = prob.eps1 * p**2 / mesh.widths
        ok = bool(np.all(required <= C_SIGMA * sigmas * (1 + 1e-12)))
        tally.check(ok, f"penalty condition eps1*p^2/h <= sigma violated (p={p})")
        for _trial in range(3):
            v = _random_weakfunction(rng, mesh, p)
            quad = bilinear_apply(v, v, prob, sigmas, nquad)
            bound = 0.25 * min(1.0, gamma_hat) * norm_p(v, prob, sigmas) ** 2
            tally.check(
                quad >= bound * (1 - 1e-10),
                f"coercivity {quad:.3e} < {bound:.3e} (p={p})",
            )
        system = assemble(prob, mesh, p, sigmas=sigmas, nquad=nquad)
        try:
            u_p = solve(system)
        except Exception as exc:  # noqa: BLE001 - record, keep sweeping
            tally.check(False, f"solve failed: {exc}")
            continue
        tally.check(True)
        v = _random_weakfunction(rng, mesh, p)
        lhs = bilinear_apply(u_p, v, prob, sigmas, nquad)
        rhs = load_apply(v, prob, nquad)
        scale = max(abs(lhs), abs(rhs), 1e-30)
        tally.check(
            abs(lhs - rhs) / scale <= 1e-8,
            f"Galerkin residual {abs(lhs - rhs) / scale:.2e} (p={p})",
        )
    return tally.result("coercivity-solve")


def suite_norm_equivalence(rng, nquad=None, sigma_override=None, **_) -> SuiteResult:
    """norm_p and norm_broken stay within a fixed envelope of each other."""
    tally = _Tally()
    lo, hi = np.inf, 0.0
    for prob, mesh, p in _cases():
        sigmas = _sigmas(prob, mesh, p, sigma_override)
        for _trial in range(5):
            v = _random_weakfunction(rng, mesh, p)
            a = norm_p(v, prob, sigmas)
            c = norm_broken(v, prob, sigmas)
            if c == 0.0:
                tally.check(a == 0.0, "norm_broken vanished on a nonzero function")
                continue
            ratio = a / c
            lo, hi = min(lo, ratio), max(hi, ratio)
            tally.check(1.0 / 50.0 <= ratio <= 50.0, f"ratio {ratio:.3g} outside envelope")
    return tally.result("norm-equivalence", f"ratio range [{lo:.3g}, {hi:.3g}]")


def suite_error_equation(rng, nquad=None, **_) -> SuiteResult:
    """A(Iu - u_p, v) equals the three consistency-error terms."""
    tally = _Tally()
    worst = 0.0
    for eps1, eps2 in EPS_PAIRS:
        case = manufacture("sin(3.141592653589793*x)", model_problem(eps1, eps2))
        prob = case.problem
        regime = classify_regime(eps1, eps2)
        mu = compute_mu(prob)
        for p in DEGREES:
            mesh = build_sbl_mesh(regime, 1.0, p, mu=mu, eps1=eps1, eps2=eps2)
            nq = nquad or p + 6
            u_p = solve(assemble(prob, mesh, p, nquad=nq))
            iu = interpolant_weakfunction(case, mesh, p, nquad=nq)
            v = _random_weakfunction(rng, mesh, p)
            lhs = bilinear_apply(iu - u_p, v, prob, nquad=nq)
            e1, e2, e3 = error_equation_terms(case, v, nquad=nq)
            scale = max(abs(lhs), abs(e1) + abs(e2) + abs(e3), 1e-30)
            resid = abs(lhs - (e1 + e2 + e3)) / scale
            worst = max(worst, resid)
            tally.check(resid <= 1e-7, f"identity residual {resid:.2e} (p={p})")
    return tally.result("error-equation", f"worst residual {worst:.2e}")


def suite_polynomial_reproduction(rng, nquad=None, **_) -> SuiteResult:
    """The method reproduces a polynomial exact solution to roundoff."""
    tally = _Tally()
    for eps1, eps2 in EPS_PAIRS:
        case = manufacture("x*(1-x)", model_problem(eps1, eps2))
        prob = case.problem
        regime = classify_regime(eps1, eps2)
        mu = compute_mu(prob)
        for p in DEGREES:
            mesh = build_sbl_mesh(regime, 1.0, p, mu=mu, eps1=eps1, eps2=eps2)
            u_p = solve(assemble(prob, mesh, p, nquad=nquad))
            u_star = exact_weakfunction(case, mesh, p, nquad=nquad)
            _, rel = energy_error(u_star, u_p, prob)
            tally.check(rel <= 1e-9, f"reproduction error {rel:.2e} (p={p})")
    return tally.result("polynomial-reproduction")


def suite_quadrature_stability(rng, nquad=None, sigma_override=None, **_) -> SuiteResult:
    """Assembled matrices and bilinear-form values are unchanged (to 1e-10)
    under a doubled quadrature order."""
    tally = _Tally()
    worst = 0.0
    for prob, mesh, p in _cases():
        sigmas = _sigmas(prob, mesh, p, sigma_override)
        nq = nquad or p + 6
        sys1 = assemble(prob, mesh, p, sigmas=sigmas, nquad=nq)
        sys2 = assemble(prob, mesh, p, sigmas=sigmas, nquad=2 * nq)
        scale = max(float(np.max(np.abs(sys1.matrix))), 1e-30)
        dmat = float(np.max(np.abs(sys1.matrix - sys2.matrix))) / scale
        rscale = max(float(np.max(np.abs(sys1.rhs))), 1e-30)
        drhs = float(np.max(np.abs(sys1.rhs - sys2.rhs))) / rscale
        worst = max(worst, dmat, drhs)
        tally.check(dmat <= 1e-10, f"matrix drift {dmat:.2e} (p={p})")
        tally.check(drhs <= 1e-10, f"rhs drift {drhs:.2e} (p={p})")
        u = _random_weakfunction(rng, mesh, p)
        v = _random_weakfunction(rng, mesh, p)
        a1 = bilinear_apply(u, v, prob, sigmas, nq)
        a2 = bilinear_apply(u, v, prob, sigmas, 2 * nq)
        dval = abs(a1 - a2) / max(abs(a1), 1e-30)
        worst = max(worst, dval)
        tally.check(dval <= 1e-10, f"bilinear drift {dval:.2e} (p={p})")
    return tally.result("quadrature-stability", f"worst drift {worst:.2e}")


SUITES = (
    suite_definition_residuals,
    suite_coercivity_solve,
    suite_norm_equivalence,
    suite_error_equation,
    suite_polynomial_reproduction,
)


def run_check(
    seed: int = 0,
    quad_double: bool = False,
    sigma_override: float | None = None,
    nquad: int | None = None,
) -> list[SuiteResult]:
    """Run every property suite; returns one SuiteResult per suite.

    sigma_override replaces the default per-element penalties with a
    constant (0.0 deliberately violates the penalty condition and makes
    the coercivity-solve suite fail).  quad_double adds the doubled
    quadrature stability suite.
    """
    rng = np.random.default_rng(seed)
    suites = list(SUITES)
    if quad_double:
        suites.append(suite_quadrature_stability)
    return [
        fn(rng, nquad=nquad, sigma_override=sigma_override) for fn in suites
    ]
