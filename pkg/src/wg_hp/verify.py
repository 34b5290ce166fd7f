"""Manufactured solutions, reference solutions, energy-norm errors and the
p-convergence study.

The reference solution is the weak Galerkin solve at degree 2p on the same
mesh (penalties rescaled to the higher degree), so the difference lives in
one discrete space; a rebuilt-mesh alternative with L2-projection transfer
exists for sensitivity studies.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg

from wg_hp import coeffexpr as ce
from wg_hp.assembly import assemble, solve
from wg_hp.coeffexpr import Expr, differentiate, evaluate, parse
from wg_hp.polybasis import gauss_rule, interpolate, l2_project
from wg_hp.problem import ProblemSpec, classify_regime, compute_mu, validate
from wg_hp.slmesh import Mesh, build_sbl_mesh
from wg_hp.weakspace import WeakFunction, norm_broken, norm_p


class BoundaryValueError(Exception):
    """A manufactured solution does not vanish at both endpoints."""


@dataclass(frozen=True)
class ManufacturedCase:
    """Exact solution with the right-hand side derived symbolically."""

    u_exact: Expr
    u_prime: Expr
    problem: ProblemSpec


def manufacture(u_text: str | Expr, problem: ProblemSpec) -> ManufacturedCase:
    """Attach f = -eps1*u'' + eps2*b*u' + r*u to the given coefficients."""
    u = parse(u_text) if isinstance(u_text, str) else u_text
    for endpoint in (0.0, 1.0):
        val = evaluate(u, endpoint)
        if abs(val) > 1e-13:
            raise BoundaryValueError(
                f"manufactured solution must vanish at x={endpoint:g}, got {val:.3g}"
            )
    du = differentiate(u)
    ddu = differentiate(du)
    f = ce.add(
        ce.add(
            ce.neg(ce.mul(ce.Num(problem.eps1), ddu)),
            ce.mul(ce.Num(problem.eps2), ce.mul(problem.b, du)),
        ),
        ce.mul(problem.r, u),
    )
    spec = ProblemSpec(problem.eps1, problem.eps2, problem.b, problem.r, f, problem.b_prime)
    return ManufacturedCase(u, du, spec)


def exact_weakfunction(case: ManufacturedCase, mesh: Mesh, p: int, nquad=None) -> WeakFunction:
    """Conforming representation of the exact solution (elementwise L2
    projection plus nodal values)."""
    y = ce.as_callable(case.u_exact)
    return WeakFunction.from_callable(mesh, p, y, nquad)


def interpolant_weakfunction(case: ManufacturedCase, mesh: Mesh, p: int, nquad=None) -> WeakFunction:
    """The derivative-orthogonality interpolant of the exact solution as a
    conforming weak function."""
    y = ce.as_callable(case.u_exact)
    coeffs = np.empty((mesh.n_elements, p + 1))
    for j in range(mesh.n_elements):
        coeffs[j] = interpolate(y, p, mesh.element(j), nquad).coeffs
    vb = np.array([float(y(x)) for x in mesh.nodes])
    return WeakFunction(mesh, coeffs, vb)


def error_equation_terms(
    case: ManufacturedCase, v: WeakFunction, nquad: int | None = None
) -> tuple[float, float, float]:
    """The three consistency-error terms of the discrete error equation,
    evaluated by quadrature from their definitions."""
    mesh = v.mesh
    p = v.degree
    prob = case.problem
    nq = nquad if nquad is not None else p + 6
    rule = gauss_rule(nq)
    u = ce.as_callable(case.u_exact)
    up = ce.as_callable(case.u_prime)
    iu = interpolant_weakfunction(case, mesh, p, nquad=nq)

    e1 = 0.0
    jl, jr = v.jumps()
    for j in range(mesh.n_elements):
        poly = iu.element_poly(j)
        dpoly = poly.derivative()
        xl, xr = mesh.element(j)
        err_d_right = up(xr) - float(dpoly(xr))
        err_d_left = up(xl) - float(dpoly(xl))
        e1 += prob.eps1 * (err_d_right * jr[j] - err_d_left * jl[j])

    e2 = 0.0
    e3 = 0.0
    for j in range(mesh.n_elements):
        a, b = mesh.element(j)
        h = b - a
        x, w = rule.mapped(a, b)
        uerr = u(x) - npleg.legval(rule.nodes, iu.coeffs[j])
        v0 = npleg.legval(rule.nodes, v.coeffs[j])
        dv0 = npleg.legval(rule.nodes, npleg.legder(v.coeffs[j])) * (2.0 / h) if p >= 1 else 0.0
        bv = evaluate(prob.b, x)
        bpv = evaluate(prob.b_prime, x)
        rv = evaluate(prob.r, x)
        e2 += prob.eps2 * float(np.sum(w * uerr * (bpv * v0 + bv * dv0)))
        e3 += float(np.sum(w * rv * (-uerr) * v0))
    return e1, e2, e3


def reference_solution(
    problem: ProblemSpec,
    mesh: Mesh,
    p: int,
    ref_mesh: str = "same",
    mesh_builder=None,
    nquad: int | None = None,
) -> WeakFunction:
    """Weak Galerkin solve at degree 2p used as the error reference.

    ref_mesh="same" solves on the given mesh; "rebuilt" solves on the mesh
    built for degree 2p (mesh_builder maps a degree to a Mesh) and
    transfers the result back by elementwise L2 projection.
    """
    p_ref = 2 * p
    if ref_mesh == "same":
        return solve(assemble(problem, mesh, p_ref, nquad=nquad))
    if ref_mesh != "rebuilt":
        raise ValueError("ref_mesh must be 'same' or 'rebuilt'")
    if mesh_builder is None:
        raise ValueError("rebuilt reference needs a mesh_builder")
    src_mesh = mesh_builder(p_ref)
    src = solve(assemble(problem, src_mesh, p_ref, nquad=nquad))
    return _transfer(src, mesh, p_ref)


def _transfer(src: WeakFunction, mesh: Mesh, p: int) -> WeakFunction:
    """Elementwise L2 projection of src.v0 onto the broken degree-p space
    on the target mesh, splitting quadrature at source nodes."""
    rule = gauss_rule(p + 6)
    src_nodes = src.mesh.nodes

    def src_eval(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(x)
        for i, xi in enumerate(x):
            j = min(int(np.searchsorted(src_nodes, xi, side="right")) - 1, src.mesh.n_elements - 1)
            j = max(j, 0)
            out[i] = float(src.element_poly(j)(xi))
        return out

    coeffs = np.empty((mesh.n_elements, p + 1))
    for j in range(mesh.n_elements):
        a, b = mesh.element(j)
        h = b - a
        cuts = np.unique(np.concatenate([[a, b], src_nodes[(src_nodes > a) & (src_nodes < b)]]))
        moments = np.zeros(p + 1)
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            x, w = rule.mapped(lo, hi)
            t = 2.0 * (x - a) / h - 1.0
            vander = npleg.legvander(t, p)
            moments += (vander.T * w) @ src_eval(x)
        k = np.arange(p + 1)
        coeffs[j] = (2 * k + 1) / h * moments
    vb = np.zeros(mesh.n_elements + 1)
    vb[1:-1] = src_eval(mesh.nodes[1:-1])
    return WeakFunction(mesh, coeffs, vb)


def energy_error(
    u_hi: WeakFunction,
    u_lo: WeakFunction,
    problem: ProblemSpec,
    sigmas=None,
    norm: str = "broken",
) -> tuple[float, float]:
    """Energy-norm difference between the reference and the approximation.

    Returns (absolute, relative); relative is against the norm of u_hi.
    norm="broken" uses the broken classical derivative; norm="p" uses the
    weak derivative at the higher degree.
    """
    diff = u_hi - u_lo.pad_to_degree(u_hi.degree)
    if sigmas is None:
        sigmas = problem.eps1 * u_hi.degree**2 / u_hi.mesh.widths
    norm_fn = {"broken": norm_broken, "p": norm_p}[norm]
    absolute = norm_fn(diff, problem, sigmas)
    scale = norm_fn(u_hi, problem, sigmas)
    relative = absolute / scale if scale > 0 else (0.0 if absolute == 0 else np.inf)
    return absolute, relative


@dataclass(frozen=True)
class ConvergenceRecord:
    regime: str
    eps1: float
    eps2: float
    p: int
    n_elements: int
    dof: int
    err_rel: float  # fraction, not percent
    err_abs: float
    ref_degree: int
    wall_ms: float


@dataclass(frozen=True)
class CaseFailure:
    eps1: float
    eps2: float
    p: int
    message: str


def solve_on_sbl_mesh(problem: ProblemSpec, p: int, kappa: float = 1.0, nquad=None):
    """Classify, build the layer-adapted mesh, and solve; returns
    (regime, mesh, solution)."""
    validate(problem)
    regime = classify_regime(problem.eps1, problem.eps2)
    mu = compute_mu(problem)
    mesh = build_sbl_mesh(regime, kappa, p, mu=mu, eps1=problem.eps1, eps2=problem.eps2)
    u_p = solve(assemble(problem, mesh, p, nquad=nquad))
    return regime, mesh, u_p


def convergence_study(
    base: ProblemSpec,
    p_range,
    eps_grid,
    kappa: float = 1.0,
    ref_mesh: str = "same",
    nquad: int | None = None,
) -> tuple[list[ConvergenceRecord], list[CaseFailure]]:
    """Sweep (eps1, eps2, p): solve, compute the degree-2p reference, and
    record relative energy errors; per-case failures are collected, not
    raised."""
    records: list[ConvergenceRecord] = []
    failures: list[CaseFailure] = []
    for eps1, eps2 in eps_grid:
        for p in p_range:
            start = time.perf_counter()
            try:
                prob = ProblemSpec(eps1, eps2, base.b, base.r, base.f, base.b_prime)
                regime, mesh, u_p = solve_on_sbl_mesh(prob, p, kappa, nquad=nquad)

                def builder(degree, _prob=prob, _regime=regime, _kappa=kappa):
                    mu = compute_mu(_prob)
                    return build_sbl_mesh(
                        _regime, _kappa, degree, mu=mu, eps1=_prob.eps1, eps2=_prob.eps2
                    )

                u_ref = reference_solution(
                    prob, mesh, p, ref_mesh=ref_mesh, mesh_builder=builder, nquad=nquad
                )
                err_abs, err_rel = energy_error(u_ref, u_p, prob)
                wall_ms = (time.perf_counter() - start) * 1e3
                records.append(
                    ConvergenceRecord(
                        regime=regime.value,
                        eps1=eps1,
                        eps2=eps2,
                        p=p,
                        n_elements=mesh.n_elements,
                        dof=mesh.n_elements * (p + 1) + mesh.n_elements - 1,
                        err_rel=err_rel,
                        err_abs=err_abs,
                        ref_degree=2 * p,
                        wall_ms=wall_ms,
                    )
                )
            except Exception as exc:  # noqa: BLE001 - sweep must not abort
                failures.append(CaseFailure(eps1, eps2, p, str(exc)))
    records.sort(key=lambda rec: (rec.eps1, rec.eps2, rec.p))
    failures.sort(key=lambda rec: (rec.eps1, rec.eps2, rec.p))
    return records, failures
