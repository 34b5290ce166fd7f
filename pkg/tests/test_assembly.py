"""Assembly of the bilinear form, DOF numbering and the direct solve."""

import numpy as np
import pytest
from numpy.polynomial import legendre as npleg

from wg_hp.assembly import (
    DofMap,
    assemble,
    bilinear_apply,
    load_apply,
    solve,
    vector_to_weakfunction,
    weakfunction_to_vector,
)
from wg_hp.coeffexpr import evaluate
from wg_hp.polybasis import gauss_rule
from wg_hp.problem import ProblemSpec, model_problem
from wg_hp.slmesh import build_sbl_mesh, user_mesh
from wg_hp.problem import Regime
from wg_hp.weakspace import WeakFunction, default_penalties, weak_derivative

UNIT = ProblemSpec.from_strings(1.0, 1.0, "1", "1", "1")


def test_dofmap_counts():
    dof = DofMap(3, 4)
    assert dof.total == 17
    assert dof.coeff_index(2, 4) == 14
    assert dof.node_index(0) is None
    assert dof.node_index(3) is None
    assert dof.node_index(1) == 15
    assert dof.node_index(2) == 16


def test_matrix_dimensions_match_dofmap():
    mesh = user_mesh([0.0, 0.3, 0.7, 1.0])
    system = assemble(model_problem(1e-4, 1e-3), mesh, 4)
    assert system.matrix.shape == (17, 17)
    assert system.rhs.shape == (17,)


def test_single_element_p1_galerkin_residual():
    # smallest possible system: one element, p=1, all coefficients 1
    mesh = user_mesh([0.0, 1.0])
    system = assemble(UNIT, mesh, 1)
    assert system.matrix.shape == (2, 2)
    u_p = solve(system)
    # residual of the variational identity against each basis function
    for i in range(2):
        e = np.zeros(2)
        e[i] = 1.0
        phi = vector_to_weakfunction(system, e)
        resid = bilinear_apply(u_p, phi, UNIT) - load_apply(phi, UNIT)
        assert abs(resid) <= 1e-12


def test_matrix_path_matches_direct_path():
    mesh = user_mesh([0.0, 0.2, 0.75, 1.0])
    prob = model_problem(1e-4, 1e-2)
    rng = np.random.default_rng(13)
    for p in (1, 3, 5):
        system = assemble(prob, mesh, p)
        n = system.dof_map.total
        for _ in range(5):
            xu = rng.standard_normal(n)
            xv = rng.standard_normal(n)
            u = vector_to_weakfunction(system, xu)
            v = vector_to_weakfunction(system, xv)
            mat_val = float(xv @ system.matrix @ xu)
            direct = bilinear_apply(u, v, prob)
            scale = max(abs(mat_val), abs(direct), 1e-30)
            assert abs(mat_val - direct) / scale <= 1e-10


def test_bilinear_form_linear_in_first_argument():
    mesh = user_mesh([0.0, 0.5, 1.0])
    rng = np.random.default_rng(29)
    p = 3
    u1 = WeakFunction(mesh, rng.standard_normal((2, 4)), np.r_[0.0, rng.standard_normal(1), 0.0])
    u2 = WeakFunction(mesh, rng.standard_normal((2, 4)), np.r_[0.0, rng.standard_normal(1), 0.0])
    v = WeakFunction(mesh, rng.standard_normal((2, 4)), np.r_[0.0, rng.standard_normal(1), 0.0])
    lhs = bilinear_apply(u1 + u2, v, UNIT)
    rhs = bilinear_apply(u1, v, UNIT) + bilinear_apply(u2, v, UNIT)
    assert lhs == pytest.approx(rhs, rel=1e-12)
    z = WeakFunction.zeros(mesh, p)
    assert bilinear_apply(z, v, UNIT) == 0.0


def test_stabilizer_block_scales_with_eps1():
    mesh = user_mesh([0.0, 0.5, 1.0])
    prob1 = ProblemSpec.from_strings(1e-4, 1e-8, "1", "1", "1")
    prob2 = ProblemSpec.from_strings(2e-4, 1e-8, "1", "1", "1")
    p = 2
    s1 = assemble(prob1, mesh, p)
    s2 = assemble(prob2, mesh, p)
    # with eps2 negligible the interior-node diagonal is pure penalty,
    # sigma_j = eps1 p^2 / h, so doubling eps1 doubles it
    i = s1.dof_map.node_index(1)
    assert s2.matrix[i, i] == pytest.approx(2 * s1.matrix[i, i], rel=1e-5)


def test_zero_load_gives_zero_solution():
    prob = ProblemSpec.from_strings(1e-5, 1e-2, "cos(x)", "1+x", "0")
    mesh = build_sbl_mesh(Regime.REACTION_DIFFUSION, 1.0, 3, eps1=prob.eps1)
    u_p = solve(assemble(prob, mesh, 3))
    np.testing.assert_allclose(u_p.coeffs, 0.0, atol=1e-14)
    np.testing.assert_allclose(u_p.vb, 0.0, atol=1e-14)


def test_solution_jumps_small_but_nonzero():
    # the computed solution is genuinely nonconforming, with interior
    # jumps well below the solution scale
    prob = model_problem(1e-5, 1e-2)
    from wg_hp.verify import solve_on_sbl_mesh

    _, mesh, u_p = solve_on_sbl_mesh(prob, 4)
    left, right = u_p.jumps()
    interior = np.concatenate([left[1:], right[:-1]])
    scale = float(np.max(np.abs(u_p.vb)))
    assert np.max(np.abs(interior)) > 0
    # pinned from the computed solution: largest interior jump is ~0.031
    # against a solution scale of ~1.32
    assert np.max(np.abs(interior)) <= 5e-2 * scale


def test_coercivity_quadratic_form_identity():
    # integration-by-parts identity for the quadratic form:
    # A(v,v) = eps1*||Dv||^2 + ((r - eps2 b'/2) v0, v0) + S(v,v)
    #          + sum_j eps2 b(x_j)/2 * (right jump at j)^2
    #          + sum_{j internal} eps2 b(x_j)/2 * (left jump at j)^2
    #          + eps2 b(0)/2 * (left jump at 0)^2
    prob = model_problem(1e-4, 1e-2)
    mesh = user_mesh([0.0, 0.15, 0.85, 1.0])
    rng = np.random.default_rng(37)
    for p in (1, 2, 4):
        sig = default_penalties(mesh, p, prob.eps1)
        rule = gauss_rule(p + 8)
        for _ in range(5):
            v = WeakFunction(
                mesh,
                rng.standard_normal((3, p + 1)),
                np.r_[0.0, rng.standard_normal(2), 0.0],
            )
            quad = bilinear_apply(v, v, prob, sig)
            d = weak_derivative(v)
            expect = prob.eps1 * d.l2_norm_sq()
            for j in range(3):
                a, b = mesh.element(j)
                x, w = rule.mapped(a, b)
                v0 = npleg.legval(rule.nodes, v.coeffs[j])
                gam = evaluate(prob.r, x) - prob.eps2 * evaluate(prob.b_prime, x) / 2.0
                expect += float(np.sum(w * gam * v0**2))
            left, right = v.jumps()
            bv = evaluate(prob.b, mesh.nodes)
            expect += float(np.sum(sig * (left**2 + right**2)))
            expect += float(np.sum(prob.eps2 * bv[1:] / 2.0 * right**2))
            expect += float(np.sum(prob.eps2 * bv[:-1] / 2.0 * left**2))
            assert quad == pytest.approx(expect, rel=1e-9)


def test_vector_round_trip():
    mesh = user_mesh([0.0, 0.4, 1.0])
    system = assemble(UNIT, mesh, 2)
    rng = np.random.default_rng(43)
    x = rng.standard_normal(system.dof_map.total)
    v = vector_to_weakfunction(system, x)
    np.testing.assert_allclose(weakfunction_to_vector(system, v), x)
    bad = WeakFunction(mesh, np.zeros((2, 3)), [1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        weakfunction_to_vector(system, bad)


def test_degree_zero_rejected():
    with pytest.raises(ValueError):
        assemble(UNIT, user_mesh([0.0, 1.0]), 0)
