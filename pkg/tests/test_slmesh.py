"""Spectral boundary-layer mesh construction."""

import numpy as np
import pytest

from wg_hp.problem import MuPair, Regime
from wg_hp.slmesh import Mesh, build_sbl_mesh, user_mesh

RCD = Regime.REACTION_CONVECTION_DIFFUSION
RD = Regime.REACTION_DIFFUSION
CD = Regime.CONVECTION_DIFFUSION


def test_rcd_node_formula():
    mesh = build_sbl_mesh(RCD, kappa=1.0, p=4, mu=MuPair(100.0, 1e4))
    np.testing.assert_allclose(mesh.nodes, [0.0, 0.04, 0.9996, 1.0], atol=1e-15)


def test_rd_node_formula():
    mesh = build_sbl_mesh(RD, kappa=1.0, p=2, eps1=1e-4)
    np.testing.assert_allclose(mesh.nodes, [0.0, 0.02, 0.98, 1.0], atol=1e-15)


def test_cd_node_formula():
    mesh = build_sbl_mesh(CD, kappa=1.0, p=4, eps1=1e-3)
    np.testing.assert_allclose(mesh.nodes, [0.0, 0.996, 1.0], atol=1e-15)


def test_cd_fallback_to_single_element():
    # kappa*p*eps1 = 0.8 > 1/2
    mesh = build_sbl_mesh(CD, kappa=1.0, p=4, eps1=0.2)
    np.testing.assert_allclose(mesh.nodes, [0.0, 1.0])


def test_rd_fallback_when_layers_too_wide():
    mesh = build_sbl_mesh(RD, kappa=1.0, p=8, eps1=0.01)  # width 0.8 > 1/4
    assert mesh.n_elements == 1


def test_rcd_fallback_when_one_layer_too_wide():
    mesh = build_sbl_mesh(RCD, kappa=1.0, p=4, mu=MuPair(2.0, 1e4))  # w0 = 2
    assert mesh.n_elements == 1


def test_degenerate_interior_node_collapses():
    # layer width below the degeneracy tolerance would leave a zero-width element
    mesh = build_sbl_mesh(RD, kappa=1.0, p=1, eps1=1e-28)
    assert mesh.n_elements == 1


def test_missing_parameters_raise():
    with pytest.raises(ValueError):
        build_sbl_mesh(RCD, kappa=1.0, p=4)
    with pytest.raises(ValueError):
        build_sbl_mesh(RD, kappa=1.0, p=4)
    with pytest.raises(ValueError):
        build_sbl_mesh(CD, kappa=1.0, p=4)


def test_bad_kappa_and_degree():
    with pytest.raises(ValueError):
        build_sbl_mesh(RD, kappa=0.0, p=4, eps1=1e-4)
    with pytest.raises(ValueError):
        build_sbl_mesh(RD, kappa=1.0, p=0, eps1=1e-4)


def test_user_mesh_valid():
    mesh = user_mesh([0.0, 0.5, 1.0])
    assert mesh.n_elements == 2
    np.testing.assert_allclose(mesh.widths, [0.5, 0.5])
    assert mesh.element(1) == (0.5, 1.0)

    assert user_mesh([0.0, 1.0]).n_elements == 1


def test_user_mesh_invalid():
    with pytest.raises(ValueError):
        user_mesh([0.0, 0.5, 0.5, 1.0])  # repeated node
    with pytest.raises(ValueError):
        user_mesh([0.1, 0.5, 1.0])  # does not start at 0
    with pytest.raises(ValueError):
        user_mesh([0.0])


def test_mesh_nodes_immutable():
    mesh = Mesh(np.array([0.0, 0.5, 1.0]))
    with pytest.raises(ValueError):
        mesh.nodes[1] = 0.7
