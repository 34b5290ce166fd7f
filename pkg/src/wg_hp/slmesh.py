"""Spectral boundary-layer meshes.

The mesh is minimal: at most three elements, with layer elements of width
kappa*p times the layer scale of the active regime, and a one-element
fallback once the layer elements would swallow the domain.  The guard is
width based (layer widths <= 1/4 for the three-element meshes, <= 1/2 for
the two-element convection-diffusion mesh) so the cases are exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from wg_hp.problem import MuPair, Regime

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class Mesh:
    """Ordered nodes x0 = 0 < ... < xN = 1."""

    nodes: np.ndarray = field(repr=True)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        if nodes.ndim != 1 or len(nodes) < 2:
            raise ValueError("a mesh needs at least two nodes")
        if nodes[0] != 0.0 or nodes[-1] != 1.0:
            raise ValueError("mesh must span [0,1]")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("mesh nodes must be strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def n_elements(self) -> int:
        return len(self.nodes) - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.nodes)

    def element(self, j: int) -> tuple[float, float]:
        """Endpoints of element j (0-based)."""
        return float(self.nodes[j]), float(self.nodes[j + 1])


def user_mesh(nodes) -> Mesh:
    """Wrap an arbitrary node list, validating it."""
    return Mesh(np.asarray(nodes, dtype=float))


SINGLE_ELEMENT = (0.0, 1.0)


def _guarded(nodes) -> Mesh:
    # collapse to {0,1} if any interior node (numerically) hits an endpoint
    interior = np.asarray(nodes[1:-1])
    if np.any(interior < DEGENERACY_TOL) or np.any(interior > 1.0 - DEGENERACY_TOL):
        return Mesh(np.array(SINGLE_ELEMENT))
    return Mesh(np.asarray(nodes, dtype=float))


def build_sbl_mesh(
    regime: Regime,
    kappa: float,
    p: int,
    mu: MuPair | None = None,
    eps1: float | None = None,
    eps2: float | None = None,
) -> Mesh:
    """Spectral boundary-layer mesh for the given regime.

    mu is required for the reaction-convection-diffusion regime, eps1 for
    the other two.
    """
    if p < 1:
        raise ValueError("polynomial degree must be >= 1")
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if regime is Regime.REACTION_CONVECTION_DIFFUSION:
        if mu is None:
            raise ValueError("mu is required in the reaction-convection-diffusion regime")
        w0 = kappa * p / mu.mu0
        w1 = kappa * p / mu.mu1
        if w0 <= 0.25 and w1 <= 0.25:
            return _guarded([0.0, w0, 1.0 - w1, 1.0])
        return Mesh(np.array(SINGLE_ELEMENT))
    if regime is Regime.REACTION_DIFFUSION:
        if eps1 is None:
            raise ValueError("eps1 is required in the reaction-diffusion regime")
        w = kappa * p * np.sqrt(eps1)
        if w <= 0.25:
            return _guarded([0.0, w, 1.0 - w, 1.0])
        return Mesh(np.array(SINGLE_ELEMENT))
    if regime is Regime.CONVECTION_DIFFUSION:
        if eps1 is None:
            raise ValueError("eps1 is required in the convection-diffusion regime")
        w = kappa * p * eps1
        if w <= 0.5:
            return _guarded([0.0, 1.0 - w, 1.0])
        return Mesh(np.array(SINGLE_ELEMENT))
    raise ValueError(f"unknown regime {regime!r}")
