"""Small named diagrams: movers, flips and gauge-field runs used by demos and tests.

Everything lives on a periodic ring of width ``n``; the initial data are
chosen so that nothing wraps around within the default horizons.
"""
from __future__ import annotations

import numpy as np

from .dynamics import FREE, SRule, gauged, run
from .lattice import JointDiagram, MINUS, PLUS, R, phi_constant, phi_site, single_site
from .symmetry import gauge_psi


def right_mover(n: int = 4, horizon: int = 3) -> np.ndarray:
    """A single right-moving particle starting at x = 0 (free theory)."""
    return run(FREE, single_site(n, 0, PLUS), None, horizon).psi


def two_particles(n: int = 4, horizon: int = 3) -> np.ndarray:
    """A right mover from x = 0 and a left mover from x = n - 1."""
    psi0 = single_site(n, 0, PLUS) | single_site(n, n - 1, MINUS)
    return run(FREE, psi0, None, horizon).psi


def globally_flipped(n: int = 4, horizon: int = 3) -> np.ndarray:
    """The right mover after the global flip phi = 1; still R-valid."""
    return gauge_psi(right_mover(n, horizon), phi_constant(n, horizon + 1, 1))


def local_flip_phi(n: int = 4, horizon: int = 3) -> np.ndarray:
    """Flip only the particle's initial site: a space-dependent phi.

    The gate producing cell (1, 1) is then fed one flipped and one unflipped
    neighbour, which no choice of phi(1, 1) can repair.
    """
    return phi_site(n, horizon + 2, 0, 0)


def locally_flipped(n: int = 4, horizon: int = 3) -> np.ndarray:
    """The right mover after :func:`local_flip_phi`; not R-valid."""
    return gauge_psi(right_mover(n, horizon), local_flip_phi(n, horizon))


LOCAL_FLIP_VIOLATION = (1, 1)  # (x, t) of the cell no compensation can fix


def gauge_dynamics_examples(n: int = 8, horizon: int = 4) -> dict[str, JointDiagram]:
    """Gauged runs from common matter data under different gauge-field rules.

    ``advect``       ADVECT from A = 0 (F = 0)
    ``advect_flip``  ADVECT_FLIP from A = 0 (F = 0, same J as ``advect``)
    ``advect_other`` ADVECT from a gauge-equivalent initial A (same J)
    ``frozen``       FROZEN with one A_r bit set (F = 1 on two plaquettes, J differs)

    A row of plaquettes has F summing to the parity change of the gauge bits
    between its two rows. Every S rule keeps that parity, so on a ring a lone
    F = 1 plaquette cannot occur; one set A_r bit is the smallest defect.
    """
    psi0 = single_site(n, 1, PLUS) | single_site(n, n - 2, MINUS)
    zero = np.zeros((n, 2), dtype=np.uint8)
    site = n // 2
    other = zero.copy()
    other[site] = 1  # gauge_A of A = 0 by phi = 1 at (site, t = 1)
    defect = zero.copy()
    defect[site, R] = 1
    return {
        "advect": run(gauged(SRule.ADVECT), psi0, zero, horizon),
        "advect_flip": run(gauged(SRule.ADVECT_FLIP), psi0, zero, horizon),
        "advect_other": run(gauged(SRule.ADVECT), psi0, other, horizon),
        "frozen": run(gauged(SRule.FROZEN), psi0, defect, horizon),
    }


__all__ = ["right_mover", "two_particles", "globally_flipped", "local_flip_phi",
           "locally_flipped", "LOCAL_FLIP_VIOLATION", "gauge_dynamics_examples"]
