"""Local Z2 transformations, the invariants J and F, and the gauge solver.

A transformation is a phi field of bits, one per spacetime site. On matter it
flips both subcells wherever phi is 1. On the gauge field it acts as

    A'_r(x, t) = A_r(x, t) ^ phi(x, t+1) ^ phi(x-1, t)
    A'_l(x, t) = A_l(x, t) ^ phi(x, t+1) ^ phi(x+1, t)

since gauge row t dresses the gates producing matter row t+1. A gauge
diagram with rows 0..T therefore needs phi rows 0..T+1.
"""
from __future__ import annotations

import enum

import numpy as np

from .lattice import JointDiagram, MINUS, PLUS, R, L, as_bits, horizon


def _left(a):
    return np.roll(a, 1, axis=-1)


def _right(a):
    return np.roll(a, -1, axis=-1)


def _phi(phi, rows_needed: int, what: str, extra_ok: bool):
    phi = np.asarray(phi, dtype=np.uint8)
    rows = phi.shape[-2]
    allowed = (rows_needed, rows_needed + 1) if extra_ok else (rows_needed,)
    if rows not in allowed:
        raise ValueError(f"{what} needs phi with {' or '.join(map(str, allowed))} rows, got {rows}")
    return phi


def gauge_psi(psi, phi) -> np.ndarray:
    """Flip both bits of every matter cell where phi is set.

    ``phi`` may carry one extra row beyond the diagram (the compensating row
    used by the gauge field); it is ignored here.
    """
    psi = np.asarray(psi, dtype=np.uint8)
    rows = psi.shape[-3]
    phi = _phi(phi, rows, "gauge_psi", extra_ok=True)
    if phi.shape[-1] != psi.shape[-2]:
        raise ValueError(f"phi width {phi.shape[-1]} != diagram width {psi.shape[-2]}")
    return psi ^ phi[..., :rows, :, None]


def gauge_A(a, phi) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint8)
    rows = a.shape[-3]
    phi = _phi(phi, rows + 1, "gauge_A", extra_ok=False)
    if phi.shape[-1] != a.shape[-2]:
        raise ValueError(f"phi width {phi.shape[-1]} != diagram width {a.shape[-2]}")
    now, nxt = phi[..., :-1, :], phi[..., 1:, :]
    shape = np.broadcast_shapes(a.shape, phi.shape[:-2] + a.shape[-3:])
    out = np.broadcast_to(a, shape).copy()
    out[..., R] ^= nxt ^ _left(now)
    out[..., L] ^= nxt ^ _right(now)
    return out


def gauge_joint(c: JointDiagram, phi) -> JointDiagram:
    """Apply G_phi to matter and gauge together; phi has T + 2 rows."""
    psi, a = c
    return JointDiagram(gauge_psi(psi, phi), gauge_A(a, phi))


def compute_J(psi) -> np.ndarray:
    """J = psi_plus ^ psi_minus, per cell."""
    psi = np.asarray(psi, dtype=np.uint8)
    return psi[..., PLUS] ^ psi[..., MINUS]


def compute_F(a) -> np.ndarray:
    """Curvature of a gauge diagram, one bit per plaquette, shape ``(..., T, N)``.

    F(x, t) = A_l(x, t+1) ^ A_l(x-1, t) ^ A_r(x, t+1) ^ A_r(x+1, t)
    """
    a = np.asarray(a, dtype=np.uint8)
    if a.shape[-3] < 2:
        raise ValueError("F needs a gauge diagram with horizon >= 1")
    now, nxt = a[..., :-1, :, :], a[..., 1:, :, :]
    return nxt[..., L] ^ _left(now[..., L]) ^ nxt[..., R] ^ _right(now[..., R])


# solving G_phi A = A'

class ObstructionKind(enum.Enum):
    CURVATURE_MISMATCH = "curvature_mismatch"
    RING_HOLONOMY = "ring_holonomy"


class GaugeObstruction(Exception):
    """No phi relates the two gauge diagrams.

    ``location`` is the plaquette ``(x, t)`` for a curvature mismatch, or
    ``(None, t)`` naming the row whose chain fails to close for holonomy.
    """

    def __init__(self, kind: ObstructionKind, location: tuple[int | None, int]):
        self.kind = kind
        self.location = location
        x, t = location
        where = f"plaquette x={x} t={t}" if x is not None else f"row t={t}"
        super().__init__(f"{kind.value} at {where}")


SOLVED, CURVATURE, HOLONOMY = 0, 1, 2


def parity_chains(n: int) -> list[list[int]]:
    """Sites linked by the intra-row constraint phi(x+1) ~ phi(x-1).

    One chain visiting every site for odd ``n``; the even and odd sublattices
    for even ``n``.
    """
    starts = [0] if n % 2 else [0, 1]
    chains = []
    for s in starts:
        chain, y = [], s
        while True:
            chain.append(y)
            y = (y + 2) % n
            if y == s:
                break
        chains.append(chain)
    return chains


def holonomy(a, a_prime) -> np.ndarray:
    """Loop sum of (d_r ^ d_l) around each parity chain, per row.

    Shape ``(..., T + 1, n_chains)``; zero means the chain closes. The chain
    through site y uses the links at the midpoints y + 1.
    """
    d = np.asarray(a, dtype=np.uint8) ^ np.asarray(a_prime, dtype=np.uint8)
    s = d[..., R] ^ d[..., L]
    n = d.shape[-2]
    sums = [np.bitwise_xor.reduce(s[..., [(y + 1) % n for y in chain]], axis=-1)
            for chain in parity_chains(n)]
    return np.stack(sums, axis=-1)


def _seed_row(n: int, seed) -> np.ndarray:
    chains = parity_chains(n)
    if seed is None:
        return np.zeros(len(chains), dtype=np.uint8)
    seed = as_bits(list(seed) if not isinstance(seed, str) else [int(c) for c in seed])
    if seed.shape != (len(chains),):
        raise ValueError(f"width {n} has {len(chains)} free initial bit(s); got seed of shape {seed.shape}")
    return seed


def solve_gauge_batch(a, a_prime, seed=None):
    """Vectorised solver over leading batch axes.

    Returns ``(phi, status)`` where ``status`` is SOLVED, CURVATURE or
    HOLONOMY per instance; ``phi`` is only meaningful where SOLVED.
    """
    a = np.asarray(a, dtype=np.uint8)
    a_prime = np.asarray(a_prime, dtype=np.uint8)
    if a.shape[-3:] != a_prime.shape[-3:]:
        raise ValueError(f"shape mismatch {a.shape[-3:]} vs {a_prime.shape[-3:]}")
    a, a_prime = np.broadcast_arrays(a, a_prime)
    n, t_last = a.shape[-2], horizon(a)
    batch = a.shape[:-3]
    d = a ^ a_prime
    d_r, d_l = d[..., R], d[..., L]

    # (ii) fix row 0 along each parity chain: phi(x+1) = phi(x-1) ^ d_r(x) ^ d_l(x)
    s0 = d_r[..., 0, :] ^ d_l[..., 0, :]
    phi0 = np.zeros(batch + (n,), dtype=np.uint8)
    for bit, chain in zip(_seed_row(n, seed), parity_chains(n)):
        phi0[..., chain[0]] = bit
        for y, y_next in zip(chain, chain[1:]):
            phi0[..., y_next] = phi0[..., y] ^ s0[..., (y + 1) % n]

    # (iii) propagate upward with the right-moving requirement
    rows = [phi0]
    for t in range(t_last + 1):
        rows.append(_left(rows[-1]) ^ d_r[..., t, :])
    phi = np.stack(rows, axis=-2)

    # mirror requirement phi(x, t+1) = phi(x+1, t) ^ d_l(x, t)
    mirror_bad = (phi[..., 1:, :] != (_right(phi[..., :-1, :]) ^ d_l)).any(axis=-1)

    status = np.full(batch, SOLVED, dtype=np.int8)
    status[mirror_bad.any(axis=-1)] = HOLONOMY
    if t_last >= 1:
        curv = (compute_F(a) != compute_F(a_prime)).any(axis=(-2, -1))
        status[curv] = CURVATURE
    return phi, status


def solve_gauge(a, a_prime, seed=None) -> np.ndarray:
    """Find phi with ``gauge_A(a, phi) == a_prime``.

    ``seed`` fixes the free bit of row 0 on each parity chain (default all
    zero); every solution is reached by some seed. Raises
    :class:`GaugeObstruction` when no phi exists.
    """
    a = np.asarray(a, dtype=np.uint8)
    a_prime = np.asarray(a_prime, dtype=np.uint8)
    if a.ndim != 3 or a_prime.ndim != 3:
        raise ValueError("solve_gauge takes single gauge diagrams; see solve_gauge_batch")
    phi, status = solve_gauge_batch(a, a_prime, seed)
    if status == CURVATURE:
        t, x = np.argwhere(compute_F(a) != compute_F(a_prime))[0]
        raise GaugeObstruction(ObstructionKind.CURVATURE_MISMATCH, (int(x), int(t)))
    if status == HOLONOMY:
        t = int(np.argwhere(holonomy(a, a_prime).any(axis=-1))[0][0])
        raise GaugeObstruction(ObstructionKind.RING_HOLONOMY, (None, t))
    assert np.array_equal(gauge_A(a, phi), a_prime)
    return phi
