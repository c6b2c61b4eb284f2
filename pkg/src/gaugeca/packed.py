"""Bit-packed rows for the exhaustive sweeps.

A row of width ``n <= 64`` becomes two ``uint64`` words (site x at bit x):
``[..., 0]`` holds minus (or A_r) and ``[..., 1]`` holds plus (or A_l).
Neighbour lookups become word rotations, so one numpy operation advances a
whole batch of rows.
"""
from __future__ import annotations

import numpy as np

from .dynamics import SRule

_ONE = np.uint64(1)


def _mask(n: int) -> np.uint64:
    return np.uint64((1 << n) - 1)


def pack_bits(bits) -> np.ndarray:
    """Pack the last axis (sites) of a bit array into uint64 words."""
    bits = np.asarray(bits, dtype=np.uint64)
    n = bits.shape[-1]
    if n > 64:
        raise ValueError("packed rows hold at most 64 sites")
    return (bits << np.arange(n, dtype=np.uint64)).sum(axis=-1, dtype=np.uint64)


def unpack_bits(words, n: int) -> np.ndarray:
    words = np.asarray(words, dtype=np.uint64)
    return ((words[..., None] >> np.arange(n, dtype=np.uint64)) & _ONE).astype(np.uint8)


def pack_row(row) -> np.ndarray:
    """``(..., N, 2)`` cells to ``(..., 2)`` words."""
    return pack_bits(np.moveaxis(np.asarray(row), -1, -2))


def unpack_row(words, n: int) -> np.ndarray:
    return np.moveaxis(unpack_bits(words, n), -2, -1)


def roll(words, shift: int, n: int) -> np.ndarray:
    """Same as ``np.roll`` along the site axis: bit x moves to x + shift."""
    shift %= n
    words = np.asarray(words, dtype=np.uint64)
    if shift == 0:
        return words.copy()
    k, rest = np.uint64(shift), np.uint64(n - shift)
    return ((words << k) | (words >> rest)) & _mask(n)


def step_R(p, n: int) -> np.ndarray:
    return np.stack([roll(p[..., 0], -1, n), roll(p[..., 1], 1, n)], axis=-1)


def step_R_A(p, a, n: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint64)
    return step_R(p, n) ^ np.stack([a[..., 1], a[..., 0]], axis=-1)


def step_S(a, rule: SRule, n: int) -> np.ndarray:
    if rule is SRule.NONE:
        raise ValueError("S=none has no internal dynamics")
    if rule is SRule.FROZEN:
        return np.array(a, dtype=np.uint64)
    out = np.stack([roll(a[..., 0], -1, n), roll(a[..., 1], 1, n)], axis=-1)
    if rule is SRule.ADVECT_FLIP:
        out ^= _mask(n)
    return out


def gauge_psi(p, phi_word) -> np.ndarray:
    """Flip both subcells where phi is set; ``phi_word`` is one packed phi row."""
    phi_word = np.asarray(phi_word, dtype=np.uint64)
    return p ^ phi_word[..., None]


def gauge_A(a, phi_now, phi_next, n: int) -> np.ndarray:
    phi_now = np.asarray(phi_now, dtype=np.uint64)
    phi_next = np.asarray(phi_next, dtype=np.uint64)
    return a ^ np.stack([phi_next ^ roll(phi_now, 1, n), phi_next ^ roll(phi_now, -1, n)], axis=-1)


def row_key(p, n: int) -> np.ndarray:
    """One integer per packed row (minus bits low, plus bits high); N <= 32."""
    if n > 32:
        raise ValueError("row_key needs 2N <= 64 bits")
    return p[..., 0] | (p[..., 1] << np.uint64(n))
