"""Cells, ring configurations, spacetime diagrams and bit fields.

Everything is a plain ``numpy.uint8`` array holding 0/1 values:

* a matter row has shape ``(N, 2)`` with columns ``(minus, plus)``;
* a gauge row has shape ``(N, 2)`` with columns ``(r, l)``;
* a spacetime diagram stacks ``T + 1`` rows: shape ``(T + 1, N, 2)``;
* a bit field (phi, J, F) has shape ``(rows, N)``.

Leading batch axes are allowed everywhere, which is what the exhaustive
sweeps rely on. Site arithmetic is periodic on a ring of width ``N``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

MINUS, PLUS = 0, 1
R, L = 0, 1


class MatterCell(NamedTuple):
    minus: int
    plus: int


class GaugeCell(NamedTuple):
    r: int
    l: int


class JointDiagram(NamedTuple):
    """A matter diagram and a gauge diagram of identical shape."""

    psi: np.ndarray
    gauge: np.ndarray

    @property
    def horizon(self) -> int:
        return horizon(self.psi)

    @property
    def width(self) -> int:
        return width(self.psi)

    def __eq__(self, other):
        if not isinstance(other, JointDiagram):
            return NotImplemented
        return np.array_equal(self.psi, other.psi) and np.array_equal(self.gauge, other.gauge)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None


def as_bits(values, ndim_tail: int | None = None) -> np.ndarray:
    """Copy ``values`` into a uint8 array, rejecting anything but 0 and 1."""
    arr = np.array(values, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise ValueError("bit arrays may only contain 0 and 1")
    if ndim_tail is not None and arr.ndim < ndim_tail:
        raise ValueError(f"expected at least {ndim_tail} dimensions, got {arr.ndim}")
    return arr.astype(np.uint8)


def _as_cells(values) -> np.ndarray:
    arr = as_bits(values, 2)
    if arr.shape[-1] != 2:
        raise ValueError(f"cells carry exactly two bits, got trailing axis {arr.shape[-1]}")
    if arr.shape[-2] < 2:
        raise ValueError("ring width must be at least 2")
    return arr


def matter_row(cells) -> np.ndarray:
    """Build a matter row from ``(minus, plus)`` pairs or two-character tokens."""
    if isinstance(cells, str):
        cells = cells.split()
    return _as_cells([_token_bits(c) if isinstance(c, str) else tuple(c) for c in cells])


gauge_row = matter_row


def _token_bits(token: str) -> tuple[int, int]:
    if len(token) != 2 or any(ch not in "01" for ch in token):
        raise ValueError(f"cell token must be two characters from {{0,1}}, got {token!r}")
    return int(token[0]), int(token[1])


def single_site(n: int, x: int, bit: int) -> np.ndarray:
    """Row of width ``n`` with only bit ``bit`` (0 or 1) of cell ``x mod n`` set."""
    row = np.zeros((n, 2), dtype=np.uint8)
    row[x % n, bit] = 1
    return row


def width(arr) -> int:
    return np.shape(arr)[-2]


def horizon(diagram) -> int:
    return np.shape(diagram)[-3] - 1


def ring_get(cfg, x: int) -> tuple[int, int]:
    """Cell at site ``x`` of a ring, with wraparound for any integer ``x``."""
    cfg = np.asarray(cfg)
    n = cfg.shape[-2]
    return tuple(int(b) for b in cfg[x % n])


def diagram_row(diagram, t: int) -> np.ndarray:
    diagram = np.asarray(diagram)
    last = diagram.shape[-3] - 1
    if not 0 <= t <= last:
        raise IndexError(f"time {t} outside diagram rows 0..{last}")
    return diagram[..., t, :, :]


def stack_rows(rows) -> np.ndarray:
    """Stack rows (earliest first) into a diagram, checking widths agree."""
    rows = [np.asarray(r, dtype=np.uint8) for r in rows]
    if not rows:
        raise ValueError("a diagram needs at least one row")
    widths = {r.shape[-2] for r in rows}
    if len(widths) != 1:
        raise ValueError(f"rows have mismatched widths {sorted(widths)}")
    return np.stack(rows, axis=-3)


def check_diagram(diagram, n: int | None = None, t: int | None = None) -> np.ndarray:
    """Validate a diagram's bit alphabet and (optionally) its width and horizon."""
    d = _as_cells(diagram)
    if d.ndim < 3:
        raise ValueError("a diagram has shape (T + 1, N, 2)")
    if n is not None and width(d) != n:
        raise ValueError(f"diagram width {width(d)} != {n}")
    if t is not None and horizon(d) != t:
        raise ValueError(f"diagram horizon {horizon(d)} != {t}")
    return d


# phi fields

def phi_constant(n: int, rows: int, value: int = 1) -> np.ndarray:
    return np.full((rows, n), value & 1, dtype=np.uint8)


def phi_site(n: int, rows: int, x: int, t: int) -> np.ndarray:
    if not 0 <= t < rows:
        raise ValueError(f"phi row {t} outside 0..{rows - 1}")
    phi = np.zeros((rows, n), dtype=np.uint8)
    phi[t, x % n] = 1
    return phi


def phi_random(n: int, rows: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(rows, n), dtype=np.uint8)


# enumeration helpers

def bits_from_index(index, shape) -> np.ndarray:
    """Decode integers into bit arrays of ``shape``; flat position p holds bit p."""
    index = np.asarray(index, dtype=np.int64)
    shape = tuple(shape)
    size = int(np.prod(shape))
    if size > 62:
        raise ValueError("too many bits to enumerate by index")
    bits = (index[..., None] >> np.arange(size, dtype=np.int64)) & 1
    return bits.astype(np.uint8).reshape(index.shape + shape)


def index_from_bits(bits, ndim: int) -> np.ndarray:
    """Inverse of :func:`bits_from_index` over the trailing ``ndim`` axes."""
    bits = np.asarray(bits, dtype=np.int64)
    lead = bits.shape[: bits.ndim - ndim]
    flat = bits.reshape(lead + (-1,))
    return flat @ (np.int64(1) << np.arange(flat.shape[-1], dtype=np.int64))


def all_configs(shape) -> np.ndarray:
    """Every bit array of ``shape``, in index order."""
    size = int(np.prod(shape))
    return bits_from_index(np.arange(2 ** size), shape)


def all_rows(n: int) -> np.ndarray:
    """All ``4**n`` rows of width ``n`` (matter or gauge), shape ``(4**n, n, 2)``."""
    return all_configs((n, 2))
