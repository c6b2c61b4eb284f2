"""Free theory R, gauged theory R_A, gauge-field rules S and their composite T.

All step functions accept leading batch axes. ``np.roll(a, 1, axis=-1)[x]``
is ``a[x - 1]``, which is how the ring neighbours are fetched.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .lattice import JointDiagram, MINUS, PLUS, R, L, check_diagram, horizon, width


class SRule(enum.Enum):
    ADVECT = "advect"
    ADVECT_FLIP = "advect_flip"
    FROZEN = "frozen"
    NONE = "none"


class MatterRule(enum.Enum):
    FREE_R = "R"
    GAUGED_R_A = "RA"


@dataclass(frozen=True)
class TheorySpec:
    matter_rule: MatterRule
    gauge_rule: SRule = SRule.NONE

    def __post_init__(self):
        if self.matter_rule is MatterRule.FREE_R and self.gauge_rule is not SRule.NONE:
            raise ValueError("the free theory R has no gauge dynamics; use S=none")

    @property
    def name(self) -> str:
        if self.matter_rule is MatterRule.FREE_R:
            return self.matter_rule.value
        return f"{self.matter_rule.value}+{self.gauge_rule.value}"


FREE = TheorySpec(MatterRule.FREE_R)


def gauged(rule: SRule) -> TheorySpec:
    return TheorySpec(MatterRule.GAUGED_R_A, rule)


def _left(a):
    """Value at x - 1 for every x."""
    return np.roll(a, 1, axis=-1)


def _right(a):
    """Value at x + 1 for every x."""
    return np.roll(a, -1, axis=-1)


def step_R(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.uint8)
    out = np.empty_like(psi)
    out[..., MINUS] = _right(psi[..., MINUS])
    out[..., PLUS] = _left(psi[..., PLUS])
    return out


def step_R_A(psi, a) -> np.ndarray:
    """One step of the gauged rule: each gate input is flipped by the local gauge bits."""
    psi = np.asarray(psi, dtype=np.uint8)
    a = np.asarray(a, dtype=np.uint8)
    if psi.shape[-2] != a.shape[-2]:
        raise ValueError(f"matter width {psi.shape[-2]} != gauge width {a.shape[-2]}")
    # minus is dressed by A_l, plus by A_r
    return step_R(psi) ^ a[..., [L, R]]


def step_S(a, rule: SRule) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint8)
    if rule is SRule.NONE:
        raise ValueError("S=none has no internal dynamics; supply the gauge diagram")
    if rule is SRule.FROZEN:
        return a.copy()
    out = np.empty_like(a)
    out[..., R] = _right(a[..., R])
    out[..., L] = _left(a[..., L])
    if rule is SRule.ADVECT_FLIP:
        out ^= 1
    return out


def run(spec: TheorySpec, psi0, gauge=None, horizon_: int | None = None) -> JointDiagram:
    """Generate the joint diagram of ``spec`` from initial data.

    ``gauge`` is the initial gauge row, or, for ``S=none``, the whole gauge
    diagram (whose horizon then fixes the run length). For the free theory it
    may be omitted and defaults to zero.
    """
    psi0 = np.asarray(psi0, dtype=np.uint8)
    n = psi0.shape[-2]
    if spec.gauge_rule is SRule.NONE:
        if gauge is None:
            if spec.matter_rule is not MatterRule.FREE_R:
                raise ValueError("S=none needs an external gauge diagram")
            if horizon_ is None:
                raise ValueError("horizon is required")
            gauge = np.zeros(psi0.shape[:-2] + (horizon_ + 1, n, 2), dtype=np.uint8)
        gauge = np.asarray(gauge, dtype=np.uint8)
        if gauge.ndim < 3:
            raise ValueError("S=none needs a gauge diagram of shape (T + 1, N, 2)")
        if horizon_ is not None and horizon(gauge) != horizon_:
            raise ValueError(f"gauge diagram horizon {horizon(gauge)} != {horizon_}")
        if width(gauge) != n:
            raise ValueError(f"gauge width {width(gauge)} != matter width {n}")
        if spec.matter_rule is MatterRule.FREE_R and gauge.any():
            raise ValueError("the free theory requires an all-zero gauge field")
        rows_a = [gauge[..., t, :, :] for t in range(gauge.shape[-3])]
    else:
        if horizon_ is None:
            raise ValueError("horizon is required")
        a = np.zeros_like(psi0) if gauge is None else np.asarray(gauge, dtype=np.uint8)
        if a.shape[-2] != n:
            raise ValueError(f"gauge width {a.shape[-2]} != matter width {n}")
        rows_a = [a]
        for _ in range(horizon_):
            rows_a.append(step_S(rows_a[-1], spec.gauge_rule))

    rows_psi = [psi0]
    for t in range(len(rows_a) - 1):
        rows_psi.append(step_R_A(rows_psi[-1], rows_a[t]))
    psi = np.stack(np.broadcast_arrays(*rows_psi), axis=-3)
    a = np.stack(np.broadcast_arrays(*rows_a), axis=-3)
    return JointDiagram(psi, a)


def transition_violations(spec: TheorySpec, psi, gauge=None):
    """Per-cell failures of the one-step relations.

    Returns ``(matter_bad, gauge_bad)``; both have shape ``(..., T, N)`` and
    entry ``[t, x]`` flags cell ``x`` of row ``t + 1``. ``gauge_bad`` is None
    when the gauge field is unconstrained (``S=none``) or absent.
    """
    psi = np.asarray(psi, dtype=np.uint8)
    if gauge is None:
        if spec.matter_rule is not MatterRule.FREE_R:
            raise ValueError(f"theory {spec.name} needs the gauge diagram to check validity")
        predicted = step_R(psi[..., :-1, :, :])
    else:
        gauge = np.asarray(gauge, dtype=np.uint8)
        if gauge.shape[-3:] != psi.shape[-3:]:
            raise ValueError(f"matter shape {psi.shape[-3:]} != gauge shape {gauge.shape[-3:]}")
        predicted = step_R_A(psi[..., :-1, :, :], gauge[..., :-1, :, :])
    matter_bad = (predicted != psi[..., 1:, :, :]).any(axis=-1)

    gauge_bad = None
    if gauge is not None and spec.gauge_rule is not SRule.NONE:
        nxt = step_S(gauge[..., :-1, :, :], spec.gauge_rule)
        gauge_bad = (nxt != gauge[..., 1:, :, :]).any(axis=-1)
    return matter_bad, gauge_bad


class Validity(NamedTuple):
    ok: bool
    x: int | None = None
    t: int | None = None
    layer: str | None = None

    def __bool__(self):
        return self.ok


def is_valid(spec: TheorySpec, diagram) -> Validity:
    """Check a single diagram against ``spec``.

    ``diagram`` is a :class:`JointDiagram` or, for the free theory, a bare
    matter diagram. On failure the earliest offending cell is reported,
    ordered by time, then matter before gauge, then site.
    """
    if isinstance(diagram, JointDiagram):
        psi, gauge = diagram
        psi = check_diagram(psi)
        gauge = check_diagram(gauge)
    else:
        psi, gauge = check_diagram(diagram), None
    if psi.ndim != 3:
        raise ValueError("is_valid takes a single diagram; use transition_violations for batches")

    if spec.matter_rule is MatterRule.FREE_R:
        # R is R_A at A = 0: any set gauge bit is itself a violation
        matter_bad, _ = transition_violations(spec, psi)
        gauge_rows = None if gauge is None else gauge.any(axis=-1)
    else:
        matter_bad, gauge_bad = transition_violations(spec, psi, gauge)
        gauge_rows = None
        if gauge_bad is not None:
            gauge_rows = np.concatenate([np.zeros((1,) + gauge_bad.shape[1:], bool), gauge_bad])

    for t in range(psi.shape[0]):
        if t >= 1:
            hits = np.flatnonzero(matter_bad[t - 1])
            if hits.size:
                return Validity(False, int(hits[0]), t, "matter")
        if gauge_rows is not None:
            hits = np.flatnonzero(gauge_rows[t])
            if hits.size:
                return Validity(False, int(hits[0]), t, "gauge")
    return Validity(True)
