"""Exhaustive (and seeded random) verification of the gauge-theory claims.

Every check returns a :class:`CheckReport`. Case ordering is fixed, so the
formatted report of a check is byte-identical from run to run; elapsed time
is recorded but only printed on request.

Exhaustive mode never silently degrades: instances above the size guards
raise :class:`InstanceTooLarge`, and sampling happens only when
``mode="random"`` is asked for explicitly.
"""
from __future__ import annotations

import enum
import hashlib
import itertools
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import packed
from .dynamics import (FREE, MatterRule, SRule, TheorySpec, gauged, run, step_R, step_R_A,
                       transition_violations)
from .lattice import (JointDiagram, all_configs, all_rows, bits_from_index, index_from_bits)
from .scenario import Scenario, format_scenario, parse_scenario
from .symmetry import (SOLVED, compute_F, compute_J, gauge_A, gauge_joint, gauge_psi, holonomy,
                       solve_gauge_batch)

EXHAUSTIVE_LIMIT = 2 ** 20
COMBINATION_LIMIT = 2 ** 24
RANDOM_SAMPLES = 10_000


class Verdict(enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    HOLDS_ON_SUBSET = "HOLDS_ON_SUBSET"


class InstanceTooLarge(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass
class CheckReport:
    name: str
    verdict: Verdict
    cases: int
    params: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    witness: dict | None = None
    elapsed: float = 0.0

    @property
    def holds(self) -> bool:
        return self.verdict is not Verdict.FAILS

    def to_dict(self, timing: bool = False) -> dict:
        out = {"check": self.name, "params": self.params, "verdict": self.verdict.value,
               "cases": self.cases, "details": self.details, "witness": self.witness}
        if timing:
            out["elapsed_s"] = round(self.elapsed, 6)
        return out

    def format(self, timing: bool = False) -> str:
        dump = lambda obj: json.dumps(obj, sort_keys=True)  # noqa: E731
        lines = [f"check: {self.name}", f"params: {dump(self.params)}",
                 f"verdict: {self.verdict.value}", f"cases: {self.cases}",
                 f"details: {dump(self.details)}"]
        if self.witness is not None:
            label = "counterexample" if self.verdict is Verdict.FAILS else "witness"
            lines.append(f"{label}: {dump(self.witness)}")
        if timing:
            lines.append(f"elapsed: {self.elapsed:.3f}s")
        return "\n".join(lines) + "\n"


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        report = result[1] if isinstance(result, tuple) else result
        report.elapsed = time.perf_counter() - start
        return result
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


def _tokens(row) -> str:
    return " ".join(f"{int(a)}{int(b)}" for a, b in np.asarray(row))


def _rows(bits) -> list[str]:
    return [" ".join(str(int(b)) for b in r) for r in np.asarray(bits)]


# local covariance of the dressed gate

LAW_TERMS = ("r:A_r", "r:phi_next", "r:phi_left", "l:A_l", "l:phi_next", "l:phi_right")


def transform_law(a_r, a_l, phi_left, phi_right, phi_next, drop: str | None = None):
    """Gauge-field transformation at one site, optionally with one term removed."""
    if drop is not None and drop not in LAW_TERMS:
        raise ValueError(f"unknown term {drop!r}; expected one of {LAW_TERMS}")
    terms_r = {"r:A_r": a_r, "r:phi_next": phi_next, "r:phi_left": phi_left}
    terms_l = {"l:A_l": a_l, "l:phi_next": phi_next, "l:phi_right": phi_right}
    new_r = new_l = 0
    for name, v in terms_r.items():
        new_r ^= 0 if name == drop else v
    for name, v in terms_l.items():
        new_l ^= 0 if name == drop else v
    return new_r, new_l


def dressed_gate(plus_in: int, minus_in: int, a_r: int, a_l: int) -> tuple[int, int]:
    """W (X^A_r x X^A_l) on the pair (psi+(x-1), psi-(x+1)); returns (minus, plus)."""
    u, v = plus_in ^ a_r, minus_in ^ a_l
    return v, u  # W swaps the two wires


def _covariance_case(plus_in, minus_in, a_r, a_l, phi_left, phi_right, phi_next, drop):
    m, p = dressed_gate(plus_in, minus_in, a_r, a_l)
    lhs = (m ^ phi_next, p ^ phi_next)
    new_r, new_l = transform_law(a_r, a_l, phi_left, phi_right, phi_next, drop)
    rhs = dressed_gate(plus_in ^ phi_left, minus_in ^ phi_right, new_r, new_l)
    return lhs, rhs


@_timed
def check_local_covariance_R_A(phi_zero_only: bool = False, drop: str | None = None) -> CheckReport:
    """Dressed gate identity over every local input, phi and gauge bit."""
    cases = failing = 0
    counterexample = None
    phi_space = [(0, 0, 0)] if phi_zero_only else list(itertools.product((0, 1), repeat=3))
    for plus_in, minus_in, a_r, a_l in itertools.product((0, 1), repeat=4):
        for phi_left, phi_right, phi_next in phi_space:
            cases += 1
            lhs, rhs = _covariance_case(plus_in, minus_in, a_r, a_l, phi_left, phi_right, phi_next, drop)
            failing += lhs != rhs
            if lhs != rhs and counterexample is None:
                counterexample = dict(plus_in=plus_in, minus_in=minus_in, a_r=a_r, a_l=a_l,
                                      phi_left=phi_left, phi_right=phi_right, phi_next=phi_next,
                                      drop=drop, lhs=list(lhs), rhs=list(rhs))
    verdict = Verdict.FAILS if counterexample else Verdict.HOLDS
    return CheckReport("local-covariance", verdict, cases,
                       params={"phi_zero_only": phi_zero_only, "drop": drop},
                       details={"failing_cases": failing}, witness=counterexample)


def mutation_reports() -> dict[str, CheckReport]:
    """The covariance sweep with each term of the transformation law dropped in turn."""
    return {term: check_local_covariance_R_A(drop=term) for term in LAW_TERMS}


# the bare theory R is not gauge invariant

PHI_MODES = ("space_dependent", "constant", "zero")


def _phi_row_candidates(n: int, mode: str) -> np.ndarray:
    rows = all_configs((n,))
    if mode == "zero":
        return rows[:1]
    constant = rows.min(axis=1) == rows.max(axis=1)
    if mode == "constant":
        return rows[constant]
    if mode == "space_dependent":
        return rows[~constant]
    raise ValueError(f"phi mode must be one of {PHI_MODES}")


@_timed
def check_R_not_gauge_invariant(n: int = 4, t: int = 2, phi_mode: str = "space_dependent") -> CheckReport:
    """Search for an input transformation of an R-valid diagram that no output phi repairs.

    For every initial row and every input phi row of the requested kind, the
    compensating phi on later rows is forced cell by cell: the transformed
    prediction must differ from the original row by a same-colour flip. A
    cell where the two differ in J cannot be repaired by any phi.
    """
    if t < 1:
        raise ValueError("need t >= 1 to have a transition")
    if 4 ** n * 2 ** n > COMBINATION_LIMIT:
        raise InstanceTooLarge(f"n={n} is too wide for the exhaustive search")
    psi0 = all_rows(n)
    phi0 = _phi_row_candidates(n, phi_mode)
    diagrams = run(FREE, psi0, None, t).psi                         # (P, t+1, n, 2)
    d = np.broadcast_to(diagrams[:, None], (len(psi0), len(phi0)) + diagrams.shape[1:])
    current = d[:, :, 0] ^ phi0[None, :, :, None]
    phi_rows = [np.broadcast_to(phi0[None], d.shape[:2] + (n,))]
    broken = np.zeros(d.shape[:2], dtype=bool)
    where = np.full(d.shape[:2] + (2,), -1, dtype=np.int64)
    for k in range(t):
        delta = step_R(current) ^ d[:, :, k + 1]
        bad = delta[..., 0] != delta[..., 1]
        newly = bad.any(axis=-1) & ~broken
        where[newly, 0] = np.argmax(bad[newly], axis=-1)
        where[newly, 1] = k + 1
        broken |= newly
        phi_next = delta[..., 0]
        phi_rows.append(phi_next)
        current = d[:, :, k + 1] ^ phi_next[..., None]
    cases = int(broken.size)
    params = {"n": n, "t": t, "phi_mode": phi_mode}
    if not broken.any():
        return CheckReport("r-gauge-invariance", Verdict.HOLDS, cases, params=params,
                           details={"psi0_rows": len(psi0), "phi0_rows": len(phi0)})

    i, j = np.argwhere(broken)[0]
    x, tt = (int(v) for v in where[i, j])
    phi = np.zeros((t + 2, n), dtype=np.uint8)
    for k in range(tt):
        phi[k] = phi_rows[k][i, j]
    sc = Scenario(n, t, FREE, psi0[i], phi=phi)
    witness = {"scenario": format_scenario(sc), "violation": {"x": x, "t": tt},
               "completions_checked": 2 ** (n * t)}
    if not _r_counterexample_holds(sc, phi[0], x, tt):
        raise AssertionError("counterexample failed brute-force confirmation")
    return CheckReport("r-gauge-invariance", Verdict.FAILS, cases, params=params,
                       details={"psi0_rows": len(psi0), "phi0_rows": len(phi0)},
                       witness=witness)


def _r_counterexample_holds(sc: Scenario, phi0, x: int, t: int) -> bool:
    """No choice of phi on rows 1..T makes the transformed diagram R-valid,
    and the named cell has the wrong J for any flip."""
    psi = sc.run().psi
    n, horizon = sc.width, sc.horizon
    later = all_configs((horizon, n))
    phis = np.concatenate([np.broadcast_to(phi0, (len(later), 1, n)), later], axis=1)
    transformed = gauge_psi(psi[None], phis)
    matter_bad, _ = transition_violations(FREE, transformed)
    none_valid = bool(matter_bad.any(axis=(-2, -1)).all())
    row = psi[t - 1] ^ sc.phi[t - 1][:, None]
    predicted = step_R(row)[x]
    colour_clash = int(predicted[0] ^ predicted[1]) != int(psi[t, x, 0] ^ psi[t, x, 1])
    return none_valid and colour_clash


# curvature plus ring holonomy characterises gauge orbits

def _guard_diagrams(n: int, t: int):
    if 2 ** (2 * n * (t + 1)) > EXHAUSTIVE_LIMIT:
        raise InstanceTooLarge(f"2^(2n(t+1)) = 2^{2 * n * (t + 1)} gauge diagrams exceeds 2^20")


def _orbit_table(all_a: np.ndarray, all_phi: np.ndarray, chunk: int = 2 ** 16) -> np.ndarray:
    """Index of gauge_A(a, phi) for every (a, phi): the brute-force oracle."""
    out = np.empty((len(all_a), len(all_phi)), dtype=np.int64)
    step = max(1, chunk // len(all_phi))
    for lo in range(0, len(all_a), step):
        block = gauge_A(all_a[lo:lo + step, None], all_phi[None])
        out[lo:lo + step] = index_from_bits(block, 3)
    return out


@_timed
def check_remark1(n: int = 2, t: int = 1, mode: str = "exhaustive",
                  samples: int = RANDOM_SAMPLES, seed: int = 0) -> CheckReport:
    """Compare brute-force phi existence with [F = F' and holonomy closes] and the solver."""
    if t < 1:
        raise ValueError("F needs t >= 1")
    params = {"n": n, "t": t, "mode": mode}
    if mode == "exhaustive":
        _guard_diagrams(n, t)
        return _orbit_exhaustive(n, t, params)
    if mode == "random":
        params.update(samples=samples, seed=seed)
        return _orbit_random(n, t, samples, seed, params)
    raise ValueError("mode must be 'exhaustive' or 'random'")


def _orbit_compare(a, a_prime, exists):
    """Tally agreement for a batch of pairs; returns counts and the first bad index."""
    f_equal = (compute_F(a) == compute_F(a_prime)).all(axis=(-2, -1))
    closes = ~holonomy(a, a_prime).any(axis=(-2, -1))
    predicted = f_equal & closes
    phi, status = solve_gauge_batch(a, a_prime)
    solved = status == SOLVED
    good_phi = (gauge_A(a, phi) == a_prime).all(axis=(-3, -2, -1))
    bad = (predicted != exists) | (solved != exists) | (solved & ~good_phi)
    counts = {
        "pairs_with_phi": int(exists.sum()),
        "curvature_mismatch": int((~f_equal).sum()),
        "holonomy_only": int((f_equal & ~closes).sum()),
        "oracle_vs_invariant_disagree": int((predicted != exists).sum()),
        "oracle_vs_solver_disagree": int((solved != exists).sum()),
        "solver_bad_phi": int((solved & ~good_phi).sum()),
    }
    first = int(np.flatnonzero(bad.ravel())[0]) if bad.any() else None
    return counts, first


def _merge(total: dict, counts: dict):
    for k, v in counts.items():
        total[k] = total.get(k, 0) + v


def _orbit_verdict(params, cases, totals, witness):
    failed = any(totals[k] for k in ("oracle_vs_invariant_disagree", "oracle_vs_solver_disagree",
                                    "solver_bad_phi"))
    return CheckReport("remark1", Verdict.FAILS if failed else Verdict.HOLDS, cases,
                       params=params, details=totals, witness=witness if failed else None)


def _orbit_exhaustive(n, t, params):
    shape = (t + 1, n, 2)
    all_a = all_configs(shape)
    all_phi = all_configs((t + 2, n))
    table = _orbit_table(all_a, all_phi)
    count = len(all_a)
    totals, witness = {}, None
    step = max(1, 2 ** 16 // count)
    for lo in range(0, count, step):
        hi = min(lo + step, count)
        exists = np.zeros((hi - lo, count), dtype=bool)
        np.put_along_axis(exists, table[lo:hi], True, axis=1)
        a = np.broadcast_to(all_a[lo:hi, None], (hi - lo, count) + shape)
        a_prime = np.broadcast_to(all_a[None], (hi - lo, count) + shape)
        counts, first = _orbit_compare(a, a_prime, exists)
        _merge(totals, counts)
        if first is not None and witness is None:
            i, j = divmod(first, count)
            witness = {"a": [_tokens(r) for r in all_a[lo + i]], "a_prime": [_tokens(r) for r in all_a[j]]}
    return _orbit_verdict(params, count * count, totals, witness)


def _orbit_random(n, t, samples, seed, params):
    shape = (t + 1, n, 2)
    if 2 ** (n * (t + 2)) > EXHAUSTIVE_LIMIT:
        raise InstanceTooLarge("too many phi fields for the brute-force oracle")
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=(samples,) + shape, dtype=np.uint8)
    # half the pairs are gauge related by construction, half are arbitrary
    related = rng.integers(0, 2, size=samples).astype(bool)
    phi = rng.integers(0, 2, size=(samples, t + 2, n), dtype=np.uint8)
    other = rng.integers(0, 2, size=(samples,) + shape, dtype=np.uint8)
    a_prime = np.where(related[:, None, None, None], gauge_A(a, phi), other)
    # oracle: every phi, applied to the zero diagram, gives the orbit offsets
    offsets = index_from_bits(gauge_A(np.zeros(shape, np.uint8), all_configs((t + 2, n))), 3)
    exists = np.isin(index_from_bits(a ^ a_prime, 3), offsets)
    counts, first = _orbit_compare(a, a_prime, exists)
    witness = None
    if first is not None:
        witness = {"a": [_tokens(r) for r in a[first]], "a_prime": [_tokens(r) for r in a_prime[first]]}
    return _orbit_verdict(params, samples, counts, witness)


# F is gauge invariant

@_timed
def check_f_invariance(n: int = 2, t: int = 1) -> CheckReport:
    _guard_diagrams(n, t)
    all_a = all_configs((t + 1, n, 2))
    all_phi = all_configs((t + 2, n))
    f = compute_F(all_a)
    violations, witness = 0, None
    step = max(1, 2 ** 16 // len(all_phi))
    for lo in range(0, len(all_a), step):
        g = compute_F(gauge_A(all_a[lo:lo + step, None], all_phi[None]))
        bad = (g != f[lo:lo + step, None]).any(axis=(-2, -1))
        violations += int(bad.sum())
        if bad.any() and witness is None:
            i, j = np.argwhere(bad)[0]
            witness = {"a": [_tokens(r) for r in all_a[lo + i]], "phi": _rows(all_phi[j])}
    return CheckReport("f-invariance", Verdict.FAILS if violations else Verdict.HOLDS,
                       len(all_a) * len(all_phi), params={"n": n, "t": t},
                       details={"violations": violations}, witness=witness)


# S-rule behaviour on the F sector

@_timed
def check_s_rule_curvature(n: int = 4, t: int = 3) -> CheckReport:
    """ADVECT and ADVECT_FLIP keep F = 0; FROZEN keeps F constant in time."""
    a0 = all_rows(n)
    psi0 = np.zeros((n, 2), dtype=np.uint8)
    details = {}
    witness = None
    for rule in (SRule.ADVECT, SRule.ADVECT_FLIP):
        f = compute_F(run(gauged(rule), psi0, a0, t).gauge)
        bad = f.any(axis=(-2, -1))
        details[f"{rule.value}_nonzero_F"] = int(bad.sum())
        if bad.any() and witness is None:
            witness = {"rule": rule.value, "a0": _tokens(a0[np.argmax(bad)])}
    f = compute_F(run(gauged(SRule.FROZEN), psi0, a0, t).gauge)
    bad = (f != f[:, :1]).any(axis=(-2, -1))
    details["frozen_time_varying_F"] = int(bad.sum())
    if bad.any() and witness is None:
        witness = {"rule": "frozen", "a0": _tokens(a0[np.argmax(bad)])}
    failed = any(details.values())
    return CheckReport("s-rule-curvature", Verdict.FAILS if failed else Verdict.HOLDS,
                       3 * len(a0), params={"n": n, "t": t}, details=details, witness=witness)


# gauge-fixing soundness

def reachable_F(rule: SRule, n: int, t: int) -> set[bytes]:
    """Every F diagram produced by ``rule`` from some initial gauge row."""
    f = compute_F(run(gauged(rule), np.zeros((n, 2), np.uint8), all_rows(n), t).gauge)
    return {row.tobytes() for row in f.reshape(len(f), -1)}


def same_induced_dynamics(s1: SRule, s2: SRule, n: int, t: int) -> bool:
    return reachable_F(s1, n, t) == reachable_F(s2, n, t)


def _match_direction(s: SRule, s_prime: SRule, psi0, a0, t):
    """Gauge every (R_A + s)-diagram into an (R_A + s')-diagram.

    Returns per-case failure flags plus bookkeeping. The target gauge diagram
    is the s' run from the same initial row when that is gauge related (the
    usual case); otherwise the first initial row, in index order, that works.
    """
    n = psi0.shape[-2]
    theory, theory_p = gauged(s), gauged(s_prime)
    c = run(theory, psi0, a0, t)
    a_target0 = a0.copy()
    target = run(theory_p, psi0, a_target0, t).gauge
    phi, status = solve_gauge_batch(c.gauge, target)
    fallback = 0
    pending = np.flatnonzero(status != SOLVED)
    if pending.size:
        candidates = all_rows(n)
        cand_gauge = run(theory_p, np.zeros((n, 2), np.uint8), candidates, t).gauge
        for i in pending:
            ph, st = solve_gauge_batch(c.gauge[i][None], cand_gauge)
            ok = np.flatnonzero(st == SOLVED)
            if ok.size:
                a_target0[i] = candidates[ok[0]]
                phi[i] = ph[ok[0]]
                status[i] = SOLVED
                fallback += 1
    solved = status == SOLVED
    moved = gauge_joint(c, phi)
    matter_bad, gauge_bad = transition_violations(theory_p, moved.psi, moved.gauge)
    valid = ~(matter_bad.any(axis=(-2, -1)) | gauge_bad.any(axis=(-2, -1)))
    # independent run of T' from the G_phi-related initial data
    matched = run(theory_p, gauge_psi(psi0[..., None, :, :], phi[..., :1, :])[..., 0, :, :], a_target0, t)
    same_diagram = ((matched.psi == moved.psi).all(axis=(-3, -2, -1))
                    & (matched.gauge == moved.gauge).all(axis=(-3, -2, -1)))
    same_j = (compute_J(matched.psi) == compute_J(c.psi)).all(axis=(-2, -1))
    failed = ~(solved & valid & same_diagram & same_j)
    info = {"unsolved": int((~solved).sum()), "invalid": int((solved & ~valid).sum()),
            "j_mismatch": int((solved & ~same_j).sum()), "fallback_targets": fallback,
            "phi_zero": int((solved & ~phi.any(axis=(-2, -1))).sum())}
    return failed, info, phi, c


@_timed
def check_gauge_fixing_soundness(s1: SRule = SRule.ADVECT, s2: SRule = SRule.ADVECT_FLIP,
                                 n: int = 4, t: int = 3, mode: str = "exhaustive",
                                 samples: int = RANDOM_SAMPLES, seed: int = 0) -> CheckReport:
    """Physical equivalence of R_A + s1 and R_A + s2, in both directions."""
    if SRule.NONE in (s1, s2):
        raise ValueError("gauge fixing compares concrete S rules, not S=none")
    if not same_induced_dynamics(s1, s2, n, t):
        raise PreconditionError(f"{s1.value} and {s2.value} induce different dynamics on F "
                                f"at n={n}, t={t}")
    params = {"s1": s1.value, "s2": s2.value, "n": n, "t": t, "mode": mode}
    rows = all_rows(n)
    if mode == "exhaustive":
        if len(rows) ** 2 > COMBINATION_LIMIT:
            raise InstanceTooLarge(f"{len(rows) ** 2} initial conditions exceeds 2^24")
        pi, ai = np.divmod(np.arange(len(rows) ** 2), len(rows))
    elif mode == "random":
        params.update(samples=samples, seed=seed)
        rng = np.random.default_rng(seed)
        pi = rng.integers(0, len(rows), samples)
        ai = rng.integers(0, len(rows), samples)
    else:
        raise ValueError("mode must be 'exhaustive' or 'random'")
    psi0, a0 = rows[pi], rows[ai]

    details, witness = {}, None
    failures = 0
    for label, (s, sp) in (("forward", (s1, s2)), ("backward", (s2, s1))):
        failed, info, phi, c = _match_direction(s, sp, psi0, a0, t)
        failures += int(failed.sum())
        details[label] = info
        if failed.any() and witness is None:
            i = int(np.argmax(failed))
            witness = {"direction": label, "psi0": _tokens(psi0[i]), "a0": _tokens(a0[i])}
        elif witness is None and label == "forward" and len(psi0):
            witness = {"psi0": _tokens(psi0[0]), "a0": _tokens(a0[0]), "phi": _rows(phi[0])}
    details["failures"] = failures
    verdict = Verdict.FAILS if failures else Verdict.HOLDS
    return CheckReport("gauge-fixing", verdict, len(psi0), params=params, details=details,
                       witness=witness)


# J characterises matter equivalence classes

@_timed
def check_equivalence_classes(n: int = 2, t: int = 0) -> CheckReport:
    if n > 3 or t > 1:
        raise InstanceTooLarge("equivalence-class sweep is limited to n <= 3, t <= 1")
    # per cell: some flip relates s and s' iff J agrees
    cell_bad = 0
    for s, s2 in itertools.product(itertools.product((0, 1), repeat=2), repeat=2):
        related = any((s[0] ^ f, s[1] ^ f) == s2 for f in (0, 1))
        cell_bad += related != ((s[0] ^ s[1]) == (s2[0] ^ s2[1]))

    shape = (t + 1, n, 2)
    diagrams = all_configs(shape)
    phis = all_configs((t + 1, n))
    count = len(diagrams)
    images = index_from_bits(gauge_psi(diagrams[:, None], phis[None]), 3)
    related = np.zeros((count, count), dtype=bool)
    np.put_along_axis(related, images, True, axis=1)
    j = index_from_bits(compute_J(diagrams), 2)
    same_j = j[:, None] == j[None, :]
    bad = related != same_j
    witness = None
    if bad.any():
        i, k = np.argwhere(bad)[0]
        witness = {"psi": [_tokens(r) for r in diagrams[i]], "psi_prime": [_tokens(r) for r in diagrams[k]]}
    failed = cell_bad or bad.any()
    return CheckReport("equivalence-classes", Verdict.FAILS if failed else Verdict.HOLDS,
                       16 + count * count, params={"n": n, "t": t},
                       details={"cell_disagreements": int(cell_bad),
                                "diagram_disagreements": int(bad.sum()),
                                "classes": int(len(np.unique(j)))},
                       witness=witness)


# admissible phi (the empirical image of "Z-valid")

@dataclass
class AdmissiblePhi:
    spec: TheorySpec
    n: int
    t: int
    mask: np.ndarray  # one flag per phi, in index order over shape (t + 2, n)

    @property
    def count(self) -> int:
        return int(self.mask.sum())

    @property
    def total(self) -> int:
        return len(self.mask)

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def fields(self) -> np.ndarray:
        return bits_from_index(self.indices(), (self.t + 2, self.n))

    def contains(self, phi) -> bool:
        phi = np.asarray(phi)
        if phi.shape != (self.t + 2, self.n):
            raise ValueError(f"phi must have shape {(self.t + 2, self.n)}")
        return bool(self.mask[int(index_from_bits(phi, 2))])

    def digest(self) -> str:
        return hashlib.sha256(self.indices().astype("<i8").tobytes()).hexdigest()[:16]


def valid_diagrams(spec: TheorySpec, n: int, t: int) -> JointDiagram:
    """Every spec-valid diagram at width n and horizon t (all initial data)."""
    rows = all_rows(n)
    if spec.matter_rule is MatterRule.FREE_R:
        return run(FREE, rows, None, t)
    if spec.gauge_rule is SRule.NONE:
        gauges = all_configs((t + 1, n, 2))
        pi, gi = np.divmod(np.arange(len(rows) * len(gauges)), len(gauges))
        return run(spec, rows[pi], gauges[gi], t)
    pi, ai = np.divmod(np.arange(len(rows) ** 2), len(rows))
    return run(spec, rows[pi], rows[ai], t)


def _packed_diagram(d) -> np.ndarray:
    return packed.pack_row(d)  # (..., T+1, 2)


@_timed
def enumerate_admissible_phi(spec: TheorySpec, n: int, t: int):
    """The phi fields mapping every spec-valid diagram to a spec-valid diagram.

    Returns ``(AdmissiblePhi, CheckReport)``. For the free theory only matter
    transforms; otherwise matter and gauge transform together.
    """
    if t < 1:
        raise ValueError("need t >= 1")
    diagrams = valid_diagrams(spec, n, t)
    n_phi = 2 ** (n * (t + 2))
    if len(diagrams.psi) * n_phi > COMBINATION_LIMIT:
        raise InstanceTooLarge(f"{len(diagrams.psi)} diagrams x {n_phi} phi fields exceeds 2^24")
    psi = _packed_diagram(diagrams.psi)             # (B, t+1, 2)
    gauge = _packed_diagram(diagrams.gauge)
    free = spec.matter_rule is MatterRule.FREE_R
    mask = np.ones(n_phi, dtype=bool)
    first_bad = None
    chunk = max(1, 2 ** 18 // len(psi))
    for lo in range(0, n_phi, chunk):
        idx = np.arange(lo, min(lo + chunk, n_phi))
        # flat bit p = row * n + x, so each packed phi row is a slice of the index
        phi = (idx[:, None].astype(np.uint64) >> (np.arange(t + 2, dtype=np.uint64) * np.uint64(n))) \
            & np.uint64(2 ** n - 1)
        p_new = packed.gauge_psi(psi[:, None], phi[None, :, : t + 1])
        ok = np.ones((len(psi), len(idx)), dtype=bool)
        if free:
            for k in range(t):
                ok &= (packed.step_R(p_new[:, :, k], n) == p_new[:, :, k + 1]).all(axis=-1)
        else:
            g_new = packed.gauge_A(gauge[:, None], phi[None, :, :-1], phi[None, :, 1:], n)
            for k in range(t):
                ok &= (packed.step_R_A(p_new[:, :, k], g_new[:, :, k], n) == p_new[:, :, k + 1]).all(axis=-1)
                if spec.gauge_rule is not SRule.NONE:
                    ok &= (packed.step_S(g_new[:, :, k], spec.gauge_rule, n) == g_new[:, :, k + 1]).all(axis=-1)
        mask[idx] = ok.all(axis=0)
        if first_bad is None and not ok.all():
            bi, pj = np.argwhere(~ok)[0]
            first_bad = (int(bi), int(idx[pj]))

    adm = AdmissiblePhi(spec, n, t, mask)
    constants = [0, n_phi - 1]
    details = {"admissible": adm.count, "total": adm.total, "digest": adm.digest(),
               "first_admissible": [int(i) for i in adm.indices()[:8]],
               "constants_admissible": bool(mask[constants].all()),
               "diagrams": len(psi)}
    witness = None
    if first_bad is not None:
        bi, pj = first_bad
        phi = bits_from_index(pj, (t + 2, n))
        witness = {"phi_index": pj, "phi": _rows(phi),
                   "psi0": _tokens(diagrams.psi[bi, 0]),
                   "gauge": [_tokens(r) for r in diagrams.gauge[bi]]}
    verdict = Verdict.HOLDS if mask.all() else Verdict.HOLDS_ON_SUBSET
    report = CheckReport("admissible-phi", verdict, len(psi) * n_phi,
                         params={"spec": spec.name, "n": n, "t": t}, details=details,
                         witness=witness)
    return adm, report


def transformed_is_valid(spec: TheorySpec, c: JointDiagram, phi) -> bool:
    """Direct (unpacked) validity of G_phi c, the oracle for admissibility."""
    if spec.matter_rule is MatterRule.FREE_R:
        matter_bad, _ = transition_violations(FREE, gauge_psi(c.psi, phi))
        return not matter_bad.any()
    moved = gauge_joint(c, phi)
    matter_bad, gauge_bad = transition_violations(spec, moved.psi, moved.gauge)
    return not (matter_bad.any() or (gauge_bad is not None and gauge_bad.any()))


# reversibility, reduction and the global symmetry

@_timed
def check_reversibility(n_max: int = 4) -> CheckReport:
    """step_R and step_R_A(., a) are bijections; step_R_A(., 0) = step_R."""
    details, cases, witness = {}, 0, None
    for n in range(2, n_max + 1):
        rows = packed.pack_row(all_rows(n))                     # (4^n, 2)
        images_r = np.unique(packed.row_key(packed.step_R(rows, n), n)).size
        a_all = packed.pack_row(all_rows(n))
        out = packed.step_R_A(rows[None], a_all[:, None], n)     # (4^n a, 4^n psi, 2)
        keys = np.sort(packed.row_key(out, n), axis=1)
        distinct = 1 + (np.diff(keys, axis=1) != 0).sum(axis=1)
        reduction = (packed.step_R_A(rows, np.zeros_like(rows), n) == packed.step_R(rows, n)).all()
        details[f"n{n}"] = {"rows": len(rows), "R_image": int(images_r),
                            "non_bijective_a": int((distinct != len(rows)).sum()),
                            "reduction_ok": bool(reduction)}
        cases += len(rows) * (len(a_all) + 2)
        if (images_r != len(rows) or (distinct != len(rows)).any() or not reduction) and witness is None:
            witness = {"n": n}
    return CheckReport("reversibility", Verdict.FAILS if witness else Verdict.HOLDS, cases,
                       params={"n_max": n_max}, details=details, witness=witness)


@_timed
def check_global_symmetry(n: int = 4, t: int = 3) -> CheckReport:
    """phi = 1 maps every R-valid diagram to an R-valid one, and commutes with step_R."""
    diagrams = run(FREE, all_rows(n), None, t).psi
    flipped = diagrams ^ 1
    matter_bad, _ = transition_violations(FREE, flipped)
    bad = matter_bad.any(axis=(-2, -1))
    rows = all_rows(n)
    commute_bad = (step_R(rows ^ 1) != (step_R(rows) ^ 1)).any(axis=(-2, -1))
    witness = None
    if bad.any():
        witness = {"psi0": _tokens(diagrams[np.argmax(bad), 0])}
    failed = bool(bad.any() or commute_bad.any())
    return CheckReport("global-symmetry", Verdict.FAILS if failed else Verdict.HOLDS,
                       len(diagrams) + len(rows), params={"n": n, "t": t},
                       details={"invalid_after_flip": int(bad.sum()),
                                "non_commuting_rows": int(commute_bad.sum())},
                       witness=witness)


# registry used by the command line and by replay

def _admissible_report(spec: str = "RA+none", n: int = 2, t: int = 1) -> CheckReport:
    return enumerate_admissible_phi(parse_spec(spec), n, t)[1]


def parse_spec(text: str) -> TheorySpec:
    """``R``, ``RA+advect`` and so on (the form used in report params)."""
    rule, _, s = text.partition("+")
    return TheorySpec(MatterRule(rule), SRule(s or "none"))


CHECKS = {
    "local-covariance": check_local_covariance_R_A,
    "r-gauge-invariance": check_R_not_gauge_invariant,
    "remark1": check_remark1,
    "f-invariance": check_f_invariance,
    "s-rule-curvature": check_s_rule_curvature,
    "gauge-fixing": check_gauge_fixing_soundness,
    "equivalence-classes": check_equivalence_classes,
    "admissible-phi": _admissible_report,
    "reversibility": check_reversibility,
    "global-symmetry": check_global_symmetry,
}


def replay(report: CheckReport) -> bool:
    """Re-derive a report's outcome from its recorded witness.

    For FAILS reports this reproduces the violation from the counterexample
    alone. Otherwise the check is re-run with the same parameters and the
    formatted output must match exactly.
    """
    w = report.witness
    if report.verdict is Verdict.FAILS and w is not None:
        if report.name == "local-covariance":
            lhs, rhs = _covariance_case(w["plus_in"], w["minus_in"], w["a_r"], w["a_l"],
                                        w["phi_left"], w["phi_right"], w["phi_next"], w["drop"])
            return lhs != rhs
        if report.name == "r-gauge-invariance":
            sc = parse_scenario(w["scenario"])
            v = w["violation"]
            return _r_counterexample_holds(sc, sc.phi[0], v["x"], v["t"])
        if report.name == "remark1":
            return _replay_orbits(w, report.params)
    fn = CHECKS[report.name]
    params = dict(report.params)
    if report.name == "gauge-fixing":
        params["s1"], params["s2"] = SRule(params["s1"]), SRule(params["s2"])
    again = fn(**params)
    return again.format() == report.format()


def _replay_orbits(w, params) -> bool:
    from .scenario import _cell_tokens
    n, t = params["n"], params["t"]
    a = np.stack([_cell_tokens(r, n, 0, "row") for r in w["a"]])
    a_prime = np.stack([_cell_tokens(r, n, 0, "row") for r in w["a_prime"]])
    exists = bool((gauge_A(a[None], all_configs((t + 2, n))) == a_prime).all(axis=(-3, -2, -1)).any())
    counts, first = _orbit_compare(a[None], a_prime[None], np.array([exists]))
    return first is not None
