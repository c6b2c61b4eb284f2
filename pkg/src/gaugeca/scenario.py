"""Scenario files and text serialisation of diagrams and bit fields.

Scenario file (``#`` starts a comment, blank lines are ignored)::

    N=4
    T=3
    rule=RA                 # R or RA
    S=advect                # advect | advect_flip | frozen | none
    psi0=00 01 00 00        # matter tokens, minus bit then plus bit
    a0=00 00 00 00          # gauge tokens, r bit then l bit
    phi=                    # T + 2 indented rows of N bits ...
      0 0 0 0
      ...
    solve_seed=00           # free initial bits for the gauge solver

``A=`` followed by T + 1 indented gauge rows replaces ``a0`` when ``S=none``.
``phi`` may instead be ``const:<0|1>``, ``seed:<int>`` or ``site:<x>,<t>``.

Diagrams serialise as a ``DIAG N=<n> T=<t> kind=matter|gauge|joint`` header
followed by rows earliest first; joint rows are ``<matter tokens> | <gauge
tokens>``. Bit fields (phi, J, F) use ``FIELD name=<name> N=<n> rows=<k>``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .dynamics import MatterRule, SRule, TheorySpec, run
from .lattice import JointDiagram, phi_constant, phi_random, phi_site
from .symmetry import parity_chains

KEYS = ("N", "T", "rule", "S", "psi0", "a0", "A", "phi", "solve_seed")
BLOCK_KEYS = ("A", "phi")


class ScenarioError(ValueError):
    def __init__(self, lineno: int | None, message: str):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True, eq=False)
class Scenario:
    width: int
    horizon: int
    spec: TheorySpec
    psi0: np.ndarray
    a0: np.ndarray | None = None
    gauge: np.ndarray | None = None
    phi: np.ndarray | None = None
    phi_source: str | None = None
    solve_seed: tuple[int, ...] | None = None

    def run(self) -> JointDiagram:
        if self.spec.gauge_rule is SRule.NONE:
            return run(self.spec, self.psi0, self.gauge, self.horizon)
        return run(self.spec, self.psi0, self.a0, self.horizon)

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        def same(a, b):
            if a is None or b is None:
                return a is b
            return np.array_equal(a, b)
        return (
            (self.width, self.horizon, self.spec, self.phi_source, self.solve_seed)
            == (other.width, other.horizon, other.spec, other.phi_source, other.solve_seed)
            and all(same(getattr(self, f), getattr(other, f)) for f in ("psi0", "a0", "gauge", "phi"))
        )

    __hash__ = None


def _cell_tokens(text: str, n: int, lineno: int, what: str) -> np.ndarray:
    tokens = text.split()
    if len(tokens) != n:
        raise ScenarioError(lineno, f"{what} expects {n} cell tokens, got {len(tokens)}")
    cells = []
    for tok in tokens:
        if len(tok) != 2 or any(ch not in "01" for ch in tok):
            raise ScenarioError(lineno, f"expected a two-bit cell token like '01', got {tok!r}")
        cells.append((int(tok[0]), int(tok[1])))
    return np.array(cells, dtype=np.uint8)


def _bit_tokens(text: str, n: int, lineno: int, what: str) -> np.ndarray:
    tokens = text.split()
    if len(tokens) != n:
        raise ScenarioError(lineno, f"{what} expects {n} bit tokens, got {len(tokens)}")
    for tok in tokens:
        if tok not in ("0", "1"):
            raise ScenarioError(lineno, f"expected a bit token from {{0,1}}, got {tok!r}")
    return np.array([int(t) for t in tokens], dtype=np.uint8)


def _int(value: str, lineno: int, key: str, minimum: int) -> int:
    if not re.fullmatch(r"\d+", value):
        raise ScenarioError(lineno, f"{key} expects a non-negative integer, got {value!r}")
    out = int(value)
    if out < minimum:
        raise ScenarioError(lineno, f"{key} must be >= {minimum}, got {out}")
    return out


def _split_lines(text: str):
    """Group lines into ``{key: (value, lineno, [(row_text, lineno), ...])}``."""
    entries: dict[str, tuple[str, int, list]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0] in " \t":
            if current is None or current not in BLOCK_KEYS or entries[current][0]:
                raise ScenarioError(lineno, "indented row outside an 'A=' or 'phi=' block")
            entries[current][2].append((line.strip(), lineno))
            continue
        if "=" not in line:
            raise ScenarioError(lineno, f"expected key=value, got {line.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ScenarioError(lineno, f"unknown key {key!r}; expected one of {', '.join(KEYS)}")
        if key in entries:
            raise ScenarioError(lineno, f"duplicate key {key!r} (first on line {entries[key][1]})")
        entries[key] = (value, lineno, [])
        current = key
    return entries


def parse_scenario(text: str) -> Scenario:
    entries = _split_lines(text)
    for key in ("N", "T", "rule", "psi0"):
        if key not in entries:
            raise ScenarioError(None, f"missing required key {key!r}")

    n = _int(entries["N"][0], entries["N"][1], "N", 2)
    t = _int(entries["T"][0], entries["T"][1], "T", 0)

    value, lineno, _ = entries["rule"]
    rules = {r.value: r for r in MatterRule}
    if value not in rules:
        raise ScenarioError(lineno, f"rule expects R or RA, got {value!r}")
    matter_rule = rules[value]

    s_rules = {r.value: r for r in SRule}
    if "S" in entries:
        value, lineno, _ = entries["S"]
        if value not in s_rules:
            raise ScenarioError(lineno, f"S expects one of {', '.join(s_rules)}, got {value!r}")
        gauge_rule = s_rules[value]
    elif matter_rule is MatterRule.FREE_R:
        gauge_rule = SRule.NONE
    else:
        raise ScenarioError(entries["rule"][1], "rule=RA needs an S= line")
    if matter_rule is MatterRule.FREE_R and gauge_rule is not SRule.NONE:
        raise ScenarioError(entries["S"][1], "rule=R only allows S=none")
    spec = TheorySpec(matter_rule, gauge_rule)

    value, lineno, _ = entries["psi0"]
    psi0 = _cell_tokens(value, n, lineno, "psi0")

    a0 = gauge = None
    if "a0" in entries:
        value, lineno, _ = entries["a0"]
        if spec == TheorySpec(MatterRule.GAUGED_R_A, SRule.NONE):
            raise ScenarioError(lineno, "S=none takes a full 'A=' gauge diagram, not a0")
        a0 = _cell_tokens(value, n, lineno, "a0")
        if matter_rule is MatterRule.FREE_R and a0.any():
            raise ScenarioError(lineno, "rule=R requires an all-zero gauge field")
    if "A" in entries:
        value, lineno, rows = entries["A"]
        if spec != TheorySpec(MatterRule.GAUGED_R_A, SRule.NONE):
            raise ScenarioError(lineno, "'A=' is only used with rule=RA and S=none")
        if value:
            raise ScenarioError(lineno, "'A=' takes its rows on the following indented lines")
        if len(rows) != t + 1:
            raise ScenarioError(lineno, f"'A=' expects T+1 = {t + 1} rows, got {len(rows)}")
        gauge = np.stack([_cell_tokens(r, n, ln, "gauge row") for r, ln in rows])
    if spec.gauge_rule is SRule.NONE and matter_rule is MatterRule.GAUGED_R_A and gauge is None:
        raise ScenarioError(entries["S"][1], "S=none needs an 'A=' block with the gauge diagram")
    if spec.gauge_rule is not SRule.NONE and a0 is None:
        a0 = np.zeros((n, 2), dtype=np.uint8)

    phi = phi_source = None
    if "phi" in entries:
        value, lineno, rows = entries["phi"]
        phi, phi_source = _parse_phi(value, rows, n, t, lineno)

    solve_seed = None
    if "solve_seed" in entries:
        value, lineno, _ = entries["solve_seed"]
        chains = len(parity_chains(n))
        if len(value) != chains or any(ch not in "01" for ch in value):
            raise ScenarioError(lineno, f"solve_seed expects {chains} bit(s) for width {n}, got {value!r}")
        solve_seed = tuple(int(ch) for ch in value)

    return Scenario(n, t, spec, psi0, a0, gauge, phi, phi_source, solve_seed)


def _parse_phi(value: str, rows, n: int, t: int, lineno: int):
    n_rows = t + 2
    if not value:
        if len(rows) != n_rows:
            raise ScenarioError(lineno, f"'phi=' expects T+2 = {n_rows} rows, got {len(rows)}")
        return np.stack([_bit_tokens(r, n, ln, "phi row") for r, ln in rows]), None
    if rows:
        raise ScenarioError(rows[0][1], "phi generator lines take no indented rows")
    kind, _, arg = value.partition(":")
    if kind == "const":
        if arg not in ("0", "1"):
            raise ScenarioError(lineno, f"phi=const expects 0 or 1, got {arg!r}")
        return phi_constant(n, n_rows, int(arg)), value
    if kind == "seed":
        return phi_random(n, n_rows, _int(arg, lineno, "phi=seed", 0)), value
    if kind == "site":
        m = re.fullmatch(r"(\d+),(\d+)", arg)
        if not m:
            raise ScenarioError(lineno, f"phi=site expects '<x>,<t>', got {arg!r}")
        x, tt = int(m.group(1)), int(m.group(2))
        if x >= n or tt >= n_rows:
            raise ScenarioError(lineno, f"phi=site {x},{tt} outside the {n_rows}x{n} phi field")
        return phi_site(n, n_rows, x, tt), value
    raise ScenarioError(lineno, f"phi expects rows or const:/seed:/site:, got {value!r}")


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def _cells(row) -> str:
    return " ".join(f"{int(a)}{int(b)}" for a, b in np.asarray(row))


def _bits(row) -> str:
    return " ".join(str(int(b)) for b in np.asarray(row))


def format_scenario(sc: Scenario) -> str:
    lines = [f"N={sc.width}", f"T={sc.horizon}", f"rule={sc.spec.matter_rule.value}",
             f"S={sc.spec.gauge_rule.value}", f"psi0={_cells(sc.psi0)}"]
    if sc.a0 is not None:
        lines.append(f"a0={_cells(sc.a0)}")
    if sc.gauge is not None:
        lines.append("A=")
        lines.extend("  " + _cells(r) for r in sc.gauge)
    if sc.phi is not None:
        if sc.phi_source is not None:
            lines.append(f"phi={sc.phi_source}")
        else:
            lines.append("phi=")
            lines.extend("  " + _bits(r) for r in sc.phi)
    if sc.solve_seed is not None:
        lines.append("solve_seed=" + "".join(map(str, sc.solve_seed)))
    return "\n".join(lines) + "\n"


# diagrams and fields

def format_diagram(diagram, kind: str | None = None) -> str:
    """Serialise a diagram; ``kind`` defaults to joint for a JointDiagram, else matter."""
    if isinstance(diagram, JointDiagram):
        kind = kind or "joint"
        if kind != "joint":
            raise ValueError("a JointDiagram serialises as kind=joint")
        psi, gauge = (np.asarray(p) for p in diagram)
        rows = [f"{_cells(p)} | {_cells(g)}" for p, g in zip(psi, gauge)]
        shape = psi.shape
    else:
        kind = kind or "matter"
        if kind not in ("matter", "gauge"):
            raise ValueError(f"unknown diagram kind {kind!r}")
        d = np.asarray(diagram)
        rows = [_cells(r) for r in d]
        shape = d.shape
    header = f"DIAG N={shape[1]} T={shape[0] - 1} kind={kind}"
    return "\n".join([header, *rows]) + "\n"


_DIAG_HEADER = re.compile(r"DIAG N=(\d+) T=(\d+) kind=(matter|gauge|joint)")
_FIELD_HEADER = re.compile(r"FIELD name=(\w+) N=(\d+) rows=(\d+)")


def _content_lines(text: str):
    return [(ln, line.strip()) for ln, line in enumerate(text.splitlines(), start=1)
            if line.strip() and not line.lstrip().startswith("#")]


def parse_diagram(text: str):
    """Inverse of :func:`format_diagram`; returns ``(kind, diagram)``."""
    lines = _content_lines(text)
    if not lines:
        raise ScenarioError(None, "empty diagram")
    ln, header = lines[0]
    m = _DIAG_HEADER.fullmatch(header)
    if not m:
        raise ScenarioError(ln, f"expected 'DIAG N=<n> T=<t> kind=matter|gauge|joint', got {header!r}")
    n, t, kind = int(m.group(1)), int(m.group(2)), m.group(3)
    if n < 2:
        raise ScenarioError(ln, "N must be >= 2")
    body = lines[1:]
    if len(body) != t + 1:
        raise ScenarioError(ln, f"expected T+1 = {t + 1} rows, got {len(body)}")
    if kind != "joint":
        return kind, np.stack([_cell_tokens(r, n, i, "row") for i, r in body])
    psi, gauge = [], []
    for i, r in body:
        if r.count("|") != 1:
            raise ScenarioError(i, "joint rows are '<matter tokens> | <gauge tokens>'")
        left, right = r.split("|")
        psi.append(_cell_tokens(left, n, i, "matter row"))
        gauge.append(_cell_tokens(right, n, i, "gauge row"))
    return kind, JointDiagram(np.stack(psi), np.stack(gauge))


def format_field(name: str, bits) -> str:
    bits = np.asarray(bits)
    header = f"FIELD name={name} N={bits.shape[1]} rows={bits.shape[0]}"
    return "\n".join([header, *(_bits(r) for r in bits)]) + "\n"


def parse_field(text: str):
    """Inverse of :func:`format_field`; returns ``(name, bits)``."""
    lines = _content_lines(text)
    if not lines:
        raise ScenarioError(None, "empty field")
    ln, header = lines[0]
    m = _FIELD_HEADER.fullmatch(header)
    if not m:
        raise ScenarioError(ln, f"expected 'FIELD name=<name> N=<n> rows=<k>', got {header!r}")
    name, n, rows = m.group(1), int(m.group(2)), int(m.group(3))
    body = lines[1:]
    if len(body) != rows:
        raise ScenarioError(ln, f"expected {rows} rows, got {len(body)}")
    if rows == 0:
        return name, np.zeros((0, n), dtype=np.uint8)
    return name, np.stack([_bit_tokens(r, n, i, "field row") for i, r in body])
