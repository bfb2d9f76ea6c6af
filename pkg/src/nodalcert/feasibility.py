"""Exact rational linear feasibility over nonnegative variables.

Fourier-Motzkin elimination with strict/non-strict rows, witness extraction
by back-substitution, and infeasibility traces that recombine to their
contradiction.  Also houses the closed-form cutoff polynomials used as
independent oracles for the upper node bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import binom
from .catalog import w_coefficients, mrc_boundary
from .picard import SpaceParams


@dataclass(frozen=True)
class Inequality:
    """sum(coefficients[v] * v) <= bound, or < bound when strict."""

    coefficients: dict
    bound: Fraction
    strict: bool = False
    label: str = ""

    def evaluate(self, assignment: dict) -> Fraction:
        return sum(
            (c * assignment[v] for v, c in self.coefficients.items()), Fraction(0)
        )

    def satisfied_by(self, assignment: dict) -> bool:
        lhs = self.evaluate(assignment)
        return lhs < self.bound if self.strict else lhs <= self.bound


@dataclass
class InequalitySystem:
    """Declared variables (nonnegative unless flagged), plus rows.

    ``provenance`` records, per row, which residual generator (or other
    source) produced it.
    """

    variables: list
    rows: list
    nonnegative: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        declared = set(self.variables)
        for row in self.rows:
            missing = set(row.coefficients) - declared
            if missing:
                raise ValueError(f"row references undeclared variables {missing}")
        for v in self.variables:
            self.nonnegative.setdefault(v, True)


@dataclass(frozen=True)
class Witness:
    """An exact satisfying assignment; re-checkable by substitution."""

    assignment: dict

    def check(self, system: "InequalitySystem") -> bool:
        for v in system.variables:
            if system.nonnegative[v] and self.assignment[v] < 0:
                return False
        return all(row.satisfied_by(self.assignment) for row in _all_rows(system))


@dataclass(frozen=True)
class InfeasibilityTrace:
    """Nonnegative multipliers on the original rows whose combination is a
    contradictory constant row (0 <= negative, or 0 < 0)."""

    multipliers: dict
    bound: Fraction
    strict: bool
    elimination_order: tuple

    def recombines(self, system: "InequalitySystem") -> bool:
        rows = _all_rows(system)
        coeffs: dict = {}
        bound = Fraction(0)
        strict = False
        for idx, mult in self.multipliers.items():
            if mult < 0:
                return False
            row = rows[idx]
            for v, c in row.coefficients.items():
                coeffs[v] = coeffs.get(v, Fraction(0)) + mult * c
            bound += mult * row.bound
            strict = strict or (row.strict and mult > 0)
        if any(c != 0 for c in coeffs.values()):
            return False
        if bound != self.bound or strict != self.strict:
            return False
        # The combined row must be genuinely contradictory.
        return bound < 0 or (strict and bound == 0)


def _all_rows(system: InequalitySystem) -> list:
    """Declared rows followed by the materialized nonnegativity rows."""
    rows = list(system.rows)
    for v in system.variables:
        if system.nonnegative[v]:
            rows.append(
                Inequality({v: Fraction(-1)}, Fraction(0), label=f"nonneg({v})")
            )
    return rows


@dataclass(frozen=True)
class _Row:
    coefficients: dict
    bound: Fraction
    strict: bool
    mult: dict  # nonnegative multipliers over the original row list


def _lift(rows: list) -> list:
    return [
        _Row(
            {v: c for v, c in r.coefficients.items() if c != 0},
            r.bound,
            r.strict,
            {i: Fraction(1)},
        )
        for i, r in enumerate(rows)
    ]


def _combine(lower: _Row, upper: _Row, var) -> _Row:
    """Positive-multiple combination of a lower and an upper bound on var."""
    cl = lower.coefficients[var]  # < 0
    cu = upper.coefficients[var]  # > 0
    ml, mu = -Fraction(1) / cl, Fraction(1) / cu
    coeffs: dict = {}
    for v, c in lower.coefficients.items():
        if v != var:
            coeffs[v] = ml * c
    for v, c in upper.coefficients.items():
        if v != var:
            coeffs[v] = coeffs.get(v, Fraction(0)) + mu * c
    coeffs = {v: c for v, c in coeffs.items() if c != 0}
    mult = {i: ml * m for i, m in lower.mult.items()}
    for i, m in upper.mult.items():
        mult[i] = mult.get(i, Fraction(0)) + mu * m
    return _Row(coeffs, ml * lower.bound + mu * upper.bound, lower.strict or upper.strict, mult)


def _eliminate_rows(rows: list, var) -> list:
    uppers = [r for r in rows if r.coefficients.get(var, 0) > 0]
    lowers = [r for r in rows if r.coefficients.get(var, 0) < 0]
    kept = [r for r in rows if r.coefficients.get(var, 0) == 0]
    for lo in lowers:
        for up in uppers:
            kept.append(_combine(lo, up, var))
    return kept


def eliminate(system: InequalitySystem, var) -> InequalitySystem:
    """One Fourier-Motzkin step; the result no longer mentions ``var``.

    Resulting rows are strict iff either parent was strict.  Nonnegativity of
    ``var`` participates as an ordinary row.
    """
    if var not in system.variables:
        raise ValueError(f"variable {var!r} not declared")
    rows = _eliminate_rows(_lift(_all_rows(system)), var)
    remaining = [v for v in system.variables if v != var]
    return InequalitySystem(
        remaining,
        [Inequality(r.coefficients, r.bound, r.strict) for r in rows],
        # Nonnegativity already folded into the surviving rows.
        {v: False for v in remaining},
    )


def _pick_value(rows: list, var, partial: dict):
    """Deterministic interval selection for one variable during back-substitution.

    Midpoint of a bounded interval; lower+1 / upper-1 when one-sided; 0 when
    unconstrained.  Returns None if the interval is empty (internal error
    upstream: elimination should have caught it).
    """
    lo = hi = None
    lo_strict = hi_strict = False
    for row in rows:
        c = row.coefficients.get(var, Fraction(0))
        if c == 0:
            continue
        rest = sum(
            (cc * partial[v] for v, cc in row.coefficients.items() if v != var),
            Fraction(0),
        )
        limit = (row.bound - rest) / c
        if c > 0:
            if hi is None or limit < hi or (limit == hi and row.strict):
                hi, hi_strict = limit, row.strict
        else:
            if lo is None or limit > lo or (limit == lo and row.strict):
                lo, lo_strict = limit, row.strict
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    if lo > hi or (lo == hi and (lo_strict or hi_strict)):
        return None
    return (lo + hi) / 2


def solve(system: InequalitySystem):
    """Full elimination in declared variable order, then back-substitution.

    Returns a substitution-verified :class:`Witness`, or an
    :class:`InfeasibilityTrace` that recombines to its contradiction.
    """
    if len(system.variables) > 8:
        raise ValueError("solver is sized for the catalog's small systems")
    base_rows = _all_rows(system)
    stages = [_lift(base_rows)]
    for var in system.variables:
        stages.append(_eliminate_rows(stages[-1], var))
    for row in stages[-1]:
        violated = row.bound < 0 or (row.strict and row.bound == 0)
        if violated:
            return InfeasibilityTrace(
                multipliers=row.mult,
                bound=row.bound,
                strict=row.strict,
                elimination_order=tuple(system.variables),
            )
    assignment: dict = {}
    for idx in range(len(system.variables) - 1, -1, -1):
        var = system.variables[idx]
        value = _pick_value(stages[idx], var, assignment)
        if value is None:
            raise AssertionError(f"empty interval for {var!r} after feasible elimination")
        assignment[var] = value
    witness = Witness({v: assignment[v] for v in system.variables})
    if not witness.check(system):
        raise AssertionError("witness failed substitution check")
    return witness


# ---------------------------------------------------------------------------
# Closed-form cutoffs (independent oracles for the upper node bound)


def _glue_d0_d1(g: int, n: int) -> tuple[Fraction, Fraction]:
    return Fraction(g + n + 1, 6), Fraction(g + n - 1)


def cutoff_pg(g: int, n: int) -> Fraction:
    """Solvability margin of the reduced (y, z) system on the many-node side.

    Computed from the defining coefficient combination, normalized so it is a
    quadratic polynomial in n.  Positive iff the three-row subsystem is
    solvable.
    """
    if g < 5 or 2 * n < g:
        raise ValueError("cutoff_pg needs g >= 5 and 2n >= g")
    d0, d1 = _glue_d0_d1(g, n)
    _, wpsi, w2 = w_coefficients(SpaceParams(g, n))
    value = 6 * (2 * n - 1) * ((d1 - 3 * d0) * (w2 - wpsi) - (d1 * wpsi - d0 * w2))
    return value / binom(2 * n - 1, g - 1)


def cutoff_pg_polynomial(g: int, n: int) -> Fraction:
    """The closed form the definition evaluates to: -2n^2 + (2g-5)n + 4g^2 - 11g + 9.

    The printed expansion in the source carries constant term g^2 - 11g + 9,
    inconsistent with its own discriminant and conclusion; see
    :func:`cutoff_pg_discrepancy_note`.
    """
    return Fraction(-2 * n * n + (2 * g - 5) * n + 4 * g * g - 11 * g + 9)


def cutoff_pg_printed(g: int, n: int) -> Fraction:
    """The expansion as printed in the source (constant term g^2 - 11g + 9)."""
    return Fraction(-2 * n * n + (2 * g - 5) * n + g * g - 11 * g + 9)


def cutoff_pg_discrepancy_note(g: int, n: int) -> str | None:
    """Report when the printed expansion disagrees with the definition."""
    exact = cutoff_pg(g, n)
    printed = cutoff_pg_printed(g, n)
    if exact == printed:
        return None
    return (
        f"printed cutoff expansion gives {printed} at (g={g}, n={n}) but the "
        f"defining combination evaluates to {exact} "
        "(constant term 4g^2-11g+9, matching the printed discriminant and the "
        "2g-4 conclusion); both are recorded, neither is guessed to be intended"
    )


def cutoff_pgrk(g: int, n: int, r: int, k: int) -> Fraction:
    """Solvability margin of the reduced system with the minimal-resolution
    class in place of the Weierstrass-type class (g odd)."""
    if g % 2 != 1:
        raise ValueError("cutoff_pgrk needs g odd")
    d0, d1 = _glue_d0_d1(g, n)
    upsi = Fraction(r * g + g - k - r - 1)
    u02 = mrc_boundary(g, r, k, 2)
    return 6 * ((d1 - 3 * d0) * (u02 - upsi) - (d1 * upsi - d0 * u02))


def cutoff_pgrk_polynomial(g: int, n: int, r: int, k: int) -> Fraction:
    """The printed expanded polynomial for :func:`cutoff_pgrk`."""
    return Fraction(
        9 - 12 * g + 3 * g * g + k + g * k - 3 * n + 3 * g * n + k * n
        + r - g * g * r + n * r - g * n * r
    )


# Genera where the upper bound attains 7(g-1)/2 - 3 with equality; transcribed
# from the main table (the scanning certifier is the source of truth, this
# closed form is a cross-check).
_NMAX_EQUALITY_GENERA = frozenset({7, 9, 11, 15, 19, 23})


def nmax_formula(g: int) -> int:
    """Closed-form upper node bound: largest integer below (or, for the marked
    genera, equal to) 7(g-1)/2 - 3."""
    if g < 5:
        raise ValueError("nmax_formula needs g >= 5")
    t = Fraction(7 * (g - 1), 2) - 3
    if t.denominator == 1:
        return t.numerator if g in _NMAX_EQUALITY_GENERA else t.numerator - 1
    return t.numerator // t.denominator
