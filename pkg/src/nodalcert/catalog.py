"""Constructors for every effective invariant divisor class the certifier uses.

Exact coefficients are stored where closed formulas exist; where only an
inequality is known (deep boundary terms), the class carries a
"subtracts at least L" bound entry instead, which is the direction the
residual audit needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import binom, is_prime
from .picard import (
    DELTA_IRR,
    LAMBDA,
    PSI,
    CriticalVector,
    DivisorClass,
    SpaceParams,
    canonical_delta,
    _iter_delta_indices,
)


class PrimeInput(ValueError):
    """Raised when a Brill-Noether-type class is requested at a prime level."""


class ParityError(ValueError):
    """Raised when a parity precondition (g or g+n even/odd) fails."""


class DegenerateInput(ValueError):
    """Raised for parameter ranges the construction does not cover."""


class RKMismatch(ValueError):
    """Raised when supplied (r, k) do not solve the defining equation for (g, n)."""


@dataclass(frozen=True)
class WParams:
    """Weight data for the Weierstrass-type class: m points, g = k*m + r."""

    m: int
    k: int
    r: int


@dataclass(frozen=True)
class RKParams:
    """The unique (r, k) with 2n (g odd) or 2n-1 (g even) = (2r+1)(g-1) - 2k."""

    r: int
    k: int


def canonical_K(params: SpaceParams) -> DivisorClass:
    """Pullback of the canonical class of the nodal-curve space.

    13*lambda + psi - 2*(total boundary) - delta[1;0,0] - delta[0;1,0],
    expanded over the basis (the total boundary is not itself a generator).
    """
    exact = {LAMBDA: Fraction(13), PSI: Fraction(1), DELTA_IRR: Fraction(-2)}
    for i, a, b in _iter_delta_indices(params):
        gen = canonical_delta(params, i, a, b)
        exact.setdefault(gen, Fraction(-2))
    exact[canonical_delta(params, 1, 0, 0)] = Fraction(-3)
    exact[canonical_delta(params, 0, 1, 0)] = Fraction(-3)
    return DivisorClass(params, exact)


def class_B(params: SpaceParams) -> DivisorClass:
    """Brill-Noether divisor pulled back from the unmarked space (g+1 composite)."""
    g = params.g
    if is_prime(g + 1):
        raise PrimeInput(f"g+1 = {g + 1} is prime; no Brill-Noether divisor at g = {g}")
    exact = {LAMBDA: Fraction(g + 3), DELTA_IRR: Fraction(-(g + 1), 6)}
    for i, a, b in _iter_delta_indices(params):
        if i == 0:
            continue
        exact.setdefault(canonical_delta(params, i, a, b), Fraction(-i * (g - i)))
    return DivisorClass(params, exact)


def class_D(params: SpaceParams) -> DivisorClass:
    """Brill-Noether divisor at genus g+n pulled back along the node-gluing map
    (g+n+1 composite)."""
    g, n = params.g, params.n
    if is_prime(g + n + 1):
        raise PrimeInput(f"g+n+1 = {g + n + 1} is prime; no glued Brill-Noether divisor")
    d0 = Fraction(g + n + 1, 6)
    exact = {LAMBDA: Fraction(g + n + 3), PSI: d0, DELTA_IRR: -d0}
    for i, a, b in _iter_delta_indices(params):
        gen = canonical_delta(params, i, a, b)
        if b != 0:
            exact.setdefault(gen, -d0)
        else:
            exact.setdefault(gen, Fraction(-(i + a) * (g + n - i - a)))
    return DivisorClass(params, exact)


def class_E(params: SpaceParams) -> DivisorClass:
    """Gieseker-Petri divisor pulled back from the unmarked space (g even)."""
    g = params.g
    if g % 2 != 0:
        raise ParityError(f"the Gieseker-Petri class needs g even, got g = {g}")
    d = g // 2 + 1
    e0 = Fraction(d * (d - 1))
    e1 = Fraction((g - 1) * (3 * g // 2 + 1))
    exact = {LAMBDA: Fraction(6 * d * d + d - 6), DELTA_IRR: -e0}
    bounds: dict = {}
    for i, a, b in _iter_delta_indices(params):
        if i == 0:
            continue
        gen = canonical_delta(params, i, a, b)
        if i == 1:
            exact.setdefault(gen, -e1)
        elif gen not in bounds:
            # Deeper coefficients are only known to be increasing past e1.
            bounds[gen] = e1
    return DivisorClass(params, exact, bounds)


def class_F(params: SpaceParams) -> DivisorClass:
    """Gieseker-Petri divisor at genus g+n pulled back along the gluing map
    (g+n even)."""
    g, n = params.g, params.n
    gn = g + n
    if gn % 2 != 0:
        raise ParityError(f"the glued Gieseker-Petri class needs g+n even, got {gn}")
    h = gn // 2
    f0 = Fraction((h + 1) * h)
    f1 = Fraction((gn - 1) * (3 * h + 1))
    exact = {LAMBDA: Fraction(6 * (h + 1) ** 2 + h - 5), PSI: f0, DELTA_IRR: -f0}
    bounds: dict = {}
    for i, a, b in _iter_delta_indices(params):
        gen = canonical_delta(params, i, a, b)
        if b != 0:
            exact.setdefault(gen, -f0)
        elif i + a <= 1:
            exact.setdefault(gen, -f1)
        elif gen not in bounds and gen not in exact:
            bounds[gen] = f1
    return DivisorClass(params, exact, bounds)


def w_params(params: SpaceParams) -> WParams:
    """m = min(2n, g) marked Weierstrass points and the division g = k*m + r."""
    m = min(2 * params.n, params.g)
    if m < 2:
        raise DegenerateInput(f"Weierstrass-type class needs min(2n, g) >= 2, got {m}")
    return WParams(m=m, k=params.g // m, r=params.g % m)


def w_coefficients(params: SpaceParams) -> tuple[Fraction, Fraction, Fraction]:
    """(w_lambda, w_psi, w_2) of the Weierstrass-type class, all positive."""
    wp = w_params(params)
    n2 = 2 * params.n
    m, k, r = wp.m, wp.k, wp.r
    wlam = Fraction(binom(n2, r) * binom(n2 - r, m - r))
    wpsi = (
        Fraction(binom(n2 - 1, r - 1) * binom(n2 - r, m - r) * (k + 1) * (k + 2), 2)
        + Fraction(binom(n2 - 1, r) * binom(n2 - r - 1, m - r - 1) * k * (k + 1), 2)
    )
    w2 = (
        2 * wpsi
        + binom(n2 - 2, r - 2) * binom(n2 - r, m - r) * (k + 1) ** 2
        + 2 * binom(n2 - 2, r - 1) * binom(n2 - r - 1, m - r - 1) * k * (k + 1)
        + binom(n2 - 2, r) * binom(n2 - r - 2, m - r - 2) * k * k
    )
    return wlam, wpsi, Fraction(w2)


def class_W(params: SpaceParams) -> DivisorClass:
    """Summed Weierstrass-type class over all weighted point selections.

    Exact on the critical generators; pair classes with |S| >= 3 subtract at
    least |S| * w_psi, and positive-genus boundary terms subtract at least 0.
    """
    wlam, wpsi, w2 = w_coefficients(params)
    exact = {
        LAMBDA: -wlam,
        PSI: wpsi,
        canonical_delta(params, 0, 1, 0): -w2,
    }
    d002 = canonical_delta(params, 0, 0, 2)
    exact.setdefault(d002, -w2)
    bounds: dict = {}
    for i, a, b in _iter_delta_indices(params):
        gen = canonical_delta(params, i, a, b)
        if gen in exact or gen in bounds:
            continue
        bounds[gen] = (2 * a + b) * wpsi if i == 0 else Fraction(0)
    return DivisorClass(params, exact, bounds)


def solve_rk(params: SpaceParams) -> RKParams | None:
    """The unique (r >= 1, 0 <= k <= g-2) solving the point-count equation for
    the minimal-resolution classes, or None when no admissible pair exists."""
    g = params.g
    if g < 3:
        return None
    target = 2 * params.n if g % 2 == 1 else 2 * params.n - 1
    found = None
    r = 1
    while (2 * r + 1) * (g - 1) - 2 * (g - 2) <= target:
        residue = (2 * r + 1) * (g - 1) - target
        if residue % 2 == 0:
            k = residue // 2
            if 0 <= k <= g - 2:
                if found is not None:
                    raise AssertionError("(r, k) solution is not unique")
                found = RKParams(r=r, k=k)
        r += 1
    return found


def _mrc_coefficients(g: int, r: int, k: int) -> tuple[Fraction, Fraction, Fraction]:
    """(a_lambda, a_psi, a_irr) of the minimal-resolution divisor at genus g."""
    alam = Fraction(
        (g - 1) * (g - 2) * (6 * r * r + 6 * r + r)
        + k * (24 * r + 10 * k + 10 - 10 * g - 12 * r * g),
        g - 2,
    )
    apsi = Fraction(r * g + g - k - r - 1)
    airr = Fraction(
        binom(r + 1, 2) * (g - 1) * (g - 2) + k * (k + 1 + 2 * r - r * g - g),
        g - 2,
    )
    return alam, apsi, airr


def mrc_boundary(g: int, r: int, k: int, s: int) -> Fraction:
    """a_{0,s} = C(s+1, 2)(g-1) + s(rg - r - k); deeper terms are only >= this."""
    return Fraction(binom(s + 1, 2) * (g - 1) + s * (r * g - r - k))


def _check_rk(params: SpaceParams, rk: RKParams) -> None:
    expected = solve_rk(params)
    if expected != rk:
        raise RKMismatch(f"(r,k) = ({rk.r},{rk.k}) does not solve the equation for {params}")


def class_U(params: SpaceParams, rk: RKParams) -> DivisorClass:
    """Minimal-resolution divisor class, g odd (already invariant)."""
    if params.g % 2 != 1:
        raise ParityError(f"U needs g odd, got g = {params.g}")
    _check_rk(params, rk)
    g, r, k = params.g, rk.r, rk.k
    ulam, upsi, uirr = _mrc_coefficients(g, r, k)
    exact = {LAMBDA: -ulam, PSI: upsi, DELTA_IRR: uirr}
    bounds: dict = {}
    for i, a, b in _iter_delta_indices(params):
        gen = canonical_delta(params, i, a, b)
        u0s = mrc_boundary(g, r, k, 2 * a + b)
        if i == 0:
            exact.setdefault(gen, -u0s)
        elif gen not in bounds and gen not in exact:
            bounds[gen] = u0s
    return DivisorClass(params, exact, bounds)


def class_V(params: SpaceParams, rk: RKParams) -> DivisorClass:
    """Summed forgetful pullbacks of the minimal-resolution divisor, g even."""
    if params.g % 2 != 0:
        raise ParityError(f"V needs g even, got g = {params.g}")
    _check_rk(params, rk)
    g, n, r, k = params.g, params.n, rk.r, rk.k
    alam, apsi, airr = _mrc_coefficients(g, r, k)
    vlam = 2 * n * alam
    vpsi = (2 * n - 1) * apsi
    virr = 2 * n * airr
    v02 = 2 * apsi + (2 * n - 2) * Fraction(3 * g - 3 + 2 * r * g - 2 * r - 2 * k)
    exact = {
        LAMBDA: -vlam,
        PSI: vpsi,
        DELTA_IRR: virr,
        canonical_delta(params, 0, 1, 0): -v02,
        canonical_delta(params, 0, 0, 2): -v02,
    }
    bounds: dict = {}
    for i, a, b in _iter_delta_indices(params):
        gen = canonical_delta(params, i, a, b)
        if gen not in exact and gen not in bounds:
            bounds[gen] = v02
    return DivisorClass(params, exact, bounds)


def forgetful_pullback_sum(critical: CriticalVector, source_points: int) -> CriticalVector:
    """Critical vector of the sum over all single-point forgetful pullbacks
    from a (P+1)-pointed space to the P-pointed source, P = source_points.

    Per-map pullback rules: lambda and the irreducible boundary pull back to
    themselves; a cotangent class psi_j picks up -delta[0,{i,j}] for the
    forgotten label i; a pair class delta[0,S] gains delta[0,S+{i}].  Summing
    over the P+1 maps: lambda and delta_irr replicate P+1 times, each psi_j
    survives P times, and each |S| = 2 class appears P-1 times directly plus
    a -2x correction from the two labels of the pair inside the psi total.
    """
    if source_points < 2:
        raise ValueError("source space needs at least 2 marked points")
    if critical.d010 != critical.d002:
        raise ValueError("pullback-sum rule needs equal |S| = 2 entries")
    p = source_points
    pair = (p - 1) * critical.d010 - 2 * critical.psi
    return CriticalVector(
        (p + 1) * critical.lam,
        p * critical.psi,
        (p + 1) * critical.dirr,
        pair,
        pair,
    )


@dataclass(frozen=True)
class SpecialEntry:
    """A literature divisor used at one of the nine hand-treated cells.

    ``critical`` is scale-free (the solver multiplies by a free variable).
    ``audit_bounds`` maps component genus i to "subtracts at least this" for
    delta[i;a,b]; generators not listed default to bound 0, reflecting the
    truncated printed classes.
    """

    name: str
    applicable: frozenset
    critical: CriticalVector
    audit_bounds: dict = field(default_factory=dict)
    source_note: str = ""

    def as_class(self, params: SpaceParams) -> DivisorClass:
        if (params.g, params.n) not in self.applicable:
            raise DegenerateInput(f"{self.name} does not apply at ({params.g},{params.n})")
        exact = {
            LAMBDA: self.critical.lam,
            PSI: self.critical.psi,
            DELTA_IRR: self.critical.dirr,
            canonical_delta(params, 0, 1, 0): self.critical.d010,
        }
        d002 = canonical_delta(params, 0, 0, 2)
        exact.setdefault(d002, self.critical.d002)
        bounds: dict = {}
        for i, a, b in _iter_delta_indices(params):
            gen = canonical_delta(params, i, a, b)
            if gen not in exact and gen not in bounds:
                bounds[gen] = Fraction(self.audit_bounds.get(i, 0))
        return DivisorClass(params, exact, bounds)


def special_registry() -> list[SpecialEntry]:
    """The nine hand-treated cells' special divisor classes."""
    cv = CriticalVector.of
    return [
        SpecialEntry(
            "Z10",
            frozenset({(10, 6), (10, 7)}),
            cv(7, 0, -1, 0, 0),
            source_note="slope-7 divisor at genus 10, pulled back from the unmarked space",
        ),
        SpecialEntry(
            "Z21",
            frozenset({(21, 2)}),
            cv(2459, 0, -377, 0, 0),
            source_note="slope 2459/377 divisor at genus 21 (cited under a genus-10 symbol)",
        ),
        SpecialEntry(
            "Z16",
            frozenset({(16, 5)}),
            cv(407, 0, -61, 0, 0),
            source_note="slope 407/61 divisor at genus 16 (cited under a genus-10 symbol)",
        ),
        SpecialEntry(
            "D12",
            frozenset({(12, 6)}),
            cv(13245, 0, -1926, 0, 0),
            audit_bounds={1: Fraction(9867)},
            source_note="genus-12 divisor 13245*lambda - 1926*delta_irr - 9867*delta_1 - ...",
        ),
        SpecialEntry(
            "L224",
            frozenset({(22, 2)}),
            cv(13, 1, -2, Fraction(-10, 3), Fraction(-10, 3)),
            source_note="summed forgetful pullbacks of the glued genus-23 Brill-Noether class",
        ),
        SpecialEntry(
            "L226",
            frozenset({(22, 3)}),
            cv(13, Fraction(2, 3), -2, Fraction(-56, 30), Fraction(-56, 30)),
            source_note="summed forgetful pullbacks of the glued genus-23 Brill-Noether class",
        ),
        SpecialEntry(
            "NF14",
            frozenset({(14, 5)}),
            cv(35, 54, -10, -173, -173),
            source_note=(
                "genus-14 special linear-series divisor; the cited subscript names 12 "
                "points while the ambient space here carries 10"
            ),
        ),
        SpecialEntry(
            "LIN18",
            frozenset({(18, 5)}),
            forgetful_pullback_sum(cv(290, 24, -45, -82, -82), 9),
            source_note="9-pointed genus-18 linear-series divisor summed over forgetful maps",
        ),
    ]


SPECIALS = {entry.name: entry for entry in special_registry()}
