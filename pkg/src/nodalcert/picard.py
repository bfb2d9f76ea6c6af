"""The invariant divisor-class space on a genus-g curve with n marked pairs.

Generators are the Hodge class, the total cotangent class, the irreducible
boundary class, and the orbit-summed boundary classes delta[i;a,b] (a node of
component genus i, with a full pairs and b single points on the split-off
component).  Divisor classes are sparse exact coefficient vectors over these
generators, optionally extended by "at least this much is subtracted" entries
for generators whose exact coefficient is only bounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .arith import format_rational

_KIND_LAMBDA = 0
_KIND_PSI = 1
_KIND_DELTA_IRR = 2
_KIND_DELTA = 3

_KIND_NAMES = {_KIND_LAMBDA: "lambda", _KIND_PSI: "psi", _KIND_DELTA_IRR: "delta_irr"}


@dataclass(frozen=True, order=True)
class SpaceParams:
    """Genus g and node count n; the ambient space carries 2n marked points."""

    g: int
    n: int

    def __post_init__(self) -> None:
        if self.g < 2:
            raise ValueError(f"genus must be >= 2, got {self.g}")
        if self.n < 1:
            raise ValueError(f"node count must be >= 1, got {self.n}")


@dataclass(frozen=True, order=True)
class Generator:
    """One basis element.  Use the module constants / :func:`delta` to build."""

    kind: int
    i: int = -1
    a: int = -1
    b: int = -1

    def encode(self) -> str:
        if self.kind == _KIND_DELTA:
            return f"delta[{self.i};{self.a},{self.b}]"
        return _KIND_NAMES[self.kind]

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"Generator({self.encode()})"


LAMBDA = Generator(_KIND_LAMBDA)
PSI = Generator(_KIND_PSI)
DELTA_IRR = Generator(_KIND_DELTA_IRR)


def _delta_index_valid(params: SpaceParams, i: int, a: int, b: int) -> bool:
    # Index ranges reconstructed from the pair structure: 0 <= i <= g/2,
    # 0 <= a <= n, 0 <= b <= 2n - 2a, and |S| >= 2 when i = 0 (smaller S
    # gives the zero divisor).
    if not (0 <= i <= params.g // 2):
        return False
    if not (0 <= a <= params.n):
        return False
    if not (0 <= b <= 2 * params.n - 2 * a):
        return False
    if i == 0 and 2 * a + b < 2:
        return False
    return True


def canonical_delta(params: SpaceParams, i: int, a: int, b: int) -> Generator:
    """Validated, canonicalized boundary generator delta[i;a,b].

    For g even and i = g/2 the index and its complementary index
    (n-a-b, b) name the same class; the lexicographically smaller pair is
    the canonical representative (when the complement is a valid index).
    """
    if not _delta_index_valid(params, i, a, b):
        raise ValueError(f"delta index out of range for {params}: ({i},{a},{b})")
    if params.g % 2 == 0 and i == params.g // 2:
        ca = params.n - a - b
        if ca >= 0 and (ca, b) < (a, b) and _delta_index_valid(params, i, ca, b):
            a = ca
    return Generator(_KIND_DELTA, i, a, b)


def delta(params: SpaceParams, i: int, a: int, b: int) -> Generator:
    """Alias for :func:`canonical_delta`."""
    return canonical_delta(params, i, a, b)


def _iter_delta_indices(params: SpaceParams) -> Iterator[tuple[int, int, int]]:
    for i in range(params.g // 2 + 1):
        for a in range(params.n + 1):
            for b in range(2 * params.n - 2 * a + 1):
                if i == 0 and 2 * a + b < 2:
                    continue
                yield (i, a, b)


def enumerate_generators(params: SpaceParams) -> list[Generator]:
    """All generators, in the fixed total order: lambda, psi, delta_irr, then
    delta[i;a,b] lexicographically in (i, a, b), canonical forms only."""
    gens = [LAMBDA, PSI, DELTA_IRR]
    seen: set[Generator] = set()
    for i, a, b in _iter_delta_indices(params):
        gen = canonical_delta(params, i, a, b)
        if gen not in seen:
            seen.add(gen)
            gens.append(gen)
    return gens


def parse_generator(params: SpaceParams, text: str) -> Generator:
    """Inverse of :meth:`Generator.encode`."""
    text = text.strip()
    for kind, name in _KIND_NAMES.items():
        if text == name:
            return Generator(kind)
    if text.startswith("delta[") and text.endswith("]"):
        head, _, tail = text[6:-1].partition(";")
        a_s, _, b_s = tail.partition(",")
        return canonical_delta(params, int(head), int(a_s), int(b_s))
    raise ValueError(f"unrecognized generator {text!r}")


@dataclass(frozen=True)
class Coeff:
    """A known coefficient: exact value, or a proven cap (coefficient <= value)."""

    value: Fraction
    exact: bool


class DivisorClass:
    """Sparse class over the generator basis.

    ``exact`` maps generators to exact signed coefficients.  ``lower_bounds``
    maps a generator to L meaning "the class subtracts at least L times this
    generator", i.e. the signed coefficient is <= -L.  That is the one bound
    direction the residual audit ever needs: subtracting a nonnegative
    multiple of such a class adds at least that much back to the residual.
    """

    def __init__(
        self,
        params: SpaceParams,
        exact: dict[Generator, Fraction] | None = None,
        lower_bounds: dict[Generator, Fraction] | None = None,
    ) -> None:
        self.params = params
        self.exact: dict[Generator, Fraction] = {
            g: Fraction(v) for g, v in (exact or {}).items() if v != 0
        }
        self.lower_bounds: dict[Generator, Fraction] = {
            g: Fraction(v) for g, v in (lower_bounds or {}).items()
        }
        overlap = self.exact.keys() & self.lower_bounds.keys()
        if overlap:
            raise ValueError(f"generator in both exact and lower_bounds: {overlap}")

    def coeff(self, gen: Generator) -> Coeff:
        """Coefficient of one generator; absent generators are exactly 0."""
        if gen in self.exact:
            return Coeff(self.exact[gen], True)
        if gen in self.lower_bounds:
            return Coeff(-self.lower_bounds[gen], False)
        return Coeff(Fraction(0), True)

    def exact_coeff(self, gen: Generator) -> Fraction:
        c = self.coeff(gen)
        if not c.exact:
            raise ValueError(f"coefficient of {gen.encode()} is not exactly known")
        return c.value

    def add(self, other: "DivisorClass") -> "DivisorClass":
        """Exact sum; any generator with a bound on either side stays a bound
        (exact entries convert to exact subtracted amounts, bounds add)."""
        if other.params != self.params:
            raise ValueError("cannot add classes on different spaces")
        exact = dict(self.exact)
        bounds = dict(self.lower_bounds)
        for gen, v in other.exact.items():
            if gen in bounds:
                bounds[gen] = bounds[gen] - v
            else:
                exact[gen] = exact.get(gen, Fraction(0)) + v
        for gen, lb in other.lower_bounds.items():
            if gen in bounds:
                bounds[gen] = bounds[gen] + lb
            else:
                bounds[gen] = lb - exact.pop(gen, Fraction(0))
        return DivisorClass(self.params, exact, bounds)

    def scale(self, c: Fraction | int) -> "DivisorClass":
        c = Fraction(c)
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return DivisorClass(
            self.params,
            {g: c * v for g, v in self.exact.items()},
            {g: c * v for g, v in self.lower_bounds.items()},
        )

    def critical(self) -> "CriticalVector":
        return CriticalVector.from_class(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return (
            self.params == other.params
            and self.exact == other.exact
            and self.lower_bounds == other.lower_bounds
        )

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        parts = [f"{format_rational(v)}*{g.encode()}" for g, v in sorted(self.exact.items())]
        return f"DivisorClass({self.params.g},{self.params.n}: {' + '.join(parts)})"


def critical_generators(params: SpaceParams) -> tuple[Generator, ...]:
    """The five generators whose residual inequalities are the binding ones.

    delta[0;0,2] is kept even when n = 1 leaves it without a set-theoretic
    realization; its formula-level inequality is retained (conservative)."""
    return (
        LAMBDA,
        PSI,
        DELTA_IRR,
        Generator(_KIND_DELTA, 0, 1, 0),
        Generator(_KIND_DELTA, 0, 0, 2),
    )


@dataclass(frozen=True)
class CriticalVector:
    """Projection of a class onto (lambda, psi, delta_irr, delta[0;1,0], delta[0;0,2])."""

    lam: Fraction
    psi: Fraction
    dirr: Fraction
    d010: Fraction
    d002: Fraction

    @classmethod
    def of(cls, lam, psi, dirr, d010, d002) -> "CriticalVector":
        return cls(Fraction(lam), Fraction(psi), Fraction(dirr), Fraction(d010), Fraction(d002))

    @classmethod
    def from_class(cls, dc: DivisorClass) -> "CriticalVector":
        return cls(*(dc.exact_coeff(g) for g in critical_generators(dc.params)))

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction, Fraction]:
        return (self.lam, self.psi, self.dirr, self.d010, self.d002)

    def encode(self) -> list[str]:
        return [format_rational(v) for v in self.as_tuple()]

    def scale(self, c: Fraction | int) -> "CriticalVector":
        c = Fraction(c)
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return CriticalVector(*(c * v for v in self.as_tuple()))


def omega_total(params: SpaceParams) -> DivisorClass:
    """The summed log-cotangent class: psi minus |S| times each delta[0;a,b].

    Only used by the base-change cross-check that re-derives the doubled psi
    summand in the pair-class coefficient of the Weierstrass-type class.
    """
    exact: dict[Generator, Fraction] = {PSI: Fraction(1)}
    for i, a, b in _iter_delta_indices(params):
        if i != 0:
            continue
        gen = canonical_delta(params, i, a, b)
        exact[gen] = exact.get(gen, Fraction(0)) - (2 * a + b)
        # i = 0 never canonicalizes (that only happens at i = g/2 >= 1), so
        # each index lands on its own generator exactly once.
    return DivisorClass(params, exact)
