import random
from fractions import Fraction

import pytest

from nodalcert.picard import (
    DELTA_IRR,
    LAMBDA,
    PSI,
    CriticalVector,
    DivisorClass,
    SpaceParams,
    canonical_delta,
    critical_generators,
    enumerate_generators,
    omega_total,
    parse_generator,
)


def test_space_params_validation():
    SpaceParams(2, 1)
    with pytest.raises(ValueError):
        SpaceParams(1, 1)
    with pytest.raises(ValueError):
        SpaceParams(5, 0)


def test_enumeration_5_1():
    p = SpaceParams(5, 1)
    gens = enumerate_generators(p)
    assert gens[:3] == [LAMBDA, PSI, DELTA_IRR]
    deltas = {g.encode() for g in gens[3:]}
    assert deltas == {
        "delta[0;1,0]", "delta[0;0,2]",
        "delta[1;0,0]", "delta[1;1,0]", "delta[1;0,1]", "delta[1;0,2]",
        "delta[2;0,0]", "delta[2;1,0]", "delta[2;0,1]", "delta[2;0,2]",
    }
    assert len(gens) == 13
    # Delta block is lexicographic in (i, a, b).
    keys = [(g.i, g.a, g.b) for g in gens[3:]]
    assert keys == sorted(keys)


def test_enumeration_singletons():
    for p in [SpaceParams(2, 1), SpaceParams(7, 3), SpaceParams(12, 6)]:
        gens = enumerate_generators(p)
        assert gens.count(LAMBDA) == 1
        assert gens.count(PSI) == 1
        assert gens.count(DELTA_IRR) == 1
        assert len(gens) == len(set(gens))


def test_half_genus_canonicalization_g2():
    # i = g/2 identifies (a, b) with (n - a - b, b).
    p = SpaceParams(2, 1)
    assert canonical_delta(p, 1, 1, 0) == canonical_delta(p, 1, 0, 0)
    assert canonical_delta(p, 1, 0, 1).encode() == "delta[1;0,1]"
    gens = enumerate_generators(p)
    assert {g.encode() for g in gens[3:]} == {
        "delta[0;1,0]", "delta[0;0,2]",
        "delta[1;0,0]", "delta[1;0,1]", "delta[1;0,2]",
    }


def test_canonicalization_idempotent_exhaustive():
    for g in range(2, 13):
        for n in range(1, 7):
            p = SpaceParams(g, n)
            for gen in enumerate_generators(p):
                if gen.kind != 3:
                    continue
                again = canonical_delta(p, gen.i, gen.a, gen.b)
                assert again == gen


def _count_oracle(g: int, n: int) -> int:
    # Independent double-loop count with explicit complement identification.
    seen = set()
    for i in range(g // 2 + 1):
        for a in range(n + 1):
            for b in range(2 * n - 2 * a + 1):
                if i == 0 and 2 * a + b < 2:
                    continue
                key = (i, a, b)
                if g % 2 == 0 and i == g // 2:
                    ca = n - a - b
                    if 0 <= ca <= n and b <= 2 * n - 2 * ca:
                        key = (i, *min((a, b), (ca, b)))
                seen.add(key)
    return 3 + len(seen)


def test_enumeration_cardinality_oracle():
    for g in range(2, 13):
        for n in range(1, 7):
            p = SpaceParams(g, n)
            assert len(enumerate_generators(p)) == _count_oracle(g, n)


def test_parse_generator_round_trip():
    p = SpaceParams(8, 4)
    for gen in enumerate_generators(p):
        assert parse_generator(p, gen.encode()) == gen
    with pytest.raises(ValueError):
        parse_generator(p, "delta[0;0,1]")
    with pytest.raises(ValueError):
        parse_generator(p, "mystery")


def _random_class(p: SpaceParams, rng: random.Random) -> DivisorClass:
    gens = enumerate_generators(p)
    exact = {}
    for gen in rng.sample(gens, k=rng.randint(1, len(gens) // 2)):
        exact[gen] = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
    return DivisorClass(p, exact)


def test_vector_space_axioms_randomized():
    rng = random.Random(7)
    p = SpaceParams(9, 3)
    gens = enumerate_generators(p)
    for _ in range(30):
        A = _random_class(p, rng)
        B = _random_class(p, rng)
        C = _random_class(p, rng)
        AB = A.add(B)
        assert AB == B.add(A)
        assert AB.add(C) == A.add(B.add(C))
        c = Fraction(rng.randint(1, 12), rng.randint(1, 5))
        for gen in gens:
            assert A.scale(c).coeff(gen).value == c * A.coeff(gen).value
            assert AB.coeff(gen).value == A.coeff(gen).value + B.coeff(gen).value


def test_scale_requires_positive():
    p = SpaceParams(5, 1)
    A = DivisorClass(p, {LAMBDA: Fraction(2)})
    assert A.scale(3).coeff(LAMBDA).value == 6
    with pytest.raises(ValueError):
        A.scale(0)
    with pytest.raises(ValueError):
        A.scale(-1)


def test_bound_absorption():
    p = SpaceParams(5, 1)
    gen = canonical_delta(p, 1, 0, 0)
    # exact coefficient 5 combined with a lower bound 0 gives lower bound 5:
    # "subtracts at least 5" absorbs the unknown-but-bounded summand.
    A = DivisorClass(p, {gen: Fraction(-5)})
    B = DivisorClass(p, lower_bounds={gen: Fraction(0)})
    both = A.add(B)
    c = both.coeff(gen)
    assert not c.exact
    assert both.lower_bounds[gen] == 5
    with pytest.raises(ValueError):
        both.exact_coeff(gen)


def test_coeff_absent_is_exact_zero():
    p = SpaceParams(5, 1)
    A = DivisorClass(p, {LAMBDA: Fraction(1)})
    c = A.coeff(PSI)
    assert c.exact and c.value == 0


def test_params_mismatch_rejected():
    A = DivisorClass(SpaceParams(5, 1), {LAMBDA: Fraction(1)})
    B = DivisorClass(SpaceParams(5, 2), {LAMBDA: Fraction(1)})
    with pytest.raises(ValueError):
        A.add(B)


def test_exact_and_bound_overlap_rejected():
    p = SpaceParams(5, 1)
    with pytest.raises(ValueError):
        DivisorClass(p, {LAMBDA: Fraction(1)}, {LAMBDA: Fraction(1)})


def test_critical_vector_projection_consistency():
    from nodalcert.catalog import canonical_K, class_B, class_D, class_W

    for p in [SpaceParams(5, 1), SpaceParams(11, 6), SpaceParams(9, 8)]:
        for dc in [canonical_K(p), class_B(p), class_W(p)]:
            cv = dc.critical()
            for gen, val in zip(critical_generators(p), cv.as_tuple()):
                assert dc.coeff(gen).exact
                assert dc.coeff(gen).value == val
    p = SpaceParams(11, 6)
    assert class_D(p).critical() == CriticalVector.of(
        20, Fraction(3), Fraction(-3), -16, Fraction(-3)
    )


def test_omega_total():
    p = SpaceParams(5, 1)
    w = omega_total(p)
    assert w.coeff(PSI).value == 1
    assert w.coeff(canonical_delta(p, 0, 1, 0)).value == -2
    assert w.coeff(canonical_delta(p, 1, 0, 2)).value == 0
    p2 = SpaceParams(5, 2)
    w2 = omega_total(p2)
    assert w2.coeff(canonical_delta(p2, 0, 0, 3)).value == -3
    assert w2.coeff(canonical_delta(p2, 0, 1, 2)).value == -4
