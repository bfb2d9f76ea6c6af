"""Acceptance gate: one test per criterion, exact arithmetic, zero tolerance.

Two table cells deviate from the printed reference values and are pinned here
deliberately rather than suppressed:

- (g=5) n_min: the joint solve with a free Brill-Noether multiplier certifies
  (5, 8), one node below the printed window (the printed derivation fixes
  that multiplier).  The improvement is substitution-checked, audited over
  every generator, and must be reported by the discrepancy machinery.
- (g=22) n_min: the printed bigness system at (22, 2) is infeasible as
  stated (so is its glue-augmented variant); the cell certifies only the
  weaker effectivity claim, moving n_min to 3.  Both true verdicts are
  reported on the certificate.
"""

import json
import random
from fractions import Fraction

from nodalcert import certify as C
from nodalcert import tables
from nodalcert.catalog import SPECIALS, solve_rk, w_coefficients
from nodalcert.cli import main
from nodalcert.feasibility import (
    Inequality,
    InequalitySystem,
    InfeasibilityTrace,
    Witness,
    cutoff_pg,
    cutoff_pg_discrepancy_note,
    cutoff_pg_polynomial,
    cutoff_pgrk,
    cutoff_pgrk_polynomial,
    solve,
)
from nodalcert.picard import CriticalVector, SpaceParams

F = Fraction

# (g, bound) -> (printed value, certified value)
DOCUMENTED_DEVIATIONS = {
    "prop52": {(5, "n_min"): (9, 8)},
    "thm2": {(5, "n_min"): (9, 8), (22, "n_min"): (2, 3)},
}


def _check_rows(rows, which, allowed):
    exp_min, exp_max = tables._expected_of(which)
    for g in sorted(exp_min):
        row = rows[g]
        for bound, expected, got in (
            ("n_min", exp_min[g], row.n_min),
            ("n_max", exp_max[g], row.n_max),
        ):
            if (g, bound) in allowed:
                exp_dev, got_dev = allowed[(g, bound)]
                assert expected == exp_dev and got == got_dev, (which, g, bound, got)
                # Deviations must surface through the report machinery with
                # their full attempt logs, never silently.
                discs = tables.compare_row(row, which)
                match = [d for d in discs if d.bound == bound]
                assert match, (which, g, bound)
                assert all(
                    attempts for attempts in match[0].cell_attempts.values()
                ), (which, g, bound)
            else:
                assert expected == got, (which, g, bound, expected, got)


def test_criterion_01_prop51_table_exact(prop51_rows):
    _check_rows(prop51_rows, "prop51", {})
    for g, row in prop51_rows.items():
        assert row.n_max == 2 * g - 4


def test_criterion_02_prop52_table(prop52_rows):
    _check_rows(prop52_rows, "prop52", DOCUMENTED_DEVIATIONS["prop52"])
    # The one improved cell carries a verified, fully audited certificate.
    cert = C.certify(5, 8, pipeline="uv")
    assert isinstance(cert, C.Certificate)
    assert C.verify(cert.to_dict())
    assert C.audit_full(cert)["result"] == "PASS"


def test_criterion_03_thm2_table(thm2_rows):
    _check_rows(thm2_rows, "thm2", DOCUMENTED_DEVIATIONS["thm2"])
    # (a) the effectivity claim at (22, 2) is reproduced exactly.
    cert = C.certify(22, 2)
    assert cert.status == C.STATUS_EFFECTIVE
    assert cert.residual_critical == CriticalVector.of(0, 0, 0, F(1, 3), F(4, 3))
    # (b) the true verdicts of the printed and augmented bigness systems.
    verdicts = {
        tuple(a.columns): a.feasible for a in cert.attempts if a.kind == "solve"
    }
    assert verdicts[("L224", "E", "W")] is False
    assert verdicts[("L224", "E", "W", "D")] is False
    note_blob = " ".join(cert.notes)
    assert "{L224, E, W}: INFEASIBLE" in note_blob
    assert "{L224, E, W, D}: INFEASIBLE" in note_blob


def _three_row_subsystem(g, n):
    d0, d1 = F(g + n + 1, 6), F(g + n - 1)
    _, wpsi, w2 = w_coefficients(SpaceParams(g, n))
    return InequalitySystem(
        ["y", "z"],
        [
            Inequality({"y": d0, "z": wpsi}, F(1), strict=True),
            Inequality({"y": -d1, "z": -w2}, F(-3)),
            Inequality({"y": -d0, "z": -w2}, F(-2)),
        ],
    )


def test_criterion_04_cutoff_pg_identity():
    for g in range(5, 31):
        admissible = []
        for n in range((g + 1) // 2, 3 * g + 1):
            if 2 * n < g:
                continue
            value = cutoff_pg(g, n)
            assert value == cutoff_pg_polynomial(g, n), (g, n)
            feasible = isinstance(solve(_three_row_subsystem(g, n)), Witness)
            assert (value > 0) == feasible, (g, n)
            if value > 0:
                admissible.append(n)
            assert cutoff_pg_discrepancy_note(g, n) is not None
        assert max(admissible) == 2 * g - 4, g


def test_criterion_05_cutoff_pgrk_identity():
    points = 0
    for g in range(5, 30, 2):
        for n in range(1, 6 * g + 1):
            rk = solve_rk(SpaceParams(g, n))
            if rk is None:
                continue
            assert cutoff_pgrk(g, n, rk.r, rk.k) == cutoff_pgrk_polynomial(
                g, n, rk.r, rk.k
            ), (g, n, rk)
            points += 1
    assert points >= 200
    assert cutoff_pgrk(5, 8, 2, 2) == 36


def test_criterion_06_trichotomy():
    for g in range(5, 41):
        for n in range(1, 3 * g + 1):
            _, wpsi, w2 = w_coefficients(SpaceParams(g, n))
            diff = w2 - 3 * wpsi
            if 2 * n <= g - 2:
                assert diff > 0, (g, n)
            elif 2 * n in (g - 1, g):
                assert diff == 0, (g, n)
            else:
                assert diff < 0, (g, n)


def test_criterion_07_spot_certificates():
    cert = C.certify(23, 1)
    assert cert.status == C.STATUS_CERTIFIED
    assert cert.residual_critical.lam == F(1, 92)
    cert = C.certify(11, 6)
    assert cert.status == C.STATUS_CERTIFIED
    assert [c.name for c in cert.columns] == ["B", "D", "W"]
    assert cert.attempts[-1].kind == "solve"
    cert = C.certify(10, 6)
    assert cert.status == C.STATUS_CERTIFIED
    assert [c.name for c in cert.columns] == ["Z10", "F", "W"]


def test_criterion_08_audit_soundness(thm2_rows):
    audited = 0
    cells = {(g, n) for e in SPECIALS.values() for (g, n) in e.applicable}
    for g, row in thm2_rows.items():
        for n in (row.n_min, row.n_max):
            if n is not None:
                cells.add((g, n))
    for g, n in sorted(cells):
        result = C.certify(g, n)
        if not isinstance(result, C.Certificate):
            continue
        assert C.verify(result.to_dict()), (g, n)
        outcome = C.audit_full(result)
        special = any(c.name in SPECIALS for c in result.columns)
        if special:
            assert outcome["result"] in ("PASS", "INCONCLUSIVE"), (g, n)
            if outcome["result"] == "INCONCLUSIVE":
                assert outcome["generators"], (g, n)
        else:
            assert outcome["result"] == "PASS", (g, n, outcome)
        audited += 1
    assert audited >= 30
    # Tampering flips both the audit and the independent verifier.
    cert = C.certify(23, 1)
    cert.columns[1].multiplier *= 2
    assert C.audit_full(cert)["result"] == "FAIL"
    assert not C.verify(cert.to_dict())


def _random_system(rng):
    rows = [
        Inequality(
            {"x": F(rng.randint(-5, 5)), "y": F(rng.randint(-5, 5))},
            F(rng.randint(-10, 10)),
            strict=rng.random() < 0.4,
        )
        for _ in range(rng.randint(2, 5))
    ]
    rows.append(Inequality({"x": F(1)}, F(1000)))
    rows.append(Inequality({"y": F(1)}, F(1000)))
    return InequalitySystem(["x", "y"], rows)


def _oracle_feasible(system):
    # Exact vertex enumeration over the relaxed (non-strict) polygon, then a
    # positive-slack check per strict row; sound by convexity.
    rows = list(system.rows)
    for v in system.variables:
        rows.append(Inequality({v: F(-1)}, F(0)))
    lines = [
        (r.coefficients.get("x", F(0)), r.coefficients.get("y", F(0)), r.bound)
        for r in rows
    ]
    vertices = []
    for i in range(len(lines)):
        a1, b1, c1 = lines[i]
        for j in range(i + 1, len(lines)):
            a2, b2, c2 = lines[j]
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            x = (c1 * b2 - c2 * b1) / det
            y = (a1 * c2 - a2 * c1) / det
            if all(a * x + b * y <= c for a, b, c in lines):
                vertices.append((x, y))
    if not vertices:
        return False
    for r in rows:
        if not r.strict:
            continue
        a = r.coefficients.get("x", F(0))
        b = r.coefficients.get("y", F(0))
        if all(a * x + b * y == r.bound for x, y in vertices):
            return False
    return True


def test_criterion_09_solver_oracle_equivalence():
    rng = random.Random(20260824)
    agree = 0
    for _ in range(500):
        system = _random_system(rng)
        result = solve(system)
        if isinstance(result, Witness):
            assert result.check(system)
            verdict = True
        else:
            assert isinstance(result, InfeasibilityTrace)
            assert result.recombines(system)
            verdict = False
        assert verdict == _oracle_feasible(system)
        agree += 1
    assert agree == 500


def test_criterion_10_end_to_end_determinism(capsys):
    assert main(["table", "--which", "thm2"]) == 0
    first = capsys.readouterr().out
    assert main(["table", "--which", "thm2"]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert first.startswith("| g |")
    # Certificates are byte-stable too.
    a = C.certify(16, 5).dumps()
    b = json.dumps(json.loads(a), sort_keys=True, indent=2) + "\n"
    assert a == b
