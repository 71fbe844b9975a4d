"""Bound rules, certificates, tables, and chain construction."""

from fractions import Fraction

import pytest

from wpvol import (
    BoundCertificate,
    DivisorSpec,
    DomainError,
    IntersectionEngine,
    ModuliPoint,
    MuVector,
    TraceInput,
    VerificationError,
    VolumeTable,
    build_chain,
    divisor_mu,
    kappa_form,
    kodaira_bound,
    replay_certificate,
    thm1_step,
    thm1_upper_prev,
    thm2_bound,
    thm3_bound,
    verify_lemma1,
    verify_thm1,
    verify_thm2,
)
from wpvol.bounds import kodaira_divisor, thm2_divisor

F = Fraction


@pytest.fixture(scope="module")
def engine():
    return IntersectionEngine()


@pytest.fixture(scope="module")
def table9(engine):
    return build_chain(6, 2, 9, engine=engine)


# ------------------------------------------------------------- thm1 family


def test_thm1_step_examples():
    assert thm1_step(0, 3, F(0), provenance="convention").value == 1
    assert thm1_step(0, 5, F(5)).value == 61
    assert thm1_step(1, 2, F(1, 8)).value == F(7, 6)


def test_thm1_excluded_pairs():
    for g, n in [(0, 4), (1, 1)]:
        with pytest.raises(DomainError):
            thm1_step(g, n, F(1))
        cert = thm1_step(g, n, F(1), override_exclusions=True)
        assert any("overridden" in note for note in cert.notes)


def test_thm1_exclusions_are_genuine(engine):
    # the inequality really fails at both excluded pairs
    assert thm1_step(0, 4, engine.wp_volume(0, 4), override_exclusions=True).value == 6
    assert engine.wp_volume(0, 5) == 5  # 5 < 6
    bad = thm1_step(1, 1, engine.wp_volume(1, 1), override_exclusions=True).value
    assert bad == F(1, 6) and engine.wp_volume(1, 2) == F(1, 8) < bad


def test_thm1_unstable_and_provenance():
    with pytest.raises(DomainError):
        thm1_step(0, 2, F(0))
    with pytest.raises(DomainError):
        thm1_step(1, 2, F(1, 8), provenance="upper")


def test_thm1_monotone_in_input():
    lo = thm1_step(2, 1, F(1, 10)).value
    hi = thm1_step(2, 1, F(2, 10)).value
    assert lo < hi


def test_thm1_upper_examples(engine):
    with pytest.raises(DomainError):
        thm1_upper_prev(1, 0, F(1))
    assert thm1_upper_prev(0, 5, F(61)).value == 5
    cert = thm1_upper_prev(1, 2, engine.wp_volume(1, 3))
    assert cert.kind == "upper" and cert.strict
    assert cert.value >= F(1, 8)
    assert cert.param("unshifted_form") == 2 * engine.wp_volume(1, 3) / 18
    with pytest.raises(DomainError):
        thm1_upper_prev(1, 2, F(2), provenance="lower")


# -------------------------------------------------------------- mu vectors


def test_divisor_mu_presets():
    mu = divisor_mu(DivisorSpec(F(56, 5), (F(1), F(1), F(1))))
    assert mu.mu == (F(1, 14), F(1, 14), F(1, 14))
    assert mu.mu[0] / 2 == F(1, 28) and mu.mu[1] / 48 == F(1, 672)

    mu = divisor_mu(DivisorSpec(F(13), (F(2), F(3), F(2))))
    assert mu.mu == (F(11, 13), F(23, 13), F(11, 13))
    assert mu.mu[0] / 2 == F(11, 26) and mu.mu[1] / 48 == F(23, 624)


def test_divisor_mu_violation_names_index():
    with pytest.raises(DomainError, match="index 1"):
        divisor_mu(DivisorSpec(F(12), (F(2), F(1))))
    with pytest.raises(DomainError):
        divisor_mu(DivisorSpec(F(12), (F(1), F(1))))  # mu = 0 boundary case


def test_divisor_spec_validation():
    with pytest.raises(DomainError):
        DivisorSpec(F(0), (F(1),))
    with pytest.raises(DomainError):
        DivisorSpec(F(1), (F(1), F(-2)))
    with pytest.raises(DomainError):
        MuVector((F(1), F(0)))


def test_kappa_form_matches_mu():
    spec = DivisorSpec(F(13), (F(2), F(3), F(2)))
    mu = divisor_mu(spec)
    kf = kappa_form(spec)
    assert kf.alpha == F(13, 12)
    for bj, mj in zip(kf.beta, mu.mu):
        assert bj / kf.alpha == mj
        assert bj > 0


# ------------------------------------------------------------- thm3 family


def test_thm3_genus2_both_modes(table9):
    mu = divisor_mu(thm2_divisor(2))
    consistent = thm3_bound(2, mu, table9, "thm2-consistent")
    assert consistent.value == F(1, 224)
    printed = thm3_bound(2, mu, table9, "as-printed")
    assert printed.value == F(71, 16128)
    assert printed.value <= consistent.value
    assert any("g=2" in note for note in consistent.notes)


def test_thm3_genus3_structure(engine, table9):
    cert = thm2_bound(3, table9)
    expected = F(1, 28) * engine.wp_volume(2, 2) + F(1, 672) * engine.wp_volume(2, 1)
    assert cert.value == expected  # odd genus: no middle correction


def test_thm3_preconditions(table9):
    mu = divisor_mu(thm2_divisor(2))
    with pytest.raises(DomainError):
        thm3_bound(1, divisor_mu(thm2_divisor(1)), table9)
    with pytest.raises(DomainError):
        thm3_bound(4, mu, table9)  # wrong mu length for genus 4
    with pytest.raises(DomainError):
        thm3_bound(2, mu, table9, "bogus-mode")


def test_thm3_missing_entries():
    table = VolumeTable()  # only the (0,3) convention
    with pytest.raises(DomainError, match="missing table entry"):
        thm2_bound(2, table)


def test_thm2_bound_requires_g_over_1(table9):
    with pytest.raises(DomainError):
        thm2_bound(1, table9)


def test_thm2_verified_small_genera(engine):
    rows = verify_thm2(engine, (2, 3, 4))
    assert len(rows) == 6
    for g, mode, bound, exact in rows:
        assert bound <= exact


def test_mode_ordering_even_genus(table9):
    for g in (2, 4, 6):
        printed = thm2_bound(g, table9, "as-printed").value
        consistent = thm2_bound(g, table9, "thm2-consistent").value
        assert printed <= consistent


def test_kodaira_preset(table9):
    with pytest.raises(DomainError):
        kodaira_bound(22, table9)
    cert = kodaira_bound(4, table9, override_genus=True)
    assert any("overridden" in note for note in cert.notes)
    assert cert.param("preset") == "kodaira"
    assert cert.param("mu") == (F(11, 13), F(23, 13), F(11, 13))
    assert kodaira_divisor(4).q == (F(2), F(3), F(2))


def test_kodaira_chain_certificate():
    table = build_chain(24, 2, 6)
    cell = table.cell(24, 0)
    assert cell.lower is not None
    assert cell.lower.param("preset") == "kodaira"  # beats the all-ones divisor
    assert replay_certificate(cell.lower) == cell.lower.value


# ------------------------------------------------------------ certificates


def test_certificate_replay(table9):
    certs = [
        thm1_step(1, 2, F(1, 8)),
        thm1_upper_prev(0, 5, F(61)),
        thm2_bound(2, table9),
        thm2_bound(5, table9),
        thm2_bound(6, table9, "as-printed"),
        kodaira_bound(30, build_chain(30, 2, 4)),
    ]
    for cert in certs:
        assert replay_certificate(cert) == cert.value


def test_certificate_provenance_discipline():
    with pytest.raises(DomainError, match="provenance mismatch"):
        BoundCertificate(
            target=ModuliPoint(2, 0),
            kind="lower",
            value=F(1),
            strict=False,
            rule="thm1_step",
            params=(("g", 2), ("n", 0)),
            inputs=(TraceInput("V(2,0)", F(1), "upper", "added"),),
        )
    with pytest.raises(DomainError, match="provenance mismatch"):
        BoundCertificate(
            target=ModuliPoint(2, 0),
            kind="lower",
            value=F(1),
            strict=True,
            rule="thm3",
            params=(("g", 2),),
            inputs=(TraceInput("V(1,1)", F(1), "lower", "subtracted"),),
        )


# ------------------------------------------------------------------ tables


def test_table_invariants_enforced():
    table = VolumeTable()
    table.set_exact(2, 0, F(43, 2880))
    good = thm1_step(2, 0, F(1, 1000), provenance="lower")
    table.add_lower(good)
    assert table.cell(2, 1).lower is good
    # a lower bound exceeding a known exact value is a math bug, not data
    bad = thm1_step(1, 2, F(1, 8))
    assert bad.target == ModuliPoint(1, 3)
    table.set_exact(1, 3, F(1, 10))
    with pytest.raises(VerificationError):
        table.add_lower(bad)


def test_table_keeps_best_bounds():
    table = VolumeTable()
    weak = thm1_step(2, 0, F(1, 100), provenance="lower")
    strong = thm1_step(2, 0, F(1, 10), provenance="lower")
    table.add_lower(weak)
    table.add_lower(strong)
    assert table.cell(2, 1).lower is strong
    table.add_lower(weak)
    assert table.cell(2, 1).lower is strong


def test_table_convention_entry():
    table = VolumeTable()
    assert table.exact(0, 3) == 0
    assert table.lower_input(0, 3) == (F(0), "convention")


# ------------------------------------------------------------------ chains


def test_chain_example_small(engine):
    table = build_chain(1, 2, 2, engine=engine)
    expected = {
        (0, 3): F(0),
        (0, 4): F(1),
        (0, 5): F(5),
        (1, 1): F(1, 24),
        (1, 2): F(1, 8),
    }
    for (g, n), value in expected.items():
        assert table.exact(g, n) == value
    assert all(table.exact(g, n) is not None for (g, n) in expected)


def test_chain_genus_ladder(engine):
    table = build_chain(5, 0, 3, engine=engine)
    for g in range(2, 6):
        cell = table.cell(g, 0)
        assert cell.lower is not None
        assert cell.lower.value > 0
        assert replay_certificate(cell.lower) == cell.lower.value


def test_chain_lower_le_exact(table9):
    checked = 0
    for g, n in table9.points():
        cell = table9.cell(g, n)
        if cell.exact is not None and cell.lower is not None:
            assert cell.lower.value <= cell.exact, (g, n)
            checked += 1
    assert checked >= 5


def test_chain_gap_recording():
    table = build_chain(1, 3, 0)  # budget 0: nothing to seed beyond (0,3)
    assert any(g == 1 for g, _n, _r in table.gaps)
    assert table.cell(1, 1) is None or table.cell(1, 1).exact is None


def test_thm1_sweep_with_equalities(engine):
    rows = verify_thm1(engine, 9)
    eq = {(g, n) for g, n, _b, _v, equal in rows if equal}
    assert (0, 3) in eq and (0, 5) in eq
    assert all(b <= v for _g, _n, b, v, _e in rows)


def test_lemma1_sweep_small(engine):
    rows = verify_lemma1(engine, 4)
    assert all(value >= 0 for *_rest, value in rows)
    assert any(part == (1, 1, 1) for _g, _n, part, _v in rows)
