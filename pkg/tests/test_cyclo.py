from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmbounds.bounds import b0_bound
from rmbounds.cyclo import (
    Compositum,
    Determination,
    ExponentProfile,
    LocalType,
    ProfileParseError,
    RealCyclotomicField,
    analyze_profile,
    classify_local_type,
    enumerate_forbidden,
    forced_compositum,
    genus2_rm_analysis,
    max_exponent_given,
)

profile_dicts = st.dictionaries(
    keys=st.sampled_from([2, 3, 5, 7, 11, 13, 17, 19]),
    values=st.integers(min_value=1, max_value=14),
    max_size=4,
)


# -- profiles and fields -----------------------------------------------------


def test_profile_parse():
    assert ExponentProfile.parse("2^9,5^3").as_dict() == {2: 9, 5: 3}
    assert ExponentProfile.parse("7").as_dict() == {7: 1}
    assert ExponentProfile.parse(" 2^9 , 3^6 ").as_dict() == {2: 9, 3: 6}


def test_profile_parse_errors_carry_position():
    with pytest.raises(ProfileParseError) as info:
        ExponentProfile.parse("2^9,x^3")
    assert info.value.position == 4
    with pytest.raises(ProfileParseError):
        ExponentProfile.parse("4^2")
    with pytest.raises(ProfileParseError):
        ExponentProfile.parse("2^9,2^3")
    with pytest.raises(ProfileParseError):
        ExponentProfile.parse("2^0")


def test_profile_validation():
    with pytest.raises(ValueError):
        ExponentProfile.of({6: 1})
    with pytest.raises(ValueError):
        ExponentProfile.of({5: 0})


def test_field_names_and_degree():
    assert RealCyclotomicField(2, 3).name == "Q(sqrt(2))"
    assert RealCyclotomicField(5, 1).name == "Q(sqrt(5))"
    assert RealCyclotomicField(3, 2).name == "Q(zeta_9)^+"
    assert RealCyclotomicField(13, 1).name == "Q(zeta_13)^+"
    assert RealCyclotomicField(13, 1).degree == 6
    with pytest.raises(ValueError):
        RealCyclotomicField(3, 1)  # trivial field must not be stored


def test_compositum_degree_multiplicative():
    comp = Compositum(components=(RealCyclotomicField(2, 3), RealCyclotomicField(5, 1)))
    assert comp.degree == 4
    assert comp.name == "Q(sqrt(2)) * Q(sqrt(5))"
    with pytest.raises(ValueError):
        Compositum(components=(RealCyclotomicField(5, 1), RealCyclotomicField(5, 2)))


# -- analyze_profile ----------------------------------------------------------


def test_analyze_profile_examples():
    report = analyze_profile({2: 9, 5: 3}, 2)
    assert not report.admissible

    report = analyze_profile({2: 9, 5: 3}, 4)
    assert report.admissible
    assert report.determination is Determination.EXACT_FIELD
    assert {(f.p, f.r) for f in report.forced.components} == {(2, 3), (5, 1)}

    report = analyze_profile({13: 3}, 6)
    assert report.determination is Determination.EXACT_FIELD
    assert report.forced.components[0].name == "Q(zeta_13)^+"

    report = analyze_profile({2: 8}, 1)
    assert report.admissible
    assert report.determination is Determination.NO_CONSTRAINT

    report = analyze_profile({2: 9}, 4)
    assert report.determination is Determination.CONTAINS_SUBFIELD
    assert report.residual_degree == 2
    assert report.forced.components[0].name == "Q(sqrt(2))"


def test_analyze_profile_rejects_d0():
    with pytest.raises(ValueError):
        analyze_profile({2: 9}, 0)


def test_refined_bounds_match_max_exponent_given():
    profile = ExponentProfile.of({2: 9, 5: 3})
    report = analyze_profile(profile, 4)
    for q, _ in profile:
        assert report.refined_bounds[q] == max_exponent_given(q, 4, profile.without(q))


def test_max_exponent_given_examples():
    assert max_exponent_given(2, 4, {5: 3}) == 10
    assert max_exponent_given(7, 3, {}) == 4
    assert max_exponent_given(13, 6, {2: 9}) == 2


def test_max_exponent_given_rejects_bad_partial():
    with pytest.raises(ValueError):
        max_exponent_given(2, 4, {2: 9})
    with pytest.raises(ValueError):
        max_exponent_given(7, 2, {2: 9, 5: 3})  # partial inadmissible for d=2


@settings(max_examples=300)
@given(profile=profile_dicts, d=st.integers(min_value=1, max_value=24))
def test_downward_closure(profile, d):
    report = analyze_profile(profile, d)
    if not report.admissible or not profile:
        return
    for p in profile:
        smaller = dict(profile)
        if smaller[p] > 1:
            smaller[p] -= 1
        else:
            del smaller[p]
        assert analyze_profile(smaller, d).admissible


@given(profile=profile_dicts)
def test_compositum_order_invariance(profile):
    forward = forced_compositum(ExponentProfile.of(profile))
    reversed_entries = ExponentProfile(entries=tuple(sorted(profile.items(), reverse=True)))
    assert forced_compositum(reversed_entries) == forward


# -- regression: the d = 2..6 case analysis -----------------------------------


def test_forced_fields_d2():
    assert analyze_profile({2: 9}, 2).forced.name == "Q(sqrt(2))"
    assert analyze_profile({2: 9}, 2).determination is Determination.EXACT_FIELD
    assert analyze_profile({5: 3}, 2).forced.name == "Q(sqrt(5))"
    assert not analyze_profile({2: 9, 5: 3}, 2).admissible


def test_forced_fields_d3():
    assert analyze_profile({3: 6}, 3).forced.name == "Q(zeta_9)^+"
    assert analyze_profile({7: 3}, 3).forced.name == "Q(zeta_7)^+"
    assert not analyze_profile({3: 6, 7: 3}, 3).admissible


def test_forced_fields_d4():
    assert analyze_profile({2: 11}, 4).forced.name == "Q(zeta_16)^+"
    assert analyze_profile({2: 11}, 4).determination is Determination.EXACT_FIELD
    assert analyze_profile({2: 9}, 4).determination is Determination.CONTAINS_SUBFIELD
    assert analyze_profile({5: 3}, 4).determination is Determination.CONTAINS_SUBFIELD
    joint = analyze_profile({2: 9, 5: 3}, 4)
    assert joint.determination is Determination.EXACT_FIELD
    assert joint.forced.name == "Q(sqrt(2)) * Q(sqrt(5))"
    assert not analyze_profile({2: 11, 5: 3}, 4).admissible


def test_forced_fields_d5():
    report = analyze_profile({11: 3}, 5)
    assert report.determination is Determination.EXACT_FIELD
    assert report.forced.name == "Q(zeta_11)^+"


def test_forced_fields_d6():
    cases = {
        ("2^9,3^6", "Q(sqrt(2)) * Q(zeta_9)^+"),
        ("2^9,7^3", "Q(sqrt(2)) * Q(zeta_7)^+"),
        ("3^6,5^3", "Q(sqrt(5)) * Q(zeta_9)^+"),
        ("5^3,7^3", "Q(sqrt(5)) * Q(zeta_7)^+"),
        ("13^3", "Q(zeta_13)^+"),
    }
    for text, name in cases:
        report = analyze_profile(ExponentProfile.parse(text), 6)
        assert report.determination is Determination.EXACT_FIELD, text
        assert report.forced.name == name

    for text in ("2^9,5^3", "2^9,13^3", "3^6,7^3", "3^6,13^3", "7^3,13^3"):
        assert not analyze_profile(ExponentProfile.parse(text), 6).admissible, text


# -- enumerate_forbidden -------------------------------------------------------


def test_enumerate_forbidden_small_dimensions():
    assert enumerate_forbidden(1, 19, 2) == []
    assert [str(p) for p in enumerate_forbidden(2, 19, 2)] == ["2^9,5^3"]
    assert [str(p) for p in enumerate_forbidden(3, 19, 2)] == ["3^6,7^3"]
    assert [str(p) for p in enumerate_forbidden(4, 19, 2)] == ["2^11,5^3"]


def test_enumerate_forbidden_d6_complete():
    # The degree arithmetic forces six minimal pairs; 5^3 * 13^3 is forbidden
    # for the same reason as 7^3 * 13^3 (2 * 6 = 12 does not divide 6).
    got = [str(p) for p in enumerate_forbidden(6, 19, 2)]
    assert got == [
        "2^9,5^3",
        "2^9,13^3",
        "3^6,7^3",
        "3^6,13^3",
        "5^3,13^3",
        "7^3,13^3",
    ]


def test_enumerate_forbidden_minimality_by_reevaluation():
    for d in (2, 3, 4, 6, 8, 12):
        for profile in enumerate_forbidden(d, 19, 3):
            assert not analyze_profile(profile, d).admissible, (d, profile)
            for p, _ in profile:
                assert analyze_profile(profile.without(p), d).admissible, (d, profile, p)


def test_enumerate_forbidden_singletons():
    singles = enumerate_forbidden(2, 19, 1, include_singletons=True)
    assert all(len(s) == 1 for s in singles)
    # each singleton sits just past its own cap
    for profile in singles:
        ((p, e),) = profile.entries
        assert not analyze_profile({p: e}, 2).admissible
        assert analyze_profile({p: e - 1}, 2).admissible
    # default excludes them
    assert enumerate_forbidden(2, 19, 1) == []


def test_enumerate_forbidden_deterministic():
    runs = [enumerate_forbidden(6, 19, 2) for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]


def test_single_prime_boundary_matches_b0():
    for p in (2, 3, 5, 7, 11, 13):
        for d in (1, 2, 3, 4, 6, 8, 12):
            cap = b0_bound(p, d)
            assert analyze_profile({p: cap}, d).admissible
            assert not analyze_profile({p: cap + 1}, d).admissible


# -- local type classifier -----------------------------------------------------


def test_classify_local_type():
    verdict = classify_local_type(3, 5, False)
    assert verdict.kind is LocalType.SUPERCUSPIDAL_DIHEDRAL_Q3_SQRT_MINUS3
    assert classify_local_type(5, 3, True).kind is LocalType.SUPERCUSPIDAL_REQUIRED
    assert classify_local_type(7, 2, True).kind is LocalType.UNCONSTRAINED
    assert classify_local_type(3, 5, True).kind is LocalType.SUPERCUSPIDAL_REQUIRED
    assert classify_local_type(3, 4, False).kind is LocalType.UNCONSTRAINED
    assert classify_local_type(2, 9, False).kind is LocalType.SUPERCUSPIDAL_REQUIRED
    assert classify_local_type(3, 1, False).kind is LocalType.UNCONSTRAINED


def test_classify_special_verdict_only_at_p3_odd():
    for p in (2, 5, 7):
        for e in (3, 5, 7):
            assert classify_local_type(p, e, False).kind is not LocalType.SUPERCUSPIDAL_DIHEDRAL_Q3_SQRT_MINUS3
    for e in (2, 4, 6):
        assert classify_local_type(3, e, False).kind is not LocalType.SUPERCUSPIDAL_DIHEDRAL_Q3_SQRT_MINUS3


# -- genus 2 --------------------------------------------------------------------


def test_genus2_examples():
    report = genus2_rm_analysis({5: 6})
    assert report.simple is True
    assert report.field is not None and report.field.name == "Q(sqrt(5))"

    report = genus2_rm_analysis({2: 18})
    assert report.simple is True
    assert report.field is not None and report.field.name == "Q(sqrt(2))"

    report = genus2_rm_analysis({2: 16})
    assert report.simple is None
    assert report.field is None


def test_genus2_rejects_odd_exponent_when_simple():
    with pytest.raises(ValueError):
        genus2_rm_analysis({5: 5})
    with pytest.raises(ValueError):
        genus2_rm_analysis({2: 18, 3: 1})


def test_genus2_inconsistent_profile_surfaces_in_analysis():
    report = genus2_rm_analysis({2: 22})
    assert report.simple is True
    assert report.field is None
    assert report.analysis is not None and not report.analysis.admissible


def test_json_round_trips():
    report = analyze_profile({2: 9, 5: 3}, 4)
    from rmbounds.cyclo import RmConstraintReport

    assert RmConstraintReport.from_json_dict(report.to_json_dict()) == report
    g2 = genus2_rm_analysis({5: 6})
    from rmbounds.cyclo import Genus2Report

    assert Genus2Report.from_json_dict(g2.to_json_dict()) == g2
