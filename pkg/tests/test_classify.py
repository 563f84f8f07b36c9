"""Classification tests.

The [[1,-1],[1,1]] degree oracle [1, 3, 4, 4, 8, 8, 16, 24] was derived
by hand from the surface area measures of the iterated images; the
sequence then repeats with deg(n+8) = 16 deg(n) since A^8 = 16I, so its
generating function is an 8-term polynomial over 1 - 16z^8, which
cancels down to the order-6 denominator frozen below.  The diag(2,-3)
closed form (1 + 2z - 10z^2)/(1 - 3z - 4z^2 + 12z^3) comes from summing
3^n with the odd-index 2^n contribution as geometric series.
"""

import json
from fractions import Fraction

import pytest

from toric_degrees.classify import (
    HYPOTHESIS_NOT_MET,
    NATURAL_BOUNDARY,
    RATIONAL,
    HypothesisReport,
    Recurrence,
    check_dominant_pair_hypothesis,
    classify_general,
    classify_surface,
    closed_form_real_case,
    find_recurrence,
    rational_function_from_recurrence,
)
from toric_degrees.degrees import degree_sequence, monomial_map
from toric_degrees.errors import PreconditionError, RefinementError
from toric_degrees.exact_linalg import (
    GeneralRatioCertificate,
    IntPolynomial,
    IntegerMatrix,
    RootOfUnityCertificate,
)
from toric_degrees.polytope import ToricDivisor, projective_space_fan

F = Fraction


def pn_setup(d=2):
    fan = projective_space_fan(d)
    coeffs = tuple(F(0) for _ in range(d)) + (F(1),)
    return fan, ToricDivisor(fan, coeffs)


def series_of(num: IntPolynomial, den: IntPolynomial, count: int) -> list[Fraction]:
    """Taylor coefficients of num/den around z = 0."""
    assert den.coeffs and den.coeffs[0] != 0
    out = []
    for n in range(count):
        acc = F(num.coeffs[n]) if n < len(num.coeffs) else F(0)
        for i in range(1, min(n, len(den.coeffs) - 1) + 1):
            acc -= den.coeffs[i] * out[n - i]
        out.append(acc / den.coeffs[0])
    return out


# ---------------------------------------------------------------------------
# recurrence detection


def test_geometric_recurrence():
    rec = find_recurrence([F(3) ** n for n in range(40)])
    assert (rec.order, rec.coefficients, rec.offset) == (1, (F(3),), 1)


def test_fibonacci_recurrence():
    terms = [F(1), F(1)]
    while len(terms) < 40:
        terms.append(terms[-1] + terms[-2])
    rec = find_recurrence(terms)
    assert (rec.order, rec.coefficients, rec.offset) == (2, (F(1), F(1)), 2)


def test_sum_of_powers_recurrence():
    rec = find_recurrence([F(2) ** n + F(3) ** n for n in range(40)])
    assert (rec.order, rec.coefficients, rec.offset) == (2, (F(5), F(-6)), 2)


def test_transient_is_skipped():
    terms = [F(5)] + [F(3) ** n for n in range(39)]
    rec = find_recurrence(terms)
    assert (rec.order, rec.coefficients, rec.offset) == (1, (F(3),), 2)
    assert rec.holds_on(terms)


def test_factorials_admit_no_recurrence():
    terms = [F(1)]
    for n in range(1, 40):
        terms.append(terms[-1] * n)
    assert find_recurrence(terms, max_order=12) is None


def test_too_few_terms_rejected():
    with pytest.raises(PreconditionError):
        find_recurrence([F(1)] * 20, max_order=12)


def test_recurrence_to_dict_roundtrips_strings():
    rec = Recurrence(2, (F(1, 2), F(-3)), 4)
    d = rec.to_dict()
    assert d == {"order": 2, "offset": 4, "coefficients": ["1/2", "-3"]}
    json.dumps(d)


def test_closed_form_from_geometric():
    terms = [F(3) ** n for n in range(40)]
    num, den = rational_function_from_recurrence(terms, find_recurrence(terms))
    assert num.coeffs == (1,)
    assert den.coeffs == (1, -3)


def test_closed_form_cancels_common_factor():
    # (1 - 2z) * 3^n pattern: terms of (1 - 2z)/((1 - 2z)(1 - 3z)) are 3^n
    terms = [F(3) ** n for n in range(40)]
    rec = Recurrence(2, (F(5), F(-6)), 2)
    assert rec.holds_on(terms)
    num, den = rational_function_from_recurrence(terms, rec)
    assert num.coeffs == (1,)
    assert den.coeffs == (1, -3)


def test_closed_form_reproduces_series():
    terms = [F(7), F(2), F(5)] + [F(0)] * 37
    for n in range(3, 40):
        terms[n] = 2 * terms[n - 1] - 3 * terms[n - 3]
    rec = find_recurrence(terms)
    num, den = rational_function_from_recurrence(terms, rec)
    assert series_of(num, den, 40) == terms


# ---------------------------------------------------------------------------
# surface dichotomy


def test_diagonal_map_is_rational():
    fan, div = pn_setup()
    res = classify_surface(monomial_map([[2, 0], [0, 3]], fan), div)
    assert res.verdict == RATIONAL
    num, den = res.closed_form
    assert num.coeffs == (1,)
    assert den.coeffs == (1, -3)
    assert res.certificate is None


def test_natural_boundary_map():
    fan, div = pn_setup()
    res = classify_surface(monomial_map([[2, -1], [1, 2]], fan), div)
    assert res.verdict == NATURAL_BOUNDARY
    assert res.closed_form is None
    assert isinstance(res.certificate, RootOfUnityCertificate)
    assert not res.certificate.is_root_of_unity
    assert len(res.certificate.table) == 5


def test_natural_boundary_sequence_has_no_low_order_recurrence():
    fan, div = pn_setup()
    seq = degree_sequence(monomial_map([[2, -1], [1, 2]], fan), div, 1, 40)
    assert find_recurrence(seq.terms, max_order=12) is None


def test_root_of_unity_rotation_is_rational():
    fan, div = pn_setup()
    m = monomial_map([[1, -1], [1, 1]], fan)
    seq = degree_sequence(m, div, 1, 9)
    assert list(seq.terms) == [1, 3, 4, 4, 8, 8, 16, 24, 16, 48]
    res = classify_surface(m, div)
    assert res.verdict == RATIONAL
    assert res.certificate.is_root_of_unity
    assert res.certificate.witness == 4
    assert res.recurrence.order <= 8
    num, den = res.closed_form
    assert num.coeffs == (1, 5, 12, 18, 20, 12)
    assert den.coeffs == (1, 2, 2, 0, -4, -8, -8)
    # den * (reversed char poly) recovers the bare period-8 shape
    period = den * IntPolynomial((1, -2, 2))
    assert period.coeffs == (1, 0, 0, 0, 0, 0, 0, 0, -16)


def test_scalar_map_collapses_to_single_pole():
    fan, div = pn_setup()
    res = classify_surface(monomial_map([[2, 0], [0, 2]], fan), div)
    assert res.verdict == RATIONAL
    num, den = res.closed_form
    assert num.coeffs == (1,)
    assert den.coeffs == (1, -2)


def test_closed_form_matches_degree_sequence():
    fan, div = pn_setup()
    for rows in ([[2, 0], [0, 3]], [[1, -1], [1, 1]], [[2, 1], [0, 3]]):
        m = monomial_map(rows, fan)
        res = classify_surface(m, div)
        assert res.verdict == RATIONAL
        seq = degree_sequence(m, div, 1, 20)
        num, den = res.closed_form
        assert series_of(num, den, 21) == list(seq.terms)


def test_verdict_stable_under_unimodular_conjugation():
    fan, div = pn_setup()
    # [[1,1],[0,1]] conjugates of the two dichotomy witnesses
    assert classify_surface(monomial_map([[3, -2], [1, 1]], fan), div).verdict \
        == NATURAL_BOUNDARY
    assert classify_surface(monomial_map([[2, 1], [0, 3]], fan), div).verdict \
        == RATIONAL


def test_classify_needs_dimension_two():
    fan, div = pn_setup(3)
    m = monomial_map([[2, 0, 0], [0, 3, 0], [0, 0, 5]], fan)
    with pytest.raises(PreconditionError):
        classify_surface(m, div)


def test_classify_needs_enough_terms():
    fan, div = pn_setup()
    with pytest.raises(PreconditionError):
        classify_surface(monomial_map([[2, 0], [0, 3]], fan), div, N=20)


def test_classification_json_payload():
    fan, div = pn_setup()
    res = classify_surface(monomial_map([[2, -1], [1, 2]], fan), div)
    d = res.to_dict()
    json.dumps(d)
    assert d["verdict"] == "NaturalBoundary"
    assert d["certificate"]["kind"] == "quadratic-power-sum"
    assert d["certificate"]["is_root_of_unity"] is False
    assert d["closed_form"] is None
    res2 = classify_surface(monomial_map([[2, 0], [0, 3]], fan), div)
    d2 = res2.to_dict()
    json.dumps(d2)
    assert d2["closed_form"] == {"numerator": [1], "denominator": [1, -3]}
    assert d2["recurrence"]["coefficients"] == ["3"]


# ---------------------------------------------------------------------------
# real-eigenvalue closed forms


def test_real_case_direct_route():
    fan, div = pn_setup()
    num, den = closed_form_real_case(monomial_map([[2, 0], [0, 3]], fan), div)
    assert num.coeffs == (1,)
    assert den.coeffs == (1, -3)


def test_real_case_jordan_block():
    fan, div = pn_setup()
    m = monomial_map([[2, 1], [0, 2]], fan)
    num, den = closed_form_real_case(m, div)
    seq = degree_sequence(m, div, 1, 15)
    assert series_of(num, den, 16) == list(seq.terms)


def test_real_case_negative_eigenvalue_falls_back():
    fan, div = pn_setup()
    m = monomial_map([[2, 0], [0, -3]], fan)
    seq = degree_sequence(m, div, 1, 5)
    assert list(seq.terms) == [1, 5, 9, 35, 81, 275]
    num, den = closed_form_real_case(m, div)
    assert num.coeffs == (1, 2, -10)
    assert den.coeffs == (1, -3, -4, 12)


def test_real_case_rejects_nonreal_spectrum():
    fan, div = pn_setup()
    with pytest.raises(PreconditionError):
        closed_form_real_case(monomial_map([[2, -1], [1, 2]], fan), div)


# ---------------------------------------------------------------------------
# dominant-pair hypothesis


def B3():
    return IntegerMatrix(((2, -1, 0), (1, 2, 0), (0, 0, 1)))


def test_hypothesis_surface_pass():
    rep = check_dominant_pair_hypothesis(IntegerMatrix(((2, -1), (1, 2))), 1)
    assert rep.overall
    assert rep.gap_above and rep.gap_below and rep.pair_conjugate
    assert rep.ratio_not_root_of_unity is True
    assert isinstance(rep.certificate, RootOfUnityCertificate)


def test_hypothesis_fails_on_root_of_unity_ratio():
    rep = check_dominant_pair_hypothesis(IntegerMatrix(((1, -1), (1, 1))), 1)
    assert not rep.overall
    assert rep.pair_conjugate
    assert rep.ratio_not_root_of_unity is False
    assert rep.certificate.witness == 4


def test_hypothesis_fails_without_conjugate_pair():
    rep = check_dominant_pair_hypothesis(IntegerMatrix(((2, 0), (0, 3))), 1)
    assert not rep.overall
    assert not rep.pair_conjugate
    assert rep.ratio_not_root_of_unity is None


def test_hypothesis_three_dimensional_pass():
    rep = check_dominant_pair_hypothesis(B3(), 1)
    assert rep.overall
    assert rep.gap_below  # |2 +- i| = sqrt(5) > 1, certified
    assert isinstance(rep.certificate, GeneralRatioCertificate)
    assert not rep.certificate.is_root_of_unity


def test_hypothesis_fails_at_wrong_codegree():
    rep = check_dominant_pair_hypothesis(B3(), 2)
    assert not rep.overall
    assert not rep.gap_above   # positions 1, 2 share a modulus
    assert not rep.pair_conjugate


def test_hypothesis_repeated_real_eigenvalue():
    rep = check_dominant_pair_hypothesis(
        IntegerMatrix(((2, 1, 0), (0, 2, 0), (0, 0, 1))), 1)
    assert not rep.overall
    assert not rep.pair_conjugate
    assert rep.gap_below


def test_hypothesis_codegree_bounds():
    with pytest.raises(PreconditionError):
        check_dominant_pair_hypothesis(B3(), 0)
    with pytest.raises(PreconditionError):
        check_dominant_pair_hypothesis(B3(), 3)
    with pytest.raises(PreconditionError):
        check_dominant_pair_hypothesis(IntegerMatrix(((1, 0), (2, 0))), 1)


def test_hypothesis_uncertifiable_tie():
    # (x^2-4x+5)(x^2-2x+5): two conjugate pairs of modulus sqrt(5) from
    # unrelated factors; the gap below the dominant pair can be neither
    # certified nor structurally refuted
    companion = IntegerMatrix((
        (0, 0, 0, -25),
        (1, 0, 0, 30),
        (0, 1, 0, -18),
        (0, 0, 1, 6),
    ))
    with pytest.raises(RefinementError):
        check_dominant_pair_hypothesis(companion, 1)


def test_hypothesis_report_json():
    rep = check_dominant_pair_hypothesis(B3(), 1)
    d = rep.to_dict()
    json.dumps(d)
    assert d["overall"] is True
    assert d["certificate"]["kind"] == "ratio-polynomial-cyclotomic"


# ---------------------------------------------------------------------------
# general classification dispatch


def test_general_dispatch_three_dimensional_boundary():
    fan, div = pn_setup(3)
    m = monomial_map([[2, -1, 0], [1, 2, 0], [0, 0, 1]], fan)
    res = classify_general(m, div, k=1)
    assert res.verdict == NATURAL_BOUNDARY
    assert res.hypothesis is not None and res.hypothesis.overall
    assert res.closed_form is None


def test_general_dispatch_hypothesis_not_met():
    fan, div = pn_setup(3)
    m = monomial_map([[2, 0, 0], [0, 3, 0], [0, 0, 5]], fan)
    res = classify_general(m, div, k=1)
    assert res.verdict == HYPOTHESIS_NOT_MET
    assert res.hypothesis is not None and not res.hypothesis.overall
    assert res.certificate is None
    json.dumps(res.to_dict())


def test_general_dispatch_delegates_surfaces():
    fan, div = pn_setup()
    res = classify_general(monomial_map([[2, 0], [0, 3]], fan), div)
    assert res.verdict == RATIONAL
    assert res.closed_form is not None
