"""Degree sequence and dynamical degree tests.

The [[2,-1],[1,2]] degree oracle [1, 4, 11, 24, 48, 82] was derived by
hand twice: once through the surface-area measure of A^n P paired with
the support function of P, once by shoelace inclusion-exclusion on the
explicit Minkowski sums.
"""

from fractions import Fraction

import pytest

from toric_degrees.degrees import (
    DegreeSequence,
    MonomialMap,
    _check_growth,
    cesaro_truncation,
    degree_sequence,
    dynamical_degrees,
    monomial_map,
    sequence_to_csv,
    sequence_to_json,
    series_truncation,
    zeta_truncation,
)
from toric_degrees.errors import PreconditionError, SchemaError
from toric_degrees.exact_linalg import IntegerMatrix
from toric_degrees.polytope import (
    LatticePolytope,
    ToricDivisor,
    linear_image,
    mixed_volume_vector,
    polytope_from_divisor,
    product_p1_fan,
    projective_space_fan,
)

F = Fraction


def p2_o1():
    fan = projective_space_fan(2)
    return fan, ToricDivisor(fan, (F(0), F(0), F(1)))


def seq_for(rows, k=1, N=5, **kw):
    fan, div = p2_o1()
    return degree_sequence(monomial_map(rows, fan), div, k, N, **kw)


# ---------------------------------------------------------------------------
# degree sequences


def test_diagonal_map_degrees():
    seq = seq_for([[2, 0], [0, 3]])
    assert list(seq.terms) == [1, 3, 9, 27, 81, 243]


def test_natural_boundary_map_degrees():
    seq = seq_for([[2, -1], [1, 2]])
    assert list(seq.terms) == [1, 4, 11, 24, 48, 82]


def test_k0_is_constant_self_intersection():
    seq = seq_for([[2, -1], [1, 2]], k=0, N=4)
    assert list(seq.terms) == [1, 1, 1, 1, 1]
    geometric = seq_for([[2, -1], [1, 2]], k=0, N=4, use_closed_forms=False)
    assert geometric.terms == seq.terms


def test_topological_degree_closed_form_vs_geometry():
    for rows in ([[2, 0], [0, 3]], [[2, -1], [1, 2]], [[1, -1], [1, 1]]):
        closed = seq_for(rows, k=2, N=4)
        geom = seq_for(rows, k=2, N=4, use_closed_forms=False)
        assert closed.terms == geom.terms
        q = abs(IntegerMatrix(tuple(tuple(r) for r in rows)).det())
        assert list(closed.terms) == [q ** n for n in range(5)]


def test_p1xp1_swap_map():
    fan = product_p1_fan()
    div = ToricDivisor(fan, (F(1),) * 4)
    seq = degree_sequence(monomial_map([[0, 1], [1, 0]], fan), div, 1, 4)
    assert list(seq.terms) == [8, 8, 8, 8, 8]


def test_rejects_bad_inputs():
    fan, div = p2_o1()
    m = monomial_map([[2, 0], [0, 3]], fan)
    with pytest.raises(PreconditionError):
        degree_sequence(m, div, 3, 4)
    with pytest.raises(PreconditionError):
        degree_sequence(m, ToricDivisor(fan, (F(0), F(0), F(0))), 1, 4)
    with pytest.raises(PreconditionError):
        degree_sequence(m, div, 1, -1)
    other = ToricDivisor(product_p1_fan(), (F(1),) * 4)
    with pytest.raises(PreconditionError):
        degree_sequence(m, other, 1, 4)


def test_monomial_map_validation():
    with pytest.raises(PreconditionError):
        monomial_map([[1, 1], [1, 1]])
    with pytest.raises(SchemaError):
        MonomialMap(IntegerMatrix(((1, 0), (0, 1))), projective_space_fan(3))
    m = monomial_map([[2, -1], [1, 2]])
    assert MonomialMap.from_dict(m.to_dict()) == m


def test_degree_sequence_rejects_nonpositive_terms():
    fan, div = p2_o1()
    m = monomial_map([[2, 0], [0, 3]], fan)
    with pytest.raises(PreconditionError):
        DegreeSequence(m, div, 1, (F(1), F(0)))


def test_translation_invariance_of_sequence():
    fan = projective_space_fan(2)
    base = ToricDivisor(fan, (F(0), F(0), F(1)))
    shifted = ToricDivisor(fan, (F(1), F(1), F(-1)))  # polytope translated by (1,1)
    for rows in ([[2, 0], [0, 3]], [[2, -1], [1, 2]]):
        m = monomial_map(rows, fan)
        a = degree_sequence(m, base, 1, 4)
        b = degree_sequence(m, shifted, 1, 4)
        assert a.terms == b.terms


def test_unimodular_conjugation_invariance():
    # mixed volumes of (UAU^-1)^n UP against UP match those of A^n P vs P
    fan, div = p2_o1()
    p = polytope_from_divisor(div)
    a = IntegerMatrix(((2, -1), (1, 2)))
    u = IntegerMatrix(((1, 1), (0, 1)))
    uinv = IntegerMatrix(((1, -1), (0, 1)))
    b = u @ a @ uinv
    up = linear_image(p, u)
    for n in range(5):
        v1 = mixed_volume_vector(linear_image(p, a.pow(n)), p).v(1)
        v2 = mixed_volume_vector(linear_image(up, b.pow(n)), up).v(1)
        assert v1 == v2


def test_growth_ratio_bounded():
    seq = seq_for([[2, -1], [1, 2]], N=10)
    lam = dynamical_degrees(monomial_map([[2, -1], [1, 2]])).midpoint(1)
    ratios = [float(t) / lam ** n for n, t in enumerate(seq.terms)]
    assert 0.5 < min(ratios) and max(ratios) < 3.0


def test_parallel_assembly_is_deterministic(monkeypatch):
    serial = seq_for([[2, -1], [1, 2]], N=6, use_closed_forms=False)
    threaded = seq_for([[2, -1], [1, 2]], N=6, use_closed_forms=False, threads=3)
    assert serial.terms == threaded.terms
    monkeypatch.setenv("TORIC_DEGREES_THREADS", "2")
    via_env = seq_for([[2, -1], [1, 2]], N=6, use_closed_forms=False)
    assert via_env.terms == serial.terms


def test_growth_guard_trips():
    huge = IntegerMatrix(((2 ** 3_500_000, 0), (0, 1)))
    with pytest.raises(PreconditionError):
        _check_growth(huge)


# ---------------------------------------------------------------------------
# dynamical degrees


def test_dynamical_degrees_diagonal():
    dd = dynamical_degrees(IntegerMatrix(((2, 0), (0, 3))))
    assert dd.exact == (F(1), F(3), F(6))
    dd3 = dynamical_degrees(IntegerMatrix(((2, 0, 0), (0, 3, 0), (0, 0, 5))))
    assert dd3.exact == (F(1), F(5), F(15), F(30))


def test_dynamical_degrees_identity():
    dd = dynamical_degrees(IntegerMatrix(((1, 0), (0, 1))))
    assert dd.exact == (F(1), F(1), F(1))


def test_dynamical_degrees_sqrt5():
    dd = dynamical_degrees(monomial_map([[2, -1], [1, 2]]))
    lo, hi = dd.interval(1)
    assert lo * lo <= 5 <= hi * hi
    assert hi - lo < F(1, 10 ** 13)
    assert dd.exact[2] == 5


def test_dynamical_degrees_complex_pair_3d():
    dd = dynamical_degrees(IntegerMatrix(((0, -1, 0), (1, 0, 0), (0, 0, 3))))
    assert dd.exact[1] == 3  # real eigenvalue 3 dominates the unit pair
    lo, hi = dd.interval(2)  # top of the compound is 3i: tight interval
    assert lo <= 3 <= hi and hi - lo < F(1, 10 ** 12)
    assert dd.exact[3] == 3


def test_dynamical_degrees_rejects_singular():
    with pytest.raises(PreconditionError):
        dynamical_degrees(IntegerMatrix(((1, 1), (1, 1))))


# ---------------------------------------------------------------------------
# series transforms


def test_series_truncation_is_verbatim():
    seq = seq_for([[2, 0], [0, 3]])
    assert series_truncation(seq) == list(seq.terms)


def test_zeta_of_constant_ones():
    seq = seq_for([[2, -1], [1, 2]], k=0, N=8)
    assert zeta_truncation(seq) == [F(1)] * 9


def test_zeta_log_derivative_consistency():
    seq = seq_for([[2, -1], [1, 2]], N=12)
    z = zeta_truncation(seq)
    for n in range(1, 13):
        assert n * z[n] == sum(seq.terms[j] * z[n - j] for j in range(1, n + 1))


def test_cesaro_examples():
    seq = seq_for([[2, -1], [1, 2]], k=0, N=5)
    assert cesaro_truncation(seq) == [F(0)] + [F(1)] * 5
    geo = seq_for([[2, 0], [0, 3]], N=6)
    ces = cesaro_truncation(geo)
    assert ces[0] == 0
    for n in range(1, 7):
        assert ces[n] == F(3 ** n - 1, 2 * n)
    assert ces[1] == geo.term(0)


# ---------------------------------------------------------------------------
# emitters


def test_csv_emitter():
    seq = seq_for([[2, 0], [0, 3]], N=3)
    dyn = dynamical_degrees(seq.map)
    text = sequence_to_csv(seq, dyn)
    lines = text.strip().split("\n")
    assert lines[0].startswith("# matrix")
    assert "# lambda_k in [3, 3]" in lines
    assert "n,deg" in lines
    assert lines[-1] == "3,27"


def test_json_emitter():
    seq = seq_for([[2, -1], [1, 2]], N=3)
    dyn = dynamical_degrees(seq.map)
    data = sequence_to_json(seq, dyn)
    assert data["terms"] == ["1", "4", "11", "24"]
    assert data["k"] == 1
    assert data["lambda_k"]["exact"] is None
    assert data["matrix"] == [[2, -1], [1, 2]]
