"""Semiconjugacy search between matrix powers.

Hand oracles: P = [[1,1],[0,1]] conjugates [[2,-1],[1,2]] to [[3,-2],[1,1]]
(computed by hand: PA = [[3,1],[1,2]], then right-multiply by
P^-1 = [[1,-1],[0,1]]).  The swap matrix [[0,1],[1,0]] intertwines any A
with its transpose.
"""

import json
import random
from math import gcd

import pytest

from toric_degrees.degrees import degree_sequence, monomial_map
from toric_degrees.errors import PreconditionError
from toric_degrees.exact_linalg import (
    IntegerMatrix,
    absolute_irreducibility_2x2,
    char_poly,
)
from toric_degrees.polytope import ToricDivisor, projective_space_fan
from toric_degrees.semiconj import (
    Semiconjugacy,
    degree_sequences_equal,
    find_semiconjugacy,
    intertwiner_space,
)


def M(rows):
    return IntegerMatrix(tuple(tuple(r) for r in rows))


def test_identity_pair_gives_identity():
    a = M([[2, -1], [1, 2]])
    res = find_semiconjugacy(a, a)
    assert res.u == 1
    assert res.X == IntegerMatrix.identity(2)
    assert res.checks["space_dim"] == 2
    assert res.checks["absolutely_irreducible"] == [True, True]
    json.dumps(res.to_dict())


def test_unimodular_conjugate_pair():
    a = M([[2, -1], [1, 2]])
    ap = M([[3, -2], [1, 1]])
    res = find_semiconjugacy(a, ap)
    assert res.u == 1
    assert res.X @ a == ap @ res.X
    assert res.X.det() != 0
    # powers commute through the intertwiner
    for t in (2, 3, 5):
        assert res.X @ a.pow(t) == ap.pow(t) @ res.X


def test_transpose_pair_succeeds_despite_scalar_power():
    # A^4 = -4I, so A is not absolutely irreducible; the check is recorded
    # but the search still finds the u = 1 intertwiner
    a = M([[1, -1], [1, 1]])
    res = find_semiconjugacy(a, a.transpose())
    assert res is not None and res.u == 1
    assert res.checks["absolutely_irreducible"] == [False, False]
    assert res.X @ a == a.transpose() @ res.X
    assert res.X.det() != 0


def test_distinct_spectra_return_none():
    assert find_semiconjugacy(M([[2, -1], [1, 2]]), M([[1, -1], [1, 1]])) \
        is None


def test_scalar_vs_jordan_block_returns_none():
    # equal char polys at every u, but every intertwiner is singular
    s = M([[2, 0], [0, 2]])
    j = M([[2, 1], [0, 2]])
    assert find_semiconjugacy(s, j) is None
    basis = intertwiner_space(s, j, 1)
    assert len(basis) == 2
    assert all(x.det() == 0 for x in basis)
    assert (basis[0] + basis[1]).det() == 0


def test_preconditions():
    a = M([[2, -1], [1, 2]])
    with pytest.raises(PreconditionError):
        find_semiconjugacy(a, M([[1, 2], [2, 4]]))  # det 0
    with pytest.raises(PreconditionError):
        find_semiconjugacy(a, a, box_bound=0)
    with pytest.raises(PreconditionError):
        intertwiner_space(a, a, 0)
    with pytest.raises(PreconditionError):
        find_semiconjugacy(IntegerMatrix.identity(3), IntegerMatrix.identity(3))


def test_intertwiner_space_properties():
    a = M([[2, -1], [1, 2]])
    ap = M([[3, -2], [1, 1]])
    basis = intertwiner_space(a, ap, 1)
    # conjugate matrices with irreducible char poly: dimension exactly 2
    assert len(basis) == 2
    for x in basis:
        assert x @ a == ap @ x
        flat = [c for row in x.rows for c in row]
        g = 0
        for c in flat:
            g = gcd(g, abs(c))
        assert g == 1
        assert next(c for c in flat if c != 0) > 0


def _random_unimodular(rng, steps=4):
    p = IntegerMatrix.identity(2)
    for _ in range(steps):
        k = rng.randint(-3, 3)
        if rng.random() < 0.5:
            p = p @ M([[1, k], [0, 1]])
        else:
            p = p @ M([[1, 0], [k, 1]])
    return p


def _inverse_unimodular(p):
    (a, b), (c, d) = p.rows
    det = a * d - b * c
    assert det in (1, -1)
    return M([[d * det, -b * det], [-c * det, a * det]])


def test_random_conjugations_found_at_u_1():
    rng = random.Random(20260815)
    found = 0
    while found < 12:
        a = M([[rng.randint(-5, 5) for _ in range(2)] for _ in range(2)])
        if a.det() == 0 or not absolute_irreducibility_2x2(a):
            continue
        p = _random_unimodular(rng)
        ap = p @ a @ _inverse_unimodular(p)
        res = find_semiconjugacy(a, ap)
        assert res is not None and res.u == 1
        assert res.X @ a == ap @ res.X and res.X.det() != 0
        assert char_poly(a) == char_poly(ap)
        found += 1


def test_higher_power_match():
    # A and -A differ at u = 1 for odd-trace A but agree at u = 2
    a = M([[2, -1], [1, 1]])
    neg = a.scale(-1)
    assert char_poly(a) != char_poly(neg)
    res = find_semiconjugacy(a, neg)
    assert res is not None
    assert res.u == 2
    assert res.X @ a.pow(2) == neg.pow(2) @ res.X


def test_degree_sequences_equal():
    fan = projective_space_fan(2)
    from fractions import Fraction as F
    div = ToricDivisor(fan, (F(0), F(0), F(1)))
    s23 = degree_sequence(monomial_map([[2, 0], [0, 3]], fan), div, 1, 8)
    s32 = degree_sequence(monomial_map([[3, 0], [0, 2]], fan), div, 1, 8)
    s24 = degree_sequence(monomial_map([[2, 0], [0, 4]], fan), div, 1, 8)
    assert degree_sequences_equal(s23, s23)
    assert degree_sequences_equal(s23, s32)
    assert not degree_sequences_equal(s23, s24)
    assert s23.terms[1] != s24.terms[1]  # differ already at n = 1
    short = degree_sequence(monomial_map([[2, 0], [0, 3]], fan), div, 1, 5)
    with pytest.raises(PreconditionError):
        degree_sequences_equal(s23, short)


def test_result_serializes():
    a = M([[2, -1], [1, 2]])
    res = find_semiconjugacy(a, M([[3, -2], [1, 1]]))
    blob = json.dumps(res.to_dict())
    assert "checks" in blob and isinstance(res, Semiconjugacy)
