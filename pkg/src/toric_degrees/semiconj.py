"""Integer semiconjugacy search between powers of 2x2 integer matrices.

find_semiconjugacy looks for X with X A^u = A'^u X and det X != 0 for
u in (1, 2, 3, 4, 6), smallest u first.  The search over the rational
solution space is complete: the determinant restricted to that span is a
quadratic form in the coefficients, so it vanishes everywhere iff it
vanishes on every basis vector and every pairwise sum.  A bounded
coefficient box therefore never needs shells beyond 1; the bound stays a
parameter only for interface stability.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .degrees import DegreeSequence
from .errors import PreconditionError
from .exact_linalg import (
    IntegerMatrix,
    absolute_irreducibility_2x2,
    char_poly,
    kernel_basis,
    primitive_vector,
)

_POWERS = (1, 2, 3, 4, 6)


def intertwiner_space(a: IntegerMatrix, a_prime: IntegerMatrix,
                      u: int) -> tuple[IntegerMatrix, ...]:
    """Primitive integer basis of {X : X A^u = A'^u X}, solved over Q."""
    if a.dim != 2 or a_prime.dim != 2:
        raise PreconditionError("2x2 matrices required")
    if u < 1:
        raise PreconditionError("u must be positive")
    m = a.pow(u).rows
    mp = a_prime.pow(u).rows
    # unknowns x_{ik} row-major; (X M - M' X)_{ij} = 0
    rows = []
    for i in range(2):
        for j in range(2):
            coeff = [Fraction(0)] * 4
            for k in range(2):
                coeff[2 * i + k] += m[k][j]
                coeff[2 * k + j] -= mp[i][k]
            rows.append(coeff)
    out = []
    for v in kernel_basis(rows, ncols=4):
        w = primitive_vector(v)
        out.append(IntegerMatrix(((w[0], w[1]), (w[2], w[3]))))
    return tuple(out)


def _first_invertible(m: IntegerMatrix, mp: IntegerMatrix,
                      basis) -> Optional[IntegerMatrix]:
    if m == mp:
        return IntegerMatrix.identity(2)
    for x in basis:
        if x.det() != 0:
            return x
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            s = basis[i] + basis[j]
            if s.det() != 0:
                return s
    # the det form vanished on all shell-1 probes, hence identically:
    # every lattice combination is singular, no box to search
    return None


@dataclass(frozen=True)
class Semiconjugacy:
    u: int
    X: IntegerMatrix
    checks: dict

    def to_dict(self) -> dict:
        return {"u": self.u, "X": [list(r) for r in self.X.rows],
                "checks": dict(self.checks)}


def find_semiconjugacy(a: IntegerMatrix, a_prime: IntegerMatrix,
                       box_bound: int = 10) -> Optional[Semiconjugacy]:
    """First (u, X) with X A^u = A'^u X and det X != 0, or None.

    Absolute irreducibility of both inputs is checked and recorded in the
    result's checks; the search itself runs regardless, since the
    conjugate-pair guarantee is a theorem hypothesis, not a solver need.
    """
    if a.dim != 2 or a_prime.dim != 2:
        raise PreconditionError("2x2 matrices required")
    if a.det() == 0 or a_prime.det() == 0:
        raise PreconditionError("zero determinant")
    if box_bound < 1:
        raise PreconditionError("box bound must be at least 1")
    irr = (absolute_irreducibility_2x2(a),
           absolute_irreducibility_2x2(a_prime))
    for u in _POWERS:
        m, mp = a.pow(u), a_prime.pow(u)
        if char_poly(m) != char_poly(mp):
            continue
        basis = intertwiner_space(a, a_prime, u)
        if not basis:
            continue
        x = _first_invertible(m, mp, basis)
        if x is None:
            continue
        if x @ m != mp @ x or x.det() == 0:
            raise RuntimeError("semiconjugacy candidate failed verification")
        checks = {"absolutely_irreducible": list(irr),
                  "char_poly_power": u,
                  "space_dim": len(basis),
                  "det_X": x.det(),
                  "intertwines": True}
        return Semiconjugacy(u=u, X=x, checks=checks)
    return None


def degree_sequences_equal(seq_a: DegreeSequence,
                           seq_b: DegreeSequence) -> bool:
    """Exact termwise equality; a pipeline precondition helper."""
    if len(seq_a.terms) != len(seq_b.terms):
        raise PreconditionError("sequences have different lengths")
    return seq_a.terms == seq_b.terms
