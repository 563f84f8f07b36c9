"""Degree sequences and dynamical degrees of dominant monomial maps.

The n-th k-degree is d! times the mixed volume of k copies of A^n P
against d-k copies of P, where P is the divisor polytope.  Everything
is exact; dynamical degrees come back as certified rational intervals
(exact values where the spectrum allows it).
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence, Union

from .errors import PreconditionError, SchemaError
from .exact_linalg import IntegerMatrix, compound_matrix, eigen_spectrum
from .polytope import (
    Fan,
    LatticePolytope,
    ToricDivisor,
    is_ample,
    linear_image,
    mixed_volume_vector,
    polytope_from_divisor,
    projective_space_fan,
)

# guard against runaway coordinate growth: ~10^6 decimal digits
_MAX_ENTRY_BITS = 3_400_000


@dataclass(frozen=True)
class MonomialMap:
    """Dominant monomial self-map, represented by its character matrix."""

    matrix: IntegerMatrix
    fan: Fan

    def __post_init__(self):
        if self.fan.dim != self.matrix.dim:
            raise SchemaError("fan and matrix dimensions differ")
        if self.matrix.det() == 0:
            raise PreconditionError("dominant monomial map requires det A != 0")

    @property
    def dim(self) -> int:
        return self.matrix.dim

    def to_dict(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix.rows], "fan": self.fan.to_dict()}

    @staticmethod
    def from_dict(data: dict) -> "MonomialMap":
        try:
            rows = tuple(tuple(int(c) for c in r) for r in data["matrix"])
            fan = Fan.from_dict(data["fan"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed monomial map: {exc}") from exc
        return MonomialMap(IntegerMatrix(rows), fan)


def monomial_map(rows: Sequence[Sequence[int]], fan: Optional[Fan] = None) -> MonomialMap:
    """Convenience constructor; defaults to the projective-space fan."""
    a = IntegerMatrix(tuple(tuple(int(c) for c in r) for r in rows))
    return MonomialMap(a, fan if fan is not None else projective_space_fan(a.dim))


@dataclass(frozen=True)
class DegreeSequence:
    """deg_{D,k}(phi^n) for n = 0..N, exact."""

    map: MonomialMap
    divisor: ToricDivisor
    k: int
    terms: tuple[Fraction, ...]

    def __post_init__(self):
        if any(t <= 0 for t in self.terms):
            raise PreconditionError("degree terms must be positive")

    @property
    def N(self) -> int:
        return len(self.terms) - 1

    def term(self, n: int) -> Fraction:
        return self.terms[n]


def _check_growth(a: IntegerMatrix) -> None:
    biggest = max(abs(c) for row in a.rows for c in row)
    if biggest.bit_length() > _MAX_ENTRY_BITS:
        raise PreconditionError("iterate entries exceed the coordinate-size guard")


def _thread_count(threads: Optional[int]) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("TORIC_DEGREES_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def degree_sequence(map: MonomialMap, div: ToricDivisor, k: int, N: int,
                    use_closed_forms: bool = True,
                    threads: Optional[int] = None) -> DegreeSequence:
    """Exact degree sequence for n = 0..N.

    Requires an ample divisor.  k = 0 and k = d admit closed forms
    (constant, resp. |det A|^n times the self-intersection); the
    geometric path is kept available for cross-checks.
    """
    d = map.dim
    if not 0 <= k <= d:
        raise PreconditionError(f"codegree index k must lie in 0..{d}")
    if N < 0:
        raise PreconditionError("N must be nonnegative")
    if div.fan is not map.fan and div.fan != map.fan:
        raise PreconditionError("divisor and map live on different fans")
    if not is_ample(div):
        raise PreconditionError("degree sequences are defined against ample divisors")
    p = polytope_from_divisor(div)
    dfact = factorial(d)
    base = dfact * p.volume

    if use_closed_forms and k == 0:
        return DegreeSequence(map, div, k, (base,) * (N + 1))
    if use_closed_forms and k == d:
        q = abs(map.matrix.det())
        return DegreeSequence(map, div, k, tuple(base * q ** n for n in range(N + 1)))

    def term(n: int) -> Fraction:
        an = map.matrix.pow(n)
        _check_growth(an)
        image = linear_image(p, an)
        return dfact * mixed_volume_vector(image, p).v(k)

    workers = _thread_count(threads)
    if workers == 1:
        terms = [term(n) for n in range(N + 1)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            terms = list(pool.map(term, range(N + 1)))
    return DegreeSequence(map, div, k, tuple(terms))


# ---------------------------------------------------------------------------
# dynamical degrees


@dataclass(frozen=True)
class DynamicalDegrees:
    """Certified enclosures [lower_k, upper_k] for all dynamical degrees."""

    dim: int
    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]
    exact: tuple[Optional[Fraction], ...]

    def interval(self, k: int) -> tuple[Fraction, Fraction]:
        return self.lower[k], self.upper[k]

    def midpoint(self, k: int) -> float:
        return float((self.lower[k] + self.upper[k]) / 2)


def dynamical_degrees(map: Union[MonomialMap, IntegerMatrix],
                      precision: int = 64) -> DynamicalDegrees:
    """lambda_k as the spectral radius of the k-th compound matrix.

    The k largest eigenvalue moduli of A multiply to the top modulus of
    Lambda^k A, so no eigenvalue ordering or gap certification is needed:
    max of lower bounds / max of upper bounds is always a valid interval.
    """
    a = map.matrix if isinstance(map, MonomialMap) else map
    if a.det() == 0:
        raise PreconditionError("dynamical degrees require det A != 0")
    d = a.dim
    lower = [Fraction(1)]
    upper = [Fraction(1)]
    exact: list[Optional[Fraction]] = [Fraction(1)]
    for k in range(1, d):
        spec = eigen_spectrum(compound_matrix(a, k), precision)
        bounds = [e.modulus_bounds(bits=precision + 16) for e in spec.roots]
        lo = max(b[0] for b in bounds)
        hi = max(b[1] for b in bounds)
        top = spec.roots[0]
        known: Optional[Fraction] = None
        if top.exact is not None:
            val = abs(top.exact)
            if all(b[1] <= val for e, b in zip(spec.roots, bounds) if e is not top):
                known = val
        if known is not None:
            lo = hi = known
        lower.append(max(lo, Fraction(0)))
        upper.append(hi)
        exact.append(known)
    q = Fraction(abs(a.det()))
    lower.append(q)
    upper.append(q)
    exact.append(q)
    return DynamicalDegrees(d, tuple(lower), tuple(upper), tuple(exact))


# ---------------------------------------------------------------------------
# series transforms


def series_truncation(seq: DegreeSequence) -> list[Fraction]:
    """Coefficients of the degree generating series, verbatim."""
    return list(seq.terms)


def zeta_truncation(seq: DegreeSequence) -> list[Fraction]:
    """First N+1 coefficients of exp(sum_{n>=1} deg(n)/n z^n).

    Standard exp-of-series recurrence: n Z_n = sum_{j=1..n} deg(j) Z_{n-j}.
    """
    n_max = seq.N
    z = [Fraction(1)]
    for n in range(1, n_max + 1):
        acc = Fraction(0)
        for j in range(1, n + 1):
            acc += seq.terms[j] * z[n - j]
        z.append(acc / n)
    return z


def cesaro_truncation(seq: DegreeSequence) -> list[Fraction]:
    """Partial-sum averages: coefficient n is (sum_{m<n} deg(m))/n, n >= 1.

    The n = 0 coefficient of the transform is 0 by convention (the series
    starts at n = 1).
    """
    out = [Fraction(0)]
    partial = Fraction(0)
    for n in range(1, seq.N + 1):
        partial += seq.terms[n - 1]
        out.append(partial / n)
    return out


# ---------------------------------------------------------------------------
# emitters


def _rat(x: Fraction) -> str:
    return str(x)


def sequence_to_json(seq: DegreeSequence,
                     dyn: Optional[DynamicalDegrees] = None) -> dict:
    out = {
        "matrix": [list(r) for r in seq.map.matrix.rows],
        "divisor": seq.divisor.to_dict(),
        "k": seq.k,
        "terms": [_rat(t) for t in seq.terms],
    }
    if dyn is not None:
        lo, hi = dyn.interval(seq.k)
        out["lambda_k"] = {
            "lower": _rat(lo),
            "upper": _rat(hi),
            "exact": _rat(dyn.exact[seq.k]) if dyn.exact[seq.k] is not None else None,
        }
    return out


def sequence_to_csv(seq: DegreeSequence,
                    dyn: Optional[DynamicalDegrees] = None) -> str:
    lines = [
        f"# matrix = {[list(r) for r in seq.map.matrix.rows]}",
        f"# divisor coeffs = {','.join(_rat(c) for c in seq.divisor.coeffs)}",
        f"# k = {seq.k}",
    ]
    if dyn is not None:
        lo, hi = dyn.interval(seq.k)
        lines.append(f"# lambda_k in [{_rat(lo)}, {_rat(hi)}]")
    lines.append("n,deg")
    for n, t in enumerate(seq.terms):
        lines.append(f"{n},{_rat(t)}")
    return "\n".join(lines) + "\n"
