"""Classification of degree generating series.

Surfaces admit an exact dichotomy: a nonreal eigenvalue pair whose ratio
is not a root of unity forces a natural boundary on the circle of
convergence; every other surface case is a rational function, recovered
here by exact linear-recurrence detection.  In higher dimension we only
check the dominant-pair hypothesis and refuse to guess beyond it.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Sequence, Union

from .degrees import MonomialMap, degree_sequence
from .errors import PreconditionError, RefinementError
from .exact_linalg import (
    GeneralRatioCertificate,
    IntPolynomial,
    IntegerMatrix,
    RootOfUnityCertificate,
    char_poly,
    eigen_spectrum,
    is_square,
    moduli_equal_structurally,
    ratio_is_root_of_unity_2x2,
    ratio_is_root_of_unity_general,
)
from .polytope import ToricDivisor

RATIONAL = "Rational"
NATURAL_BOUNDARY = "NaturalBoundary"
HYPOTHESIS_NOT_MET = "HypothesisNotMet"

Certificate = Union[RootOfUnityCertificate, GeneralRatioCertificate]


# ---------------------------------------------------------------------------
# linear recurrences


@dataclass(frozen=True)
class Recurrence:
    """term(n) = sum_i coefficients[i-1] * term(n-i) for all n >= offset."""

    order: int
    coefficients: tuple[Fraction, ...]
    offset: int

    def holds_on(self, terms: Sequence[Fraction]) -> bool:
        for n in range(self.offset, len(terms)):
            acc = Fraction(0)
            for i, c in enumerate(self.coefficients, start=1):
                acc += c * terms[n - i]
            if acc != terms[n]:
                return False
        return True

    def to_dict(self) -> dict:
        return {"order": self.order, "offset": self.offset,
                "coefficients": [str(c) for c in self.coefficients]}


def _berlekamp_massey(window: Sequence[Fraction]) -> list[Fraction]:
    """Minimal LFSR coefficients for the window, over Q.

    Returns c with window[n] = sum c[i]*window[n-1-i] for n >= len(c).
    """
    c = [Fraction(1)]
    b = [Fraction(1)]
    length, m, prev_delta = 0, 1, Fraction(1)
    for n, s in enumerate(window):
        delta = s
        for i in range(1, length + 1):
            delta += c[i] * window[n - i]
        if delta == 0:
            m += 1
            continue
        coef = delta / prev_delta
        if 2 * length <= n:
            old = c[:]
            if len(c) < len(b) + m:
                c = c + [Fraction(0)] * (len(b) + m - len(c))
            for i, bi in enumerate(b):
                c[i + m] -= coef * bi
            length, b, prev_delta, m = n + 1 - length, old, delta, 1
        else:
            if len(c) < len(b) + m:
                c = c + [Fraction(0)] * (len(b) + m - len(c))
            for i, bi in enumerate(b):
                c[i + m] -= coef * bi
            m += 1
    return [-ci for ci in c[1:length + 1]]


def find_recurrence(terms: Sequence[Fraction], max_order: int = 12,
                    max_transient: int = 4) -> Optional[Recurrence]:
    """Minimal verified linear recurrence, or None.

    Fits on a prefix (after optionally discarding up to max_transient
    initial terms) and verifies on every remaining term exactly.
    """
    terms = [Fraction(t) for t in terms]
    if len(terms) < 2 * max_order + 10:
        raise PreconditionError("need at least 2*max_order + 10 terms")
    best: Optional[Recurrence] = None
    for transient in range(max_transient + 1):
        window = terms[transient:transient + 2 * max_order]
        coeffs = _berlekamp_massey(window)
        r = len(coeffs)
        if r == 0 or r > max_order:
            continue
        cand = Recurrence(r, tuple(coeffs), transient + r)
        if not cand.holds_on(terms):
            continue
        if best is None or (cand.order, cand.offset) < (best.order, best.offset):
            best = cand
    return best


def rational_function_from_recurrence(
        terms: Sequence[Fraction], rec: Recurrence
) -> tuple[IntPolynomial, IntPolynomial]:
    """Closed form num/den with integer coefficients, fully cancelled.

    den = 1 - sum c_i z^i; the product den * series must vanish from the
    recurrence offset on, which is asserted exactly.
    """
    terms = [Fraction(t) for t in terms]
    den_q = [Fraction(1)] + [-c for c in rec.coefficients]
    prod = []
    for n in range(len(terms)):
        acc = Fraction(0)
        for i, dc in enumerate(den_q):
            if i <= n:
                acc += dc * terms[n - i]
        prod.append(acc)
    if any(p != 0 for p in prod[rec.offset:]):
        raise PreconditionError("recurrence does not annihilate the series")
    num_q = prod[:rec.offset]
    while num_q and num_q[-1] == 0:
        num_q.pop()
    if not num_q:
        num_q = [Fraction(0)]
    lcm = 1
    for c in num_q + den_q:
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    num = IntPolynomial(tuple(int(c * lcm) for c in num_q))
    den = IntPolynomial(tuple(int(c * lcm) for c in den_q))
    g = num.gcd(den)
    if g.degree >= 1:
        num = num.exact_div(g)
        den = den.exact_div(g)
    cg = gcd(num.content() or den.content(), den.content())
    if cg > 1:
        num = IntPolynomial(tuple(c // cg for c in num.coeffs))
        den = IntPolynomial(tuple(c // cg for c in den.coeffs))
    if den.coeffs and den.coeffs[0] < 0:
        num = -num
        den = -den
    return num, den


# ---------------------------------------------------------------------------
# surface dichotomy


@dataclass(frozen=True)
class ClassificationResult:
    verdict: str
    report: str
    closed_form: Optional[tuple[IntPolynomial, IntPolynomial]] = None
    recurrence: Optional[Recurrence] = None
    certificate: Optional[Certificate] = None
    hypothesis: Optional["HypothesisReport"] = None
    evidence: Optional[dict] = None

    def to_dict(self) -> dict:
        cf = None
        if self.closed_form is not None:
            cf = {"numerator": list(self.closed_form[0].coeffs),
                  "denominator": list(self.closed_form[1].coeffs)}
        return {
            "verdict": self.verdict,
            "report": self.report,
            "closed_form": cf,
            "recurrence": self.recurrence.to_dict() if self.recurrence else None,
            "certificate": certificate_dict(self.certificate),
            "hypothesis": self.hypothesis.to_dict() if self.hypothesis else None,
            "evidence": self.evidence,
        }


def certificate_dict(cert: Optional[Certificate]) -> Optional[dict]:
    if cert is None:
        return None
    if isinstance(cert, RootOfUnityCertificate):
        return {"kind": "quadratic-power-sum",
                "is_root_of_unity": cert.is_root_of_unity,
                "witness": cert.witness,
                "table": [[u, str(lhs), str(rhs)] for u, lhs, rhs in cert.table]}
    return {"kind": "ratio-polynomial-cyclotomic",
            "is_root_of_unity": cert.is_root_of_unity,
            "order": cert.order,
            "candidate_orders": list(cert.candidate_orders)}


def classify_surface(map: MonomialMap, div: ToricDivisor, N: int = 40,
                     max_order: int = 12) -> ClassificationResult:
    """Exact dichotomy for surface monomial maps against an ample divisor."""
    if map.dim != 2:
        raise PreconditionError("surface classification needs d = 2")
    a = map.matrix
    t, q = a.trace(), a.det()
    disc = t * t - 4 * q
    certificate: Optional[Certificate] = None
    if disc < 0:
        certificate = ratio_is_root_of_unity_2x2(a)
        if not certificate.is_root_of_unity:
            report = ("nonreal eigenvalue pair with non-root-of-unity ratio: "
                      "the generating series has a natural boundary on its "
                      "circle of convergence; power-sum test failed for all "
                      "u in {1,2,3,4,6}")
            return ClassificationResult(NATURAL_BOUNDARY, report,
                                        certificate=certificate)
    seq = degree_sequence(map, div, 1, N)
    rec = find_recurrence(seq.terms, max_order=max_order)
    if rec is None:
        raise PreconditionError(
            "expected a rational series but found no recurrence of order <= "
            f"{max_order} over {N + 1} terms; N is likely too small. terms = "
            + ", ".join(str(t) for t in seq.terms))
    num, den = rational_function_from_recurrence(seq.terms, rec)
    shape = "root-of-unity ratio" if disc < 0 else "real eigenvalues"
    report = (f"rational series ({shape}): verified order-{rec.order} "
              f"recurrence from n = {rec.offset} on {N + 1 - rec.offset} terms")
    return ClassificationResult(RATIONAL, report, closed_form=(num, den),
                                recurrence=rec, certificate=certificate)


def closed_form_real_case(map: MonomialMap, div: ToricDivisor,
                          N: int = 40) -> tuple[IntPolynomial, IntPolynomial]:
    """Closed form for the real-eigenvalue surface case.

    Positive rational eigenvalues: the reversed characteristic polynomial
    annihilates the sequence after a short transient, giving the
    p/(1-mu1 z) + q/(1-mu2 z) shape directly.  Otherwise falls back to
    recurrence detection.
    """
    if map.dim != 2:
        raise PreconditionError("real-case closed form needs d = 2")
    a = map.matrix
    t, q = a.trace(), a.det()
    disc = t * t - 4 * q
    if disc < 0:
        raise PreconditionError("nonreal eigenvalues: use classify_surface")
    seq = degree_sequence(map, div, 1, N)
    terms = list(seq.terms)
    if is_square(disc):
        s = isqrt(disc)
        mu1, mu2 = (t + s) // 2, (t - s) // 2
        if mu1 > 0 and mu2 > 0:
            prod = []
            for n in range(len(terms)):
                acc = terms[n]
                if n >= 1:
                    acc -= t * terms[n - 1]
                if n >= 2:
                    acc += q * terms[n - 2]
                prod.append(acc)
            for n0 in range(2, 7):
                if all(p == 0 for p in prod[n0:]):
                    rec = Recurrence(2, (Fraction(t), Fraction(-q)), n0)
                    return rational_function_from_recurrence(terms, rec)
    for order in (4, 12):
        rec = find_recurrence(terms, max_order=order)
        if rec is not None:
            return rational_function_from_recurrence(terms, rec)
    raise PreconditionError("no closed form found in the real case; increase N")


# ---------------------------------------------------------------------------
# dominant-pair hypothesis (general dimension)


@dataclass(frozen=True)
class HypothesisReport:
    """Four-part verdict on the dominant-pair spectral hypothesis at k."""

    k: int
    gap_above: bool
    pair_conjugate: bool
    gap_below: bool
    ratio_not_root_of_unity: Optional[bool]
    overall: bool
    certificate: Optional[Certificate] = None

    def to_dict(self) -> dict:
        return {"k": self.k,
                "gap_above": self.gap_above,
                "pair_conjugate": self.pair_conjugate,
                "gap_below": self.gap_below,
                "ratio_not_root_of_unity": self.ratio_not_root_of_unity,
                "overall": self.overall,
                "certificate": certificate_dict(self.certificate)}


def _separation(spec, flat, bounds, m: int) -> Optional[bool]:
    """Certify |mu_m| > |mu_{m+1}| for the modulus-sorted sequence.

    True: the top-m set is separated from the rest (min of lower bounds
    beats max of upper bounds).  False: the m-th and (m+1)-th moduli are
    structurally equal.  None: undecided at this precision.
    """
    lo_min = min(bounds[flat[p]][0] for p in range(1, m + 1))
    hi_max = max(bounds[flat[p]][1] for p in range(m + 1, len(flat)))
    if lo_min > hi_max:
        return True
    i, j = flat[m], flat[m + 1]
    if i == j:
        return False
    if moduli_equal_structurally(spec, i, j):
        return False
    return None


def check_dominant_pair_hypothesis(a: IntegerMatrix, k: int,
                                   precision: int = 64,
                                   attempts: int = 5) -> HypothesisReport:
    """Check the spectral hypothesis behind the higher-dimensional
    natural-boundary criterion at codegree k.

    Requires, for moduli sorted decreasingly with multiplicity: a strict
    gap above position k (vacuous at k = 1), a nonreal conjugate pair in
    positions k, k+1, a strict gap below position k+1 (vacuous at
    k = d-1), and the pair ratio not a root of unity.
    """
    d = a.dim
    if not 1 <= k <= d - 1:
        raise PreconditionError("k must lie in 1..d-1")
    if a.det() == 0:
        raise PreconditionError("hypothesis check requires det A != 0")
    f = char_poly(a)
    prec = precision
    for attempt in range(attempts):
        spec = eigen_spectrum(a, prec)
        flat = [None]  # 1-based positions
        for idx, e in enumerate(spec.roots):
            flat.extend([idx] * e.multiplicity)
        bounds = [e.modulus_bounds(bits=prec + 16) for e in spec.roots]

        gap_above = True if k == 1 else _separation(spec, flat, bounds, k - 1)
        gap_below = True if k == d - 1 else _separation(spec, flat, bounds, k + 1)
        i, j = flat[k], flat[k + 1]
        pair = (i != j and not spec.roots[i].is_real
                and spec.roots[i].conj == j)

        if gap_above is None or gap_below is None:
            prec *= 2
            continue
        if not (gap_above and gap_below and pair):
            return HypothesisReport(k, gap_above, pair, gap_below, None, False)
        if d == 2:
            cert: Certificate = ratio_is_root_of_unity_2x2(a)
        else:
            cert = ratio_is_root_of_unity_general(f, i, j, precision=prec)
        ratio_ok = not cert.is_root_of_unity
        return HypothesisReport(k, True, True, True, ratio_ok, ratio_ok, cert)
    raise RefinementError(
        f"uncertifiable strict modulus gap at precision {prec // 2}")


def classify_general(map: MonomialMap, div: ToricDivisor, k: int = 1,
                     N: int = 40, precision: int = 64) -> ClassificationResult:
    """Dimension dispatch: exact dichotomy for surfaces; in higher
    dimension, the dominant-pair hypothesis is the only certificate."""
    if map.dim == 2:
        return classify_surface(map, div, N)
    report_obj = check_dominant_pair_hypothesis(map.matrix, k, precision)
    if report_obj.overall:
        report = ("dominant-pair hypothesis holds at k = "
                  f"{k}: natural boundary follows; no finite closed-form "
                  "certificate exists beyond the hypothesis itself")
        return ClassificationResult(NATURAL_BOUNDARY, report,
                                    certificate=report_obj.certificate,
                                    hypothesis=report_obj)
    report = (f"dominant-pair hypothesis fails at k = {k}; no verdict is "
              "offered in dimension >= 3 without it")
    return ClassificationResult(HYPOTHESIS_NOT_MET, report,
                                hypothesis=report_obj)
