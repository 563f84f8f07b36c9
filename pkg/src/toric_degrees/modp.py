"""Mod-p reductions of degree sequences and finite-range probes of the
weak-periodicity obstruction to algebraicity.

The probes falsify specific periodicities over a finite index range only;
report vocabulary stays at "witness" / "exhausted" so no run ever
over-claims transcendence.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from .degrees import DegreeSequence, MonomialMap, degree_sequence
from .errors import PreconditionError
from .fourier import TWO_PI, build_surface_plf
from .polytope import ToricDivisor

# deterministic Miller-Rabin witness set for n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_prime(p) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise PreconditionError(f"{p!r} is not prime")


def _residue(x, p: int) -> int:
    """x mod p for a rational x whose denominator is a unit mod p."""
    num, den = x.numerator, x.denominator
    if den % p == 0:
        raise PreconditionError(
            f"denominator of {x} vanishes mod {p}: reduction undefined")
    return num * pow(den, -1, p) % p


@dataclass(frozen=True)
class ModPSequence:
    p: int
    terms: tuple[int, ...]
    source: Optional[DegreeSequence] = None

    def __post_init__(self):
        if any(not (0 <= t < self.p) for t in self.terms):
            raise PreconditionError("terms must lie in [0, p)")
        if self.source is not None:
            src = self.source.terms
            if len(src) != len(self.terms) or any(
                    _residue(a, self.p) != b
                    for a, b in zip(src, self.terms)):
                raise PreconditionError("terms do not reduce the source")

    @property
    def N(self) -> int:
        return len(self.terms) - 1

    def term(self, n: int) -> int:
        return self.terms[n]

    def to_dict(self) -> dict:
        return {"p": self.p, "N": self.N, "terms": list(self.terms)}


def reduce_mod_p(seq: DegreeSequence, p: int) -> ModPSequence:
    _require_prime(p)
    return ModPSequence(p=p, terms=tuple(_residue(t, p) for t in seq.terms),
                        source=seq)


# ---------------------------------------------------------------------------
# fast path: degree sequence directly mod p, without the huge exact integers


def _power_st(tau: int, q: int, n: int) -> tuple[int, int]:
    """Exact (s_n, t_n) with A^n = s_n I + t_n A, by binary powering in
    Z[A] where A^2 = tau A - q."""
    rs, rt = 1, 0
    bs, bt = 0, 1
    while n:
        if n & 1:
            rs, rt = rs * bs - q * rt * bt, rs * bt + rt * bs + tau * rt * bt
        bs, bt = bs * bs - q * bt * bt, bt * (2 * bs + tau * bt)
        n >>= 1
    return rs, rt


def _to_mpf(x) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def _breakpoint_mp(prov, stored: float, delta) -> mpmath.mpf:
    """Re-derive a breakpoint angle from its exact provenance at the
    current working precision; the stored float64 value picks the branch."""
    if prov[0] == "axis":
        return mpmath.mpf(prov[1]) * mpmath.pi / 2 % (2 * mpmath.pi)
    dp, dr = prov[1], prov[2]
    base = mpmath.atan(-_to_mpf(dp) * delta / _to_mpf(dr))
    best = None
    for shift in (0, 1, 2):
        cand = (base + shift * mpmath.pi) % (2 * mpmath.pi)
        d = abs(float(cand) - stored)
        d = min(d, TWO_PI - d)
        if best is None or d < best[0]:
            best = (d, cand)
    return best[1]


def _resolve_near(plf, n: int, jb: int, s: int, t: int,
                  a_res, b_res, p: int) -> int:
    """Residue of deg(n) when n*theta falls within tolerance of breakpoint
    jb.  Continuity makes the arc choice immaterial whenever the two
    candidate residues agree; otherwise the side is decided by a precision
    ladder and, as a last resort, exactly."""
    left = (jb - 1) % len(plf.arcs)
    right = jb
    vl = (a_res[left] * s + b_res[left] * t) % p
    vr = (a_res[right] * s + b_res[right] * t) % p
    if vl == vr:
        return vl
    for bits in (200, 1000):
        with mpmath.workprec(bits):
            delta = mpmath.sqrt(4 * plf.det - plf.tau * plf.tau)
            theta = mpmath.atan2(delta, plf.tau) % (2 * mpmath.pi)
            beta = _breakpoint_mp(plf.provenance[jb], plf.breakpoints[jb],
                                  delta)
            d = (n * theta - beta) % (2 * mpmath.pi)
            if d > mpmath.pi:
                d -= 2 * mpmath.pi
            if abs(d) > mpmath.mpf(2) ** (-(bits // 2)):
                return vr if d > 0 else vl
    # exact adjudication: sign of lambda1^n (F_right - F_left)(n theta),
    # a rational number once the explicit matrix power is known
    s_n, t_n = _power_st(plf.tau, plf.det, n)
    re_n = Fraction(s_n) + Fraction(t_n * plf.tau, 2)
    half_t = Fraction(t_n, 2)
    p_l, r_l = plf.arcs[left]
    p_r, r_r = plf.arcs[right]
    diff = (p_r - p_l) * re_n + (r_r - r_l) * half_t
    if diff == 0:
        return vl
    return vr if diff > 0 else vl


def degree_sequence_mod_p(map: MonomialMap, div: ToricDivisor, p: int,
                          N: int, n_check: int = 30) -> ModPSequence:
    """deg(phi^n) mod p for n = 0..N without forming the exact integers.

    Uses the circle-function identity deg(n) = a_j s_n + b_j t_n on arc j,
    with (s_n, t_n) iterated mod p.  Arc selection runs on float64 angles;
    near-breakpoint indices are re-decided at higher precision (and exactly
    if still tied), so no float rounding ever picks a wrong arc.
    """
    _require_prime(p)
    if N < 0:
        raise PreconditionError("N must be nonnegative")
    _, plf = build_surface_plf(map, div, n_check=n_check)
    tau, q = plf.tau, plf.det

    # deg(n) = p_j re_n + r_j t_n/2 = a_j s_n + b_j t_n with
    # a_j = p_j, b_j = (p_j tau + r_j)/2
    a_res, b_res = [], []
    for pc, rc in plf.arcs:
        a_res.append(_residue(pc, p))
        b_res.append(_residue((pc * tau + rc) / 2, p))

    bp = np.asarray(plf.breakpoints)
    gaps = np.diff(bp, append=bp[0] + TWO_PI)
    tol = min(1e-6, float(gaps.min()) / 8)
    float_err = 16 * np.finfo(float).eps * (N + 1)
    if 4 * float_err > tol:
        raise PreconditionError(
            "N too large for the float64 arc-selection path")

    x = np.mod(np.arange(N + 1, dtype=np.float64) * plf.theta, TWO_PI)
    x = np.where(x < bp[0], x + TWO_PI, x)
    idx = np.clip(np.searchsorted(bp, x, side="right") - 1, 0, len(bp) - 1)
    upper = np.where(idx + 1 < len(bp), bp[(idx + 1) % len(bp)],
                     bp[0] + TWO_PI)
    d_lo = x - bp[idx]
    d_hi = upper - x
    near = np.flatnonzero(np.minimum(d_lo, d_hi) < tol)
    near_bp = {int(n): (int(idx[n]) if d_lo[n] <= d_hi[n]
                        else (int(idx[n]) + 1) % len(bp))
               for n in near}

    idx_list = idx.tolist()
    tau_m, q_m = tau % p, q % p
    s, t = 1, 0
    terms = []
    for n in range(N + 1):
        if n in near_bp:
            terms.append(_resolve_near(plf, n, near_bp[n], s, t,
                                       a_res, b_res, p))
        else:
            j = idx_list[n]
            terms.append((a_res[j] * s + b_res[j] * t) % p)
        s, t = (-q_m * t) % p, (s + tau_m * t) % p
    return ModPSequence(p=p, terms=tuple(terms))


# ---------------------------------------------------------------------------
# weak periodicity


@dataclass(frozen=True)
class WeakPeriodicityProbe:
    """Outcome of one (a, b) search: the identity tested is
    s[a(kn+r)+b] == s[a(kn+r')+b] for every n with both indices in range."""

    a: int
    b: int
    K_max: int
    N: int
    verdict: str  # "witness" | "exhausted" | "spurious at larger N"
    witness: Optional[tuple[int, int, int]]  # (k, r, r')
    n_tested: int

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "K_max": self.K_max, "N": self.N,
                "verdict": self.verdict,
                "witness": list(self.witness) if self.witness else None,
                "n_tested": self.n_tested}


@dataclass(frozen=True)
class WeakPeriodicityReport:
    p: int
    N: int
    probes: tuple[WeakPeriodicityProbe, ...]

    def to_dict(self) -> dict:
        return {"p": self.p, "N": self.N,
                "probes": [pr.to_dict() for pr in self.probes]}


def _testable_count(N: int, a: int, b: int, k: int, r: int) -> int:
    """Number of n >= 0 with a(kn+r)+b <= N-1 (0 when none)."""
    top = (N - 1 - b)
    if top < 0 or a * r + b > N - 1:
        return 0
    return (top // a - r) // k + 1


def _identity_holds(arr: np.ndarray, a, b, k, r, rp, cnt) -> bool:
    ns = np.arange(cnt, dtype=np.int64)
    return bool(np.array_equal(arr[a * (k * ns + r) + b],
                               arr[a * (k * ns + rp) + b]))


def weak_periodicity_search(s: ModPSequence, a: int, b: int,
                            K_max: int) -> WeakPeriodicityProbe:
    """First witness (k, r, r') in tie-break order smallest k, then
    smallest r', then smallest r; triples admitting no testable n are
    skipped rather than reported as vacuous witnesses."""
    if a <= 0:
        raise PreconditionError("a must be positive")
    if b < 0:
        raise PreconditionError("b must be nonnegative")
    if K_max < 1:
        raise PreconditionError("K_max must be at least 1")
    arr = np.asarray(s.terms, dtype=np.int64)
    N = len(arr)
    for k in range(1, K_max + 1):
        for rp in range(0, K_max):
            for r in range(rp + 1, K_max + 1):
                cnt = _testable_count(N, a, b, k, r)
                if cnt == 0:
                    break  # larger r only shrinks the range
                if _identity_holds(arr, a, b, k, r, rp, cnt):
                    return WeakPeriodicityProbe(
                        a=a, b=b, K_max=K_max, N=N, verdict="witness",
                        witness=(k, r, rp), n_tested=cnt)
    return WeakPeriodicityProbe(a=a, b=b, K_max=K_max, N=N,
                                verdict="exhausted", witness=None,
                                n_tested=0)


def reverify(probe: WeakPeriodicityProbe,
             longer: ModPSequence) -> WeakPeriodicityProbe:
    """Consistency check of a found witness against more terms; failure
    downgrades the verdict instead of silently keeping a coincidence."""
    if probe.witness is None:
        return probe
    k, r, rp = probe.witness
    arr = np.asarray(longer.terms, dtype=np.int64)
    N = len(arr)
    if N < probe.N:
        raise PreconditionError("reverification needs at least as many terms")
    cnt = _testable_count(N, probe.a, probe.b, k, r)
    if cnt and _identity_holds(arr, probe.a, probe.b, k, r, rp, cnt):
        return WeakPeriodicityProbe(a=probe.a, b=probe.b, K_max=probe.K_max,
                                    N=N, verdict="witness",
                                    witness=probe.witness, n_tested=cnt)
    return WeakPeriodicityProbe(a=probe.a, b=probe.b, K_max=probe.K_max,
                                N=N, verdict="spurious at larger N",
                                witness=probe.witness, n_tested=cnt)


def weak_periodicity_report(s: ModPSequence,
                            pairs: Sequence[tuple[int, int]],
                            K_max: int) -> WeakPeriodicityReport:
    probes = tuple(weak_periodicity_search(s, a, b, K_max)
                   for a, b in pairs)
    return WeakPeriodicityReport(p=s.p, N=len(s.terms), probes=probes)


# ---------------------------------------------------------------------------
# p-kernel growth


@dataclass(frozen=True)
class PKernelProbe:
    """counts[j] = distinct windows among n -> s(p^i n + r), i <= j,
    0 <= r < p^i.  An eventually periodic s stabilizes; growth across
    levels is anti-algebraicity evidence."""

    p: int
    e: int
    window: int
    counts: tuple[int, ...]

    @property
    def lower_bound(self) -> int:
        return self.counts[-1]

    def to_dict(self) -> dict:
        return {"p": self.p, "e": self.e, "window": self.window,
                "counts": list(self.counts),
                "kernel_lower_bound": self.lower_bound}


def p_kernel_probe(s: ModPSequence, e: int, window: int = 50) -> PKernelProbe:
    if e < 0:
        raise PreconditionError("depth must be nonnegative")
    if window < 1:
        raise PreconditionError("window must be positive")
    need = s.p ** e * window
    if len(s.terms) < need:
        raise PreconditionError(
            f"p-kernel probe at depth {e} needs {need} terms, "
            f"have {len(s.terms)}")
    arr = np.asarray(s.terms, dtype=np.int64)
    seen = set()
    counts = []
    for j in range(e + 1):
        step = s.p ** j
        for r in range(step):
            seen.add(arr[r::step][:window].tobytes())
        counts.append(len(seen))
    return PKernelProbe(p=s.p, e=e, window=window, counts=tuple(counts))
