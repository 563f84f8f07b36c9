"""Surface-case analytics on the commutant plane.

For a surface map with conjugate eigenvalues mu, mu-bar, the degree of
the n-th iterate factors through the plane spanned by Id and A: there is
a piecewise linear function g on the unit circle with
deg_n = lambda1^n * g(e^{i n theta}), lambda1 = |mu|, theta = arg mu.
This module assembles g exactly, expands it in Fourier series two
independent ways, reconstructs degrees from the coefficients, probes
radial limits of the generating series, and applies the functional
equation relating a monomial map to its blown-up birational model.

Angles where the active linear form switches live in Q(sqrt(-disc)):
every arc stores exact rational data (p, r) with
g(e^{ix}) = p cos x + (r/delta) sin x, delta = sqrt(4 det - trace^2),
so continuity and the degree identity are checked in exact arithmetic.
"""

import cmath
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from .degrees import MonomialMap, degree_sequence
from .errors import PreconditionError
from .exact_linalg import RootEnclosure, eigen_spectrum
from .polytope import ToricDivisor, _hull_2d, is_ample, polytope_from_divisor

TWO_PI = 2 * math.pi


# ---------------------------------------------------------------------------
# exact arithmetic in Q(s), s^2 = disc < 0

def _f2_mul(a, b, disc):
    return (a[0] * b[0] + disc * a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _f2_inv(a, disc):
    n = a[0] * a[0] - disc * a[1] * a[1]
    return (a[0] / n, -a[1] / n)


def _mat2_mul(x, y, disc):
    return tuple(
        tuple(
            (sum(_f2_mul(x[i][k], y[k][j], disc)[0] for k in range(2)),
             sum(_f2_mul(x[i][k], y[k][j], disc)[1] for k in range(2)))
            for j in range(2))
        for i in range(2))


@dataclass(frozen=True)
class CommutantPlane:
    """The plane R*Id + R*A with its conformal identification.

    The diagonalizer is stored as an exact pair Q = q0 + sqrt(disc)*q1
    with rational 2x2 parts; Q A Q^-1 = diag(mu, mu-bar) is verified in
    exact field arithmetic at construction.
    """

    matrix: tuple[tuple[int, ...], ...]
    disc: int
    mu: RootEnclosure
    theta: float
    lambda1: float
    q0: tuple = ()
    q1: tuple = ()

    def __post_init__(self):
        a = self.matrix
        disc = self.disc
        if disc >= 0:
            raise PreconditionError("commutant plane needs nonreal spectrum")
        # Q^-1 has the eigenvectors (b, mu - a11), (b, mu-bar - a11) as
        # columns; b != 0 whenever the spectrum is nonreal
        b = Fraction(a[0][1])
        h = (Fraction(a[1][1] - a[0][0], 2), Fraction(0))
        col1 = ((b, Fraction(0)), (h[0], Fraction(1, 2)))
        col2 = ((b, Fraction(0)), (h[0], Fraction(-1, 2)))
        qinv = ((col1[0], col2[0]), (col1[1], col2[1]))
        det = tuple(x - y for x, y in zip(_f2_mul(qinv[0][0], qinv[1][1], disc),
                                          _f2_mul(qinv[0][1], qinv[1][0], disc)))
        dinv = _f2_inv((Fraction(det[0]), Fraction(det[1])), disc)
        q = ((_f2_mul(qinv[1][1], dinv, disc),
              _f2_mul((-qinv[0][1][0], -qinv[0][1][1]), dinv, disc)),
             (_f2_mul((-qinv[1][0][0], -qinv[1][0][1]), dinv, disc),
              _f2_mul(qinv[0][0], dinv, disc)))
        object.__setattr__(self, "q0",
                           tuple(tuple(e[0] for e in row) for row in q))
        object.__setattr__(self, "q1",
                           tuple(tuple(e[1] for e in row) for row in q))
        amat = tuple(tuple((Fraction(x), Fraction(0)) for x in row) for row in a)
        prod = _mat2_mul(_mat2_mul(q, amat, disc), qinv, disc)
        tau = Fraction(a[0][0] + a[1][1])
        expect = (((tau / 2, Fraction(1, 2)), (Fraction(0), Fraction(0))),
                  ((Fraction(0), Fraction(0)), (tau / 2, Fraction(-1, 2))))
        if prod != expect:
            raise RuntimeError("diagonalizer verification failed")

    def to_dict(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix],
                "disc": self.disc,
                "theta": self.theta,
                "lambda1": self.lambda1,
                "diagonalizer_rational": [[str(x) for x in r] for r in self.q0],
                "diagonalizer_sqrt_disc": [[str(x) for x in r] for r in self.q1]}


@dataclass(frozen=True)
class PiecewiseLinearCircleFunction:
    """g(e^{ix}) = p_j cos x + (r_j / delta) sin x on arc j.

    breakpoints[j] starts arc j; the last arc wraps around to
    breakpoints[0] + 2*pi.  provenance[j] records how breakpoint j
    arose: ("axis", k) for k*pi/2, or ("pair", dp, dr) for the crossing
    of two competing forms, enabling exact re-derivation.
    """

    breakpoints: tuple[float, ...]
    arcs: tuple[tuple[Fraction, Fraction], ...]
    provenance: tuple[tuple, ...]
    tau: int
    det: int
    theta: float
    lambda1: float

    @property
    def delta(self) -> float:
        return math.sqrt(4 * self.det - self.tau * self.tau)

    def arc_index(self, x: float) -> int:
        x = x % TWO_PI
        bp = self.breakpoints
        if x < bp[0]:
            x += TWO_PI
        return bisect_right(bp, x) - 1 if x < bp[0] + TWO_PI else 0

    def value(self, x: float) -> float:
        p, r = self.arcs[self.arc_index(x)]
        return float(p) * math.cos(x) + float(r) / self.delta * math.sin(x)

    def arc_b(self, j: int) -> complex:
        p, r = self.arcs[j]
        return complex(float(p) / 2, -float(r) / (2 * self.delta))

    def values_at(self, angles: np.ndarray) -> np.ndarray:
        """Vectorized evaluation; continuity makes the boundary side
        chosen by searchsorted immaterial at float precision."""
        bp = np.asarray(self.breakpoints)
        x = np.mod(angles, TWO_PI)
        x = np.where(x < bp[0], x + TWO_PI, x)
        idx = np.clip(np.searchsorted(bp, x, side="right") - 1, 0, len(bp) - 1)
        p = np.asarray([float(a[0]) for a in self.arcs])
        r = np.asarray([float(a[1]) / self.delta for a in self.arcs])
        return p[idx] * np.cos(x) + r[idx] * np.sin(x)

    def continuity_residual(self) -> float:
        worst = 0.0
        t = len(self.breakpoints)
        for j in range(t):
            alpha = self.breakpoints[j]
            left = self.arcs[(j - 1) % t]
            right = self.arcs[j]
            d = math.sqrt(4 * self.det - self.tau ** 2)
            lv = float(left[0]) * math.cos(alpha) + float(left[1]) / d * math.sin(alpha)
            rv = float(right[0]) * math.cos(alpha) + float(right[1]) / d * math.sin(alpha)
            worst = max(worst, abs(lv - rv))
        return worst

    def to_dict(self) -> dict:
        return {"theta": self.theta,
                "lambda1": self.lambda1,
                "trace": self.tau,
                "det": self.det,
                "breakpoints": list(self.breakpoints),
                "arcs": [{"p": str(p), "r": str(r),
                          "b": [self.arc_b(j).real, self.arc_b(j).imag]}
                         for j, (p, r) in enumerate(self.arcs)]}


def _ccw_cycle(poly) -> list[tuple[Fraction, ...]]:
    scale = 1
    for v in poly.vertices:
        for c in v:
            scale = scale * c.denominator // math.gcd(scale, c.denominator)
    ipts = [tuple(int(c * scale) for c in v) for v in poly.vertices]
    cyc = _hull_2d(ipts)
    return [tuple(Fraction(c, scale) for c in v) for v in cyc]


def _exact_arc_forms(poly, a_rows):
    """Per polygon edge, the competing linear forms on the circle.

    Edge e with vector v contributes max over vertices m of
    <m, rot(u(x) v)> where u(x) = s_x Id + t_x A tracks e^{ix}; in the
    (cos x, sin x) basis the form has exact coefficients
    (p, r/delta) with p, r rational.
    """
    tau = a_rows[0][0] + a_rows[1][1]
    cyc = _ccw_cycle(poly)
    verts = poly.vertices
    edges = []
    for i in range(len(cyc)):
        v = tuple(b - c for b, c in zip(cyc[(i + 1) % len(cyc)], cyc[i]))
        av = (a_rows[0][0] * v[0] + a_rows[0][1] * v[1],
              a_rows[1][0] * v[0] + a_rows[1][1] * v[1])
        rot_v = (v[1], -v[0])
        rot_av = (av[1], -av[0])
        forms = set()
        for m in verts:
            p = m[0] * rot_v[0] + m[1] * rot_v[1]
            r = 2 * (m[0] * rot_av[0] + m[1] * rot_av[1]) - tau * p
            forms.add((p, r))
        edges.append(sorted(forms))
    return edges


def build_surface_plf(map: MonomialMap, div: ToricDivisor, n_check: int = 30,
                      dps: int = 60):
    """Assemble the circle function of a conjugate-eigenvalue surface map.

    Breakpoints are crossings of competing forms, refined to dps digits
    with exact provenance; arcs with equal exact data are merged; the
    degree identity deg_n = lambda1^n g(e^{i n theta}) is verified in
    exact rational arithmetic for n = 0..n_check before returning.
    """
    if map.dim != 2:
        raise PreconditionError("circle function requires d = 2")
    a = map.matrix
    tau, q = a.trace(), a.det()
    disc = tau * tau - 4 * q
    if disc >= 0:
        raise PreconditionError("real eigenvalues: no commutant circle")
    if map.fan is not div.fan:
        raise PreconditionError("map and divisor live on different fans")
    poly = polytope_from_divisor(div)
    if not is_ample(div):
        raise PreconditionError("divisor is not ample")

    spec = eigen_spectrum(a, 120)
    mu = spec.roots[0]

    with mpmath.workdps(dps):
        delta = mpmath.sqrt(-disc)
        theta_mp = mpmath.atan2(delta, tau) % (2 * mpmath.pi)
        edges = _exact_arc_forms(poly, a.rows)

        # candidate switch angles, with exact provenance
        candidates = {}
        for k in range(4):
            ang = (k * mpmath.pi / 2) % (2 * mpmath.pi)
            candidates[mpmath.nstr(ang, dps - 8)] = (ang, ("axis", k))
        for forms in edges:
            for i in range(len(forms)):
                for j in range(i + 1, len(forms)):
                    dp = forms[i][0] - forms[j][0]
                    dr = forms[i][1] - forms[j][1]
                    if dr == 0:
                        continue  # crossing at cos x = 0, covered by axes
                    base = mpmath.atan(-dp * delta / dr)
                    for shift in (0, 1):
                        ang = (base + shift * mpmath.pi) % (2 * mpmath.pi)
                        key = mpmath.nstr(ang, dps - 8)
                        if key not in candidates:
                            candidates[key] = (ang, ("pair", dp, dr))
        cand = sorted(candidates.values(), key=lambda t: t[0])
        merged = []
        for ang, prov in cand:
            if merged and ang - merged[-1][0] < mpmath.mpf(10) ** (-(dps - 12)):
                continue
            merged.append((ang, prov))
        if len(merged) > 1 and (merged[0][0] + 2 * mpmath.pi) - merged[-1][0] \
                < mpmath.mpf(10) ** (-(dps - 12)):
            merged.pop()

        # active form per edge on each candidate arc, summed exactly
        def arc_data(lo, hi):
            mid = (lo + hi) / 2
            cm, sm = mpmath.cos(mid), mpmath.sin(mid)
            psum, rsum = Fraction(0), Fraction(0)
            for forms in edges:
                best, best_val = None, None
                for p, r in forms:
                    val = p * cm + r * sm / delta
                    if best_val is None or val > best_val:
                        best, best_val = (p, r), val
                psum += best[0]
                rsum += best[1]
            return (psum, rsum)

        raw = []
        for idx, (ang, prov) in enumerate(merged):
            nxt = merged[(idx + 1) % len(merged)][0]
            if idx == len(merged) - 1:
                nxt += 2 * mpmath.pi
            raw.append((ang, prov, arc_data(ang, nxt)))

        arcs, bps, provs = [], [], []
        for ang, prov, data in raw:
            if arcs and data == arcs[-1]:
                continue
            arcs.append(data)
            bps.append(ang)
            provs.append(prov)
        while len(arcs) > 1 and arcs[0] == arcs[-1]:
            arcs.pop(0)
            bps.pop(0)
            provs.pop(0)

        # exact continuity at every surviving breakpoint
        for j, alpha in enumerate(bps):
            p_l, r_l = arcs[(j - 1) % len(arcs)]
            p_r, r_r = arcs[j]
            dp, dr = p_l - p_r, r_l - r_r
            prov = provs[j]
            if prov[0] == "axis":
                ok = (dr == 0) if prov[1] % 2 == 1 else (dp == 0)
            else:
                ok = dp * prov[2] == dr * prov[1]
            if not ok:
                raise RuntimeError(
                    f"discontinuity at breakpoint {float(alpha):.6f}: "
                    f"jump ({dp}, {dr}) not on the crossing locus")

        plf = PiecewiseLinearCircleFunction(
            breakpoints=tuple(float(x) for x in bps),
            arcs=tuple(arcs),
            provenance=tuple(
                (p[0], p[1]) if p[0] == "axis" else (p[0], p[1], p[2])
                for p in provs),
            tau=tau, det=q,
            theta=float(theta_mp), lambda1=float(mpmath.sqrt(q)))

        # master identity: lambda1^n g(e^{in theta}) = deg_n, exactly.
        # mu^n = re_n + i (delta/2) t_n with re_n, t_n rational from the
        # two-term matrix power recurrence.
        seq = degree_sequence(map, div, 1, n_check)
        s_n, t_n = 1, 0
        bp_mp = [mpmath.mpf(0) + x for x in bps]
        for n in range(n_check + 1):
            re_n = Fraction(s_n) + Fraction(t_n * tau, 2)
            half_t = Fraction(t_n, 2)
            if re_n == 0 and half_t == 0:
                raise RuntimeError("zero matrix power")
            x_n = mpmath.atan2(half_t * delta, mpmath.mpf(re_n.numerator)
                               / re_n.denominator) % (2 * mpmath.pi)
            j = _locate_arc_exact(x_n, bp_mp, provs, re_n, half_t, dps)
            p_j, r_j = arcs[j]
            value = p_j * re_n + r_j * half_t
            if value != seq.terms[n]:
                raise RuntimeError(
                    f"degree identity failed at n = {n}: circle function "
                    f"gives {value}, exact degree is {seq.terms[n]}")
            s_n, t_n = -q * t_n, s_n + tau * t_n

    plane = CommutantPlane(matrix=a.rows, disc=disc, mu=mu,
                           theta=plf.theta, lambda1=plf.lambda1)
    return plane, plf


def _locate_arc_exact(x, bp, provs, re_n, half_t, dps):
    """Arc index for angle x, with exact adjudication of near-breakpoint
    hits: x is the argument of the rational-coordinate point
    (re_n, delta*half_t), so membership in a crossing locus is a
    rational identity."""
    t = len(bp)
    two_pi = 2 * mpmath.pi
    xx = x if x >= bp[0] else x + two_pi
    j = bisect_right(bp, xx) - 1 if xx < bp[0] + two_pi else 0
    tol = mpmath.mpf(10) ** (-(dps - 20))
    for k in (j, (j + 1) % t):
        alpha = bp[k]
        dist = abs(xx - (alpha if alpha >= bp[0] else alpha + two_pi))
        dist = min(dist, abs(dist - two_pi))
        if dist < tol:
            prov = provs[k]
            if prov[0] == "axis":
                hit = (re_n == 0) if prov[1] % 2 == 1 else (half_t == 0)
            else:
                hit = prov[1] * re_n + prov[2] * half_t == 0
            if hit:
                # continuity is already verified: both arcs agree at alpha
                return k
            raise RuntimeError(
                "ambiguous arc location: angle within tolerance of a "
                "breakpoint it does not exactly hit; raise dps")
    return j


# ---------------------------------------------------------------------------
# Fourier coefficients


@dataclass(frozen=True)
class FourierEvidence:
    """Closed-form Fourier data of g with the d_m side table.

    Convention: a_m = (1/2pi) * integral of g(e^{ix}) e^{-imx} dx, so
    the synthesis g(e^{ix}) = sum a_m e^{imx} holds.
    """

    plf: PiecewiseLinearCircleFunction
    M: int
    a: dict
    d: dict
    theta: float
    lambda1: float

    def a_m(self, m: int) -> complex:
        return self.a[m]

    def to_dict(self) -> dict:
        return {"theta": self.theta,
                "lambda1": self.lambda1,
                "M": self.M,
                "breakpoints": list(self.plf.breakpoints),
                "arcs": self.plf.to_dict()["arcs"],
                "a": [[m, self.a[m].real, self.a[m].imag]
                      for m in sorted(self.a)],
                "d": [[m, self.d[m].real, self.d[m].imag]
                      for m in sorted(self.d)]}

    def a_table_csv(self) -> str:
        lines = ["m,re_a,im_a"]
        for m in sorted(self.a):
            lines.append(f"{m},{self.a[m].real!r},{self.a[m].imag!r}")
        return "\n".join(lines) + "\n"


def _arc_spans(plf):
    t = len(plf.breakpoints)
    for j in range(t):
        lo = plf.breakpoints[j]
        hi = plf.breakpoints[(j + 1) % t] if j + 1 < t \
            else plf.breakpoints[0] + TWO_PI
        yield j, lo, hi


def fourier_closed_form(plf: PiecewiseLinearCircleFunction,
                        M: int) -> FourierEvidence:
    """Arcwise antiderivative Fourier coefficients for |m| <= M.

    On each arc g is b e^{ix} + c e^{-ix}; the e^{i(1-m)x} and
    e^{-i(1+m)x} antiderivatives degenerate to arc lengths at m = 1 and
    m = -1 respectively.
    """
    a_tab, d_tab = {}, {}
    for m in range(-M, M + 1):
        acc = 0j
        d_acc = 0j
        for j, lo, hi in _arc_spans(plf):
            b = plf.arc_b(j)
            c = b.conjugate()
            if m == 1:
                acc += b * (hi - lo)
            else:
                k = 1 - m
                acc += b * (cmath.exp(1j * k * hi) - cmath.exp(1j * k * lo)) \
                    / (1j * k)
            if m == -1:
                acc += c * (hi - lo)
            else:
                k = -(1 + m)
                acc += c * (cmath.exp(1j * k * hi) - cmath.exp(1j * k * lo)) \
                    / (1j * k)
            d_acc += 1j * (m + 1) * b * (cmath.exp(1j * (1 - m) * hi)
                                         - cmath.exp(1j * (1 - m) * lo))
            d_acc += 1j * (m - 1) * c * (cmath.exp(-1j * (1 + m) * hi)
                                         - cmath.exp(-1j * (1 + m) * lo))
        a_tab[m] = acc / TWO_PI
        d_tab[m] = d_acc / TWO_PI
    return FourierEvidence(plf=plf, M=M, a=a_tab, d=d_tab,
                           theta=plf.theta, lambda1=plf.lambda1)


_GL64 = np.polynomial.legendre.leggauss(64)
_GL96 = np.polynomial.legendre.leggauss(96)


def fourier_quadrature_oracle(plf: PiecewiseLinearCircleFunction, m: int,
                              tol: float = 1e-10) -> complex:
    """Independent numeric value of a_m by Gauss-Legendre quadrature,
    split at breakpoints, bisecting any panel where the 64- and 96-node
    rules disagree."""

    def integrate(lo, hi, depth):
        def rule(nodes, weights):
            x = (nodes + 1) * (hi - lo) / 2 + lo
            vals = plf.values_at(x) * np.exp(-1j * m * x)
            return (hi - lo) / 2 * np.dot(weights, vals)

        i64 = rule(*_GL64)
        i96 = rule(*_GL96)
        if abs(i64 - i96) <= tol / 8 or depth >= 14:
            if depth >= 14 and abs(i64 - i96) > tol:
                raise RuntimeError("quadrature tolerance not reached")
            return i96
        mid = (lo + hi) / 2
        return integrate(lo, mid, depth + 1) + integrate(mid, hi, depth + 1)

    total = 0j
    for _, lo, hi in _arc_spans(plf):
        total += integrate(lo, hi, 0)
    return total / TWO_PI


# ---------------------------------------------------------------------------
# probes


@dataclass(frozen=True)
class ReconstructionReport:
    M: int
    N: int
    residuals: tuple[float, ...]
    max_residual: float

    def to_dict(self) -> dict:
        return {"M": self.M, "N": self.N, "max_residual": self.max_residual,
                "residuals": list(self.residuals)}


def reconstruct_degrees(evidence: FourierEvidence, N: int,
                        M: Optional[int] = None) -> ReconstructionReport:
    """Compare lambda1-normalized degrees g(e^{in theta}) against the
    order-M Fourier partial sum at the sampled angles."""
    M = evidence.M if M is None else M
    if M > evidence.M:
        raise PreconditionError("M exceeds the computed coefficient range")
    theta = evidence.theta
    residuals = []
    for n in range(N + 1):
        target = evidence.plf.value(n * theta)
        est = sum(evidence.a[m] * cmath.exp(1j * m * n * theta)
                  for m in range(-M, M + 1))
        residuals.append(abs(target - est))
    return ReconstructionReport(M=M, N=N, residuals=tuple(residuals),
                                max_residual=max(residuals))


@dataclass(frozen=True)
class RadialProbe:
    m: int
    reference: complex
    estimates: tuple[tuple[float, complex], ...]

    def to_dict(self) -> dict:
        return {"m": self.m,
                "reference": [self.reference.real, self.reference.imag],
                "estimates": [[rho, e.real, e.imag]
                              for rho, e in self.estimates]}

    def csv(self) -> str:
        lines = ["rho,re_estimate,im_estimate"]
        for rho, e in self.estimates:
            lines.append(f"{rho!r},{e.real!r},{e.imag!r}")
        return "\n".join(lines) + "\n"


def radial_limit_probe(evidence: FourierEvidence, m: int,
                       rho_list: Sequence[float],
                       N_terms: int) -> RadialProbe:
    """Abel-type estimates (1-rho) sum_n g(e^{in theta}) e^{-imn theta}
    rho^n, which tend to a_m along rho -> 1.

    The lambda1^n growth cancels against the evaluation radius, so the
    sum runs in float64 without large integers.
    """
    for rho in rho_list:
        if not 0 < rho < 1:
            raise PreconditionError("rho must lie in (0, 1)")
        if (1 - rho) * N_terms < 10:
            raise PreconditionError(
                f"N_terms = {N_terms} too small for rho = {rho}: need "
                "(1 - rho) * N_terms >= 10")
    theta = evidence.theta
    n = np.arange(N_terms + 1)
    g_vals = evidence.plf.values_at(n * theta)
    phase = np.exp(-1j * m * n * theta)
    estimates = []
    for rho in rho_list:
        powers = np.power(float(rho), n)
        est = (1 - rho) * np.dot(g_vals * phase, powers)
        estimates.append((float(rho), complex(est)))
    return RadialProbe(m=m, reference=evidence.a[m],
                       estimates=tuple(estimates))


# ---------------------------------------------------------------------------
# functional-equation transform


@dataclass(frozen=True)
class TransformResult:
    coeffs: tuple[Fraction, ...]
    ratio_estimates: tuple[Fraction, ...]
    pade_pole: Optional[Fraction]
    lambda1_estimate: Optional[float]
    aitken_estimate: Optional[float]

    def to_dict(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs],
                "ratio_estimates": [str(r) for r in self.ratio_estimates],
                "pade_pole": None if self.pade_pole is None
                else str(self.pade_pole),
                "lambda1_estimate": self.lambda1_estimate,
                "aitken_estimate": self.aitken_estimate}


def bdj_transform(delta_phi_coeffs: Sequence[Fraction]) -> TransformResult:
    """Exact series transform Delta_f = 2/(2 - Delta_phi) - 1.

    The tail of the output estimates the dominant pole: ratio estimates
    c_n/c_{n-1} from the last few coefficients, plus their Aitken
    extrapolation.
    """
    c = [Fraction(x) for x in delta_phi_coeffs]
    if not c:
        raise PreconditionError("empty coefficient list")
    u0 = 2 - c[0]
    if u0 == 0:
        raise PreconditionError("2 - Delta_phi has zero constant term")
    inv = [1 / u0]
    for n in range(1, len(c)):
        acc = Fraction(0)
        for j in range(1, n + 1):
            acc += -c[j] * inv[n - j]
        inv.append(-acc / u0)
    out = [2 * inv[0] - 1] + [2 * v for v in inv[1:]]

    ratios = []
    for n in range(max(1, len(out) - 5), len(out)):
        if out[n - 1] != 0 and out[n] != 0:
            ratios.append(out[n] / out[n - 1])
    # the row-1 Pade pole of a truncated series is exactly the final ratio,
    # so it stays an exact rational
    pole = ratios[-1] if ratios else None
    lam = float(pole) if pole is not None else None
    aitken = None
    if len(ratios) >= 3:
        r0, r1, r2 = (float(r) for r in ratios[-3:])
        denom = (r2 - r1) - (r1 - r0)
        # zero second difference means the ratios already converged
        aitken = r2 if denom == 0 else r2 - (r2 - r1) ** 2 / denom
    return TransformResult(coeffs=tuple(out), ratio_estimates=tuple(ratios),
                           pade_pole=pole, lambda1_estimate=lam,
                           aitken_estimate=aitken)
