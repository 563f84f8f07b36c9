"""Exact integer linear algebra and certified spectra.

Matrices and polynomials carry Python ints (arbitrary precision); rational
work uses fractions.Fraction.  Floating point enters only through root
enclosures, and there every center is an exact dyadic rational and every
radius is an exact Fraction certified by the monic product bound
min_i |z0 - r_i| <= |f(z0)/lc|^(1/deg).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Sequence

import mpmath

from .errors import PreconditionError, RefinementError

Frac = Fraction


# ---------------------------------------------------------------------------
# small integer utilities


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0."""
    if n < 0:
        raise ValueError("iroot of negative")
    if n == 0 or k == 1:
        return n
    x = 1 << (n.bit_length() // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    return x


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if m > 1:
        result -= result // m
    return result


def frac_sqrt_bounds(x: Fraction, bits: int = 80) -> tuple[Fraction, Fraction]:
    """Exact lower/upper rational bounds for sqrt(x), x >= 0."""
    if x < 0:
        raise ValueError("sqrt of negative")
    if x == 0:
        return Fraction(0), Fraction(0)
    p, q = x.numerator, x.denominator
    t = p * q  # sqrt(p/q) = sqrt(p q)/q
    r = isqrt(t << (2 * bits))
    scale = q << bits
    return Fraction(r, scale), Fraction(r + 1, scale)


def frac_nth_root_upper(x: Fraction, k: int, bits: int = 80) -> Fraction:
    """Exact rational upper bound for x**(1/k), x >= 0."""
    if x < 0:
        raise ValueError("root of negative")
    if x == 0:
        return Fraction(0)
    p, q = x.numerator, x.denominator
    t = p * q ** (k - 1)  # (p/q)^(1/k) = t^(1/k)/q
    r = iroot(t << (k * bits), k)
    return Fraction(r + 1, q << bits)


def mpf_to_fraction(x) -> Fraction:
    """Exact conversion of a finite mpmath mpf to Fraction."""
    x = mpmath.mpf(x)
    if x == 0:
        return Fraction(0)
    sign, man, exp, _ = x._mpf_
    man, exp = int(man), int(exp)
    if man == 0:
        raise ValueError("non-finite mpf")
    val = Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)
    return -val if sign else val


def primitive_vector(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector.

    Sign is normalized so the first nonzero entry is positive.
    """
    fracs = [Fraction(v) for v in vec]
    if all(v == 0 for v in fracs):
        return tuple(0 for _ in fracs)
    denom = 1
    for v in fracs:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(ints)


# ---------------------------------------------------------------------------
# exact Gaussian elimination helpers (Fraction rows)


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def kernel_basis(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel of the row matrix, over Q."""
    if not rows:
        n = ncols or 0
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    n = ncols if ncols is not None else len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return basis


def solve_square(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[tuple[Fraction, ...]]:
    """Unique solution of a square system, or None if the matrix is singular."""
    n = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if len(pivots) > n or (pivots and pivots[-1] == n):
        return None  # inconsistent
    if len(pivots) < n:
        return None  # singular
    return tuple(red[i][n] for i in range(n))


def solve_consistent(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[tuple[Fraction, ...]]:
    """One solution of a (possibly rectangular) consistent system, else None.

    Free variables are set to zero.
    """
    if not rows:
        return None
    n = len(rows[0])
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    sol = [Fraction(0)] * n
    for r, pc in enumerate(pivots):
        sol[pc] = red[r][n]
    return tuple(sol)


# ---------------------------------------------------------------------------
# integer polynomials


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, ascending order, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        if not all(isinstance(c, int) for c in cs):
            raise TypeError("integer coefficients required")
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return not self.is_zero and self.coeffs[-1] == 1

    def __call__(self, x):
        acc = 0 * x if self.is_zero else x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPolynomial(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        """Exact quotient; raises if the division leaves a remainder."""
        q, r = _poly_divmod([Fraction(c) for c in self.coeffs], [Fraction(c) for c in other.coeffs])
        if any(c != 0 for c in r):
            raise ValueError("inexact polynomial division")
        if any(c.denominator != 1 for c in q):
            raise ValueError("non-integer quotient")
        return IntPolynomial(tuple(int(c) for c in q))

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, abs(c))
        return g

    def primitive(self) -> "IntPolynomial":
        if self.is_zero:
            return self
        g = self.content()
        sign = 1 if self.coeffs[-1] > 0 else -1
        return IntPolynomial(tuple(c * sign // g for c in self.coeffs))

    def gcd(self, other: "IntPolynomial") -> "IntPolynomial":
        """Primitive gcd over Q (positive leading coefficient)."""
        a = [Fraction(c) for c in self.coeffs]
        b = [Fraction(c) for c in other.coeffs]
        while any(c != 0 for c in b):
            _, r = _poly_divmod(a, b)
            a, b = b, r
        if not any(c != 0 for c in a):
            return IntPolynomial(())
        denom = 1
        for c in a:
            denom = denom * c.denominator // gcd(denom, c.denominator)
        return IntPolynomial(tuple(int(c * denom) for c in a)).primitive()

    def squarefree_decomposition(self) -> tuple[tuple["IntPolynomial", int], ...]:
        """Yun's algorithm: returns ((g_i, i), ...) with product g_i^i = self/lc-content."""
        f = self.primitive()
        if f.degree < 1:
            return ()
        out = []
        # A primitive gcd divides both arguments in Z[x] (Gauss), so all
        # quotients below are exact integer divisions; primitivizing them
        # would corrupt the y/w bookkeeping.
        g = f.gcd(f.derivative())
        w = f.exact_div(g)
        y = f.derivative().exact_div(g)
        i = 1
        while w.degree > 0:
            z = y - w.derivative()
            gi = w.gcd(z)
            if gi.degree > 0:
                out.append((gi, i))
            w = w.exact_div(gi)
            y = z.exact_div(gi)
            i += 1
        return tuple(out)

    def squarefree_part(self) -> "IntPolynomial":
        f = self.primitive()
        g = f.gcd(f.derivative())
        return f.exact_div(g)

    def resultant(self, other: "IntPolynomial") -> int:
        return _sylvester_resultant(self.coeffs, other.coeffs)

    def __repr__(self) -> str:
        if self.is_zero:
            return "IntPolynomial(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}" if i == 0 else (f"{c}*x^{i}" if i > 1 else f"{c}*x"))
        return "IntPolynomial(" + " + ".join(parts) + ")"


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    b = list(b)
    while b and b[-1] == 0:
        b.pop()
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and any(c != 0 for c in r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(b):
            break
        f = r[-1] / b[-1]
        k = len(r) - len(b)
        q[k] = f
        for i, c in enumerate(b):
            r[k + i] -= f * c
        r.pop()
    return q, r


def _sylvester_resultant(f: tuple[int, ...], g: tuple[int, ...]) -> int:
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        return 0
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    rows = []
    fd = list(reversed(f))
    gd = list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - n - 1 - i))
    return det_bareiss(rows)


def det_bareiss(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


_CYCLOTOMIC_CACHE: dict[int, IntPolynomial] = {}


def cyclotomic(n: int) -> IntPolynomial:
    """The n-th cyclotomic polynomial, by exact recursive division."""
    if n < 1:
        raise ValueError("n >= 1 required")
    if n in _CYCLOTOMIC_CACHE:
        return _CYCLOTOMIC_CACHE[n]
    xn1 = IntPolynomial(tuple([-1] + [0] * (n - 1) + [1]))
    f = xn1
    for d in range(1, n):
        if n % d == 0:
            f = f.exact_div(cyclotomic(d))
    _CYCLOTOMIC_CACHE[n] = f
    return f


# ---------------------------------------------------------------------------
# integer matrices


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable square integer matrix."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("square matrix required")
        for r in self.rows:
            for x in r:
                if not isinstance(x, int):
                    raise TypeError("integer entries required")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @staticmethod
    def identity(d: int) -> "IntegerMatrix":
        return IntegerMatrix(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        n = self.dim
        if other.dim != n:
            raise ValueError("dimension mismatch")
        bt = other.transpose().rows
        return IntegerMatrix(tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in bt) for row in self.rows
        ))

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return IntegerMatrix(tuple(tuple(a + b for a, b in zip(r1, r2))
                                   for r1, r2 in zip(self.rows, other.rows)))

    def scale(self, c: int) -> "IntegerMatrix":
        return IntegerMatrix(tuple(tuple(c * x for x in r) for r in self.rows))

    def pow(self, n: int) -> "IntegerMatrix":
        """Exact binary powering, n >= 0."""
        if n < 0:
            raise ValueError("nonnegative exponent required")
        result = IntegerMatrix.identity(self.dim)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(tuple(zip(*self.rows)))

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.dim))

    def det(self) -> int:
        return det_bareiss(self.rows)

    def apply(self, vec: Sequence) -> tuple:
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.rows)


def char_poly(a: IntegerMatrix) -> IntPolynomial:
    """Characteristic polynomial det(xI - A), monic, exact (Faddeev-LeVerrier)."""
    d = a.dim
    coeffs = [0] * (d + 1)
    coeffs[d] = 1
    m = a
    c = -m.trace()
    coeffs[d - 1] = c
    for k in range(2, d + 1):
        m = a @ (m + IntegerMatrix.identity(d).scale(c))
        tr = m.trace()
        if tr % k != 0:
            raise ArithmeticError("Faddeev-LeVerrier division not exact")
        c = -tr // k
        coeffs[d - k] = c
    return IntPolynomial(tuple(coeffs))


def compound_matrix(a: IntegerMatrix, k: int) -> IntegerMatrix:
    """k-th exterior power: minors indexed by lexicographic k-subsets."""
    d = a.dim
    if not 0 <= k <= d:
        raise PreconditionError(f"compound order {k} out of range for dim {d}")
    subsets = list(itertools.combinations(range(d), k))
    rows = []
    for ri in subsets:
        row = []
        for ci in subsets:
            sub = [[a.rows[i][j] for j in ci] for i in ri]
            row.append(det_bareiss(sub) if k else 1)
        rows.append(tuple(row))
    return IntegerMatrix(tuple(rows))


def power_sums(f: IntPolynomial, n: int) -> tuple[int, ...]:
    """Power sums s_1..s_n of the roots of a monic integer polynomial (Newton)."""
    if not f.is_monic:
        raise PreconditionError("monic polynomial required")
    d = f.degree
    # elementary symmetric: e_i = (-1)^i c_{d-i}
    e = [0] * (d + 1)
    for i in range(d + 1):
        e[i] = (-1) ** i * f.coeffs[d - i]
    s: list[int] = [d]  # s_0
    for k in range(1, n + 1):
        acc = 0
        for i in range(1, min(k, d) + 1):
            acc += (-1) ** (i + 1) * e[i] * s[k - i]
        if k <= d:
            acc += (-1) ** (k + 1) * k * e[k]
            # the loop above already added i=k term with s_0; correct it
            acc -= (-1) ** (k + 1) * e[k] * s[0]
        s.append(acc)
    return tuple(s[1:])


# ---------------------------------------------------------------------------
# certified root enclosures


@dataclass(frozen=True)
class RootEnclosure:
    """Certified complex disk containing exactly one distinct root.

    Centers and radius are exact rationals (dyadic for isolated roots,
    radius 0 with `exact` set for rational roots).
    """

    re: Fraction
    im: Fraction
    radius: Fraction
    multiplicity: int
    is_real: bool
    exact: Optional[Fraction]
    conj: Optional[int]  # index of the conjugate partner enclosure
    factor: int  # square-free factor id (structural equality checks)

    def modulus_bounds(self, bits: int = 120) -> tuple[Fraction, Fraction]:
        m2 = self.re * self.re + self.im * self.im
        lo, hi = frac_sqrt_bounds(m2, bits)
        lo = lo - self.radius
        if lo < 0:
            lo = Fraction(0)
        return lo, hi + self.radius

    def contains_value_bounds(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.re, self.im, self.radius


@dataclass(frozen=True)
class EigenSpectrum:
    """All roots of a polynomial with certified enclosures, modulus-sorted."""

    poly: IntPolynomial
    precision: int
    roots: tuple[RootEnclosure, ...]

    @property
    def degree(self) -> int:
        return self.poly.degree


def _sturm_chain(f: IntPolynomial) -> list[list[Fraction]]:
    chain = [[Fraction(c) for c in f.coeffs]]
    chain.append([Fraction(c) for c in f.derivative().coeffs])
    while any(c != 0 for c in chain[-1]):
        _, r = _poly_divmod(chain[-2], chain[-1])
        while r and r[-1] == 0:
            r.pop()
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if any(x != 0 for x in c)]


def _eval_frac(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign_changes(chain, x: Fraction) -> int:
    signs = []
    for coeffs in chain:
        v = _eval_frac(coeffs, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots_between(chain, a: Fraction, b: Fraction) -> int:
    return _sign_changes(chain, a) - _sign_changes(chain, b)


def _nonroot_point(f: IntPolynomial, a: Fraction, b: Fraction) -> Fraction:
    """A point strictly inside (a, b) where f does not vanish."""
    m = (a + b) / 2
    offset = (b - a) / 4
    while f(m) == 0:
        m = m + offset
        offset /= 2
        if offset == 0:
            raise RefinementError("could not find a non-root bisection point")
    return m


def isolate_real_roots(f: IntPolynomial) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open rational intervals, one simple real root each.

    Requires a square-free polynomial.  Exact rational roots are returned as
    degenerate intervals [r, r].
    """
    if f.degree < 1:
        return []
    bound = Fraction(2) + max(Fraction(abs(c), abs(f.leading)) for c in f.coeffs)
    chain = _sturm_chain(f)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = _count_roots_between(chain, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = _nonroot_point(f, a, b)
        stack.append((a, m))
        stack.append((m, b))
    out.sort()
    return out


def refine_real_root(f: IntPolynomial, interval: tuple[Fraction, Fraction],
                     width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval below `width` by exact sign bisection."""
    a, b = interval
    if a == b:
        return interval
    fa = f(a)
    if fa == 0:  # endpoint landed on the root
        return (a, a)
    while b - a > width:
        m = (a + b) / 2
        fm = f(m)
        if fm == 0:
            return (m, m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return (a, b)


def _integer_root_snap(f: IntPolynomial, interval: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    """Detect an exact integer root inside a narrow isolating interval."""
    a, b = interval
    if a == b:
        return interval
    if b - a >= Fraction(1, 2):
        return interval
    k = -((-a).__floor__())  # ceil(a)
    if a <= k <= b and f(int(k)) == 0:
        kk = Fraction(k)
        return (kk, kk)
    return interval


def _complex_eval_bounds(f: IntPolynomial, re: Fraction, im: Fraction) -> Fraction:
    """Exact |f(z)|^2 at a rational complex point."""
    rr, ii = Fraction(1), Fraction(0)  # z^0
    vr, vi = Fraction(0), Fraction(0)
    for c in f.coeffs:
        vr += c * rr
        vi += c * ii
        rr, ii = rr * re - ii * im, rr * im + ii * re
    return vr * vr + vi * vi


def _polish_complex_root(f: IntPolynomial, z0, wp: int, residual_bits: int):
    """Newton refinement in mpc at working precision wp."""
    df = f.derivative()
    with mpmath.workprec(wp):
        z = mpmath.mpc(z0)
        target = mpmath.mpf(2) ** (-residual_bits)
        for _ in range(80):
            fz = f(z)
            if abs(fz) <= target:
                break
            dfz = df(z)
            if dfz == 0:
                break
            z = z - fz / dfz
        return mpmath.mpc(z)


def _disks_disjoint(e1: RootEnclosure, e2: RootEnclosure) -> bool:
    d2 = (e1.re - e2.re) ** 2 + (e1.im - e2.im) ** 2
    r = e1.radius + e2.radius
    return d2 > r * r


def _isolate_factor(g: IntPolynomial, precision: int, wp: int) -> list[RootEnclosure]:
    """Certified enclosures for all roots of a square-free integer polynomial."""
    deg = g.degree
    radius_target = Fraction(1, 2 ** (precision + 2))
    enclosures: list[RootEnclosure] = []

    intervals = isolate_real_roots(g)
    for iv in intervals:
        iv = refine_real_root(g, iv, radius_target)
        if g.is_monic:
            iv = _integer_root_snap(g, iv)
        a, b = iv
        if a == b:
            enclosures.append(RootEnclosure(a, Fraction(0), Fraction(0), 1, True, a, None, 0))
        else:
            center = (a + b) / 2
            enclosures.append(RootEnclosure(center, Fraction(0), (b - a) / 2, 1, True, None, None, 0))

    n_nonreal = deg - len(intervals)
    if n_nonreal % 2:
        raise RefinementError("parity failure in real root count")
    half = n_nonreal // 2
    if half:
        with mpmath.workprec(wp):
            try:
                roots = mpmath.polyroots([int(c) for c in reversed(g.coeffs)],
                                         maxsteps=200, extraprec=wp)
            except mpmath.mp.NoConvergence as exc:
                raise RefinementError(f"root finding did not converge: {exc}") from exc
            roots = [mpmath.mpc(z) for z in roots]
        cands = sorted(roots, key=lambda z: (-z.imag, z.real))[:half]
        residual_bits = deg * (precision + 3) + 16
        for z in cands:
            z = _polish_complex_root(g, z, max(wp, residual_bits + 64), residual_bits)
            re, im = mpf_to_fraction(z.real), mpf_to_fraction(z.imag)
            if im <= 0:
                raise RefinementError("conjugate pairing failed (candidate not in upper half plane)")
            fz2 = _complex_eval_bounds(g, re, im)
            lc2 = Fraction(g.leading) ** 2
            radius = frac_nth_root_upper(fz2 / lc2, 2 * deg, bits=precision + 16)
            k = len(enclosures)
            enclosures.append(RootEnclosure(re, im, radius, 1, False, None, k + 1, 0))
            enclosures.append(RootEnclosure(re, -im, radius, 1, False, None, k, 0))

    if len(enclosures) != deg:
        raise RefinementError("root count mismatch during isolation")
    for i in range(len(enclosures)):
        for j in range(i + 1, len(enclosures)):
            if not _disks_disjoint(enclosures[i], enclosures[j]):
                raise RefinementError("enclosures overlap")
    return enclosures


def polynomial_spectrum(f: IntPolynomial, precision: int = 60) -> EigenSpectrum:
    """Certified enclosures for all roots of an integer polynomial.

    Exact square-free decomposition fixes multiplicities; rational roots of
    monic factors get radius-zero enclosures.  Radii satisfy
    radius <= 2^-precision.  Raises RefinementError if the refinement
    schedule (4 precision doublings) cannot certify disjoint enclosures.
    """
    if f.degree < 1:
        raise PreconditionError("positive degree required")
    zeros = 0
    coeffs = list(f.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        zeros += 1
    core = IntPolynomial(tuple(coeffs))

    roots: list[RootEnclosure] = []
    if zeros:
        roots.append(RootEnclosure(Fraction(0), Fraction(0), Fraction(0), zeros, True,
                                   Fraction(0), None, -1))
    if core.degree >= 1:
        decomposition = core.squarefree_decomposition()
        prec = precision
        for attempt in range(5):
            try:
                trial: list[RootEnclosure] = list(roots[:1]) if zeros else []
                fid = 0
                for g, mult in decomposition:
                    wp = max(80, g.degree * (prec + 3) + 80)
                    encl = _isolate_factor(g, prec, wp)
                    base = len(trial)
                    for e in encl:
                        conj = None if e.conj is None else e.conj + base
                        trial.append(RootEnclosure(e.re, e.im, e.radius, mult, e.is_real,
                                                   e.exact, conj, fid))
                    fid += 1
                # global pairwise disjointness across factors
                for i in range(len(trial)):
                    for j in range(i + 1, len(trial)):
                        if not _disks_disjoint(trial[i], trial[j]):
                            raise RefinementError("cross-factor enclosures overlap")
                roots = trial
                break
            except RefinementError:
                if attempt == 4:
                    raise
                prec *= 2

    order = sorted(range(len(roots)),
                   key=lambda i: (-(roots[i].re ** 2 + roots[i].im ** 2),
                                  -roots[i].re, -roots[i].im))
    remap = {old: new for new, old in enumerate(order)}
    sorted_roots = []
    for old in order:
        e = roots[old]
        conj = None if e.conj is None else remap[e.conj]
        sorted_roots.append(RootEnclosure(e.re, e.im, e.radius, e.multiplicity,
                                          e.is_real, e.exact, conj, e.factor))
    return EigenSpectrum(poly=f, precision=precision, roots=tuple(sorted_roots))


def eigen_spectrum(a: IntegerMatrix, precision: int = 60) -> EigenSpectrum:
    """Certified eigenvalue enclosures of an integer matrix."""
    return polynomial_spectrum(char_poly(a), precision)


# ---------------------------------------------------------------------------
# structural modulus equality


def negation_pair_roots(f: IntPolynomial) -> IntPolynomial:
    """gcd(f(x), +-f(-x)): roots r with -r also a root."""
    neg = IntPolynomial(tuple((-1) ** i * c for i, c in enumerate(f.coeffs)))
    return f.gcd(neg)


def _disks_overlap(c1re, c1im, r1, c2re, c2im, r2) -> bool:
    d2 = (c1re - c2re) ** 2 + (c1im - c2im) ** 2
    r = r1 + r2
    return d2 <= r * r


def moduli_equal_structurally(spec: EigenSpectrum, i: int, j: int) -> bool:
    """Exact certificate that roots i and j share the same modulus.

    Accepted shapes: complex-conjugate pair, exact rational values with
    equal absolute value, or a certified negation pair (root j is -root i;
    attribution goes through gcd(f(x), f(-x)) and the pairwise-disjoint
    enclosures, so it is a proof, not a heuristic).
    """
    e1, e2 = spec.roots[i], spec.roots[j]
    if e1.conj == j:
        return True
    if e1.exact is not None and e2.exact is not None:
        return abs(e1.exact) == abs(e2.exact)
    g = negation_pair_roots(spec.poly)
    if g.degree < 1:
        return False
    # root i must be a root of g: a g-enclosure overlapping only enclosure i
    try:
        g_iso = polynomial_spectrum(g, spec.precision)
    except RefinementError:
        return False
    for ge in g_iso.roots:
        hit = [k for k, e in enumerate(spec.roots)
               if _disks_overlap(ge.re, ge.im, ge.radius, e.re, e.im, e.radius)]
        if hit == [i]:
            # -root(i) is then also a root of f; it lies in the mirror disk of i.
            mirror_hits = [k for k, e in enumerate(spec.roots)
                           if _disks_overlap(-e1.re, -e1.im, e1.radius, e.re, e.im, e.radius)]
            if mirror_hits == [j]:
                return True
    return False


# ---------------------------------------------------------------------------
# root-of-unity ratio tests


@dataclass(frozen=True)
class RootOfUnityCertificate:
    """Outcome of the exact power-sum test s_u^2 = 4 q^u, u in {1,2,3,4,6}."""

    is_root_of_unity: bool
    witness: Optional[int]
    table: tuple[tuple[int, int, int], ...]  # (u, s_u^2, 4 q^u)

    def __bool__(self) -> bool:
        return self.is_root_of_unity


_UNITS_2X2 = (1, 2, 3, 4, 6)


def ratio_is_root_of_unity_2x2(a: IntegerMatrix) -> RootOfUnityCertificate:
    """Exact test whether the eigenvalue ratio of a 2x2 integer matrix with a
    nonreal spectrum is a root of unity.

    Quadratic roots of unity have order in {1, 2, 3, 4, 6}; the ratio
    mu/conj(mu) has order u exactly when mu^u is real, i.e. s_u^2 = 4 q^u
    for the power sums s_u of the characteristic polynomial.
    """
    if a.dim != 2:
        raise PreconditionError("2x2 matrix required")
    t, q = a.trace(), a.det()
    if t * t - 4 * q >= 0:
        raise PreconditionError("real eigenvalues: ratio test requires a nonreal pair")
    s_prev, s_cur = 2, t  # s_0, s_1
    s = {0: 2, 1: t}
    for u in range(2, 7):
        s_prev, s_cur = s_cur, t * s_cur - q * s_prev
        s[u] = s_cur
    table = tuple((u, s[u] ** 2, 4 * q ** u) for u in _UNITS_2X2)
    witness = next((u for u, lhs, rhs in table if lhs == rhs), None)
    return RootOfUnityCertificate(witness is not None, witness, table)


def absolute_irreducibility_2x2(a: IntegerMatrix) -> bool:
    """True iff no power of the matrix has a rational eigenvalue.

    Equivalent exact test: the characteristic polynomial is irreducible over
    Q (discriminant not a perfect square) and s_u^2 != 4 q^u for all
    u in {1, 2, 3, 4, 6}.
    """
    if a.dim != 2:
        raise PreconditionError("2x2 matrix required")
    t, q = a.trace(), a.det()
    disc = t * t - 4 * q
    if disc >= 0 and is_square(disc):
        return False
    s_prev, s_cur = 2, t
    s = {0: 2, 1: t}
    for u in range(2, 7):
        s_prev, s_cur = s_cur, t * s_cur - q * s_prev
        s[u] = s_cur
    return all(s[u] ** 2 != 4 * q ** u for u in _UNITS_2X2)


def ratio_polynomial(f: IntPolynomial) -> IntPolynomial:
    """Polynomial whose roots are all ratios mu_a/mu_b of roots of f.

    Computed as Res_y(f(y), x^d f(y/x)) by evaluation at d^2 + 1 integer
    points and exact Lagrange interpolation.  Requires f(0) != 0.
    """
    d = f.degree
    if d < 1:
        raise PreconditionError("positive degree required")
    if f.coeffs[0] == 0:
        raise PreconditionError("zero eigenvalue: ratios undefined")
    dd = d * d
    xs: list[int] = [0]
    k = 1
    while len(xs) < dd + 1:
        xs.extend([k, -k])
        k += 1
    xs = xs[:dd + 1]
    values = []
    for c in xs:
        # g(c, y) = sum_i a_i c^(d-i) y^i; leading y-coefficient is lc(f)
        g = tuple(f.coeffs[i] * c ** (d - i) for i in range(d + 1))
        values.append(_sylvester_resultant(f.coeffs, g))
    # Lagrange interpolation over Q
    coeffs = [Fraction(0)] * (dd + 1)
    for i, xi in enumerate(xs):
        # basis polynomial prod_{j != i} (x - xj)/(xi - xj)
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis[:]
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        w = Fraction(values[i]) / denom
        for t, b in enumerate(basis):
            coeffs[t] += w * b
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("ratio polynomial interpolation not integral")
    return IntPolynomial(tuple(int(c) for c in coeffs))


def _candidate_orders(d: int) -> list[int]:
    bound = 2 * (d * d) ** 2 + 1
    return [n for n in range(1, bound + 1) if euler_phi(n) <= d * d]


def _ratio_enclosure(num: RootEnclosure, den: RootEnclosure,
                     bits: int = 120) -> tuple[Fraction, Fraction, Fraction]:
    """Certified enclosure of num/den from two disk enclosures."""
    den_mod2 = den.re ** 2 + den.im ** 2
    cr = (num.re * den.re + num.im * den.im) / den_mod2
    ci = (num.im * den.re - num.re * den.im) / den_mod2
    den_lo, _ = frac_sqrt_bounds(den_mod2, bits)
    den_lo -= den.radius
    if den_lo <= 0:
        raise RefinementError("denominator enclosure touches zero")
    _, c_hi = frac_sqrt_bounds(cr * cr + ci * ci, bits)
    radius = (num.radius + c_hi * den.radius) / den_lo
    return cr, ci, radius


@dataclass(frozen=True)
class GeneralRatioCertificate:
    is_root_of_unity: bool
    order: Optional[int]
    candidate_orders: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.is_root_of_unity


def _match_root(spec: EigenSpectrum, target: RootEnclosure) -> RootEnclosure:
    """Find the enclosure of the same root in a re-run spectrum.

    The true root lies in both its old and new disks, so the disks overlap;
    the old enclosures were pairwise disjoint, so the nearest-center match
    within combined radii is the root itself.
    """
    best = None
    best_d2 = None
    for e in spec.roots:
        d2 = (e.re - target.re) ** 2 + (e.im - target.im) ** 2
        if best_d2 is None or d2 < best_d2:
            best, best_d2 = e, d2
    r = best.radius + target.radius
    if best_d2 > r * r:
        raise RefinementError("could not rematch root enclosure after refinement")
    return best


def ratio_is_root_of_unity_general(f: IntPolynomial, i: int, j: int,
                                   precision: int = 60) -> GeneralRatioCertificate:
    """Certified test whether the ratio of roots i, j of f is a root of unity.

    Indices refer to the modulus-sorted spectrum and must name a nonreal
    conjugate pair.  The exact part: the ratio polynomial
    Res_y(f(y), x^d f(y/x)) shares a factor with a cyclotomic Phi_n,
    phi(n) <= d^2, iff some ratio of roots is a primitive n-th root of
    unity.  The certified part attributes that to the requested pair via
    disk refinement below the minimal root separation of the ratio
    polynomial.
    """
    spec = polynomial_spectrum(f, precision)
    if not (0 <= i < len(spec.roots) and 0 <= j < len(spec.roots)):
        raise PreconditionError("root index out of range")
    e_i, e_j = spec.roots[i], spec.roots[j]
    if e_i.is_real or e_j.is_real or e_i.conj != j:
        raise PreconditionError("indices must name a nonreal conjugate pair")

    d = f.degree
    r = ratio_polynomial(f)
    hits = []
    for n in _candidate_orders(d):
        g = r.gcd(cyclotomic(n))
        if g.degree >= 1:
            hits.append((n, g))
    if not hits:
        return GeneralRatioCertificate(False, None, ())
    candidate_orders = tuple(n for n, _ in hits)

    r_sf = r.squarefree_part()
    prec = max(precision, 64)
    for attempt in range(6):
        try:
            iso = polynomial_spectrum(r_sf, prec)
            sep = None
            for a in range(len(iso.roots)):
                for b in range(a + 1, len(iso.roots)):
                    ea, eb = iso.roots[a], iso.roots[b]
                    d2 = (ea.re - eb.re) ** 2 + (ea.im - eb.im) ** 2
                    lo, _ = frac_sqrt_bounds(d2, prec + 16)
                    gap = lo - ea.radius - eb.radius
                    sep = gap if sep is None else min(sep, gap)
            if sep is None or sep <= 0:
                raise RefinementError("no certified separation for ratio polynomial roots")

            pair_spec = polynomial_spectrum(f, prec)
            pe_i = _match_root(pair_spec, e_i)
            pe_j = _match_root(pair_spec, e_j)
            cr, ci, rad = _ratio_enclosure(pe_j, pe_i)
            if rad >= sep / 4:
                raise RefinementError("ratio enclosure too wide")

            for n, g in hits:
                g_iso = polynomial_spectrum(g, prec)
                for e in g_iso.roots:
                    if e.radius >= sep / 4:
                        raise RefinementError("cyclotomic factor enclosure too wide")
                    d2 = (e.re - cr) ** 2 + (e.im - ci) ** 2
                    rr = (e.radius + rad) ** 2
                    if d2 <= rr:
                        return GeneralRatioCertificate(True, n, candidate_orders)
            return GeneralRatioCertificate(False, None, candidate_orders)
        except RefinementError:
            if attempt == 5:
                raise
            prec *= 2
    raise RefinementError("unreachable")
