"""Exact lattice-polytope geometry over the rationals.

Polytopes are stored by their extreme points (V-rep) with Fraction
coordinates.  All hull, volume, and mixed-volume computations run on
integer-scaled coordinates so the inner loops stay in machine/big ints;
Fractions appear only at the interfaces.  Desk scale: ambient dimension
up to 4, vertex counts in the dozens.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb, gcd
from typing import Optional, Sequence

from .errors import PreconditionError, SchemaError
from .exact_linalg import (
    IntegerMatrix,
    det_bareiss,
    matrix_rank,
    rref,
    solve_consistent,
    solve_square,
)

Point = tuple[Fraction, ...]


def _as_point(p) -> Point:
    return tuple(Fraction(c) for c in p)


def _scale_to_int(points: Sequence[Point]) -> tuple[list[tuple[int, ...]], int]:
    """Clear denominators with a single global factor (uniform scaling)."""
    lcm = 1
    for p in points:
        for c in p:
            lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    return [tuple(int(c * lcm) for c in p) for p in points], lcm


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def _primitive_dir(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Primitive integer vector with the same direction (sign preserved)."""
    fracs = [Fraction(v) for v in vec]
    denom = 1
    for v in fracs:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        raise PreconditionError("zero vector has no primitive direction")
    return tuple(v // g for v in ints)


def _affine_rank(points: Sequence[tuple[int, ...]]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [[Fraction(c - b) for c, b in zip(p, base)] for p in points[1:]]
    return matrix_rank(rows)


def _hull_2d(points: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Andrew monotone chain; returns extreme points in CCW order."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _hyperplane_normal(diffs: list[tuple[int, ...]]) -> Optional[tuple[int, ...]]:
    """Generalized cross product: integer normal to d-1 difference vectors."""
    d = len(diffs) + 1
    normal = []
    for j in range(d):
        minor = [[row[i] for i in range(d) if i != j] for row in diffs]
        normal.append((-1) ** j * det_bareiss(minor))
    if all(c == 0 for c in normal):
        return None
    return tuple(normal)


def _facets_bruteforce(points: Sequence[tuple[int, ...]], d: int):
    """All supporting hyperplanes spanned by d-subsets of a full-dim point set.

    Returns {(primitive outward normal, Fraction offset): sorted point indices}.
    Exhaustive by design; adequate at desk scale.
    """
    n = len(points)
    facets: dict = {}
    on_sets: list[frozenset] = []
    for subset in combinations(range(n), d):
        sub = frozenset(subset)
        if any(sub <= s for s in on_sets):
            continue
        base = points[subset[0]]
        diffs = [tuple(points[i][j] - base[j] for j in range(d)) for i in subset[1:]]
        normal = _hyperplane_normal(diffs)
        if normal is None:
            continue
        b = _dot(normal, base)
        below = above = False
        for q in points:
            s = _dot(normal, q) - b
            if s < 0:
                below = True
            elif s > 0:
                above = True
            if below and above:
                break
        if below and above:
            continue
        if above:
            normal = tuple(-c for c in normal)
            b = -b
        g = gcd(*(abs(c) for c in normal))
        key = (tuple(c // g for c in normal), Fraction(b, g))
        if key not in facets:
            on = tuple(i for i, q in enumerate(points) if _dot(normal, q) == b)
            facets[key] = on
            on_sets.append(frozenset(on))
    return facets


def _extreme_indices(points: Sequence[tuple[int, ...]], d: int) -> list[int]:
    """Indices of extreme points of a full-dimensional integer point set."""
    if d == 1:
        lo = min(range(len(points)), key=lambda i: points[i])
        hi = max(range(len(points)), key=lambda i: points[i])
        return sorted({lo, hi})
    if d == 2:
        hull = _hull_2d(points)
        keep = set(hull)
        return [i for i, p in enumerate(points) if p in keep]
    facets = _facets_bruteforce(points, d)
    touching: dict[int, list] = {}
    for (normal, _), on in facets.items():
        for i in on:
            touching.setdefault(i, []).append(normal)
    out = []
    for i, normals in touching.items():
        rows = [[Fraction(c) for c in nv] for nv in normals]
        if matrix_rank(rows) == d:
            out.append(i)
    return sorted(out)


def _extreme_points(raw: Sequence[Point]) -> list[Point]:
    """Exact extreme points of conv(raw), any affine dimension."""
    pts = sorted(set(raw))
    if len(pts) == 1:
        return pts
    d = len(pts[0])
    ipts, scale = _scale_to_int(pts)
    rank = _affine_rank(ipts)
    if rank == 0:
        return [pts[0]]
    if rank < d:
        # project onto pivot coordinates; injective on the affine hull
        base = ipts[0]
        rows = [[Fraction(p[j] - base[j]) for j in range(d)] for p in ipts[1:]]
        _, pivots = rref(rows)
        proj = [tuple(p[j] for j in pivots) for p in ipts]
        idx = _extreme_indices(proj, rank)
    else:
        idx = _extreme_indices(ipts, d)
    return sorted(pts[i] for i in idx)


def _volume_int(points: Sequence[tuple[int, ...]], d: int) -> Fraction:
    """Exact d-volume of conv(points), integer coordinates."""
    pts = sorted(set(points))
    if len(pts) <= d:
        return Fraction(0)
    if _affine_rank(pts) < d:
        return Fraction(0)
    if d == 1:
        return Fraction(pts[-1][0] - pts[0][0])
    if d == 2:
        hull = _hull_2d(pts)
        s = 0
        for i in range(len(hull)):
            x1, y1 = hull[i]
            x2, y2 = hull[(i + 1) % len(hull)]
            s += x1 * y2 - x2 * y1
        return Fraction(abs(s), 2)
    x0 = pts[0]
    total = Fraction(0)
    for (normal, b), on in _facets_bruteforce(pts, d).items():
        height = b - _dot(normal, x0)
        if height == 0:
            continue
        j = next(i for i, c in enumerate(normal) if c != 0)
        proj = [tuple(pts[i][t] for t in range(d) if t != j) for i in on]
        total += height * _volume_int(proj, d - 1) / (d * abs(normal[j]))
    return total


# ---------------------------------------------------------------------------
# fans and divisors


@dataclass(frozen=True)
class Fan:
    """Rational polyhedral fan: primitive rays plus maximal cones (ray indices)."""

    dim: int
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise SchemaError("fan dimension must be positive")
        seen = set()
        for v in self.rays:
            if len(v) != self.dim:
                raise SchemaError("ray length does not match fan dimension")
            if all(c == 0 for c in v):
                raise SchemaError("zero ray")
            if gcd(*(abs(c) for c in v)) != 1:
                raise SchemaError(f"ray {v} is not primitive")
            if v in seen:
                raise SchemaError(f"duplicate ray {v}")
            seen.add(v)
        for cone in self.cones:
            for i in cone:
                if not 0 <= i < len(self.rays):
                    raise SchemaError("cone references unknown ray")

    def cone_contains(self, cone: tuple[int, ...], u: Sequence[Fraction]) -> bool:
        """Exact membership u in cone(rays): Caratheodory over ray subsets."""
        gens = [self.rays[i] for i in cone]
        target = [Fraction(c) for c in u]
        if all(c == 0 for c in target):
            return True
        for size in range(1, self.dim + 1):
            for subset in combinations(gens, size):
                rows = [[Fraction(subset[j][i]) for j in range(size)] for i in range(self.dim)]
                sol = solve_consistent(rows, target)
                if sol is not None and all(c >= 0 for c in sol):
                    return True
        return False

    def positively_spans(self) -> bool:
        """True iff the rays positively span R^d (no common closed halfspace)."""
        rows = [[Fraction(c) for c in v] for v in self.rays]
        if matrix_rank(rows) < self.dim:
            return False
        if self.dim == 1:
            signs = {1 if v[0] > 0 else -1 for v in self.rays}
            return signs == {1, -1}
        for subset in combinations(self.rays, self.dim - 1):
            normal = _hyperplane_normal(list(subset))
            if normal is None:
                continue
            prods = [_dot(normal, v) for v in self.rays]
            if all(p <= 0 for p in prods) or all(p >= 0 for p in prods):
                return False
        return True

    def verify_complete(self, samples: int = 200, seed: int = 0) -> bool:
        """Sampled completeness: rational sphere directions all covered by cones."""
        import random

        if not self.positively_spans():
            return False
        dirs = set()
        span = [-2, -1, 0, 1, 2] if self.dim <= 3 else [-1, 0, 1]
        grid = [[]]
        for _ in range(self.dim):
            grid = [g + [c] for g in grid for c in span]
        for g in grid:
            if any(g):
                dirs.add(tuple(g))
        rng = random.Random(seed)
        while len(dirs) < samples + len(grid):
            v = tuple(rng.randint(-9, 9) for _ in range(self.dim))
            if any(v):
                dirs.add(v)
        for u in dirs:
            if not any(self.cone_contains(c, u) for c in self.cones):
                return False
        return True

    def to_dict(self) -> dict:
        return {"dim": self.dim, "rays": [list(v) for v in self.rays],
                "cones": [list(c) for c in self.cones]}

    @staticmethod
    def from_dict(data: dict) -> "Fan":
        try:
            return Fan(int(data["dim"]),
                       tuple(tuple(int(c) for c in v) for v in data["rays"]),
                       tuple(tuple(int(i) for i in c) for c in data["cones"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed fan: {exc}") from exc


def projective_space_fan(d: int) -> Fan:
    """Fan of P^d: rays e_1..e_d and -(e_1+...+e_d), all d-subsets as cones."""
    rays = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    rays.append(tuple(-1 for _ in range(d)))
    cones = tuple(tuple(c) for c in combinations(range(d + 1), d))
    return Fan(d, tuple(rays), cones)


def product_p1_fan() -> Fan:
    """Fan of P^1 x P^1: rays +-e1, +-e2 with the four quadrant cones."""
    rays = ((1, 0), (-1, 0), (0, 1), (0, -1))
    cones = ((0, 2), (2, 1), (1, 3), (3, 0))
    return Fan(2, rays, cones)


@dataclass(frozen=True)
class ToricDivisor:
    """Torus-invariant divisor: one rational coefficient per fan ray."""

    fan: Fan
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(self.fan.rays):
            raise SchemaError("coefficient count does not match ray count")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    def to_dict(self) -> dict:
        return {"fan": self.fan.to_dict(), "coeffs": [str(c) for c in self.coeffs]}

    @staticmethod
    def from_dict(data: dict) -> "ToricDivisor":
        try:
            return ToricDivisor(Fan.from_dict(data["fan"]),
                                tuple(Fraction(c) for c in data["coeffs"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed divisor: {exc}") from exc


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class LatticePolytope:
    """Convex polytope with rational vertices; vertices are exactly the
    extreme points, lex-sorted (canonical form enforced on construction)."""

    vertices: tuple[Point, ...]
    dim: int

    def __post_init__(self):
        if not self.vertices:
            raise SchemaError("empty polytope")
        pts = [_as_point(p) for p in self.vertices]
        if any(len(p) != self.dim for p in pts):
            raise SchemaError("vertex length does not match ambient dimension")
        object.__setattr__(self, "vertices", tuple(_extreme_points(pts)))

    @staticmethod
    def from_points(points: Sequence[Sequence], dim: Optional[int] = None) -> "LatticePolytope":
        pts = [_as_point(p) for p in points]
        if not pts:
            raise SchemaError("empty polytope")
        return LatticePolytope(tuple(pts), dim if dim is not None else len(pts[0]))

    @cached_property
    def affine_rank(self) -> int:
        ipts, _ = _scale_to_int(self.vertices)
        return _affine_rank(ipts)

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_rank == self.dim

    def support(self, direction: Sequence) -> Fraction:
        """Support function: max over vertices of <v, direction>."""
        u = [Fraction(c) for c in direction]
        return max(sum(a * b for a, b in zip(v, u)) for v in self.vertices)

    def translate(self, t: Sequence) -> "LatticePolytope":
        tt = _as_point(t)
        return LatticePolytope(tuple(tuple(a + b for a, b in zip(v, tt))
                                     for v in self.vertices), self.dim)

    def scale(self, c) -> "LatticePolytope":
        c = Fraction(c)
        if c < 0:
            raise PreconditionError("negative scaling factor")
        if c == 0:
            return LatticePolytope((tuple(Fraction(0) for _ in range(self.dim)),), self.dim)
        return LatticePolytope(tuple(tuple(c * x for x in v) for v in self.vertices), self.dim)

    @cached_property
    def volume(self) -> Fraction:
        ipts, scale = _scale_to_int(self.vertices)
        return _volume_int(ipts, self.dim) / Fraction(scale) ** self.dim

    @cached_property
    def facets(self) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
        """H-rep (primitive outward normal, offset); full-dimensional only."""
        if not self.is_full_dimensional:
            raise PreconditionError("facets require a full-dimensional polytope")
        ipts, scale = _scale_to_int(self.vertices)
        if self.dim == 1:
            lo, hi = ipts[0][0], ipts[-1][0]
            return (((-1,), Fraction(-lo, scale)), ((1,), Fraction(hi, scale)))
        if self.dim == 2:
            hull = _hull_2d(ipts)
            out = []
            for i in range(len(hull)):
                a, b = hull[i], hull[(i + 1) % len(hull)]
                e = (b[0] - a[0], b[1] - a[1])
                n = _primitive_dir((Fraction(e[1]), Fraction(-e[0])))
                out.append((n, Fraction(_dot(n, a), scale)))
            return tuple(sorted(out))
        fac = _facets_bruteforce(ipts, self.dim)
        return tuple(sorted((n, b / scale) for (n, b) in fac))

    def contains(self, point: Sequence) -> bool:
        """Exact membership via Caratheodory over vertex subsets."""
        p = _as_point(point)
        verts = self.vertices
        if p in verts:
            return True
        for size in range(2, self.dim + 2):
            for subset in combinations(verts, size):
                rows = [[Fraction(subset[j][i]) for j in range(size)] for i in range(self.dim)]
                rows.append([Fraction(1)] * size)
                sol = solve_consistent(rows, list(p) + [Fraction(1)])
                if sol is not None and all(c >= 0 for c in sol):
                    return True
        return False

    def to_dict(self) -> dict:
        return {"vertices": [[str(c) for c in v] for v in self.vertices]}

    @staticmethod
    def from_dict(data: dict) -> "LatticePolytope":
        try:
            verts = [tuple(Fraction(c) for c in v) for v in data["vertices"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed polytope: {exc}") from exc
        if not verts:
            raise SchemaError("malformed polytope: no vertices")
        return LatticePolytope.from_points(verts)


def volume(p: LatticePolytope) -> Fraction:
    return p.volume


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    if p.dim != q.dim:
        raise PreconditionError("Minkowski sum needs equal ambient dimensions")
    pts = [tuple(a + b for a, b in zip(v, w)) for v in p.vertices for w in q.vertices]
    return LatticePolytope.from_points(pts, p.dim)


def linear_image(p: LatticePolytope, a: IntegerMatrix) -> LatticePolytope:
    if a.dim != p.dim:
        raise PreconditionError("matrix dimension does not match polytope")
    if a.det() == 0:
        raise PreconditionError("linear image requires a nonsingular matrix")
    return LatticePolytope.from_points([a.apply(v) for v in p.vertices], p.dim)


def polytope_from_divisor(div: ToricDivisor) -> LatticePolytope:
    """Vertex enumeration of {m : <m, v_ray> <= a_ray}.

    Exhaustive d-subset intersection with feasibility filtering.  Raises
    if the region is unbounded (rays fail to positively span) or empty.
    """
    fan = div.fan
    d = fan.dim
    if not fan.positively_spans():
        raise PreconditionError("unbounded region: fan rays do not positively span")
    candidates = []
    for subset in combinations(range(len(fan.rays)), d):
        rows = [[Fraction(c) for c in fan.rays[i]] for i in subset]
        rhs = [div.coeffs[i] for i in subset]
        m = solve_square(rows, rhs)
        if m is None:
            continue
        if all(sum(Fraction(c) * x for c, x in zip(v, m)) <= a
               for v, a in zip(fan.rays, div.coeffs)):
            candidates.append(m)
    if not candidates:
        raise PreconditionError("empty polytope: divisor does not bound a region")
    return LatticePolytope.from_points(candidates, d)


def is_ample(div: ToricDivisor) -> bool:
    """Strict convexity: each maximal cone carries its own supporting form,
    strictly below the bound on every ray outside the cone."""
    fan = div.fan
    try:
        poly = polytope_from_divisor(div)
    except PreconditionError:
        return False
    if not poly.is_full_dimensional:
        return False
    for cone in fan.cones:
        rows = [[Fraction(c) for c in fan.rays[i]] for i in cone]
        if matrix_rank(rows) < fan.dim:
            raise PreconditionError("maximal cone is not full-dimensional")
        rhs = [div.coeffs[i] for i in cone]
        m = solve_consistent(rows, rhs)
        if m is None:
            return False
        for i, v in enumerate(fan.rays):
            if i in cone:
                continue
            if sum(Fraction(c) * x for c, x in zip(v, m)) >= div.coeffs[i]:
                return False
    return True


# ---------------------------------------------------------------------------
# mixed volumes


@dataclass(frozen=True)
class MixedVolumeVector:
    """V_k = Vol(P[k], Q[d-k]) for k = 0..d, normalized so V(K,...,K) = vol K."""

    dim: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.dim + 1:
            raise SchemaError("mixed volume vector needs d+1 entries")

    def v(self, k: int) -> Fraction:
        return self.values[k]


def mixed_volume_vector(p: LatticePolytope, q: LatticePolytope) -> MixedVolumeVector:
    """Minkowski-Steiner interpolation: vol(r P + Q) at r = 0..d, then an
    exact Vandermonde solve for the coefficients binom(d,k) V_k."""
    if p.dim != q.dim:
        raise PreconditionError("mixed volume needs equal ambient dimensions")
    d = p.dim
    vols = []
    for r in range(d + 1):
        pts = [tuple(r * a + b for a, b in zip(v, w)) for v in p.vertices for w in q.vertices]
        ipts, scale = _scale_to_int(pts)
        vols.append(_volume_int(ipts, d) / Fraction(scale) ** d)
    rows = [[Fraction(r ** k) for k in range(d + 1)] for r in range(d + 1)]
    coeffs = solve_square(rows, vols)
    assert coeffs is not None
    values = tuple(c / comb(d, k) for k, c in enumerate(coeffs))
    if any(v < 0 for v in values):
        raise PreconditionError("negative mixed volume: inconsistent input")
    return MixedVolumeVector(d, values)


@dataclass(frozen=True)
class EdgeNormalFan:
    """Surface-area measure of a polygon: (primitive outer normal, weight)
    pairs, the weight being the lattice length of the matching edge."""

    items: tuple[tuple[tuple[int, int], Fraction], ...]

    def __post_init__(self):
        # closing condition: the edge vectors sum to zero exactly
        sx = sum(w * (-n[1]) for n, w in self.items)
        sy = sum(w * n[0] for n, w in self.items)
        if sx != 0 or sy != 0:
            raise SchemaError("edge normal fan does not close up")


def edge_normal_fan(p: LatticePolytope) -> EdgeNormalFan:
    if p.dim != 2:
        raise PreconditionError("edge normal fan is a 2D construction")
    if p.affine_rank < 2:
        raise PreconditionError("edge normal fan needs a full-dimensional polygon")
    ipts, scale = _scale_to_int(p.vertices)
    hull = _hull_2d(ipts)
    items = []
    for i in range(len(hull)):
        a, b = hull[i], hull[(i + 1) % len(hull)]
        e = (Fraction(b[0] - a[0], scale), Fraction(b[1] - a[1], scale))
        prim = _primitive_dir(e)
        weight = e[0] / prim[0] if prim[0] else e[1] / prim[1]
        normal = (prim[1], -prim[0])
        items.append((normal, weight))
    return EdgeNormalFan(tuple(items))


def mixed_area_sam(p: LatticePolytope, q: LatticePolytope) -> Fraction:
    """Mixed area via the surface-area measure of p paired with the support
    function of q; independent of the Steiner interpolation route."""
    if p.dim != 2 or q.dim != 2:
        raise PreconditionError("surface-area-measure mixed area is 2D only")
    rank = p.affine_rank
    if rank == 0:
        return Fraction(0)
    if rank == 1:
        lo, hi = p.vertices[0], p.vertices[-1]
        e = (hi[0] - lo[0], hi[1] - lo[1])
        prim = _primitive_dir(e)
        weight = e[0] / prim[0] if prim[0] else e[1] / prim[1]
        n = (prim[1], -prim[0])
        return weight * (q.support(n) + q.support((-n[0], -n[1]))) / 2
    total = Fraction(0)
    for normal, weight in edge_normal_fan(p).items:
        total += weight * q.support(normal)
    return total / 2
