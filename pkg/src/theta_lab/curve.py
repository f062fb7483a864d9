"""Hyperelliptic curve y^2 = f(x) over F_p with two rational infinite places.

The model fixes deg f = 2g + 2 with square leading coefficient, so both
places at infinity are rational, the canonical class is
(g-1)(inf+ + inf-), and every divisor the suite touches stays F_p-rational.

Riemann-Roch spaces are computed from the ansatz (a(x) + b(x) y) / den(x):
the denominator absorbs prescribed poles, truncated local expansions of y
turn vanishing requirements into linear conditions, and pole bounds at the
two infinite places cap the degrees of a and b.  This is valid exactly in
the generic regime the suite certifies (affine, non-Weierstrass support).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import IndeterminateAt, DegenerateHyperplane, SamplingExhausted, UnsupportedSupport
from .fieldctx import FpStream, PrimeContext
from .linalg import kernel_basis, normalize_point
from .unipoly import TruncSeries, UniPoly, roots_in_field, series_sqrt

INF_PLUS = "inf+"
INF_MINUS = "inf-"
AFFINE = "affine"


@dataclass(frozen=True, order=True)
class CurvePoint:
    kind: str
    x: int = -1
    y: int = -1

    @staticmethod
    def affine(x: int, y: int) -> "CurvePoint":
        return CurvePoint(AFFINE, x, y)

    @staticmethod
    def inf_plus() -> "CurvePoint":
        return CurvePoint(INF_PLUS)

    @staticmethod
    def inf_minus() -> "CurvePoint":
        return CurvePoint(INF_MINUS)

    @property
    def is_affine(self) -> bool:
        return self.kind == AFFINE


class Divisor:
    """Integer-weighted formal sum of curve points with distinct support."""

    def __init__(self, entries=()):
        acc: dict[CurvePoint, int] = {}
        for pt, n in entries:
            acc[pt] = acc.get(pt, 0) + int(n)
        self.entries: tuple[tuple[CurvePoint, int], ...] = tuple(
            (pt, n) for pt, n in sorted(acc.items()) if n != 0
        )

    @staticmethod
    def of_points(points, mult: int = 1) -> "Divisor":
        return Divisor((pt, mult) for pt in points)

    @property
    def degree(self) -> int:
        return sum(n for _, n in self.entries)

    def mult_at(self, pt: CurvePoint) -> int:
        for q, n in self.entries:
            if q == pt:
                return n
        return 0

    def points(self, positive_only: bool = True):
        return [pt for pt, n in self.entries if (n > 0 or not positive_only)]

    def affine_x_coords(self) -> set[int]:
        return {pt.x for pt, _ in self.entries if pt.is_affine}

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(self.entries + other.entries)

    def __neg__(self) -> "Divisor":
        return Divisor((pt, -n) for pt, n in self.entries)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def scale(self, k: int) -> "Divisor":
        return Divisor((pt, n * k) for pt, n in self.entries)

    def __repr__(self) -> str:
        return f"Divisor({list(self.entries)!r})"


class RRFunction:
    """Function (a(x) + b(x) y) / den(x) on the curve."""

    __slots__ = ("a", "b", "den")

    def __init__(self, a: UniPoly, b: UniPoly, den: UniPoly):
        self.a, self.b, self.den = a, b, den

    def numerator_at(self, pt: CurvePoint) -> int:
        p = self.a.p
        return (self.a(pt.x) + self.b(pt.x) * pt.y) % p

    def eval(self, pt: CurvePoint) -> int:
        p = self.a.p
        d = self.den(pt.x)
        if d == 0:
            raise IndeterminateAt("denominator vanishes at the point")
        return self.numerator_at(pt) * pow(d, -1, p) % p


class HypCurve:
    """y^2 = f(x), deg f = 2g+2 squarefree, lc(f) a nonzero square."""

    def __init__(self, ctx: PrimeContext, g: int, f: UniPoly):
        if g < 3:
            raise ValueError("genus must be at least 3")
        if f.degree != 2 * g + 2:
            raise ValueError("f must have degree 2g+2")
        if _poly_gcd_deg(f) > 0:
            raise ValueError("f must be squarefree")
        s = ctx.sqrt(f.lc())
        if s is None or s == 0:
            raise ValueError("leading coefficient of f must be a nonzero square")
        self.ctx = ctx
        self.g = g
        self.f = f
        # branch value of y / x^(g+1) at inf+; the conjugate place carries -s
        self.s_plus = s

    # -- samplers ------------------------------------------------------------

    @staticmethod
    def random(ctx: PrimeContext, g: int, stream: FpStream) -> "HypCurve":
        for _ in range(10_000):
            r = stream.field_nonzero()
            coeffs = [stream.field() for _ in range(2 * g + 2)] + [r * r % ctx.p]
            f = UniPoly(coeffs, ctx.p)
            if f.degree == 2 * g + 2 and _poly_gcd_deg(f) == 0:
                return HypCurve(ctx, g, f)
        raise SamplingExhausted("could not sample a squarefree model")

    def random_point(self, stream: FpStream) -> CurvePoint:
        p = self.ctx.p
        for _ in range(10_000):
            x = stream.field()
            fx = self.f(x)
            if fx == 0:
                continue
            y = self.ctx.sqrt(fx)
            if y is None:
                continue
            if stream.next_u64() & 1:
                y = p - y
            return CurvePoint.affine(x, y)
        raise SamplingExhausted("no rational curve point found")

    def random_points(self, stream: FpStream, count: int, distinct_x: bool = True, avoid_x=()) -> list[CurvePoint]:
        seen = set(avoid_x)
        out = []
        while len(out) < count:
            pt = self.random_point(stream)
            if distinct_x and pt.x in seen:
                continue
            seen.add(pt.x)
            out.append(pt)
        return out

    # -- basic geometry --------------------------------------------------------

    def contains(self, pt: CurvePoint) -> bool:
        if not pt.is_affine:
            return True
        return pt.y * pt.y % self.ctx.p == self.f(pt.x)

    def is_weierstrass(self, pt: CurvePoint) -> bool:
        return pt.is_affine and pt.y == 0

    def involution(self, pt: CurvePoint) -> CurvePoint:
        if pt.kind == INF_PLUS:
            return CurvePoint.inf_minus()
        if pt.kind == INF_MINUS:
            return CurvePoint.inf_plus()
        return CurvePoint.affine(pt.x, (-pt.y) % self.ctx.p)

    def canonical_divisor(self) -> Divisor:
        return Divisor([(CurvePoint.inf_plus(), self.g - 1), (CurvePoint.inf_minus(), self.g - 1)])

    # -- Riemann-Roch ------------------------------------------------------------

    def rr_space(self, D: Divisor) -> list[RRFunction]:
        """Basis of L(D) = {phi : div(phi) >= -D}.

        Affine support must avoid Weierstrass points.  Negative
        multiplicities prescribe zeros.  Pole orders at inf+/inf- bound
        deg a and deg b; vanishing requirements become rows from
        truncated expansions of y.
        """
        p = self.ctx.p
        g = self.g
        groups: dict[int, dict[int, int]] = {}
        n_plus = n_minus = 0
        for pt, n in D.entries:
            if pt.kind == INF_PLUS:
                n_plus = n
            elif pt.kind == INF_MINUS:
                n_minus = n
            else:
                if pt.y == 0:
                    raise UnsupportedSupport("Weierstrass point in divisor support")
                if pt.y * pt.y % p != self.f(pt.x):
                    raise ValueError("divisor point not on the curve")
                groups.setdefault(pt.x, {})[pt.y] = n

        den = UniPoly.one(p)
        delta = 0
        cond_specs = []  # (x0, branch value, required order)
        for x0, branch_mults in groups.items():
            k = max(max(branch_mults.values()), 0)
            if k:
                den = den * UniPoly.from_roots([x0] * k, p)
                delta += k
            ys = set(branch_mults)
            for y0 in ys | {(-y) % p for y in ys}:
                r = k - branch_mults.get(y0, 0)
                if r > 0:
                    cond_specs.append((x0, y0, r))

        m_plus = n_plus + delta
        m_minus = n_minus + delta
        deg_a = max(m_plus, m_minus)
        deg_b = deg_a - (g + 1)
        if deg_a < 0:
            return []
        na, nb = deg_a + 1, max(deg_b + 1, 0)

        rows = []
        for x0, y0, r in cond_specs:
            rows.append(self._affine_vanishing_rows(x0, y0, r, deg_a, deg_b))
        for m_side, branch in ((m_plus, self.s_plus), (m_minus, (-self.s_plus) % p)):
            blk = self._infinity_rows(m_side, branch, deg_a, deg_b)
            if blk is not None:
                rows.append(blk)

        if rows:
            mat = np.vstack(rows)
            ker = kernel_basis(mat, p)
        else:
            ker = np.eye(na + nb, dtype=np.int64)
        out = []
        for v in ker:
            a = UniPoly(v[:na], p)
            b = UniPoly(v[na:], p) if nb else UniPoly.zero(p)
            out.append(RRFunction(a, b, den))
        return out

    def _affine_vanishing_rows(self, x0: int, y0: int, r: int, deg_a: int, deg_b: int) -> np.ndarray:
        """Rows forcing ord >= r of a + b y at the point (x0, y0)."""
        p = self.ctx.p
        na, nb = deg_a + 1, max(deg_b + 1, 0)
        SA = _taylor_shift_matrix(x0, deg_a, r, p)
        if nb:
            fs = TruncSeries.from_poly(self.f.compose_shift(x0), r)
            ys = series_sqrt(fs, y0).coeffs
            SB = _taylor_shift_matrix(x0, deg_b, r, p)
            Y = np.zeros((r, r), dtype=np.int64)
            for j in range(r):
                for l in range(j + 1):
                    Y[j, l] = ys[j - l]
            from ._kernels import mod_matmul

            bblock = mod_matmul(Y, SB, p)
            return np.hstack([SA, bblock])
        return SA

    def _infinity_rows(self, m_side: int, branch: int, deg_a: int, deg_b: int) -> np.ndarray | None:
        """Rows bounding the pole order of a + b y at one infinite place.

        Written in the local parameter u = 1/x, where y = u^-(g+1) sigma(u)
        and sigma is the square root of the reversed f with value `branch`
        at u = 0.  One row per excluded power u^-k, k = m_side+1 .. deg_a.
        """
        p = self.ctx.p
        g = self.g
        na, nb = deg_a + 1, max(deg_b + 1, 0)
        ks = list(range(m_side + 1, deg_a + 1))
        if not ks:
            return None
        T = max(deg_b + g + 1 - (m_side + 1) + 1, 1)
        sigma = None
        if nb:
            frev = TruncSeries(self.f.reversed(2 * g + 2).coeffs, T, p)
            sigma = series_sqrt(frev, branch).coeffs
        rows = np.zeros((len(ks), na + nb), dtype=np.int64)
        for i, k in enumerate(ks):
            if 0 <= k <= deg_a:
                rows[i, k] = 1
            if nb:
                for j in range(nb):
                    idx = j + g + 1 - k
                    if 0 <= idx < T:
                        rows[i, na + j] = sigma[idx]
        return rows

    def h0(self, D: Divisor) -> int:
        return len(self.rr_space(D))


def _poly_gcd_deg(f: UniPoly) -> int:
    from .unipoly import gcd

    return gcd(f, f.derivative()).degree


def _taylor_shift_matrix(x0: int, deg: int, r: int, p: int) -> np.ndarray:
    """S[j, k] = C(k, j) x0^(k-j): coefficient of t^j in (x0 + t)^k."""
    n = deg + 1
    S = np.zeros((r, n), dtype=np.int64)
    if n <= 0:
        return S
    pw = [1]
    for _ in range(deg):
        pw.append(pw[-1] * x0 % p)
    for j in range(r):
        for k in range(j, n):
            S[j, k] = comb(k, j) % p * pw[k - j] % p
    return S


class EmbeddedCurve:
    """The curve embedded by the complete system of K + 2D, D effective of degree g.

    Coordinates of an affine point are the numerator values of the basis
    functions (they share one denominator, so the projective class is
    unaffected); points over denominator roots are outside the chart.
    """

    def __init__(self, curve: HypCurve, D: Divisor):
        if D.degree != curve.g or any(not pt.is_affine for pt, _ in D.entries):
            raise ValueError("embedding divisor must be g affine points")
        self.curve = curve
        self.D = D
        big = curve.canonical_divisor() + D.scale(2)
        self.basis = curve.rr_space(big)
        self.m = len(self.basis)
        if self.m != 3 * curve.g - 1:
            raise ValueError(f"embedding space has dimension {self.m}, expected {3 * curve.g - 1}")
        self._den = self.basis[0].den

    @property
    def ambient_proj_dim(self) -> int:
        return self.m - 1

    def point_image(self, pt: CurvePoint) -> np.ndarray:
        p = self.curve.ctx.p
        if not pt.is_affine:
            raise IndeterminateAt("infinite places are outside the embedding chart")
        if self._den(pt.x) == 0:
            raise IndeterminateAt("point lies over a denominator root")
        vals = np.array([fn.numerator_at(pt) for fn in self.basis], dtype=np.int64)
        if not np.any(vals):
            raise IndeterminateAt("all coordinates vanish")
        return normalize_point(vals, p)

    def embed_many(self, points) -> np.ndarray:
        return np.vstack([self.point_image(pt) for pt in points])

    def random_embedded(self, stream: FpStream, count: int = 1, avoid_x=()) -> np.ndarray:
        pts = self.curve.random_points(stream, count, avoid_x=set(avoid_x) | self.D.affine_x_coords())
        return self.embed_many(pts)

    def hyperplane_section_degree(self, stream: FpStream, max_tries: int = 20) -> int:
        """Zero count (with multiplicity, over the closure) of a generic
        pulled-back linear form; counts affine zeros through the norm
        polynomial and infinite zeros through expansion depth."""
        p = self.curve.ctx.p
        g = self.curve.g
        A = 3 * g - 1
        for _ in range(max_tries):
            H = stream.vector(self.m)
            if not np.any(H):
                continue
            a = UniPoly.zero(p)
            b = UniPoly.zero(p)
            for h, fn in zip(H, self.basis):
                a = a + fn.a * int(h)
                b = b + fn.b * int(h)
            if a.is_zero() and b.is_zero():
                continue
            try:
                pi_plus = self._pole_order_at_inf(a, b, self.s_branch(True))
                pi_minus = self._pole_order_at_inf(a, b, self.s_branch(False))
            except DegenerateHyperplane:
                continue
            R = a * a - b * b * self.curve.f
            if R.is_zero() or R.degree != pi_plus + pi_minus:
                continue
            Rt = R
            ok = True
            for x0 in self.D.affine_x_coords():
                try:
                    Rt = Rt.exact_div(UniPoly.from_roots([x0, x0], p))
                except ValueError:
                    ok = False
                    break
            if not ok:
                continue
            return Rt.degree + (A - pi_plus) + (A - pi_minus)
        raise DegenerateHyperplane("no generic hyperplane found")

    def s_branch(self, plus: bool) -> int:
        s = self.curve.s_plus
        return s if plus else (-s) % self.curve.ctx.p

    def _pole_order_at_inf(self, a: UniPoly, b: UniPoly, branch: int) -> int:
        p = self.curve.ctx.p
        g = self.curve.g
        A = 3 * g - 1
        T = 2 * A + g + 2
        frev = TruncSeries(self.curve.f.reversed(2 * g + 2).coeffs, T, p)
        sigma = series_sqrt(frev, branch).coeffs
        ac = a.coeffs
        bc = b.coeffs
        for k in range(A, -A - 1, -1):
            c = int(ac[k]) if 0 <= k < len(ac) else 0
            for j in range(len(bc)):
                idx = j + g + 1 - k
                if 0 <= idx < T:
                    c = (c + int(bc[j]) * int(sigma[idx])) % p
            if c % p:
                return k
        raise DegenerateHyperplane("expansion vanished to unexpected depth")


def sample_divisor(curve: HypCurve, stream: FpStream, degree: int | None = None) -> Divisor:
    """Generic effective divisor: distinct-x affine non-Weierstrass points."""
    degree = curve.g if degree is None else degree
    return Divisor.of_points(curve.random_points(stream, degree))


def sample_N(curve: HypCurve, D: Divisor, stream: FpStream, attempts: int = 1000):
    """A reduced divisor N ~ 2D of 2g distinct rational affine points.

    Works inside the pencil of functions s = a(x) + b(x) y that vanish to
    order two on the conjugate of D: such s cut out N + 2 i(D) on the
    curve, so the residual divisor of zeros is linearly equivalent to 2D.
    Half of N is prescribed at random rational points (the linear
    conditions pin s up to scale); the other half must then split over
    F_p, which is the rejection step.  Conjugate pairs are excluded
    automatically because all 2g x-coordinates are distinct.

    Returns (N, s) with s the cutting function.
    """
    p = curve.ctx.p
    g = curve.g
    used_base = D.affine_x_coords()
    deg_a, deg_b = 2 * g, g - 1
    na = deg_a + 1
    root_stream = FpStream(p, stream.next_u64())
    for _ in range(attempts):
        xi: list[int] = []
        ys: list[int] = []
        guard = 0
        while len(xi) < g and guard < 10_000:
            guard += 1
            x = stream.field()
            if x in used_base or x in xi:
                continue
            fx = curve.f(x)
            if fx == 0:
                continue
            r = curve.ctx.sqrt(fx)
            if r is None:
                continue
            xi.append(x)
            ys.append(r if stream.next_u64() & 1 else (p - r) % p)
        if len(xi) < g:
            raise SamplingExhausted("not enough rational x-coordinates")

        rows = []
        for pt, _ in D.entries:
            rows.append(curve._affine_vanishing_rows(pt.x, (-pt.y) % p, 2, deg_a, deg_b))
        for x, y in zip(xi, ys):
            row = np.zeros(na + deg_b + 1, dtype=np.int64)
            xp = 1
            for k in range(na):
                row[k] = xp
                xp = xp * x % p
            xp = 1
            for k in range(deg_b + 1):
                row[na + k] = xp * y % p
                xp = xp * x % p
            rows.append(row)
        ker = kernel_basis(np.vstack(rows), p)
        if ker.shape[0] != 1:
            continue
        a = UniPoly(ker[0][:na], p)
        b = UniPoly(ker[0][na:], p)
        if b.is_zero():
            continue
        R = a * a - b * b * curve.f
        try:
            for x0 in used_base:
                R = R.exact_div(UniPoly.from_roots([x0, x0], p))
            for x in xi:
                R = R.exact_div(UniPoly.from_roots([x], p))
        except ValueError:
            continue
        if R.degree != g:
            continue
        roots = roots_in_field(R, root_stream)
        if len(roots) != g or len(set(roots)) != g:
            continue
        taken = used_base | set(xi)
        good = True
        pts = []
        for rho in roots:
            if rho in taken or b(rho) == 0:
                good = False
                break
            yr = (-a(rho)) * pow(b(rho), -1, p) % p
            if yr == 0 or yr * yr % p != curve.f(rho):
                good = False
                break
            taken.add(rho)
            pts.append(CurvePoint.affine(rho, yr))
        if not good:
            continue
        N = Divisor.of_points([CurvePoint.affine(x, y) for x, y in zip(xi, ys)] + pts)
        s_fn = RRFunction(a, b, _den_from(D, p))
        return N, s_fn
    raise SamplingExhausted("could not sample a split N in the attempt budget")


def _den_from(D: Divisor, p: int) -> UniPoly:
    den = UniPoly.one(p)
    for pt, n in D.entries:
        if pt.is_affine and n > 0:
            den = den * UniPoly.from_roots([pt.x] * (2 * n), p)
    return den
