"""Univariate polynomial algebra over F_p.

Coefficients are stored lowest degree first in int64 numpy arrays, always
reduced mod p and trimmed so the leading coefficient is nonzero (the zero
polynomial is the empty/[0] case with degree -1).

Root finding over F_p goes through distinct-degree splitting (gcd with
x^p - x, computed by modular exponentiation) followed by randomized
equal-degree splitting of the linear part; the retry count is fixed so a
seeded run either succeeds deterministically or raises.  Resultants use
plain Gaussian elimination of the Sylvester matrix: degrees in this suite
stay around 30, far below the point where subresultant schemes pay off.
"""

from __future__ import annotations

import numpy as np

from .errors import DivisionByZero, InternalRandomnessExhausted, NoRoot
from .fieldctx import FpStream

_EDS_RETRIES = 64


class UniPoly:
    """Dense univariate polynomial over F_p."""

    __slots__ = ("p", "coeffs")

    def __init__(self, coeffs, p: int):
        arr = np.asarray(coeffs, dtype=np.int64).reshape(-1) % p
        nz = np.nonzero(arr)[0]
        self.coeffs = arr[: nz[-1] + 1] if nz.size else np.zeros(0, dtype=np.int64)
        self.p = p

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(p: int) -> "UniPoly":
        return UniPoly([], p)

    @staticmethod
    def one(p: int) -> "UniPoly":
        return UniPoly([1], p)

    @staticmethod
    def x(p: int) -> "UniPoly":
        return UniPoly([0, 1], p)

    @staticmethod
    def from_roots(roots, p: int) -> "UniPoly":
        out = UniPoly.one(p)
        for r in roots:
            out = out * UniPoly([-r % p, 1], p)
        return out

    # -- basics ----------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def lc(self) -> int:
        return int(self.coeffs[-1]) if len(self.coeffs) else 0

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * pow(self.lc(), -1, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.p == other.p and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({list(map(int, self.coeffs))}, p={self.p})"

    def __call__(self, x: int) -> int:
        acc = 0
        for c in self.coeffs[::-1]:
            acc = (acc * x + int(c)) % self.p
        return acc

    # -- ring operations -------------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = np.zeros(n, dtype=np.int64)
        out[: len(a)] += a
        out[: len(b)] += b
        return UniPoly(out, self.p)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = np.zeros(n, dtype=np.int64)
        out[: len(a)] += a
        out[: len(b)] -= b
        return UniPoly(out, self.p)

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, int):
            return UniPoly(self.coeffs * (other % self.p), self.p)
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(self.p)
        return UniPoly(np.convolve(self.coeffs, other.coeffs) % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-self.coeffs, self.p)

    def shift(self, k: int) -> "UniPoly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return UniPoly(np.concatenate([np.zeros(k, dtype=np.int64), self.coeffs]), self.p)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        p = self.p
        rem = self.coeffs.copy()
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly.zero(p), UniPoly(rem, p)
        quo = np.zeros(dq + 1, dtype=np.int64)
        inv_lc = pow(other.lc(), -1, p)
        b = other.coeffs
        for i in range(dq, -1, -1):
            if len(rem) < len(b) + i:
                continue
            c = rem[len(b) + i - 1] * inv_lc % p
            if c:
                quo[i] = c
                rem[i : i + len(b)] = (rem[i : i + len(b)] - c * b) % p
        return UniPoly(quo, p), UniPoly(rem, p)

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def derivative(self) -> "UniPoly":
        if self.degree < 1:
            return UniPoly.zero(self.p)
        mult = np.arange(1, len(self.coeffs), dtype=np.int64)
        return UniPoly(self.coeffs[1:] * mult % self.p, self.p)

    def reversed(self, at_degree: int | None = None) -> "UniPoly":
        """Coefficient reversal x^n * f(1/x); n defaults to deg f."""
        n = self.degree if at_degree is None else at_degree
        out = np.zeros(n + 1, dtype=np.int64)
        for i, c in enumerate(self.coeffs):
            out[n - i] = c
        return UniPoly(out, self.p)

    def compose_shift(self, x0: int) -> "UniPoly":
        """Taylor shift f(x0 + t) as a polynomial in t (Horner on x0 + t)."""
        p = self.p
        out = UniPoly.zero(p)
        lin = UniPoly([x0 % p, 1], p)
        for c in self.coeffs[::-1]:
            out = out * lin + UniPoly([int(c)], p)
        return out


def gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def powmod(base: UniPoly, e: int, mod: UniPoly) -> UniPoly:
    out = UniPoly.one(base.p)
    base = base % mod
    while e:
        if e & 1:
            out = out * base % mod
        base = base * base % mod
        e >>= 1
    return out


def resultant(a: UniPoly, b: UniPoly) -> int:
    """Resultant via elimination of the Sylvester matrix; 0 iff common root."""
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant of the zero polynomial")
    p = a.p
    n, m = a.degree, b.degree
    if n == 0:
        return pow(a.lc(), m, p)
    if m == 0:
        return pow(b.lc(), n, p)
    size = n + m
    S = np.zeros((size, size), dtype=np.int64)
    ra = a.coeffs[::-1]
    rb = b.coeffs[::-1]
    for i in range(m):
        S[i, i : i + n + 1] = ra
    for i in range(n):
        S[m + i, i : i + m + 1] = rb
    # determinant by elimination, tracking swaps and pivots
    det = 1
    for col in range(size):
        nz = np.nonzero(S[col:, col])[0]
        if nz.size == 0:
            return 0
        sel = col + int(nz[0])
        if sel != col:
            S[[col, sel]] = S[[sel, col]]
            det = -det % p
        piv = int(S[col, col])
        det = det * piv % p
        inv = pow(piv, -1, p)
        S[col] = S[col] * inv % p
        f = S[col + 1 :, col]
        hit = np.nonzero(f)[0]
        if hit.size:
            S[col + 1 + hit] = (S[col + 1 + hit] - np.outer(f[hit], S[col])) % p
    return det % p


def squarefree_decomposition(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm; valid here because deg f < p throughout the suite."""
    p = f.p
    out: list[tuple[UniPoly, int]] = []
    fp = f.derivative()
    a = gcd(f, fp)
    b = f.exact_div(a) if not a.is_zero() else f
    c = fp.exact_div(a) if not a.is_zero() else fp
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = gcd(b, d)
        if a.degree > 0:
            out.append((a.monic(), i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


def _split_linear(f: UniPoly, stream: FpStream) -> list[int]:
    """Roots of a squarefree product of linear factors (Cantor-Zassenhaus)."""
    p = f.p
    if f.degree == 0:
        return []
    if f.degree == 1:
        c0, c1 = int(f.coeffs[0]), int(f.coeffs[1])
        return [-c0 * pow(c1, -1, p) % p]
    for _ in range(_EDS_RETRIES):
        a = stream.field()
        h = powmod(UniPoly([a, 1], p), (p - 1) // 2, f) - UniPoly.one(p)
        g = gcd(h, f)
        if 0 < g.degree < f.degree:
            return _split_linear(g, stream) + _split_linear(f.exact_div(g), stream)
    raise InternalRandomnessExhausted("equal-degree splitting failed to split")


def roots_in_field(f: UniPoly, stream: FpStream) -> list[int]:
    """All F_p roots of f with multiplicity, sorted ascending.

    The splitting stream makes the run deterministic for a fixed seed.
    """
    if f.is_zero():
        raise ValueError("roots of the zero polynomial")
    p = f.p
    out: list[int] = []
    for g, mult in squarefree_decomposition(f.monic()):
        # isolate the linear part: gcd(x^p - x, g)
        xp = powmod(UniPoly.x(p), p, g)
        lin = gcd(xp - UniPoly.x(p), g)
        if lin.degree <= 0:
            continue
        for r in _split_linear(lin.monic(), stream):
            out.extend([r] * mult)
    return sorted(out)


class TruncSeries:
    """Truncated power series over F_p (coefficients mod t^T)."""

    __slots__ = ("p", "T", "coeffs")

    def __init__(self, coeffs, T: int, p: int):
        arr = np.zeros(T, dtype=np.int64)
        src = np.asarray(coeffs, dtype=np.int64).reshape(-1) % p
        arr[: min(T, len(src))] = src[:T]
        self.coeffs, self.T, self.p = arr, T, p

    @staticmethod
    def from_poly(f: UniPoly, T: int) -> "TruncSeries":
        return TruncSeries(f.coeffs, T, f.p)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        T = min(self.T, other.T)
        return TruncSeries(self.coeffs[:T] + other.coeffs[:T], T, self.p)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        T = min(self.T, other.T)
        return TruncSeries(self.coeffs[:T] - other.coeffs[:T], T, self.p)

    def __mul__(self, other) -> "TruncSeries":
        if isinstance(other, int):
            return TruncSeries(self.coeffs * (other % self.p), self.T, self.p)
        T = min(self.T, other.T)
        conv = np.convolve(self.coeffs[:T], other.coeffs[:T])[:T] % self.p
        return TruncSeries(conv, T, self.p)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        T = min(self.T, other.T)
        return self.p == other.p and np.array_equal(self.coeffs[:T], other.coeffs[:T])


def series_sqrt(s: TruncSeries, branch: int) -> TruncSeries:
    """Square root of a unit series with chosen constant term.

    Requires branch^2 = s(0) and branch != 0; raises NoRoot at a zero
    constant term (ramification point — callers must stay away).
    """
    p = s.p
    c0 = int(s.coeffs[0]) % p
    if c0 == 0:
        raise NoRoot("series sqrt at a ramification point")
    branch %= p
    if branch * branch % p != c0:
        raise ValueError("branch does not square to the constant term")
    r = np.zeros(s.T, dtype=np.int64)
    r[0] = branch
    inv2r0 = pow(2 * branch % p, -1, p)
    for n in range(1, s.T):
        acc = int(s.coeffs[n])
        for i in range(1, n):
            acc -= int(r[i]) * int(r[n - i])
        r[n] = acc % p * inv2r0 % p
    return TruncSeries(r, s.T, p)
