"""Dense homogeneous forms in m variables over F_p.

A form is its coefficient vector in the global graded-lex monomial order.
Restriction to a line and substitution along a linear map are both exact:
the former interpolates from d+1 parameter values, the latter solves a
seeded monomial interpolation system (deterministic for fixed inputs, and
verified invertible before use).
"""

from __future__ import annotations

import numpy as np

from . import monomials
from ._kernels import monomial_rows, solve_dense
from .errors import DegeneratePair, RankDeficient
from .fieldctx import FpStream
from .linalg import rank as mat_rank
from .unipoly import UniPoly

_SUBST_STREAM_SALT = 0x5B57


class HomogForm:
    """Homogeneous polynomial of degree d in m variables."""

    __slots__ = ("d", "m", "p", "coeffs")

    def __init__(self, d: int, m: int, coeffs, p: int):
        self.d, self.m, self.p = d, m, p
        arr = np.asarray(coeffs, dtype=np.int64).reshape(-1) % p
        if arr.shape[0] != monomials.count(m, d):
            raise ValueError(f"expected {monomials.count(m, d)} coefficients, got {arr.shape[0]}")
        self.coeffs = arr

    @staticmethod
    def from_monomial(d: int, m: int, exp, p: int, coeff: int = 1) -> "HomogForm":
        v = np.zeros(monomials.count(m, d), dtype=np.int64)
        v[monomials.rank(exp)] = coeff % p
        return HomogForm(d, m, v, p)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HomogForm)
            and (self.d, self.m, self.p) == (other.d, other.m, other.p)
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __add__(self, other: "HomogForm") -> "HomogForm":
        return HomogForm(self.d, self.m, self.coeffs + other.coeffs, self.p)

    def __sub__(self, other: "HomogForm") -> "HomogForm":
        return HomogForm(self.d, self.m, self.coeffs - other.coeffs, self.p)

    def __mul__(self, scalar: int) -> "HomogForm":
        return HomogForm(self.d, self.m, self.coeffs * (scalar % self.p), self.p)

    __rmul__ = __mul__

    def eval(self, point) -> int:
        return int(self.eval_many(np.asarray(point, dtype=np.int64).reshape(1, -1))[0])

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Values at several points (rows)."""
        rows = monomial_rows(points % self.p, monomials.exponents(self.m, self.d), self.p)
        from ._kernels import mod_matmul

        return mod_matmul(rows, self.coeffs.reshape(-1, 1), self.p).ravel()

    def partials(self, order: int = 1) -> list["HomogForm"]:
        """All order-k partial derivatives, indexed like degree-k monomials."""
        if order > self.d:
            raise ValueError("derivative order exceeds degree")
        p = self.p
        exps_in = monomials.exponents(self.m, self.d)
        exps_out = monomials.exponents(self.m, self.d - order)
        alphas = monomials.exponents(self.m, order)
        ff = monomials.falling_factorial_table(p)
        out = []
        for al in alphas:
            betas = exps_out + al[None, :]
            coeff = np.ones(exps_out.shape[0], dtype=np.int64)
            for v in range(self.m):
                coeff = coeff * ff[betas[:, v], al[v]] % p
            src = np.array([monomials.rank(b) for b in betas], dtype=np.int64)
            out.append(HomogForm(self.d - order, self.m, self.coeffs[src] * coeff % p, p))
        return out

    def gradient(self) -> list["HomogForm"]:
        return self.partials(1)

    def restrict_to_line(self, A, U) -> UniPoly:
        """The univariate polynomial t -> F(A + t U)."""
        p = self.p
        A = np.asarray(A, dtype=np.int64) % p
        U = np.asarray(U, dtype=np.int64) % p
        if mat_rank(np.vstack([A, U]), p) < 2:
            raise DegeneratePair("line point and direction are proportional")
        ts = np.arange(self.d + 1, dtype=np.int64)
        pts = (A[None, :] + ts[:, None] * U[None, :]) % p
        vals = self.eval_many(pts)
        return _interpolate(ts, vals, p)

    def substitute_linear(self, M: np.ndarray) -> "HomogForm":
        """Pullback along the linear map q -> M q (M is m x k, full column rank)."""
        return substitute_many([self], M)[0]


def _interpolate(xs: np.ndarray, ys: np.ndarray, p: int) -> UniPoly:
    """Lagrange interpolation through distinct nodes, exact over F_p."""
    n = len(xs)
    out = UniPoly.zero(p)
    for i in range(n):
        num = UniPoly.one(p)
        denom = 1
        for j in range(n):
            if j != i:
                num = num * UniPoly([-int(xs[j]) % p, 1], p)
                denom = denom * (int(xs[i]) - int(xs[j])) % p
        out = out + num * (int(ys[i]) * pow(denom, -1, p) % p)
    return out


def substitute_many(forms: list[HomogForm], M: np.ndarray) -> list[HomogForm]:
    """Pull back several forms along q -> M q, sharing one interpolation.

    Works by evaluating each form at M q_i for seeded sample points q_i and
    solving the (invertible) monomial interpolation system in the small
    variable set; exactness does not depend on the choice of samples.
    """
    if not forms:
        return []
    d, m, p = forms[0].d, forms[0].m, forms[0].p
    M = np.asarray(M, dtype=np.int64) % p
    if M.shape[0] != m:
        raise ValueError("map target dimension mismatch")
    k = M.shape[1]
    if mat_rank(M.T, p) < k:
        raise RankDeficient("substitution map must have full column rank")
    n = monomials.count(k, d)
    exps = monomials.exponents(k, d)
    stream = FpStream(p, _SUBST_STREAM_SALT)
    for _ in range(16):
        qs = stream.matrix(n, k)
        mono = monomial_rows(qs, exps, p)
        big = qs @ M.T % p
        vals = np.stack([f.eval_many(big) for f in forms], axis=1)
        sol = solve_dense(mono, vals, p)
        if sol is not None:
            return [HomogForm(d, k, sol[:, j], p) for j in range(sol.shape[1])]
    raise RankDeficient("could not find an invertible interpolation sample")
