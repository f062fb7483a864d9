"""Graded-lexicographic monomial indexing, fixed once for every module.

Degree-d monomials in m variables are ordered by exponent vector in
lexicographic *descending* order (rank 0 is x_0^d, the last rank is
x_{m-1}^d).  All coefficient vectors, interpolation rows and exported
bases use this ranking, so systems computed in different runs line up
column by column.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np


def count(m: int, d: int) -> int:
    """Number of degree-d monomials in m variables."""
    return comb(m + d - 1, d)


@lru_cache(maxsize=None)
def exponents(m: int, d: int) -> np.ndarray:
    """All exponent vectors, shape (count(m, d), m), in graded-lex order."""
    if m == 1:
        return np.array([[d]], dtype=np.int64)
    blocks = []
    for e0 in range(d, -1, -1):
        rest = exponents(m - 1, d - e0)
        head = np.full((rest.shape[0], 1), e0, dtype=np.int64)
        blocks.append(np.hstack([head, rest]))
    out = np.vstack(blocks)
    out.setflags(write=False)
    return out


def rank(exp) -> int:
    """Index of an exponent vector within its (m, d) block."""
    exp = list(int(e) for e in exp)
    d = sum(exp)
    m = len(exp)
    r = 0
    for i in range(m - 1):
        e = exp[i]
        # monomials whose i-th exponent is larger come first
        for k in range(d, e, -1):
            r += count(m - i - 1, d - k)
        d -= e
    return r


def unrank(i: int, m: int, d: int) -> tuple[int, ...]:
    """Inverse of :func:`rank` for the (m, d) block."""
    if not 0 <= i < count(m, d):
        raise IndexError(f"rank {i} out of range for ({m},{d})")
    out = []
    for pos in range(m - 1):
        for e in range(d, -1, -1):
            block = count(m - pos - 1, d - e)
            if i < block:
                out.append(e)
                d -= e
                break
            i -= block
    out.append(d)
    return tuple(out)


@lru_cache(maxsize=None)
def falling_factorial_table(p: int, dmax: int = 8) -> np.ndarray:
    """ff[b, a] = b (b-1) ... (b-a+1) mod p, the d^a x^b coefficient."""
    ff = np.zeros((dmax + 1, dmax + 1), dtype=np.int64)
    for b in range(dmax + 1):
        acc = 1
        ff[b, 0] = 1
        for a in range(1, dmax + 1):
            acc = acc * max(b - a + 1, 0) % p
            ff[b, a] = acc
    return ff
