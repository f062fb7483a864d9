"""Hot numeric kernels: exact mod-p matrix ops behind the linear algebra.

Two interchangeable implementations live here:

* numba ``@njit`` loops (default when numba imports cleanly), and
* pure-numpy fallbacks.

Select with ``THETA_LAB_BACKEND=numba|numpy|auto`` (default ``auto``).
Both paths are exact; the benchmark under ``benchmarks/`` compares them.

The one kernel shared by both paths is :func:`mod_matmul`: it splits the
int64 operands into 15-bit limbs and runs float64 BLAS matmuls, which is
exact as long as the inner dimension stays below 2**23 and p < 2**30
(both enforced by PrimeContext / callers).
"""

from __future__ import annotations

import os

import numpy as np

_BACKEND_ENV = os.environ.get("THETA_LAB_BACKEND", "auto").lower()
if _BACKEND_ENV not in ("auto", "numba", "numpy"):
    raise ValueError(f"THETA_LAB_BACKEND must be auto|numba|numpy, got {_BACKEND_ENV!r}")

_HAVE_NUMBA = False
if _BACKEND_ENV in ("auto", "numba"):
    try:
        from numba import njit, prange

        _HAVE_NUMBA = True
    except ImportError:
        if _BACKEND_ENV == "numba":
            raise

USE_NUMBA = _HAVE_NUMBA and _BACKEND_ENV != "numpy"

_LIMB = 15
_LIMB_MASK = (1 << _LIMB) - 1
_MAX_INNER = 1 << (53 - 2 * _LIMB)  # exactness bound for the float64 limb trick


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


def mod_matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Exact (A @ B) % p for int64 arrays with entries in [0, p), p < 2**30.

    15-bit limb split + float64 BLAS; chunks rows of A to bound transient
    memory. Inner dimensions beyond 2**23 are chunked as well.
    """
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    n, k = A.shape
    k2, m = B.shape
    if k != k2:
        raise ValueError("shape mismatch")
    if k == 0 or n == 0 or m == 0:
        return np.zeros((n, m), dtype=np.int64)
    if k > _MAX_INNER:
        mid = k // 2
        return (mod_matmul(A[:, :mid], B[:mid], p) + mod_matmul(A[:, mid:], B[mid:], p)) % p

    Bh = (B >> _LIMB).astype(np.float64)
    Bl = (B & _LIMB_MASK).astype(np.float64)
    out = np.empty((n, m), dtype=np.int64)
    sh_hi = (1 << (2 * _LIMB)) % p
    sh_md = (1 << _LIMB) % p
    # row chunks sized to keep float temporaries around ~128 MB
    chunk = max(1, min(n, (1 << 24) // max(k + m, 1)))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        Ah = (A[lo:hi] >> _LIMB).astype(np.float64)
        Al = (A[lo:hi] & _LIMB_MASK).astype(np.float64)
        phh = (Ah @ Bh).astype(np.int64) % p
        phl = ((Ah @ Bl).astype(np.int64) + (Al @ Bh).astype(np.int64)) % p
        pll = (Al @ Bl).astype(np.int64) % p
        out[lo:hi] = (phh * sh_hi % p + phl * sh_md % p + pll) % p
    return out


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if USE_NUMBA:

    @njit(cache=True)
    def _inv_mod(a, p):
        t, newt = 0, 1
        r, newr = p, a % p
        while newr != 0:
            q = r // newr
            t, newt = newt, t - q * newt
            r, newr = newr, r - q * newr
        return t % p

    @njit(cache=True)
    def _echelonize_chunk_nb(rows, p):
        # In-place Gauss-Jordan; returns npiv and pivot columns. Rows 0..npiv
        # end up as mutually reduced pivot rows with unit pivots.
        n, m = rows.shape
        cap = n if n < m else m
        pivcols = np.empty(cap, np.int64)
        npiv = 0
        for col in range(m):
            sel = -1
            for r in range(npiv, n):
                if rows[r, col] != 0:
                    sel = r
                    break
            if sel == -1:
                continue
            if sel != npiv:
                for j in range(m):
                    t = rows[npiv, j]
                    rows[npiv, j] = rows[sel, j]
                    rows[sel, j] = t
            inv = _inv_mod(rows[npiv, col], p)
            for j in range(m):
                rows[npiv, j] = rows[npiv, j] * inv % p
            for r in range(n):
                if r != npiv:
                    f = rows[r, col]
                    if f != 0:
                        fp = p - f
                        for j in range(m):
                            rows[r, j] = (rows[r, j] + fp * rows[npiv, j]) % p
            pivcols[npiv] = col
            npiv += 1
            if npiv == n:
                break
        return npiv, pivcols[:npiv]

    @njit(cache=True, parallel=True)
    def _monomial_rows_nb(points, exps, p):
        n, m = points.shape
        nmon = exps.shape[0]
        dmax = 0
        for t in range(nmon):
            for v in range(m):
                if exps[t, v] > dmax:
                    dmax = exps[t, v]
        out = np.empty((n, nmon), np.int64)
        for i in prange(n):
            pw = np.empty((m, dmax + 1), np.int64)
            for v in range(m):
                pw[v, 0] = 1
                for e in range(1, dmax + 1):
                    pw[v, e] = pw[v, e - 1] * points[i, v] % p
            for t in range(nmon):
                acc = 1
                for v in range(m):
                    e = exps[t, v]
                    if e:
                        acc = acc * pw[v, e] % p
                out[i, t] = acc
        return out

    @njit(cache=True, parallel=True)
    def _derivative_rows_nb(q, exps, alphas, ff, p):
        m = q.shape[0]
        nmon = exps.shape[0]
        nk = alphas.shape[0]
        dmax = 0
        for t in range(nmon):
            for v in range(m):
                if exps[t, v] > dmax:
                    dmax = exps[t, v]
        pw = np.empty((m, dmax + 1), np.int64)
        for v in range(m):
            pw[v, 0] = 1
            for e in range(1, dmax + 1):
                pw[v, e] = pw[v, e - 1] * q[v] % p
        out = np.zeros((nk, nmon), np.int64)
        for a in prange(nk):
            for t in range(nmon):
                acc = 1
                ok = True
                for v in range(m):
                    e = exps[t, v]
                    av = alphas[a, v]
                    if e < av:
                        ok = False
                        break
                    if av:
                        acc = acc * ff[e, av] % p
                    if e > av:
                        acc = acc * pw[v, e - av] % p
                if ok:
                    out[a, t] = acc
        return out

    @njit(cache=True)
    def _solve_dense_nb(aug, n, k, p):
        # Gauss-Jordan on the augmented matrix [A | B]; returns 1 on success.
        for col in range(n):
            sel = -1
            for r in range(col, n):
                if aug[r, col] != 0:
                    sel = r
                    break
            if sel == -1:
                return 0
            if sel != col:
                for j in range(n + k):
                    t = aug[col, j]
                    aug[col, j] = aug[sel, j]
                    aug[sel, j] = t
            inv = _inv_mod(aug[col, col], p)
            for j in range(n + k):
                aug[col, j] = aug[col, j] * inv % p
            for r in range(n):
                if r != col:
                    f = aug[r, col]
                    if f != 0:
                        fp = p - f
                        for j in range(n + k):
                            aug[r, j] = (aug[r, j] + fp * aug[col, j]) % p
        return 1


# ---------------------------------------------------------------------------
# numpy fallbacks
# ---------------------------------------------------------------------------


def _echelonize_chunk_np(rows, p):
    n, m = rows.shape
    pivcols = []
    npiv = 0
    for col in range(m):
        if npiv == n:
            break
        nz = np.nonzero(rows[npiv:, col])[0]
        if nz.size == 0:
            continue
        sel = npiv + int(nz[0])
        if sel != npiv:
            rows[[npiv, sel]] = rows[[sel, npiv]]
        inv = pow(int(rows[npiv, col]), -1, p)
        rows[npiv] = rows[npiv] * inv % p
        f = rows[:, col].copy()
        f[npiv] = 0
        hit = np.nonzero(f)[0]
        if hit.size:
            rows[hit] = (rows[hit] - np.outer(f[hit], rows[npiv])) % p
        pivcols.append(col)
        npiv += 1
    return npiv, np.array(pivcols, dtype=np.int64)


def _monomial_rows_np(points, exps, p):
    n, m = points.shape
    nmon = exps.shape[0]
    dmax = int(exps.max()) if nmon else 0
    pw = np.empty((n, m, dmax + 1), dtype=np.int64)
    pw[:, :, 0] = 1
    for e in range(1, dmax + 1):
        pw[:, :, e] = pw[:, :, e - 1] * points % p
    out = np.ones((n, nmon), dtype=np.int64)
    for v in range(m):
        out = out * pw[:, v, exps[:, v]] % p
    return out


def _derivative_rows_np(q, exps, alphas, ff, p):
    m = q.shape[0]
    nmon = exps.shape[0]
    nk = alphas.shape[0]
    dmax = int(exps.max()) if nmon else 0
    pw = np.empty((m, dmax + 1), dtype=np.int64)
    pw[:, 0] = 1
    for e in range(1, dmax + 1):
        pw[:, e] = pw[:, e - 1] * q % p
    out = np.empty((nk, nmon), dtype=np.int64)
    for a in range(nk):
        al = alphas[a]
        ok = (exps >= al[None, :]).all(axis=1)
        acc = np.ones(nmon, dtype=np.int64)
        for v in range(m):
            e = exps[:, v]
            av = int(al[v])
            if av:
                acc = acc * ff[e, av] % p
            diff = np.maximum(e - av, 0)
            acc = acc * pw[v, diff] % p
        out[a] = np.where(ok, acc, 0)
    return out


def _solve_dense_np(aug, n, k, p):
    for col in range(n):
        nz = np.nonzero(aug[col:, col])[0]
        if nz.size == 0:
            return 0
        sel = col + int(nz[0])
        if sel != col:
            aug[[col, sel]] = aug[[sel, col]]
        inv = pow(int(aug[col, col]), -1, p)
        aug[col] = aug[col] * inv % p
        f = aug[:, col].copy()
        f[col] = 0
        hit = np.nonzero(f)[0]
        if hit.size:
            aug[hit] = (aug[hit] - np.outer(f[hit], aug[col])) % p
    return 1


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def echelonize_chunk(rows: np.ndarray, p: int):
    """In-place Gauss-Jordan of a row block; returns (npiv, pivot_columns)."""
    if USE_NUMBA:
        return _echelonize_chunk_nb(rows, p)
    return _echelonize_chunk_np(rows, p)


def monomial_rows(points: np.ndarray, exps: np.ndarray, p: int) -> np.ndarray:
    """Evaluation matrix: rows are all monomials (per exps) at each point."""
    points = np.ascontiguousarray(points, dtype=np.int64)
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    if USE_NUMBA:
        return _monomial_rows_nb(points, exps, p)
    return _monomial_rows_np(points, exps, p)


def derivative_rows(q: np.ndarray, exps: np.ndarray, alphas: np.ndarray, ff: np.ndarray, p: int) -> np.ndarray:
    """Rows of partial-derivative functionals d^alpha at a single point q."""
    q = np.ascontiguousarray(q, dtype=np.int64)
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    alphas = np.ascontiguousarray(alphas, dtype=np.int64)
    if USE_NUMBA:
        return _derivative_rows_nb(q, exps, alphas, ff, p)
    return _derivative_rows_np(q, exps, alphas, ff, p)


def solve_dense(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray | None:
    """Solve A X = B for square invertible A; None when A is singular."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    n = A.shape[0]
    rhs = B.reshape(n, -1)
    aug = np.concatenate([A % p, rhs % p], axis=1).astype(np.int64)
    ok = _solve_dense_nb(aug, n, rhs.shape[1], p) if USE_NUMBA else _solve_dense_np(aug, n, rhs.shape[1], p)
    if not ok:
        return None
    X = aug[:, n:]
    return X.reshape((n,) + B.shape[1:]) if B.ndim > 1 else X.ravel()
