"""Exact dense linear algebra over F_p.

The workhorse is :class:`EchelonAccumulator`: it absorbs row batches into a
maintained reduced echelon form so that interpolation matrices can grow
incrementally (rank stabilization) without ever re-eliminating from
scratch.  Batches are reduced against the accumulated pivots with one
blocked modular matmul, then echelonized internally, then back-propagated
into the stored rows — so the matrix stays reduced and kernel extraction
is a gather, not a solve.

Projective subspaces are stored as canonical RREF bases of their cones,
which makes equality and containment tests exact comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .fieldctx import PrimeContext

_ABSORB_CHUNK = 512


class EchelonAccumulator:
    """Incrementally maintained RREF of a growing row set over F_p.

    Single-writer: ``absorb`` must not be called concurrently; ``rank``
    and ``kernel`` are read-only and safe between absorptions.
    """

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self._rows = np.zeros((0, ncols), dtype=np.int64)
        self._pivcols: list[int] = []
        self.rows_absorbed = 0

    @property
    def rank(self) -> int:
        return len(self._pivcols)

    @property
    def corank(self) -> int:
        return self.ncols - self.rank

    def absorb(self, batch: np.ndarray) -> int:
        """Add rows; returns the number of new pivots found."""
        batch = np.asarray(batch, dtype=np.int64)
        if batch.ndim == 1:
            batch = batch.reshape(1, -1)
        if batch.shape[1] != self.ncols:
            raise ValueError("column count mismatch")
        self.rows_absorbed += batch.shape[0]
        found = 0
        for lo in range(0, batch.shape[0], _ABSORB_CHUNK):
            found += self._absorb_chunk(batch[lo : lo + _ABSORB_CHUNK] % self.p)
        return found

    def _absorb_chunk(self, chunk: np.ndarray) -> int:
        p = self.p
        chunk = chunk.copy()
        if self.rank:
            coef = chunk[:, self._pivcols]
            if np.any(coef):
                chunk = (chunk - _kernels.mod_matmul(coef, self._rows, p)) % p
        if not np.any(chunk):
            return 0
        npiv, newcols = _kernels.echelonize_chunk(chunk, p)
        if npiv == 0:
            return 0
        newrows = chunk[:npiv]
        if self.rank:
            # keep old rows reduced at the freshly found pivot columns
            coef = self._rows[:, newcols]
            if np.any(coef):
                self._rows = (self._rows - _kernels.mod_matmul(coef, newrows, p)) % p
        self._rows = np.vstack([self._rows, newrows])
        self._pivcols.extend(int(c) for c in newcols)
        return npiv

    def kernel(self) -> np.ndarray:
        """Basis of the right kernel, one row per free column (RREF-canonical)."""
        p = self.p
        piv = np.array(self._pivcols, dtype=np.int64)
        isfree = np.ones(self.ncols, dtype=bool)
        if piv.size:
            isfree[piv] = False
        free = np.nonzero(isfree)[0]
        K = np.zeros((free.size, self.ncols), dtype=np.int64)
        K[np.arange(free.size), free] = 1
        if piv.size and free.size:
            K[:, piv] = (-self._rows[:, free].T) % p
        return K

    def row_space(self) -> np.ndarray:
        """Canonical RREF basis of the absorbed row space (pivot-sorted)."""
        order = np.argsort(np.array(self._pivcols, dtype=np.int64)) if self._pivcols else []
        return self._rows[order] if len(self._pivcols) else self._rows.copy()


def rref(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form (copy) and pivot columns, pivot-sorted."""
    acc = EchelonAccumulator(M.shape[1], p)
    acc.absorb(M)
    rows = acc.row_space()
    return rows, sorted(acc._pivcols)

def rank(M: np.ndarray, p: int) -> int:
    acc = EchelonAccumulator(M.shape[1], p)
    acc.absorb(M)
    return acc.rank


def kernel_basis(M: np.ndarray, p: int) -> np.ndarray:
    """Right null space basis of M over F_p; rows are the basis vectors."""
    acc = EchelonAccumulator(M.shape[1], p)
    acc.absorb(M)
    return acc.kernel()


def solve_right(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of A x = b, or None when inconsistent.

    A may be rectangular; uses the kernel construction on [A | -b].
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    aug = np.concatenate([A % p, (-b.reshape(-1, 1)) % p], axis=1)
    K = kernel_basis(aug, p)
    hits = np.nonzero(K[:, -1])[0]
    if hits.size == 0:
        return None
    v = K[hits[0]]
    scale = pow(int(v[-1]), -1, p)
    return v[:-1] * scale % p


@dataclass(frozen=True)
class ProjSubspace:
    """Linear subspace of F_p^m stored by a canonical RREF row basis.

    ``dim`` is the vector-space dimension; projectively the subspace has
    dimension ``dim - 1`` (empty when dim == 0).
    """

    ambient: int
    basis: np.ndarray  # (dim x ambient) canonical RREF

    @staticmethod
    def from_rows(rows: np.ndarray, p: int) -> "ProjSubspace":
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        red, _ = rref(rows, p)
        red.setflags(write=False)
        return ProjSubspace(rows.shape[1], red)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def proj_dim(self) -> int:
        return self.dim - 1

    def contains_vector(self, v: np.ndarray, p: int) -> bool:
        stacked = np.vstack([self.basis, np.asarray(v, dtype=np.int64).reshape(1, -1) % p])
        return rank(stacked, p) == self.dim

    def contains(self, other: "ProjSubspace", p: int) -> bool:
        stacked = np.vstack([self.basis, other.basis])
        return rank(stacked, p) == self.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ProjSubspace)
            and self.ambient == other.ambient
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )


def span_join(U: ProjSubspace, V: ProjSubspace, p: int) -> ProjSubspace:
    if U.ambient != V.ambient:
        raise ValueError("ambient mismatch")
    return ProjSubspace.from_rows(np.vstack([U.basis, V.basis]), p)


def span_meet(U: ProjSubspace, V: ProjSubspace, p: int) -> ProjSubspace:
    """Intersection via the Zassenhaus block trick, exact over F_p."""
    if U.ambient != V.ambient:
        raise ValueError("ambient mismatch")
    m = U.ambient
    if U.dim == 0 or V.dim == 0:
        return ProjSubspace.from_rows(np.zeros((0, m), dtype=np.int64), p)
    top = np.concatenate([U.basis, U.basis], axis=1)
    bot = np.concatenate([V.basis, np.zeros_like(V.basis)], axis=1)
    red, _ = rref(np.vstack([top, bot]), p)
    left_zero = ~np.any(red[:, :m], axis=1)
    inter = red[left_zero][:, m:]
    return ProjSubspace.from_rows(inter, p) if inter.size else ProjSubspace.from_rows(np.zeros((0, m), dtype=np.int64), p)


def annihilator(U: ProjSubspace, p: int) -> ProjSubspace:
    """Dual subspace: functionals killing U; dim + dual dim = ambient."""
    if U.dim == 0:
        return ProjSubspace.from_rows(np.eye(U.ambient, dtype=np.int64), p)
    return ProjSubspace.from_rows(kernel_basis(U.basis, p), p)


def normalize_point(v: np.ndarray, p: int) -> np.ndarray:
    """Projective canonical form: first nonzero coordinate scaled to 1."""
    v = np.asarray(v, dtype=np.int64) % p
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        raise ValueError("zero vector has no projective class")
    return v * pow(int(v[nz[0]]), -1, p) % p


def points_projectively_equal(u: np.ndarray, v: np.ndarray, p: int) -> bool:
    return np.array_equal(normalize_point(u, p), normalize_point(v, p))
