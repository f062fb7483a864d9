"""Prime-field arithmetic context and deterministic pseudorandom streams.

A :class:`PrimeContext` fixes the modulus ``p`` and a 64-bit master seed.
Field elements are canonical Python ints in ``[0, p)``; bulk data lives in
``numpy.int64`` arrays reduced mod ``p``.  Everything downstream draws its
randomness from numbered substreams of the context, so a run is replayable
from ``(p, seed)`` alone.

The generator is SplitMix64 with the standard constants

    GAMMA = 0x9E3779B97F4A7C15
    MIX1  = 0xBF58476D1CE4E5B9   (shift 30)
    MIX2  = 0x94D049BB133111EB   (shift 27, final shift 31)

Substream ``k`` of seed ``s`` starts from state ``mix64(s XOR k*GAMMA)``.
Field draws are ``next_u64() mod p`` (bias below 2**-43 for p < 2**20).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DivisionByZero, NoRoot

FieldElem = int  # canonical representative in [0, p)

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK64 = (1 << 64) - 1

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

DEFAULT_PRIME = 1_000_003

# Largest homogeneous degree used anywhere in the toolkit; the Euler
# reduction of multiplicity conditions needs p > degree.
MAX_FORM_DEGREE = 6


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit sized inputs."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


class FpStream:
    """One SplitMix64 substream producing field elements.

    Instances are cheap; every sampler takes its own substream so that
    concurrent use never races on shared state.
    """

    __slots__ = ("p", "state")

    def __init__(self, p: int, state: int):
        self.p = p
        self.state = state & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        return _mix64(self.state)

    def field(self) -> FieldElem:
        return self.next_u64() % self.p

    def field_nonzero(self) -> FieldElem:
        while True:
            v = self.field()
            if v:
                return v

    def vector(self, n: int) -> np.ndarray:
        return np.array([self.field() for _ in range(n)], dtype=np.int64)

    def matrix(self, r: int, c: int) -> np.ndarray:
        return self.vector(r * c).reshape(r, c)

    def choice(self, n: int) -> int:
        """Uniform index in [0, n) by rejection."""
        lim = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < lim:
                return v % n


@dataclass(frozen=True)
class PrimeContext:
    """Immutable arithmetic context: prime modulus plus master seed.

    ``p`` must be prime, larger than twice the maximal form degree (so
    multiplicity conditions reduce to top-order derivative rows), and
    below 2**30 so the block matrix kernels stay exact in float64 limbs.
    """

    p: int = DEFAULT_PRIME
    seed: int = 0

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"modulus {self.p} is not an odd prime")
        if self.p >= 1 << 30:
            raise ValueError("modulus must be below 2**30 for exact kernel arithmetic")

    def require_degree(self, d: int):
        """Vanishing conditions of degree d need p > 2d (Euler reduction)."""
        if self.p <= 2 * d:
            raise ValueError(f"modulus {self.p} too small for degree-{d} vanishing systems")

    # -- scalar arithmetic -------------------------------------------------

    def add(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return (a + b) % self.p

    def sub(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return (a - b) % self.p

    def mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return a * b % self.p

    def neg(self, a: FieldElem) -> FieldElem:
        return -a % self.p

    def inv(self, a: FieldElem) -> FieldElem:
        if a % self.p == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return a * self.inv(b) % self.p

    def arith(self, a: FieldElem, b: FieldElem, op: str) -> FieldElem:
        """Dispatch form of the four field operations (op in add/sub/mul/div)."""
        return {"add": self.add, "sub": self.sub, "mul": self.mul, "div": self.div}[op](a, b)

    def legendre(self, a: FieldElem) -> int:
        """Quadratic-residue symbol: 1, -1, or 0 for a ≡ 0."""
        a %= self.p
        if a == 0:
            return 0
        t = pow(a, (self.p - 1) // 2, self.p)
        return 1 if t == 1 else -1

    def sqrt(self, a: FieldElem) -> FieldElem | None:
        """Tonelli-Shanks square root, canonicalized to min(r, p-r).

        Returns None when ``a`` is a non-residue; this is an expected
        outcome (half of all inputs), not a failure.
        """
        p = self.p
        a %= p
        if a == 0:
            return 0
        if self.legendre(a) != 1:
            return None
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while self.legendre(z) != -1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
        return min(r, p - r)

    # -- randomness --------------------------------------------------------

    def stream(self, index: int = 0) -> FpStream:
        """Deterministic numbered substream; identical (p, seed, index) replay."""
        return FpStream(self.p, _mix64(self.seed ^ ((index * _GAMMA) & _MASK64)))

    # -- bulk helpers --------------------------------------------------------

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return np.asarray(arr, dtype=np.int64) % self.p

    def inv_vec(self, arr: np.ndarray) -> np.ndarray:
        return np.array([self.inv(int(v)) for v in arr], dtype=np.int64)

    def to_json(self) -> dict:
        return {"p": str(self.p), "seed": str(self.seed)}
