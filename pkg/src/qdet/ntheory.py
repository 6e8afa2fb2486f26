"""Jacobi symbols, floor/ceiling division and multiplication-permutation signs."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from qdet.errors import BadModulus, NotCoprime

__all__ = [
    "MulPermutation",
    "ceil_div",
    "floor_div",
    "jacobi",
    "jacobi_euler",
    "least_positive_residue",
    "perm_sign",
    "perm_sign_inversions",
]


def _check_odd_modulus(n: int) -> None:
    if n <= 0 or n % 2 == 0:
        raise BadModulus(f"modulus must be a positive odd integer, got {n}")


def jacobi(m: int, n: int) -> int:
    """Jacobi symbol (m/n) for odd n >= 1, by binary quadratic reciprocity."""
    _check_odd_modulus(n)
    m %= n
    result = 1
    while m:
        while m % 2 == 0:
            m //= 2
            if n % 8 in (3, 5):
                result = -result
        m, n = n, m
        if m % 4 == 3 and n % 4 == 3:
            result = -result
        m %= n
    return result if n == 1 else 0


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def jacobi_euler(m: int, n: int) -> int:
    """Jacobi symbol via factoring n and Euler's criterion for each prime.

    Slow; kept as an independent oracle for :func:`jacobi`.
    """
    _check_odd_modulus(n)
    result = 1
    for p in _prime_factors(n):
        r = pow(m % p, (p - 1) // 2, p)
        result *= -1 if r == p - 1 else r
    return result


def floor_div(p: int, n: int) -> int:
    if n < 1:
        raise ValueError("divisor must be positive")
    return p // n


def ceil_div(p: int, n: int) -> int:
    if n < 1:
        raise ValueError("divisor must be positive")
    return -((-p) // n)


def least_positive_residue(x: int, n: int) -> int:
    """Representative of x mod n in {1, ..., n}."""
    r = x % n
    return r if r else n


@dataclass(frozen=True)
class MulPermutation:
    """The permutation j -> a*j (mod n) of {1, ..., n}, values in {1..n}."""

    n: int
    a: int
    images: tuple[int, ...]

    @classmethod
    def build(cls, a: int, n: int) -> MulPermutation:
        _check_odd_modulus(n)
        if gcd(a, n) != 1:
            raise NotCoprime(f"gcd({a}, {n}) > 1")
        return cls(n, a, tuple(least_positive_residue(a * j, n) for j in range(1, n + 1)))

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * (self.n + 1)
        out = []
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            cyc = []
            j = start
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.images[j - 1]
            out.append(tuple(cyc))
        return out

    def sign(self) -> int:
        # a cycle of length L contributes (L - 1) transpositions
        parity = sum(len(c) - 1 for c in self.cycles()) % 2
        return -1 if parity else 1


def perm_sign(a: int, n: int) -> int:
    """Sign of j -> (a*j mod n) on {1..n}, from its cycle decomposition."""
    return MulPermutation.build(a, n).sign()


def perm_sign_inversions(a: int, n: int) -> int:
    """Same sign by counting inversions, O(n^2); test oracle."""
    images = MulPermutation.build(a, n).images
    inv = sum(
        1
        for i in range(len(images))
        for j in range(i + 1, len(images))
        if images[i] > images[j]
    )
    return -1 if inv % 2 else 1
