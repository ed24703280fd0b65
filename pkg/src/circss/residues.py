"""Exact arithmetic in Z/nZ: the unit group, Euler phi, modular inverses.

Residues are plain ints stored as least nonnegative representatives; every
comparison elsewhere in the package is an integer comparison on those
representatives. The ambient ring is carried by an immutable :class:`Modulus`.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import DomainError

#: All arithmetic stays inside 64-bit signed range below this cap.
MAX_MODULUS = 1 << 20


@dataclass(frozen=True)
class Modulus:
    """The ring Z/nZ with its unit group precomputed.

    ``units`` is the ascending list of k in [1, n) with gcd(k, n) = 1, and
    ``phi`` is its length (Euler's totient). Instances are immutable and safe
    to share across workers.
    """

    n: int
    phi: int
    units: tuple[int, ...]

    def reduce(self, x: int) -> int:
        """Least nonnegative representative of x mod n."""
        return x % self.n


def make_modulus(n: int) -> Modulus:
    """Build a validated Modulus for n >= 2.

    phi is computed by direct gcd enumeration, which is exact and plenty fast
    at the scales this package targets (no factorization needed).
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"modulus must be an int, got {type(n).__name__}")
    if n < 2:
        raise DomainError(f"modulus must be >= 2, got {n}")
    if n > MAX_MODULUS:
        raise DomainError(f"modulus {n} exceeds the supported cap {MAX_MODULUS}")
    units = tuple(k for k in range(1, n) if gcd(k, n) == 1)
    return Modulus(n=n, phi=len(units), units=units)


def inv(k: int, m: Modulus) -> int:
    """Multiplicative inverse of the unit k modulo m.n.

    Raises DomainError naming gcd(k, n) when k is not a unit.
    """
    k = k % m.n
    g = gcd(k, m.n)
    if g != 1:
        raise DomainError(
            f"{k} is not a unit modulo {m.n}: gcd({k}, {m.n}) = {g}"
        )
    return pow(k, -1, m.n)


def unit_weighted_sum(a: int, m: Modulus) -> int:
    """Sum of (k*a mod n) over all units k of Z/nZ, for nonzero a.

    Pairing each unit k with n-k shows the sum always equals n*phi(n)/2; the
    function computes it directly and the identity is property-tested rather
    than assumed.
    """
    a = a % m.n
    if a == 0:
        raise DomainError("a must be nonzero in Z/nZ")
    n = m.n
    return sum(k * a % n for k in m.units)
