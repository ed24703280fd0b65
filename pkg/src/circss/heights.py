"""Projective classes <a_1,...,a_d> over Z/NZ and their heights.

A nonzero d-tuple is considered up to multiplication by units; the height of
its class is the minimum over units k of sum_i (k*a_i mod N). The minimum is
taken by exhaustive search over all phi(N) units, which is exact and fast at
the moduli this package targets.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError
from .residues import Modulus


@dataclass(frozen=True)
class ProjectiveTuple:
    """A nonzero tuple over Z/NZ together with its canonical class representative.

    ``canonical`` is the lexicographically smallest tuple among all unit
    multiples (componentwise, on least nonnegative representatives); two tuples
    are projectively equivalent iff their canonical forms are equal.
    """

    modulus: Modulus
    coords: tuple[int, ...]
    canonical: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class HeightResult:
    """Height value together with the smallest unit achieving it.

    ``per_term`` holds the d summands (witness * a_i mod N), so
    ``sum(per_term) == value``.
    """

    value: int
    witness: int
    per_term: tuple[int, ...]


def canonicalize(coords: Iterable[int], m: Modulus) -> ProjectiveTuple:
    """Reduce coords mod n and attach the canonical class representative.

    Raises DomainError on an empty or all-zero tuple; the projective space
    only contains nonzero tuples.
    """
    reduced = tuple(c % m.n for c in coords)
    if not reduced:
        raise DomainError("projective tuple needs at least one coordinate")
    if not any(reduced):
        raise DomainError(f"projective tuple must be nonzero mod {m.n}")
    n = m.n
    canonical = min(tuple(lam * c % n for c in reduced) for lam in m.units)
    return ProjectiveTuple(modulus=m, coords=reduced, canonical=canonical)


def nonzero_count(t: ProjectiveTuple) -> int:
    """Number of nonzero coordinates; invariant under unit scaling."""
    return sum(1 for c in t.coords if c)


def height(t: ProjectiveTuple) -> HeightResult:
    """Exhaustive height of the class of t.

    Scans all phi(N) units; on ties the smallest unit wins, so the witness is
    deterministic. The value is identical for every member of the class.
    """
    n = t.modulus.n
    coords = t.coords
    best = None
    best_k = 1
    for k in t.modulus.units:
        s = 0
        for c in coords:
            s += k * c % n
        if best is None or s < best:
            best = s
            best_k = k
    assert best is not None
    per_term = tuple(best_k * c % n for c in coords)
    return HeightResult(value=best, witness=best_k, per_term=per_term)


def height_bound(t: ProjectiveTuple) -> int:
    """Upper bound floor(d* N / 2) on the height, d* the nonzero-coordinate count.

    Comes from averaging the height sum over all units: each nonzero coordinate
    contributes N*phi(N)/2 in total, so the minimum is at most d* N / 2.
    """
    return nonzero_count(t) * t.modulus.n // 2


def parse_coords(text: str) -> list[int]:
    """Parse the CLI tuple syntax ``a1,a2,...,ad`` into nonnegative ints."""
    parts = [p.strip() for p in text.split(",") if p.strip() != ""]
    if not parts:
        raise DomainError("empty coordinate list")
    try:
        values = [int(p) for p in parts]
    except ValueError as exc:
        raise DomainError(f"coordinates must be integers: {exc}") from None
    if any(v < 0 for v in values):
        raise DomainError("coordinates must be nonnegative integers")
    return values


def scaled(coords: Sequence[int], lam: int, m: Modulus) -> tuple[int, ...]:
    """Componentwise unit multiple (lam * a_i mod n)."""
    n = m.n
    return tuple(lam * c % n for c in coords)
