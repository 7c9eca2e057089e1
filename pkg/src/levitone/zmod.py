"""Residues mod n, the affine group Aff(Z_n) and CRT coordinates.

Everything here is an immutable value or a pure function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import TYPE_CHECKING, Sequence, Union

if TYPE_CHECKING:
    from .harmony import HarmonicSystem


class ModulusMismatch(ValueError):
    """Raised when two residues (or maps) live in different Z_n."""


@dataclass(frozen=True, order=True)
class PitchClass:
    value: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"modulus must be positive, got {self.n}")
        if not 0 <= self.value < self.n:
            raise ValueError(f"residue {self.value} outside [0, {self.n})")

    @classmethod
    def of(cls, value: int, n: int) -> "PitchClass":
        return cls(value % n, n)

    def _other(self, other) -> int:
        if isinstance(other, PitchClass):
            if other.n != self.n:
                raise ModulusMismatch(f"Z_{self.n} vs Z_{other.n}")
            return other.value
        return int(other)

    def __add__(self, other):
        return PitchClass.of(self.value + self._other(other), self.n)

    __radd__ = __add__

    def __sub__(self, other):
        return PitchClass.of(self.value - self._other(other), self.n)

    def __rsub__(self, other):
        return PitchClass.of(self._other(other) - self.value, self.n)

    def __mul__(self, other):
        return PitchClass.of(self.value * self._other(other), self.n)

    __rmul__ = __mul__

    def __neg__(self):
        return PitchClass.of(-self.value, self.n)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value


Residue = Union[int, PitchClass]


def units(n: int) -> list[int]:
    """Multipliers a in [1, n) with gcd(a, n) = 1, ascending.

    >>> units(10)
    [1, 3, 7, 9]
    """
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    return [a for a in range(1, n) if math.gcd(a, n) == 1]


@dataclass(frozen=True)
class AffineMap:
    """x -> a*x + b (mod n) with a a unit of Z_n."""

    a: int
    b: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"modulus must be positive, got {self.n}")
        if not (0 <= self.a < self.n and 0 <= self.b < self.n):
            raise ValueError(f"coefficients ({self.a}, {self.b}) not reduced mod {self.n}")
        if math.gcd(self.a, self.n) != 1:
            raise ValueError(f"multiplier {self.a} is not a unit mod {self.n}")

    @classmethod
    def of(cls, a: int, b: int, n: int) -> "AffineMap":
        return cls(a % n, b % n, n)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(1 % n, 0, n)

    def __call__(self, x: Residue) -> Residue:
        return affine_apply(self, x)

    def __str__(self):
        return f"{self.a}x+{self.b} (mod {self.n})"


def affine_apply(f: AffineMap, x: Residue) -> Residue:
    """Apply f to a residue. A PitchClass comes back as a PitchClass, an int as an int."""
    if isinstance(x, PitchClass):
        if x.n != f.n:
            raise ModulusMismatch(f"map on Z_{f.n} applied to residue of Z_{x.n}")
        return PitchClass((f.a * x.value + f.b) % f.n, f.n)
    return (f.a * int(x) + f.b) % f.n


def affine_compose(f: AffineMap, g: AffineMap) -> AffineMap:
    """The map x -> f(g(x))."""
    if f.n != g.n:
        raise ModulusMismatch(f"cannot compose maps on Z_{f.n} and Z_{g.n}")
    n = f.n
    return AffineMap((f.a * g.a) % n, (f.a * g.b + f.b) % n, n)


def affine_invert(f: AffineMap) -> AffineMap:
    inv = pow(f.a, -1, f.n) if f.n > 1 else 0
    return AffineMap(inv % f.n, (-inv * f.b) % f.n, f.n)


@dataclass(frozen=True)
class CrtBasis:
    """Coordinates of Z_n in Z_{n_1} x ... x Z_{n_k}.

    ``basis_tones[i]`` is the residue sitting at the i-th unit coordinate.
    """

    n: int
    factors: tuple[int, ...]
    basis_tones: tuple[int, ...]

    def coords(self, x: Residue) -> tuple[int, ...]:
        return crt_map(self, x)

    def tone(self, coords: Sequence[int]) -> int:
        return crt_unmap(self, coords)

    def grid(self) -> dict[tuple[int, ...], int]:
        """Every coordinate tuple with the tone living there."""
        return {crt_map(self, x): x for x in range(self.n)}


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def crt_decompose(n: int, factors: Sequence[int]) -> CrtBasis:
    """Solve for the primitive tones of the split n = n_1 * ... * n_k.

    The factor order is the caller's; coordinates follow it.
    """
    factors = tuple(int(f) for f in factors)
    if len(factors) < 2:
        raise ValueError("need at least two factors")
    if any(f < 2 for f in factors):
        raise ValueError(f"every factor must be >= 2, got {list(factors)}")
    for p, q in combinations(factors, 2):
        if math.gcd(p, q) != 1:
            raise ValueError(f"factors {p} and {q} are not coprime")
    prod = reduce(lambda u, v: u * v, factors, 1)
    if prod != n:
        raise ValueError(f"product of factors {list(factors)} is {prod}, not {n}")
    tones = []
    for ni in factors:
        m = n // ni
        g, _, inv = _xgcd(ni, m)  # inv * m == 1 (mod ni)
        assert g == 1
        tones.append((inv * m) % n)
    return CrtBasis(n, factors, tuple(tones))


def crt_map(basis: CrtBasis, x: Residue) -> tuple[int, ...]:
    x = int(x)
    if not 0 <= x < basis.n:
        raise ValueError(f"{x} outside [0, {basis.n})")
    return tuple(x % ni for ni in basis.factors)


def crt_unmap(basis: CrtBasis, coords: Sequence[int]) -> int:
    if len(coords) != len(basis.factors):
        raise ValueError(f"expected {len(basis.factors)} coordinates, got {len(coords)}")
    return sum(c * e for c, e in zip(coords, basis.basis_tones)) % basis.n


def canonical_system(basis: CrtBasis) -> "HarmonicSystem":
    """The anchor system built from the two primitive tones.

    t is the tone at (0, 1) and s the tone at (1, 0), so q = t + s is the
    tone at (1, 1), which is always 1.
    """
    from .harmony import make_system

    if len(basis.factors) != 2:
        raise ValueError(f"anchor needs exactly two factors, basis has {len(basis.factors)}")
    s, t = basis.basis_tones
    return make_system(basis.n, t, s)
