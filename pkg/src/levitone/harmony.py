"""(t,s) harmonic systems over Z_n, their chords and Tonnetz neighbours."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .zmod import Residue


class Quality(enum.Enum):
    MAJOR = "M"
    MINOR = "m"

    @property
    def flipped(self) -> "Quality":
        return Quality.MINOR if self is Quality.MAJOR else Quality.MAJOR

    @classmethod
    def parse(cls, text: str) -> "Quality":
        key = text.strip()
        if key in ("M", "maj", "major", "Major", "MAJOR"):
            return cls.MAJOR
        if key in ("m", "min", "minor", "Minor", "MINOR"):
            return cls.MINOR
        raise ValueError(f"unknown chord quality {text!r}")


MAJOR = Quality.MAJOR
MINOR = Quality.MINOR

# Neighbour slots, in output order: parallel, leading-tone, relative.
COLORS = ("P", "L", "R")


@dataclass(frozen=True)
class HarmonicSystem:
    n: int
    t: int
    s: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        for name, v in (("t", self.t), ("s", self.s)):
            if not 1 <= v <= self.n - 1:
                raise ValueError(f"{name}={v} outside [1, {self.n - 1}]")

    @property
    def q(self) -> int:
        return (self.t + self.s) % self.n

    @property
    def pair(self) -> tuple[int, int]:
        return (self.t, self.s)

    def __str__(self):
        return f"({self.t},{self.s}) in Z_{self.n}"


def make_system(n: int, t: int, s: int) -> HarmonicSystem:
    return HarmonicSystem(int(n), int(t), int(s))


def is_degenerate(sys: HarmonicSystem) -> bool:
    # gcd(0, n) == n, so q = 0 lands here too
    return math.gcd(sys.q, sys.n) > 1


def all_systems(n: int) -> list[HarmonicSystem]:
    return [HarmonicSystem(n, t, s) for t in range(1, n) for s in range(1, n)]


@dataclass(frozen=True)
class Chord:
    quality: Quality
    root: int
    triple: tuple[int, int, int]
    n: int

    @property
    def pitch_set(self) -> frozenset[int]:
        return frozenset(self.triple)

    @property
    def label(self) -> str:
        return f"{self.quality.value}{self.root}"

    def __str__(self):
        return f"{self.label}={self.triple}"


def chord(sys: HarmonicSystem, quality: Quality, r: Residue) -> Chord:
    """M_r = (r, r+t, r+q) or m_r = (r, r+s, r+q), reduced mod n."""
    n = sys.n
    r = int(r)
    if not 0 <= r < n:
        raise ValueError(f"root {r} outside [0, {n})")
    middle = sys.t if quality is MAJOR else sys.s
    return Chord(quality, r, (r, (r + middle) % n, (r + sys.q) % n), n)


def neighbor_roots(sys: HarmonicSystem, quality: Quality, r: int) -> tuple[int, int, int]:
    """Roots of the three opposite-quality neighbours in P, L, R order."""
    n = sys.n
    if quality is MAJOR:
        return (r % n, (r + sys.t) % n, (r - sys.s) % n)
    return (r % n, (r - sys.t) % n, (r + sys.s) % n)


def neighbors(sys: HarmonicSystem, c: Chord) -> list[Chord]:
    if c.n != sys.n or c.triple != chord(sys, c.quality, c.root).triple:
        raise ValueError(f"chord {c} does not belong to system {sys}")
    other = c.quality.flipped
    return [chord(sys, other, j) for j in neighbor_roots(sys, c.quality, c.root)]


def all_chords(sys: HarmonicSystem) -> list[Chord]:
    return [chord(sys, MAJOR, r) for r in range(sys.n)] + [
        chord(sys, MINOR, r) for r in range(sys.n)
    ]


def transition_colors(sys: HarmonicSystem, a: tuple[Quality, int], b: tuple[Quality, int]) -> tuple[str, ...]:
    """Which of the P/L/R slots join two chords (empty if they are not adjacent).

    More than one colour comes back when the slots coincide.
    """
    (qa, ra), (qb, rb) = a, b
    if qa is qb:
        return ()
    roots = neighbor_roots(sys, qa, ra)
    return tuple(col for col, j in zip(COLORS, roots) if j == rb % sys.n)
