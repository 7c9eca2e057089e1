"""Note-induced isomorphisms and orbit censuses of (t,s) systems."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .harmony import MAJOR, MINOR, HarmonicSystem, Quality, all_systems, chord, is_degenerate, make_system
from .levigraph import PRESERVING, REVERSING, Orientation, build_graph, canonical_certificate
from .zmod import AffineMap, ModulusMismatch, affine_apply, affine_compose, affine_invert, units


class Mode(enum.Enum):
    ABSTRACT = "abstract"
    NOTE_INDUCED = "note-induced"


class Domain(enum.Enum):
    ALL = "all"
    NON_DEGENERATE = "nondegenerate"
    # t != s and t + s != 0 (mod n): drops systems whose Major and Minor
    # triples coincide or collapse to two notes
    PROPER = "proper"


def in_domain(sys: HarmonicSystem, domain: Domain) -> bool:
    if domain is Domain.ALL:
        return True
    if domain is Domain.NON_DEGENERATE:
        return not is_degenerate(sys)
    return sys.t != sys.s and sys.q != 0


@dataclass(frozen=True)
class RootMap:
    """Where chord roots go: a source chord of quality X rooted at r lands on
    the target chord rooted at a*r + offset[X].

    Major and Minor sources carry separate offsets; they differ in general.
    """

    a: int
    major_offset: int
    minor_offset: int
    n: int

    def __call__(self, quality: Quality, r: int) -> int:
        off = self.major_offset if quality is MAJOR else self.minor_offset
        return (self.a * r + off) % self.n


@dataclass(frozen=True)
class IsoWitness:
    src: HarmonicSystem
    dst: HarmonicSystem
    map: AffineMap
    orientation: Orientation
    root_map: RootMap

    def target(self, quality: Quality, r: int) -> tuple[Quality, int]:
        q = quality if self.orientation is PRESERVING else quality.flipped
        return q, self.root_map(quality, r)

    def to_json_dict(self) -> dict:
        return {
            "src": [self.src.t, self.src.s],
            "dst": [self.dst.t, self.dst.s],
            "n": self.src.n,
            "a": self.map.a,
            "b": self.map.b,
            "orientation": self.orientation.value,
            "root_map": {
                "a": self.root_map.a,
                "major_offset": self.root_map.major_offset,
                "minor_offset": self.root_map.minor_offset,
            },
        }


def _triples(sys: HarmonicSystem, quality: Quality) -> np.ndarray:
    return np.array([chord(sys, quality, r).triple for r in range(sys.n)], dtype=np.int64)


def _match_table(src: HarmonicSystem, dst: HarmonicSystem, mults: list[int]) -> np.ndarray:
    return _kernels.family_match(
        _triples(src, MAJOR), _triples(src, MINOR),
        _triples(dst, MAJOR), _triples(dst, MINOR),
        np.asarray(mults, dtype=np.int64), src.n,
    )


def _offset(f: AffineMap, src: HarmonicSystem, q_src: Quality, dst: HarmonicSystem, q_dst: Quality) -> int:
    image = frozenset(affine_apply(f, x) for x in chord(src, q_src, 0).triple)
    for c in range(dst.n):
        if frozenset(chord(dst, q_dst, c).triple) == image:
            return c
    raise AssertionError(f"{f} does not carry {q_src.value}0 of {src} into {dst}")


def _witness(src, dst, f: AffineMap, orientation: Orientation) -> IsoWitness:
    flip = orientation is REVERSING
    maj = _offset(f, src, MAJOR, dst, MINOR if flip else MAJOR)
    mnr = _offset(f, src, MINOR, dst, MAJOR if flip else MINOR)
    return IsoWitness(src, dst, f, orientation, RootMap(f.a, maj, mnr, src.n))


def _check_moduli(src: HarmonicSystem, dst: HarmonicSystem):
    if src.n != dst.n:
        raise ModulusMismatch(f"systems live in Z_{src.n} and Z_{dst.n}")


def note_induced_isos(src: HarmonicSystem, dst: HarmonicSystem) -> list[IsoWitness]:
    """Every affine map a*x + b that carries src's chord families onto dst's.

    Families are compared as multisets of pitch sets. If a map both keeps
    and swaps the families (possible only when Major and Minor families
    coincide), it is reported once, as preserving. Sorted by (a, b).
    """
    _check_moduli(src, dst)
    mults = units(src.n)
    table = _match_table(src, dst, mults)
    out = []
    for i, a in enumerate(mults):
        for b in range(src.n):
            code = table[i, b]
            if code == _kernels.NO_MATCH:
                continue
            ori = PRESERVING if code == _kernels.PRESERVING_MATCH else REVERSING
            out.append(_witness(src, dst, AffineMap(a, b, src.n), ori))
    return out


def witness_for(src: HarmonicSystem, dst: HarmonicSystem, f: AffineMap) -> Optional[IsoWitness]:
    """The witness carried by one specific map, or None if f is not one."""
    _check_moduli(src, dst)
    if f.n != src.n:
        raise ModulusMismatch(f"map on Z_{f.n} for systems in Z_{src.n}")
    code = _match_table(src, dst, [f.a])[0, f.b]
    if code == _kernels.NO_MATCH:
        return None
    return _witness(src, dst, f, PRESERVING if code == _kernels.PRESERVING_MATCH else REVERSING)


def invert_witness(w: IsoWitness) -> IsoWitness:
    inv = witness_for(w.dst, w.src, affine_invert(w.map))
    assert inv is not None and inv.orientation is w.orientation
    return inv


def compose_witnesses(first: IsoWitness, second: IsoWitness) -> Optional[IsoWitness]:
    """Witness for ``second.map`` after ``first.map``, from first.src to second.dst."""
    if first.dst != second.src:
        raise ValueError("witnesses do not chain")
    return witness_for(first.src, second.dst, affine_compose(second.map, first.map))


def orientation_census(src: HarmonicSystem, dst: HarmonicSystem) -> dict[int, set[Orientation]]:
    census: dict[int, set[Orientation]] = {}
    for w in note_induced_isos(src, dst):
        census.setdefault(w.map.a, set()).add(w.orientation)
    return census


def are_note_equivalent(src: HarmonicSystem, dst: HarmonicSystem) -> bool:
    _check_moduli(src, dst)
    return bool((_match_table(src, dst, units(src.n)) != _kernels.NO_MATCH).any())


# --------------------------------------------------------------------------
# censuses


@dataclass(frozen=True)
class OrbitPartition:
    n: int
    mode: Mode
    domain: Domain
    orbits: tuple[tuple[tuple[int, int], ...], ...]

    def orbit_of(self, pair: tuple[int, int]) -> tuple[tuple[int, int], ...]:
        for orbit in self.orbits:
            if tuple(pair) in orbit:
                return orbit
        raise KeyError(f"{pair} is not in the {self.domain.value} domain of Z_{self.n}")

    @property
    def degenerate_members(self) -> list[tuple[int, int]]:
        return [p for o in self.orbits for p in o if is_degenerate(make_system(self.n, *p))]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode.value,
            "domain": self.domain.value,
            "orbit_count": len(self.orbits),
            "orbits": [[list(p) for p in o] for o in self.orbits],
            "degenerate_members_flagged": bool(self.degenerate_members),
        }


def _sorted_partition(groups) -> tuple:
    orbits = [tuple(sorted(g)) for g in groups]
    return tuple(sorted(orbits, key=lambda o: o[0]))


def classify_orbits(n: int, mode: Mode, domain: Domain) -> OrbitPartition:
    """Partition the (t,s) systems of Z_n in ``domain`` into orbits.

    ABSTRACT buckets by canonical certificate of the Levi graph;
    NOTE_INDUCED compares each system against one representative per orbit
    found so far, which is enough because affine witnesses form a group.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    systems = [s for s in all_systems(n) if in_domain(s, domain)]
    if mode is Mode.ABSTRACT:
        buckets: dict[bytes, list] = {}
        for s in systems:
            buckets.setdefault(canonical_certificate(build_graph(s)), []).append(s.pair)
        groups = list(buckets.values())
    else:
        reps: list[HarmonicSystem] = []
        groups = []
        for s in systems:
            for rep, group in zip(reps, groups):
                if are_note_equivalent(s, rep):
                    group.append(s.pair)
                    break
            else:
                reps.append(s)
                groups.append([s.pair])
    return OrbitPartition(n, mode, domain, _sorted_partition(groups))


@dataclass(frozen=True)
class CoincidenceReport:
    n: int
    coincide: bool
    abstract: OrbitPartition
    note_induced: OrbitPartition
    only_abstract: tuple
    only_note_induced: tuple


def equivalences_coincide(n: int, domain: Domain = Domain.ALL) -> CoincidenceReport:
    abstract = classify_orbits(n, Mode.ABSTRACT, domain)
    noted = classify_orbits(n, Mode.NOTE_INDUCED, domain)
    a, b = set(abstract.orbits), set(noted.orbits)
    return CoincidenceReport(
        n, a == b, abstract, noted,
        tuple(sorted(a - b)), tuple(sorted(b - a)),
    )


DECAPHONIC_QUARTET = ((6, 5), (8, 5), (2, 5), (4, 5))
DODECAPHONIC_QUARTET = ((4, 3), (8, 3), (9, 4), (9, 8))


def reversing_witnesses(n: int, pairs) -> list[IsoWitness]:
    """All reversing witnesses between ordered pairs drawn from ``pairs``."""
    systems = [make_system(n, t, s) for t, s in pairs]
    return [
        w
        for x in systems
        for y in systems
        for w in note_induced_isos(x, y)
        if w.orientation is REVERSING
    ]


def no_reversing_in_decaphonic() -> bool:
    """True iff no witness between the 10-TET quartet systems reverses orientation."""
    return not reversing_witnesses(10, DECAPHONIC_QUARTET)
