"""Chord progressions as walks on a system's Levi graph."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .harmony import MAJOR, MINOR, HarmonicSystem, Quality, make_system, neighbor_roots, transition_colors
from .isoclass import IsoWitness

Step = tuple[Quality, int]


@dataclass(frozen=True)
class ProgressionPath:
    system: HarmonicSystem
    steps: tuple[Step, ...]

    def __len__(self):
        return len(self.steps)

    @property
    def transitions(self) -> int:
        return max(len(self.steps) - 1, 0)

    @property
    def is_closed(self) -> bool:
        return len(self.steps) > 1 and self.steps[0] == self.steps[-1]

    def labels(self) -> list[str]:
        return [f"{q.value}{r}" for q, r in self.steps]

    def to_json_dict(self) -> dict:
        s = self.system
        return {
            "system": {"n": s.n, "t": s.t, "s": s.s},
            "steps": [{"quality": q.value, "root": r} for q, r in self.steps],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ProgressionPath":
        sys_ = data["system"]
        system = make_system(sys_["n"], sys_["t"], sys_["s"])
        steps = tuple((Quality.parse(st["quality"]), int(st["root"])) for st in data["steps"])
        return cls(system, steps)


def _check_roots(sys: HarmonicSystem, steps: Sequence[Step]):
    for i, (_, r) in enumerate(steps):
        if not 0 <= r < sys.n:
            raise ValueError(f"step {i}: root {r} outside [0, {sys.n})")


def validate_path(sys: HarmonicSystem, steps: Sequence[Step]) -> Optional[int]:
    """None if every consecutive pair is a Tonnetz move, else the index of
    the first bad transition (transition i joins steps i and i+1)."""
    if not steps:
        raise ValueError("a path needs at least one step")
    _check_roots(sys, steps)
    for i, ((qa, ra), (qb, rb)) in enumerate(zip(steps, steps[1:])):
        if qa is qb or rb not in neighbor_roots(sys, qa, ra):
            return i
    return None


def path_colors(path: ProgressionPath) -> list[tuple[str, ...]]:
    return [transition_colors(path.system, a, b) for a, b in zip(path.steps, path.steps[1:])]


def transport_path(w: IsoWitness, path: ProgressionPath, dst: Optional[HarmonicSystem] = None) -> ProgressionPath:
    """Carry a path through a note-induced witness.

    Each step (quality, r) goes to (quality, flipped if the witness reverses,
    root_map(quality, r)). The result is checked against the target system.
    """
    dst = w.dst if dst is None else dst
    if path.system != w.src or dst != w.dst:
        raise ValueError(f"witness maps {w.src} -> {w.dst}, path is on {path.system} and target is {dst}")
    steps = tuple(w.target(q, r) for q, r in path.steps)
    bad = validate_path(dst, steps)
    if bad is not None:
        raise ValueError(f"transported path breaks at transition {bad} on {dst}")
    return ProgressionPath(dst, steps)


MINIATURE_STEPS = (
    (MAJOR, 0), (MINOR, 0), (MAJOR, 4), (MINOR, 9), (MAJOR, 9), (MINOR, 5),
    (MAJOR, 0), (MINOR, 6), (MAJOR, 1), (MINOR, 7), (MAJOR, 2), (MINOR, 2),
    (MAJOR, 6), (MINOR, 1), (MAJOR, 5), (MINOR, 0), (MAJOR, 0),
)


def miniature() -> ProgressionPath:
    """The closed 16-move cycle on (6,5) in 10-TET, stored as 17 steps."""
    return ProgressionPath(make_system(10, 6, 5), MINIATURE_STEPS)


def random_path(sys: HarmonicSystem, length: int, seed: int, start: Optional[Step] = None) -> ProgressionPath:
    """A walk choosing uniformly among the three neighbour slots at each move."""
    rng = random.Random(seed)
    if start is None:
        start = (rng.choice((MAJOR, MINOR)), rng.randrange(sys.n))
    steps = [start]
    for _ in range(length - 1):
        q, r = steps[-1]
        steps.append((q.flipped, rng.choice(neighbor_roots(sys, q, r))))
    return ProgressionPath(sys, tuple(steps))
