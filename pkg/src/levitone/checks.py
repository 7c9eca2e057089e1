"""Reproducible checks of the headline claims about the 10- and 12-TET systems.

Each check is computed from scratch and reports what it saw; nothing here
is asserted, so a failing claim shows up as ``passed=False`` with details.
"""
from __future__ import annotations

from dataclasses import dataclass

from .harmony import make_system
from .isoclass import (
    DECAPHONIC_QUARTET,
    DODECAPHONIC_QUARTET,
    Domain,
    Mode,
    classify_orbits,
    equivalences_coincide,
    note_induced_isos,
    reversing_witnesses,
)
from .levigraph import PRESERVING, REVERSING
from .pathkit import miniature, transport_path, validate_path
from .zmod import canonical_system, crt_decompose


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _has(n, src, dst, a, b, ori) -> bool:
    found = note_induced_isos(make_system(n, *src), make_system(n, *dst))
    return any(w.map.a == a and w.map.b == b and w.orientation is ori for w in found)


def check_crt_anchors() -> Check:
    got = []
    for n, factors in ((12, (3, 4)), (10, (2, 5))):
        basis = crt_decompose(n, factors)
        got.append((n, basis.basis_tones, canonical_system(basis).pair))
    ok = got == [(12, (4, 9), (9, 4)), (10, (5, 6), (6, 5))]
    return Check("crt-anchors", ok, "; ".join(f"n={n} tones={t} system={s}" for n, t, s in got))


def check_dodecaphonic_witnesses() -> Check:
    wanted = [
        ((4, 3), (8, 3), 5, 0, PRESERVING),
        ((4, 3), (9, 4), 5, 1, PRESERVING),
        ((4, 3), (9, 8), 11, 0, REVERSING),
        ((8, 3), (9, 8), 7, 0, REVERSING),
    ]
    missing = [w for w in wanted if not _has(12, *w)]
    detail = "all four witnesses found" if not missing else f"missing {missing}"
    return Check("12-tet-witnesses", not missing, detail)


def check_decaphonic_preserving() -> Check:
    src = (6, 5)
    bad = [
        (a, dst) for a, dst in zip((1, 3, 7, 9), DECAPHONIC_QUARTET)
        if not _has(10, src, dst, a, 0, PRESERVING)
    ]
    rev = reversing_witnesses(10, DECAPHONIC_QUARTET)
    ok = not bad and not rev
    parts = ["a=1,3,7,9 with b=0 preserving" if not bad else f"missing preserving {bad}"]
    if rev:
        ex = rev[0]
        parts.append(
            f"{len(rev)} reversing witnesses inside the quartet, e.g. "
            f"{ex.src.pair}->{ex.dst.pair} by {ex.map.a}x+{ex.map.b}"
        )
    else:
        parts.append("no reversing witnesses")
    return Check("10-tet-orientation", ok, "; ".join(parts))


def check_quartet_orbits() -> Check:
    details, ok = [], True
    for n, quartet, rep in ((12, DODECAPHONIC_QUARTET, (4, 3)), (10, DECAPHONIC_QUARTET, (6, 5))):
        orbit = classify_orbits(n, Mode.ABSTRACT, Domain.NON_DEGENERATE).orbit_of(rep)
        ok = ok and set(orbit) == set(quartet)
        details.append(f"n={n} orbit of {rep} = {list(orbit)}")
    return Check("quartet-orbits", ok, "; ".join(details))


def check_coincidence() -> Check:
    reports = [equivalences_coincide(n) for n in (12, 10)]
    ok = all(r.coincide for r in reports)
    detail = "; ".join(f"n={r.n} {len(r.abstract.orbits)} orbits, coincide={r.coincide}" for r in reports)
    return Check("abstract-equals-note-induced", ok, detail)


def check_miniature() -> Check:
    path = miniature()
    bad = validate_path(path.system, path.steps)
    results = []
    for a, dst in zip((3, 7, 9), DECAPHONIC_QUARTET[1:]):
        target = make_system(10, *dst)
        ws = [w for w in note_induced_isos(path.system, target) if w.map.a == a and w.map.b == 0]
        try:
            moved = transport_path(ws[0], path) if ws else None
        except ValueError:
            moved = None
        results.append((a, dst, moved is not None and moved.is_closed))
    ok = bad is None and path.is_closed and all(r[2] for r in results)
    detail = f"{path.transitions} transitions, closed={path.is_closed}; " + ", ".join(
        f"a={a}->{dst} {'ok' if good else 'broken'}" for a, dst, good in results
    )
    return Check("miniature", ok, detail)


def theorem_checks() -> list[Check]:
    return [
        check_crt_anchors(),
        check_dodecaphonic_witnesses(),
        check_decaphonic_preserving(),
        check_quartet_orbits(),
        check_coincidence(),
        check_miniature(),
    ]
