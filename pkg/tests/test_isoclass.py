import pytest

from levitone.harmony import MAJOR, MINOR, all_systems, chord, make_system
from levitone.isoclass import (
    DECAPHONIC_QUARTET,
    Domain,
    Mode,
    RootMap,
    are_note_equivalent,
    classify_orbits,
    compose_witnesses,
    equivalences_coincide,
    in_domain,
    invert_witness,
    no_reversing_in_decaphonic,
    note_induced_isos,
    orientation_census,
    reversing_witnesses,
    witness_for,
)
from levitone.levigraph import PRESERVING, REVERSING
from levitone.zmod import AffineMap, ModulusMismatch


def sys12(t, s):
    return make_system(12, t, s)


def sys10(t, s):
    return make_system(10, t, s)


def test_self_witnesses_include_translations():
    for sys in (sys12(4, 3), sys10(6, 5), make_system(7, 2, 3)):
        ws = note_induced_isos(sys, sys)
        tr = {w.map.b for w in ws if w.map.a == 1}
        assert tr == set(range(sys.n))
        assert all(w.orientation is PRESERVING for w in ws if w.map.a == 1)


def test_negation_reverses_every_system():
    # x -> -x sends (r, r+t, r+q) onto (-r-q, -r-q+s, -r), a Minor chord
    for sys in all_systems(10):
        w = witness_for(sys, sys, AffineMap(9, 0, 10))
        assert w is not None
        major = sorted(tuple(sorted(set(chord(sys, MAJOR, r).triple))) for r in range(10))
        minor = sorted(tuple(sorted(set(chord(sys, MINOR, r).triple))) for r in range(10))
        # self-dual families report preserving
        assert (w.orientation is REVERSING) == (major != minor)


def test_witness_fields():
    w = witness_for(sys12(4, 3), sys12(9, 4), AffineMap(5, 1, 12))
    assert w.orientation is PRESERVING
    # 5*{0,4,7}+1 = {1,9,0}, which is M0 of (9,4)
    assert w.target(MAJOR, 0) == (MAJOR, 0)
    assert w.target(MINOR, 1) == (MINOR, 5)
    assert w.to_json_dict()["root_map"] == {"a": 5, "major_offset": 0, "minor_offset": 0}
    assert witness_for(sys12(4, 3), sys12(9, 4), AffineMap(1, 0, 12)) is None


def test_root_offsets_can_differ():
    w = witness_for(sys10(1, 1), sys10(1, 8), AffineMap(1, 0, 10))
    assert w.root_map == RootMap(1, 1, 2, 10)
    assert w.target(MAJOR, 0) == (MAJOR, 1)
    assert w.target(MINOR, 0) == (MINOR, 2)


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        note_induced_isos(sys12(4, 3), sys10(6, 5))


@pytest.mark.parametrize("n", [10, 12])
def test_witness_correctness(n):
    for src in all_systems(n):
        for dst in all_systems(n):
            for w in note_induced_isos(src, dst):
                for q in (MAJOR, MINOR):
                    for r in range(n):
                        img = {w.map(x) for x in chord(src, q, r).triple}
                        q2, r2 = w.target(q, r)
                        assert img == set(chord(dst, q2, r2).triple)


@pytest.mark.parametrize("n", [10, 12])
def test_orientation_is_function_of_multiplier(n):
    for src in all_systems(n):
        for dst in all_systems(n):
            for a, oris in orientation_census(src, dst).items():
                assert len(oris) == 1, (src, dst, a, oris)


def test_invert_and_compose():
    w1 = witness_for(sys12(4, 3), sys12(8, 3), AffineMap(5, 0, 12))
    w2 = witness_for(sys12(8, 3), sys12(9, 8), AffineMap(7, 0, 12))
    back = invert_witness(w1)
    assert back.src == w1.dst and back.orientation is PRESERVING
    both = compose_witnesses(w1, w2)
    assert both.map == AffineMap(11, 0, 12)
    assert both.orientation is (w1.orientation ^ w2.orientation)
    with pytest.raises(ValueError):
        compose_witnesses(w2, w1)


def test_domains():
    assert in_domain(sys12(4, 3), Domain.NON_DEGENERATE)
    assert not in_domain(sys12(3, 3), Domain.NON_DEGENERATE)
    assert not in_domain(sys12(5, 5), Domain.PROPER)
    assert not in_domain(sys12(5, 7), Domain.PROPER)
    assert in_domain(sys12(5, 7), Domain.ALL)


def test_orbit_census_counts():
    assert len(classify_orbits(12, Mode.ABSTRACT, Domain.ALL).orbits) == 14
    assert len(classify_orbits(10, Mode.ABSTRACT, Domain.ALL).orbits) == 7
    assert len(classify_orbits(12, Mode.ABSTRACT, Domain.PROPER).orbits) == 8


def test_partition_well_formed():
    part = classify_orbits(12, Mode.ABSTRACT, Domain.ALL)
    members = [p for o in part.orbits for p in o]
    assert sorted(members) == sorted(s.pair for s in all_systems(12))
    data = part.to_json_dict()
    assert data["orbit_count"] == 14 and data["degenerate_members_flagged"]
    with pytest.raises(KeyError):
        classify_orbits(12, Mode.ABSTRACT, Domain.NON_DEGENERATE).orbit_of((3, 3))


def test_swapped_pairs_share_an_orbit():
    part = classify_orbits(12, Mode.NOTE_INDUCED, Domain.ALL)
    for t, s in [(4, 3), (9, 8), (1, 5)]:
        assert (s, t) in part.orbit_of((t, s))


def test_note_induced_refines_abstract():
    for n in (6, 8, 9):
        abstract = classify_orbits(n, Mode.ABSTRACT, Domain.ALL)
        noted = classify_orbits(n, Mode.NOTE_INDUCED, Domain.ALL)
        for orbit in noted.orbits:
            assert set(orbit) <= set(abstract.orbit_of(orbit[0]))


@pytest.mark.parametrize("n", [10, 12])
def test_coincidence(n):
    rep = equivalences_coincide(n)
    assert rep.coincide and not rep.only_abstract and not rep.only_note_induced


def test_coincidence_small_n_reported():
    rep = equivalences_coincide(6)
    assert isinstance(rep.coincide, bool)


def test_decaphonic_quartet_has_reversing_witnesses():
    # every quartet member reverses onto itself under x -> -x
    assert not no_reversing_in_decaphonic()
    rev = reversing_witnesses(10, DECAPHONIC_QUARTET)
    assert all(w.map.a in (7, 9) or w.map.a in (1, 3) for w in rev)
    assert any(w.src == w.dst and w.map.a == 9 for w in rev)


def test_note_equivalence_is_symmetric():
    for a, b in [((4, 3), (9, 8)), ((4, 3), (3, 3)), ((1, 2), (2, 1))]:
        assert are_note_equivalent(sys12(*a), sys12(*b)) == are_note_equivalent(sys12(*b), sys12(*a))
