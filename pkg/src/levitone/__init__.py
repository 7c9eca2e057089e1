"""Structured Levi graphs of (t,s) harmonic systems over Z_n."""
from .harmony import MAJOR, MINOR, Chord, HarmonicSystem, Quality, all_chords, chord, make_system, neighbors
from .isoclass import (
    Domain,
    IsoWitness,
    Mode,
    classify_orbits,
    equivalences_coincide,
    no_reversing_in_decaphonic,
    note_induced_isos,
)
from .levigraph import PRESERVING, REVERSING, Orientation, abstract_iso, build_graph, canonical_certificate
from .pathkit import ProgressionPath, miniature, transport_path, validate_path
from .zmod import AffineMap, PitchClass, canonical_system, crt_decompose

__version__ = "0.1.0"
