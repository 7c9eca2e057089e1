"""``levitone`` command line.

Exit codes: 0 success, 1 domain error (bad system, invalid path, failed
check), 2 I/O or parse error. JSON goes to stdout unless ``--out`` is given.
``LEVITONE_FORMAT`` (json or table) sets the default output format.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .checks import theorem_checks
from .harmony import COLORS, Quality, all_chords, chord, make_system, neighbor_roots
from .isoclass import Domain, Mode, classify_orbits, note_induced_isos, witness_for
from .levigraph import build_graph, to_dot, to_json_dict
from .midikit import Clamp, MidiError, OctavePolicy, parse_smf, render_deca_score, transform_pitches, write_smf
from .pathkit import ProgressionPath, miniature, transport_path, validate_path
from .zmod import AffineMap, canonical_system, crt_decompose

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


class CliIOError(Exception):
    pass


def _pair(text: str) -> tuple[int, int]:
    try:
        t, s = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected t,s but got {text!r}")
    return t, s


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def dumps(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, out: str | None = None):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliIOError(str(exc))


def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliIOError(str(exc))


def _read_path(path: str | None) -> ProgressionPath:
    text = _read_text(path)
    try:
        return ProgressionPath.from_json_dict(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CliIOError(f"cannot read path JSON: {exc}")


def _table(rows: list[list], header: list[str]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# subcommands


def cmd_decompose(args) -> int:
    basis = crt_decompose(args.n, args.factors)
    data = {
        "n": basis.n,
        "factors": list(basis.factors),
        "basis_tones": list(basis.basis_tones),
        "coordinates": [{"tone": x, "coords": list(basis.coords(x))} for x in range(basis.n)],
    }
    if len(basis.factors) == 2:
        cs = canonical_system(basis)
        data["canonical_system"] = {"t": cs.t, "s": cs.s, "q": cs.q}
    if args.format == "table":
        rows = [[c["tone"], tuple(c["coords"])] for c in data["coordinates"]]
        head = f"basis tones {tuple(basis.basis_tones)}"
        if "canonical_system" in data:
            head += f", canonical system ({data['canonical_system']['t']},{data['canonical_system']['s']})"
        _emit(head + "\n" + _table(rows, ["tone", "coords"]), args.out)
    else:
        _emit(dumps(data), args.out)
    return EXIT_OK


def _chord_dict(c) -> dict:
    return {"label": c.label, "quality": c.quality.value, "root": c.root, "pitches": list(c.triple)}


def cmd_chords(args) -> int:
    s = make_system(args.n, args.t, args.s)
    chords = [_chord_dict(c) for c in all_chords(s)]
    if args.format == "table":
        _emit(_table([[c["label"], tuple(c["pitches"])] for c in chords], ["chord", "pitches"]), args.out)
    else:
        _emit(dumps({"system": {"n": s.n, "t": s.t, "s": s.s, "q": s.q}, "chords": chords}), args.out)
    return EXIT_OK


def cmd_neighbors(args) -> int:
    s = make_system(args.n, args.t, args.s)
    q = Quality.parse(args.quality)
    c = chord(s, q, args.root)
    out = []
    for color, j in zip(COLORS, neighbor_roots(s, q, args.root)):
        out.append(dict(color=color, **_chord_dict(chord(s, q.flipped, j))))
    if args.format == "table":
        _emit(_table([[x["color"], x["label"], tuple(x["pitches"])] for x in out], ["move", "chord", "pitches"]), args.out)
    else:
        _emit(dumps({"chord": _chord_dict(c), "neighbors": out}), args.out)
    return EXIT_OK


def cmd_graph(args) -> int:
    g = build_graph(make_system(args.n, args.t, args.s))
    fmt = args.format if args.format in ("dot", "json") else "json"
    _emit(to_dot(g) if fmt == "dot" else dumps(to_json_dict(g)), args.out)
    return EXIT_OK


def cmd_iso(args) -> int:
    src, dst = make_system(args.n, *args.src), make_system(args.n, *args.dst)
    ws = note_induced_isos(src, dst)
    if args.format == "table":
        rows = [[w.map.a, w.map.b, w.orientation.value, w.root_map.major_offset, w.root_map.minor_offset] for w in ws]
        _emit(_table(rows, ["a", "b", "orientation", "major_offset", "minor_offset"]), args.out)
    else:
        _emit(dumps({"n": args.n, "src": list(args.src), "dst": list(args.dst),
                     "witnesses": [w.to_json_dict() for w in ws]}), args.out)
    return EXIT_OK


def cmd_orbits(args) -> int:
    part = classify_orbits(args.n, Mode(args.mode), Domain(args.domain))
    if args.format == "table":
        rows = [[i, len(o), " ".join(f"({t},{s})" for t, s in o)] for i, o in enumerate(part.orbits)]
        _emit(f"{len(part.orbits)} orbits\n" + _table(rows, ["orbit", "size", "members"]), args.out)
    else:
        _emit(dumps(part.to_json_dict()), args.out)
    return EXIT_OK


def cmd_check_theorems(args) -> int:
    checks = theorem_checks()
    if args.format == "table":
        _emit("".join(c.line() + "\n" for c in checks), args.out)
    else:
        _emit(dumps({"checks": [c.to_json_dict() for c in checks],
                     "all_passed": all(c.passed for c in checks)}), args.out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_DOMAIN


def cmd_miniature(args) -> int:
    _emit(dumps(miniature().to_json_dict()), args.out)
    return EXIT_OK


def cmd_validate_path(args) -> int:
    path = _read_path(args.path)
    bad = validate_path(path.system, path.steps)
    _emit(dumps({"ok": bad is None, "offending_index": bad, "transitions": path.transitions}), args.out)
    return EXIT_OK if bad is None else EXIT_DOMAIN


def cmd_transport_path(args) -> int:
    path = _read_path(args.path)
    dst = make_system(path.system.n, *args.dst)
    w = witness_for(path.system, dst, AffineMap(args.a, args.b, path.system.n))
    if w is None:
        raise ValueError(f"{args.a}x+{args.b} is not a note-induced isomorphism {path.system} -> {dst}")
    _emit(dumps(transport_path(w, path).to_json_dict()), args.out)
    return EXIT_OK


def cmd_transform_midi(args) -> int:
    try:
        with open(args.inp, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CliIOError(str(exc))
    doc = parse_smf(raw)
    out = transform_pitches(doc, AffineMap(args.a, args.b, 12), policy=OctavePolicy(args.policy),
                            include_percussion=args.include_percussion, clamp=Clamp(args.clamp))
    try:
        with open(args.out, "wb") as fh:
            fh.write(write_smf(out))
    except OSError as exc:
        raise CliIOError(str(exc))
    for line in out.diagnostics:
        print(f"note: {line}", file=sys.stderr)
    return EXIT_OK


def cmd_deca_score(args) -> int:
    path = miniature() if args.path is None else _read_path(args.path)
    score = render_deca_score(path, tempo=args.tempo, base_frequency=args.base_freq)
    _emit(dumps(score.to_json_dict()), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    default_fmt = os.environ.get("LEVITONE_FORMAT", "json").strip() or "json"
    if default_fmt not in ("json", "table", "dot"):
        default_fmt = "json"

    p = argparse.ArgumentParser(prog="levitone", description="Structured Levi graphs of (t,s) harmonic systems.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_, fmt=True):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--out", help="output file (default stdout)")
        if fmt:
            sp.add_argument("--format", choices=["json", "table"],
                            default=default_fmt if default_fmt != "dot" else "json")
        return sp

    def system_flags(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--t", type=int, required=True)
        sp.add_argument("--s", type=int, required=True)

    sp = add("decompose", cmd_decompose, "CRT primitive tones and the anchor system")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--factors", type=_int_list, required=True, help="coprime factors, e.g. 3,4")

    system_flags(add("chords", cmd_chords, "list Major and Minor chords"))

    sp = add("neighbors", cmd_neighbors, "P/L/R neighbours of one chord")
    system_flags(sp)
    sp.add_argument("--quality", required=True, help="M or m")
    sp.add_argument("--root", type=int, required=True)

    sp = add("graph", cmd_graph, "export the Levi graph", fmt=False)
    system_flags(sp)
    sp.add_argument("--format", choices=["dot", "json"],
                    default="dot" if default_fmt == "dot" else "json")

    sp = add("iso", cmd_iso, "note-induced isomorphisms between two systems")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--src", type=_pair, required=True)
    sp.add_argument("--dst", type=_pair, required=True)

    sp = add("orbits", cmd_orbits, "orbit census of all (t,s) systems")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.ABSTRACT.value)
    sp.add_argument("--domain", choices=[d.value for d in Domain], default=Domain.ALL.value)

    add("check-theorems", cmd_check_theorems, "recompute the 10/12-TET claims")
    add("miniature", cmd_miniature, "print the 10-TET miniature as path JSON", fmt=False)

    sp = add("validate-path", cmd_validate_path, "check a path JSON against its system", fmt=False)
    sp.add_argument("--path", help="path JSON file (default stdin)")

    sp = add("transport-path", cmd_transport_path, "carry a path through x -> a*x + b", fmt=False)
    sp.add_argument("--path", help="path JSON file (default stdin)")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--dst", type=_pair, required=True)

    sp = sub.add_parser("transform-midi", help="rewrite MIDI pitch classes by x -> a*x + b")
    sp.set_defaults(func=cmd_transform_midi)
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--policy", choices=[x.value for x in OctavePolicy], default=OctavePolicy.REGISTER_BLOCK.value)
    sp.add_argument("--clamp", choices=[x.value for x in Clamp], default=Clamp.FOLD.value)
    sp.add_argument("--include-percussion", action="store_true")

    sp = add("deca-score", cmd_deca_score, "render a 10-TET path as a frequency score", fmt=False)
    sp.add_argument("--path", help="path JSON file (default: the miniature)")
    sp.add_argument("--base-freq", type=float, default=264.0)
    sp.add_argument("--tempo", type=float, default=60.0)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliIOError, MidiError, OSError) as exc:
        print(f"levitone: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"levitone: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
