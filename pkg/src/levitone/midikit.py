"""Standard MIDI File I/O, affine pitch-class rewriting, and 10-TET scores.

Only formats 0 and 1 are handled. Events keep absolute tick times; note-on
with velocity 0 is read as note-off. Anything that is not a note, tempo
change or end-of-track is carried through opaquely so files survive a
read/write cycle.
"""
from __future__ import annotations

import enum
import struct
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Union

from .pathkit import ProgressionPath, validate_path
from .harmony import MAJOR, chord
from .zmod import AffineMap, affine_invert

VLQ_MAX = 0x0FFFFFFF
PERCUSSION_CHANNEL = 9
DEFAULT_BASE_FREQUENCY = 264.0


class MidiError(ValueError):
    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        where = f" at byte {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class NoteOn:
    tick: int
    channel: int
    key: int
    velocity: int


@dataclass(frozen=True)
class NoteOff:
    tick: int
    channel: int
    key: int
    velocity: int


@dataclass(frozen=True)
class Tempo:
    tick: int
    usec_per_quarter: int

    @property
    def bpm(self) -> float:
        return 60_000_000 / self.usec_per_quarter


@dataclass(frozen=True)
class ChannelMessage:
    """Any channel voice message other than note on/off (status nibble kept)."""

    tick: int
    status: int
    channel: int
    data: bytes


@dataclass(frozen=True)
class MetaEvent:
    tick: int
    meta_type: int
    data: bytes


@dataclass(frozen=True)
class SysEx:
    tick: int
    status: int
    data: bytes


Event = Union[NoteOn, NoteOff, Tempo, ChannelMessage, MetaEvent, SysEx]


@dataclass(frozen=True)
class Track:
    events: tuple[Event, ...]
    end_tick: int


@dataclass(frozen=True)
class MidiDocument:
    format: int
    division: int
    tracks: tuple[Track, ...]
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    def notes(self):
        """(track, channel, key, start, end, velocity) for every matched note."""
        out = []
        for ti, track in enumerate(self.tracks):
            pending = defaultdict(list)
            for ev in track.events:
                if isinstance(ev, NoteOn):
                    pending[(ev.channel, ev.key)].append(ev)
                elif isinstance(ev, NoteOff) and pending[(ev.channel, ev.key)]:
                    on = pending[(ev.channel, ev.key)].pop(0)
                    out.append((ti, on.channel, on.key, on.tick, ev.tick, on.velocity))
        return sorted(out, key=lambda x: (x[3], x[0], x[1], x[2]))


# --------------------------------------------------------------------------
# reading


def read_vlq(data: bytes, pos: int) -> tuple[int, int]:
    value = 0
    for i in range(4):
        if pos >= len(data):
            raise MidiError("truncated variable-length quantity", pos)
        byte = data[pos]
        pos += 1
        value = (value << 7) | (byte & 0x7F)
        if not byte & 0x80:
            return value, pos
    raise MidiError("variable-length quantity longer than 4 bytes", pos - 4)


def encode_vlq(value: int) -> bytes:
    if value < 0 or value > VLQ_MAX:
        raise MidiError(f"value {value} does not fit a variable-length quantity")
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def _data_bytes(status: int) -> int:
    return 1 if status in (0xC0, 0xD0) else 2


def _parse_track(data: bytes, start: int, end: int, diagnostics: list, index: int) -> Track:
    pos, tick, running = start, 0, None
    events: list[Event] = []
    while pos < end:
        delta, pos = read_vlq(data, pos)
        tick += delta
        if pos >= end:
            raise MidiError("track ends inside an event", pos)
        status = data[pos]
        if status == 0xFF:
            if pos + 1 >= end:
                raise MidiError("truncated meta event", pos)
            mtype = data[pos + 1]
            length, body = read_vlq(data, pos + 2)
            if body + length > end:
                raise MidiError("meta event runs past end of track", pos)
            payload = bytes(data[body:body + length])
            pos = body + length
            running = None
            if mtype == 0x2F:
                if pos != end:
                    diagnostics.append(f"track {index}: {end - pos} bytes after end-of-track ignored")
                return Track(tuple(events), tick)
            if mtype == 0x51 and length == 3:
                events.append(Tempo(tick, int.from_bytes(payload, "big")))
            else:
                events.append(MetaEvent(tick, mtype, payload))
            continue
        if status in (0xF0, 0xF7):
            length, body = read_vlq(data, pos + 1)
            if body + length > end:
                raise MidiError("sysex runs past end of track", pos)
            events.append(SysEx(tick, status, bytes(data[body:body + length])))
            pos = body + length
            running = None
            continue
        if status >= 0xF0:
            raise MidiError(f"unexpected system message 0x{status:02X}", pos)
        if status & 0x80:
            running = status
            pos += 1
        elif running is None:
            raise MidiError("running status without a previous status byte", pos)
        kind, channel = running & 0xF0, running & 0x0F
        count = _data_bytes(kind)
        if pos + count > end:
            raise MidiError("truncated channel message", pos)
        args = bytes(data[pos:pos + count])
        if any(b & 0x80 for b in args):
            raise MidiError("status byte where a data byte was expected", pos)
        pos += count
        if kind == 0x90 and args[1] > 0:
            events.append(NoteOn(tick, channel, args[0], args[1]))
        elif kind in (0x80, 0x90):
            events.append(NoteOff(tick, channel, args[0], args[1] if kind == 0x80 else 0))
        else:
            events.append(ChannelMessage(tick, kind, channel, args))
    diagnostics.append(f"track {index}: missing end-of-track event")
    return Track(tuple(events), tick)


def _note_diagnostics(tracks) -> list[str]:
    out = []
    for ti, track in enumerate(tracks):
        open_notes = defaultdict(int)
        for ev in track.events:
            if isinstance(ev, NoteOn):
                open_notes[(ev.channel, ev.key)] += 1
            elif isinstance(ev, NoteOff):
                if open_notes[(ev.channel, ev.key)]:
                    open_notes[(ev.channel, ev.key)] -= 1
                else:
                    out.append(f"track {ti}: note-off without note-on (channel {ev.channel}, key {ev.key}, tick {ev.tick})")
        for (ch, key), count in sorted(open_notes.items()):
            if count:
                out.append(f"track {ti}: {count} unmatched note-on (channel {ch}, key {key})")
    return out


def parse_smf(data: bytes) -> MidiDocument:
    data = bytes(data)
    if len(data) < 14 or data[:4] != b"MThd":
        raise MidiError("missing MThd header", 0)
    length = struct.unpack(">I", data[4:8])[0]
    if length < 6:
        raise MidiError(f"header length {length} too short", 4)
    if 8 + length > len(data):
        raise MidiError("truncated header chunk", 8)
    fmt, ntracks, division = struct.unpack(">HHH", data[8:14])
    if fmt == 2:
        raise MidiError("unsupported format 2", 8)
    if fmt not in (0, 1):
        raise MidiError(f"unknown format {fmt}", 8)
    diagnostics: list[str] = []
    tracks = []
    pos = 8 + length
    while pos < len(data):
        if pos + 8 > len(data):
            raise MidiError("truncated chunk header", pos)
        ctype = data[pos:pos + 4]
        clen = struct.unpack(">I", data[pos + 4:pos + 8])[0]
        body = pos + 8
        if body + clen > len(data):
            raise MidiError(f"truncated {ctype.decode('latin-1')} chunk", pos)
        if ctype == b"MTrk":
            tracks.append(_parse_track(data, body, body + clen, diagnostics, len(tracks)))
        else:
            diagnostics.append(f"skipped unknown chunk {ctype!r} at byte {pos}")
        pos = body + clen
    if len(tracks) != ntracks:
        diagnostics.append(f"header declares {ntracks} tracks, found {len(tracks)}")
    if fmt == 0 and len(tracks) != 1:
        diagnostics.append(f"format 0 file with {len(tracks)} tracks")
    diagnostics.extend(_note_diagnostics(tracks))
    return MidiDocument(fmt, division, tuple(tracks), tuple(diagnostics))


def read_smf(path) -> MidiDocument:
    with open(path, "rb") as fh:
        return parse_smf(fh.read())


# --------------------------------------------------------------------------
# writing


def _encode_track(track: Track) -> bytes:
    out = bytearray()
    last_tick, running = 0, None

    def delta(tick):
        nonlocal last_tick
        if tick < last_tick:
            raise MidiError(f"event at tick {tick} precedes tick {last_tick}")
        d = encode_vlq(tick - last_tick)
        last_tick = tick
        return d

    for ev in track.events:
        out += delta(ev.tick)
        if isinstance(ev, (NoteOn, NoteOff, ChannelMessage)):
            if isinstance(ev, NoteOn):
                status, args = 0x90 | ev.channel, bytes((ev.key, ev.velocity))
            elif isinstance(ev, NoteOff):
                status, args = 0x80 | ev.channel, bytes((ev.key, ev.velocity))
            else:
                status, args = ev.status | ev.channel, ev.data
            if status != running:
                out.append(status)
                running = status
            out += args
        elif isinstance(ev, Tempo):
            out += b"\xff\x51\x03" + ev.usec_per_quarter.to_bytes(3, "big")
            running = None
        elif isinstance(ev, MetaEvent):
            out += bytes((0xFF, ev.meta_type)) + encode_vlq(len(ev.data)) + ev.data
            running = None
        elif isinstance(ev, SysEx):
            out += bytes((ev.status,)) + encode_vlq(len(ev.data)) + ev.data
            running = None
        else:
            raise TypeError(f"cannot encode {ev!r}")
    out += delta(max(track.end_tick, last_tick)) + b"\xff\x2f\x00"
    return bytes(out)


def write_smf(doc: MidiDocument) -> bytes:
    if doc.format not in (0, 1):
        raise MidiError(f"cannot write format {doc.format}")
    out = bytearray(b"MThd" + struct.pack(">IHHH", 6, doc.format, len(doc.tracks), doc.division))
    for track in doc.tracks:
        body = _encode_track(track)
        out += b"MTrk" + struct.pack(">I", len(body)) + body
    return bytes(out)


def write_smf_file(doc: MidiDocument, path) -> None:
    with open(path, "wb") as fh:
        fh.write(write_smf(doc))


# --------------------------------------------------------------------------
# pitch transformation


class OctavePolicy(enum.Enum):
    # keep floor(key / 12), replace the pitch class
    REGISTER_BLOCK = "register-block"
    # closest key with the image pitch class, ties going up
    NEAREST_IMAGE = "nearest"


class Clamp(enum.Enum):
    # top partial octave (keys 120-127) is re-matched so the key map stays a
    # bijection; a clamped key may change pitch class
    FOLD = "fold"
    # out-of-range keys drop whole octaves; keeps pitch class, not invertible
    OCTAVE = "octave"


def key_table(f: AffineMap, policy: OctavePolicy = OctavePolicy.REGISTER_BLOCK,
              clamp: Clamp = Clamp.FOLD) -> tuple[list[int], set[int]]:
    """New key for each of the 128 MIDI keys, plus the keys that needed clamping."""
    if f.n != 12:
        raise ValueError(f"MIDI keys need a map on Z_12, got Z_{f.n}")
    image_pc = [(f.a * pc + f.b) % 12 for pc in range(12)]
    if policy is OctavePolicy.NEAREST_IMAGE:
        table = []
        for p in range(128):
            want = image_pc[p % 12]
            cands = [k for k in range(want, 128, 12)]
            table.append(min(cands, key=lambda k: (abs(k - p), -k)))
        return table, set()
    raw = [12 * (p // 12) + image_pc[p % 12] for p in range(128)]
    clamped = {p for p in range(128) if raw[p] > 127}
    table = list(raw)
    if clamp is Clamp.OCTAVE:
        for p in clamped:
            while table[p] > 127:
                table[p] -= 12
    else:
        taken = {raw[p] for p in range(128) if p not in clamped}
        free = sorted(set(range(128)) - taken)
        for p, k in zip(sorted(clamped), free):
            table[p] = k
    return table, clamped


def transform_pitches(doc: MidiDocument, w, policy: OctavePolicy = OctavePolicy.REGISTER_BLOCK,
                      include_percussion: bool = False, clamp: Clamp = Clamp.FOLD) -> MidiDocument:
    """Rewrite every note key through an affine map of Z_12.

    ``w`` is an AffineMap or anything with a ``.map`` attribute holding one
    (an isoclass witness). Timing, velocities and non-note events are left
    alone; so is channel 9 unless ``include_percussion``.
    """
    f = getattr(w, "map", w)
    table, clamped = key_table(f, policy, clamp)
    hits = 0

    def remap(ch: int, key: int) -> int:
        nonlocal hits
        if ch == PERCUSSION_CHANNEL and not include_percussion:
            return key
        if key in clamped:
            hits += 1
        return table[key]

    tracks = []
    for track in doc.tracks:
        events = []
        for ev in track.events:
            if isinstance(ev, (NoteOn, NoteOff)):
                ev = replace(ev, key=remap(ev.channel, ev.key))
            elif isinstance(ev, ChannelMessage) and ev.status == 0xA0:
                ev = replace(ev, data=bytes((remap(ev.channel, ev.data[0]),)) + ev.data[1:])
            events.append(ev)
        tracks.append(Track(tuple(events), track.end_tick))
    diagnostics = doc.diagnostics
    if hits:
        diagnostics = diagnostics + (f"{hits} key events clamped into 0-127 ({clamp.value})",)
    return MidiDocument(doc.format, doc.division, tuple(tracks), diagnostics)


def inverse_transform(doc: MidiDocument, f: AffineMap, **kwargs) -> MidiDocument:
    return transform_pitches(doc, affine_invert(f), **kwargs)


# --------------------------------------------------------------------------
# 10-TET rendering


def step_frequency(step: int, base_frequency: float = DEFAULT_BASE_FREQUENCY, n: int = 10) -> float:
    return base_frequency * 2.0 ** (step / n)


def cents(step: float, n: int = 10) -> float:
    return 1200.0 * step / n


@dataclass(frozen=True)
class DecaEvent:
    onset: float
    duration: float
    step: int
    frequency: float


@dataclass(frozen=True)
class DecaScore:
    base_frequency: float
    tempo: float
    events: tuple[DecaEvent, ...]

    def to_json_dict(self) -> dict:
        return {
            "base_frequency": self.base_frequency,
            "tempo": self.tempo,
            "events": [
                {"onset": e.onset, "duration": e.duration, "step": e.step, "frequency": e.frequency}
                for e in self.events
            ],
        }


def open_voicing(triple) -> list[int]:
    """Root at the bottom, the other two tones one octave up, ascending."""
    root, *rest = triple
    return sorted([root] + [tone + 10 for tone in rest])


def render_deca_score(path: ProgressionPath, voicing: str = "open", tempo: float = 60.0,
                      base_frequency: float = DEFAULT_BASE_FREQUENCY) -> DecaScore:
    sys = path.system
    if sys.n != 10:
        raise ValueError(f"decaphonic scores need n = 10, path is on {sys}")
    if voicing != "open":
        raise ValueError(f"unknown voicing {voicing!r}")
    if tempo <= 0 or base_frequency <= 0:
        raise ValueError("tempo and base frequency must be positive")
    bad = validate_path(sys, path.steps)
    if bad is not None:
        raise ValueError(f"path breaks at transition {bad}")
    beat = 60.0 / tempo
    events = []
    for i, (quality, root) in enumerate(path.steps):
        for step in open_voicing(chord(sys, quality, root).triple):
            events.append(DecaEvent(i * beat, beat, step, step_frequency(step, base_frequency)))
    return DecaScore(float(base_frequency), float(tempo), tuple(events))
