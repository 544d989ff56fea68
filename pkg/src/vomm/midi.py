"""Music-as-text tokenization.

A melody is a list of (pitch, volume, duration) note events; pitch 128 is
reserved for rests.  Each event is rendered as the ASCII chunk
``"<pitch>:<volume>:<duration>:"`` and the chunks are concatenated, so a
melody becomes one string over the 12-character alphabet ``0123456789:-``.
A negative duration is allowed only on the rest pitch, where it lets a
rest overlap the tail of the preceding note.  Predictors then treat
melodies like any other text.

Event files are CSV: one ``pitch,volume,duration`` row per event, blank
lines and ``#`` comments ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import core

SILENCE_PITCH = 128
MIDI_SYMBOLS = "0123456789:-"


def midi_alphabet() -> core.Alphabet:
    return core.Alphabet(MIDI_SYMBOLS)


@dataclass(frozen=True)
class NoteEvent:
    pitch: int
    volume: int
    duration: int

    def __post_init__(self):
        if not (0 <= self.pitch <= SILENCE_PITCH):
            raise core.DataError(f"pitch must be 0..{SILENCE_PITCH} (128 = rest), got {self.pitch}")
        if not (0 <= self.volume <= 127):
            raise core.DataError(f"volume must be 0..127, got {self.volume}")
        if self.duration < 0 and not self.is_rest:
            raise core.DataError("negative duration is only allowed on the rest pitch")

    @property
    def is_rest(self) -> bool:
        return self.pitch == SILENCE_PITCH

    def encode(self) -> str:
        return f"{self.pitch}:{self.volume}:{self.duration}:"


def encode_events(events) -> str:
    return "".join(e.encode() for e in events)


def events_to_sequence(events, alphabet: core.Alphabet | None = None) -> core.Sequence:
    return core.Sequence.of_text(alphabet or midi_alphabet(), encode_events(events))


def decode_event_text(text: str) -> list[NoteEvent]:
    """Inverse of :func:`encode_events`.

    Splits on the trailing-colon chunk structure; any deviation (stray
    characters, missing fields, sign in the wrong place) is a DataError.
    """
    if not text:
        return []
    if not text.endswith(":"):
        raise core.DataError("event text must end with ':'")
    fields = text[:-1].split(":")
    if len(fields) % 3:
        raise core.DataError(f"event text has {len(fields)} fields, not a multiple of 3")
    events = []
    for i in range(0, len(fields), 3):
        chunk = fields[i : i + 3]
        try:
            pitch, volume, duration = (int(f) for f in chunk)
        except ValueError:
            raise core.DataError(f"event {i // 3 + 1}: non-integer field in {':'.join(chunk)!r}") from None
        for f, value in zip(chunk, (pitch, volume, duration)):
            if f != str(value):  # reject leading zeros/plus so decode(encode(e)) is the identity
                raise core.DataError(f"event {i // 3 + 1}: non-canonical number {f!r}")
        try:
            events.append(NoteEvent(pitch, volume, duration))
        except core.DataError as exc:
            raise core.DataError(f"event {i // 3 + 1}: {exc}") from None
    return events


def sequence_to_events(seq: core.Sequence) -> list[NoteEvent]:
    """Decode a tokenized melody back into note events."""
    return decode_event_text(seq.text())


def parse_event_csv(text: str) -> list[NoteEvent]:
    """Parse ``pitch,volume,duration`` rows; errors carry the line number."""
    events = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise core.DataError(f"line {lineno}: expected pitch,volume,duration, got {raw!r}")
        try:
            pitch, volume, duration = (int(p) for p in parts)
        except ValueError:
            raise core.DataError(f"line {lineno}: non-integer field in {raw!r}") from None
        try:
            events.append(NoteEvent(pitch, volume, duration))
        except core.DataError as exc:
            raise core.DataError(f"line {lineno}: {exc}") from None
    return events


def midi_tokenize(text: str, alphabet: core.Alphabet | None = None) -> core.Sequence:
    """CSV event text -> one symbol sequence over the 12-char alphabet."""
    return events_to_sequence(parse_event_csv(text), alphabet)
