import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vomm import (
    DataError,
    NoteEvent,
    SILENCE_PITCH,
    decode_event_text,
    encode_events,
    events_to_sequence,
    midi_alphabet,
    midi_tokenize,
    parse_event_csv,
    sequence_to_events,
)


def valid_events():
    pitches = st.integers(0, SILENCE_PITCH)

    def build(pitch, volume, duration, rest_duration):
        if pitch == SILENCE_PITCH:
            return NoteEvent(pitch, volume, rest_duration)
        return NoteEvent(pitch, volume, duration)

    return st.builds(
        build,
        pitches,
        st.integers(0, 127),
        st.integers(0, 100000),
        st.integers(-100000, 100000),
    )


class TestNoteEvent:
    def test_encoding_anchor(self):
        assert NoteEvent(102, 83, 4022).encode() == "102:83:4022:"

    def test_rest_with_negative_duration(self):
        e = NoteEvent(SILENCE_PITCH, 0, -240)
        assert e.is_rest
        assert e.encode() == "128:0:-240:"

    def test_pitch_range(self):
        with pytest.raises(DataError):
            NoteEvent(129, 0, 1)
        with pytest.raises(DataError):
            NoteEvent(-1, 0, 1)

    def test_volume_range(self):
        with pytest.raises(DataError):
            NoteEvent(60, 128, 1)
        with pytest.raises(DataError):
            NoteEvent(60, -1, 1)

    def test_negative_duration_needs_the_rest_pitch(self):
        with pytest.raises(DataError, match="rest pitch"):
            NoteEvent(60, 100, -1)


class TestEncoding:
    def test_melody_opening(self):
        events = [NoteEvent(83, 120, 240), NoteEvent(128, 0, -240), NoteEvent(79, 120, 240)]
        assert encode_events(events) == "83:120:240:128:0:-240:79:120:240:"

    def test_twelve_symbol_alphabet(self):
        a = midi_alphabet()
        assert a.size == 12
        assert "".join(a.symbols()) == "0123456789:-"

    def test_any_melody_stays_inside_the_alphabet(self):
        events = [NoteEvent(0, 0, 0), NoteEvent(128, 127, -99999)]
        seq = events_to_sequence(events)
        assert seq.text() == encode_events(events)

    def test_empty_melody(self):
        assert encode_events([]) == ""
        assert decode_event_text("") == []


class TestDecoding:
    def test_round_trip_anchor(self):
        text = "83:120:240:128:0:-240:79:120:240:"
        events = decode_event_text(text)
        assert events == [NoteEvent(83, 120, 240), NoteEvent(128, 0, -240), NoteEvent(79, 120, 240)]
        assert encode_events(events) == text

    def test_sequence_round_trip(self):
        events = [NoteEvent(60, 100, 240), NoteEvent(128, 0, 120)]
        assert sequence_to_events(events_to_sequence(events)) == events

    @given(st.lists(valid_events(), max_size=12))
    @settings(max_examples=120, deadline=None)
    def test_decode_inverts_encode(self, events):
        assert decode_event_text(encode_events(events)) == events

    def test_missing_terminator(self):
        with pytest.raises(DataError, match="end with"):
            decode_event_text("60:100:240")

    def test_wrong_field_count(self):
        with pytest.raises(DataError, match="multiple of 3"):
            decode_event_text("60:100:")

    def test_non_integer_field(self):
        with pytest.raises(DataError, match="non-integer"):
            decode_event_text("60:1a0:240:")

    def test_non_canonical_numbers(self):
        with pytest.raises(DataError, match="non-canonical"):
            decode_event_text("060:100:240:")
        with pytest.raises(DataError, match="non-canonical"):
            decode_event_text("128:0:-0:")

    def test_invalid_event_values(self):
        with pytest.raises(DataError, match="event 2"):
            decode_event_text("60:100:240:200:0:1:")


class TestCsv:
    def test_comments_and_blanks_skipped(self):
        text = "# a melody\n60,100,240\n\n  128 , 0 , -240\n"
        events = parse_event_csv(text)
        assert events == [NoteEvent(60, 100, 240), NoteEvent(128, 0, -240)]

    def test_field_count_error_names_the_line(self):
        with pytest.raises(DataError, match="line 2"):
            parse_event_csv("60,100,240\n60,100\n")

    def test_non_integer_error_names_the_line(self):
        with pytest.raises(DataError, match="line 3"):
            parse_event_csv("# x\n60,100,240\n60,abc,240\n")

    def test_validation_error_names_the_line(self):
        with pytest.raises(DataError, match="line 1.*rest pitch"):
            parse_event_csv("60,100,-240\n")

    def test_tokenize_matches_manual_pipeline(self):
        text = "83,120,240\n128,0,-240\n"
        seq = midi_tokenize(text)
        assert seq.text() == "83:120:240:128:0:-240:"
        assert seq.alphabet == midi_alphabet()
        assert sequence_to_events(seq) == parse_event_csv(text)
