import pytest
from hypothesis import given, strategies as st

from chapterforge.errors import ParseError, TimestampRangeError, ValidationError
from chapterforge.model import (
    MAX_SECONDS,
    Chapter,
    ChapterSet,
    Modality,
    Segment,
    TimedUtterance,
    VideoDocument,
    format_timestamp,
    parse_timestamp,
    segments_of,
)


@pytest.mark.parametrize(
    "seconds, text",
    [(0, "00:00:00"), (592, "00:09:52"), (51, "00:00:51"), (3601, "01:00:01"), (MAX_SECONDS, "99:59:59")],
)
def test_timestamp_codec(seconds, text):
    assert format_timestamp(seconds) == text
    assert parse_timestamp(text) == seconds


@pytest.mark.parametrize("bad", [-1, MAX_SECONDS + 1])
def test_format_out_of_range(bad):
    with pytest.raises(TimestampRangeError):
        format_timestamp(bad)


@pytest.mark.parametrize(
    "text, offset",
    [("00:60:00", 3), ("00:00:60", 6), ("0:00:00", 1), ("00-00-00", 2), ("00:00:0", 7), ("00:00:001", 8), ("", 0)],
)
def test_parse_errors_carry_offset(text, offset):
    with pytest.raises(ParseError) as info:
        parse_timestamp(text)
    assert info.value.offset == offset


def test_parse_rejects_unicode_digits():
    with pytest.raises(ParseError):
        parse_timestamp("0١:00:00")


@given(st.integers(0, MAX_SECONDS))
def test_round_trip(t):
    assert parse_timestamp(format_timestamp(t)) == t


def test_segments_of_examples():
    def seg(starts, duration):
        return [(s.begin, s.end) for s in segments_of(ChapterSet.from_pairs([(s, "x") for s in starts], duration))]

    assert seg([0, 51, 85], 592) == [(0, 51), (51, 85), (85, 592)]
    assert seg([0], 100) == [(0, 100)]
    assert seg([10, 20], 30) == [(10, 20), (20, 30)]


@given(
    st.integers(1, 5000).flatmap(
        lambda d: st.tuples(st.just(d), st.sets(st.integers(0, d - 1), min_size=1, max_size=30))
    )
)
def test_segments_partition(case):
    duration, starts = case
    cs = ChapterSet.from_pairs([(s, "t") for s in sorted(starts)], duration)
    segs = segments_of(cs)
    assert len(segs) == len(cs)
    assert sum(s.length for s in segs) == duration - min(starts)
    assert all(a.end == b.begin for a, b in zip(segs, segs[1:]))
    assert segs[-1].end == duration


def test_chapterset_invariants():
    with pytest.raises(ValidationError):
        ChapterSet.from_pairs([(0, "a"), (0, "b")], 10)
    with pytest.raises(ValidationError):
        ChapterSet.from_pairs([(5, "a"), (3, "b")], 10)
    with pytest.raises(ValidationError):
        ChapterSet.from_pairs([(0, "a"), (10, "b")], 10)
    assert ChapterSet((), 10).is_empty


def test_chapter_title_trimmed_and_single_line():
    assert Chapter(0, "  Intro \t").title == "Intro"
    with pytest.raises(ValidationError):
        Chapter(0, "two\nlines")
    with pytest.raises(ValidationError):
        Chapter(0, "   ")


def test_utterance_invariants():
    with pytest.raises(ValidationError):
        TimedUtterance(Modality.CAPTION, 3, "x", end=4)
    with pytest.raises(ValidationError):
        TimedUtterance(Modality.SPEECH, 5, "x", end=4)
    with pytest.raises(ValidationError):
        TimedUtterance(Modality.SPEECH, 0, "")


def test_document_sorting_speech_first_and_stable():
    a = TimedUtterance(Modality.CAPTION, 5, "cap")
    b = TimedUtterance(Modality.SPEECH, 5, "first")
    c = TimedUtterance(Modality.SPEECH, 5, "second")
    d = TimedUtterance(Modality.SPEECH, 1, "early")
    doc = VideoDocument.build("v", 10, [a, b, c, d])
    assert [u.text for u in doc.utterances] == ["early", "first", "second", "cap"]
    with pytest.raises(ValidationError):
        VideoDocument("v", 10, (a, d))
    with pytest.raises(ValidationError):
        VideoDocument.build("v", 3, [a])


def test_segment_requires_positive_length():
    with pytest.raises(ValidationError):
        Segment(4, 4)
