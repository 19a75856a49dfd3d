"""Core domain types and the ``HH:MM:SS`` timestamp codec.

Timestamps are plain ``int`` seconds from video start throughout the package.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ParseError, TimestampRangeError, ValidationError

MAX_SECONDS = 99 * 3600 + 59 * 60 + 59

_DIGITS = frozenset("0123456789")


def format_timestamp(seconds: int) -> str:
    """Render whole seconds as zero-padded ``HH:MM:SS``."""
    if isinstance(seconds, bool) or not isinstance(seconds, int):
        raise TypeError(f"timestamp must be int seconds, got {type(seconds).__name__}")
    if not 0 <= seconds <= MAX_SECONDS:
        raise TimestampRangeError(f"timestamp {seconds}s outside [0, {MAX_SECONDS}]")
    hours, rest = divmod(seconds, 3600)
    minutes, secs = divmod(rest, 60)
    return f"{hours:02d}:{minutes:02d}:{secs:02d}"


def parse_timestamp(text: str) -> int:
    """Inverse of :func:`format_timestamp`.

    Raises :class:`ParseError` whose ``offset`` points at the first offending
    character (the first digit of the field for out-of-range minutes/seconds).
    """
    for i, expected in enumerate("dd:dd:dd"):
        if i >= len(text):
            raise ParseError(f"truncated timestamp {text!r}", offset=i)
        ch = text[i]
        ok = ch in _DIGITS if expected == "d" else ch == ":"
        if not ok:
            raise ParseError(f"malformed timestamp {text!r}", offset=i)
    if len(text) != 8:
        raise ParseError(f"trailing characters in timestamp {text!r}", offset=8)
    hours, minutes, secs = int(text[0:2]), int(text[3:5]), int(text[6:8])
    if minutes >= 60:
        raise ParseError(f"minutes out of range in {text!r}", offset=3)
    if secs >= 60:
        raise ParseError(f"seconds out of range in {text!r}", offset=6)
    return hours * 3600 + minutes * 60 + secs


class Modality(enum.Enum):
    SPEECH = "ASR"
    CAPTION = "Caption"

    @property
    def prefix(self) -> str:
        return self.value

    @property
    def order(self) -> int:
        # Speech sorts before captions at equal timestamps.
        return 0 if self is Modality.SPEECH else 1


def _single_line(text: str) -> bool:
    return len(text.splitlines()) <= 1 and not text.endswith(("\n", "\r"))


@dataclass(frozen=True)
class TimedUtterance:
    modality: Modality
    start: int
    text: str
    end: int | None = None

    def __post_init__(self) -> None:
        if self.start < 0:
            raise ValidationError(f"negative start {self.start}")
        if not self.text.strip():
            raise ValidationError("utterance text is empty")
        if not _single_line(self.text):
            raise ValidationError(f"utterance text spans lines: {self.text!r}")
        if self.end is not None:
            if self.modality is Modality.CAPTION:
                raise ValidationError("captions carry a single timestamp, not an end")
            if self.end < self.start:
                raise ValidationError(f"end {self.end} before start {self.start}")

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.start, self.modality.order)


@dataclass(frozen=True)
class VideoDocument:
    """A video's identity, duration and timed records in canonical order.

    Use :meth:`build` to sort arbitrary input; the constructor only checks.
    """

    video_id: str
    duration: int
    utterances: tuple[TimedUtterance, ...] = ()

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise ValidationError(f"negative duration {self.duration}")
        prev = None
        for u in self.utterances:
            if u.start > self.duration:
                raise ValidationError(
                    f"{self.video_id}: utterance at {u.start}s beyond duration {self.duration}s"
                )
            if prev is not None and u.sort_key < prev:
                raise ValidationError(f"{self.video_id}: utterances not sorted")
            prev = u.sort_key

    @classmethod
    def build(
        cls, video_id: str, duration: int, utterances: Iterable[TimedUtterance]
    ) -> "VideoDocument":
        ordered = sorted(utterances, key=lambda u: u.sort_key)
        return cls(video_id, duration, tuple(ordered))

    def has(self, modality: Modality) -> bool:
        return any(u.modality is modality for u in self.utterances)

    def of(self, modality: Modality) -> list[TimedUtterance]:
        return [u for u in self.utterances if u.modality is modality]


@dataclass(frozen=True)
class Chapter:
    start: int
    title: str

    def __post_init__(self) -> None:
        title = self.title.strip()
        if not title:
            raise ValidationError(f"empty chapter title at {self.start}s")
        if not _single_line(title):
            raise ValidationError(f"chapter title spans lines: {self.title!r}")
        if self.start < 0:
            raise ValidationError(f"negative chapter start {self.start}")
        object.__setattr__(self, "title", title)


@dataclass(frozen=True)
class Segment:
    begin: int
    end: int

    def __post_init__(self) -> None:
        if not self.begin < self.end:
            raise ValidationError(f"empty segment [{self.begin}, {self.end})")

    @property
    def length(self) -> int:
        return self.end - self.begin


@dataclass(frozen=True)
class ChapterSet:
    """Ordered chapters of one video; chapter ``i`` ends where ``i+1`` begins.

    An empty set is representable (a failed prediction scored as zero) but
    every loader and parser refuses to produce one.
    """

    chapters: tuple[Chapter, ...]
    duration: int
    _starts: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        chapters = tuple(self.chapters)
        object.__setattr__(self, "chapters", chapters)
        starts = tuple(c.start for c in chapters)
        for a, b in zip(starts, starts[1:]):
            if b <= a:
                raise ValidationError(f"chapter starts not strictly increasing: {a} then {b}")
        if starts and starts[-1] >= self.duration:
            raise ValidationError(
                f"chapter start {starts[-1]}s not before duration {self.duration}s"
            )
        object.__setattr__(self, "_starts", starts)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, str]], duration: int) -> "ChapterSet":
        return cls(tuple(Chapter(s, t) for s, t in pairs), duration)

    @property
    def starts(self) -> tuple[int, ...]:
        return self._starts

    @property
    def titles(self) -> list[str]:
        return [c.title for c in self.chapters]

    def __len__(self) -> int:
        return len(self.chapters)

    def __iter__(self):
        return iter(self.chapters)

    @property
    def is_empty(self) -> bool:
        return not self.chapters


def segments_of(cs: ChapterSet) -> list[Segment]:
    """Materialize the implicit chapter intervals ``[b_i, b_{i+1})``."""
    ends: Sequence[int] = cs.starts[1:] + (cs.duration,)
    return [Segment(b, e) for b, e in zip(cs.starts, ends)]
