"""Generator-output parsing and the windowed chaptering loop."""

from __future__ import annotations

import logging
import re
from dataclasses import asdict, dataclass, field
from typing import Literal, Sequence

from .backends import Backend, GeneratorRequest, generate
from .errors import (
    BackendError,
    ConfigError,
    NoChaptersParsedError,
    ParseError,
    ValidationError,
)
from .model import Chapter, ChapterSet, VideoDocument, format_timestamp, parse_timestamp
from .prompt import (
    PromptOptions,
    TokenCounter,
    TranscriptLine,
    build_prompt,
    build_transcript,
    default_token_counter,
    prompt_overhead,
    transcript_text,
)

log = logging.getLogger(__name__)

_OUTPUT_LINE = re.compile(r"^\s*(\d{2}:\d{2}:\d{2})\s*-\s*(.+?)\s*$")


@dataclass
class ParseReport:
    unmatched_lines: int = 0
    clamped: int = 0
    non_monotonic: int = 0
    coerced_first: bool = False

    @property
    def clean(self) -> bool:
        return not (self.unmatched_lines or self.clamped or self.non_monotonic or self.coerced_first)


def _coerce_first(chapters: list[Chapter]) -> bool:
    if chapters and chapters[0].start > 0:
        chapters[0] = Chapter(0, chapters[0].title)
        return True
    return False


def _parse_lines(raw: str, duration: int, report: ParseReport) -> list[Chapter]:
    kept: list[Chapter] = []
    for line in raw.splitlines():
        if not line.strip():
            continue
        m = _OUTPUT_LINE.match(line)
        if m is None:
            report.unmatched_lines += 1
            continue
        try:
            start = parse_timestamp(m.group(1))
            title = m.group(2)
            if start > duration - 1:
                start = duration - 1
                report.clamped += 1
            chapter = Chapter(start, title)
        except (ParseError, ValidationError):
            report.unmatched_lines += 1
            continue
        if kept and chapter.start <= kept[-1].start:
            report.non_monotonic += 1
            continue
        kept.append(chapter)
    return kept


def parse_chapter_output(
    raw: str, duration: int, *, coerce_start: bool = True
) -> tuple[ChapterSet, ParseReport]:
    """Extract ``HH:MM:SS - Title`` lines from free-form generator output.

    Non-matching lines are skipped, starts are clamped into
    ``[0, duration - 1]``, entries not after the previous kept start are
    dropped, and (with ``coerce_start``) the first chapter is moved to 0 so the
    set spans the whole video. Every count lands in the returned report.
    """
    if duration < 1:
        raise ValidationError(f"cannot place chapters in a {duration}s video")
    report = ParseReport()
    chapters = _parse_lines(raw, duration, report)
    if not chapters:
        raise NoChaptersParsedError(raw)
    if coerce_start:
        report.coerced_first = _coerce_first(chapters)
    return ChapterSet(tuple(chapters), duration), report


def write_chapters(cs: ChapterSet) -> str:
    return "".join(f"{format_timestamp(c.start)} - {c.title}\n" for c in cs.chapters)


@dataclass(frozen=True)
class WindowingConfig:
    window_tokens: int = 15_000
    counter: TokenCounter = default_token_counter

    def __post_init__(self) -> None:
        if self.window_tokens < 1:
            raise ConfigError("window_tokens must be positive")


def pack_windows(lines: Sequence[TranscriptLine], window_tokens: int) -> list[list[TranscriptLine]]:
    """Greedy consecutive packing; a line never straddles two windows.

    A line larger than the budget gets a window of its own.
    """
    windows: list[list[TranscriptLine]] = []
    current: list[TranscriptLine] = []
    used = 0
    for line in lines:
        if current and used + line.token_count > window_tokens:
            windows.append(current)
            current, used = [], 0
        current.append(line)
        used += line.token_count
    if current:
        windows.append(current)
    return windows


@dataclass
class RunReport:
    video_id: str
    mode: str
    windows_total: int = 0
    windows_used: int = 0
    tokens_per_window: list[int] = field(default_factory=list)
    prompt_overhead: int = 0
    unmatched_lines: int = 0
    clamped: int = 0
    non_monotonic: int = 0
    out_of_window: int = 0
    merge_dropped: int = 0
    empty_windows: int = 0
    coerced_first: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def chapter_video(
    doc: VideoDocument,
    opts: PromptOptions,
    backend: Backend,
    windowing: WindowingConfig | None = None,
    *,
    mode: Literal["iterative", "first"] = "iterative",
    max_output_tokens: int = 1024,
    temperature: float = 0.0,
) -> tuple[ChapterSet, RunReport]:
    """Chapter one video, splitting its transcript into token-budgeted windows.

    Windows are sent in order, each with the full-video duration in the
    prompt. Window chapters earlier than the window's first line are dropped
    as out-of-window; the rest are merged by strictly increasing start. In
    ``"first"`` mode only the first window is sent.
    """
    windowing = windowing or WindowingConfig()
    if mode not in ("iterative", "first"):
        raise ValueError(f"unknown mode {mode!r}")
    lines = build_transcript(doc, opts, windowing.counter)
    overhead = prompt_overhead(doc, opts, windowing.counter)
    if windowing.window_tokens <= overhead:
        raise ConfigError(
            f"window of {windowing.window_tokens} tokens does not exceed the "
            f"{overhead}-token prompt template"
        )
    windows = pack_windows(lines, windowing.window_tokens)
    report = RunReport(doc.video_id, mode, windows_total=len(windows), prompt_overhead=overhead)
    if mode == "first":
        windows = windows[:1]

    merged: list[Chapter] = []
    for w, window in enumerate(windows):
        report.windows_used += 1
        report.tokens_per_window.append(sum(line.token_count for line in window))
        prompt = build_prompt(doc, transcript_text(window), opts)
        req = GeneratorRequest(prompt, max_output_tokens, temperature)
        try:
            response = generate(backend, req)
        except BackendError as exc:
            exc.window_index = w
            raise
        try:
            got, parsed = parse_chapter_output(response.raw_text, doc.duration, coerce_start=False)
        except NoChaptersParsedError:
            if w == 0:
                raise
            report.empty_windows += 1
            report.notes.append(f"window {w} contributed nothing")
            continue
        report.unmatched_lines += parsed.unmatched_lines
        report.clamped += parsed.clamped
        report.non_monotonic += parsed.non_monotonic

        floor = window[0].start if w > 0 else None
        for chapter in got.chapters:
            if floor is not None and chapter.start < floor:
                report.out_of_window += 1
            elif merged and chapter.start <= merged[-1].start:
                report.merge_dropped += 1
            else:
                merged.append(chapter)

    # Window 0 always contributes (its empty parse is fatal), so merged is non-empty.
    report.coerced_first = _coerce_first(merged)
    return ChapterSet(tuple(merged), doc.duration), report


def chapter_single_call(
    doc: VideoDocument,
    opts: PromptOptions,
    backend: Backend,
    *,
    counter: TokenCounter = default_token_counter,
    max_output_tokens: int = 1024,
    temperature: float = 0.0,
) -> tuple[ChapterSet, ParseReport]:
    """Non-iterative path: the whole transcript in one prompt."""
    lines = build_transcript(doc, opts, counter)
    prompt = build_prompt(doc, transcript_text(lines), opts)
    response = generate(backend, GeneratorRequest(prompt, max_output_tokens, temperature))
    return parse_chapter_output(response.raw_text, doc.duration)
