"""Serialize a video document into generator prompt text."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .errors import EmptyTranscriptError, ValidationError
from .model import Modality, TimedUtterance, VideoDocument, format_timestamp

TokenCounter = Callable[[str], int]

TASK_BOTH = (
    "use the provided captions and ASR transcript to identify distinct chapters "
    "based on content shifts."
)
TASK_SPEECH = "use the provided ASR transcript to identify distinct chapters based on content shifts."
TASK_CAPTIONS = (
    "use the provided captions to identify distinct chapters based on content shifts."
)

# One sentence per line; {transcript} carries its own trailing newline.
PROMPT_TEMPLATE = (
    "Given the complete transcript of a video of duration {duration}, {task}.\n"
    "Identify the approximate start time of each chapter in the format `hh:mm:ss - Title'.\n"
    "Ensure each chapter entry is on a new line.\n"
    "Focus on significant topic changes that would merit a new chapter in a video, "
    "but do not provide summaries of the chapters.\n"
    "{transcript}"
)


def default_token_counter(text: str) -> int:
    """``ceil(utf8_bytes / 4)``; a model-agnostic stand-in for a tokenizer."""
    return math.ceil(len(text.encode("utf-8")) / 4)


@dataclass(frozen=True)
class PromptOptions:
    include_speech: bool = True
    include_captions: bool = True
    modality_prefixes: bool = True
    include_asr_end: bool = False
    task_text: str | None = None

    def __post_init__(self) -> None:
        if not (self.include_speech or self.include_captions):
            raise ValidationError("at least one modality must be included")
        if self.task_text is not None and not self.task_text.strip():
            raise ValidationError("task text must be non-empty")

    @classmethod
    def speech_only(cls, **kw) -> "PromptOptions":
        return cls(include_speech=True, include_captions=False, **kw)

    @classmethod
    def captions_only(cls, **kw) -> "PromptOptions":
        return cls(include_speech=False, include_captions=True, **kw)

    @property
    def both(self) -> bool:
        return self.include_speech and self.include_captions

    @property
    def task(self) -> str:
        if self.task_text is not None:
            return self.task_text
        if self.both:
            return TASK_BOTH
        return TASK_SPEECH if self.include_speech else TASK_CAPTIONS

    def wants(self, modality: Modality) -> bool:
        return self.include_speech if modality is Modality.SPEECH else self.include_captions


@dataclass(frozen=True)
class TranscriptLine:
    source_index: int
    rendered: str
    token_count: int
    start: int


def effective_options(doc: VideoDocument, opts: PromptOptions) -> PromptOptions:
    """Narrow ``opts`` to the modalities ``doc`` actually supplies.

    A document with a single selected modality renders without prefixes and
    with that modality's task sentence.
    """
    present = {u.modality for u in doc.utterances if opts.wants(u.modality)}
    if len(present) != 1:
        return opts
    return replace(
        opts,
        include_speech=Modality.SPEECH in present,
        include_captions=Modality.CAPTION in present,
    )


def render_line(u: TimedUtterance, opts: PromptOptions) -> str:
    """One transcript line without its trailing newline.

    Prefixes appear only when both modalities are in play and
    ``modality_prefixes`` is on.
    """
    stamp = format_timestamp(u.start)
    if opts.include_asr_end and u.end is not None:
        stamp = f"{stamp} - {format_timestamp(u.end)}"
    if opts.both and opts.modality_prefixes:
        return f"{u.modality.prefix} {stamp}: {u.text}"
    return f"{stamp}: {u.text}"


def build_transcript(
    doc: VideoDocument,
    opts: PromptOptions,
    counter: TokenCounter = default_token_counter,
) -> list[TranscriptLine]:
    """Filter, order and render ``doc``; raises :class:`EmptyTranscriptError`."""
    opts = effective_options(doc, opts)
    # Document order is already (start, Speech<Caption, insertion index).
    lines = []
    for index, u in enumerate(doc.utterances):
        if not opts.wants(u.modality):
            continue
        text = render_line(u, opts) + "\n"
        lines.append(TranscriptLine(index, text, counter(text), u.start))
    if not lines:
        raise EmptyTranscriptError(f"{doc.video_id}: no utterances for the selected modalities")
    return lines


def transcript_text(lines: Sequence[TranscriptLine]) -> str:
    return "".join(line.rendered for line in lines)


def _fill(doc: VideoDocument, opts: PromptOptions, transcript: str) -> str:
    # The template supplies the task sentence's closing period.
    task = opts.task[:-1] if opts.task.endswith(".") else opts.task
    return PROMPT_TEMPLATE.format(
        duration=format_timestamp(doc.duration), task=task, transcript=transcript
    )


def build_prompt(doc: VideoDocument, transcript: str, opts: PromptOptions) -> str:
    if not transcript:
        raise EmptyTranscriptError(f"{doc.video_id}: empty transcript text")
    return _fill(doc, effective_options(doc, opts), transcript)


def prompt_overhead(
    doc: VideoDocument, opts: PromptOptions, counter: TokenCounter = default_token_counter
) -> int:
    """Tokens the template costs on its own, independent of the transcript."""
    return counter(_fill(doc, effective_options(doc, opts), ""))


@dataclass(frozen=True)
class TokenCounts:
    per_line: list[int]
    total: int
    template_overhead: int | None = None


def count_tokens(
    counter: TokenCounter,
    lines: Sequence[TranscriptLine | str],
    *,
    overhead: int | None = None,
) -> TokenCounts:
    per_line = [counter(line.rendered if isinstance(line, TranscriptLine) else line) for line in lines]
    return TokenCounts(per_line, sum(per_line), overhead)
