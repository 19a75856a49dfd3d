"""Load ASR, caption, chapter and manifest files.

ASR and caption files are UTF-8 JSON Lines (``{"start", "end", "text"}`` and
``{"time", "text"}``). Chapter files hold one ``HH:MM:SS - Title`` per line;
a line that does not start with a timestamp continues the previous title.
"""

from __future__ import annotations

import json
import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator

from .errors import ParseError, ValidationError
from .model import Chapter, ChapterSet, Modality, TimedUtterance, VideoDocument, parse_timestamp

log = logging.getLogger(__name__)

CHAPTER_LINE = re.compile(r"^(\d{2}:\d{2}:\d{2}) - (.*)$")


@dataclass(frozen=True)
class LoadResult:
    utterances: list[TimedUtterance]
    dropped: int = 0


def _iter_jsonl(path: Path) -> Iterator[tuple[int, int, dict[str, Any]]]:
    """Yield ``(record_index, line_number, obj)`` for non-blank lines."""
    with open(path, encoding="utf-8") as fh:
        index = 0
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(
                    f"invalid JSON: {exc.msg}", record=index, line=lineno, path=str(path)
                ) from exc
            if not isinstance(obj, dict):
                raise ParseError("record is not an object", record=index, path=str(path))
            yield index, lineno, obj
            index += 1


def _seconds(obj: dict, key: str, index: int, path: Path) -> float:
    value = obj.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"field {key!r} must be a number", record=index, path=str(path))
    if not math.isfinite(value) or value < 0:
        raise ParseError(f"field {key!r} must be finite and >= 0", record=index, path=str(path))
    return value


def _text(obj: dict, index: int, path: Path) -> str:
    value = obj.get("text")
    if not isinstance(value, str):
        raise ParseError("field 'text' must be a string", record=index, path=str(path))
    # Line breaks would split one record across transcript lines.
    text = " ".join(value.splitlines()).strip()
    if not text:
        raise ParseError("field 'text' is empty", record=index, path=str(path))
    return text


def load_asr_records(path: str | Path, duration: int) -> LoadResult:
    path = Path(path)
    out: list[TimedUtterance] = []
    dropped = 0
    for index, _, obj in _iter_jsonl(path):
        start = _seconds(obj, "start", index, path)
        end = _seconds(obj, "end", index, path)
        if end < start:
            raise ParseError("end precedes start", record=index, path=str(path))
        text = _text(obj, index, path)
        start_s, end_s = math.floor(start), math.floor(end)
        if start_s > duration:
            dropped += 1
            continue
        out.append(TimedUtterance(Modality.SPEECH, start_s, text, end=end_s))
    if dropped:
        log.warning("%s: dropped %d ASR records past duration %ds", path, dropped, duration)
    out.sort(key=lambda u: u.start)
    return LoadResult(out, dropped)


def load_caption_records(path: str | Path, duration: int) -> LoadResult:
    path = Path(path)
    out: list[TimedUtterance] = []
    dropped = 0
    for index, _, obj in _iter_jsonl(path):
        time = math.floor(_seconds(obj, "time", index, path))
        text = _text(obj, index, path)
        if time > duration:
            dropped += 1
            continue
        out.append(TimedUtterance(Modality.CAPTION, time, text))
    if dropped:
        log.warning("%s: dropped %d caption records past duration %ds", path, dropped, duration)
    out.sort(key=lambda u: u.start)
    return LoadResult(out, dropped)


def load_asr(path: str | Path, duration: int) -> list[TimedUtterance]:
    return load_asr_records(path, duration).utterances


def load_captions(path: str | Path, duration: int) -> list[TimedUtterance]:
    return load_caption_records(path, duration).utterances


def parse_chapters(text: str, duration: int, *, source: str | None = None) -> ChapterSet:
    """Parse chapter-file text; see :func:`load_chapters`."""
    entries: list[tuple[int, int, list[str]]] = []  # (start, line number, title parts)
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        m = CHAPTER_LINE.match(line.rstrip())
        if m is None:
            if not entries:
                raise ParseError("first entry lacks a HH:MM:SS timestamp", line=lineno, path=source)
            entries[-1][2].append(line.strip())
            continue
        try:
            start = parse_timestamp(m.group(1))
        except ParseError as exc:
            raise ParseError(str(exc), line=lineno, offset=exc.offset, path=source) from exc
        entries.append((start, lineno, [m.group(2).strip()]))

    if not entries:
        raise ParseError("no chapter entries", path=source)
    for (a, la, _), (b, lb, _) in zip(entries, entries[1:]):
        if b <= a:
            raise ValidationError(
                f"{source or 'chapters'}: start on line {lb} ({b}s) does not follow line {la} ({a}s)"
            )
    if entries[-1][0] >= duration:
        raise ValidationError(
            f"{source or 'chapters'}: start on line {entries[-1][1]} not before duration {duration}s"
        )
    chapters = [Chapter(start, " ".join(p for p in parts if p)) for start, _, parts in entries]
    return ChapterSet(tuple(chapters), duration)


def load_chapters(path: str | Path, duration: int) -> ChapterSet:
    path = Path(path)
    return parse_chapters(path.read_text(encoding="utf-8"), duration, source=str(path))


@dataclass(frozen=True)
class ManifestEntry:
    video_id: str
    duration: int
    asr: Path | None = None
    captions: Path | None = None
    chapters: Path | None = None

    def to_json(self) -> dict:
        def rel(p: Path | None) -> str | None:
            return None if p is None else str(p)

        return {
            "video_id": self.video_id,
            "duration": self.duration,
            "asr": rel(self.asr),
            "captions": rel(self.captions),
            "chapters": rel(self.chapters),
        }


def load_manifest(path: str | Path) -> list[ManifestEntry]:
    """Read a corpus manifest; relative paths resolve against its directory."""
    path = Path(path)
    base = path.parent
    entries: list[ManifestEntry] = []
    seen: set[str] = set()

    def resolve(value: Any, key: str, index: int) -> Path | None:
        if value is None:
            return None
        if not isinstance(value, str):
            raise ParseError(f"field {key!r} must be a path or null", record=index, path=str(path))
        p = Path(value)
        return p if p.is_absolute() else base / p

    for index, _, obj in _iter_jsonl(path):
        vid = obj.get("video_id")
        if not isinstance(vid, str) or not vid:
            raise ParseError("missing video_id", record=index, path=str(path))
        if vid in seen:
            raise ParseError(f"duplicate video_id {vid!r}", record=index, path=str(path))
        seen.add(vid)
        duration = math.floor(_seconds(obj, "duration", index, path))
        entries.append(
            ManifestEntry(
                vid,
                duration,
                resolve(obj.get("asr"), "asr", index),
                resolve(obj.get("captions"), "captions", index),
                resolve(obj.get("chapters"), "chapters", index),
            )
        )
    return entries


def load_document(entry: ManifestEntry) -> VideoDocument:
    utterances: list[TimedUtterance] = []
    if entry.asr is not None:
        utterances += load_asr(entry.asr, entry.duration)
    if entry.captions is not None:
        utterances += load_captions(entry.captions, entry.duration)
    return VideoDocument.build(entry.video_id, entry.duration, utterances)
