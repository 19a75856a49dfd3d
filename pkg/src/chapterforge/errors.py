"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ChapterForgeError(Exception):
    """Base class for every error raised by chapterforge."""


class TimestampRangeError(ChapterForgeError, ValueError):
    pass


class ParseError(ChapterForgeError, ValueError):
    """Malformed input text.

    ``offset`` is a character offset into the parsed string, ``line`` a
    1-based line number and ``record`` a 0-based record index; whichever
    apply are set.
    """

    def __init__(
        self,
        message: str,
        *,
        offset: int | None = None,
        line: int | None = None,
        record: int | None = None,
        path: str | None = None,
    ) -> None:
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if record is not None:
            where.append(f"record {record}")
        if offset is not None:
            where.append(f"offset {offset}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.offset = offset
        self.line = line
        self.record = record
        self.path = path


class ValidationError(ChapterForgeError, ValueError):
    pass


class EmptyTranscriptError(ChapterForgeError):
    """No utterance survived the modality filter."""


class NoChaptersParsedError(ChapterForgeError):
    def __init__(self, raw: str) -> None:
        excerpt = raw if len(raw) <= 200 else raw[:200] + "..."
        super().__init__(f"no chapters parsed from generator output: {excerpt!r}")
        self.raw = raw


class MisuseError(ChapterForgeError):
    """An operation was called outside its precondition."""


class ConfigError(ChapterForgeError, ValueError):
    pass


class BackendError(ChapterForgeError):
    """Generator failure. ``window_index`` is filled in by the windowing loop."""

    window_index: int | None = None


class TransportError(BackendError):
    pass


class ProtocolError(BackendError):
    def __init__(self, message: str, status: int | None = None, body: str = "") -> None:
        excerpt = body[:300]
        detail = f"{message} (status={status})" if status is not None else message
        if excerpt:
            detail = f"{detail}: {excerpt}"
        super().__init__(detail)
        self.status = status
        self.body = excerpt
