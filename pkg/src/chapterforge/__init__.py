"""Text-domain video chaptering: transcripts in, timestamped chapters out.

Also ships the segmentation metrics used to score chapters and a seeded
synthetic corpus for end-to-end oracle checks.
"""

from .errors import ChapterForgeError
from .generate import chapter_video, parse_chapter_output, write_chapters
from .ingest import load_asr, load_captions, load_chapters
from .kernels import BACKEND as KERNEL_BACKEND
from .metrics import evaluate, f1, tiou
from .model import (
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

__version__ = "0.1.0"

__all__ = [
    "Chapter",
    "ChapterForgeError",
    "ChapterSet",
    "KERNEL_BACKEND",
    "Modality",
    "Segment",
    "TimedUtterance",
    "VideoDocument",
    "chapter_video",
    "evaluate",
    "f1",
    "format_timestamp",
    "load_asr",
    "load_captions",
    "load_chapters",
    "parse_chapter_output",
    "parse_timestamp",
    "segments_of",
    "tiou",
    "write_chapters",
]
