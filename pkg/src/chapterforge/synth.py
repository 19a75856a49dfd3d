"""Seeded synthetic chaptered videos with oracle markers.

Each video gets ground-truth chapters, an ASR track paced to a target token
rate and captions at chapter starts plus uniform extras. The speech line at a
marked chapter start reads ``§CHAPTER§ <title>``, which :class:`MockBackend`
turns back into a chapter line.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from ._atomic import atomic_write_text
from .backends import MARKER
from .errors import ConfigError
from .generate import write_chapters
from .ingest import ManifestEntry
from .model import Chapter, ChapterSet, Modality, TimedUtterance, VideoDocument

_ONSETS = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "st", "tr"]
_VOWELS = ["a", "e", "i", "o", "u", "ai", "ou"]
_CODAS = ["", "", "n", "r", "s", "l", "m", "x"]

_SPEECH_PREFIX_BYTES = len("00:00:00: \n")
_CAPTION_PREFIX_BYTES = len("Caption 00:00:00: \n")
# Mean overshoot of _filler past its target length plus ceil() rounding.
_LENGTH_BIAS = 5


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    num_videos: int = 10
    duration_range: tuple[int, int] = (300, 1200)
    chapters_per_video: tuple[int, int] = (3, 13)
    speech_tokens_per_minute: float = 257.0
    caption_tokens: int = 66
    captions_per_minute: float = 0.5
    marker_rate: float = 1.0
    boundary_jitter_seconds: int = 0
    min_chapter_gap: int = 30
    speech_interval: tuple[int, int] = (3, 4)

    def __post_init__(self) -> None:
        lo, hi = self.duration_range
        clo, chi = self.chapters_per_video
        if not (0 < lo <= hi) or not (1 <= clo <= chi):
            raise ConfigError("duration and chapter ranges must be non-empty and positive")
        if not 0.0 <= self.marker_rate <= 1.0:
            raise ConfigError("marker_rate must lie in [0, 1]")
        if self.num_videos < 0 or self.captions_per_minute < 0:
            raise ConfigError("counts and rates must be non-negative")
        if clo * self.min_chapter_gap > lo:
            raise ConfigError(
                f"{clo} chapters at {self.min_chapter_gap}s spacing do not fit a {lo}s video"
            )
        if self.boundary_jitter_seconds < 0 or 2 * self.boundary_jitter_seconds >= self.min_chapter_gap:
            raise ConfigError("jitter must be non-negative and under half the chapter gap")
        a, b = self.speech_interval
        if not 1 <= a <= b:
            raise ConfigError("speech_interval must be a positive range")


@dataclass
class SynthVideo:
    doc: VideoDocument
    chapters: ChapterSet
    marker_times: tuple[int, ...]
    marked: tuple[bool, ...]
    asr_records: list[dict] = field(repr=False, default_factory=list)
    caption_records: list[dict] = field(repr=False, default_factory=list)

    @property
    def video_id(self) -> str:
        return self.doc.video_id

    @property
    def marked_chapters(self) -> ChapterSet:
        """The chapter set a perfect marker reader recovers (jittered starts)."""
        pairs = [
            (t, c.title) for t, c, m in zip(self.marker_times, self.chapters, self.marked) if m
        ]
        return ChapterSet.from_pairs(pairs, self.chapters.duration)


def video_seed(seed: int, index: int) -> int:
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _word(rng: random.Random) -> str:
    return "".join(
        rng.choice(_ONSETS) + rng.choice(_VOWELS) + rng.choice(_CODAS)
        for _ in range(rng.randint(1, 3))
    )


def _filler(rng: random.Random, length: int, lead: str = "") -> str:
    words = [lead] if lead else []
    size = len(lead)
    while size < length:
        w = _word(rng)
        words.append(w)
        size += len(w) + (1 if size else 0)
    return " ".join(words)


def _title(rng: random.Random, taken: set[str]) -> str:
    while True:
        title = " ".join(_word(rng).capitalize() for _ in range(rng.randint(2, 5)))
        if title not in taken:
            taken.add(title)
            return title


def _chapter_starts(rng: random.Random, duration: int, n: int, gap: int) -> list[int]:
    slack = duration - n * gap
    offsets = sorted(rng.randint(0, slack) for _ in range(n - 1))
    return [0] + [(i + 1) * gap + u for i, u in enumerate(offsets)]


def synth_video(cfg: SynthConfig, index: int) -> SynthVideo:
    rng = random.Random(video_seed(cfg.seed, index))
    video_id = f"synth-{cfg.seed}-{index:04d}"
    duration = rng.randint(*cfg.duration_range)
    lo, hi = cfg.chapters_per_video
    n = min(rng.randint(lo, hi), duration // cfg.min_chapter_gap)
    starts = _chapter_starts(rng, duration, n, cfg.min_chapter_gap)
    taken: set[str] = set()
    titles = [_title(rng, taken) for _ in starts]
    jitter = cfg.boundary_jitter_seconds
    markers = [0] + [s + rng.randint(-jitter, jitter) for s in starts[1:]]
    marked = [rng.random() < cfg.marker_rate for _ in starts]

    asr: list[dict] = []
    utterances: list[TimedUtterance] = []
    a, b = cfg.speech_interval
    bounds = markers[1:] + [duration]
    for i, (t, stop) in enumerate(zip(markers, bounds)):
        first = True
        while t < stop:
            nxt = min(t + rng.randint(a, b), duration)
            if first and marked[i]:
                text = f"{MARKER} {titles[i]}"
            else:
                target = 4 * cfg.speech_tokens_per_minute * (nxt - t) / 60
                text = _filler(rng, max(4, round(target) - _SPEECH_PREFIX_BYTES - _LENGTH_BIAS))
            first = False
            frac = rng.randint(0, 9) / 10
            end = max(t, nxt - 1)
            asr.append({"start": t + frac, "end": max(end + 0.7, t + frac), "text": text})
            utterances.append(TimedUtterance(Modality.SPEECH, t, text, end=end))
            t = nxt

    caption_times = list(markers)
    extras = round(cfg.captions_per_minute * duration / 60)
    caption_times += [rng.randrange(duration) for _ in range(extras)]
    caption_times.sort()
    captions: list[dict] = []
    cap_len = max(8, 4 * cfg.caption_tokens - _CAPTION_PREFIX_BYTES - _LENGTH_BIAS)
    for t in caption_times:
        text = _filler(rng, cap_len, lead="The image shows")
        captions.append({"time": t, "text": text})
        utterances.append(TimedUtterance(Modality.CAPTION, t, text))

    doc = VideoDocument.build(video_id, duration, utterances)
    chapters = ChapterSet(tuple(Chapter(s, t) for s, t in zip(starts, titles)), duration)
    return SynthVideo(doc, chapters, tuple(markers), tuple(marked), asr, captions)


def generate_corpus(cfg: SynthConfig) -> list[SynthVideo]:
    """Deterministic for a fixed ``cfg``; videos are independent given the seed."""
    return [synth_video(cfg, i) for i in range(cfg.num_videos)]


def _jsonl(records: list[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)


def write_corpus(videos: list[SynthVideo], out_dir: str | Path) -> Path:
    """Write ASR/caption/chapter files plus ``manifest.jsonl``; return its path."""
    out = Path(out_dir)
    entries = []
    for v in videos:
        vid = v.video_id
        atomic_write_text(out / f"{vid}.asr.jsonl", _jsonl(v.asr_records))
        atomic_write_text(out / f"{vid}.captions.jsonl", _jsonl(v.caption_records))
        atomic_write_text(out / f"{vid}.chapters.txt", write_chapters(v.chapters))
        entries.append(
            ManifestEntry(
                vid,
                v.doc.duration,
                Path(f"{vid}.asr.jsonl"),
                Path(f"{vid}.captions.jsonl"),
                Path(f"{vid}.chapters.txt"),
            )
        )
    manifest = out / "manifest.jsonl"
    atomic_write_text(manifest, _jsonl([e.to_json() for e in entries]))
    return manifest

