"""Frame plans: the timestamps at which frames would be captioned."""

from __future__ import annotations

import bisect
import enum
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import MisuseError, ParseError, ValidationError
from .ingest import _iter_jsonl, _seconds
from .model import ChapterSet, Modality, TimedUtterance, VideoDocument

log = logging.getLogger(__name__)

MAX_FRAMES = 100
FALLBACK_INTERVAL = 10


class Strategy(enum.Enum):
    EQUIDISTANT = "equidistant"
    EVERY_K = "every-k"
    SHOT_BOUNDARIES = "shots"
    SPEECH_BASED = "speech"
    NO_SPEECH_FALLBACK = "no-speech-fallback"


@dataclass(frozen=True)
class FramePlan:
    timestamps: tuple[int, ...]
    strategy: Strategy
    param: int | None = None
    dropped: int = 0

    def __post_init__(self) -> None:
        ts = self.timestamps
        if len(ts) > MAX_FRAMES:
            raise ValidationError(f"plan has {len(ts)} frames, cap is {MAX_FRAMES}")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValidationError("plan timestamps not strictly increasing")

    def __len__(self) -> int:
        return len(self.timestamps)

    @property
    def is_empty(self) -> bool:
        return not self.timestamps

    def to_jsonl(self) -> str:
        return "".join(f'{{"time": {t}}}\n' for t in self.timestamps)


def _plan(times: Iterable[int], duration: int, strategy: Strategy, param=None, dropped=0) -> FramePlan:
    kept = sorted({t for t in times if 0 <= t < duration})
    return FramePlan(tuple(kept[:MAX_FRAMES]), strategy, param, dropped)


def select_equidistant(duration: int, n: int) -> FramePlan:
    """Midpoints of ``n`` equal intervals, ``floor(duration * (i + 0.5) / n)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    times = ((duration * (2 * i + 1)) // (2 * n) for i in range(n))
    return _plan(times, duration, Strategy.EQUIDISTANT, n)


def select_every_k(duration: int, k: int) -> FramePlan:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    count = min(MAX_FRAMES, math.ceil(duration / k)) if duration > 0 else 0
    return _plan((i * k for i in range(count)), duration, Strategy.EVERY_K, k)


def select_from_boundaries(predicted: ChapterSet) -> FramePlan:
    """One frame at each predicted chapter start (earliest 100 kept)."""
    return _plan(predicted.starts, predicted.duration, Strategy.SPEECH_BASED)


def select_no_speech_fallback(duration: int, doc: VideoDocument | None = None) -> FramePlan:
    """Every 10 s, capped at 100 frames, for videos without speech."""
    if doc is not None and doc.has(Modality.SPEECH):
        raise MisuseError(f"{doc.video_id}: no-speech fallback requested for a video with speech")
    plan = select_every_k(duration, FALLBACK_INTERVAL)
    return FramePlan(plan.timestamps, Strategy.NO_SPEECH_FALLBACK, FALLBACK_INTERVAL)


def load_shot_boundaries(path: str | Path, duration: int) -> FramePlan:
    path = Path(path)
    times: list[int] = []
    dropped = 0
    for index, _, obj in _iter_jsonl(path):
        t = math.floor(_seconds(obj, "time", index, path))
        if t >= duration:
            dropped += 1
            continue
        times.append(t)
    plan = _plan(times, duration, Strategy.SHOT_BOUNDARIES, dropped=dropped)
    if plan.is_empty:
        log.warning("%s: shot-boundary file yielded an empty plan", path)
    return plan


def parse_plan_jsonl(text: str) -> list[int]:
    out = []
    for i, line in enumerate(text.splitlines()):
        if line.strip():
            obj = json.loads(line)
            if not isinstance(obj, dict) or not isinstance(obj.get("time"), int):
                raise ParseError("plan record needs an integer 'time'", record=i)
            out.append(obj["time"])
    return out


def splice_captions(pool: list[TimedUtterance], plan: FramePlan) -> list[TimedUtterance]:
    """Place one caption at each planned timestamp.

    Captioning is external, so ``pool`` stands in for the captioner: each
    planned time takes the text of the nearest pooled caption (earlier wins
    ties), re-timed to the planned second.
    """
    if not pool:
        return []
    times = [u.start for u in pool]
    out = []
    for t in plan.timestamps:
        i = bisect.bisect_left(times, t)
        best = None
        for j in (i - 1, i):
            if 0 <= j < len(pool) and (best is None or abs(times[j] - t) < abs(times[best] - t)):
                best = j
        out.append(TimedUtterance(Modality.CAPTION, t, pool[best].text))
    return out
