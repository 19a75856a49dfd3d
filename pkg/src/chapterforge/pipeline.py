"""Per-video and corpus chaptering runs, as driven by the ``chapter`` command."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from ._atomic import atomic_write_text
from .config import CliConfig
from .errors import ChapterForgeError
from .generate import WindowingConfig, chapter_video, write_chapters
from .ingest import ManifestEntry, load_document
from .model import ChapterSet, Modality, VideoDocument
from .select import select_from_boundaries, select_no_speech_fallback, splice_captions

log = logging.getLogger(__name__)


@dataclass
class VideoResult:
    video_id: str
    duration: int
    chapters: ChapterSet | None = None
    report: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def two_stage_document(doc: VideoDocument, cfg: CliConfig, backend) -> tuple[VideoDocument, dict]:
    """Speech-only pass, frame plan from its boundaries, captions spliced in."""
    speech = doc.of(Modality.SPEECH)
    pool = doc.of(Modality.CAPTION)
    info: dict = {}
    if speech:
        speech_doc = VideoDocument.build(doc.video_id, doc.duration, speech)
        opts = replace(cfg.prompt_options(), include_speech=True, include_captions=False)
        stage1, rep = chapter_video(
            speech_doc,
            opts,
            backend,
            WindowingConfig(cfg.window_tokens),
            mode=cfg.mode,
            max_output_tokens=cfg.backend.max_output_tokens,
            temperature=cfg.backend.temperature,
        )
        plan = select_from_boundaries(stage1)
        info["speech_pass"] = rep.to_dict()
    else:
        plan = select_no_speech_fallback(doc.duration, doc)
        info["note"] = "no speech: fallback frame plan every 10 s"
    info["frame_plan"] = {"strategy": plan.strategy.value, "frames": len(plan)}
    captions = splice_captions(pool, plan)
    if not pool:
        info["caption_pool"] = "empty"
    return VideoDocument.build(doc.video_id, doc.duration, speech + captions), info


def run_video(entry: ManifestEntry, cfg: CliConfig, backend) -> VideoResult:
    result = VideoResult(entry.video_id, entry.duration)
    try:
        doc = load_document(entry)
        extra: dict = {}
        if cfg.two_stage:
            doc, extra = two_stage_document(doc, cfg, backend)
        chapters, report = chapter_video(
            doc,
            cfg.prompt_options(),
            backend,
            WindowingConfig(cfg.window_tokens),
            mode=cfg.mode,
            max_output_tokens=cfg.backend.max_output_tokens,
            temperature=cfg.backend.temperature,
        )
        result.chapters = chapters
        result.report = {**report.to_dict(), **extra}
    except (ChapterForgeError, OSError) as exc:
        result.error = f"{type(exc).__name__}: {exc}"
        window = getattr(exc, "window_index", None)
        result.report = {"video_id": entry.video_id, "error": result.error}
        if window is not None:
            result.report["window_index"] = window
        log.error("%s: %s", entry.video_id, result.error)
    return result


def run_corpus(
    entries: list[ManifestEntry],
    cfg: CliConfig,
    backend,
    out_dir: str | Path,
    jobs: int = 1,
) -> list[VideoResult]:
    """Chapter every manifest entry and write per-video outputs atomically.

    Writes ``<id>.chapters.txt`` for successes, ``<id>.report.json`` for all,
    and a ``manifest.jsonl`` pointing at the predicted chapter files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda e: run_video(e, cfg, backend), entries))

    manifest_rows = []
    for r in results:
        if r.chapters is not None:
            atomic_write_text(out / f"{r.video_id}.chapters.txt", write_chapters(r.chapters))
        atomic_write_text(
            out / f"{r.video_id}.report.json", json.dumps(r.report, indent=2, sort_keys=True) + "\n"
        )
        manifest_rows.append(
            ManifestEntry(
                r.video_id,
                r.duration,
                chapters=Path(f"{r.video_id}.chapters.txt") if r.ok else None,
            ).to_json()
        )
    atomic_write_text(out / "manifest.jsonl", "".join(json.dumps(row) + "\n" for row in manifest_rows))
    return results
