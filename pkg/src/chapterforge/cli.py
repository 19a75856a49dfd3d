"""Command line for chapterforge: synth, prompt, select-frames, chapter, eval.

Exit codes: 0 success, 1 some videos failed, 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import metrics
from ._atomic import atomic_write_text
from .config import apply_overrides, load_config
from .errors import ChapterForgeError, ConfigError
from .ingest import load_chapters, load_document, load_manifest
from .model import ChapterSet
from .prompt import PromptOptions, build_prompt, build_transcript, transcript_text
from .select import (
    load_shot_boundaries,
    select_equidistant,
    select_every_k,
    select_from_boundaries,
    select_no_speech_fallback,
)
from .synth import SynthConfig, generate_corpus, write_corpus

log = logging.getLogger("chapterforge")

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write_text(Path(out), text)
    else:
        sys.stdout.write(text)


def cmd_synth(args: argparse.Namespace) -> int:
    cfg = SynthConfig(
        seed=args.seed,
        num_videos=args.num_videos,
        duration_range=(args.min_duration, args.max_duration),
        chapters_per_video=(args.min_chapters, args.max_chapters),
        marker_rate=args.marker_rate,
        boundary_jitter_seconds=args.jitter,
        captions_per_minute=args.captions_per_minute,
    )
    manifest = write_corpus(generate_corpus(cfg), args.out)
    log.info("wrote %d videos, manifest %s", cfg.num_videos, manifest)
    return EXIT_OK


def cmd_prompt(args: argparse.Namespace) -> int:
    entries = load_manifest(args.manifest)
    if args.video_id:
        entries = [e for e in entries if e.video_id == args.video_id]
        if not entries:
            raise ConfigError(f"video id {args.video_id!r} not in manifest")
    doc = load_document(entries[0])
    opts = PromptOptions(
        include_speech=not args.captions_only,
        include_captions=not args.speech_only,
        modality_prefixes=not args.no_prefixes,
        include_asr_end=args.asr_end,
    )
    lines = build_transcript(doc, opts)
    _emit(build_prompt(doc, transcript_text(lines), opts), args.out)
    return EXIT_OK


def cmd_select_frames(args: argparse.Namespace) -> int:
    duration = args.duration
    if args.strategy == "equidistant":
        plan = select_equidistant(duration, args.n)
    elif args.strategy == "every-k":
        plan = select_every_k(duration, args.k)
    elif args.strategy == "speech":
        if not args.chapters:
            raise ConfigError("--strategy speech needs --chapters")
        plan = select_from_boundaries(load_chapters(args.chapters, duration))
    elif args.strategy == "shots":
        if not args.shots:
            raise ConfigError("--strategy shots needs --shots")
        plan = load_shot_boundaries(args.shots, duration)
    else:
        plan = select_no_speech_fallback(duration)
    _emit(plan.to_jsonl(), args.out)
    return EXIT_OK


def cmd_chapter(args: argparse.Namespace) -> int:
    from .pipeline import run_corpus

    cfg = apply_overrides(
        load_config(args.config),
        backend_kind=args.backend,
        window_tokens=args.window_tokens,
        two_stage=True if args.two_stage else None,
        mode=args.mode,
        jobs=args.jobs,
        seed=args.seed,
    )
    log.info("resolved config: %s", json.dumps(cfg.to_dict(), sort_keys=True))
    backend = cfg.make_backend()
    entries = load_manifest(args.manifest)
    jobs = cfg.jobs or os.cpu_count() or 1
    results = run_corpus(entries, cfg, backend, args.out, jobs=jobs)
    failed = [r.video_id for r in results if not r.ok]
    log.info("chaptered %d/%d videos", len(results) - len(failed), len(results))
    return EXIT_PARTIAL if failed else EXIT_OK


def _load_side(path: str, duration: int | None) -> dict[str, ChapterSet | None]:
    """Map video id to chapters from a manifest, or a lone chapter file."""
    p = Path(path)
    if p.suffix == ".jsonl":
        out: dict[str, ChapterSet | None] = {}
        for e in load_manifest(p):
            out[e.video_id] = None if e.chapters is None else load_chapters(e.chapters, e.duration)
        return out
    if duration is None:
        raise ConfigError(f"{path}: a single chapter file needs --duration")
    return {p.name.split(".")[0]: load_chapters(p, duration)}


def evaluate_sides(
    pred: dict[str, ChapterSet | None],
    gt: dict[str, ChapterSet | None],
    *,
    include_zero: bool = False,
) -> dict:
    missing_pred = [v for v in gt if v not in pred]
    missing_gt = [v for v in pred if v not in gt]
    if missing_pred or missing_gt:
        raise ConfigError(
            f"video id mismatch; missing predictions: {missing_pred}, missing ground truth: {missing_gt}"
        )
    videos = {}
    reports = []
    for vid, truth in gt.items():
        if truth is None:
            raise ConfigError(f"{vid}: ground-truth manifest entry has no chapters file")
        guess = pred[vid] if pred[vid] is not None else ChapterSet((), truth.duration)
        report = metrics.evaluate(guess, truth, include_zero=include_zero)
        videos[vid] = report.to_dict()
        reports.append(report)
    return {"videos": videos, "corpus": metrics.summarize(reports).to_dict()}


def cmd_eval(args: argparse.Namespace) -> int:
    pred = _load_side(args.pred, args.duration)
    gt = _load_side(args.gt, args.duration)
    if Path(args.pred).suffix != ".jsonl" and Path(args.gt).suffix != ".jsonl":
        # Two lone files: compare them regardless of file names.
        pred = {next(iter(gt)): next(iter(pred.values()))}
    result = evaluate_sides(pred, gt, include_zero=args.include_zero)
    _emit(json.dumps(result, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chapterforge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic chaptered corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num-videos", type=int, default=10)
    p.add_argument("--min-duration", type=int, default=300)
    p.add_argument("--max-duration", type=int, default=1200)
    p.add_argument("--min-chapters", type=int, default=3)
    p.add_argument("--max-chapters", type=int, default=13)
    p.add_argument("--marker-rate", type=float, default=1.0)
    p.add_argument("--jitter", type=int, default=0)
    p.add_argument("--captions-per-minute", type=float, default=0.5)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("prompt", help="print the prompt for one manifest video")
    p.add_argument("--manifest", required=True)
    p.add_argument("--video-id")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--speech-only", action="store_true")
    group.add_argument("--captions-only", action="store_true")
    p.add_argument("--no-prefixes", action="store_true")
    p.add_argument("--asr-end", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_prompt)

    p = sub.add_parser("select-frames", help="emit a JSONL frame plan")
    p.add_argument(
        "--strategy",
        required=True,
        choices=["equidistant", "every-k", "speech", "shots", "no-speech"],
    )
    p.add_argument("--duration", type=int, required=True)
    p.add_argument("-n", type=int, default=100)
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--chapters", help="predicted chapter file (speech strategy)")
    p.add_argument("--shots", help="shot-boundary JSONL (shots strategy)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_select_frames)

    p = sub.add_parser("chapter", help="chapter every video in a manifest")
    p.add_argument("--config")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--backend", choices=["mock", "http"])
    p.add_argument("--window-tokens", type=int)
    p.add_argument("--two-stage", action="store_true")
    p.add_argument("--mode", choices=["iterative", "first"])
    p.add_argument("--jobs", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_chapter)

    p = sub.add_parser("eval", help="score predicted chapters against ground truth")
    p.add_argument("--pred", required=True, help="manifest (.jsonl) or chapter file")
    p.add_argument("--gt", required=True, help="manifest (.jsonl) or chapter file")
    p.add_argument("--duration", type=int, help="video duration for single chapter files")
    p.add_argument("--include-zero", action="store_true", help="allow zero-IoU matches")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (ChapterForgeError, OSError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
