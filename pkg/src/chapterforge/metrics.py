"""Segmentation and auxiliary chaptering metrics.

tIoU and threshold-averaged F1 over greedily matched segments, precision and
recall at boundary distances and at IoU thresholds, title repetition ratio,
chapter-count delta and a token-overlap title score. ``title_token_f1`` is
local to this package and not comparable to published caption metrics.
"""

from __future__ import annotations

import statistics
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

from . import kernels
from .model import ChapterSet, Segment, segments_of

F1_THRESHOLDS: tuple[float, ...] = tuple(round(0.5 + 0.05 * k, 2) for k in range(10))
BOUNDARY_DELTAS: tuple[int, ...] = (3, 5)
IOU_POINTS: tuple[float, ...] = (0.5, 0.7)


@dataclass(frozen=True)
class MatchedPair:
    gt_index: int
    pred_index: int
    iou: float


def _spans(segments: Sequence[Segment]) -> list[tuple[int, int]]:
    return [(s.begin, s.end) for s in segments]


def greedy_match(
    pred: Sequence[Segment], gt: Sequence[Segment], *, include_zero: bool = False
) -> list[MatchedPair]:
    """Match segments one-to-one, highest IoU first.

    Ties break on the earlier gt segment, then the earlier pred segment, which
    for time-ordered segments is the lower index. Pairs with
    no overlap are left unmatched unless ``include_zero`` is set.
    """
    raw = kernels.greedy_match(_spans(pred), _spans(gt), include_zero)
    return [MatchedPair(g, p, v) for g, p, v in raw]


def match_chapters(
    pred: ChapterSet, gt: ChapterSet, *, include_zero: bool = False
) -> list[MatchedPair]:
    return greedy_match(segments_of(pred), segments_of(gt), include_zero=include_zero)


def tiou(pred: ChapterSet, gt: ChapterSet, *, include_zero: bool = False) -> float:
    """Mean IoU over matched pairs, as a percentage (0 when nothing matches)."""
    pairs = match_chapters(pred, gt, include_zero=include_zero)
    if not pairs:
        return 0.0
    return 100.0 * sum(p.iou for p in pairs) / len(pairs)


def _pr_from_pairs(
    pairs: Sequence[MatchedPair], n_pred: int, n_gt: int, tau: float
) -> tuple[float, float]:
    correct = sum(1 for p in pairs if p.iou >= tau)
    precision = correct / n_pred if n_pred else 0.0
    recall = correct / n_gt if n_gt else 0.0
    return precision, recall


def _harmonic(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def f1_per_threshold(
    pred: ChapterSet, gt: ChapterSet, *, include_zero: bool = False
) -> list[float]:
    """F1 (as a fraction) at each of the ten IoU thresholds 0.50..0.95."""
    pairs = match_chapters(pred, gt, include_zero=include_zero)
    return [
        _harmonic(*_pr_from_pairs(pairs, len(pred), len(gt), tau)) for tau in F1_THRESHOLDS
    ]


def f1(pred: ChapterSet, gt: ChapterSet, *, include_zero: bool = False) -> float:
    per = f1_per_threshold(pred, gt, include_zero=include_zero)
    return 100.0 * sum(per) / len(per)


def segment_pr_at_iou(
    pred: ChapterSet, gt: ChapterSet, tau: float, *, include_zero: bool = False
) -> tuple[float, float]:
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"IoU threshold must lie in (0, 1], got {tau}")
    pairs = match_chapters(pred, gt, include_zero=include_zero)
    return _pr_from_pairs(pairs, len(pred), len(gt), tau)


def boundary_pr(pred: ChapterSet, gt: ChapterSet, delta_seconds: int) -> tuple[float, float]:
    """Precision/recall of chapter starts matched within ``delta_seconds``.

    An empty prediction scores ``(0.0, 0.0)``.
    """
    if delta_seconds <= 0:
        raise ValueError(f"delta must be positive, got {delta_seconds}")
    if pred.is_empty or gt.is_empty:
        return 0.0, 0.0
    matches = kernels.match_boundaries(list(pred.starts), list(gt.starts), delta_seconds)
    return len(matches) / len(pred), len(matches) / len(gt)


def repetition_ratio(cs: ChapterSet) -> float:
    """Unique titles over total titles; case-sensitive after trimming."""
    if cs.is_empty:
        raise ValueError("repetition ratio undefined for an empty chapter set")
    return len(set(cs.titles)) / len(cs)


def count_delta(pred: ChapterSet, gt: ChapterSet) -> int:
    return len(pred) - len(gt)


def _title_tokens(title: str) -> set[str]:
    return set(title.lower().split())


def title_token_f1(
    pred: ChapterSet, gt: ChapterSet, pairs: Sequence[MatchedPair] | None = None
) -> float:
    """Mean token-set F1 between titles of matched chapters (0 without pairs).

    Package-local stand-in for caption metrics; not comparable to them.
    """
    if pairs is None:
        pairs = match_chapters(pred, gt)
    if not pairs:
        return 0.0
    total = 0.0
    for p in pairs:
        a = _title_tokens(pred.chapters[p.pred_index].title)
        b = _title_tokens(gt.chapters[p.gt_index].title)
        common = len(a & b)
        if common:
            precision, recall = common / len(a), common / len(b)
            total += 2 * precision * recall / (precision + recall)
    return total / len(pairs)


@dataclass
class MetricsReport:
    tiou: float
    f1: float
    pr_at_seconds: dict[str, dict[str, float]]
    pr_at_iou: dict[str, dict[str, float]]
    repetition_ratio: float
    count_delta: int
    title_token_f1: float
    empty_prediction: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def _pr_dict(pr: tuple[float, float]) -> dict[str, float]:
    return {"precision": pr[0], "recall": pr[1]}


def evaluate(pred: ChapterSet, gt: ChapterSet, *, include_zero: bool = False) -> MetricsReport:
    """Full metric suite for one video."""
    pairs = match_chapters(pred, gt, include_zero=include_zero)
    n_pred, n_gt = len(pred), len(gt)
    per_tau = [_harmonic(*_pr_from_pairs(pairs, n_pred, n_gt, t)) for t in F1_THRESHOLDS]
    return MetricsReport(
        tiou=100.0 * sum(p.iou for p in pairs) / len(pairs) if pairs else 0.0,
        f1=100.0 * sum(per_tau) / len(per_tau),
        pr_at_seconds={f"{d}s": _pr_dict(boundary_pr(pred, gt, d)) for d in BOUNDARY_DELTAS},
        pr_at_iou={
            f"{t}": _pr_dict(_pr_from_pairs(pairs, n_pred, n_gt, t)) for t in IOU_POINTS
        },
        repetition_ratio=repetition_ratio(pred) if n_pred else 0.0,
        count_delta=count_delta(pred, gt),
        title_token_f1=title_token_f1(pred, gt, pairs),
        empty_prediction=n_pred == 0,
    )


@dataclass
class CorpusSummary:
    n_videos: int
    mean: dict[str, float] = field(default_factory=dict)
    median: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _flatten(report: MetricsReport) -> dict[str, float]:
    flat: dict[str, float] = {"tiou": report.tiou, "f1": report.f1}
    for key, pr in report.pr_at_seconds.items():
        flat[f"precision@{key}"] = pr["precision"]
        flat[f"recall@{key}"] = pr["recall"]
    for key, pr in report.pr_at_iou.items():
        flat[f"precision@{key}"] = pr["precision"]
        flat[f"recall@{key}"] = pr["recall"]
    flat["repetition_ratio"] = report.repetition_ratio
    flat["count_delta"] = float(report.count_delta)
    flat["title_token_f1"] = report.title_token_f1
    return flat


def summarize(reports: Iterable[MetricsReport]) -> CorpusSummary:
    """Corpus means and medians of every scalar metric, in a fixed key order."""
    flats = [_flatten(r) for r in reports]
    if not flats:
        return CorpusSummary(0)
    keys = list(flats[0])
    return CorpusSummary(
        n_videos=len(flats),
        mean={k: statistics.fmean(f[k] for f in flats) for k in keys},
        median={k: float(statistics.median(f[k] for f in flats)) for k in keys},
    )
