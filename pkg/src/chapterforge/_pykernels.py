"""Pure-Python matching kernels.

Reference implementation and import-time fallback for ``_ckernels``. Both
modules expose the same functions with identical results.
"""

from __future__ import annotations

from typing import Sequence

Span = tuple[int, int]


def interval_iou(a_begin: int, a_end: int, b_begin: int, b_end: int) -> float:
    inter = min(a_end, b_end) - max(a_begin, b_begin)
    if inter <= 0:
        return 0.0
    union = max(a_end, b_end) - min(a_begin, b_begin)
    return inter / union


def greedy_match(
    pred: Sequence[Span], gt: Sequence[Span], include_zero: bool = False
) -> list[tuple[int, int, float]]:
    """Greedy one-to-one matching by descending IoU.

    Returns ``(gt_index, pred_index, iou)`` triples in selection order. Ties
    go to the earlier gt span, then the earlier pred span (then list index),
    so the result does not depend on input order. Zero-overlap pairs are
    only matched when ``include_zero`` is set.
    """
    candidates = []
    for gi, (gb, ge) in enumerate(gt):
        for pi, (pb, pe) in enumerate(pred):
            v = interval_iou(pb, pe, gb, ge)
            if v > 0.0 or include_zero:
                candidates.append((-v, gb, pb, gi, pi))
    candidates.sort()

    used_gt = [False] * len(gt)
    used_pred = [False] * len(pred)
    limit = min(len(gt), len(pred))
    out: list[tuple[int, int, float]] = []
    for neg, _, _, gi, pi in candidates:
        if used_gt[gi] or used_pred[pi]:
            continue
        used_gt[gi] = used_pred[pi] = True
        out.append((gi, pi, -neg))
        if len(out) == limit:
            break
    return out


def match_boundaries(
    pred: Sequence[int], gt: Sequence[int], max_distance: int
) -> list[tuple[int, int, int]]:
    """Greedy one-to-one matching of time points by smallest ``|pred - gt|``.

    Only pairs within ``max_distance`` are eligible; ties go to the earlier
    gt time, then the earlier pred time. Returns
    ``(gt_index, pred_index, distance)`` in selection order.
    """
    candidates = []
    for gi, g in enumerate(gt):
        for pi, p in enumerate(pred):
            d = abs(p - g)
            if d <= max_distance:
                candidates.append((d, g, p, gi, pi))
    candidates.sort()

    used_gt = [False] * len(gt)
    used_pred = [False] * len(pred)
    out: list[tuple[int, int, int]] = []
    for d, _, _, gi, pi in candidates:
        if used_gt[gi] or used_pred[pi]:
            continue
        used_gt[gi] = used_pred[pi] = True
        out.append((gi, pi, d))
    return out
