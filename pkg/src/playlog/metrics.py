"""Detector and classifier scoring: focal loss, AP/AR, confusion matrices."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import BoundingBox, InvariantError
from .matching import SizeBucket, match_detections, size_bucket

PROB_FLOOR = 1e-12  # keeps log() off exact zeros

# AP protocol constants: IoU sweep 0.50..0.95 step 0.05, 101-point recall
# grid, at most 100 detections scored per frame.
IOU_THRESHOLDS: tuple[float, ...] = tuple(round(0.50 + 0.05 * i, 2) for i in range(10))
RECALL_GRID: tuple[float, ...] = tuple(i / 100 for i in range(101))
MAX_DETECTIONS = 100

PROB_SUM_TOL = 1e-6


class DegenerateMetricWarning(UserWarning):
    """A metric had a zero denominator and was pinned to 0."""


@dataclass(frozen=True)
class ClassDistribution:
    """A predicted probability vector with its true class and focusing power."""

    probs: tuple[float, ...]
    true_index: int
    gamma: float = 2.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if len(self.probs) < 2:
            raise InvariantError("ClassDistribution needs at least 2 classes")
        for p in self.probs:
            if not (0.0 <= p <= 1.0):
                raise InvariantError(f"ClassDistribution probability in [0, 1] violated (got {p!r})")
        total = sum(self.probs)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise InvariantError(f"ClassDistribution probabilities must sum to 1 (got {total!r})")
        if not (0 <= self.true_index < len(self.probs)):
            raise InvariantError(
                f"ClassDistribution.true_index in 0..{len(self.probs) - 1} violated (got {self.true_index})"
            )
        if not (isinstance(self.gamma, (int, float)) and self.gamma >= 0):
            raise InvariantError(f"ClassDistribution.gamma >= 0 violated (got {self.gamma!r})")


def focal_loss(dist: ClassDistribution) -> float:
    """Cross entropy on the true class, down-weighted by (1 - p)**gamma.

    With gamma = 0 this is plain cross entropy; larger gamma shrinks the
    loss of well-classified examples.  The probability is floored at 1e-12
    before the log.
    """
    p = max(dist.probs[dist.true_index], PROB_FLOOR)
    return -math.log(p) * (1.0 - p) ** dist.gamma


@dataclass(frozen=True)
class PrCurve:
    """Cumulative (recall, precision) points in ranked-score order."""

    points: tuple[tuple[float, float], ...]
    num_gt: int

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "points", tuple((float(r), float(p)) for r, p in self.points)
        )
        if not (isinstance(self.num_gt, int) and self.num_gt >= 0):
            raise InvariantError(f"PrCurve.num_gt >= 0 violated (got {self.num_gt!r})")
        prev_r = 0.0
        for r, p in self.points:
            if not (0.0 <= r <= 1.0 and 0.0 <= p <= 1.0):
                raise InvariantError(f"PrCurve point out of [0, 1] (got {(r, p)!r})")
            if r < prev_r:
                raise InvariantError("PrCurve recall must be non-decreasing")
            prev_r = r


def average_precision(curve: PrCurve) -> float:
    """101-point interpolated AP.

    Mean over the recall grid {0.00, 0.01, .., 1.00} of the best precision
    achieved at or beyond each grid recall.  With no ground truth the value
    is 0 and a DegenerateMetricWarning is emitted.
    """
    if curve.num_gt == 0:
        warnings.warn("average_precision with num_gt = 0 pinned to 0", DegenerateMetricWarning)
        return 0.0
    total = 0.0
    for g in RECALL_GRID:
        best = 0.0
        for r, p in curve.points:
            if r >= g and p > best:
                best = p
        total += best
    return total / len(RECALL_GRID)


def prf1(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """Precision, recall, F1 from match counts.

    Zero-denominator cases return 0 for the affected value and emit a
    DegenerateMetricWarning.
    """
    for name, v in (("tp", tp), ("fp", fp), ("fn", fn)):
        if not (isinstance(v, int) and v >= 0):
            raise InvariantError(f"prf1 {name} must be a non-negative integer (got {v!r})")
    if tp + fp > 0:
        precision = tp / (tp + fp)
    else:
        warnings.warn("precision with tp + fp = 0 pinned to 0", DegenerateMetricWarning)
        precision = 0.0
    if tp + fn > 0:
        recall = tp / (tp + fn)
    else:
        warnings.warn("recall with tp + fn = 0 pinned to 0", DegenerateMetricWarning)
        recall = 0.0
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        warnings.warn("f1 with precision + recall = 0 pinned to 0", DegenerateMetricWarning)
        f1 = 0.0
    return precision, recall, f1


_REPORT_ROWS = (
    ("AP_{0.5:0.95}", "ap_range"),
    ("AP_{0.50}", "ap_50"),
    ("AP_{0.75}", "ap_75"),
    ("AP_small", "ap_small"),
    ("AP_large", "ap_large"),
    ("AR_small", "ar_small"),
    ("AR_large", "ar_large"),
)


@dataclass(frozen=True)
class EvalReport:
    """Detection quality summary over an IoU sweep and size buckets."""

    ap_range: float
    ap_50: float
    ap_75: float
    ap_small: float
    ap_large: float
    ar_small: float
    ar_large: float

    def __post_init__(self) -> None:
        for _, attr in _REPORT_ROWS:
            v = getattr(self, attr)
            if not (isinstance(v, (int, float)) and 0.0 <= v <= 1.0):
                raise InvariantError(f"EvalReport.{attr} in [0, 1] violated (got {v!r})")

    def to_text(self) -> str:
        """Flat key-value block, one metric per line."""
        return "".join(f"{name} {getattr(self, attr):.6f}\n" for name, attr in _REPORT_ROWS)


def _global_rank(preds: Mapping[int, Sequence[tuple[BoundingBox, float]]]) -> list[tuple[int, int]]:
    # Deterministic cross-frame ranking: score desc, then frame, then index.
    entries = [
        (f, i)
        for f in sorted(preds)
        for i in range(len(preds[f]))
    ]
    entries.sort(key=lambda fi: (-preds[fi[0]][fi[1]][1], fi[0], fi[1]))
    return entries


def _ap_from_flags(flags: Sequence[bool], num_gt: int) -> float:
    tp = 0
    points = []
    for rank, is_tp in enumerate(flags, start=1):
        if is_tp:
            tp += 1
        points.append((tp / num_gt if num_gt else 0.0, tp / rank))
    return average_precision(PrCurve(tuple(points), num_gt))


def evaluate_detections(
    preds: Mapping[int, Sequence[tuple[BoundingBox, float]]],
    gts: Mapping[int, Sequence[BoundingBox]],
    *,
    iou_thresholds: Sequence[float] = IOU_THRESHOLDS,
    max_detections: int = MAX_DETECTIONS,
) -> EvalReport:
    """Score per-frame detections against per-frame ground truth.

    Both mappings must cover exactly the same frames.  Ground-truth boxes
    below the excluded-area floor are removed before scoring.  A matched
    prediction inherits its ground truth's size bucket; an unmatched
    prediction counts against the bucket of its own area.  AR applies the
    per-frame detection cap before matching.
    """
    if set(preds) != set(gts):
        orphans = sorted(set(preds) ^ set(gts))
        raise InvariantError(f"prediction and ground-truth frame sets differ; orphan frames: {orphans}")

    kept_gts: dict[int, list[BoundingBox]] = {}
    gt_buckets: dict[int, list[SizeBucket]] = {}
    for f in gts:
        kept = [g for g in gts[f] if size_bucket(g) is not SizeBucket.EXCLUDED]
        kept_gts[f] = kept
        gt_buckets[f] = [size_bucket(g) for g in kept]

    num_gt = sum(len(v) for v in kept_gts.values())
    num_gt_by_bucket = {
        b: sum(bl.count(b) for bl in gt_buckets.values())
        for b in (SizeBucket.SMALL, SizeBucket.LARGE)
    }

    rank = _global_rank(preds)
    own_bucket = {
        (f, i): size_bucket(preds[f][i][0]) for f, i in rank
    }

    ap_at: dict[float, float] = {}
    ap_bucket_sum = {SizeBucket.SMALL: 0.0, SizeBucket.LARGE: 0.0}
    ar_bucket_sum = {SizeBucket.SMALL: 0.0, SizeBucket.LARGE: 0.0}
    ar_degenerate = False

    for t in iou_thresholds:
        matched: dict[tuple[int, int], SizeBucket | None] = {}
        for f in preds:
            result = match_detections(preds[f], kept_gts[f], t)
            for i, g in enumerate(result):
                matched[(f, i)] = gt_buckets[f][g] if g is not None else None

        flags = [matched[fi] is not None for fi in rank]
        ap_at[t] = _ap_from_flags(flags, num_gt)

        for b in (SizeBucket.SMALL, SizeBucket.LARGE):
            bucket_flags = [
                matched[fi] is b
                for fi in rank
                if matched[fi] is b or (matched[fi] is None and own_bucket[fi] is b)
            ]
            ap_bucket_sum[b] += _ap_from_flags(bucket_flags, num_gt_by_bucket[b])

        # recall under the per-frame cap
        capped_matched_by_bucket = {SizeBucket.SMALL: 0, SizeBucket.LARGE: 0}
        for f in preds:
            order = sorted(range(len(preds[f])), key=lambda i: (-preds[f][i][1], i))
            capped = [preds[f][i] for i in order[:max_detections]]
            for i, g in enumerate(match_detections(capped, kept_gts[f], t)):
                if g is not None:
                    capped_matched_by_bucket[gt_buckets[f][g]] += 1
        for b in (SizeBucket.SMALL, SizeBucket.LARGE):
            if num_gt_by_bucket[b] > 0:
                ar_bucket_sum[b] += capped_matched_by_bucket[b] / num_gt_by_bucket[b]
            else:
                ar_degenerate = True

    if ar_degenerate:
        warnings.warn("AR over an empty size bucket pinned to 0", DegenerateMetricWarning)

    n_t = len(tuple(iou_thresholds))
    return EvalReport(
        ap_range=sum(ap_at.values()) / n_t,
        ap_50=ap_at.get(0.50, 0.0),
        ap_75=ap_at.get(0.75, 0.0),
        ap_small=ap_bucket_sum[SizeBucket.SMALL] / n_t,
        ap_large=ap_bucket_sum[SizeBucket.LARGE] / n_t,
        ar_small=ar_bucket_sum[SizeBucket.SMALL] / n_t,
        ar_large=ar_bucket_sum[SizeBucket.LARGE] / n_t,
    )


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Digit confusion counts plus a globally normalized copy.

    ``normalized`` divides every cell by the support (row sum) of the
    best-supported true class, so the hottest diagonal cell of the most
    frequent digit reads 1.0.
    """

    counts: np.ndarray
    normalized: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return bool(
            np.array_equal(self.counts, other.counts)
            and np.array_equal(self.normalized, other.normalized)
        )


def confusion_matrix(pairs: Sequence[tuple[int, int]]) -> ConfusionMatrix:
    """10x10 confusion matrix over (true digit, predicted digit) pairs."""
    counts = np.zeros((10, 10), dtype=np.int64)
    for true, pred in pairs:
        if not (isinstance(true, int) and 0 <= true <= 9):
            raise InvariantError(f"confusion true digit in 0..9 violated (got {true!r})")
        if not (isinstance(pred, int) and 0 <= pred <= 9):
            raise InvariantError(f"confusion predicted digit in 0..9 violated (got {pred!r})")
        counts[true, pred] += 1
    max_support = int(counts.sum(axis=1).max()) if counts.any() else 0
    if max_support > 0:
        normalized = counts.astype(np.float64) / max_support
    else:
        normalized = counts.astype(np.float64)
    normalized.flags.writeable = False
    counts.flags.writeable = False
    return ConfusionMatrix(counts=counts, normalized=normalized)
