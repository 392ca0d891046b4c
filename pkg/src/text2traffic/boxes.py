"""Bounding-box utilities: IoU, greedy NMS and size filtering.

Boxes are half-open pixel rectangles ``(x0, y0, x1, y1)`` with
``x0 < x1`` and ``y0 < y1``; area is ``(x1 - x0) * (y1 - y0)``.
"""

from __future__ import annotations

from dataclasses import dataclass

Rect = tuple[float, float, float, float]


@dataclass(frozen=True)
class DetectionBox:
    """One detection: rectangle, class label and confidence in [0, 1]."""

    bbox: Rect
    class_name: str
    score: float = 1.0

    def __post_init__(self):
        x0, y0, x1, y1 = self.bbox
        if not (x0 < x1 and y0 < y1):
            raise ValueError(f"degenerate bbox {self.bbox}")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")


def box_area(rect: Rect) -> float:
    x0, y0, x1, y1 = rect
    return max(0.0, x1 - x0) * max(0.0, y1 - y0)


def iou(a: Rect, b: Rect) -> float:
    """Intersection-over-union of two rectangles; 0.0 for disjoint or
    degenerate (zero-area) input."""
    ix0 = max(a[0], b[0])
    iy0 = max(a[1], b[1])
    ix1 = min(a[2], b[2])
    iy1 = min(a[3], b[3])
    inter = max(0.0, ix1 - ix0) * max(0.0, iy1 - iy0)
    if inter <= 0.0:
        return 0.0
    union = box_area(a) + box_area(b) - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def nms(
    boxes: list[DetectionBox],
    iou_threshold: float,
    class_aware: bool = True,
) -> list[DetectionBox]:
    """Greedy non-maximum suppression.

    Boxes are visited in descending score order (ties broken by lower
    original index); a box is kept unless it overlaps an already-kept box
    with IoU above ``iou_threshold``. With ``class_aware`` (the default)
    suppression only happens within the same class. The result is sorted
    by descending score.
    """
    if not 0.0 < iou_threshold <= 1.0:
        raise ValueError(f"iou_threshold {iou_threshold} outside (0, 1]")
    order = sorted(range(len(boxes)), key=lambda i: (-boxes[i].score, i))
    kept: list[DetectionBox] = []
    for i in order:
        cand = boxes[i]
        suppressed = False
        for k in kept:
            if class_aware and k.class_name != cand.class_name:
                continue
            if iou(k.bbox, cand.bbox) > iou_threshold:
                suppressed = True
                break
        if not suppressed:
            kept.append(cand)
    return kept


def size_filter(
    boxes: list[DetectionBox],
    min_side: float,
    min_area: float,
) -> list[DetectionBox]:
    """Keep boxes whose both side lengths are >= ``min_side`` and whose
    area is >= ``min_area``; input order is preserved."""
    if min_side < 0 or min_area < 0:
        raise ValueError("min_side and min_area must be non-negative")
    out = []
    for b in boxes:
        x0, y0, x1, y1 = b.bbox
        w, h = x1 - x0, y1 - y0
        if min(w, h) >= min_side and w * h >= min_area:
            out.append(b)
    return out
