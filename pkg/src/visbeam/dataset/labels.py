"""Training-label design for the cropped phone detector.

Persons holding phones are cropped and resized; phone boxes are mapped into
the crop frame, and predicted crop boxes are scored against them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .records import Box, DatasetError, ObjectClass, SampleRecord

IOU_THRESHOLD = 0.5


@dataclass(frozen=True)
class CropSpec:
    person_bbox: Box
    output_size: tuple[int, int] = (512, 512)

    def __post_init__(self):
        if self.output_size[0] <= 0 or self.output_size[1] <= 0:
            raise DatasetError("crop output size must be positive")
        x0, y0, x1, y1 = self.person_bbox
        if not (x0 < x1 and y0 < y1):
            raise DatasetError("degenerate person box")

    @property
    def scale(self) -> tuple[float, float]:
        x0, y0, x1, y1 = self.person_bbox
        return self.output_size[0] / (x1 - x0), self.output_size[1] / (y1 - y0)


def intersection(a: Box, b: Box) -> float:
    w = min(a[2], b[2]) - max(a[0], b[0])
    h = min(a[3], b[3]) - max(a[1], b[1])
    return w * h if w > 0 and h > 0 else 0.0


def iou(a: Box, b: Box) -> float:
    inter = intersection(a, b)
    if inter == 0:
        return 0.0
    area = lambda r: (r[2] - r[0]) * (r[3] - r[1])  # noqa: E731
    return inter / (area(a) + area(b) - inter)


def crop_transform(obj_bbox: Box, crop: CropSpec) -> Box:
    """Map a box from the full image into the resized crop, clamped to the crop."""
    if intersection(obj_bbox, crop.person_bbox) == 0:
        raise DatasetError("object does not overlap the crop")
    px0, py0, _, _ = crop.person_bbox
    sx, sy = crop.scale
    wc, hc = crop.output_size
    x0, y0, x1, y1 = obj_bbox
    clamp = lambda v, hi: min(max(v, 0.0), float(hi))  # noqa: E731
    return (clamp((x0 - px0) * sx, wc), clamp((y0 - py0) * sy, hc),
            clamp((x1 - px0) * sx, wc), clamp((y1 - py0) * sy, hc))


def uncrop_transform(crop_bbox: Box, crop: CropSpec) -> Box:
    px0, py0, _, _ = crop.person_bbox
    sx, sy = crop.scale
    x0, y0, x1, y1 = crop_bbox
    return (x0 / sx + px0, y0 / sy + py0, x1 / sx + px0, y1 / sy + py0)


def ground_truth_scores(pred_boxes: list[Box], gt_phone_boxes: list[Box],
                        threshold: float = IOU_THRESHOLD) -> np.ndarray:
    """Q x 2 one-hot matrix: column 0 = phone, column 1 = non-phone."""
    if len(pred_boxes) < 1:
        raise DatasetError("need at least one predicted box")
    out = np.zeros((len(pred_boxes), 2))
    for q, pb in enumerate(pred_boxes):
        best = max((iou(pb, g) for g in gt_phone_boxes), default=0.0)
        out[q, 0 if best >= threshold else 1] = 1.0
    return out


@dataclass(frozen=True)
class CropLabel:
    record_id: str
    crop_index: int
    crop: CropSpec
    phone_boxes: tuple[Box, ...]


def phone_holders(record: SampleRecord) -> list[tuple[Box, list[Box]]]:
    """Person boxes that hold at least one phone.

    Each phone goes to the person box it overlaps most; ties keep the
    earlier person.
    """
    persons = [o.bbox for o in record.objects if o.cls == ObjectClass.PERSON]
    held: dict[int, list[Box]] = {}
    for o in record.objects:
        if o.cls != ObjectClass.PHONE:
            continue
        overlaps = [intersection(o.bbox, p) for p in persons]
        if overlaps and max(overlaps) > 0:
            held.setdefault(int(np.argmax(overlaps)), []).append(o.bbox)
    return [(persons[k], held[k]) for k in sorted(held)]


def make_crop_labels(record: SampleRecord, output_size: tuple[int, int] = (512, 512)) -> list[CropLabel]:
    labels = []
    for z, (person, phones) in enumerate(phone_holders(record)):
        spec = CropSpec(person, output_size)
        labels.append(CropLabel(record.id, z, spec, tuple(crop_transform(b, spec) for b in phones)))
    return labels
