"""Sub-dataset selection by active classes, crowd size and farthest-object distance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .records import DatasetError, ObjectClass, SampleRecord

UNLIMITED_PEOPLE = 10**9


@dataclass(frozen=True)
class SelectionQuery:
    """``mode="contains"`` keeps records holding every active class;
    ``mode="only"`` keeps non-empty records whose objects are all active."""

    active_classes: frozenset[ObjectClass] = frozenset({ObjectClass.PERSON, ObjectClass.PHONE})
    max_num_people: int = 6
    max_dist: float = 30.0
    mode: str = "contains"

    def __post_init__(self):
        object.__setattr__(self, "active_classes",
                           frozenset(ObjectClass(c) for c in self.active_classes))
        if not self.active_classes:
            raise DatasetError("at least one active class is required")
        if self.max_num_people < 0:
            raise DatasetError("max_num_people must be >= 0")
        if not self.max_dist > 0:
            raise DatasetError("max_dist must be positive")
        if self.mode not in ("contains", "only"):
            raise DatasetError(f"unknown selection mode {self.mode!r}")


def _farthest(record: SampleRecord) -> float:
    dists = []
    for o in record.objects:
        if o.distance_m is None:
            raise DatasetError(f"{record.id}: object distances not attached")
        dists.append(o.distance_m)
    return max(dists, default=-math.inf)


def matches(record: SampleRecord, q: SelectionQuery) -> bool:
    present = record.classes()
    if q.mode == "contains":
        if not q.active_classes <= present:
            return False
    elif not present or not present <= q.active_classes:
        return False
    if record.count(ObjectClass.PERSON) > q.max_num_people:
        return False
    return _farthest(record) <= q.max_dist


def select(records: Iterable[SampleRecord], q: SelectionQuery) -> list[SampleRecord]:
    return [r for r in records if matches(r, q)]
