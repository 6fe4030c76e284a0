"""Synthetic VOMTC-layout corpora for tests and demos (the real dataset is external)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .records import (LabeledObject, ObjectClass, SampleRecord, serialize_distance,
                      serialize_label)


def _box(rng: np.random.Generator, w: int, h: int, min_size: int, max_size: int,
         inside=None) -> tuple[float, float, float, float]:
    if inside is not None:
        x0, y0, x1, y1 = inside
        bw = max(1, int(rng.integers(1, max(2, int((x1 - x0) // 3) + 1))))
        bh = max(1, int(rng.integers(1, max(2, int((y1 - y0) // 3) + 1))))
        x = int(rng.integers(int(x0), max(int(x0) + 1, int(x1) - bw + 1)))
        y = int(rng.integers(int(y0), max(int(y0) + 1, int(y1) - bh + 1)))
        return (float(x), float(y), float(min(x + bw, w)), float(min(y + bh, h)))
    bw = int(rng.integers(min_size, max_size + 1))
    bh = int(rng.integers(min_size, max_size + 1))
    x = int(rng.integers(0, w - bw + 1))
    y = int(rng.integers(0, h - bh + 1))
    return (float(x), float(y), float(x + bw), float(y + bh))


def random_record(rng: np.random.Generator, record_id: str,
                  image_size: tuple[int, int] = (64, 48)) -> tuple[SampleRecord, np.ndarray]:
    """A random labeled scene and its distance map ``(height, width)``."""
    w, h = image_size
    objects: list[LabeledObject] = []
    persons = [_box(rng, w, h, 8, min(w, h) // 2) for _ in range(int(rng.integers(0, 9)))]
    objects += [LabeledObject(ObjectClass.PERSON, b) for b in persons]
    for _ in range(int(rng.integers(0, 4))):
        host = persons[int(rng.integers(len(persons)))] if persons and rng.random() < 0.8 else None
        objects.append(LabeledObject(ObjectClass.PHONE, _box(rng, w, h, 2, 6, inside=host)))
    for _ in range(int(rng.integers(0, 3))):
        objects.append(LabeledObject(ObjectClass.LAPTOP, _box(rng, w, h, 4, 12)))

    dmap = np.full((h, w), float(rng.uniform(5.0, 40.0)))
    for o in objects:
        x0, y0, x1, y1 = (int(v) for v in o.bbox)
        dmap[y0:y1, x0:x1] = round(float(rng.uniform(0.5, 45.0)), 3)
    rec = SampleRecord(record_id, (w, h, 3), tuple(objects), f"image/distance/{record_id}.json")
    return rec, dmap


def write_corpus(root: str | Path, n: int, seed: int = 0,
                 image_size: tuple[int, int] = (64, 48)) -> list[str]:
    """Write ``n`` records in the label/ + image/distance/ layout; returns their ids."""
    root = Path(root)
    (root / "label").mkdir(parents=True, exist_ok=True)
    (root / "image" / "distance").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    ids = []
    for k in range(n):
        rid = f"scene_{k:05d}"
        rec, dmap = random_record(rng, rid, image_size)
        (root / "label" / f"{rid}.xml").write_bytes(serialize_label(rec))
        (root / "image" / "distance" / f"{rid}.json").write_bytes(serialize_distance(dmap))
        ids.append(rid)
    return ids
