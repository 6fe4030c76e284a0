"""VOMTC-style record types and the label / distance file formats.

Label files are VOC-style XML::

    <annotation>
      <filename>scene_0001</filename>
      <size><width>640</width><height>480</height><depth>3</depth></size>
      <object><name>P</name><bndbox><xmin>..</xmin>...</bndbox></object>
    </annotation>

Distance files are JSON ``{"width": W, "height": H, "distances": [...]}``
with ``W * H`` row-major distances in meters.
"""

from __future__ import annotations

import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from enum import IntEnum
from pathlib import Path

import numpy as np

Box = tuple[float, float, float, float]


class DatasetError(ValueError):
    pass


class ObjectClass(IntEnum):
    PERSON = 0
    PHONE = 1
    LAPTOP = 2

    @property
    def tag(self) -> str:
        return _TAGS[self]

    @classmethod
    def from_tag(cls, tag: str) -> "ObjectClass":
        for k, v in _TAGS.items():
            if v == tag:
                return k
        raise DatasetError(f"unknown object class {tag!r}")


_TAGS = {ObjectClass.PERSON: "person", ObjectClass.PHONE: "P", ObjectClass.LAPTOP: "L"}


@dataclass(frozen=True)
class LabeledObject:
    cls: ObjectClass
    bbox: Box
    distance_m: float | None = None

    def __post_init__(self):
        x0, y0, x1, y1 = self.bbox
        if not (x0 < x1 and y0 < y1):
            raise DatasetError(f"degenerate bounding box {self.bbox}")
        if self.distance_m is not None and not (self.distance_m >= 0):
            raise DatasetError("object distance must be non-negative")

    @property
    def center(self) -> tuple[float, float]:
        x0, y0, x1, y1 = self.bbox
        return (x0 + x1) / 2, (y0 + y1) / 2


@dataclass(frozen=True)
class SampleRecord:
    id: str
    image_size: tuple[int, int, int]
    objects: tuple[LabeledObject, ...] = ()
    distance_ref: str | None = field(default=None, compare=False)

    def __post_init__(self):
        w, h, _ = self.image_size
        if w <= 0 or h <= 0:
            raise DatasetError("image width and height must be positive")
        for obj in self.objects:
            x0, y0, x1, y1 = obj.bbox
            if x0 < 0 or y0 < 0 or x1 > w or y1 > h:
                raise DatasetError(f"{self.id}: box {obj.bbox} outside {w}x{h} image")

    def count(self, cls: ObjectClass) -> int:
        return sum(o.cls == cls for o in self.objects)

    def classes(self) -> set[ObjectClass]:
        return {o.cls for o in self.objects}


def _num(text: str | None, what: str) -> float:
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise DatasetError(f"bad numeric value for {what}: {text!r}") from None
    if not math.isfinite(v):
        raise DatasetError(f"non-finite value for {what}")
    return v


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def parse_label_file(data: bytes | str) -> SampleRecord:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise DatasetError(f"malformed label file: {exc}") from None
    if root.tag != "annotation":
        raise DatasetError("label root element must be <annotation>")
    size = root.find("size")
    if size is None:
        raise DatasetError("label file has no <size>")
    w, h, c = (int(_num(size.findtext(k), k)) for k in ("width", "height", "depth"))
    name = root.findtext("filename") or ""
    rid = Path(name).stem if name else ""
    objects = []
    for el in root.findall("object"):
        cls = ObjectClass.from_tag((el.findtext("name") or "").strip())
        bb = el.find("bndbox")
        if bb is None:
            raise DatasetError("object without <bndbox>")
        box = tuple(_num(bb.findtext(k), k) for k in ("xmin", "ymin", "xmax", "ymax"))
        objects.append(LabeledObject(cls, box))
    return SampleRecord(rid, (w, h, c), tuple(objects), f"image/distance/{rid}.json")


def serialize_label(record: SampleRecord) -> bytes:
    root = ET.Element("annotation")
    ET.SubElement(root, "filename").text = record.id
    size = ET.SubElement(root, "size")
    for k, v in zip(("width", "height", "depth"), record.image_size):
        ET.SubElement(size, k).text = str(v)
    for obj in record.objects:
        el = ET.SubElement(root, "object")
        ET.SubElement(el, "name").text = obj.cls.tag
        bb = ET.SubElement(el, "bndbox")
        for k, v in zip(("xmin", "ymin", "xmax", "ymax"), obj.bbox):
            ET.SubElement(bb, k).text = _fmt(v)
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8") + b"\n"


def parse_distance_file(data: bytes | str, width: int, height: int) -> np.ndarray:
    """Distance map as an ``(height, width)`` float array."""
    try:
        doc = json.loads(data)
        values = np.asarray(doc["distances"], dtype=float)
    except (ValueError, KeyError, TypeError) as exc:
        raise DatasetError(f"malformed distance file: {exc}") from None
    if values.ndim != 1 or values.size != width * height:
        raise DatasetError(f"expected {width * height} distances, got {values.size}")
    if doc.get("width", width) != width or doc.get("height", height) != height:
        raise DatasetError("distance file dimensions disagree with the label")
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        raise DatasetError("distances must be finite and non-negative")
    return values.reshape(height, width)


def serialize_distance(dmap: np.ndarray) -> bytes:
    h, w = dmap.shape
    doc = {"width": w, "height": h, "distances": [float(v) for v in dmap.ravel()]}
    return json.dumps(doc, separators=(",", ":")).encode() + b"\n"


def distance_at(dmap: np.ndarray, x: float, y: float) -> float:
    h, w = dmap.shape
    col = min(max(int(math.floor(x)), 0), w - 1)
    row = min(max(int(math.floor(y)), 0), h - 1)
    return float(dmap[row, col])


def attach_distances(record: SampleRecord, dmap: np.ndarray) -> SampleRecord:
    """Fill each object's distance from the map pixel under its box center."""
    objs = tuple(replace(o, distance_m=distance_at(dmap, *o.center)) for o in record.objects)
    return replace(record, objects=objs)


def load_record(root: str | Path, record_id: str) -> SampleRecord:
    root = Path(root)
    rec = parse_label_file((root / "label" / f"{record_id}.xml").read_bytes())
    if not rec.id:
        rec = replace(rec, id=record_id, distance_ref=f"image/distance/{record_id}.json")
    w, h, _ = rec.image_size
    dmap = parse_distance_file((root / rec.distance_ref).read_bytes(), w, h)
    return attach_distances(rec, dmap)


def load_corpus(root: str | Path) -> list[SampleRecord]:
    """All records under ``root/label`` in sorted id order, distances attached."""
    labels = sorted((Path(root) / "label").glob("*.xml"))
    return [load_record(root, p.stem) for p in labels]
