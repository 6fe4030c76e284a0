"""VOMTC-format parsing, sub-dataset selection and training-label generation."""

from .labels import (CropLabel, CropSpec, crop_transform, ground_truth_scores, iou,
                     make_crop_labels, phone_holders, uncrop_transform)
from .records import (DatasetError, LabeledObject, ObjectClass, SampleRecord,
                      attach_distances, distance_at, load_corpus, load_record,
                      parse_distance_file, parse_label_file, serialize_distance,
                      serialize_label)
from .selection import UNLIMITED_PEOPLE, SelectionQuery, matches, select
from .synth import random_record, write_corpus

__all__ = [
    "CropLabel", "CropSpec", "DatasetError", "LabeledObject", "ObjectClass", "SampleRecord",
    "SelectionQuery", "UNLIMITED_PEOPLE", "attach_distances", "crop_transform", "distance_at",
    "ground_truth_scores", "iou", "load_corpus", "load_record", "make_crop_labels", "matches",
    "parse_distance_file", "parse_label_file", "phone_holders", "random_record", "select", "serialize_distance",
    "serialize_label", "uncrop_transform", "write_corpus",
]
