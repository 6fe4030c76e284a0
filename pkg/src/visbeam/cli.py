"""Command-line entry point: experiment runs and dataset utilities."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import yaml

from . import dataset as ds
from .scenario import (load_config, run_drops, run_irs_nmse, run_latency_sweep,
                       run_rate_map, write_csv, write_manifest)


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _scenario_config(args):
    return load_config(args.config, seed=args.seed)


def cmd_rate_map(args) -> int:
    cfg = _scenario_config(args)
    out = _out(args)
    rm = run_rate_map(cfg)
    files = [write_csv(out / "rate_map.csv", ("x", "y", "scheme", "rate"), rm.rows()).name]
    rows = [("grid", s, m) for s, m in rm.means().items()]
    if cfg.drops > 0:
        rows += [("drops", s, m) for s, m in run_drops(cfg).means().items()]
    files.append(write_csv(out / "scheme_means.csv", ("source", "scheme", "mean_rate"), rows).name)
    write_manifest(out / "manifest.json", "rate-map", cfg.to_dict(), files)
    return 0


def cmd_latency_sweep(args) -> int:
    cfg = _scenario_config(args)
    out = _out(args)
    counts = [int(c) for c in args.antennas.split(",")] if args.antennas else None
    rows = run_latency_sweep(cfg, counts)
    path = write_csv(out / "latency.csv", ("antennas", "scheme", "avg_rate", "latency_s"),
                     ((r.antennas, r.scheme, r.avg_rate, r.latency_s) for r in rows))
    write_manifest(out / "manifest.json", "latency-sweep", cfg.to_dict(), [path.name])
    return 0


def cmd_irs_nmse(args) -> int:
    cfg = _scenario_config(args)
    out = _out(args)
    counts = [int(c) for c in args.elements.split(",")] if args.elements else None
    rows = run_irs_nmse(cfg, counts, args.error_scale)
    path = write_csv(out / "irs_nmse.csv", ("elements", "scheme", "nmse"),
                     ((r.elements, r.scheme, r.nmse) for r in rows))
    write_manifest(out / "manifest.json", "irs-nmse", cfg.to_dict(), [path.name],
                   {"error_scale": args.error_scale})
    return 0


# -- dataset ---------------------------------------------------------------------

_SELECT_KEYS = {"active_classes", "max_num_people", "max_dist", "mode"}
_LABEL_KEYS = {"output_size", "iou_threshold"}
_SYNTH_KEYS = {"records", "image_size"}


def _dataset_config(path, allowed: set[str]) -> dict:
    if path is None:
        return {}
    data = yaml.safe_load(Path(path).read_text()) or {}
    unknown = set(data) - allowed
    if unknown:
        raise SystemExit(f"unknown config keys: {sorted(unknown)}")
    return data


def _classes(text: str) -> frozenset:
    out = set()
    for tok in text.split(","):
        tok = tok.strip()
        out.add(ds.ObjectClass(int(tok)) if tok.isdigit() else ds.ObjectClass.from_tag(tok))
    return frozenset(out)


def cmd_select(args) -> int:
    conf = _dataset_config(args.config, _SELECT_KEYS)
    if args.active_classes is not None:
        conf["active_classes"] = _classes(args.active_classes)
    elif "active_classes" in conf:
        conf["active_classes"] = frozenset(ds.ObjectClass(c) for c in conf["active_classes"])
    for key, val in (("max_num_people", args.max_people), ("max_dist", args.max_dist),
                     ("mode", args.mode)):
        if val is not None:
            conf[key] = val
    q = ds.SelectionQuery(**conf)
    chosen = ds.select(ds.load_corpus(args.input), q)
    out = _out(args)
    (out / "selection.txt").write_text("".join(f"{r.id}\n" for r in chosen))
    query = {"active_classes": sorted(int(c) for c in q.active_classes),
             "max_num_people": q.max_num_people, "max_dist": q.max_dist, "mode": q.mode}
    write_manifest(out / "manifest.json", "dataset select", query, ["selection.txt"],
                   {"seed": args.seed, "selected": len(chosen)})
    return 0


def _fmt_box(b) -> str:
    return " ".join(repr(float(v)) for v in b)


def cmd_make_labels(args) -> int:
    conf = _dataset_config(args.config, _LABEL_KEYS)
    size = tuple(conf.get("output_size", (512, 512)))
    thr = float(conf.get("iou_threshold", 0.5))
    preds = json.loads(Path(args.predictions).read_text()) if args.predictions else {}
    rows, scores = [], []
    for rec in ds.load_corpus(args.input):
        for lab in ds.make_crop_labels(rec, size):
            phones = ";".join(_fmt_box(b) for b in lab.phone_boxes)
            rows.append((lab.record_id, lab.crop_index, _fmt_box(lab.crop.person_bbox), phones))
            boxes = preds.get(f"{lab.record_id}/{lab.crop_index}")
            if boxes:
                for q, row in enumerate(ds.ground_truth_scores(boxes, list(lab.phone_boxes), thr)):
                    scores.append((lab.record_id, lab.crop_index, q, int(row[0]), int(row[1])))
    out = _out(args)
    files = [write_csv(out / "crop_labels.csv",
                       ("record_id", "crop_index", "person_bbox", "phone_boxes"), rows).name]
    if args.predictions:
        files.append(write_csv(out / "scores.csv",
                               ("record_id", "crop_index", "query", "phone", "non_phone"), scores).name)
    write_manifest(out / "manifest.json", "dataset make-labels",
                   {"output_size": list(size), "iou_threshold": thr}, files, {"seed": args.seed})
    return 0


def cmd_synth(args) -> int:
    conf = _dataset_config(args.config, _SYNTH_KEYS)
    n = args.records if args.records is not None else int(conf.get("records", 100))
    size = tuple(conf.get("image_size", (64, 48)))
    ids = ds.write_corpus(args.out, n, args.seed, size)
    write_manifest(Path(args.out) / "manifest.json", "dataset synth",
                   {"records": n, "image_size": list(size)}, [f"label/{i}.xml" for i in ids],
                   {"seed": args.seed})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="visbeam", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed_default=None):
        sp.add_argument("--config", help="YAML/JSON config file")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--seed", type=int, default=seed_default, help="master seed")
        return sp

    sp = common(sub.add_parser("rate-map", help="per-cell rate map and scheme means"))
    sp.set_defaults(func=cmd_rate_map)
    sp = common(sub.add_parser("latency-sweep", help="average latency versus BS array size"))
    sp.add_argument("--antennas", help="comma-separated perfect squares, e.g. 36,64,121,196")
    sp.set_defaults(func=cmd_latency_sweep)
    sp = common(sub.add_parser("irs-nmse", help="IRS channel reconstruction NMSE"))
    sp.add_argument("--elements", help="comma-separated IRS element counts")
    sp.add_argument("--error-scale", type=float, default=1.0, help="multiplier on detector angle errors")
    sp.set_defaults(func=cmd_irs_nmse)

    dsp = sub.add_parser("dataset", help="dataset utilities").add_subparsers(dest="dataset_cmd", required=True)
    sp = common(dsp.add_parser("select", help="filter a corpus into a sub-dataset"), 0)
    sp.add_argument("--in", dest="input", required=True, help="corpus root (label/, image/distance/)")
    sp.add_argument("--active-classes", help="e.g. 0,1 or person,P")
    sp.add_argument("--max-people", type=int)
    sp.add_argument("--max-dist", type=float)
    sp.add_argument("--mode", choices=("contains", "only"))
    sp.set_defaults(func=cmd_select)
    sp = common(dsp.add_parser("make-labels", help="crop labels and optional score matrices"), 0)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--predictions", help='JSON {"<record>/<crop>": [[x0, y0, x1, y1], ...]}')
    sp.set_defaults(func=cmd_make_labels)
    sp = common(dsp.add_parser("synth", help="write a synthetic corpus"), 0)
    sp.add_argument("--records", type=int)
    sp.set_defaults(func=cmd_synth)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
