"""Byte-stable CSV tables and JSON run manifests."""

from __future__ import annotations

import csv
import io
import json
import platform
from importlib import metadata
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np


def _cell(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    path = Path(path)
    path.write_text(buf.getvalue())
    return path


def versions() -> dict[str, str]:
    out = {"python": platform.python_version(), "numpy": np.__version__}
    try:
        out["visbeam"] = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        out["visbeam"] = "unknown"
    return out


def write_manifest(path: str | Path, command: str, config: dict[str, Any],
                   outputs: Sequence[str], extra: dict[str, Any] | None = None) -> Path:
    """Config echo, seed and versions; no timestamps so re-runs match byte for byte."""
    doc = {"command": command, "config": config, "outputs": sorted(outputs),
           "versions": versions()}
    if extra:
        doc.update(extra)
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def emit_outputs(results, out_dir: str | Path, config: dict[str, Any],
                 command: str = "rate-map") -> list[Path]:
    """Rate-map rows ``(x, y, scheme, rate)`` plus ``manifest.json``.

    ``results`` is a RateMap or any iterable of such tuples; an empty iterable
    gives a header-only CSV.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = results.rows() if hasattr(results, "rows") else results
    csv_path = write_csv(out / "rate_map.csv", ("x", "y", "scheme", "rate"), rows)
    man = write_manifest(out / "manifest.json", command, config, [csv_path.name])
    return [csv_path, man]
