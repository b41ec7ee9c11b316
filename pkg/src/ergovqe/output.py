"""Result files: CSV tables with a config-echo comment line, JSON summaries.

Floats are written with 17 significant digits so every value round-trips to
the same double.  Files are written to a temporary sibling and renamed, so a
failed run never leaves a truncated result behind.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

CONFIG_PREFIX = "# ergovqe-config: "


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value) or math.isinf(value):
            return str(float(value))
        return format(float(value), ".17g")
    return str(value)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def csv_text(columns: Sequence[str], rows: Iterable[Sequence], config: dict | None = None) -> str:
    buf = io.StringIO()
    if config is not None:
        buf.write(CONFIG_PREFIX + json.dumps(_jsonable(config), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_csv(path) -> tuple[dict | None, list[dict]]:
    """Parse a file written by :func:`csv_text`: (config echo, rows as str dicts)."""
    with open(path, newline="") as fh:
        first = fh.readline()
        config = None
        if first.startswith(CONFIG_PREFIX):
            config = json.loads(first[len(CONFIG_PREFIX):])
        else:
            fh.seek(0)
        return config, list(csv.DictReader(fh))


def write_files(contents: dict) -> None:
    """Atomically write ``{path: text}``; on any failure none of the files remain."""
    written: list[Path] = []
    try:
        for path, text in contents.items():
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
            try:
                with os.fdopen(fd, "w", newline="") as fh:
                    fh.write(text)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
            written.append(path)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
