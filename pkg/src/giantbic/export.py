"""Plot-ready tables and run manifests.

DSV tables are tab-separated with ``#`` header lines naming columns and
units; floats are written with 17 significant digits so that output files
are bit-stable.  The structured format is sorted-key JSON.
"""
from __future__ import annotations

import hashlib
import json
import math
import sys
from pathlib import Path

from . import __version__

FORMATS = ("dsv", "structured")


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, float) or hasattr(value, "dtype"):
        return format(float(value), ".17g")
    return str(value)


def _json_value(value):
    if hasattr(value, "dtype"):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def render_table(command: str, columns, units, rows, *, fmt: str = "dsv",
                 parameters: dict | None = None, notes=()) -> str:
    if fmt == "dsv":
        lines = [f"# giantbic {__version__} {command}"]
        if parameters:
            lines.append("# parameters: " + json.dumps(parameters, sort_keys=True))
        lines += [f"# {note}" for note in notes]
        lines.append("# columns: " + "\t".join(columns))
        lines.append("# units: " + "\t".join(units))
        lines += ["\t".join(_cell(v) for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "structured":
        doc = {
            "command": command,
            "version": __version__,
            "parameters": parameters or {},
            "notes": list(notes),
            "columns": list(columns),
            "units": list(units),
            "rows": [[_json_value(v) for v in row] for row in rows],
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def sibling(path: str | Path, tag: str) -> Path:
    """``out.dsv`` -> ``out.<tag>.dsv``."""
    path = Path(path)
    return path.with_name(f"{path.stem}.{tag}{path.suffix}")


def write_text(path: str | Path | None, text: str) -> str:
    """Write ``text`` (``None`` or ``'-'`` means stdout); returns the SHA-256 digest."""
    data = text.encode("utf-8")
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def append_manifest(out: str | Path, *, command: str, parameters: dict, duration: float,
                    outputs: dict[str, str]) -> Path:
    """Append one run record to ``<out>.manifest.json`` (a JSON list, append-only)."""
    path = Path(str(out) + ".manifest.json")
    records = []
    if path.exists():
        records = json.loads(path.read_text(encoding="utf-8"))
    records.append({
        "command": command,
        "version": __version__,
        "parameters": parameters,
        "duration_seconds": round(duration, 6),
        "outputs": [{"path": str(p), "sha256": digest} for p, digest in sorted(outputs.items())],
    })
    path.write_text(json.dumps(records, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    return path
