"""CSV/JSON writers and readers with run manifests.

CSV files start with a ``#``-prefixed header block (schema version, command,
manifest hash, per-run metadata) followed by an ordinary CSV table. Every
output file gets a sidecar ``<file>.manifest.json`` holding the fully
resolved configuration, which can be fed back through ``--config``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from pathlib import Path

from . import __version__

SCHEMA_VERSION = 1


def build_manifest(command, config, seed=None, outputs=()):
    body = {
        "schema_version": SCHEMA_VERSION,
        "toolkit_version": __version__,
        "command": command,
        "config": config,
        "seed": seed,
    }
    digest = hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()
    return {**body, "manifest_sha256": digest, "outputs": [str(p) for p in outputs]}


def atomic_write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_csv(manifest, columns, rows, meta=None):
    buf = io.StringIO()
    buf.write(f"# schema_version: {manifest['schema_version']}\n")
    buf.write(f"# toolkit_version: {manifest['toolkit_version']}\n")
    buf.write(f"# command: {manifest['command']}\n")
    buf.write(f"# manifest_sha256: {manifest['manifest_sha256']}\n")
    for key, value in (meta or {}).items():
        buf.write(f"# {key}: {_cell(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def format_json(manifest, payload):
    return json.dumps({"manifest": manifest, **payload}, indent=2, sort_keys=True) + "\n"


def _parse_value(text):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_csv(text):
    """Parse toolkit CSV text into ``(meta, rows)`` with typed values."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            meta[key.strip()] = _parse_value(value.strip())
        elif line.strip():
            body.append(line)
    rows = [{k: _parse_value(v) for k, v in r.items()} for r in csv.DictReader(body)]
    return meta, rows


def read_csv(path):
    return parse_csv(Path(path).read_text())


def read_json(path):
    return json.loads(Path(path).read_text())


def manifest_path(output):
    return Path(f"{output}.manifest.json")
