"""Column-oriented curve files with self-describing headers.

Curves are written as CSV with '#'-prefixed metadata lines (units convention,
config hash, code version). Floats are serialized with repr so a written
file reads back bit-exactly.
"""

import hashlib
import json

import numpy as np

from . import __version__
from .errors import ConfigError

UNITS_LINE = "gas units: k_F = 1, E_F = 1, m = 1/2"


def config_hash(mapping):
    """Stable short hash of a configuration mapping."""
    blob = json.dumps(mapping, sort_keys=True, default=repr).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_curve(path, columns, meta=None):
    """Write a dict of equal-length columns as headered CSV."""
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[n])) for n in names]
    n_rows = len(arrays[0])
    if any(len(a) != n_rows for a in arrays):
        raise ValueError("columns must have equal length")
    lines = [f"# units = {UNITS_LINE}", f"# version = {__version__}"]
    for k, v in (meta or {}).items():
        lines.append(f"# {k} = {_fmt(v)}")
    lines.append(",".join(names))
    for i in range(n_rows):
        lines.append(",".join(_fmt(a[i]) for a in arrays))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_curve(path):
    """Read a curve file back; returns (columns dict, meta dict)."""
    meta = {}
    names = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            if names is None:
                names = line.split(",")
                continue
            rows.append([float(x) if x != "nan" else np.nan for x in line.split(",")])
    if names is None:
        raise ConfigError(f"no header row in {path}")
    data = np.asarray(rows, dtype=float) if rows else np.empty((0, len(names)))
    return {n: data[:, i] for i, n in enumerate(names)}, meta


def write_report(path, report):
    """JSON report with sorted keys for byte-stable output."""
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")
