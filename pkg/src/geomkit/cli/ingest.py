"""Point-cloud file input/output (CSV and ASCII PLY)."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..errors import GeomError

__all__ = ["IngestError", "FORMATS", "ingest", "read_csv_points", "read_ply_ascii", "write_csv_points",
           "write_ply_ascii"]

FORMATS = ("csv", "ply-ascii")


class IngestError(GeomError, ValueError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = f"{path}:{line}: " if line is not None else (f"{path}: " if path else "")
        super().__init__(where + message)


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_csv_points(path, dim: int) -> np.ndarray:
    """Read one point per row.  A first row without any numeric field is a header."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            fields = [f.strip() for f in row]
            if not fields or all(f == "" for f in fields):
                continue
            if lineno == 1 and not any(_is_number(f) for f in fields):
                continue
            if len(fields) != dim:
                raise IngestError(f"expected {dim} fields, got {len(fields)}", path, lineno)
            try:
                rows.append([float(f) for f in fields])
            except ValueError:
                raise IngestError(f"non-numeric field in row {row!r}", path, lineno) from None
    return np.array(rows, dtype=float).reshape(-1, dim)


def read_ply_ascii(path, dim: int) -> np.ndarray:
    """Vertex coordinates of an ASCII PLY file (``x``, ``y`` and for 3-D ``z``)."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != "ply":
        raise IngestError("missing 'ply' magic", path, 1)
    elements = []  # [name, count, [properties]]
    fmt = None
    lineno = 1
    for lineno, line in enumerate(lines[1:], start=2):
        tok = line.split()
        if not tok or tok[0] in ("comment", "obj_info"):
            continue
        if tok[0] == "format":
            fmt = tok[1] if len(tok) > 1 else None
        elif tok[0] == "element":
            if len(tok) != 3 or not tok[2].isdigit():
                raise IngestError(f"malformed element line {line!r}", path, lineno)
            elements.append([tok[1], int(tok[2]), []])
        elif tok[0] == "property":
            if not elements:
                raise IngestError("property before any element", path, lineno)
            if tok[1] == "list":
                elements[-1][2].append(None)
            else:
                elements[-1][2].append(tok[-1])
        elif tok[0] == "end_header":
            break
        else:
            raise IngestError(f"unexpected header line {line!r}", path, lineno)
    else:
        raise IngestError("missing end_header", path, lineno)
    if fmt != "ascii":
        raise IngestError(f"only ASCII PLY is supported, got format {fmt!r}", path)
    wanted = ("x", "y", "z")[:dim]
    cursor = lineno
    pts = None
    for name, count, props in elements:
        if name != "vertex":
            cursor += count
            continue
        missing = [w for w in wanted if w not in props]
        if missing:
            raise IngestError(f"vertex element lacks properties {missing}", path)
        cols = [props.index(w) for w in wanted]
        pts = np.empty((count, dim))
        for k in range(count):
            ln = cursor + k + 1
            if ln > len(lines):
                raise IngestError(f"file ends after {k} of {count} vertices", path, ln)
            tok = lines[ln - 1].split()
            if len(tok) != len(props):
                raise IngestError(f"expected {len(props)} values, got {len(tok)}", path, ln)
            try:
                pts[k] = [float(tok[c]) for c in cols]
            except ValueError:
                raise IngestError(f"non-numeric vertex value in {lines[ln - 1]!r}", path, ln) from None
        break
    if pts is None:
        raise IngestError("no vertex element", path)
    return pts


def ingest(path, fmt: str = "csv", dim: int = 2) -> np.ndarray:
    """Points of ``path`` in file order as an ``(n, dim)`` array."""
    if dim not in (2, 3):
        raise IngestError(f"dim must be 2 or 3, got {dim}")
    if fmt not in FORMATS:
        raise IngestError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    p = Path(path)
    if not p.is_file():
        raise IngestError("file not found", p)
    if fmt == "csv":
        return read_csv_points(p, dim)
    return read_ply_ascii(p, dim)


def write_csv_points(path, pts) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for p in np.asarray(pts, dtype=float):
            w.writerow([repr(float(v)) for v in p])


def write_ply_ascii(path, pts) -> None:
    pts = np.asarray(pts, dtype=float)
    names = "xyz"[:pts.shape[1]]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"ply\nformat ascii 1.0\nelement vertex {len(pts)}\n")
        for c in names:
            fh.write(f"property double {c}\n")
        fh.write("end_header\n")
        for p in pts:
            fh.write(" ".join(repr(float(v)) for v in p) + "\n")
