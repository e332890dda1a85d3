"""Deterministic file writers: 16-bit P5 pixmaps, CSV grids, JSON reports.

Every file embeds the config hash and a parameter echo: P5 via header
comments, CSV via a sidecar JSON, reports inline.  Byte output depends
only on the data, never on wall time or thread count.
"""

from __future__ import annotations

import json
from typing import Optional

import numpy as np

__all__ = ["pgm16_bytes", "write_pgm16", "write_grid_csv", "write_json_report"]


def pgm16_bytes(
    field: np.ndarray,
    vmin: Optional[float] = None,
    vmax: Optional[float] = None,
    provenance: Optional[dict] = None,
) -> bytes:
    """Binary 16-bit P5 with an affine clamp of field values to gray.

    gray = round(65535 * clamp((v - vmin) / (vmax - vmin), 0, 1)); when
    vmin/vmax are omitted the data range is used and recorded in the
    header, keeping output reproducible.
    """
    a = np.asarray(field, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("field must be 2-d")
    lo = float(a.min()) if vmin is None else float(vmin)
    hi = float(a.max()) if vmax is None else float(vmax)
    if hi <= lo:
        hi = lo + 1.0
    scaled = np.clip((a - lo) / (hi - lo), 0.0, 1.0)
    gray = np.round(scaled * 65535.0).astype(">u2")
    header = [b"P5"]
    prov = dict(provenance or {})
    prov.setdefault("vmin", repr(lo))
    prov.setdefault("vmax", repr(hi))
    for key in sorted(prov):
        header.append(f"# {key}={prov[key]}".encode())
    header.append(f"{a.shape[1]} {a.shape[0]}".encode())
    header.append(b"65535")
    return b"\n".join(header) + b"\n" + gray.tobytes()


def write_pgm16(path: str, field, vmin=None, vmax=None, provenance=None) -> None:
    with open(path, "wb") as fh:
        fh.write(pgm16_bytes(field, vmin, vmax, provenance))


def write_grid_csv(path: str, spec, values: np.ndarray,
                   widths: Optional[np.ndarray] = None,
                   provenance: Optional[dict] = None) -> None:
    """Row-major grid dump with pixel-center coordinates; sidecar metadata."""
    re, im = spec.param_axes()
    cols = "iy,ix,re,im,value" + (",width" if widths is not None else "")
    lines = [cols]
    for iy in range(spec.ny):
        for ix in range(spec.nx):
            base = f"{iy},{ix},{re[ix]!r},{im[iy]!r},{values[iy, ix]!r}"
            if widths is not None:
                base += f",{widths[iy, ix]!r}"
            lines.append(base)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    if provenance is not None:
        with open(path + ".meta.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(provenance, fh, indent=2, sort_keys=True)
            fh.write("\n")


def write_json_report(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
