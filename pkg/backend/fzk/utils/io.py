"""
Run artifacts: the FZK1 field container, CSV tables, JSON records and the
sha256 manifest.
"""
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import hashlib
import json
import logging

import numpy as np
import pandas as pd

from ..errors import GridError
from ..schemas import FieldHeader
from ..spectral import Field, SpectralGrid

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

FIELD_MAGIC = b"FZK1"
HEADER_DTYPE = np.dtype([
    ("magic", "S4"),
    ("n", "<u4"),
    ("M", "<u4"),
    ("L", "<f8"),
    ("real_flag", "u1"),
])
COEFF_DTYPE = np.dtype("<c8")
MANIFEST_NAME = "manifest.json"


# ============================================================================
# FIELD CONTAINER
# ============================================================================

def sidecar_path(path: PathLike) -> Path:
    return Path(path).with_suffix(".json")


def field_header(f: Field) -> FieldHeader:
    return FieldHeader(n=f.grid.n, M=f.grid.modes_per_dim, L=f.grid.period, real_flag=f.real_flag)


def write_field(path: PathLike, f: Field) -> Path:
    """
    Write header + little-endian complex64 coefficients in row-major
    signed-frequency order (-M/2 .. M/2-1 on every axis), plus a JSON
    sidecar carrying the same header.
    """
    path = Path(path)
    header = field_header(f)
    record = np.array([(FIELD_MAGIC, header.n, header.M, header.L, int(header.real_flag))], dtype=HEADER_DTYPE)
    signed = np.fft.fftshift(f.coeffs).astype(COEFF_DTYPE)
    with open(path, "wb") as fh:
        fh.write(record.tobytes())
        fh.write(np.ascontiguousarray(signed).tobytes())
    sidecar_path(path).write_text(header.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.debug(f"Wrote field {path} ({header.M}^{header.n} modes)")
    return path


def read_field(path: PathLike) -> Field:
    raw = Path(path).read_bytes()
    if len(raw) < HEADER_DTYPE.itemsize:
        raise GridError(f"{path}: truncated FZK1 header")
    record = np.frombuffer(raw[:HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)[0]
    if bytes(record["magic"]) != FIELD_MAGIC:
        raise GridError(f"{path}: not an FZK1 container")
    n, M, L = int(record["n"]), int(record["M"]), float(record["L"])
    grid = SpectralGrid(n, M, L)
    count = M ** n
    body = np.frombuffer(raw[HEADER_DTYPE.itemsize:], dtype=COEFF_DTYPE)
    if body.size != count:
        raise GridError(f"{path}: expected {count} coefficients, found {body.size}")
    coeffs = np.fft.ifftshift(body.reshape(grid.shape).astype(np.complex128))
    return Field(grid, coeffs, bool(record["real_flag"]))


# ============================================================================
# TABLES AND RECORDS
# ============================================================================

def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    """Comma-separated, header row, '.' decimal, round-trippable floats"""
    path = Path(path)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path


def write_json(path: PathLike, payload: Any) -> Path:
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=False, default=str) + "\n", encoding="utf-8")
    return path


def sha256_file(path: PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(out_dir: PathLike, spec_echo: Dict[str, Any], versions: Dict[str, str]) -> Path:
    """
    manifest.json listing every file under out_dir with its sha256.

    The manifest lists itself with a null digest.
    """
    out_dir = Path(out_dir)
    files: List[Dict[str, Optional[str]]] = []
    for path in sorted(p for p in out_dir.rglob("*") if p.is_file()):
        rel = path.relative_to(out_dir).as_posix()
        if rel == MANIFEST_NAME:
            continue
        files.append({"path": rel, "sha256": sha256_file(path)})
    files.append({"path": MANIFEST_NAME, "sha256": None})
    manifest = write_json(out_dir / MANIFEST_NAME, {"spec_echo": spec_echo, "files": files, "versions": versions})
    logger.info(f"📦 Manifest lists {len(files)} files in {out_dir}")
    return manifest
