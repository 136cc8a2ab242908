# spectraprune - Spectrum-preserving sparsification of neural network weights
# Copyright (C) 2025 cabout.me
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published
# by the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""
NPY tensor files, binary masks and JSON/CSV reports.

Only little-endian float32/float64 C-order NPY files of version 1.0 or 2.0
are accepted. Written headers follow numpy's own layout (sorted dict repr,
growth-axis spare space, padding to a 64-byte boundary) so files are
byte-identical to ``numpy.save`` output.
"""

import ast
import csv
import io
import json
import logging
import math
import struct
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .conv import unfold_kernel
from .errors import (
    BadMagicError,
    FortranOrderError,
    HeaderError,
    NonFiniteDataError,
    ParameterError,
    ReportIOError,
    ShapeMismatchError,
    TrailingDataError,
    TruncatedPayloadError,
    UnsupportedDtypeError,
)
from .linalg import as_matrix
from .models.tensors import TensorDtype, TensorFile

logger = logging.getLogger(__name__)

MAGIC = b"\x93NUMPY"
HEADER_ALIGN = 64
GROWTH_AXIS_MAX_DIGITS = 21
HEADER_KEYS = {"descr", "fortran_order", "shape"}
SUPPORTED_NDIMS = (2, 3, 4)

PathLike = Union[str, Path]


# ============================================================================
# NPY reading
# ============================================================================


def parse_npy(data: bytes, path: Optional[str] = None) -> TensorFile:
    """
    Parse the bytes of an NPY file.

    Raises:
        NpyFormatError: A subclass naming the fault and its byte offset
    """
    if len(data) < len(MAGIC) + 2 or data[: len(MAGIC)] != MAGIC:
        raise BadMagicError("missing \\x93NUMPY magic string", 0, path)
    version = (data[6], data[7])
    if version == (1, 0):
        length_format = "<H"
    elif version == (2, 0):
        length_format = "<I"
    else:
        raise HeaderError(f"unsupported NPY version {version[0]}.{version[1]}", 6, path)

    header_start = 8 + struct.calcsize(length_format)
    if len(data) < header_start:
        raise HeaderError("file ends inside the header length field", len(data), path)
    (header_len,) = struct.unpack_from(length_format, data, 8)
    header_end = header_start + header_len
    if len(data) < header_end:
        raise HeaderError(
            f"header needs {header_len} bytes, file ends early", len(data), path
        )

    try:
        header = ast.literal_eval(data[header_start:header_end].decode("latin1"))
    except (ValueError, SyntaxError) as e:
        raise HeaderError(f"malformed header dict: {e}", header_start, path) from e
    if not isinstance(header, dict) or set(header) != HEADER_KEYS:
        raise HeaderError(
            f"header must have exactly the keys {sorted(HEADER_KEYS)}",
            header_start,
            path,
        )

    descr = header["descr"]
    if descr not in ("<f4", "<f8"):
        raise UnsupportedDtypeError(f"unsupported dtype {descr!r}", header_start, path)
    if header["fortran_order"] is not False:
        raise FortranOrderError("fortran_order arrays are unsupported", header_start, path)
    shape = header["shape"]
    if (
        not isinstance(shape, tuple)
        or len(shape) not in SUPPORTED_NDIMS
        or not all(isinstance(dim, int) and dim >= 1 for dim in shape)
    ):
        raise HeaderError(
            f"unsupported shape {shape!r}: expected 2, 3 or 4 positive dimensions",
            header_start,
            path,
        )

    dtype = TensorDtype.from_descr(descr)
    count = math.prod(shape)
    payload_end = header_end + count * dtype.numpy_dtype.itemsize
    if len(data) < payload_end:
        raise TruncatedPayloadError(
            f"payload needs {payload_end - header_end} bytes, "
            f"found {len(data) - header_end}",
            len(data),
            path,
        )
    if len(data) > payload_end:
        raise TrailingDataError(
            f"{len(data) - payload_end} unexpected bytes after the payload",
            payload_end,
            path,
        )

    values = np.frombuffer(data, dtype=dtype.numpy_dtype, count=count, offset=header_end)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise NonFiniteDataError(
            f"payload holds {bad.size} NaN or Inf values",
            header_end + int(bad[0]) * dtype.numpy_dtype.itemsize,
            path,
        )
    payload = values.astype(np.float64).reshape(shape)
    payload.setflags(write=False)
    return TensorFile(dtype=dtype, shape=list(shape), payload=payload)


def read_npy(path: PathLike) -> TensorFile:
    """Read an NPY file; float32 payloads are widened to float64."""
    data = Path(path).read_bytes()
    tensor = parse_npy(data, str(path))
    logger.debug(f"Read {path}: {tensor.dtype.value} {tensor.shape}")
    return tensor


# ============================================================================
# NPY writing
# ============================================================================


def encode_npy(tensor: TensorFile) -> bytes:
    """NPY v1.0 bytes for a tensor, using numpy's header layout."""
    shape = tuple(tensor.shape)
    header = "{'descr': %r, 'fortran_order': False, 'shape': %r, }" % (
        tensor.dtype.descr,
        shape,
    )
    header += " " * (GROWTH_AXIS_MAX_DIGITS - len(repr(shape[0])))
    encoded = header.encode("latin1")
    # header text plus its trailing newline
    length = len(encoded) + 1
    padding = HEADER_ALIGN - ((len(MAGIC) + 2 + 2 + length) % HEADER_ALIGN)
    prefix = MAGIC + bytes([1, 0]) + struct.pack("<H", length + padding)
    payload = np.ascontiguousarray(tensor.payload, dtype=tensor.dtype.numpy_dtype)
    return prefix + encoded + b" " * padding + b"\n" + payload.tobytes()


def _write_bytes(path: PathLike, data: bytes) -> None:
    try:
        Path(path).write_bytes(data)
    except OSError as e:
        raise ReportIOError(path, e) from e
    logger.info(f"Wrote {path} ({len(data)} bytes)")


def write_npy(path: PathLike, tensor: TensorFile) -> None:
    """Write a tensor as NPY v1.0."""
    _write_bytes(path, encode_npy(tensor))


def write_mask(path: PathLike, mask) -> None:
    """Write a 0/1 mask as float32 NPY."""
    mask = np.asarray(mask, dtype=np.float64)
    if not np.all((mask == 0.0) | (mask == 1.0)):
        raise ParameterError("mask entries must all be 0 or 1")
    write_npy(path, TensorFile.from_array(mask, TensorDtype.F32))


def matrix_from_file(tensor: TensorFile) -> Tuple[np.ndarray, Optional[Tuple[int, ...]]]:
    """
    The matrix a tensor file stands for.

    Returns:
        (matrix, kernel shape); 4-D kernels are unfolded and their shape is
        returned so results can be folded back, 2-D inputs give None
    """
    if tensor.ndim == 2:
        return as_matrix(tensor.payload), None
    if tensor.ndim == 4:
        return unfold_kernel(tensor.payload), tuple(tensor.shape)
    raise ShapeMismatchError("expected a 2-D matrix or a 4-D kernel", tensor.shape)


# ============================================================================
# Reports
# ============================================================================


class ReportFormat(str, Enum):
    """Serialization of report documents."""

    JSON = "json"
    CSV = "csv"


class Report(BaseModel):
    """A schema-tagged list of flat rows plus run metadata."""

    model_config = ConfigDict(populate_by_name=True)

    schema_name: str = Field(alias="schema")
    meta: Dict[str, Any] = Field(default_factory=dict)
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    columns: List[str] = Field(
        default_factory=list, exclude=True, description="CSV column order"
    )


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_report(report: Report, fmt: ReportFormat = ReportFormat.JSON) -> str:
    """Serialize a report; floats keep full float64 precision in both formats."""
    if ReportFormat(fmt) == ReportFormat.JSON:
        return json.dumps(report.model_dump(by_alias=True), indent=2) + "\n"

    columns: List[str] = list(report.columns)
    for row in report.rows:
        columns.extend(key for key in row if key not in columns)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in report.rows:
        writer.writerow([_csv_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def write_report(
    path: PathLike, report: Report, fmt: ReportFormat = ReportFormat.JSON
) -> None:
    """Write a rendered report to path."""
    _write_bytes(path, render_report(report, fmt).encode("utf-8"))
