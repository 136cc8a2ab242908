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
Report handler: turns analysis models into schema-tagged report documents.

Every row is flat (scalars only) so the JSON and CSV renderings carry the
same columns.
"""

from typing import Any, Dict, List, Optional, Sequence

from ..models.parameters.sparsify_params import SparsifyMethod
from ..models.reports import (
    ChannelSweepRow,
    ConvCheckResult,
    NormTrajectory,
    SpectrumDelta,
    SpectrumSummary,
    SweepRow,
)
from ..weights_io import Report

SPECTRUM_SCHEMA = "spectrum-v1"
SWEEP_SCHEMA = "sweep-v1"
TRAJECTORY_SCHEMA = "trajectory-v1"
CHANNELS_SCHEMA = "channels-v1"
COMPARE_SCHEMA = "compare-v1"
CONV_CHECK_SCHEMA = "conv-check-v1"

SWEEP_COLUMNS = [
    "method",
    "keep_fraction",
    "q",
    "c",
    "rank_k",
    "seed",
    "achieved_sparsity",
    "err_two_norm",
    "err_f_norm",
    "tilde_f_norm",
    "degenerate",
]
TRAJECTORY_COLUMNS = ["label", "two_norm", "f_norm", "two_norm_delta", "f_norm_delta"]
CHANNELS_COLUMNS = ["channel_index", "l1_mass", "l2_mass", "tilde_f_norm", "removed"]
COMPARE_COLUMNS = [
    "index",
    "original_value",
    "tilde_value",
    "abs_delta",
    "err_two_norm",
    "err_f_norm",
]
CONV_CHECK_COLUMNS = [
    "kernel_shape",
    "signal_shape",
    "output_shape",
    "stride",
    "pad",
    "max_abs_deviation",
    "tolerance",
    "passed",
]


def _shape(shape: Sequence[int]) -> str:
    return "x".join(str(dim) for dim in shape)


def spectrum_report(summary: SpectrumSummary, meta: Dict[str, Any]) -> Report:
    """spectrum-v1: one row holding norms and sigma_1..sigma_k."""
    row: Dict[str, Any] = {
        "n_rows": summary.shape[0],
        "n_cols": summary.shape[1],
        "nnz": summary.nnz,
        "two_norm": summary.two_norm,
        "f_norm": summary.f_norm,
    }
    for index, value in enumerate(summary.top_singular_values, start=1):
        row[f"sigma_{index}"] = value
    return Report(schema=SPECTRUM_SCHEMA, meta=meta, rows=[row], columns=list(row))


def sweep_row(row: SweepRow) -> Dict[str, Any]:
    """Flatten one SweepRow; parameters the method ignores are None."""
    config = row.config
    sampled = config.method != SparsifyMethod.THRESHOLD
    return {
        "method": config.method.value,
        "keep_fraction": config.keep_fraction,
        "q": config.q if sampled else None,
        "c": config.c if sampled else None,
        "rank_k": config.rank_k if config.method == SparsifyMethod.LOWRANK else None,
        "seed": config.seed,
        "achieved_sparsity": row.achieved_sparsity,
        "err_two_norm": row.err_two_norm,
        "err_f_norm": row.err_f_norm,
        "tilde_f_norm": row.tilde_f_norm,
        "degenerate": row.degenerate,
    }


def sweep_report(rows: List[SweepRow], meta: Dict[str, Any]) -> Report:
    """sweep-v1: one row per sparsification setting."""
    return Report(
        schema=SWEEP_SCHEMA,
        meta=meta,
        rows=[sweep_row(row) for row in rows],
        columns=SWEEP_COLUMNS,
    )


def trajectory_doc(trajectory: NormTrajectory, meta: Dict[str, Any]) -> Report:
    """trajectory-v1: one row per snapshot with the change from the previous one."""
    two_deltas = [None] + trajectory.two_norm_deltas
    f_deltas = [None] + trajectory.f_norm_deltas
    rows = [
        {
            "label": label,
            "two_norm": two,
            "f_norm": f,
            "two_norm_delta": d_two,
            "f_norm_delta": d_f,
        }
        for label, two, f, d_two, d_f in zip(
            trajectory.labels,
            trajectory.two_norms,
            trajectory.f_norms,
            two_deltas,
            f_deltas,
        )
    ]
    return Report(
        schema=TRAJECTORY_SCHEMA, meta=meta, rows=rows, columns=TRAJECTORY_COLUMNS
    )


def channels_report(
    rows: List[ChannelSweepRow],
    meta: Dict[str, Any],
    removed: Optional[List[int]] = None,
) -> Report:
    """channels-v1: per-channel masses, ||A~||_F without it, and removal flag."""
    removed_set = set(removed or [])
    doc_rows = [
        {
            "channel_index": row.channel_index,
            "l1_mass": row.l1_mass,
            "l2_mass": row.l2_mass,
            "tilde_f_norm": row.tilde_f_norm,
            "removed": row.channel_index in removed_set,
        }
        for row in rows
    ]
    meta = {**meta, "removed": list(removed or [])}
    return Report(
        schema=CHANNELS_SCHEMA, meta=meta, rows=doc_rows, columns=CHANNELS_COLUMNS
    )


def compare_report(delta: SpectrumDelta, meta: Dict[str, Any]) -> Report:
    """compare-v1: paired singular values, one row per index."""
    rows = [
        {
            "index": index,
            "original_value": original,
            "tilde_value": tilde,
            "abs_delta": gap,
            "err_two_norm": delta.err_two_norm,
            "err_f_norm": delta.err_f_norm,
        }
        for index, (original, tilde, gap) in enumerate(
            zip(delta.original_values, delta.tilde_values, delta.abs_deltas), start=1
        )
    ]
    meta = {
        **meta,
        "shape": list(delta.shape),
        "err_two_norm": delta.err_two_norm,
        "err_f_norm": delta.err_f_norm,
        "max_abs_delta": delta.max_abs_delta,
        "top_k_relative_error": delta.top_k_relative_error,
    }
    return Report(schema=COMPARE_SCHEMA, meta=meta, rows=rows, columns=COMPARE_COLUMNS)


def conv_check_report(result: ConvCheckResult, meta: Dict[str, Any]) -> Report:
    """conv-check-v1: a single row with the deviation and pass flag."""
    row = {
        "kernel_shape": _shape(result.kernel_shape),
        "signal_shape": _shape(result.signal_shape),
        "output_shape": _shape(result.output_shape),
        "stride": result.stride,
        "pad": result.pad,
        "max_abs_deviation": result.max_abs_deviation,
        "tolerance": result.tolerance,
        "passed": result.passed,
    }
    return Report(
        schema=CONV_CHECK_SCHEMA, meta=meta, rows=[row], columns=CONV_CHECK_COLUMNS
    )
