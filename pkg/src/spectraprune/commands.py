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
Command layer shared by the CLI and the tool server.

Each ``run_*`` function takes a validated parameter model, reads its NPY
inputs, writes any tensor outputs and returns the report to publish.
"""

import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Type

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .analysis import (
    channel_sweep,
    compare_spectra,
    removal_effects,
    sparsity_sweep,
    spectrum_summary,
    trajectory_report,
)
from .conv import conv_as_matmul, conv_direct, fold_kernel, prune_channels
from .errors import DegenerateQuantileError, ShapeMismatchError
from .handlers.report_handler import (
    channels_report,
    compare_report,
    conv_check_report,
    spectrum_report,
    sweep_report,
    trajectory_doc,
)
from .linalg import frobenius_norm
from .models.parameters.command_params import (
    AnalyzeParams,
    ChannelsParams,
    CommandParams,
    CompareParams,
    ConvCheckParams,
    SparsifyParams,
    SweepParams,
    TrajectoryParams,
)
from .models.reports import ConvCheckResult, SweepRow
from .models.tensors import TensorFile
from .sparsify import sparsify
from .weights_io import (
    Report,
    ReportFormat,
    matrix_from_file,
    read_npy,
    render_report,
    write_mask,
    write_npy,
    write_report,
)

logger = logging.getLogger(__name__)

CONV_TOLERANCE = 1e-10

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class CommandOutcome(BaseModel):
    """Report produced by a command and where it should go."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    report: Report
    report_path: Optional[str] = Field(None, description="None means stdout")
    fmt: ReportFormat = ReportFormat.JSON
    exit_code: int = EXIT_OK
    written: List[str] = Field(default_factory=list, description="Tensor files")


def _meta(command: str, params: CommandParams, **extra: Any) -> Dict[str, Any]:
    return {"command": command, "seed": params.seed, **extra}


def _load_matrix(path: str) -> Tuple[np.ndarray, Optional[Tuple[int, ...]]]:
    return matrix_from_file(read_npy(path))


def _load(path: str, ndim: int, role: str) -> TensorFile:
    tensor = read_npy(path)
    if tensor.ndim != ndim:
        raise ShapeMismatchError(f"{path}: expected a {ndim}-D {role}", tensor.shape)
    return tensor


def _clip_top_k(top_k: int, matrix: np.ndarray) -> int:
    limit = min(matrix.shape)
    if top_k > limit:
        logger.warning(f"--topk {top_k} exceeds min(m, n) = {limit}; clipped to {limit}")
        return limit
    return top_k


def _outcome(
    report: Report, params: CommandParams, path: Optional[str], **kwargs: Any
) -> CommandOutcome:
    return CommandOutcome(
        report=report, report_path=path, fmt=ReportFormat(params.format), **kwargs
    )


def run_analyze(params: AnalyzeParams) -> CommandOutcome:
    matrix, kernel_shape = _load_matrix(params.input)
    top_k = _clip_top_k(params.top_k, matrix)
    logger.info(f"Analyzing {params.input} as a {matrix.shape} matrix")
    meta = _meta(
        "analyze",
        params,
        input=params.input,
        top_k=top_k,
        kernel_shape=list(kernel_shape) if kernel_shape else None,
    )
    report = spectrum_report(spectrum_summary(matrix, top_k), meta)
    return _outcome(report, params, params.out)


def run_sparsify(params: SparsifyParams) -> CommandOutcome:
    """
    Sparsify one input and write the result, its mask and a sweep-v1 row.

    Kernels are sparsified in their unfolded form and folded back before
    writing, so the outputs keep the input's shape.

    Raises:
        DegenerateQuantileError: If the quantile cut is zero and
            allow_degenerate is not set; nothing is written in that case
    """
    matrix, kernel_shape = _load_matrix(params.input)
    config = params.to_config()
    logger.info(
        f"Sparsifying {params.input} {matrix.shape} with {config.method.value}, "
        f"seed {config.seed}"
    )
    result = sparsify(matrix, config)
    if result.degenerate and not params.allow_degenerate:
        raise DegenerateQuantileError(
            f"quantile cut t is 0 for {params.input} at q={config.q}; "
            "pass --allow-degenerate to accept the unchanged matrix"
        )

    sparse = result.sparse
    mask = result.mask.astype(np.float64)
    if kernel_shape:
        sparse = fold_kernel(sparse, *kernel_shape)
        mask = fold_kernel(mask, *kernel_shape)
    written = []
    if params.out:
        write_npy(params.out, TensorFile.from_array(sparse, params.dtype))
        written.append(params.out)
    if params.mask:
        write_mask(params.mask, mask)
        written.append(params.mask)

    row = SweepRow(
        config=config,
        achieved_sparsity=result.achieved_sparsity,
        err_two_norm=result.err_two_norm,
        err_f_norm=result.err_f_norm,
        tilde_f_norm=frobenius_norm(result.sparse),
        degenerate=result.degenerate,
    )
    meta = _meta(
        "sparsify",
        params,
        input=params.input,
        threshold_t=result.threshold_t,
        nnz=result.nnz,
        outputs=written,
    )
    return _outcome(sweep_report([row], meta), params, params.report, written=written)


def run_sweep(params: SweepParams) -> CommandOutcome:
    matrix, _ = _load_matrix(params.input)
    rows = sparsity_sweep(
        matrix,
        params.method,
        params.values,
        params.fixed_config(),
        params.seed,
        params.grid_rank,
    )
    meta = _meta(
        "sweep",
        params,
        input=params.input,
        method=params.method.value,
        grid=params.values,
        grid_rank=params.grid_rank,
    )
    return _outcome(sweep_report(rows, meta), params, params.out)


def run_conv_check(params: ConvCheckParams) -> CommandOutcome:
    """Run both convolution forms; the exit code is 3 when they disagree."""
    kernel = _load(params.kernel, 4, "kernel")
    signal = _load(params.signal, 3, "signal")
    direct = conv_direct(signal.payload, kernel.payload, params.stride, params.pad)
    lowered = conv_as_matmul(signal.payload, kernel.payload, params.stride, params.pad)
    result = ConvCheckResult(
        kernel_shape=tuple(kernel.shape),
        signal_shape=tuple(signal.shape),
        output_shape=direct.shape,
        stride=params.stride,
        pad=params.pad,
        max_abs_deviation=float(np.max(np.abs(direct - lowered))),
        tolerance=CONV_TOLERANCE,
    )
    if not result.passed:
        logger.warning(
            f"Convolution forms deviate by {result.max_abs_deviation:.3e} "
            f"(tolerance {CONV_TOLERANCE:.0e})"
        )
    meta = _meta("conv-check", params, kernel=params.kernel, signal=params.signal)
    return _outcome(
        conv_check_report(result, meta),
        params,
        params.out,
        exit_code=EXIT_OK if result.passed else EXIT_NUMERIC,
    )


def run_channels(params: ChannelsParams) -> CommandOutcome:
    tensor = _load(params.kernel, 4, "kernel")
    meta = _meta("channels", params, kernel=params.kernel)
    if params.score_only:
        rows = channel_sweep(tensor.payload)
        return _outcome(channels_report(rows, meta), params, params.out)

    pruned, removed = prune_channels(tensor.payload, params.remove)
    rows = removal_effects(tensor.payload)
    written = []
    if params.out:
        write_npy(params.out, TensorFile.from_array(pruned, params.dtype))
        written.append(params.out)
    meta["outputs"] = written
    return _outcome(
        channels_report(rows, meta, removed), params, params.report, written=written
    )


def run_compare(params: CompareParams) -> CommandOutcome:
    original = read_npy(params.a)
    modified = read_npy(params.b)
    if original.shape != modified.shape:
        raise ShapeMismatchError(
            f"cannot compare {params.a} with {params.b}", original.shape, modified.shape
        )
    a, _ = matrix_from_file(original)
    b, _ = matrix_from_file(modified)
    top_k = _clip_top_k(params.top_k, a)
    meta = _meta("compare", params, a=params.a, b=params.b, top_k=top_k)
    return _outcome(compare_report(compare_spectra(a, b, top_k), meta), params, params.out)


def run_trajectory(params: TrajectoryParams) -> CommandOutcome:
    labels = params.labels or [Path(path).stem for path in params.snapshots]
    snapshots = [
        (label, _load_matrix(path)[0]) for label, path in zip(labels, params.snapshots)
    ]
    meta = _meta("trajectory", params, snapshots=list(params.snapshots))
    report = trajectory_doc(trajectory_report(snapshots), meta)
    return _outcome(report, params, params.out)


COMMAND_REGISTRY: Dict[str, Tuple[Type[CommandParams], Callable[..., CommandOutcome]]] = {
    "analyze": (AnalyzeParams, run_analyze),
    "sparsify": (SparsifyParams, run_sparsify),
    "sweep": (SweepParams, run_sweep),
    "conv-check": (ConvCheckParams, run_conv_check),
    "channels": (ChannelsParams, run_channels),
    "compare": (CompareParams, run_compare),
    "trajectory": (TrajectoryParams, run_trajectory),
}


def execute(command: str, arguments: Dict[str, Any]) -> CommandOutcome:
    """Validate arguments for a named command and run it."""
    if command not in COMMAND_REGISTRY:
        raise ValueError(f"Unknown command: {command}")
    model, runner = COMMAND_REGISTRY[command]
    return runner(model.model_validate(arguments))


def publish(outcome: CommandOutcome) -> Optional[str]:
    """
    Write the report to its path, or return the rendered text for stdout.

    Returns:
        Rendered report when no report path is set, else None
    """
    if outcome.report_path:
        write_report(outcome.report_path, outcome.report, outcome.fmt)
        return None
    return render_report(outcome.report, outcome.fmt)
