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
Command-line entry point.

Usage: python -m src.spectraprune.cli <command> [options]

Exit codes: 0 ok, 1 usage or parameter error, 2 unreadable input or shape
mismatch, 3 numerical failure. Reports go to stdout unless --out/--report
names a file; diagnostics go to stderr.
"""

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from pydantic import ValidationError

from .commands import EXIT_DATA, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, execute, publish
from .config import get_settings
from .errors import (
    ConvergenceError,
    DegenerateQuantileError,
    NpyFormatError,
    ParameterError,
    ReportIOError,
    ShapeMismatchError,
)
from .models.parameters.sparsify_params import SparsifyMethod
from .models.tensors import TensorDtype

logger = logging.getLogger(__name__)

PROG = "spectraprune"


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _comma_list(cast: Callable[[str], Any]) -> Callable[[str], List[Any]]:
    def parse(text: str) -> List[Any]:
        items = [item.strip() for item in text.split(",")]
        if not text.strip() or any(not item for item in items):
            raise argparse.ArgumentTypeError(f"malformed list {text!r}")
        try:
            return [cast(item) for item in items]
        except ValueError:
            raise argparse.ArgumentTypeError(f"malformed list {text!r}")

    return parse


def _common(parser: argparse.ArgumentParser, out_help: str) -> None:
    parser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    parser.add_argument("--out", help=out_help)
    parser.add_argument(
        "--format", choices=["json", "csv"], default="json", help="report format"
    )


def _tensor_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--report", help="report path (default stdout)")
    parser.add_argument(
        "--dtype",
        choices=[d.value for d in TensorDtype],
        default=TensorDtype.F64.value,
        help="element type of written tensors",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog=PROG,
        description="Spectrum-preserving sparsification of neural network weights",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True
    methods = [m.value for m in SparsifyMethod]

    analyze = commands.add_parser("analyze", help="spectrum summary of a matrix")
    analyze.add_argument("input", help="2-D matrix or 4-D kernel NPY")
    analyze.add_argument("--topk", dest="top_k", type=int, default=10)
    _common(analyze, "report path (default stdout)")

    sparsify = commands.add_parser("sparsify", help="sparsify one matrix")
    sparsify.add_argument("input", help="2-D matrix or 4-D kernel NPY")
    sparsify.add_argument("--method", choices=methods, required=True)
    sparsify.add_argument("--keep", type=float, help="keep fraction (threshold)")
    sparsify.add_argument("--q", type=float, help="quantile kept unchanged")
    sparsify.add_argument("--c", type=float, help="lower probability cutoff")
    sparsify.add_argument("--rank", type=int, help="guiding rank (lowrank)")
    sparsify.add_argument("--mask", help="path for the 0/1 mask NPY")
    sparsify.add_argument("--allow-degenerate", action="store_true")
    _common(sparsify, "path for the sparsified NPY")
    _tensor_output(sparsify)

    sweep = commands.add_parser("sweep", help="sparsity sweep report")
    sweep.add_argument("input", help="2-D matrix or 4-D kernel NPY")
    sweep.add_argument("--method", choices=methods, required=True)
    sweep.add_argument("--grid", type=_comma_list(float), help="e.g. 0.2,0.1,0.05")
    sweep.add_argument("--grid-q", type=_comma_list(float))
    sweep.add_argument("--grid-rank", type=_comma_list(int))
    sweep.add_argument("--c", type=float)
    sweep.add_argument("--rank", type=int)
    _common(sweep, "report path (default stdout)")

    conv_check = commands.add_parser(
        "conv-check", help="compare direct and matrix-form convolution"
    )
    conv_check.add_argument("kernel", help="4-D kernel NPY")
    conv_check.add_argument("signal", help="3-D signal NPY")
    conv_check.add_argument("--stride", type=int, default=1)
    conv_check.add_argument("--pad", type=int, default=0)
    _common(conv_check, "report path (default stdout)")

    channels = commands.add_parser("channels", help="score or prune output channels")
    channels.add_argument("kernel", help="4-D kernel NPY")
    mode = channels.add_mutually_exclusive_group(required=True)
    mode.add_argument("--remove", type=int, metavar="N")
    mode.add_argument("--score-only", action="store_true")
    _common(channels, "pruned kernel path (--remove) or report path (--score-only)")
    _tensor_output(channels)

    compare = commands.add_parser("compare", help="paired spectra of two weights")
    compare.add_argument("a", help="original NPY")
    compare.add_argument("b", help="modified NPY")
    compare.add_argument("--topk", dest="top_k", type=int, default=10)
    _common(compare, "report path (default stdout)")

    trajectory = commands.add_parser("trajectory", help="norms over snapshots")
    trajectory.add_argument("snapshots", nargs="+", help="snapshot NPY files")
    trajectory.add_argument("--labels", type=_comma_list(str))
    _common(trajectory, "report path (default stdout)")

    return parser


def _fail(code: int, error: Exception) -> int:
    sys.stderr.write(f"{PROG}: error: {error}\n")
    return code


def run(command: str, arguments: Dict[str, Any]) -> int:
    """Run one command and map its failures to exit codes."""
    try:
        outcome = execute(command, arguments)
        text = publish(outcome)
    except ValidationError as e:
        return _fail(EXIT_USAGE, e)
    except (NpyFormatError, ShapeMismatchError, ReportIOError) as e:
        return _fail(EXIT_DATA, e)
    except ParameterError as e:
        return _fail(EXIT_USAGE, e)
    except (ConvergenceError, DegenerateQuantileError) as e:
        return _fail(EXIT_NUMERIC, e)
    except OSError as e:
        return _fail(EXIT_DATA, e)
    if text is not None:
        sys.stdout.write(text)
    logger.info(f"{command} finished with exit code {outcome.exit_code}")
    return outcome.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code is None else int(e.code)

    try:
        settings = get_settings()
    except ValueError as e:
        return _fail(EXIT_USAGE, e)
    logging.basicConfig(
        level=settings.log_level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    arguments = {
        key: value
        for key, value in vars(args).items()
        if key != "command" and value is not None
    }
    return run(args.command, arguments)


if __name__ == "__main__":
    sys.exit(main())
