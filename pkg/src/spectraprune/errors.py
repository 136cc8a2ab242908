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
Exception hierarchy for spectraprune.

Library code raises these; the CLI maps them onto exit codes and the tool
server turns them into error replies.
"""

from typing import Optional


class SpectraPruneError(Exception):
    """Base class for all spectraprune errors."""

    pass


class ParameterError(SpectraPruneError, ValueError):
    """An argument violates a documented precondition."""

    pass


class ShapeMismatchError(ParameterError):
    """Two operands have incompatible shapes."""

    def __init__(self, message: str, *shapes: tuple):
        self.shapes = shapes
        if shapes:
            rendered = " vs ".join(str(tuple(s)) for s in shapes)
            message = f"{message}: {rendered}"
        super().__init__(message)


class ConvergenceError(SpectraPruneError):
    """An iterative numerical routine did not converge."""

    pass


class DegenerateQuantileError(SpectraPruneError):
    """The quantile cut t is zero and degenerate results were not allowed."""

    pass


class ReportIOError(SpectraPruneError):
    """Writing an output file failed."""

    def __init__(self, path, error: Exception):
        self.path = str(path)
        super().__init__(f"Cannot write {self.path}: {error}")


class NpyFormatError(SpectraPruneError):
    """Base class for NPY parse errors; carries the byte offset of the fault."""

    def __init__(self, message: str, offset: int, path: Optional[str] = None):
        self.offset = offset
        self.path = path
        where = f"{path}: " if path else ""
        super().__init__(f"{where}{message} (at byte offset {offset})")


class BadMagicError(NpyFormatError):
    pass


class HeaderError(NpyFormatError):
    pass


class UnsupportedDtypeError(NpyFormatError):
    pass


class FortranOrderError(NpyFormatError):
    pass


class TruncatedPayloadError(NpyFormatError):
    pass


class TrailingDataError(NpyFormatError):
    pass


class NonFiniteDataError(NpyFormatError):
    pass


__all__ = [
    "SpectraPruneError",
    "ParameterError",
    "ShapeMismatchError",
    "ConvergenceError",
    "DegenerateQuantileError",
    "ReportIOError",
    "NpyFormatError",
    "BadMagicError",
    "HeaderError",
    "UnsupportedDtypeError",
    "FortranOrderError",
    "TruncatedPayloadError",
    "TrailingDataError",
    "NonFiniteDataError",
]
