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
Configuration management for spectraprune.
"""

import os
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

# Load environment variables from .env file
load_dotenv()


class Settings(BaseModel):
    """Application settings loaded from environment variables."""

    threads: int = Field(
        default_factory=lambda: os.cpu_count() or 1,
        ge=1,
        description="Maximum worker threads for sweep evaluation",
    )
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        "WARNING", description="Root log level for the CLI and the tool server"
    )
    full_svd_cutoff: int = Field(
        512,
        ge=1,
        description="min(rows, cols) above which summaries use the truncated SVD",
    )


def get_settings() -> Settings:
    """Get settings from environment variables."""
    values = {}
    if "SPECTRAPRUNE_THREADS" in os.environ:
        values["threads"] = os.environ["SPECTRAPRUNE_THREADS"]
    if "SPECTRAPRUNE_LOG_LEVEL" in os.environ:
        values["log_level"] = os.environ["SPECTRAPRUNE_LOG_LEVEL"].upper()
    if "SPECTRAPRUNE_FULL_SVD_CUTOFF" in os.environ:
        values["full_svd_cutoff"] = os.environ["SPECTRAPRUNE_FULL_SVD_CUTOFF"]
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ValueError(f"Invalid configuration: {e}")
