"""
Shared fixtures for the spectraprune test suite.
"""

import numpy as np
import pytest

from src.spectraprune.models.tensors import TensorDtype, TensorFile
from src.spectraprune.weights_io import write_npy


@pytest.fixture
def save_npy(tmp_path):
    """Write an array as NPY under tmp_path and return the path as a string."""

    def _save(name, array, dtype=TensorDtype.F64):
        path = tmp_path / name
        write_npy(path, TensorFile.from_array(np.asarray(array), dtype))
        return str(path)

    return _save


@pytest.fixture
def clean_env(monkeypatch):
    """Remove SPECTRAPRUNE_* variables so settings use their defaults."""
    for name in (
        "SPECTRAPRUNE_THREADS",
        "SPECTRAPRUNE_LOG_LEVEL",
        "SPECTRAPRUNE_FULL_SVD_CUTOFF",
    ):
        monkeypatch.delenv(name, raising=False)
    return monkeypatch
