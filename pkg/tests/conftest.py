"""Shared fixtures for the bellnet-sim test suite"""

import numpy as np
import pytest

from channels import bell_state
from config import settings
from quantum import CompositeSpace, DensityMatrix


@pytest.fixture
def two_qubits() -> CompositeSpace:
    return CompositeSpace.qubits("A", "B")


@pytest.fixture
def psi_minus():
    return bell_state("psi-")


@pytest.fixture
def psi_minus_rho(psi_minus) -> DensityMatrix:
    return psi_minus.density()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def random_density(rng, two_qubits):
    """Factory for random full-rank two-qubit states."""

    def _make() -> DensityMatrix:
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = g @ g.conj().T
        return DensityMatrix(space=two_qubits, entries=rho / np.trace(rho))

    return _make


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "runs"
    path.mkdir()
    return path


@pytest.fixture
def isolated_cache(tmp_path):
    """Point the last-run cache at a temporary directory."""
    with settings.override(CACHE_DIR=str(tmp_path / "cache")):
        yield tmp_path / "cache"


@pytest.fixture
def damped_bell_matrix():
    """One-sided amplitude-damped psi- written out in (gg, ge, eg, ee) order."""

    def _matrix(p: float) -> np.ndarray:
        s = np.sqrt(1 - p)
        return 0.5 * np.array(
            [
                [p, 0, 0, 0],
                [0, 1 - p, -s, 0],
                [0, -s, 1, 0],
                [0, 0, 0, 0],
            ],
            dtype=complex,
        )

    return _matrix
