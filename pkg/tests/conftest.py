"""Shared fixtures: the three bundled complexes and their triangulations."""

from pathlib import Path

import numpy as np
import pytest

from idealflow import load_complex, triangulate

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@pytest.fixture(scope="module")
def torus():
    return load_complex(INSTANCES / "square_torus.json")


@pytest.fixture(scope="module")
def octagon():
    return load_complex(INSTANCES / "genus2_octagon.json")


@pytest.fixture(scope="module")
def cube():
    return load_complex(INSTANCES / "cube.json")


@pytest.fixture(scope="module")
def ttorus(torus):
    return triangulate(torus)


@pytest.fixture(scope="module")
def toctagon(octagon):
    return triangulate(octagon)


@pytest.fixture(scope="module")
def tcube(cube):
    return triangulate(cube)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
