"""Shared fixtures: seeded generators and the 41-action contribution space."""

from typing import Callable

import numpy as np
import pytest

from type_definitions.distribution_types import ActionDistribution, ActionSpace

SPACE_41 = ActionSpace(41)


def random_distribution(
    rng: np.random.Generator, size: int = 41, sparsity: float = 0.0
) -> ActionDistribution:
    """Dirichlet draw; with sparsity > 0 some entries are zeroed out."""
    mass = rng.dirichlet(np.ones(size))
    if sparsity > 0.0:
        keep = rng.random(size) >= sparsity
        keep[rng.integers(size)] = True
        mass = np.where(keep, mass, 0.0)
    return ActionDistribution(ActionSpace(size), mass / mass.sum())


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def space41() -> ActionSpace:
    return SPACE_41


@pytest.fixture
def make_distribution(
    rng: np.random.Generator,
) -> Callable[..., ActionDistribution]:
    def _make(size: int = 41, sparsity: float = 0.0) -> ActionDistribution:
        return random_distribution(rng, size, sparsity)

    return _make


@pytest.fixture
def isolated_output(tmp_path, monkeypatch):
    """Run inside tmp_path so logs and default outputs stay out of the repo."""
    monkeypatch.chdir(tmp_path)
    return tmp_path
