"""Deterministic random streams derived from one named seed per run."""

from typing import List

import numpy as np


def spawn_rngs(seed: int, count: int) -> List[np.random.Generator]:
    """
    Independent child generators (one per episode or subject).

    Child k depends only on (seed, k), so adding episodes never changes the
    streams of earlier ones.
    """
    children = np.random.SeedSequence(int(seed)).spawn(count)
    return [np.random.default_rng(child) for child in children]
