"""
Synthetic contribution panels standing in for experimental data.

Generators:
- rational: everybody contributes 0 in every round
- iidUniform: independent uniform contributions over 0..endowment
- stickyDrift: small noisy steps with a proportional pull toward 0
"""

import logging
from typing import List, Union

import numpy as np
import pandas as pd

from type_definitions.analysis_types import ContributionPanel, SynthGenerator
from utils.random_streams import spawn_rngs
from utils.validators import (
    ValidationError,
    parse_number,
    split_spec,
    validate_positive_int,
)

logger = logging.getLogger("BoundedRational.SyntheticPanels")


def parse_generator(text: str) -> SynthGenerator:
    """Parse 'rational' | 'iidUniform' | 'stickyDrift[:DECAY[:STEP]]'."""
    parts = split_spec(text, "generator")
    names = {"rational": "rational", "iiduniform": "iidUniform", "stickydrift": "stickyDrift"}
    kind = names.get(parts[0].lower(), parts[0])
    if len(parts) > (3 if kind == "stickyDrift" else 1):
        raise ValidationError(f"Unexpected parameters in generator '{text}'", field="generator")
    if len(parts) == 1:
        return SynthGenerator(kind)
    decay = parse_number(parts[1], "decay_rate")
    step = parse_number(parts[2], "step_scale") if len(parts) > 2 else 2.0
    return SynthGenerator(kind, decay_rate=decay, step_scale=step)


def _sticky_path(
    rng: np.random.Generator, rounds: int, endowment: int, gen: SynthGenerator
) -> np.ndarray:
    path = np.empty(rounds, dtype=np.int64)
    current = int(rng.binomial(endowment, 0.5))
    for t in range(rounds):
        path[t] = current
        step = -gen.decay_rate * current + gen.step_scale * rng.standard_normal()
        current = int(np.clip(np.rint(current + step), 0, endowment))
    return path


def synth_panel(
    generator: Union[str, SynthGenerator],
    subjects: int,
    rounds: int,
    seed: int,
    endowment: int = 40,
    group_size: int = 4,
) -> ContributionPanel:
    """
    Generate a deterministic synthetic panel.

    Subject k draws from the k-th stream spawned from seed, so a panel with
    more subjects extends a smaller one without changing it.

    Args:
        generator: Generator spec or instance
        subjects: Number of subjects
        rounds: Rounds per subject
        seed: Run seed
        endowment: Maximum contribution
        group_size: Subjects per group (groups are consecutive subjects)

    Returns:
        ContributionPanel
    """
    gen = parse_generator(generator) if isinstance(generator, str) else generator
    subjects = validate_positive_int(subjects, "subjects")
    rounds = validate_positive_int(rounds, "rounds")
    endowment = validate_positive_int(endowment, "endowment")
    group_size = validate_positive_int(group_size, "group_size")

    paths: List[np.ndarray] = []
    for rng in spawn_rngs(seed, subjects):
        if gen.kind == "rational":
            paths.append(np.zeros(rounds, dtype=np.int64))
        elif gen.kind == "iidUniform":
            paths.append(rng.integers(0, endowment + 1, size=rounds))
        else:
            paths.append(_sticky_path(rng, rounds, endowment, gen))

    width = len(str(subjects - 1))
    frame = pd.DataFrame(
        {
            "subject": np.repeat([f"s{k:0{width}d}" for k in range(subjects)], rounds),
            "group": np.repeat([f"g{k // group_size}" for k in range(subjects)], rounds),
            "round": np.tile(np.arange(1, rounds + 1), subjects),
            "contribution": np.concatenate(paths),
        }
    )
    logger.info(f"Generated {gen.label()} panel: {subjects} subjects x {rounds} rounds")
    return ContributionPanel(frame, endowment=endowment)
