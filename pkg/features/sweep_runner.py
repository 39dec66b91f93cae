"""
Lambda sweep over repeated public goods play.

Every (lambda, seed) cell is an independent self-play run. Cells may run on
a worker pool; rows are merged in (lambda, seed, round) order so the output
never depends on scheduling.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from features.selfplay import pgg_selfplay
from type_definitions.agent_types import OpponentSpec, PenaltyConfig, SweepRow
from type_definitions.distribution_types import ActionDistribution
from type_definitions.game_types import PggConfig
from utils.validators import (
    ValidationError,
    validate_lambda_grid,
    validate_positive_int,
    validate_seed_list,
)

logger = logging.getLogger("BoundedRational.SweepRunner")


class SweepRunner:
    """Runs a lambda grid against one game, cost kind and prior."""

    def __init__(
        self,
        cfg: PggConfig,
        template: PenaltyConfig,
        opponents: OpponentSpec = OpponentSpec(),
        episodes: int = 1,
        initial_prior: Optional[ActionDistribution] = None,
    ) -> None:
        self.cfg = cfg
        self.template = template
        self.opponents = opponents
        self.episodes = validate_positive_int(episodes, "episodes")
        self.initial_prior = initial_prior

    def run_cell(self, lam: float, seed: int) -> List[SweepRow]:
        """Per-round averages over agents and episodes for one cell."""
        penalty = PenaltyConfig(
            lam, self.template.cost_kind, self.template.prior, self.template.schedule
        )
        trajectory = pgg_selfplay(
            self.cfg,
            penalty,
            opponents=self.opponents,
            episodes=self.episodes,
            seed=seed,
            initial_prior=self.initial_prior,
        )
        frame = pd.DataFrame(trajectory.rows)
        per_round = frame.groupby("round", sort=True)[
            ["mean_contribution", "info_cost", "penalized_objective"]
        ].mean()
        cost_label = self.template.cost_kind.label()
        prior_label = self.template.prior.label()
        return [
            {
                "lam": float(lam),
                "cost_kind": cost_label,
                "prior": prior_label,
                "seed": int(seed),
                "round": int(round_no),
                "mean_contribution": float(values["mean_contribution"]),
                "info_cost": float(values["info_cost"]),
                "penalized_objective": float(values["penalized_objective"]),
            }
            for round_no, values in per_round.iterrows()
        ]

    def run(
        self, lambdas: Sequence[float], seeds: Sequence[int], workers: int = 1
    ) -> List[SweepRow]:
        """
        Run every (lambda, seed) cell.

        Args:
            lambdas: Nonnegative multipliers (sorted and deduplicated)
            seeds: Explicit, distinct seeds
            workers: Worker threads; 1 runs the cells in order

        Returns:
            Rows sorted by (lambda, seed, round)

        Raises:
            ValidationError: On an invalid grid, seed list or worker count
        """
        ok, grid = validate_lambda_grid(lambdas)
        if not ok:
            raise ValidationError(str(grid), field="lambdas")
        ok, seed_list = validate_seed_list(seeds)
        if not ok:
            raise ValidationError(str(seed_list), field="seeds")
        workers = validate_positive_int(workers, "workers")

        cells: List[Tuple[float, int]] = [
            (float(lam), int(seed)) for lam in grid for seed in seed_list  # type: ignore[union-attr]
        ]
        logger.info(
            f"Sweeping {len(cells)} cell(s): cost={self.template.cost_kind.label()}, "
            f"prior={self.template.prior.label()}, workers={workers}"
        )
        if workers == 1:
            results = [self.run_cell(lam, seed) for lam, seed in cells]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda cell: self.run_cell(*cell), cells))

        rows = [row for cell_rows in results for row in cell_rows]
        rows.sort(key=lambda r: (r["lam"], r["seed"], r["round"]))
        return rows


def sweep_summary(rows: Sequence[SweepRow]) -> pd.DataFrame:
    """Per-lambda averages over seeds and rounds."""
    frame = pd.DataFrame(list(rows))
    if frame.empty:
        return frame
    summary = frame.groupby("lam", sort=True).agg(
        mean_contribution=("mean_contribution", "mean"),
        info_cost=("info_cost", "mean"),
    )
    return summary.reset_index()
