"""
Features package for the bounded-rational decision toolkit.

This package contains the stateful workflows: the public goods game,
tabular MDP evaluation, regularized self-play, synthetic panels and the
lambda sweep.
"""

from .finite_mdp import mdp_expected_return
from .public_goods import PublicGoodsGame, pgg_episode, pgg_payoff
from .selfplay import RegularizedAgent, pgg_selfplay
from .sweep_runner import SweepRunner
from .synthetic_panels import synth_panel

__all__ = [
    "PublicGoodsGame",
    "pgg_payoff",
    "pgg_episode",
    "mdp_expected_return",
    "RegularizedAgent",
    "pgg_selfplay",
    "synth_panel",
    "SweepRunner",
]
