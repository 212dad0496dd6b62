# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# agents.py - 투자자 전략 구현
# ==============================================================================

"""
Investor implementations for robustport v1.0
Includes the abstract base class and the robust, partial-information,
Merton and constant-position investors driven by the simulator.
"""

from abc import ABC, abstractmethod

import numpy as np

from .analytic_oracles import merton_strategy, partial_info_strategy
from .enums import StrategyKind
from .pde_engine import surface_lookup
from .strategy import robust_position


class Agent(ABC):
    """
    Abstract base class for all investors.

    Attributes:
        params (MarketParams): Market the investor trades in
        prior (Prior): Prior the investor learns from
        kind (StrategyKind): Strategy family
        name (str): Label used in reports
    """

    kind = None

    def __init__(self, params, prior, name=None):
        self.params = params
        self.prior = prior
        self.name = name or self.kind.value

    @abstractmethod
    def position(self, t, y):
        """
        Dollar amount held in the risky asset.

        Args:
            t: Current time
            y: Array of posterior means, one per path

        Returns:
            Array of positions shaped like y
        """

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name!r})"


class RobustAgent(Agent):
    """
    Ambiguity-averse learner reading f_y off a solution surface.
    """

    kind = StrategyKind.Robust

    def __init__(self, params, prior, surface, name=None):
        super().__init__(params, prior, name)
        self.surface = surface

    def position(self, t, y):
        f_y = surface_lookup(self.surface, t, y)[1]
        return np.asarray(robust_position(self.params, self.prior, t, y, f_y), dtype=float)


class PartialInfoAgent(Agent):
    """Bayesian learner without a drift set (a = 0)."""

    kind = StrategyKind.PartialInfo

    def position(self, t, y):
        return np.asarray(partial_info_strategy(self.params, self.prior, t, np.asarray(y, dtype=float)))


class MertonAgent(Agent):
    """Investor who takes the prior mean as the true drift and never learns."""

    kind = StrategyKind.Merton

    def position(self, t, y):
        return np.full(np.shape(y), merton_strategy(self.params, self.prior, t))


class ConstantAgent(Agent):
    """Fixed dollar position, e.g. zero for the money-market benchmark."""

    kind = StrategyKind.Constant

    def __init__(self, params, prior, amount, name=None):
        super().__init__(params, prior, name or f"constant({amount:g})")
        self.amount = float(amount)

    def position(self, t, y):
        return np.full(np.shape(y), self.amount)


def build_agents(params, prior, surface, kinds, constant_amount=0.0):
    """Instantiate one investor per StrategyKind, in the given order."""
    agent_map = {
        StrategyKind.Robust: lambda: RobustAgent(params, prior, surface),
        StrategyKind.PartialInfo: lambda: PartialInfoAgent(params, prior),
        StrategyKind.Merton: lambda: MertonAgent(params, prior),
        StrategyKind.Constant: lambda: ConstantAgent(params, prior, constant_amount),
    }
    return [agent_map[StrategyKind(kind)]() for kind in kinds]
