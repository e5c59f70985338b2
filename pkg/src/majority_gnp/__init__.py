"""Majority dynamics on Erdos-Renyi graphs: simulator and explicit bounds."""

from .bounds import BoundParams, BoundReport, theorem_report
from .dynamics import Coloring, Trajectory, majority_step, run
from .errors import BudgetExceeded, InvalidParameter, PreconditionViolated
from .experiments import AggregateStats, TrialConfig, run_trials
from .graph import Graph, degree, gen_gnp, red_neighbor_count
from .rng import Seed

__version__ = "0.1.0"
