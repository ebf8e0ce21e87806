"""Learning answer set automata from labeled multivariate symbolic sequences."""

__version__ = "0.1.0"

from .automaton import Acceptance, Asa, AsaSyntaxError, Policy, RunResult, Semantics, Transition, parse_asa, render_asa, run
from .core import AlphabetSpec, AttributeSet, Dataset, DatasetError, Label, LabeledExample, Mvs, make_dataset
from .guards import GroundGuard, GuardError, parse_guard, satisfies
from .objective import ConfigError, CostVector, ObjectiveConfig, StructuralConfig, cost_vector
from .search import BatchConfig, LearnerReport, enumerate_optimal, local_search
from .incremental import IncrConfig, guard_stats, learn_incremental, revise
from .sax import SaxConfig, discretize
from .asp import export_asp
from .evaluation import EvalReport, cross_validate
from .planted import PlantedModelSpec, generate_planted
from .estimator import ASALClassifier, SAXTransformer
