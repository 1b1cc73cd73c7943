"""Codebook-based analog beam selection for large-array mmWave links.

Functional core: channel (clustered multipath model), codebook (quantized
steering vectors and index arithmetic), metric (determinant rate objective),
full_search (exhaustive pair sweep), tabu (per-side tabu search), turbo
(alternating two-sided optimization), harness (seeded experiments and CSV).
Estimator layer: FullSearchBeamformer and TurboTabuBeamformer.
"""

from .channel import ArrayGeometry, PathSet, SystemDims, assemble_channel, draw_paths, ula_response
from .codebook import (
    CodebookSpec,
    Neighbor,
    angle_of_index,
    index_to_columns,
    materialize,
    neighbors,
    solution_index,
)
from .estimators import FullSearchBeamformer, TurboTabuBeamformer
from .exceptions import (
    BeamformError,
    BudgetExceededError,
    DegenerateNeighborhoodError,
    InfeasibleCodebookError,
    SingularCombinerError,
)
from .full_search import FsResult, fs_complexity, full_search
from .harness import ExperimentConfig, TrialRecord, emit_csv, parameter_sweep, run_experiment
from .metric import (
    CombinerSearchProbe,
    EvalCounter,
    LinkBudget,
    PrecoderSearchProbe,
    cost,
    effective_channel,
    rate,
)
from .tabu import TsParams, TsResult, initial_solutions, ts_multistart, ts_search
from .turbo import TurboParams, TurboResult, ts_complexity, turbo_search

__version__ = "0.1.0"

__all__ = [
    "ArrayGeometry",
    "BeamformError",
    "BudgetExceededError",
    "CodebookSpec",
    "CombinerSearchProbe",
    "DegenerateNeighborhoodError",
    "EvalCounter",
    "ExperimentConfig",
    "FsResult",
    "FullSearchBeamformer",
    "InfeasibleCodebookError",
    "LinkBudget",
    "Neighbor",
    "PathSet",
    "PrecoderSearchProbe",
    "SingularCombinerError",
    "SystemDims",
    "TrialRecord",
    "TsParams",
    "TsResult",
    "TurboParams",
    "TurboResult",
    "TurboTabuBeamformer",
    "angle_of_index",
    "assemble_channel",
    "cost",
    "draw_paths",
    "effective_channel",
    "emit_csv",
    "fs_complexity",
    "full_search",
    "index_to_columns",
    "initial_solutions",
    "materialize",
    "neighbors",
    "parameter_sweep",
    "rate",
    "run_experiment",
    "solution_index",
    "ts_complexity",
    "ts_multistart",
    "ts_search",
    "turbo_search",
    "ula_response",
]
