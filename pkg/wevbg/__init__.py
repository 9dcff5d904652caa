"""
wevbg: Eigenbackground modeling with strongest and weakest eigenvectors.

This package provides:
- Symmetric eigendecomposition (cyclic Jacobi) and the snapshot method
- Welford mean/scatter updates and their rank-one form
- Base models from strongest, weakest or arbitrary eigenvector selections
- Block-based background estimation and foreground segmentation
- Synthetic scenes and two-class pixel processes
- Eigenvector-drift measurement and perturbation-bound checks
- RMSE evaluation, subspace grids, object-size and window sweeps
- PGM/PNG frame I/O and a command line interface

Example:
    >>> from wevbg import Selection, SceneParams, synth_scene, tile_blocks, train_block_models, segment_frame
    >>> scene = synth_scene(SceneParams(seed=1))
    >>> grid = tile_blocks(scene.sequence.shape, (40, 40))
    >>> models = train_block_models(scene.sequence, grid, Selection.parse('weakest:10'))
    >>> result = segment_frame(models, grid, scene.sequence.frames[60], tau=0.1)
"""

from .errors import (
    WevbgError, ValidationError, ConfigError, DimensionError, InsufficientData, InvalidInput, SelectionError,
    InvalidBlockSize, NotFound, FormatError, LabelError, InvalidMatrix, DegenerateInput, InsufficientHistory,
    ConvergenceError, SkippedDegenerate, RegimeWarning,
)
from .events import Event, CallbackList, Events
from .logger import Logger
from .runstats import RunningStat, RunStats
from .stopwatch import SingleStopwatch, Stopwatch
from .workers import WorkerPool
from .linalg import (
    EigenPair, EigenBasis, eig_sym, eigh_desc, spectral_norm, dominant_pair, outer, outer_nonzero_eigenvalue,
    snapshot_eigenbasis, scatter_eigenbasis,
)
from .streamstats import (
    ScatterState, RankOneIncrement, welford_update, rank_one_increment, batch_scatter, combined_moments,
)
from .eigenmodel import (
    Selection, BaseModel, parse_selections, fit_eigenbasis, build_base_model, project, reconstruct,
    estimate_background, residual_energy, save_base_model, load_base_model,
)
from .frames import FrameSequence, load_frames, load_labels, save_frames, save_labels, read_pgm, write_pgm
from .segmenter import (
    BlockGrid, SegmentationResult, tile_blocks, train_block_bases, train_block_models, estimate_frame,
    segment_frame, segment_sequence, save_models, load_models,
)
from .scene import SceneParams, SyntheticScene, synth_scene
from .theory import (
    TwoClassParams, DriftRecord, PerturbationReport, SummaryRow, synth_two_class, drift_experiment,
    drift_ratio, check_perturbation_bound, estimate_beta, beta_stability, check_expectation_chain,
    check_matrix_identities,
)
from .evalkit import (
    EvalReport, GridPoint, build_ground_truth, rmse, sweep_selections, holdout_eval, subspace_grid,
    class_spread, object_size_sweep, window_sweep,
)
from .config import RunConfig

__version__ = '0.1.0'
__all__ = [
    # Errors
    'WevbgError', 'ValidationError', 'ConfigError', 'DimensionError', 'InsufficientData', 'InvalidInput',
    'SelectionError', 'InvalidBlockSize', 'NotFound', 'FormatError', 'LabelError', 'InvalidMatrix',
    'DegenerateInput', 'InsufficientHistory', 'ConvergenceError', 'SkippedDegenerate', 'RegimeWarning',
    # Instrumentation
    'Event', 'CallbackList', 'Events', 'Logger', 'RunningStat', 'RunStats', 'SingleStopwatch', 'Stopwatch',
    'WorkerPool',
    # Linear algebra
    'EigenPair', 'EigenBasis', 'eig_sym', 'eigh_desc', 'spectral_norm', 'dominant_pair', 'outer',
    'outer_nonzero_eigenvalue', 'snapshot_eigenbasis', 'scatter_eigenbasis',
    # Stream statistics
    'ScatterState', 'RankOneIncrement', 'welford_update', 'rank_one_increment', 'batch_scatter',
    'combined_moments',
    # Base models
    'Selection', 'BaseModel', 'parse_selections', 'fit_eigenbasis', 'build_base_model', 'project',
    'reconstruct', 'estimate_background', 'residual_energy', 'save_base_model', 'load_base_model',
    # Frames
    'FrameSequence', 'load_frames', 'load_labels', 'save_frames', 'save_labels', 'read_pgm', 'write_pgm',
    # Segmentation
    'BlockGrid', 'SegmentationResult', 'tile_blocks', 'train_block_bases', 'train_block_models',
    'estimate_frame', 'segment_frame', 'segment_sequence', 'save_models', 'load_models',
    # Scenes
    'SceneParams', 'SyntheticScene', 'synth_scene',
    # Theory
    'TwoClassParams', 'DriftRecord', 'PerturbationReport', 'SummaryRow', 'synth_two_class', 'drift_experiment',
    'check_perturbation_bound', 'estimate_beta', 'beta_stability', 'check_expectation_chain',
    'check_matrix_identities', 'drift_ratio',
    # Evaluation
    'EvalReport', 'GridPoint', 'build_ground_truth', 'rmse', 'sweep_selections', 'holdout_eval',
    'subspace_grid', 'class_spread', 'object_size_sweep', 'window_sweep',
    # Configuration
    'RunConfig',
]
