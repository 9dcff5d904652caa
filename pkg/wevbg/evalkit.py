"""
Background-model evaluation.

Builds the ground-truth background from the frames labeled as background,
measures reconstruction and background RMSE for any number of eigenvector
selections, and produces the data behind the eigen-subspace scatter plots
and the object-size and window-size studies.

RMSE is computed on normalized [0, 1] intensities; reports also carry the
value scaled to 0-255.

Example:
    >>> from wevbg.evalkit import build_ground_truth, sweep_selections
    >>> from wevbg.eigenmodel import parse_selections
    >>> gt = build_ground_truth(seq)
    >>> report = sweep_selections(seq, grid, parse_selections('strongest:7,weakest:7'), gt)
    >>> report.to_frame().groupby('selection_id').bg_rmse.max()
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from . import events as ev
from .eigenmodel import fit_eigenbasis
from .errors import DimensionError, InsufficientData, InvalidInput, SelectionError
from .frames import BACKGROUND, FOREGROUND
from .scene import SceneParams, synth_scene
from .segmenter import estimate_frame, models_from_bases, tile_blocks, train_block_bases
from .workers import pool_map

DEFAULT_WINDOWS = (32, 64, 128, 256)
REPORT_COLUMNS = ['frame_index', 'selection_id', 'recon_rmse', 'bg_rmse', 'recon_rmse_255', 'bg_rmse_255']
GRID_COLUMNS = ['frame_index', 'coord_i', 'coord_j', 'label', 'is_vertex_representative']
CSV_FLOAT_FORMAT = '%.10g'

logger = logging.getLogger(__name__)


def build_ground_truth(seq):
    """
    Pixelwise mean of the background-labeled frames.

    Raises:
        LabelError: if the sequence is unlabeled
        InsufficientData: if no frame is labeled background
    """
    indices = seq.background_indices
    if not indices:
        raise InsufficientData("ground truth needs at least one background frame")
    return seq.frames[indices].mean(axis=0)


def rmse(a, b):
    """Root mean squared difference of two equally shaped images."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} != {b.shape}")
    return float(np.sqrt(np.mean((a - b) ** 2)))


@dataclass(frozen=True)
class EvalRow:
    frame_index: int
    selection_id: str
    recon_rmse: float
    bg_rmse: float


@dataclass(frozen=True, eq=False)
class EvalReport:
    """
    Per-frame, per-selection RMSE.

    Attributes:
        rows: EvalRow for every (frame, selection) pair, frames outermost
        selections: Selection ids in report order
        gt_source: Indices of the frames the ground truth averages
    """
    rows: tuple
    selections: tuple
    gt_source: tuple = field(default=())

    def to_frame(self):
        """pandas DataFrame with the CSV columns."""
        table = pd.DataFrame(
            [[r.frame_index, r.selection_id, r.recon_rmse, r.bg_rmse] for r in self.rows],
            columns=REPORT_COLUMNS[:4],
        )
        table['recon_rmse_255'] = table['recon_rmse'] * 255.0
        table['bg_rmse_255'] = table['bg_rmse'] * 255.0
        return table

    def column(self, selection_id, name='bg_rmse'):
        """One metric of one selection, in frame order."""
        return np.array([getattr(r, name) for r in self.rows if r.selection_id == selection_id])


def write_report_csv(report, path):
    report.to_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)


def evaluate_models(model_sets, grid, seq, gt, gt_source=(), index_offset=0, pool=None, events=None):
    """
    RMSE of every frame under every model set.

    Args:
        model_sets: Dict of selection id to block models (origin order)
        grid: BlockGrid
        seq: FrameSequence to evaluate
        gt: H x W ground-truth background
        gt_source: Frames averaged into ``gt``, recorded in the report
        index_offset: Added to frame indices in the report

    Returns:
        EvalReport
    """
    gt = np.asarray(gt, dtype=float)
    if gt.shape != seq.shape or seq.shape != grid.frame_shape:
        raise DimensionError(f"frames {seq.shape}, ground truth {gt.shape} and grid {grid.frame_shape} differ")
    if not model_sets:
        raise InvalidInput("no selections to evaluate")

    def evaluate(index):
        frame = seq.frames[index]
        rows = []
        for selection_id, models in model_sets.items():
            background = np.clip(estimate_frame(models, grid, frame), 0.0, 1.0)
            rows.append(EvalRow(index + index_offset, selection_id, rmse(frame, background), rmse(gt, background)))
        ev.emit(events, ev.FRAME_SEGMENTED, index=index + index_offset)
        return rows

    rows = [row for frame_rows in pool_map(pool, evaluate, range(len(seq))) for row in frame_rows]
    return EvalReport(tuple(rows), tuple(model_sets), tuple(gt_source))


def _gt_source(seq):
    return tuple(seq.background_indices) if seq.labels is not None else ()


def sweep_selections(seq, grid, selections, gt, pool=None, events=None):
    """
    Train on ``seq`` and evaluate every selection on the training frames.

    Block bases are computed once and shared by all selections.

    Returns:
        EvalReport with |frames| x |selections| rows
    """
    if not selections:
        raise InvalidInput("no selections to evaluate")
    bases = train_block_bases(seq, grid, pool, events)
    model_sets = {s.id: models_from_bases(bases, grid, s) for s in selections}
    return evaluate_models(model_sets, grid, seq, gt, _gt_source(seq), pool=pool, events=events)


def holdout_eval(models, grid, frames, gt, index_offset=0, gt_source=(), pool=None, events=None):
    """
    Evaluate trained models on frames they were not trained on.

    Args:
        models: Dict of selection id to block models, or one list of block models
        grid: BlockGrid
        frames: FrameSequence of held-out frames
        gt: Ground-truth background
        index_offset: Index of the first held-out frame in the full sequence
        gt_source: Frames averaged into ``gt``

    Returns:
        EvalReport
    """
    if not isinstance(models, dict):
        models = {models[0].selection.id: list(models)}
    return evaluate_models(models, grid, frames, gt, gt_source, index_offset, pool, events)


@dataclass(frozen=True)
class GridPoint:
    """
    A frame in a 2-D eigen-subspace.

    Attributes:
        frame_index: Frame number
        coord_i, coord_j: Coordinates along the two eigenvectors
        label: 'bg', 'fg' or ''
        is_vertex_representative: The frame is the nearest to some grid vertex
    """
    frame_index: int
    coord_i: float
    coord_j: float
    label: str
    is_vertex_representative: bool


def subspace_grid(seq, basis, component_pair=(1, 2), grid_n=5):
    """
    Coordinates of every frame in the plane of two eigenvectors.

    The bounding box of the coordinates is divided into a grid_n x grid_n
    vertex lattice; the frame nearest to each vertex (lowest index on ties)
    is marked as its representative.

    Args:
        seq: FrameSequence
        basis: EigenBasis of the same pixel space
        component_pair: 1-based positions (i, j) in descending order
        grid_n: Vertices per axis

    Returns:
        List of GridPoint in frame order
    """
    i, j = (int(c) for c in component_pair)
    if i == j or not (1 <= i <= basis.size and 1 <= j <= basis.size):
        raise SelectionError(f"invalid component pair {component_pair} for a basis of {basis.size} vectors")
    if grid_n < 2:
        raise InvalidInput(f"grid needs at least 2 vertices per axis, got {grid_n}")
    x = seq.vectors()
    if x.shape[1] != basis.dim:
        raise DimensionError(f"frames have {x.shape[1]} pixels, basis expects {basis.dim}")

    coords = (x - basis.mean) @ basis.vectors[:, [i - 1, j - 1]]
    axes = [np.linspace(coords[:, k].min(), coords[:, k].max(), grid_n) for k in range(2)]
    representatives = set()
    for u in axes[0]:
        for w in axes[1]:
            distances = np.hypot(coords[:, 0] - u, coords[:, 1] - w)
            representatives.add(int(np.argmin(distances)))

    labels = seq.labels or ('',) * len(seq)
    return [
        GridPoint(k, float(coords[k, 0]), float(coords[k, 1]), labels[k], k in representatives)
        for k in range(len(seq))
    ]


def write_grid_csv(points, path):
    table = pd.DataFrame(
        [[p.frame_index, p.coord_i, p.coord_j, p.label, p.is_vertex_representative] for p in points],
        columns=GRID_COLUMNS,
    )
    table.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)


def class_spread(points, labels, label):
    """
    Trace of the 2-D coordinate covariance of one class.

    Args:
        points: n x 2 coordinates, or a list of GridPoint
        labels: Per-point labels (ignored for GridPoint input)
        label: Class to measure
    """
    if len(points) and isinstance(points[0], GridPoint):
        labels = [p.label for p in points]
        points = [(p.coord_i, p.coord_j) for p in points]
    points = np.asarray(points, dtype=float)
    chosen = points[np.asarray(labels) == label]
    if chosen.shape[0] < 2:
        raise InsufficientData(f"spread of class {label!r} needs at least 2 points, got {chosen.shape[0]}")
    return float(np.trace(np.cov(chosen.T)))


def consecutive_pairs(n, count=5):
    """
    Evenly spaced pairs of neighbouring components.

    For n = 121 and count = 5: (1, 2), (25, 26), (49, 50), (73, 74), (97, 98).
    """
    if n < 2 or count < 1:
        raise InvalidInput(f"need n >= 2 and count >= 1, got n={n} count={count}")
    step = max(1, (n - 1) // count)
    pairs = [(1 + k * step, 2 + k * step) for k in range(count)]
    return [pair for pair in pairs if pair[1] <= n]


def _summarize(rows, key):
    table = pd.DataFrame(rows)
    grouped = table.groupby(key + ['selection_id'], sort=False)['bg_rmse']
    return grouped.agg(mean_bg_rmse='mean', max_bg_rmse='max', min_bg_rmse='min').reset_index()


def object_size_sweep(fractions, selections, params=None, block_size=(40, 40), pool=None):
    """
    Background RMSE against the true background as the object grows.

    For every area fraction a scene is generated with ``params`` (seed and
    everything else unchanged), block models are trained for every
    selection, and background RMSE is taken over the frames that show the
    object.

    Returns:
        DataFrame with columns area_fraction, selection_id, mean_bg_rmse,
        max_bg_rmse, min_bg_rmse
    """
    params = params or SceneParams()
    rows = []
    for fraction in fractions:
        scene = synth_scene(params.with_area(fraction))
        seq = scene.sequence
        grid = tile_blocks(seq.shape, block_size)
        bases = train_block_bases(seq, grid, pool)
        for selection in selections:
            models = models_from_bases(bases, grid, selection)
            for index in scene.object_frames:
                background = np.clip(estimate_frame(models, grid, seq.frames[index]), 0.0, 1.0)
                rows.append({
                    'area_fraction': fraction,
                    'selection_id': selection.id,
                    'bg_rmse': rmse(scene.background, background),
                })
        logger.info('object size sweep: area %.3g done', fraction)
    return _summarize(rows, ['area_fraction'])


def window_sweep(seq, gt, sizes=DEFAULT_WINDOWS, selections=(), pool=None):
    """
    Background RMSE of centered square windows modeled as one block.

    Sizes larger than the frame are skipped with a warning. RMSE is taken
    over the foreground frames when the sequence is labeled, otherwise over
    every frame.

    Returns:
        DataFrame with columns window, selection_id, mean_bg_rmse,
        max_bg_rmse, min_bg_rmse
    """
    gt = np.asarray(gt, dtype=float)
    if gt.shape != seq.shape:
        raise DimensionError(f"ground truth {gt.shape} does not match frames {seq.shape}")
    if not selections:
        raise InvalidInput("no selections to evaluate")
    height, width = seq.shape
    frames = seq.foreground_indices if seq.labels is not None else list(range(len(seq)))
    if not frames:
        frames = list(range(len(seq)))

    rows = []
    for size in sizes:
        if size > height or size > width:
            logger.warning('skipping %dx%d window: frames are %dx%d', size, size, height, width)
            continue
        row, col = (height - size) // 2, (width - size) // 2
        window = seq.crop(row, col, size, size)
        window_gt = gt[row:row + size, col:col + size]
        grid = tile_blocks((size, size), (size, size))
        bases = train_block_bases(window, grid, pool)
        for selection in selections:
            models = models_from_bases(bases, grid, selection)
            for index in frames:
                background = np.clip(estimate_frame(models, grid, window.frames[index]), 0.0, 1.0)
                rows.append({'window': size, 'selection_id': selection.id, 'bg_rmse': rmse(window_gt, background)})
    if not rows:
        return pd.DataFrame(columns=['window', 'selection_id', 'mean_bg_rmse', 'max_bg_rmse', 'min_bg_rmse'])
    return _summarize(rows, ['window'])


def labeled_spreads(points):
    """(background spread, foreground spread) of a subspace grid."""
    return class_spread(points, None, BACKGROUND), class_spread(points, None, FOREGROUND)


def frame_basis(seq):
    """Eigenbasis of whole frames, for subspace grids."""
    return fit_eigenbasis(seq.vectors())


def weakest_informative_pair(basis):
    """
    The two weakest components that carry variance.

    A basis from n centered frames has rank at most n - 1; its trailing
    zero-eigenvalue vectors give every frame the same coordinate.
    """
    informative = int(np.count_nonzero(basis.values > 0.0))
    if informative >= 2:
        return informative - 1, informative
    return basis.size - 1, basis.size
