"""
Block-based background estimation and foreground segmentation.

Frames are tiled into blocks; every block gets its own base model trained
on that block's pixels across the training frames. Segmenting a frame
estimates each block's background, stitches the blocks in origin order and
thresholds the absolute residual.

Blocks at the right and bottom edges that would stick out of the frame are
shifted inward; where they overlap an earlier block, the later block wins.

Example:
    >>> from wevbg.eigenmodel import Selection
    >>> from wevbg.segmenter import segment_frame, tile_blocks, train_block_models
    >>> grid = tile_blocks(seq.shape, (40, 40))
    >>> models = train_block_models(seq, grid, Selection.parse('weakest:10'))
    >>> result = segment_frame(models, grid, seq.frames[0], tau=0.1)
"""

import json
import logging
import os
from dataclasses import dataclass

import numpy as np

from . import events as ev
from .eigenmodel import build_base_model, estimate_background, fit_eigenbasis, load_base_model, save_base_model
from .errors import DimensionError, FormatError, InsufficientData, InvalidBlockSize, InvalidInput, NotFound
from .frames import write_mask, write_pgm
from .workers import pool_map

DEFAULT_TAU = 0.1
GRID_FILE = 'grid.json'

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockGrid:
    """
    Row-major block layout of a frame.

    Attributes:
        frame_shape: (H, W)
        block_size: (h, w)
        origins: Tuple of (row, col) top-left corners
    """
    frame_shape: tuple
    block_size: tuple
    origins: tuple

    def __len__(self):
        return len(self.origins)

    def window(self, origin):
        """Index expression selecting the block at ``origin`` from an H x W image."""
        row, col = origin
        h, w = self.block_size
        return slice(row, row + h), slice(col, col + w)


@dataclass(frozen=True, eq=False)
class SegmentationResult:
    """
    Segmentation of one frame.

    Attributes:
        background: H x W estimated background, clamped to [0, 1]
        residual: H x W absolute difference between frame and background
        mask: H x W bool, True for foreground
        threshold: The threshold tau the mask was computed with
    """
    background: np.ndarray
    residual: np.ndarray
    mask: np.ndarray
    threshold: float


def _axis_origins(length, size):
    origins = list(range(0, length - size + 1, size))
    if origins[-1] + size < length:
        origins.append(length - size)
    return origins


def tile_blocks(frame_shape, block_size):
    """
    Tile a frame into blocks.

    Args:
        frame_shape: (H, W)
        block_size: (h, w)

    Returns:
        BlockGrid with origins in row-major order; edge blocks are clamped
        inside the frame

    Raises:
        InvalidBlockSize: if a block dimension is < 1 or larger than the frame
    """
    frame_shape = tuple(int(v) for v in frame_shape)
    block_size = tuple(int(v) for v in block_size)
    for length, size in zip(frame_shape, block_size):
        if not 1 <= size <= length:
            raise InvalidBlockSize(f"block {block_size} does not fit frame {frame_shape}")
    rows = _axis_origins(frame_shape[0], block_size[0])
    cols = _axis_origins(frame_shape[1], block_size[1])
    origins = tuple((row, col) for row in rows for col in cols)
    return BlockGrid(frame_shape, block_size, origins)


def _check_frames(seq, grid):
    if seq.shape != grid.frame_shape:
        raise DimensionError(f"frames have shape {seq.shape}, grid expects {grid.frame_shape}")


def extract_block(frames, grid, origin):
    """
    Pixel vectors of one block.

    Args:
        frames: n x H x W array
        grid: BlockGrid
        origin: Block origin

    Returns:
        n x (h * w) array
    """
    rows, cols = grid.window(origin)
    block = frames[:, rows, cols]
    return block.reshape(block.shape[0], -1)


def train_block_bases(seq, grid, pool=None, events=None):
    """
    Eigenbasis of every block of a training sequence.

    Args:
        seq: FrameSequence of at least 2 frames
        grid: BlockGrid matching the frame shape
        pool: Optional WorkerPool
        events: Optional Events receiving ``block_trained``

    Returns:
        List of EigenBasis in origin order
    """
    if len(seq) < 2:
        raise InsufficientData(f"training needs at least 2 frames, got {len(seq)}")
    _check_frames(seq, grid)

    def train(item):
        index, origin = item
        basis = fit_eigenbasis(extract_block(seq.frames, grid, origin))
        ev.emit(events, ev.BLOCK_TRAINED, index=index, origin=origin, size=basis.size)
        return basis

    bases = pool_map(pool, train, list(enumerate(grid.origins)))
    logger.info('trained %d blocks of %dx%d on %d frames', len(bases), grid.block_size[0], grid.block_size[1], len(seq))
    return bases


def models_from_bases(bases, grid, selection):
    """Apply one selection to every block basis."""
    return [
        build_base_model(basis, selection, grid.block_size, origin)
        for basis, origin in zip(bases, grid.origins)
    ]


def train_block_models(seq, grid, selection, pool=None, events=None):
    """
    One base model per block.

    Args:
        seq: Training FrameSequence
        grid: BlockGrid
        selection: Selection applied to every block

    Returns:
        List of BaseModel in origin order
    """
    return models_from_bases(train_block_bases(seq, grid, pool, events), grid, selection)


def _check_models(models, grid):
    if len(models) != len(grid):
        raise DimensionError(f"{len(models)} models for a grid of {len(grid)} blocks")


def estimate_frame(models, grid, frame):
    """
    Stitched background estimate of a frame, not clamped.

    Args:
        models: BaseModel per block, in origin order
        grid: BlockGrid
        frame: H x W image

    Returns:
        H x W array
    """
    frame = np.asarray(frame, dtype=float)
    if frame.shape != grid.frame_shape:
        raise DimensionError(f"frame has shape {frame.shape}, grid expects {grid.frame_shape}")
    _check_models(models, grid)

    estimate = np.empty(grid.frame_shape)
    for model, origin in zip(models, grid.origins):
        window = grid.window(origin)
        estimate[window] = estimate_background(model, frame[window]).reshape(grid.block_size)
    return estimate


def segment_frame(models, grid, frame, tau=DEFAULT_TAU):
    """
    Segment one frame.

    Args:
        models: BaseModel per block, in origin order
        grid: BlockGrid
        frame: H x W image in [0, 1]
        tau: Residual threshold; pixels with residual > tau are foreground

    Returns:
        SegmentationResult
    """
    if tau < 0:
        raise InvalidInput(f"threshold must be non-negative, got {tau}")
    frame = np.asarray(frame, dtype=float)
    background = np.clip(estimate_frame(models, grid, frame), 0.0, 1.0)
    residual = np.abs(frame - background)
    return SegmentationResult(background, residual, residual > tau, float(tau))


def segment_sequence(models, grid, seq, tau=DEFAULT_TAU, pool=None, events=None):
    """
    Segment every frame of a sequence.

    Returns:
        List of SegmentationResult in frame order
    """
    _check_frames(seq, grid)

    def segment(index):
        result = segment_frame(models, grid, seq.frames[index], tau)
        ev.emit(events, ev.FRAME_SEGMENTED, index=index, foreground=int(result.mask.sum()))
        return result

    return pool_map(pool, segment, range(len(seq)))


def write_segmentation(result, out_dir, index):
    """Write background, residual and mask PGMs of one frame."""
    write_pgm(os.path.join(out_dir, f"background_{index:04d}.pgm"), result.background)
    write_pgm(os.path.join(out_dir, f"residual_{index:04d}.pgm"), result.residual)
    write_mask(os.path.join(out_dir, f"mask_{index:04d}.pgm"), result.mask)


def save_models(models, grid, models_dir):
    """
    Write a models directory: ``grid.json`` plus one container per block.
    """
    _check_models(models, grid)
    os.makedirs(models_dir, exist_ok=True)
    layout = {
        'frame_shape': list(grid.frame_shape),
        'block_size': list(grid.block_size),
        'origins': [list(origin) for origin in grid.origins],
        'selection': models[0].selection.id if models else None,
        'blocks': [f"block_{i:04d}.wbm" for i in range(len(models))],
    }
    with open(os.path.join(models_dir, GRID_FILE), 'w') as f:
        json.dump(layout, f, indent=2, sort_keys=True)
        f.write('\n')
    for name, model in zip(layout['blocks'], models):
        save_base_model(model, os.path.join(models_dir, name))
    logger.info('wrote %d block models to %s', len(models), models_dir)


def load_models(models_dir):
    """
    Read a models directory written by ``save_models``.

    Returns:
        (models, grid)
    """
    path = os.path.join(models_dir, GRID_FILE)
    if not os.path.isfile(path):
        raise NotFound(f"{path} does not exist")
    with open(path) as f:
        try:
            layout = json.load(f)
            grid = BlockGrid(
                tuple(layout['frame_shape']),
                tuple(layout['block_size']),
                tuple(tuple(origin) for origin in layout['origins']),
            )
            names = layout['blocks']
        except (ValueError, KeyError, TypeError) as error:
            raise FormatError(f"bad {path}: {error}")
    models = [load_base_model(os.path.join(models_dir, name)) for name in names]
    _check_models(models, grid)
    for model, origin in zip(models, grid.origins):
        if model.origin != origin or model.block_shape != grid.block_size:
            raise FormatError(f"block model at {model.origin} does not match grid origin {origin}")
    return models, grid
