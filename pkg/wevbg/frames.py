"""
Frame sequences and their file formats.

Frames are grayscale images normalized to [0, 1]. They are read from PGM
(P2 or P5) or PNG files, the latter through pygame when it is installed.
Frame order is the lexicographic order of the file names.

Labels are read from a CSV with a ``frame,label`` header, one row per frame,
labels ``bg`` or ``fg``. Non-image samples (pixel processes of the theory
harness) are stored as CSV rows ``frame,label,x0,...``.

Requires pygame for PNG input only.

Example:
    >>> from wevbg.frames import load_frames, load_labels
    >>> seq = load_frames('highway/', 'frame_*.pgm')
    >>> seq = seq.with_labels(load_labels('highway/labels.csv', len(seq)))
    >>> len(seq.background_indices)
    92
"""

import glob
import logging
import os
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import DimensionError, FormatError, LabelError, NotFound

try:
    import pygame
    HAS_PYGAME = True
except ImportError:
    HAS_PYGAME = False
    pygame = None

BACKGROUND = 'bg'
FOREGROUND = 'fg'
LABELS = (BACKGROUND, FOREGROUND)

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])
CSV_FLOAT_FORMAT = '%.17g'

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FrameSequence:
    """
    Ordered grayscale frames with optional labels.

    Attributes:
        frames: n x H x W float array, values in [0, 1]
        labels: Tuple of 'bg'/'fg' per frame, or None
        source: Provenance strings (file paths or 'synthetic:<seed>')
    """
    frames: np.ndarray
    labels: tuple = None
    source: tuple = field(default=())

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=float)
        if frames.ndim != 3:
            raise DimensionError(f"frames must be an n x H x W array, got shape {frames.shape}")
        object.__setattr__(self, 'frames', frames)
        object.__setattr__(self, 'source', tuple(self.source))
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != frames.shape[0]:
                raise LabelError(f"{len(labels)} labels for {frames.shape[0]} frames")
            unknown = sorted(set(labels) - set(LABELS))
            if unknown:
                raise LabelError(f"unknown labels {unknown}")
            object.__setattr__(self, 'labels', labels)

    def __len__(self):
        return int(self.frames.shape[0])

    @property
    def shape(self):
        """Frame shape (H, W)."""
        return tuple(self.frames.shape[1:])

    @property
    def dim(self):
        return int(self.frames.shape[1] * self.frames.shape[2])

    def vectors(self):
        """n x D array of frames as row vectors."""
        return self.frames.reshape(len(self), -1)

    def _indices_of(self, label):
        if self.labels is None:
            raise LabelError("sequence has no labels")
        return [i for i, value in enumerate(self.labels) if value == label]

    @property
    def background_indices(self):
        return self._indices_of(BACKGROUND)

    @property
    def foreground_indices(self):
        return self._indices_of(FOREGROUND)

    def with_labels(self, labels):
        """Copy of this sequence carrying ``labels``."""
        return FrameSequence(self.frames, labels, self.source)

    def subset(self, indices):
        """Sequence of the frames at ``indices``, in that order."""
        indices = list(indices)
        labels = None if self.labels is None else tuple(self.labels[i] for i in indices)
        source = tuple(self.source[i] for i in indices) if len(self.source) == len(self) else self.source
        return FrameSequence(self.frames[indices], labels, source)

    def crop(self, row, col, height, width):
        """Sequence of the same frames cut to one rectangle."""
        h, w = self.shape
        if row < 0 or col < 0 or row + height > h or col + width > w or height < 1 or width < 1:
            raise DimensionError(f"region {(row, col, height, width)} is outside frames of shape {(h, w)}")
        return FrameSequence(self.frames[:, row:row + height, col:col + width], self.labels, self.source)

    @classmethod
    def from_vectors(cls, vectors, labels=None, source=()):
        """Sequence of 1 x D frames from an n x D array."""
        vectors = np.asarray(vectors, dtype=float)
        if vectors.ndim != 2:
            raise DimensionError(f"expected an n x D array, got shape {vectors.shape}")
        return cls(vectors[:, None, :], labels, source)


def _pgm_tokens(data, count):
    """First ``count`` header tokens of a PGM and the offset after them."""
    tokens = []
    pos = 2
    while len(tokens) < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b'#':
            while pos < len(data) and data[pos:pos + 1] not in (b'\n', b'\r'):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b'#':
            pos += 1
        if start == pos:
            raise FormatError("truncated PGM header")
        tokens.append(data[start:pos])
    return tokens, pos


def decode_pgm(data):
    """
    Decode P2 or P5 PGM bytes.

    Returns:
        (H x W integer array, maxval)

    Raises:
        FormatError: for anything that is not a well formed P2/P5 file
    """
    magic = data[:2]
    if magic not in (b'P2', b'P5'):
        raise FormatError("not a P2/P5 PGM file")
    tokens, pos = _pgm_tokens(data, 3)
    try:
        width, height, maxval = (int(token) for token in tokens)
    except ValueError:
        raise FormatError("bad PGM header")
    if width < 1 or height < 1 or not 0 < maxval <= 65535:
        raise FormatError(f"bad PGM header: {width}x{height} maxval {maxval}")

    count = width * height
    if magic == b'P2':
        try:
            values = np.array([int(token) for token in data[pos:].split()[:count]], dtype=np.int64)
        except ValueError:
            raise FormatError("bad P2 pixel data")
    else:
        # one whitespace byte separates the header from the raster; a comment
        # after maxval runs up to that byte
        if data[pos:pos + 1] == b'#':
            while pos < len(data) and data[pos:pos + 1] not in (b'\n', b'\r'):
                pos += 1
        raster = data[pos + 1:]
        dtype = np.dtype('u1') if maxval < 256 else np.dtype('>u2')
        if len(raster) < count * dtype.itemsize:
            raise FormatError("truncated P5 raster")
        values = np.frombuffer(raster, dtype=dtype, count=count).astype(np.int64)
    if values.shape[0] != count:
        raise FormatError(f"PGM holds {values.shape[0]} pixels, header says {count}")
    if np.any(values > maxval):
        raise FormatError("PGM pixel exceeds maxval")
    return values.reshape(height, width), maxval


def read_pgm(path):
    """Read a PGM file as a normalized H x W float image."""
    with open(path, 'rb') as f:
        values, maxval = decode_pgm(f.read())
    return values / float(maxval)


def to_bytes_image(image):
    """Denormalize a [0, 1] image to uint8."""
    return np.clip(np.rint(np.asarray(image, dtype=float) * 255.0), 0, 255).astype(np.uint8)


def encode_pgm(image):
    """P5 bytes (maxval 255) of a normalized image."""
    pixels = to_bytes_image(image)
    if pixels.ndim != 2:
        raise DimensionError(f"PGM images are 2-D, got shape {pixels.shape}")
    height, width = pixels.shape
    return f"P5\n{width} {height}\n255\n".encode('ascii') + pixels.tobytes()


def write_pgm(path, image):
    """Write a normalized image as an 8-bit P5 PGM."""
    with open(path, 'wb') as f:
        f.write(encode_pgm(image))


def write_mask(path, mask):
    """Write a binary mask as a P5 PGM with values 0/255."""
    write_pgm(path, np.asarray(mask, dtype=bool).astype(float))


def read_png(path):
    """
    Read an 8-bit PNG as a normalized grayscale image.

    RGB input is converted with the BT.601 luma weights.

    Raises:
        ImportError: if pygame is not installed
    """
    if not HAS_PYGAME:
        raise ImportError("pygame is required to read PNG frames. Install it with: pip install pygame")
    try:
        surface = pygame.image.load(path)
    except pygame.error as error:
        raise FormatError(f"cannot decode {path}: {error}")
    rgb = pygame.surfarray.array3d(surface).transpose(1, 0, 2).astype(float)
    if np.array_equal(rgb[..., 0], rgb[..., 1]) and np.array_equal(rgb[..., 0], rgb[..., 2]):
        gray = rgb[..., 0]
    else:
        gray = rgb @ LUMA_WEIGHTS
    return gray / 255.0


def read_frame(path):
    """Read one PGM or PNG frame, chosen by the file signature."""
    with open(path, 'rb') as f:
        signature = f.read(8)
    if signature[:2] in (b'P2', b'P5'):
        return read_pgm(path)
    if signature == b'\x89PNG\r\n\x1a\n':
        return read_png(path)
    raise FormatError(f"unsupported frame format: {path}")


def load_frames(dir_path, pattern='*'):
    """
    Load every frame matching ``pattern`` in ``dir_path``.

    Args:
        dir_path: Directory holding the frames
        pattern: Glob pattern (default: every file)

    Returns:
        FrameSequence sorted by file name

    Raises:
        NotFound: if nothing matches
        DimensionError: if the frames differ in size
        FormatError: for files that are not PGM or PNG
    """
    paths = sorted(
        path for path in glob.glob(os.path.join(dir_path, pattern)) if os.path.isfile(path)
    )
    if not paths:
        raise NotFound(f"no frames match {os.path.join(dir_path, pattern)}")

    frames = []
    for path in paths:
        frame = read_frame(path)
        if frames and frame.shape != frames[0].shape:
            raise DimensionError(f"{path} has shape {frame.shape}, expected {frames[0].shape}")
        frames.append(frame)
    logger.info('loaded %d frames of %dx%d from %s', len(frames), frames[0].shape[0], frames[0].shape[1], dir_path)
    return FrameSequence(np.stack(frames), None, paths)


def save_frames(seq, out_dir, prefix='frame_'):
    """Write every frame as ``<prefix>NNNN.pgm``; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for i, frame in enumerate(seq.frames):
        path = os.path.join(out_dir, f"{prefix}{i:04d}.pgm")
        write_pgm(path, frame)
        paths.append(path)
    return paths


def _normalize_label(value):
    label = str(value).strip().lower()
    return {'background': BACKGROUND, 'foreground': FOREGROUND}.get(label, label)


def load_labels(csv_path, n_frames):
    """
    Read per-frame labels.

    Args:
        csv_path: CSV with header ``frame,label``
        n_frames: Number of frames the labels must cover

    Returns:
        Tuple of 'bg'/'fg', indexed by 0-based frame number

    Raises:
        LabelError: for missing, duplicated, out-of-range or unknown entries
    """
    if not os.path.isfile(csv_path):
        raise NotFound(f"label file {csv_path} does not exist")
    try:
        table = pd.read_csv(csv_path, dtype=str, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as error:
        raise LabelError(f"cannot read {csv_path}: {error}")
    table.columns = [str(column).strip().lower() for column in table.columns]
    if 'frame' not in table.columns or 'label' not in table.columns:
        raise LabelError(f"{csv_path} needs a 'frame,label' header")

    try:
        frames = [int(value) for value in table['frame']]
    except (TypeError, ValueError):
        raise LabelError(f"{csv_path} has a non-integer frame index")
    labels = [_normalize_label(value) for value in table['label']]

    result = [None] * n_frames
    for frame, label in zip(frames, labels):
        if label not in LABELS:
            raise LabelError(f"frame {frame}: unknown label {label!r}")
        if not 0 <= frame < n_frames:
            raise LabelError(f"frame {frame} is outside 0..{n_frames - 1}")
        if result[frame] is not None:
            raise LabelError(f"frame {frame} is labeled twice")
        result[frame] = label
    missing = [i for i, label in enumerate(result) if label is None]
    if missing:
        raise LabelError(f"{len(missing)} frames have no label (first: {missing[0]})")
    return tuple(result)


def save_labels(path, labels):
    """Write labels as a ``frame,label`` CSV."""
    table = pd.DataFrame({'frame': range(len(labels)), 'label': list(labels)})
    table.to_csv(path, index=False)


def write_samples(path, seq):
    """
    Write vector samples as ``frame,label,x0,...`` with exact floats.

    Args:
        path: Output CSV path
        seq: FrameSequence (frames are flattened)
    """
    vectors = seq.vectors()
    table = pd.DataFrame(vectors, columns=[f"x{j}" for j in range(vectors.shape[1])])
    table.insert(0, 'label', list(seq.labels) if seq.labels is not None else [''] * len(seq))
    table.insert(0, 'frame', range(len(seq)))
    table.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)


def read_samples(path):
    """
    Read samples written by ``write_samples``.

    Returns:
        FrameSequence of 1 x D frames, labeled when the label column is filled
    """
    if not os.path.isfile(path):
        raise NotFound(f"sample file {path} does not exist")
    try:
        table = pd.read_csv(path, keep_default_na=False, float_precision='round_trip')
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as error:
        raise FormatError(f"cannot read {path}: {error}")
    columns = [column for column in table.columns if str(column).startswith('x')]
    if not columns or 'frame' not in table.columns:
        raise FormatError(f"{path} needs 'frame' and 'x0'... columns")
    table = table.sort_values('frame', kind='stable')
    columns = sorted(columns, key=lambda name: int(name[1:]))
    try:
        vectors = table[columns].to_numpy(dtype=float)
    except ValueError:
        raise FormatError(f"{path} has non-numeric sample values")

    labels = None
    if 'label' in table.columns:
        values = [_normalize_label(value) for value in table['label']]
        if all(values):
            labels = tuple(values)
    return FrameSequence.from_vectors(vectors, labels, (path,))
