"""
Base models built from eigenvector selections.

A base model is the mean of a training set plus a subset of the
eigenvectors of its scatter matrix. Keeping the strongest eigenvectors gives
the classic Eigenbackground; keeping the weakest gives the weakest-eigenvector
variant. Both share one projection/reconstruction engine:

    coefficients = BM^T (I - mu)
    background   = BM coefficients + mu

Example:
    >>> import numpy as np
    >>> from wevbg.eigenmodel import Selection, build_base_model, estimate_background, fit_eigenbasis
    >>> frames = np.random.default_rng(0).random((12, 16))
    >>> basis = fit_eigenbasis(frames)
    >>> model = build_base_model(basis, Selection.parse('weakest:3'), (4, 4))
    >>> estimate_background(model, frames[0]).shape
    (16,)
"""

import json
import logging
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, FormatError, InsufficientData, SelectionError
from .linalg import scatter_eigenbasis, snapshot_eigenbasis
from .streamstats import batch_scatter

MAGIC = b'WEVBM001'
HEADER_LENGTH = struct.Struct('<I')
PAYLOAD_DTYPE = np.dtype('<f8')

STRONGEST = 'strongest'
WEAKEST = 'weakest'
INDICES = 'indices'
ALL = 'all'

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Selection:
    """
    Which eigenvectors of a basis a base model keeps.

    Positions are 1-based in descending eigenvalue order.

    Attributes:
        kind: 'strongest', 'weakest', 'indices' or 'all'
        k: Count for strongest/weakest
        indices: Sorted unique positions for 'indices'
    """
    kind: str
    k: int = 0
    indices: tuple = field(default=())

    def __post_init__(self):
        if self.kind in (STRONGEST, WEAKEST):
            if int(self.k) < 1:
                raise SelectionError(f"{self.kind} selection needs a positive count, got {self.k}")
        elif self.kind == INDICES:
            if not self.indices:
                raise SelectionError("index selection is empty")
            if any(int(i) < 1 for i in self.indices):
                raise SelectionError(f"positions are 1-based, got {list(self.indices)}")
            object.__setattr__(self, 'indices', tuple(sorted({int(i) for i in self.indices})))
        elif self.kind != ALL:
            raise SelectionError(f"unknown selection kind {self.kind!r}")

    @classmethod
    def strongest(cls, k):
        return cls(STRONGEST, k=int(k))

    @classmethod
    def weakest(cls, k):
        return cls(WEAKEST, k=int(k))

    @classmethod
    def of_indices(cls, indices):
        return cls(INDICES, indices=tuple(indices))

    @classmethod
    def all(cls):
        return cls(ALL)

    @classmethod
    def parse(cls, text):
        """
        Parse ``strongest:k``, ``weakest:k``, ``idx:1,3,30`` or ``all``.

        Raises:
            SelectionError: for anything else
        """
        text = str(text).strip()
        if text.lower() == ALL:
            return cls.all()
        kind, sep, rest = text.partition(':')
        kind = kind.strip().lower()
        if not sep:
            raise SelectionError(f"cannot parse selection {text!r}")
        try:
            if kind == STRONGEST:
                return cls.strongest(int(rest))
            if kind == WEAKEST:
                return cls.weakest(int(rest))
            if kind in ('idx', INDICES):
                return cls.of_indices(int(part) for part in rest.split(',') if part.strip())
        except ValueError:
            raise SelectionError(f"cannot parse selection {text!r}")
        raise SelectionError(f"unknown selection kind in {text!r}")

    @property
    def id(self):
        """Descriptor string, parseable by ``Selection.parse``."""
        if self.kind == ALL:
            return ALL
        if self.kind == INDICES:
            return 'idx:' + ','.join(str(i) for i in self.indices)
        return f"{self.kind}:{self.k}"

    def resolve(self, size):
        """
        0-based column positions of this selection in a basis of ``size`` vectors.

        Raises:
            SelectionError: if the selection does not fit
        """
        if self.kind == ALL:
            return list(range(size))
        if self.kind == STRONGEST:
            self._check_count(size)
            return list(range(self.k))
        if self.kind == WEAKEST:
            self._check_count(size)
            return list(range(size - self.k, size))
        if self.indices[-1] > size:
            raise SelectionError(f"position {self.indices[-1]} is outside a basis of {size} vectors")
        return [i - 1 for i in self.indices]

    def _check_count(self, size):
        if self.k > size:
            raise SelectionError(f"{self.id} needs {self.k} vectors, basis has {size}")

    def __str__(self):
        return self.id


def parse_selections(text):
    """
    Parse a comma separated list of selections.

    Bare integers following an ``idx:`` item belong to it, so
    ``"strongest:1,idx:1,3,30,all"`` yields three selections.
    """
    items = []
    for part in str(text).split(','):
        part = part.strip()
        if not part:
            continue
        if part.isdigit() and items and items[-1].lower().startswith('idx:'):
            items[-1] += ',' + part
        else:
            items.append(part)
    if not items:
        raise SelectionError("no selections given")
    return [Selection.parse(item) for item in items]


@dataclass(frozen=True, eq=False)
class BaseModel:
    """
    Mean plus selected eigenvectors of one block.

    Attributes:
        mean: Mean vector, length D
        basis: D x M matrix of orthonormal columns
        eigenvalues: The M eigenvalues of the kept columns
        selection: The Selection the columns came from
        block_shape: (height, width) of the block
        origin: (row, col) of the block in the frame
    """
    mean: np.ndarray
    basis: np.ndarray
    eigenvalues: np.ndarray
    selection: Selection
    block_shape: tuple
    origin: tuple = (0, 0)

    @property
    def dim(self):
        return int(self.mean.shape[0])

    @property
    def size(self):
        """Number of kept eigenvectors M."""
        return int(self.basis.shape[1])


def fit_eigenbasis(vectors):
    """
    Eigenbasis of the scatter of a set of vectors.

    Uses the snapshot method when D > n and the direct D x D
    decomposition otherwise.

    Args:
        vectors: n x D array, one training vector per row

    Returns:
        EigenBasis

    Raises:
        InsufficientData: for fewer than 2 vectors
    """
    x = np.asarray(vectors, dtype=float)
    if x.ndim != 2:
        raise DimensionError(f"expected an n x D array, got shape {x.shape}")
    n, d = x.shape
    if n < 2:
        raise InsufficientData(f"an eigenbasis needs at least 2 vectors, got {n}")
    if d > n:
        mean = x.mean(axis=0)
        return snapshot_eigenbasis((x - mean).T, mean)
    return scatter_eigenbasis(batch_scatter(x))


def build_base_model(basis, selection, block_shape, origin=(0, 0)):
    """
    Keep the selected eigenvectors of ``basis``.

    Args:
        basis: EigenBasis
        selection: Selection
        block_shape: (height, width), with height * width == D
        origin: Block origin in the frame

    Returns:
        BaseModel

    Raises:
        SelectionError: if the selection does not fit the basis
    """
    block_shape = tuple(int(v) for v in block_shape)
    if block_shape[0] * block_shape[1] != basis.dim:
        raise DimensionError(f"block {block_shape} does not hold {basis.dim} pixels")
    positions = selection.resolve(basis.size)
    return BaseModel(
        mean=basis.mean.copy(),
        basis=basis.vectors[:, positions].copy(),
        eigenvalues=basis.values[positions].copy(),
        selection=selection,
        block_shape=block_shape,
        origin=tuple(int(v) for v in origin),
    )


def _as_image_vector(bm, image):
    image = np.asarray(image, dtype=float)
    if image.shape == bm.block_shape:
        image = image.ravel()
    if image.shape != (bm.dim,):
        raise DimensionError(f"image has shape {image.shape}, model expects {bm.dim} pixels")
    return image


def project(bm, image):
    """Coefficients ``BM^T (image - mu)``; image may be a vector or a block."""
    image = _as_image_vector(bm, image)
    return bm.basis.T @ (image - bm.mean)


def reconstruct(bm, coefficients):
    """Image vector ``BM coefficients + mu``."""
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (bm.size,):
        raise DimensionError(f"expected {bm.size} coefficients, got shape {coefficients.shape}")
    return bm.basis @ coefficients + bm.mean


def estimate_background(bm, image):
    """Background estimate of one image: reconstruct(project(image))."""
    return reconstruct(bm, project(bm, image))


def residual_energy(bm, image):
    """Squared norm of the part of ``image - mu`` outside the model span."""
    image = _as_image_vector(bm, image)
    residual = image - estimate_background(bm, image)
    return float(residual @ residual)


def encode_base_model(bm):
    """
    Serialize a base model.

    Layout: magic ``WEVBM001``, little-endian uint32 header length, UTF-8
    JSON header with sorted keys, then little-endian float64 mean (D
    values), basis columns (D values each, M columns) and eigenvalues (M).
    """
    header = {
        'D': bm.dim,
        'M': bm.size,
        'block_shape': list(bm.block_shape),
        'format': 'float64-le',
        'origin': list(bm.origin),
        'selection': bm.selection.id,
    }
    header = json.dumps(header, sort_keys=True, separators=(',', ':')).encode('utf-8')
    payload = np.concatenate([bm.mean, bm.basis.T.ravel(), bm.eigenvalues]).astype(PAYLOAD_DTYPE)
    return MAGIC + HEADER_LENGTH.pack(len(header)) + header + payload.tobytes()


def decode_base_model(data):
    """
    Parse bytes written by ``encode_base_model``.

    Raises:
        FormatError: for a bad magic, header or payload length
    """
    start = len(MAGIC) + HEADER_LENGTH.size
    if len(data) < start or data[:len(MAGIC)] != MAGIC:
        raise FormatError("not a base model container")
    (length,) = HEADER_LENGTH.unpack(data[len(MAGIC):start])
    try:
        header = json.loads(data[start:start + length].decode('utf-8'))
        d, m = int(header['D']), int(header['M'])
        block_shape = tuple(int(v) for v in header['block_shape'])
        origin = tuple(int(v) for v in header.get('origin', (0, 0)))
        selection = Selection.parse(header['selection'])
    except (ValueError, KeyError, TypeError) as error:
        raise FormatError(f"bad base model header: {error}")

    payload = np.frombuffer(data[start + length:], dtype=PAYLOAD_DTYPE)
    if payload.shape[0] != d + d * m + m:
        raise FormatError(f"payload holds {payload.shape[0]} values, header implies {d + d * m + m}")
    payload = payload.astype(float)
    return BaseModel(
        mean=payload[:d].copy(),
        basis=payload[d:d + d * m].reshape(m, d).T.copy(),
        eigenvalues=payload[d + d * m:].copy(),
        selection=selection,
        block_shape=block_shape,
        origin=origin,
    )


def save_base_model(bm, path):
    """Write a base model container to ``path``."""
    with open(path, 'wb') as f:
        f.write(encode_base_model(bm))
    logger.debug('saved base model %s (D=%d M=%d)', path, bm.dim, bm.size)


def load_base_model(path):
    """Read a base model container from ``path``."""
    with open(path, 'rb') as f:
        return decode_base_model(f.read())
