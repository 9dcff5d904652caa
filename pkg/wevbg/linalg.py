"""
Dense symmetric linear algebra.

Eigendecomposition by cyclic Jacobi rotations, spectral norm, outer
products, and the snapshot (Gram matrix) method that gives the eigenvectors
of a tall D x D scatter matrix from the n x n Gram matrix of its samples.

Eigenvectors are sign-normalized: the first component whose magnitude
exceeds 1e-10 is positive. Pairs are returned by descending eigenvalue.

Example:
    >>> import numpy as np
    >>> from wevbg.linalg import eig_sym
    >>> [round(pair.value, 6) for pair in eig_sym(np.diag([1.0, 2.0]))]
    [2.0, 1.0]
"""

import functools
import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DegenerateInput, DimensionError, InsufficientData, InvalidMatrix

SYMMETRY_TOL = 1e-12
JACOBI_TOL = 1e-12
MAX_SWEEPS = 100
SIGN_TOL = 1e-10
CLAMP_RATIO = 1e-10

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EigenPair:
    """
    An eigenvalue and its unit eigenvector.

    Attributes:
        value: The eigenvalue
        vector: Unit-norm eigenvector, sign-normalized
    """
    value: float
    vector: np.ndarray


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """
    Full eigenvector set of one sample set.

    Attributes:
        mean: Sample mean, length D
        values: Eigenvalues, descending, clamped at zero
        vectors: D x k matrix whose columns are the orthonormal eigenvectors
        source_rank: Number of samples the basis was computed from
    """
    mean: np.ndarray
    values: np.ndarray
    vectors: np.ndarray
    source_rank: int

    @property
    def pairs(self):
        """List of EigenPair in descending eigenvalue order."""
        return [EigenPair(float(value), self.vectors[:, i]) for i, value in enumerate(self.values)]

    @property
    def size(self):
        """Number of eigenpairs."""
        return int(self.values.shape[0])

    @property
    def dim(self):
        """Sample dimensionality D."""
        return int(self.mean.shape[0])


def as_sym_matrix(m):
    """
    Validate and copy a symmetric matrix.

    Args:
        m: Square array-like

    Returns:
        float64 copy of ``m``

    Raises:
        InvalidMatrix: if ``m`` is not square, not finite or not symmetric
            within 1e-12
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidMatrix(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrix("matrix has non-finite entries")
    asymmetry = float(np.max(np.abs(a - a.T)))
    if asymmetry > SYMMETRY_TOL:
        raise InvalidMatrix(f"matrix is not symmetric (max |m - m^T| = {asymmetry:.3g})")
    return a


@functools.lru_cache(maxsize=64)
def _round_robin(n):
    """Rounds of disjoint (p, q) pairs covering every pair once."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = sorted((min(p, q), max(p, q)) for p, q in pairs if p >= 0 and q >= 0)
        rounds.append((
            np.array([p for p, _ in pairs], dtype=np.intp),
            np.array([q for _, q in pairs], dtype=np.intp),
        ))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a):
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi(a):
    """
    Cyclic Jacobi eigenvalue iteration.

    Each round applies the rotations of a set of disjoint index pairs at
    once; they commute, so a round zeroes all of its pivots together.

    Args:
        a: Symmetric matrix; overwritten

    Returns:
        (eigenvalues, eigenvector columns), unsorted
    """
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v

    threshold = JACOBI_TOL * float(np.linalg.norm(a))
    skip = threshold / n
    rounds = _round_robin(n)
    for sweep in range(MAX_SWEEPS):
        if _off_norm(a) <= threshold:
            logger.debug('jacobi converged: n=%d sweeps=%d', n, sweep)
            return a.diagonal().copy(), v
        for p, q in rounds:
            apq = a[p, q]
            active = np.abs(apq) > skip
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            ap, aq = a[:, p], a[:, q]
            a[:, p] = c * ap - s * aq
            a[:, q] = s * ap + c * aq
            ap, aq = a[p, :], a[q, :]
            a[p, :] = c[:, None] * ap - s[:, None] * aq
            a[q, :] = s[:, None] * ap + c[:, None] * aq
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp, vq = v[:, p], v[:, q]
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
        a = 0.5 * (a + a.T)

    off = _off_norm(a)
    if off > threshold:
        raise ConvergenceError(f"jacobi did not converge in {MAX_SWEEPS} sweeps (off-diagonal norm {off:.3g})")
    return a.diagonal().copy(), v


def _normalize_signs(vectors):
    """Flip columns so their first significant component is positive."""
    significant = np.abs(vectors) > SIGN_TOL
    first = np.argmax(significant, axis=0)
    signs = np.sign(vectors[first, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eigh_desc(m):
    """
    Eigendecomposition of a symmetric matrix, array form.

    Args:
        m: Symmetric matrix

    Returns:
        (values, vectors): values descending, vectors as sign-normalized columns
    """
    a = as_sym_matrix(m)
    values, vectors = _jacobi(a)
    order = np.argsort(-values, kind='stable')
    return values[order], _normalize_signs(vectors[:, order])


def eig_sym(m):
    """
    Eigenpairs of a symmetric matrix.

    Args:
        m: Symmetric matrix

    Returns:
        List of EigenPair sorted by descending eigenvalue

    Raises:
        InvalidMatrix: for non-symmetric or non-finite input
    """
    values, vectors = eigh_desc(m)
    return [EigenPair(float(value), vectors[:, i]) for i, value in enumerate(values)]


def spectral_norm(m):
    """Largest absolute eigenvalue of a symmetric matrix."""
    values, _ = eigh_desc(m)
    return float(np.max(np.abs(values)))


def dominant_pair(m):
    """
    Largest eigenpair of a symmetric matrix.

    Returns:
        (value, vector, gap) where gap is the distance to the second
        eigenvalue (infinite for 1 x 1 input)
    """
    values, vectors = eigh_desc(m)
    gap = float(values[0] - values[1]) if values.shape[0] > 1 else float('inf')
    return float(values[0]), vectors[:, 0], gap


def _as_vector(u, name):
    u = np.asarray(u, dtype=float)
    if u.ndim != 1:
        raise DimensionError(f"{name} must be a vector, got shape {u.shape}")
    return u


def outer(u, v):
    """
    Outer product ``u v^T``.

    Raises:
        DimensionError: if the lengths differ
    """
    u = _as_vector(u, 'u')
    v = _as_vector(v, 'v')
    if u.shape != v.shape:
        raise DimensionError(f"length mismatch: {u.shape[0]} != {v.shape[0]}")
    return np.outer(u, v)


def outer_nonzero_eigenvalue(u, v):
    """
    The only eigenvalue of ``u v^T`` that can be non-zero, ``v . u``.

    Raises:
        DimensionError: if the lengths differ
        DegenerateInput: if either vector is zero
    """
    u = _as_vector(u, 'u')
    v = _as_vector(v, 'v')
    if u.shape != v.shape:
        raise DimensionError(f"length mismatch: {u.shape[0]} != {v.shape[0]}")
    if not np.any(u) or not np.any(v):
        raise DegenerateInput("outer product eigenvalue needs non-zero vectors")
    return float(v @ u)


def clamp_eigenvalues(values):
    """Zero every eigenvalue below 1e-10 of the largest (and all negatives)."""
    values = np.array(values, dtype=float)
    largest = values[0] if values.shape[0] else 0.0
    if largest <= 0.0:
        return np.zeros_like(values)
    values[values < CLAMP_RATIO * largest] = 0.0
    return values


def _completion(basis, count, mean):
    """
    Unit vectors orthogonal to ``basis`` and to each other.

    Candidates are tried in a fixed order (normalized mean, then coordinate
    axes), so the completion is deterministic.
    """
    d = basis.shape[0]
    current = basis
    found = []

    def candidates():
        norm = np.linalg.norm(mean)
        if norm > 0.0:
            yield mean / norm
        for i in range(d):
            axis = np.zeros(d)
            axis[i] = 1.0
            yield axis

    for min_norm in (0.5, 1e-6):
        for candidate in candidates():
            if len(found) == count:
                return np.column_stack(found) if found else np.empty((d, 0))
            residual = candidate - current @ (current.T @ candidate)
            residual -= current @ (current.T @ residual)
            norm = np.linalg.norm(residual)
            if norm >= min_norm:
                found.append(residual / norm)
                current = np.column_stack([current, found[-1]])
    if len(found) < count:
        raise DegenerateInput(f"cannot complete basis: {d} dims, {current.shape[1]} vectors")
    return np.column_stack(found) if found else np.empty((d, 0))


def snapshot_eigenbasis(data, mean=None):
    """
    Eigenbasis of the scatter ``X X^T`` computed from the Gram matrix ``X^T X``.

    Args:
        data: D x n matrix of centered columns
        mean: The mean the columns were centered by (default zeros)

    Returns:
        EigenBasis with min(n, D) orthonormal vectors. Directions whose
        eigenvalue is clamped to zero are filled with a deterministic
        orthonormal completion.

    Raises:
        InsufficientData: if n < 2
    """
    x = np.asarray(data, dtype=float)
    if x.ndim != 2:
        raise DimensionError(f"expected a D x n matrix, got shape {x.shape}")
    d, n = x.shape
    if n < 2:
        raise InsufficientData(f"snapshot method needs at least 2 columns, got {n}")
    mean = np.zeros(d) if mean is None else np.asarray(mean, dtype=float)
    if mean.shape != (d,):
        raise DimensionError(f"mean has shape {mean.shape}, expected ({d},)")

    gram = x.T @ x
    gram = 0.5 * (gram + gram.T)
    values, weights = eigh_desc(gram)
    size = min(n, d)
    values = clamp_eigenvalues(values)[:size]
    kept = int(np.count_nonzero(values > 0.0))

    vectors = np.empty((d, size))
    if kept:
        lifted = (x @ weights[:, :kept]) / np.sqrt(values[:kept])
        q, r = np.linalg.qr(lifted)
        signs = np.sign(np.diag(r))
        signs[signs == 0] = 1.0
        vectors[:, :kept] = q * signs
    vectors[:, kept:] = _completion(vectors[:, :kept], size - kept, mean)
    logger.debug('snapshot basis: D=%d n=%d non-zero=%d', d, n, kept)
    return EigenBasis(mean=mean, values=values, vectors=_normalize_signs(vectors), source_rank=n)


def scatter_eigenbasis(state):
    """
    Eigenbasis from a D x D scatter matrix (the direct path, D <= n).

    Args:
        state: Object with ``n``, ``mean`` and ``scatter`` (a ScatterState)
    """
    values, vectors = eigh_desc(state.scatter)
    return EigenBasis(
        mean=np.array(state.mean, dtype=float),
        values=clamp_eigenvalues(values),
        vectors=vectors,
        source_rank=int(state.n),
    )
