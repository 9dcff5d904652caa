"""
Incremental mean and scatter for pixel-vector streams.

Implements Welford's one-pass recurrence

    mu_n = mu_{n-1} + (x_n - mu_{n-1}) / n
    S_n  = S_{n-1} + (x_n - mu_{n-1})(x_n - mu_n)^T

and its symmetric rank-one form ``S_n = S_{n-1} + y y^T`` with
``y = sqrt((n-1)/n) (x_n - mu_{n-1})``. The scatter (not the covariance) is
kept; dividing by n or n-1 is left to callers.

Example:
    >>> import numpy as np
    >>> from wevbg.streamstats import ScatterState, welford_update
    >>> state = ScatterState.empty(1)
    >>> for x in ([0.0], [2.0]):
    ...     state = welford_update(state, np.array(x))
    >>> float(state.mean[0]), float(state.scatter[0, 0])
    (1.0, 2.0)
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, DimensionError, InsufficientData, InsufficientHistory, InvalidInput
from .linalg import outer


@dataclass(frozen=True, eq=False)
class ScatterState:
    """
    Running count, mean and scatter matrix of a vector stream.

    Attributes:
        n: Number of absorbed observations
        mean: Current mean, length D
        scatter: D x D scatter matrix
    """
    n: int
    mean: np.ndarray
    scatter: np.ndarray

    @classmethod
    def empty(cls, dim):
        """State with no observations (all-zero mean and scatter)."""
        if dim < 1:
            raise InvalidInput(f"dimension must be positive, got {dim}")
        return cls(n=0, mean=np.zeros(dim), scatter=np.zeros((dim, dim)))

    @property
    def dim(self):
        return int(self.mean.shape[0])

    def covariance(self, ddof=1):
        """Scatter divided by ``n - ddof``."""
        if self.n - ddof <= 0:
            raise InsufficientData(f"covariance with ddof={ddof} needs more than {ddof} observations")
        return self.scatter / (self.n - ddof)


@dataclass(frozen=True, eq=False)
class RankOneIncrement:
    """
    The vector ``y`` of a Welford step, ``S_n = S_{n-1} + y y^T``.
    """
    y: np.ndarray

    @property
    def norm_squared(self):
        """``||y||^2``, which equals the spectral norm of ``y y^T``."""
        return float(self.y @ self.y)


def _check_vector(state, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (state.dim,):
        raise DimensionError(f"observation has shape {x.shape}, expected ({state.dim},)")
    return x


def rank_one_increment(state, x):
    """
    Rank-one increment for absorbing ``x`` into ``state``.

    Args:
        state: ScatterState with at least one observation
        x: New observation

    Returns:
        RankOneIncrement with ``y = sqrt((n-1)/n) (x - mean)``, n = state.n + 1

    Raises:
        InsufficientHistory: if the state is empty
    """
    x = _check_vector(state, x)
    if state.n == 0:
        raise InsufficientHistory("rank-one increment needs at least one absorbed observation")
    n = state.n + 1
    return RankOneIncrement(y=np.sqrt((n - 1) / n) * (x - state.mean))


def welford_update(state, x):
    """
    Absorb one observation.

    For D > 1 the scatter is updated as ``S + y y^T`` so the result is
    exactly symmetric; for D == 1 the two-mean product form is used.

    Args:
        state: Current ScatterState
        x: New observation of length D

    Returns:
        New ScatterState with n + 1 observations
    """
    x = _check_vector(state, x)
    if state.n == 0:
        return ScatterState(n=1, mean=x.copy(), scatter=np.zeros((state.dim, state.dim)))

    n = state.n + 1
    mean = state.mean + (x - state.mean) / n
    if state.dim > 1:
        y = rank_one_increment(state, x).y
        scatter = state.scatter + outer(y, y)
    else:
        scatter = state.scatter + np.outer(x - state.mean, x - mean)
    return ScatterState(n=n, mean=mean, scatter=scatter)


def absorb(state, frames):
    """Apply ``welford_update`` for every row of ``frames``."""
    for x in frames:
        state = welford_update(state, x)
    return state


def _as_frame_matrix(frames):
    frames = list(frames) if not isinstance(frames, np.ndarray) else frames
    if len(frames) == 0:
        raise InsufficientData("batch scatter needs at least one frame")
    lengths = {np.shape(frame) for frame in frames}
    if len(lengths) != 1:
        raise DimensionError(f"frames have differing shapes: {sorted(lengths)}")
    matrix = np.asarray(frames, dtype=float)
    if matrix.ndim != 2:
        raise DimensionError(f"frames must be vectors, got shape {matrix.shape[1:]}")
    return matrix


def batch_scatter(frames):
    """
    Mean and scatter of a whole set of vectors.

    Args:
        frames: Non-empty sequence of equal-length vectors (or n x D array)

    Returns:
        ScatterState with ``scatter = sum (x_k - mu)(x_k - mu)^T``

    Raises:
        InsufficientData: for an empty list
        DimensionError: for ragged input
    """
    matrix = _as_frame_matrix(frames)
    mean = matrix.mean(axis=0)
    centered = matrix - mean
    scatter = centered.T @ centered
    return ScatterState(n=matrix.shape[0], mean=mean, scatter=0.5 * (scatter + scatter.T))


def combined_moments(nb, mu_b, var_b, nf, mu_f, var_f):
    """
    Pooled mean and variance of two populations, componentwise.

        mu      = (N_b mu_b + N_f mu_f) / (N_b + N_f)
        sigma^2 = (N_b s_b^2 + N_f s_f^2) / (N_b + N_f)
                  + N_b N_f / (N_b + N_f)^2 (mu_b - mu_f)^2

    Variances are population (divide-by-N) variances.

    Returns:
        (mean, variance) arrays

    Raises:
        DegenerateInput: if both counts are zero
        InvalidInput: for negative counts or variances
    """
    if nb < 0 or nf < 0:
        raise InvalidInput(f"counts must be non-negative, got {nb} and {nf}")
    total = nb + nf
    if total == 0:
        raise DegenerateInput("combined moments need at least one observation")
    mu_b, var_b, mu_f, var_f = (np.asarray(value, dtype=float) for value in (mu_b, var_b, mu_f, var_f))
    if np.any(var_b < 0) or np.any(var_f < 0):
        raise InvalidInput("variances must be non-negative")
    if not (mu_b.shape == var_b.shape == mu_f.shape == var_f.shape):
        raise DimensionError("means and variances must share one shape")

    mean = (nb * mu_b + nf * mu_f) / total
    variance = (nb * var_b + nf * var_f) / total + nb * nf / total ** 2 * (mu_b - mu_f) ** 2
    return mean, variance
