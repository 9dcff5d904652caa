"""
Rank-one perturbation of the dominant eigenvector, measured.

Every frame absorbed by the Welford recurrence perturbs the scatter matrix
by a rank-one term ``y y^T``. This module measures how much that moves the
dominant eigenvector and checks the statements that bound it:

- ``synth_two_class`` draws labeled pixel processes from two Gaussian
  classes, a tight background class and a loose foreground class.
- ``drift_experiment`` records, for every arriving frame, the change of the
  dominant eigenvector and the size of the perturbation.
- ``drift_ratio`` compares mean foreground and background drift over many
  seeded streams.
- ``estimate_beta`` / ``beta_stability`` estimate the constant in
  ``||v - v'|| <= beta ||E||`` from an ensemble of small perturbations.
- ``check_expectation_chain`` runs the Monte-Carlo checks on expected
  perturbation size and expected drift angle per class.
- ``check_matrix_identities`` checks interlacing, the eigenvalue shift bound,
  the spectral norm identity and the outer-product eigenvalue on random
  matrices.

Random numbers come from ``numpy.random.Generator(PCG64(seed))``; Monte-Carlo
trials get independent streams spawned from one ``SeedSequence``.

Example:
    >>> from wevbg.theory import TwoClassParams, drift_experiment, synth_two_class
    >>> seq = synth_two_class(TwoClassParams(seed=7))
    >>> len(drift_experiment(seq))
    118
"""

import logging
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd

from . import events as ev
from .errors import DimensionError, InsufficientData, InvalidInput, RegimeWarning, SkippedDegenerate
from .frames import BACKGROUND, FOREGROUND, FrameSequence
from .linalg import as_sym_matrix, eigh_desc, outer, outer_nonzero_eigenvalue, snapshot_eigenbasis, spectral_norm
from .runstats import RunningStat
from .streamstats import ScatterState, absorb, batch_scatter, rank_one_increment, welford_update
from .workers import pool_map

WARMUP = 3
GAP_RATIO = 1e-8
DRIFT_RATIO_BOUND = 2.0
IDENTITY_TOL = 1e-9
CSV_FLOAT_FORMAT = '%.10g'
ORDERS = ('shuffle', 'interleaved', 'given')
DRIFT_COLUMNS = ['step', 'label', 'delta_norm', 'angle', 'e_norm']
SUMMARY_COLUMNS = ['metric', 'estimate', 'std_error', 'bound', 'pass']

logger = logging.getLogger(__name__)


def make_rng(seed):
    """The generator every random draw of the package goes through."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class TwoClassParams:
    """
    Two Gaussian pixel classes.

    Means and deviations are scalars (shared by every component) or
    length-``dim`` sequences.

    Attributes:
        dim: Vector length D
        mu_b, mu_f: Class means
        sigma_b, sigma_f: Per-component standard deviations
        n_b, n_f: Class sizes
        seed: RNG seed
    """
    dim: int = 2
    mu_b: object = 0.3
    mu_f: object = 0.6
    sigma_b: object = 0.005
    sigma_f: object = 0.1
    n_b: int = 92
    n_f: int = 29
    seed: int = 0

    def _component(self, value, name):
        array = np.broadcast_to(np.asarray(value, dtype=float), (self.dim,)) if np.ndim(value) == 0 \
            else np.asarray(value, dtype=float)
        if array.shape != (self.dim,):
            raise DimensionError(f"{name} has shape {array.shape}, expected ({self.dim},)")
        return np.array(array)

    def arrays(self):
        """(mu_b, mu_f, sigma_b, sigma_f) as length-D arrays."""
        return (
            self._component(self.mu_b, 'mu_b'),
            self._component(self.mu_f, 'mu_f'),
            self._component(self.sigma_b, 'sigma_b'),
            self._component(self.sigma_f, 'sigma_f'),
        )

    def validate(self):
        if self.dim < 1:
            raise InvalidInput(f"dim must be positive, got {self.dim}")
        if self.n_b < 0 or self.n_f < 0 or self.n_b + self.n_f < 1:
            raise InvalidInput(f"class sizes must be non-negative and not both zero, got {self.n_b}, {self.n_f}")
        _, _, sigma_b, sigma_f = self.arrays()
        if np.any(sigma_b <= 0) or np.any(sigma_f <= 0):
            raise InvalidInput("standard deviations must be positive")
        if self.seed < 0:
            raise InvalidInput(f"seed must be non-negative, got {self.seed}")
        return self

    @property
    def total_var_b(self):
        """Sum of background component variances."""
        return float(np.sum(self.arrays()[2] ** 2))

    @property
    def total_var_f(self):
        """Sum of foreground component variances."""
        return float(np.sum(self.arrays()[3] ** 2))

    @property
    def separation(self):
        """Squared distance between the class means."""
        mu_b, mu_f, _, _ = self.arrays()
        return float(np.sum((mu_b - mu_f) ** 2))


def _draw_classes(params, rng):
    mu_b, mu_f, sigma_b, sigma_f = params.arrays()
    bg = mu_b + sigma_b * rng.standard_normal((params.n_b, params.dim))
    fg = mu_f + sigma_f * rng.standard_normal((params.n_f, params.dim))
    return bg, fg


def synth_two_class(params, order='shuffle'):
    """
    Labeled samples of two Gaussian classes.

    Args:
        params: TwoClassParams
        order: 'shuffle' (random permutation), 'interleaved' (foreground
            spread evenly) or 'given' (background first)

    Returns:
        FrameSequence of 1 x D frames labeled 'bg'/'fg'
    """
    params.validate()
    if order not in ORDERS:
        raise InvalidInput(f"order must be one of {ORDERS}, got {order!r}")
    rng = make_rng(params.seed)
    bg, fg = _draw_classes(params, rng)
    vectors = np.concatenate([bg, fg])
    labels = np.array([BACKGROUND] * params.n_b + [FOREGROUND] * params.n_f, dtype=object)
    n = params.n_b + params.n_f

    if order == 'shuffle':
        permutation = rng.permutation(n)
    elif order == 'interleaved':
        fg_slots = [int((i + 0.5) * n / params.n_f) for i in range(params.n_f)] if params.n_f else []
        permutation = np.empty(n, dtype=int)
        permutation[fg_slots] = np.arange(params.n_b, n)
        permutation[np.setdiff1d(np.arange(n), fg_slots)] = np.arange(params.n_b)
    else:
        permutation = np.arange(n)
    return FrameSequence.from_vectors(vectors[permutation], tuple(labels[permutation]), (f"synthetic:{params.seed}",))


@dataclass(frozen=True)
class DriftRecord:
    """
    Dominant-eigenvector change caused by one arriving frame.

    Attributes:
        step: Number of frames absorbed after the arrival
        label: 'bg', 'fg' or '' for unlabeled input
        delta_norm: ``||v - v'||`` after sign alignment
        angle: ``arccos |v . v'|`` in radians
        e_norm: ``||y||^2``, the spectral norm of the step's perturbation
        lambda_before, lambda_after: Dominant eigenvalue around the step
    """
    step: int
    label: str
    delta_norm: float
    angle: float
    e_norm: float
    lambda_before: float = math.nan
    lambda_after: float = math.nan


def sign_aligned_change(v, v_new):
    """(``||v - v'||`` with v' flipped to face v, angle between the lines)."""
    dot = float(v @ v_new)
    if dot < 0:
        v_new = -v_new
    return float(np.linalg.norm(v - v_new)), float(np.arccos(np.clip(abs(dot), 0.0, 1.0)))


def dominant_direction(state, history):
    """
    Dominant eigenpair of a stream's scatter.

    Uses the D x D scatter when D <= n and the snapshot method on the
    absorbed vectors otherwise.

    Returns:
        (eigenvalue, unit vector)
    """
    if state.dim <= state.n:
        values, vectors = eigh_desc(state.scatter)
        return float(values[0]), vectors[:, 0]
    basis = snapshot_eigenbasis((history - state.mean).T, state.mean)
    return float(basis.values[0]), basis.vectors[:, 0]


def drift_experiment(seq, warmup=WARMUP, events=None):
    """
    Track the dominant eigenvector as frames arrive.

    The first ``warmup`` frames seed the scatter; every later frame yields
    one DriftRecord.

    Args:
        seq: FrameSequence, labeled or not
        warmup: Frames absorbed before measuring (default 3)
        events: Optional Events receiving ``drift_step``

    Returns:
        List of DriftRecord, one per frame after the warm-up

    Raises:
        InsufficientData: for fewer than ``warmup`` frames
    """
    if len(seq) < warmup:
        raise InsufficientData(f"drift experiment needs at least {warmup} frames, got {len(seq)}")
    x = seq.vectors()
    labels = seq.labels or ('',) * len(seq)
    state = absorb(ScatterState.empty(x.shape[1]), x[:warmup])
    value, v = dominant_direction(state, x[:warmup])

    records = []
    for k in range(warmup, len(seq)):
        increment = rank_one_increment(state, x[k])
        state = welford_update(state, x[k])
        new_value, new_v = dominant_direction(state, x[:k + 1])
        delta, angle = sign_aligned_change(v, new_v)
        record = DriftRecord(state.n, labels[k], delta, angle, increment.norm_squared, value, new_value)
        records.append(record)
        ev.emit(events, ev.DRIFT_STEP, record=record)
        value, v = new_value, new_v
    logger.debug('drift experiment: %d steps, D=%d', len(records), x.shape[1])
    return records


def drift_stats(records, field='delta_norm'):
    """RunningStat of one DriftRecord field per label."""
    stats = {}
    for record in records:
        if record.label not in stats:
            stats[record.label] = RunningStat(f"{field}.{record.label}")
        stats[record.label].sample(getattr(record, field))
    return stats


def drift_ratio(params, seeds=100, threshold=DRIFT_RATIO_BOUND, pool=None):
    """
    Foreground-to-background ratio of the mean drift, over many streams.

    Stream ``k`` is ``synth_two_class`` with seed ``params.seed + k``; its
    ratio is the mean ``||v - v'||`` over foreground arrivals divided by the
    mean over background arrivals.

    Args:
        params: TwoClassParams with both classes present
        seeds: Number of streams
        threshold: The 99% interval of the mean ratio must lie above this
        pool: Optional WorkerPool

    Returns:
        SummaryRow ``drift_ratio``

    Raises:
        InsufficientData: if a stream has no arrival of one class, or its
            background never drifts
    """
    params.validate()
    if seeds < 2:
        raise InvalidInput(f"at least 2 seeds are needed, got {seeds}")

    def ratio(seed):
        stats = drift_stats(drift_experiment(synth_two_class(replace(params, seed=seed))))
        if BACKGROUND not in stats or FOREGROUND not in stats:
            raise InsufficientData(f"stream {seed} lacks arrivals of one class")
        if stats[BACKGROUND].mean == 0.0:
            raise InsufficientData(f"background of stream {seed} does not drift")
        return stats[FOREGROUND].mean / stats[BACKGROUND].mean

    stat = RunningStat('drift_ratio').extend(pool_map(pool, ratio, list(range(params.seed, params.seed + seeds))))
    low, high = stat.confidence_interval()
    logger.info('drift ratio over %d seeds: %.4g, 99%% interval [%.4g, %.4g]', seeds, stat.mean, low, high)
    return SummaryRow('drift_ratio', stat.mean, stat.std_error, threshold, low > threshold)


@dataclass(frozen=True)
class PerturbationReport:
    """
    One rank-one perturbation ``a + y y^T``.

    Attributes:
        delta_norm: ``||v - v'||`` after sign alignment
        e_norm: ``||y y^T||_2 = ||y||^2``
        ratio: delta_norm / e_norm (0 when y is zero)
        gap: Gap between the two largest eigenvalues of ``a``
    """
    delta_norm: float
    e_norm: float
    ratio: float
    gap: float


def _dominant_with_gap(a):
    """Dominant eigenpair of a validated matrix; SkippedDegenerate if not simple."""
    values, vectors = eigh_desc(a)
    gap = float(values[0] - values[1]) if values.shape[0] > 1 else math.inf
    scale = float(np.max(np.abs(values)))
    if scale == 0.0 or gap <= GAP_RATIO * scale:
        raise SkippedDegenerate(f"dominant eigenvalue is not simple (gap {gap:.3g})")
    return float(values[0]), vectors[:, 0], gap


def _perturbed_change(a, v, y):
    e_norm = float(y @ y)
    if e_norm == 0.0:
        return 0.0, 0.0
    _, vectors = eigh_desc(a + outer(y, y))
    delta, _ = sign_aligned_change(v, vectors[:, 0])
    return delta, e_norm


def check_perturbation_bound(a, y):
    """
    Measure one perturbation against ``||v - v'|| <= beta ||E||``.

    Args:
        a: Symmetric matrix with a simple dominant eigenvalue
        y: Perturbation vector, ``E = y y^T``

    Returns:
        PerturbationReport

    Raises:
        SkippedDegenerate: if the dominant eigenvalue of ``a`` is not simple
    """
    a = as_sym_matrix(a)
    y = np.asarray(y, dtype=float)
    if y.shape != (a.shape[0],):
        raise DimensionError(f"y has shape {y.shape}, expected ({a.shape[0]},)")
    _, v, gap = _dominant_with_gap(a)
    delta, e_norm = _perturbed_change(a, v, y)
    ratio = delta / e_norm if e_norm > 0 else 0.0
    return PerturbationReport(delta, e_norm, ratio, gap)


@dataclass(frozen=True)
class BetaEstimate:
    """
    Empirical beta over a perturbation ensemble.

    Attributes:
        beta: Largest observed ratio ``||v - v'|| / ||E||``
        mean_ratio: Mean ratio
        trials: Ensemble size
        max_e_norm: Largest ``||E||`` in the ensemble
    """
    beta: float
    mean_ratio: float
    trials: int
    max_e_norm: float


@dataclass(frozen=True)
class BetaStability:
    """Beta of an ensemble and of the same ensemble shrunk by ``shrink``."""
    full: BetaEstimate
    shrunk: BetaEstimate
    shrink: float

    @property
    def relative_change(self):
        if self.full.beta == 0.0:
            return 0.0 if self.shrunk.beta == 0.0 else math.inf
        return abs(self.shrunk.beta - self.full.beta) / self.full.beta


def estimate_beta(a, trials=10_000, radius_fraction=0.1, seed=0, shrink=1.0):
    """
    Largest drift-to-perturbation ratio over random small perturbations.

    Directions are uniform on the sphere; norms are drawn in
    ``[0.5, 1] * radius_fraction * sqrt(lambda_max)`` so that
    ``||y||^2 <= radius_fraction^2 * lambda_max``, then divided by ``shrink``.
    The same seed gives the same directions for every ``shrink``.

    Raises:
        SkippedDegenerate: if the dominant eigenvalue of ``a`` is not simple
    """
    a = as_sym_matrix(a)
    if trials < 1:
        raise InvalidInput(f"trials must be positive, got {trials}")
    value, v, _ = _dominant_with_gap(a)
    rng = make_rng(seed)
    directions = rng.standard_normal((trials, a.shape[0]))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    scale = math.sqrt(abs(value)) * radius_fraction
    radii = scale * rng.uniform(0.5, 1.0, size=trials) / shrink

    ratios = RunningStat('beta_ratio')
    max_e_norm = 0.0
    for direction, radius in zip(directions, radii):
        delta, e_norm = _perturbed_change(a, v, radius * direction)
        ratios.sample(delta / e_norm)
        max_e_norm = max(max_e_norm, e_norm)
    return BetaEstimate(ratios.max, ratios.mean, trials, max_e_norm)


def beta_stability(a, trials=10_000, seed=0, shrink=10.0, radius_fraction=0.1):
    """Estimate beta twice, the second time with every ``y`` divided by ``shrink``."""
    full = estimate_beta(a, trials, radius_fraction, seed)
    shrunk = estimate_beta(a, trials, radius_fraction, seed, shrink=shrink)
    return BetaStability(full, shrunk, shrink)


def random_test_matrix(dim, rng, spectrum=None):
    """
    Random symmetric matrix with a given spectrum.

    Args:
        dim: Matrix size
        rng: numpy Generator
        spectrum: Eigenvalues (default ``5 * 0.5**i``, simple dominant value)
    """
    spectrum = 5.0 * 0.5 ** np.arange(dim) if spectrum is None else np.asarray(spectrum, dtype=float)
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    a = (q * spectrum) @ q.T
    return 0.5 * (a + a.T)


@dataclass(frozen=True)
class SummaryRow:
    """
    One line of a summary report.

    Attributes:
        metric: Name of the checked quantity
        estimate: Measured value
        std_error: Standard error (NaN when not a Monte-Carlo mean)
        bound: The value the estimate is compared with
        passed: Check outcome, or None when the row is informational
    """
    metric: str
    estimate: float
    std_error: float = math.nan
    bound: float = math.nan
    passed: object = None


def _chain_trial(params, arrays, pooled_mean, seed):
    mu_b, mu_f, sigma_b, sigma_f = arrays
    rng = make_rng(seed)
    bg, fg = _draw_classes(params, rng)
    x_b = mu_b + sigma_b * rng.standard_normal(params.dim)
    x_f = mu_f + sigma_f * rng.standard_normal(params.dim)

    history = np.concatenate([bg, fg])
    n = history.shape[0] + 1
    coefficient = (n - 1) / n
    state = batch_scatter(history)
    _, v = dominant_direction(state, history)
    angles = []
    for x in (x_b, x_f):
        _, new_v = dominant_direction(welford_update(state, x), np.vstack([history, x]))
        angles.append(sign_aligned_change(v, new_v)[1])

    return (
        coefficient * float(np.sum((x_b - pooled_mean) ** 2)),
        coefficient * float(np.sum((x_f - pooled_mean) ** 2)),
        float(np.sum((x_b - mu_b) ** 2)),
        float(np.sum((x_f - mu_f) ** 2)),
        2.0 * float((x_b - mu_b) @ (x_b - mu_f)),
        angles[0],
        angles[1],
    )


def check_expectation_chain(params, trials=10_000, seed=None, pool=None, events=None):
    """
    Monte-Carlo checks on expected perturbation size and drift angle.

    Each trial draws a history of ``n_b + n_f`` labeled samples and one
    new arrival per class. Reported rows:

    - ``expected_e_norm_bg/fg``: mean ``||E||`` of an arrival against the
      population mean of the history, bounded by ``Sigma^2 + C`` with
      ``C = ||mu_b - mu_f||^2``
    - ``class_var_bg/fg``: mean ``||x - mu_class||^2``, equal to the summed
      class variances
    - ``cross_term_bg``: mean ``2 (x - mu_b) . (x - mu_f)`` for background
      arrivals, expected near zero when the background is tight
    - ``theta_bg/fg`` and ``theta_order``: mean drift angle per class, and
      whether the 99% intervals separate with the foreground angle larger

    Args:
        params: TwoClassParams; balanced classes are the assumed regime
        trials: Number of trials
        seed: Master seed (default ``params.seed``)
        pool: Optional WorkerPool
        events: Optional Events receiving ``trial_done``

    Returns:
        List of SummaryRow
    """
    params.validate()
    if trials < 2:
        raise InvalidInput(f"at least 2 trials are needed, got {trials}")
    if params.n_b + params.n_f < 2:
        raise InsufficientData("the history needs at least 2 samples")
    if params.n_b != params.n_f:
        message = f"unbalanced classes ({params.n_b} bg, {params.n_f} fg); results are flagged"
        warnings.warn(message, RegimeWarning, stacklevel=2)
        logger.warning(message)

    arrays = params.arrays()
    mu_b, mu_f, _, _ = arrays
    pooled_mean = (params.n_b * mu_b + params.n_f * mu_f) / (params.n_b + params.n_f)
    seeds = np.random.SeedSequence(params.seed if seed is None else seed).spawn(trials)

    def trial(item):
        index, child = item
        values = _chain_trial(params, arrays, pooled_mean, child)
        ev.emit(events, ev.TRIAL_DONE, index=index)
        return values

    results = np.array(pool_map(pool, trial, list(enumerate(seeds))))
    names = ['e_norm_bg', 'e_norm_fg', 'class_var_bg', 'class_var_fg', 'cross_term_bg', 'theta_bg', 'theta_fg']
    stats = {name: RunningStat(name).extend(results[:, i]) for i, name in enumerate(names)}

    def upper(name, metric, bound):
        stat = stats[name]
        return SummaryRow(metric, stat.mean, stat.std_error, bound, stat.mean <= bound + 3 * stat.std_error)

    def equal(name, metric, bound):
        stat = stats[name]
        return SummaryRow(metric, stat.mean, stat.std_error, bound, abs(stat.mean - bound) <= 3 * stat.std_error)

    separation = params.separation
    theta_bg, theta_fg = stats['theta_bg'], stats['theta_fg']
    ratio = theta_fg.mean / theta_bg.mean if theta_bg.mean > 0 else math.inf
    separated = theta_fg.confidence_interval()[0] > theta_bg.confidence_interval()[1]
    rows = [
        upper('e_norm_bg', 'expected_e_norm_bg', params.total_var_b + separation),
        upper('e_norm_fg', 'expected_e_norm_fg', params.total_var_f + separation),
        equal('class_var_bg', 'class_var_bg', params.total_var_b),
        equal('class_var_fg', 'class_var_fg', params.total_var_f),
        equal('cross_term_bg', 'cross_term_bg', 0.0),
        SummaryRow('theta_bg', theta_bg.mean, theta_bg.std_error),
        SummaryRow('theta_fg', theta_fg.mean, theta_fg.std_error),
        SummaryRow('theta_order', ratio, math.nan, 1.0, bool(separated)),
    ]
    logger.info('expectation chain: %d trials, theta fg/bg = %.3g', trials, ratio)
    return rows


def check_matrix_identities(trials=10_000, seed=0, dims=(2, 12), pool=None):
    """
    Property checks on random symmetric matrices.

    Every trial draws a symmetric ``A`` of random size within ``dims`` and
    random vectors ``y``, ``u``, ``v``. Each row reports the largest
    violation, scaled by the magnitude of the quantities involved, against a
    tolerance of 1e-9:

    - ``interlacing_lower``: ``lambda_max(A) <= lambda_max(A + y y^T)``
    - ``interlacing_upper``: ``lambda_max(A + y y^T) <= lambda_max(A) + ||y||^2``
    - ``epsilon_bound``: the shift lies within ``[0, ||y y^T||_2]``
    - ``spectral_norm``: ``spectral_norm(A)`` equals the largest absolute
      eigenvalue from an independent solver
    - ``outer_eigenvalue``: ``v . u`` equals ``trace(u v^T)``, and ``u v^T``
      has rank at most one

    Returns:
        List of SummaryRow
    """
    low, high = dims
    if low < 1 or high < low:
        raise InvalidInput(f"bad dimension range {dims}")
    seeds = np.random.SeedSequence(seed).spawn(trials)

    def trial(child):
        rng = make_rng(child)
        d = int(rng.integers(low, high + 1))
        b = rng.standard_normal((d, d))
        a = 0.5 * (b + b.T)
        y, u, w = rng.standard_normal((3, d))

        before = eigh_desc(a)[0][0]
        after = eigh_desc(a + outer(y, y))[0][0]
        e_norm = float(y @ y)
        oracle = float(np.max(np.abs(np.linalg.eigvalsh(a))))
        scale = 1.0 + oracle + e_norm
        shift = after - before
        uw = outer(u, w)
        return (
            (before - after) / scale,
            (after - before - e_norm) / scale,
            max(-shift, shift - e_norm) / scale,
            abs(spectral_norm(a) - oracle) / (1.0 + oracle),
            abs(outer_nonzero_eigenvalue(u, w) - np.trace(uw)) / (1.0 + np.linalg.norm(u) * np.linalg.norm(w)),
            float(np.linalg.matrix_rank(uw)),
        )

    results = np.array(pool_map(pool, trial, seeds))
    rows = []
    names = ['interlacing_lower', 'interlacing_upper', 'epsilon_bound', 'spectral_norm', 'outer_eigenvalue']
    for i, name in enumerate(names):
        worst = max(0.0, float(np.max(results[:, i])))
        rows.append(SummaryRow(name, worst, math.nan, IDENTITY_TOL, worst <= IDENTITY_TOL))
    rank = float(np.max(results[:, 5]))
    rows.append(SummaryRow('outer_rank', rank, math.nan, 1.0, rank <= 1.0))
    logger.info('matrix identities: %d trials, %d failed checks', trials, sum(not row.passed for row in rows))
    return rows


def bound_rows(stability):
    """Summary rows of a BetaStability result."""
    return [
        SummaryRow('beta', stability.full.beta, math.nan, math.nan, bool(np.isfinite(stability.full.beta))),
        SummaryRow('beta_shrunk', stability.shrunk.beta, math.nan, math.nan, bool(np.isfinite(stability.shrunk.beta))),
        SummaryRow('beta_relative_change', stability.relative_change, math.nan, 0.1, stability.relative_change < 0.1),
    ]


def write_drift_csv(records, path):
    """Write DriftRecords as ``step,label,delta_norm,angle,e_norm``."""
    table = pd.DataFrame(
        [[r.step, r.label, r.delta_norm, r.angle, r.e_norm] for r in records],
        columns=DRIFT_COLUMNS,
    )
    table.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)


def write_summary_csv(rows, path):
    """Write SummaryRows as ``metric,estimate,std_error,bound,pass``."""
    table = pd.DataFrame(
        [[r.metric, r.estimate, r.std_error, r.bound, '' if r.passed is None else bool(r.passed)] for r in rows],
        columns=SUMMARY_COLUMNS,
    )
    table.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
