"""
Command line interface.

Subcommands:

    synth     write a synthetic labeled sequence (pixel samples or a scene)
    model     train block models on frames and save them
    segment   apply saved models to frames; write backgrounds, residuals, masks
    eval      RMSE report for a list of selections (optionally held out)
    perturb   dominant-eigenvector drift per arriving frame
    theory    perturbation-bound, expectation and matrix identity checks
    subspace  frame coordinates in planes of two eigenvectors

Exit status is 0 on success, 1 for invalid input or configuration and 2 for
failures during computation.

Example:
    $ wevbg synth --dim 2 --n-bg 92 --n-fg 29 --seed 7 --out run
    $ wevbg perturb --samples run/samples.csv --out run
"""

import argparse
import os
import sys
import warnings

from . import events as ev
from .config import RunConfig
from .errors import ConfigError, RegimeWarning, ValidationError, WevbgError
from .evalkit import (
    build_ground_truth, consecutive_pairs, frame_basis, holdout_eval, labeled_spreads, subspace_grid,
    sweep_selections, weakest_informative_pair, window_sweep, write_grid_csv, write_report_csv,
)
from .frames import load_frames, load_labels, read_samples, save_frames, save_labels, write_pgm, write_samples
from .logger import Logger
from .runstats import RunStats
from .scene import SceneParams, synth_scene
from .segmenter import (
    load_models, models_from_bases, save_models, segment_sequence, tile_blocks, train_block_bases,
    train_block_models, write_segmentation,
)
from .stopwatch import Stopwatch
from .theory import (
    ORDERS, TwoClassParams, beta_stability, bound_rows, check_matrix_identities, check_expectation_chain,
    drift_experiment, drift_ratio, drift_stats, make_rng, random_test_matrix, synth_two_class, write_drift_csv,
    write_summary_csv,
)
from .workers import WorkerPool

CHECKS = ('bound', 'chain', 'identities', 'drift', 'all')


class ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors raise ConfigError instead of exiting."""
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def progress_events(log):
    """Events instance that logs pipeline progress at debug level."""
    events = ev.Events()
    events.on(ev.BLOCK_TRAINED, lambda e: log.debug('block trained', e.payload['index'], e.payload['origin']))
    events.on(ev.FRAME_SEGMENTED, lambda e: log.debug('frame done', e.payload['index']))
    events.on(ev.DRIFT_STEP, lambda e: log.debug('drift step', e.payload['record'].step))
    return events


def _timed(log, name, function, *args, **kwargs):
    Stopwatch.start(name)
    result = function(*args, **kwargs)
    log.debug(f"{name} took {Stopwatch.stop(name):.3f}s")
    return result


def cmd_synth(args, log):
    config = RunConfig(seed=args.seed, out_dir=args.out).validate()
    if args.kind == 'pixels':
        params = TwoClassParams(
            dim=args.dim, mu_b=args.mu_b, mu_f=args.mu_f, sigma_b=args.sigma_b, sigma_f=args.sigma_f,
            n_b=args.n_bg, n_f=args.n_fg, seed=config.seed,
        )
        seq = synth_two_class(params, args.order)
        os.makedirs(args.out, exist_ok=True)
        write_samples(os.path.join(args.out, 'samples.csv'), seq)
        save_labels(os.path.join(args.out, 'labels.csv'), seq.labels)
        log.info(f"wrote {len(seq)} samples of dimension {args.dim} to {args.out}")
        return 0

    params = SceneParams(
        height=args.height, width=args.width, n_frames=args.frames, n_fg=args.n_fg,
        area_fraction=args.area, noise=args.noise, seed=config.seed,
    )
    scene = synth_scene(params)
    save_frames(scene.sequence, os.path.join(args.out, 'frames'))
    save_labels(os.path.join(args.out, 'labels.csv'), scene.sequence.labels)
    write_pgm(os.path.join(args.out, 'background.pgm'), scene.background)
    log.info(f"wrote {len(scene.sequence)} frames of {args.height}x{args.width} to {args.out}")
    return 0


def cmd_model(args, log):
    config = RunConfig(
        input_dir=args.input, pattern=args.pattern, block=args.block, selection=args.selection, out_dir=args.out,
    ).validate()
    seq = load_frames(config.input_dir, config.pattern)
    grid = tile_blocks(seq.shape, config.block_size)
    with WorkerPool() as pool:
        models = _timed(log, 'train', train_block_models, seq, grid, config.selection_obj, pool, progress_events(log))
    save_models(models, grid, config.out_dir)
    return 0


def cmd_segment(args, log):
    config = RunConfig(
        input_dir=args.input, pattern=args.pattern, models_dir=args.models, tau=args.tau, out_dir=args.out,
    ).validate()
    models, grid = load_models(config.models_dir)
    seq = load_frames(config.input_dir, config.pattern)
    with WorkerPool() as pool:
        results = _timed(log, 'segment', segment_sequence, models, grid, seq, config.tau, pool, progress_events(log))
    os.makedirs(config.out_dir, exist_ok=True)
    for index, result in enumerate(results):
        write_segmentation(result, config.out_dir, index)
    log.info(f"segmented {len(results)} frames into {config.out_dir}")
    return 0


def cmd_eval(args, log):
    config = RunConfig(
        input_dir=args.input, pattern=args.pattern, labels=args.labels, block=args.block,
        selections=args.selections, train_frames=args.train_frames, windows=args.windows, out_dir=args.out,
    ).validate()
    seq = load_frames(config.input_dir, config.pattern)
    seq = seq.with_labels(load_labels(config.labels, len(seq)))
    if config.train_frames is not None and config.train_frames >= len(seq):
        raise ConfigError(f"--train-frames {config.train_frames} leaves no frames out of {len(seq)}")
    gt = build_ground_truth(seq)
    grid = tile_blocks(seq.shape, config.block_size)
    events = progress_events(log)

    with WorkerPool() as pool:
        if config.train_frames is None:
            report = _timed(log, 'eval', sweep_selections, seq, grid, config.selection_list, gt, pool, events)
        else:
            k = config.train_frames
            bases = train_block_bases(seq.subset(range(k)), grid, pool, events)
            model_sets = {s.id: models_from_bases(bases, grid, s) for s in config.selection_list}
            report = _timed(
                log, 'eval', holdout_eval, model_sets, grid, seq.subset(range(k, len(seq))), gt,
                index_offset=k, gt_source=seq.background_indices, pool=pool, events=events,
            )
        windows = None
        if config.window_list:
            windows = _timed(log, 'windows', window_sweep, seq, gt, config.window_list, config.selection_list, pool)

    os.makedirs(config.out_dir, exist_ok=True)
    write_report_csv(report, os.path.join(config.out_dir, 'eval.csv'))
    if windows is not None:
        windows.to_csv(os.path.join(config.out_dir, 'windows.csv'), index=False, float_format='%.10g')
    log.info(f"wrote {len(report.rows)} report rows to {config.out_dir}")
    return 0


def cmd_perturb(args, log):
    config = RunConfig(
        input_dir=args.input, pattern=args.pattern, labels=args.labels, samples=args.samples,
        region=args.region, out_dir=args.out,
    ).validate()
    if config.samples:
        seq = read_samples(config.samples)
    elif config.input_dir:
        seq = load_frames(config.input_dir, config.pattern)
        if config.labels:
            seq = seq.with_labels(load_labels(config.labels, len(seq)))
        if config.region_box:
            seq = seq.crop(*config.region_box)
    else:
        raise ConfigError("perturb needs --samples or --input")

    records = _timed(log, 'perturb', drift_experiment, seq, events=progress_events(log))
    os.makedirs(config.out_dir, exist_ok=True)
    write_drift_csv(records, os.path.join(config.out_dir, 'drift.csv'))
    for label, stat in sorted(drift_stats(records).items()):
        log.info(f"mean delta_norm [{label or 'unlabeled'}] = {stat.mean:.6g} over {stat.total_samples} steps")
    return 0


def cmd_theory(args, log):
    config = RunConfig(
        seed=args.seed, trials=args.trials, bound_dim=args.bound_dim, seeds=args.seeds, out_dir=args.out,
    ).validate()
    params = TwoClassParams(
        dim=args.dim, mu_b=args.mu_b, mu_f=args.mu_f, sigma_b=args.sigma_b, sigma_f=args.sigma_f,
        n_b=args.n_bg, n_f=args.n_fg, seed=config.seed,
    ).validate()
    checks = CHECKS[:-1] if args.check == 'all' else (args.check,)

    rows = []
    with WorkerPool() as pool:
        if 'bound' in checks:
            a = random_test_matrix(config.bound_dim, make_rng(config.seed))
            rows += bound_rows(_timed(log, 'bound', beta_stability, a, config.trials, config.seed))
        if 'chain' in checks:
            with warnings.catch_warnings():
                warnings.simplefilter('ignore', RegimeWarning)
                rows += _timed(log, 'chain', check_expectation_chain, params, config.trials, pool=pool)
        if 'identities' in checks:
            rows += _timed(log, 'identities', check_matrix_identities, config.trials, config.seed, pool=pool)
        if 'drift' in checks:
            rows.append(_timed(log, 'drift', drift_ratio, params, config.seeds, pool=pool))

    os.makedirs(config.out_dir, exist_ok=True)
    write_summary_csv(rows, os.path.join(config.out_dir, 'summary.csv'))
    for row in rows:
        if row.passed is False:
            log.warning(f"check {row.metric} did not pass: estimate {row.estimate:.6g}, bound {row.bound:.6g}")
    return 0


def cmd_subspace(args, log):
    config = RunConfig(
        input_dir=args.input, pattern=args.pattern, labels=args.labels, grid_n=args.grid,
        pairs=[tuple(pair) for pair in args.pair or []], region=args.region, out_dir=args.out,
    ).validate()
    seq = load_frames(config.input_dir, config.pattern)
    if config.labels:
        seq = seq.with_labels(load_labels(config.labels, len(seq)))
    if config.region_box:
        seq = seq.crop(*config.region_box)
    basis = _timed(log, 'basis', frame_basis, seq)

    pairs = list(config.pairs)
    if args.consecutive:
        pairs += consecutive_pairs(basis.size, args.consecutive)
    if not pairs:
        pairs = [(1, 2), weakest_informative_pair(basis)]
    grids = [(pair, subspace_grid(seq, basis, pair, config.grid_n)) for pair in pairs]

    os.makedirs(config.out_dir, exist_ok=True)
    for (i, j), points in grids:
        write_grid_csv(points, os.path.join(config.out_dir, f"subspace_{i}_{j}.csv"))
        if seq.labels is not None:
            spread_bg, spread_fg = labeled_spreads(points)
            log.info(f"components ({i}, {j}): bg spread {spread_bg:.6g}, fg spread {spread_fg:.6g}")
    return 0


def _add_input(parser, required=True):
    parser.add_argument('--input', required=required, help='directory of PGM/PNG frames')
    parser.add_argument('--pattern', default='*', help='glob pattern for frame files (default: *)')


def _add_two_class(parser, n_bg, n_fg):
    parser.add_argument('--dim', type=int, default=2, help='pixel vector length D')
    parser.add_argument('--n-bg', type=int, default=n_bg, help='number of background samples')
    parser.add_argument('--n-fg', type=int, default=n_fg, help='number of foreground samples')
    parser.add_argument('--mu-b', type=float, default=0.3, help='background mean')
    parser.add_argument('--mu-f', type=float, default=0.6, help='foreground mean')
    parser.add_argument('--sigma-b', type=float, default=0.005, help='background standard deviation')
    parser.add_argument('--sigma-f', type=float, default=0.1, help='foreground standard deviation')


def build_parser():
    parser = ArgumentParser(prog='wevbg', description='Eigenbackground modeling with strongest and weakest eigenvectors')
    parser.add_argument('--verbose', action='store_true', help='log debug messages')
    parser.add_argument('--log-file', help='also write the log to this file')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('synth', help='write a synthetic labeled sequence')
    p.add_argument('--kind', choices=('pixels', 'scene'), default='pixels')
    p.add_argument('--out', required=True, help='output directory')
    p.add_argument('--seed', type=int, default=0)
    _add_two_class(p, 92, 29)
    p.add_argument('--order', choices=ORDERS, default='shuffle', help='frame order of the pixel samples')
    p.add_argument('--height', type=int, default=120)
    p.add_argument('--width', type=int, default=160)
    p.add_argument('--frames', type=int, default=121)
    p.add_argument('--area', type=float, default=0.10, help='object area fraction of the scene')
    p.add_argument('--noise', type=float, default=0.01, help='pixel noise of the scene')
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser('model', help='train and save block models')
    _add_input(p)
    p.add_argument('--block', default='40', help="block size 'N' or 'HxW' (default: 40)")
    p.add_argument('--selection', default='weakest:10', help='strongest:k | weakest:k | idx:1,3,30 | all')
    p.add_argument('--out', required=True, help='models directory')
    p.set_defaults(handler=cmd_model)

    p = sub.add_parser('segment', help='segment frames with saved models')
    p.add_argument('--models', required=True, help='models directory written by model')
    _add_input(p)
    p.add_argument('--tau', type=float, default=0.1, help='residual threshold (default: 0.1)')
    p.add_argument('--out', required=True, help='output directory')
    p.set_defaults(handler=cmd_segment)

    p = sub.add_parser('eval', help='RMSE report over eigenvector selections')
    _add_input(p)
    p.add_argument('--labels', required=True, help='frame,label CSV')
    p.add_argument('--block', default='40')
    p.add_argument('--selections', default='strongest:1,strongest:7,all,weakest:7,weakest:1')
    p.add_argument('--train-frames', type=int, help='train on the first K frames, evaluate the rest')
    p.add_argument('--windows', help="window sizes for the window sweep, e.g. '32,64,128,256'")
    p.add_argument('--out', required=True, help='output directory')
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser('perturb', help='dominant eigenvector drift per frame')
    p.add_argument('--samples', help='samples CSV written by synth')
    _add_input(p, required=False)
    p.add_argument('--labels', help='frame,label CSV for --input')
    p.add_argument('--region', help="restrict frames to 'row,col,height,width'")
    p.add_argument('--out', required=True, help='output directory')
    p.set_defaults(handler=cmd_perturb)

    p = sub.add_parser('theory', help='perturbation theory checks')
    p.add_argument('--check', choices=CHECKS, default='all')
    p.add_argument('--trials', type=int, default=10_000)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--bound-dim', type=int, default=5, help='matrix size for the bound check')
    p.add_argument('--seeds', type=int, default=100, help='number of streams for the drift check')
    _add_two_class(p, 60, 60)
    p.add_argument('--out', required=True, help='output directory')
    p.set_defaults(handler=cmd_theory)

    p = sub.add_parser('subspace', help='frame coordinates in eigenvector planes')
    _add_input(p)
    p.add_argument('--labels', help='frame,label CSV')
    p.add_argument('--pair', type=int, nargs=2, action='append', metavar=('I', 'J'), help='component pair (repeatable)')
    p.add_argument('--consecutive', type=int, default=0, help='add this many evenly spaced neighbour pairs')
    p.add_argument('--grid', type=int, default=5, help='grid vertices per axis')
    p.add_argument('--region', help="restrict frames to 'row,col,height,width'")
    p.add_argument('--out', required=True, help='output directory')
    p.set_defaults(handler=cmd_subspace)
    return parser


def main(argv=None):
    """
    Run one command.

    Returns:
        Exit status (0 ok, 1 invalid input, 2 runtime failure)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as error:
        print(f"wevbg: error: {error}", file=sys.stderr)
        return 1
    except SystemExit as stop:
        return stop.code or 0

    log = Logger(debug=args.verbose, log_file=args.log_file)
    RunStats.clear()
    try:
        return args.handler(args, log)
    except ValidationError as error:
        log.error(f"{type(error).__name__}: {error}")
        return 1
    except (WevbgError, OSError) as error:
        log.error(f"{type(error).__name__}: {error}")
        return 2
    finally:
        if RunStats.get():
            log.debug('stage timings:\n' + RunStats.summary())
        log.close()
