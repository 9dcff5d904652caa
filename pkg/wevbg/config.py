"""
Run configuration.

``RunConfig`` collects every knob a command can set and validates them all
before any computation starts or any output directory is created.

Example:
    >>> from wevbg.config import RunConfig
    >>> config = RunConfig(block='40', selection='weakest:10', tau=0.1).validate()
    >>> config.block_size, config.selection_obj.id
    ((40, 40), 'weakest:10')
"""

import os
from dataclasses import dataclass, field

from .eigenmodel import Selection, parse_selections
from .errors import ConfigError, SelectionError
from .segmenter import DEFAULT_TAU


def parse_block(text):
    """
    Parse a block size ``"40"`` or ``"40x32"`` (height x width).

    Raises:
        ConfigError: for malformed or non-positive sizes
    """
    parts = str(text).lower().replace(' ', '').split('x')
    try:
        sizes = [int(part) for part in parts]
    except ValueError:
        raise ConfigError(f"cannot parse block size {text!r}")
    if len(sizes) == 1:
        sizes = sizes * 2
    if len(sizes) != 2 or min(sizes) < 1:
        raise ConfigError(f"block size must be 'N' or 'HxW' with positive sizes, got {text!r}")
    return tuple(sizes)


def parse_int_list(text, name):
    """Parse ``"32,64,128"`` into positive integers."""
    try:
        values = [int(part) for part in str(text).split(',') if part.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse {name} {text!r}")
    if not values or min(values) < 1:
        raise ConfigError(f"{name} must be positive integers, got {text!r}")
    return values


def parse_region(text):
    """Parse ``"row,col,height,width"``."""
    try:
        values = [int(part) for part in str(text).split(',')]
    except ValueError:
        raise ConfigError(f"cannot parse region {text!r}")
    if len(values) != 4 or values[0] < 0 or values[1] < 0 or values[2] < 1 or values[3] < 1:
        raise ConfigError(f"region must be 'row,col,height,width', got {text!r}")
    return tuple(values)


@dataclass
class RunConfig:
    """
    Settings of one command invocation.

    String fields hold the raw command-line text; ``validate`` parses them
    into the ``*_size``/``*_obj``/``*_list`` attributes.
    """
    input_dir: str = None
    pattern: str = '*'
    labels: str = None
    samples: str = None
    models_dir: str = None
    out_dir: str = None
    block: str = '40'
    selection: str = 'weakest:10'
    selections: str = 'strongest:1,strongest:7,all,weakest:7,weakest:1'
    tau: float = DEFAULT_TAU
    seed: int = 0
    train_frames: int = None
    windows: str = None
    grid_n: int = 5
    pairs: list = field(default_factory=list)
    trials: int = 10_000
    bound_dim: int = 5
    seeds: int = 100
    region: str = None

    block_size: tuple = field(default=None, init=False)
    selection_obj: Selection = field(default=None, init=False)
    selection_list: list = field(default=None, init=False)
    window_list: list = field(default=None, init=False)
    region_box: tuple = field(default=None, init=False)

    def validate(self):
        """
        Parse and check every field.

        Returns:
            self

        Raises:
            ConfigError: on the first invalid field
        """
        self.block_size = parse_block(self.block)
        try:
            self.selection_obj = Selection.parse(self.selection)
            self.selection_list = parse_selections(self.selections)
        except SelectionError as error:
            raise ConfigError(str(error))
        if self.tau is None or self.tau < 0:
            raise ConfigError(f"threshold must be non-negative, got {self.tau}")
        if self.seed is None or int(self.seed) < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed}")
        if self.train_frames is not None and self.train_frames < 2:
            raise ConfigError(f"--train-frames must be at least 2, got {self.train_frames}")
        if self.grid_n < 2:
            raise ConfigError(f"grid size must be at least 2, got {self.grid_n}")
        if self.trials < 2:
            raise ConfigError(f"trials must be at least 2, got {self.trials}")
        if self.bound_dim is None or self.bound_dim < 2:
            raise ConfigError(f"bound check matrix size must be at least 2, got {self.bound_dim}")
        if self.seeds is None or self.seeds < 2:
            raise ConfigError(f"seed count must be at least 2, got {self.seeds}")
        for pair in self.pairs:
            if len(pair) != 2 or pair[0] == pair[1] or min(pair) < 1:
                raise ConfigError(f"component pair must be two distinct positive positions, got {pair}")
        self.window_list = parse_int_list(self.windows, 'window sizes') if self.windows else None
        self.region_box = parse_region(self.region) if self.region else None
        if self.input_dir is not None and not os.path.isdir(self.input_dir):
            raise ConfigError(f"input directory {self.input_dir} does not exist")
        for name in ('labels', 'samples'):
            path = getattr(self, name)
            if path is not None and not os.path.isfile(path):
                raise ConfigError(f"{name} file {path} does not exist")
        if self.models_dir is not None and self.out_dir is not None \
                and os.path.abspath(self.models_dir) == os.path.abspath(self.out_dir):
            raise ConfigError("models and output directories must differ")
        return self
