"""
Synthetic highway-like scenes.

A static textured background (intensities around 0.2 to 0.5) with per-frame
pixel noise; during a contiguous run of frames a bright textured square
crosses the frame from left to right, always fully inside it. The true
background and the per-frame object masks are returned with the frames, so
background and segmentation quality can be measured exactly.

Example:
    >>> from wevbg.scene import SceneParams, synth_scene
    >>> scene = synth_scene(SceneParams(seed=7))
    >>> len(scene.sequence), scene.sequence.shape
    (121, (120, 160))
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidInput
from .frames import BACKGROUND, FOREGROUND, FrameSequence


@dataclass(frozen=True)
class SceneParams:
    """
    Scene generator parameters.

    Attributes:
        height, width: Frame shape
        n_frames: Total number of frames
        n_fg: Number of frames showing the object
        area_fraction: Object area as a fraction of the frame area
        object_level: Mean object intensity
        object_noise: Standard deviation of the object texture
        noise: Standard deviation of the per-frame pixel noise
        seed: RNG seed
    """
    height: int = 120
    width: int = 160
    n_frames: int = 121
    n_fg: int = 29
    area_fraction: float = 0.10
    object_level: float = 0.85
    object_noise: float = 0.05
    noise: float = 0.01
    seed: int = 0

    def validate(self):
        if self.height < 1 or self.width < 1:
            raise InvalidInput(f"frame shape must be positive, got {self.height}x{self.width}")
        if self.n_frames < 2:
            raise InvalidInput(f"a scene needs at least 2 frames, got {self.n_frames}")
        if not 0 <= self.n_fg <= self.n_frames:
            raise InvalidInput(f"n_fg must be within 0..{self.n_frames}, got {self.n_fg}")
        if not 0.0 < self.area_fraction <= 1.0:
            raise InvalidInput(f"area fraction must be within (0, 1], got {self.area_fraction}")
        if self.noise < 0 or self.object_noise < 0:
            raise InvalidInput("noise levels must be non-negative")
        if self.seed < 0:
            raise InvalidInput(f"seed must be non-negative, got {self.seed}")
        return self

    @property
    def object_side(self):
        """Side of the square object in pixels."""
        side = int(round(np.sqrt(self.area_fraction * self.height * self.width)))
        return max(1, min(side, self.height, self.width))

    def with_area(self, area_fraction):
        return replace(self, area_fraction=area_fraction)


@dataclass(frozen=True, eq=False)
class SyntheticScene:
    """
    A generated scene.

    Attributes:
        sequence: Labeled FrameSequence
        background: H x W true background (noise free)
        masks: n x H x W bool, True where the object is
    """
    sequence: FrameSequence
    background: np.ndarray
    masks: np.ndarray

    @property
    def object_frames(self):
        """Indices of the frames containing the object."""
        return [i for i in range(len(self.sequence)) if self.masks[i].any()]


def textured_background(height, width, rng):
    """Static background: smooth stripes plus fixed texture, within [0.2, 0.5]."""
    rows = np.arange(height)[:, None] / height
    cols = np.arange(width)[None, :] / width
    base = 0.35 + 0.08 * np.sin(2 * np.pi * 3 * cols) * np.cos(2 * np.pi * 2 * rows)
    texture = 0.07 * rng.uniform(-1.0, 1.0, size=(height, width))
    return np.clip(base + texture, 0.2, 0.5)


def object_track(params):
    """
    Frames and positions of the object.

    Returns:
        (first foreground frame, (row, col) per foreground frame)
    """
    side = params.object_side
    start = (params.n_frames - params.n_fg) // 2
    cols = np.rint(np.linspace(0, params.width - side, params.n_fg)).astype(int)
    row = (params.height - side) // 2
    return start, [(row, int(col)) for col in cols]


def synth_scene(params=None):
    """
    Generate a scene.

    Args:
        params: SceneParams (defaults give 121 frames of 120x160 with a 10%
            object in 29 consecutive frames)

    Returns:
        SyntheticScene
    """
    params = (params or SceneParams()).validate()
    rng = np.random.Generator(np.random.PCG64(params.seed))
    h, w, n = params.height, params.width, params.n_frames

    background = textured_background(h, w, rng)
    frames = background + params.noise * rng.standard_normal((n, h, w))

    side = params.object_side
    texture = params.object_level + params.object_noise * rng.standard_normal((side, side))
    masks = np.zeros((n, h, w), dtype=bool)
    labels = [BACKGROUND] * n
    start, track = object_track(params)
    for offset, (row, col) in enumerate(track):
        index = start + offset
        patch = texture + params.noise * rng.standard_normal((side, side))
        frames[index, row:row + side, col:col + side] = patch
        masks[index, row:row + side, col:col + side] = True
        labels[index] = FOREGROUND

    sequence = FrameSequence(np.clip(frames, 0.0, 1.0), tuple(labels), (f"synthetic:{params.seed}",))
    return SyntheticScene(sequence, background, masks)
