"""
Tests for scene module
"""

import unittest

import numpy as np
import numpy.testing as npt

from wevbg import InvalidInput, SceneParams, synth_scene
from wevbg.scene import object_track


class TestScene(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.params = SceneParams(seed=7)
        cls.scene = synth_scene(cls.params)

    def test_default_layout(self):
        seq = self.scene.sequence
        self.assertEqual(len(seq), 121)
        self.assertEqual(seq.shape, (120, 160))
        self.assertEqual(len(seq.background_indices), 92)
        self.assertEqual(len(seq.foreground_indices), 29)

    def test_foreground_run_is_contiguous(self):
        fg = self.scene.sequence.foreground_indices
        self.assertEqual(fg, list(range(fg[0], fg[0] + 29)))
        self.assertEqual(self.scene.object_frames, fg)

    def test_object_area(self):
        index = self.scene.object_frames[0]
        area = self.scene.masks[index].sum() / (120 * 160)
        self.assertAlmostEqual(area, 0.10, delta=0.01)

    def test_object_moves_left_to_right(self):
        start, track = object_track(self.params)
        cols = [col for _, col in track]
        self.assertEqual(cols[0], 0)
        self.assertEqual(cols[-1], 160 - self.params.object_side)
        self.assertTrue(all(b > a for a, b in zip(cols, cols[1:])))

    def test_values_and_background(self):
        frames = self.scene.sequence.frames
        self.assertGreaterEqual(frames.min(), 0.0)
        self.assertLessEqual(frames.max(), 1.0)
        self.assertGreaterEqual(self.scene.background.min(), 0.2)
        self.assertLessEqual(self.scene.background.max(), 0.5)
        background_frame = frames[self.scene.sequence.background_indices[0]]
        self.assertLess(np.abs(background_frame - self.scene.background).mean(), 0.02)

    def test_deterministic(self):
        again = synth_scene(SceneParams(seed=7))
        npt.assert_array_equal(again.sequence.frames, self.scene.sequence.frames)
        other = synth_scene(SceneParams(seed=8))
        self.assertFalse(np.array_equal(other.sequence.frames, self.scene.sequence.frames))

    def test_area_fraction_changes_object_only(self):
        small = synth_scene(self.params.with_area(0.01))
        self.assertEqual(small.sequence.labels, self.scene.sequence.labels)
        self.assertLess(small.masks.sum(), self.scene.masks.sum())

    def test_invalid_params(self):
        invalid = (SceneParams(n_frames=1), SceneParams(n_fg=200), SceneParams(area_fraction=0.0), SceneParams(seed=-1))
        for params in invalid:
            with self.assertRaises(InvalidInput):
                synth_scene(params)


if __name__ == '__main__':
    unittest.main()
