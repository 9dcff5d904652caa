"""
Tests for segmenter module
"""

import os
import tempfile
import unittest

import numpy as np
import numpy.testing as npt

from wevbg import (
    BlockGrid, Events, FrameSequence, InsufficientData, InvalidBlockSize, InvalidInput, SceneParams, Selection,
    TwoClassParams, WorkerPool, estimate_background, estimate_frame, load_models, save_models, segment_frame,
    segment_sequence, synth_scene, synth_two_class, tile_blocks, train_block_models,
)
from wevbg.events import BLOCK_TRAINED, FRAME_SEGMENTED


class TestTiling(unittest.TestCase):
    def test_exact_tiling(self):
        grid = tile_blocks((120, 160), (40, 40))
        self.assertEqual(len(grid), 12)
        self.assertEqual(grid.origins[0], (0, 0))
        self.assertEqual(grid.origins[-1], (80, 120))

    def test_edge_blocks_clamped(self):
        grid = tile_blocks((100, 50), (40, 40))
        self.assertEqual(grid.origins, ((0, 0), (0, 10), (40, 0), (40, 10), (60, 0), (60, 10)))

    def test_single_block(self):
        self.assertEqual(tile_blocks((40, 40), (40, 40)).origins, ((0, 0),))

    def test_invalid_sizes(self):
        for block in ((0, 10), (41, 40), (10, 41)):
            with self.assertRaises(InvalidBlockSize):
                tile_blocks((40, 40), block)


class TestOverlappingBlocks(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        rng = np.random.default_rng(12)
        cls.seq = FrameSequence(rng.random((8, 100, 100)))
        cls.grid = tile_blocks(cls.seq.shape, (40, 40))
        cls.models = train_block_models(cls.seq, cls.grid, Selection.strongest(1))
        cls.frame = rng.random((100, 100))
        cls.estimate = estimate_frame(cls.models, cls.grid, cls.frame)

    def block_estimate(self, origin):
        index = self.grid.origins.index(origin)
        window = self.grid.window(origin)
        return estimate_background(self.models[index], self.frame[window]).reshape(40, 40)

    def test_grid_overlaps(self):
        self.assertEqual(len(self.grid), 9)
        self.assertEqual(self.grid.origins[-1], (60, 60))

    def test_overlap_takes_last_block(self):
        npt.assert_allclose(self.estimate[60:80, 60:80], self.block_estimate((60, 60))[:20, :20], atol=1e-12)
        npt.assert_allclose(self.estimate[40:60, 60:80], self.block_estimate((40, 60))[:20, :20], atol=1e-12)
        npt.assert_allclose(self.estimate[60:80, 0:40], self.block_estimate((60, 0))[:20, :], atol=1e-12)
        npt.assert_allclose(self.estimate[0:40, 40:60], self.block_estimate((0, 40))[:, :20], atol=1e-12)

    def test_overlapped_blocks_disagree(self):
        earlier = self.block_estimate((40, 40))[20:40, 20:40]
        later = self.block_estimate((60, 60))[:20, :20]
        self.assertFalse(np.allclose(earlier, later))

    def test_reversed_order_keeps_first_block(self):
        order = list(range(len(self.grid)))[::-1]
        grid = BlockGrid(self.grid.frame_shape, self.grid.block_size, tuple(self.grid.origins[i] for i in order))
        reversed_estimate = estimate_frame([self.models[i] for i in order], grid, self.frame)
        npt.assert_allclose(reversed_estimate[60:80, 60:80], self.block_estimate((40, 40))[20:40, 20:40], atol=1e-12)


class TestTraining(unittest.TestCase):
    def test_identical_frames(self):
        frame = np.random.default_rng(0).random((8, 8))
        seq = FrameSequence(np.repeat(frame[None], 5, axis=0))
        grid = tile_blocks(seq.shape, (4, 4))
        models = train_block_models(seq, grid, Selection.all())
        for model in models:
            npt.assert_allclose(model.eigenvalues, np.zeros(model.size), atol=1e-20)
        npt.assert_allclose(estimate_frame(models, grid, frame), frame, atol=1e-12)

    def test_needs_two_frames(self):
        seq = FrameSequence(np.zeros((1, 4, 4)))
        with self.assertRaises(InsufficientData):
            train_block_models(seq, tile_blocks((4, 4), (4, 4)), Selection.all())

    def test_strongest_follows_class_separation(self):
        seq = synth_two_class(TwoClassParams(dim=16, seed=3))
        seq = FrameSequence(seq.vectors().reshape(len(seq), 4, 4), seq.labels)
        grid = tile_blocks((4, 4), (4, 4))
        model = train_block_models(seq, grid, Selection.strongest(1))[0]
        direction = np.ones(16) / 4.0
        self.assertGreater(abs(model.basis[:, 0] @ direction), 0.9)

    def test_block_trained_events(self):
        seq = FrameSequence(np.random.default_rng(1).random((6, 8, 8)))
        grid = tile_blocks(seq.shape, (4, 4))
        seen = []
        events = Events()
        events.on(BLOCK_TRAINED, lambda event: seen.append(event.payload['index']))
        train_block_models(seq, grid, Selection.weakest(2), events=events)
        self.assertEqual(sorted(seen), [0, 1, 2, 3])


class TestSegmentation(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.scene = synth_scene(SceneParams(seed=7))
        cls.seq = cls.scene.sequence
        cls.grid = tile_blocks(cls.seq.shape, (40, 40))
        cls.models = train_block_models(cls.seq, cls.grid, Selection.weakest(10))

    def test_mean_frame_gives_empty_mask(self):
        frame = np.empty(self.seq.shape)
        for model, origin in zip(self.models, self.grid.origins):
            frame[self.grid.window(origin)] = model.mean.reshape(model.block_shape)
        result = segment_frame(self.models, self.grid, frame, tau=0.0)
        self.assertFalse(result.mask.any())

    def test_threshold_one_gives_empty_mask(self):
        result = segment_frame(self.models, self.grid, self.seq.frames[60], tau=1.0)
        self.assertFalse(result.mask.any())

    def test_negative_threshold(self):
        with self.assertRaises(InvalidInput):
            segment_frame(self.models, self.grid, self.seq.frames[0], tau=-0.1)

    def test_result_ranges(self):
        result = segment_frame(self.models, self.grid, self.seq.frames[60])
        self.assertEqual(result.mask.dtype, bool)
        self.assertGreaterEqual(result.background.min(), 0.0)
        self.assertLessEqual(result.background.max(), 1.0)
        npt.assert_allclose(result.residual, np.abs(self.seq.frames[60] - result.background))

    def test_mask_shrinks_with_threshold(self):
        frame = self.seq.frames[55]
        counts = [segment_frame(self.models, self.grid, frame, tau).mask.sum() for tau in (0.0, 0.05, 0.1, 0.3, 1.0)]
        self.assertTrue(all(b <= a for a, b in zip(counts, counts[1:])))

    def test_object_is_found(self):
        for index in (50, 60, 70):
            mask = segment_frame(self.models, self.grid, self.seq.frames[index], tau=0.1).mask
            truth = self.scene.masks[index]
            iou = np.logical_and(mask, truth).sum() / np.logical_or(mask, truth).sum()
            self.assertGreater(iou, 0.8)

    def test_block_order_does_not_matter(self):
        order = list(range(len(self.grid)))[::-1]
        grid = BlockGrid(self.grid.frame_shape, self.grid.block_size, tuple(self.grid.origins[i] for i in order))
        models = [self.models[i] for i in order]
        frame = self.seq.frames[60]
        npt.assert_array_equal(estimate_frame(models, grid, frame), estimate_frame(self.models, self.grid, frame))

    def test_parallel_matches_sequential(self):
        seq = self.seq.subset(range(55, 61))
        sequential = segment_sequence(self.models, self.grid, seq)
        seen = []
        events = Events()
        events.on(FRAME_SEGMENTED, lambda event: seen.append(event.payload['index']))
        with WorkerPool(size=2) as pool:
            parallel = segment_sequence(self.models, self.grid, seq, pool=pool, events=events)
        self.assertEqual(sorted(seen), list(range(6)))
        for a, b in zip(sequential, parallel):
            npt.assert_array_equal(a.mask, b.mask)
            npt.assert_array_equal(a.background, b.background)

    def test_save_and_load_models(self):
        with tempfile.TemporaryDirectory() as tmp:
            save_models(self.models, self.grid, tmp)
            self.assertTrue(os.path.isfile(os.path.join(tmp, 'grid.json')))
            models, grid = load_models(tmp)
        self.assertEqual(grid, self.grid)
        frame = self.seq.frames[60]
        npt.assert_array_equal(estimate_frame(models, grid, frame), estimate_frame(self.models, self.grid, frame))


if __name__ == '__main__':
    unittest.main()
