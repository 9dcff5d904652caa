"""
Tests for frames module
"""

import os
import tempfile
import unittest

import numpy as np
import numpy.testing as npt

from wevbg import (
    DimensionError, FormatError, FrameSequence, LabelError, NotFound, load_frames, load_labels, read_pgm,
    save_frames, save_labels, write_pgm,
)
from wevbg.frames import HAS_PYGAME, decode_pgm, read_png, read_samples, write_samples


def write_bytes(path, data):
    with open(path, 'wb') as f:
        f.write(data)


class TestPgm(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def test_decode_p2_with_comments(self):
        values, maxval = decode_pgm(b'P2\n# a comment\n3 2\n# another\n10\n0 5 10\n10 5 0\n')
        self.assertEqual(maxval, 10)
        npt.assert_array_equal(values, [[0, 5, 10], [10, 5, 0]])

    def test_decode_p5_16_bit(self):
        raster = np.array([[0, 1000], [65535, 2]], dtype='>u2').tobytes()
        values, maxval = decode_pgm(b'P5 2 2 65535\n' + raster)
        self.assertEqual(maxval, 65535)
        npt.assert_array_equal(values, [[0, 1000], [65535, 2]])

    def test_decode_p5_comment_after_maxval(self):
        raster = bytes([35, 10, 32, 200])
        values, maxval = decode_pgm(b'P5\n2 2\n255# written by a scanner\n' + raster)
        self.assertEqual(maxval, 255)
        npt.assert_array_equal(values, [[35, 10], [32, 200]])

    def test_normalization(self):
        path = os.path.join(self.dir, 'a.pgm')
        write_bytes(path, b'P5\n2 1\n200\n' + bytes([0, 200]))
        npt.assert_allclose(read_pgm(path), [[0.0, 1.0]])

    def test_write_read_is_byte_identical(self):
        raster = bytes(range(0, 240, 10))
        original = b'P5\n6 4\n255\n' + raster
        source = os.path.join(self.dir, 'a.pgm')
        copy = os.path.join(self.dir, 'b.pgm')
        write_bytes(source, original)
        write_pgm(copy, read_pgm(source))
        with open(copy, 'rb') as f:
            self.assertEqual(f.read(), original)

    def test_bad_files(self):
        for data in (b'P6\n1 1\n255\n\x00', b'P5\n2 2\n255\n\x00', b'P2\n2 1\n10\n3 11\n', b'P5\n1 1\n0\n\x00'):
            with self.assertRaises(FormatError):
                decode_pgm(data)


class TestLoadFrames(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def test_sorted_by_name(self):
        for name, value in (('frame_0002.pgm', 0.0), ('frame_0000.pgm', 1.0), ('frame_0001.pgm', 0.4)):
            write_pgm(os.path.join(self.dir, name), np.full((3, 4), value))
        seq = load_frames(self.dir, 'frame_*.pgm')
        self.assertEqual(len(seq), 3)
        self.assertEqual(seq.shape, (3, 4))
        npt.assert_allclose(seq.frames[:, 0, 0], [1.0, 102 / 255, 0.0])
        self.assertTrue(seq.source[0].endswith('frame_0000.pgm'))

    def test_save_frames_round_trip(self):
        seq = FrameSequence(np.random.default_rng(0).integers(0, 256, (3, 5, 7)) / 255.0)
        save_frames(seq, self.dir)
        loaded = load_frames(self.dir)
        npt.assert_allclose(loaded.frames, seq.frames, atol=1e-12)

    def test_nothing_matches(self):
        with self.assertRaises(NotFound):
            load_frames(self.dir, '*.pgm')

    def test_mixed_sizes(self):
        write_pgm(os.path.join(self.dir, 'a.pgm'), np.zeros((3, 4)))
        write_pgm(os.path.join(self.dir, 'b.pgm'), np.zeros((4, 3)))
        with self.assertRaises(DimensionError):
            load_frames(self.dir)

    def test_unsupported_file(self):
        write_bytes(os.path.join(self.dir, 'notes.txt'), b'hello')
        with self.assertRaises(FormatError):
            load_frames(self.dir)

    @unittest.skipUnless(HAS_PYGAME, 'pygame not installed')
    def test_png_gray(self):
        import pygame
        surface = pygame.Surface((4, 3))
        surface.fill((255, 255, 255))
        path = os.path.join(self.dir, 'white.png')
        pygame.image.save(surface, path)
        image = read_png(path)
        self.assertEqual(image.shape, (3, 4))
        npt.assert_allclose(image, np.ones((3, 4)))


class TestSequence(unittest.TestCase):
    def test_label_count_mismatch(self):
        with self.assertRaises(LabelError):
            FrameSequence(np.zeros((3, 2, 2)), ('bg', 'fg'))

    def test_unknown_label(self):
        with self.assertRaises(LabelError):
            FrameSequence(np.zeros((2, 2, 2)), ('bg', 'car'))

    def test_indices(self):
        seq = FrameSequence(np.zeros((4, 2, 2)), ('bg', 'fg', 'bg', 'fg'))
        self.assertEqual(seq.background_indices, [0, 2])
        self.assertEqual(seq.foreground_indices, [1, 3])
        self.assertEqual(seq.subset([3, 0]).labels, ('fg', 'bg'))

    def test_unlabeled_indices(self):
        with self.assertRaises(LabelError):
            FrameSequence(np.zeros((2, 2, 2))).background_indices

    def test_crop(self):
        frames = np.arange(2 * 4 * 5, dtype=float).reshape(2, 4, 5)
        crop = FrameSequence(frames).crop(1, 2, 2, 3)
        npt.assert_array_equal(crop.frames, frames[:, 1:3, 2:5])
        with self.assertRaises(DimensionError):
            FrameSequence(frames).crop(3, 0, 2, 2)


class TestLabels(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, 'labels.csv')

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, text):
        with open(self.path, 'w') as f:
            f.write(text)

    def test_round_trip(self):
        labels = ('bg',) * 92 + ('fg',) * 29
        save_labels(self.path, labels)
        loaded = load_labels(self.path, 121)
        self.assertEqual(loaded.count('bg'), 92)
        self.assertEqual(loaded.count('fg'), 29)

    def test_long_names(self):
        self.write('frame,label\n1,foreground\n0,background\n')
        self.assertEqual(load_labels(self.path, 2), ('bg', 'fg'))

    def test_duplicate(self):
        self.write('frame,label\n0,bg\n0,fg\n')
        with self.assertRaises(LabelError):
            load_labels(self.path, 1)

    def test_missing(self):
        self.write('frame,label\n0,bg\n')
        with self.assertRaises(LabelError):
            load_labels(self.path, 2)

    def test_unknown(self):
        self.write('frame,label\n0,car\n')
        with self.assertRaises(LabelError):
            load_labels(self.path, 1)

    def test_out_of_range(self):
        self.write('frame,label\n0,bg\n5,fg\n')
        with self.assertRaises(LabelError):
            load_labels(self.path, 2)

    def test_file_missing(self):
        with self.assertRaises(NotFound):
            load_labels(self.path, 1)


class TestSamples(unittest.TestCase):
    def test_exact_round_trip(self):
        rng = np.random.default_rng(5)
        seq = FrameSequence.from_vectors(rng.standard_normal((7, 3)), ('bg', 'fg', 'bg', 'bg', 'fg', 'bg', 'bg'))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'samples.csv')
            write_samples(path, seq)
            loaded = read_samples(path)
        npt.assert_array_equal(loaded.vectors(), seq.vectors())
        self.assertEqual(loaded.labels, seq.labels)


if __name__ == '__main__':
    unittest.main()
