"""
Stopwatch module for stage timing.

Measures wall-clock time of named pipeline stages (training, segmentation,
Monte-Carlo runs). Stopping a stopwatch samples the elapsed time into
``RunStats`` so repeated stages accumulate statistics.

Example:
    >>> from wevbg.stopwatch import Stopwatch
    >>> Stopwatch.start('train')
    >>> # ... do work ...
    >>> elapsed = Stopwatch.stop('train')
"""

import time

from .runstats import RunStats


class SingleStopwatch:
    """
    A single stopwatch for one named stage.
    """
    def __init__(self, name):
        """
        Initialize a new stopwatch.

        Args:
            name: The name/identifier for this stopwatch
        """
        self.name = name
        self.start_time = 0.0
        self.stop_time = 0.0
        self.running = False

    def start(self):
        """Start the stopwatch."""
        self.reset()
        self.start_time = self.now()
        self.running = True

    def stop(self):
        """
        Stop the stopwatch and record the elapsed time in RunStats.

        Returns:
            The elapsed time in seconds
        """
        elapsed_time = self.time()
        self.stop_time = elapsed_time
        self.running = False
        RunStats.sample('time.' + self.name, elapsed_time)
        return elapsed_time

    def reset(self):
        """Reset the stopwatch to initial state."""
        self.start_time = 0.0
        self.stop_time = 0.0
        self.running = False

    def now(self):
        """Get the current monotonic wall-clock time."""
        return time.perf_counter()

    def time(self):
        """
        Get the elapsed time.

        Returns:
            Elapsed seconds (live if running, final if stopped)
        """
        if self.running:
            return self.now() - self.start_time
        return self.stop_time


class Stopwatch:
    """
    Static registry of named stopwatches.
    """
    items = {}

    @staticmethod
    def start(name):
        """
        Start a stopwatch by name, creating it on first use.

        Args:
            name: The name of the stopwatch to start
        """
        if name not in Stopwatch.items:
            Stopwatch.items[name] = SingleStopwatch(name)
        Stopwatch.items[name].start()

    @staticmethod
    def stop(name):
        """
        Stop a stopwatch by name and return elapsed time.

        Returns:
            The elapsed time in seconds, or None if the stopwatch doesn't exist
        """
        if name in Stopwatch.items:
            return Stopwatch.items[name].stop()
        return None
