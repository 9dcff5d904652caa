"""
Running scalar statistics.

Tracks count, mean, variance, standard error, minimum and maximum of a
stream of scalar samples with Welford's recurrence. The Monte-Carlo checks
in ``wevbg.theory`` accumulate their estimates here, and ``Stopwatch``
samples stage timings into the ``RunStats`` registry.

Example:
    >>> from wevbg.runstats import RunningStat
    >>> stat = RunningStat('theta_bg')
    >>> for value in (0.1, 0.2, 0.3):
    ...     stat.sample(value)
    >>> round(stat.mean, 3)
    0.2
"""

import math


class RunningStat:
    """
    A single scalar statistic accumulated one sample at a time.

    Tracks the latest value, number of samples, running mean, the sum of
    squared deviations (for the variance), minimum and maximum.
    """
    def __init__(self, name, value=None):
        """
        Initialize a new statistic.

        Args:
            name: The name/identifier of this statistic
            value: Optional first sample
        """
        self.name = name
        self.reset()
        if value is not None:
            self.sample(value)

    def sample(self, value):
        """
        Add a new sample value to the statistic.

        Args:
            value: The new sample value to record
        """
        value = float(value)
        self.value = value
        self.total_samples += 1
        delta = value - self.mean
        self.mean += delta / self.total_samples
        self.m2 += delta * (value - self.mean)

        if self.total_samples == 1:
            self.min = value
            self.max = value
        else:
            self.min = min(self.min, value)
            self.max = max(self.max, value)

    def extend(self, values):
        """Sample every value of an iterable, in order."""
        for value in values:
            self.sample(value)
        return self

    @property
    def variance(self):
        """Unbiased sample variance (0 for fewer than two samples)."""
        if self.total_samples < 2:
            return 0.0
        return self.m2 / (self.total_samples - 1)

    @property
    def std(self):
        """Sample standard deviation."""
        return math.sqrt(self.variance)

    @property
    def std_error(self):
        """Standard error of the mean."""
        if self.total_samples < 2:
            return 0.0
        return self.std / math.sqrt(self.total_samples)

    def confidence_interval(self, z=2.576):
        """
        Normal-approximation confidence interval of the mean.

        Args:
            z: Two-sided critical value (default 2.576 for 99%)

        Returns:
            (low, high) tuple
        """
        half = z * self.std_error
        return self.mean - half, self.mean + half

    def reset(self):
        """Reset all statistic values to zero."""
        self.value = 0.0
        self.total_samples = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.min = 0.0
        self.max = 0.0

    def __str__(self):
        precision = 6
        result = f"Stat({self.name})"
        result += f" n={self.total_samples}"
        result += f" mean={round(self.mean, precision)}"
        result += f" se={round(self.std_error, precision)}"
        result += f" min={round(self.min, precision)}"
        result += f" max={round(self.max, precision)}"
        return result

    def __repr__(self):
        return self.__str__()


class RunStats:
    """
    Static registry of named RunningStat objects.

    Used for process-wide bookkeeping such as stage timings; numerical
    results never go through this shared registry.
    """
    items = {}

    @staticmethod
    def sample(name, value):
        """
        Sample a value for a statistic by name, creating it on first use.

        Returns:
            The RunningStat object for this statistic
        """
        if name not in RunStats.items:
            RunStats.items[name] = RunningStat(name, value)
        else:
            RunStats.items[name].sample(value)
        return RunStats.items[name]

    @staticmethod
    def get(name=None):
        """
        Get a statistic by name, or all statistics.

        Returns:
            The RunningStat if name is provided, else a dict of all of them
        """
        if name is not None:
            return RunStats.items[name]
        return RunStats.items

    @staticmethod
    def clear():
        """Forget every statistic."""
        RunStats.items.clear()

    @staticmethod
    def summary():
        """Return one line per statistic, sorted by name."""
        return '\n'.join(str(RunStats.items[name]) for name in sorted(RunStats.items))
