"""Small statistics helpers used by the reporting jobs."""


class RollingMean:
    """Running mean over a fixed-size window of observations."""

    def __init__(self, size):
        """Create an empty window holding at most size values."""
        self.size = size
        self.values = []

    def add(self, value):
        """Push one observation, evicting the oldest when full."""
        # drop the oldest entry first
        if len(self.values) >= self.size:
            self.values.pop(0)
        self.values.append(value)

    def mean(self):
        """Return the current mean, or zero for an empty window."""
        if not self.values:
            return 0.0
        return sum(self.values) / len(self.values)


def scaled(values, factor):
    """Scale every value by a constant factor."""

    def one(v):
        """Scale a single value."""
        return v * factor

    return [one(v) for v in values]
