"""Seeded integer sample points."""
import logging

import numpy as np

from .errors import DegenerateSample

logger = logging.getLogger(__name__)

LOW = 1
HIGH = 10000
MAX_REJECTIONS = 1000


class SampleStream:
    """Points with coordinates uniform on [LOW, HIGH] from a PCG64 generator.

    All points are drawn by the owning thread, so the seed alone fixes the
    sequence regardless of how many workers consume it.
    """

    def __init__(self, seed=0):
        if not 0 <= seed < 2 ** 64:
            raise ValueError(f"seed {seed} is not a 64-bit unsigned integer")
        self.seed = seed
        self._rng = np.random.Generator(np.random.PCG64(seed))
        self.drawn = 0

    def point(self, size):
        values = self._rng.integers(LOW, HIGH + 1, size=size)
        self.drawn += 1
        return tuple(int(v) for v in values)

    def points(self, count, size, accept=None):
        out = []
        rejected = 0
        while len(out) < count:
            candidate = self.point(size)
            if accept is None or accept(candidate):
                out.append(candidate)
                continue
            rejected += 1
            if rejected > MAX_REJECTIONS:
                raise DegenerateSample(f"{rejected} consecutive sample points rejected")
            logger.debug("rejected sample point %s", candidate)
        return out
