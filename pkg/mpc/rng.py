"""Seeded Protocol Randomness"""

import numpy as np


class ProtocolRng:
    """
    Single seeded stream from which the simulator draws all parties' protocol
    randomness, so every run is replayable

    Args:
        seed: stream seed
        corrupt_party: test hook; this party's share of every fresh sharing is
            shifted by one, breaking consistency of the sharing
    """

    def __init__(self, seed, corrupt_party=None):
        self.seed = seed
        self.corrupt_party = corrupt_party
        self.generator = np.random.default_rng(seed)
        self.draws = 0

    def field_element(self, prime):
        self.draws += 1
        return int(self.generator.integers(0, prime, dtype=np.uint64))

    def coefficients(self, count, prime):
        """count uniform field elements (polynomial coefficients 1..t)."""
        return [self.field_element(prime) for _ in range(count)]

    def perturbation(self, party):
        return 1 if party == self.corrupt_party else 0


class FixedRng:
    """Deterministic coefficient source for hand-checked examples."""

    def __init__(self, coefficients):
        self.values = list(coefficients)
        self.corrupt_party = None
        self.draws = 0

    def field_element(self, prime):
        value = self.values[self.draws % len(self.values)] % prime
        self.draws += 1
        return value

    def coefficients(self, count, prime):
        return [self.field_element(prime) for _ in range(count)]

    def perturbation(self, party):
        return 0
