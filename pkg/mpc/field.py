"""Shamir Secret Sharing over a Prime Field"""

from dataclasses import dataclass
from typing import List, NamedTuple, Sequence

import numpy as np

from lang.errors import ConfigError, MalformedShare, NotEnoughShares


@dataclass(frozen=True)
class FieldParams:
    prime: int
    parties: int
    threshold: int

    def __post_init__(self):
        if self.prime < 3:
            raise ConfigError(f"prime {self.prime} is too small")
        if self.parties < 1:
            raise ConfigError("at least one party is required")
        if self.threshold < 0 or 2 * self.threshold >= self.parties:
            raise ConfigError(f"threshold {self.threshold} must satisfy t < q/2 for q={self.parties}")

    @classmethod
    def from_config(cls, config):
        return cls(config.prime, config.parties, config.threshold)


class Share(NamedTuple):
    party: int  # 1..q
    value: int


def modinv(a: int, p: int) -> int:
    """Inverse via Fermat's little theorem (p prime)."""
    if a % p == 0:
        raise ZeroDivisionError("no inverse of 0")
    return pow(a, p - 2, p)


def evaluate_poly(coeffs: Sequence[int], x: int, p: int) -> int:
    """Horner evaluation of sum(coeffs[i] * x^i)."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def lagrange_at_zero(xs: Sequence[int], p: int) -> List[int]:
    """Coefficients λ_i with f(0) = Σ λ_i f(x_i)."""
    lambdas = []
    for i, xi in enumerate(xs):
        num, den = 1, 1
        for j, xj in enumerate(xs):
            if i != j:
                num = (num * (-xj)) % p
                den = (den * (xi - xj)) % p
        lambdas.append(num * modinv(den, p) % p)
    return lambdas


def share(x: int, rng, params: FieldParams) -> List[Share]:
    """
    Split x into q shares with a random degree-t polynomial

    Args:
        x: field element
        rng: object with coefficients(count, prime)
        params: FieldParams

    Returns:
        q Shares f(1), ..., f(q) with f(0) = x
    """
    p = params.prime
    coeffs = [x % p] + [c % p for c in rng.coefficients(params.threshold, p)]
    return [Share(k, evaluate_poly(coeffs, k, p)) for k in range(1, params.parties + 1)]


def reconstruct(shares: Sequence[Share], params: FieldParams) -> int:
    """
    Interpolate the secret from at least t+1 shares of distinct parties

    Args:
        shares: Shares
        params: FieldParams

    Returns:
        field element f(0)
    """
    points = {}
    for s in shares:
        if not 1 <= s.party <= params.parties:
            raise MalformedShare(f"party index {s.party} outside 1..{params.parties}")
        if not 0 <= s.value < params.prime:
            raise MalformedShare(f"share value {s.value} outside the field")
        points[s.party] = s.value
    if len(points) < params.threshold + 1:
        raise NotEnoughShares(f"{len(points)} shares, need {params.threshold + 1}")
    xs = sorted(points)[: params.threshold + 1]
    lambdas = lagrange_at_zero(xs, params.prime)
    return sum(l * points[x] for l, x in zip(lambdas, xs)) % params.prime


def consistent(values: Sequence[int], params: FieldParams) -> bool:
    """Whether a full share vector lies on one polynomial of degree <= t."""
    base = reconstruct([Share(k + 1, v) for k, v in enumerate(values)], params)
    xs = list(range(1, params.threshold + 2))
    # Check every remaining party against the interpolation through the first t+1
    for k in range(params.threshold + 2, params.parties + 1):
        subset = xs[1:] + [k]
        alt = reconstruct([Share(x, values[x - 1]) for x in subset], params)
        if alt != base:
            return False
    return True


# Plaintext encodings

def from_signed(v: int, p: int) -> int:
    return v % p


def to_signed(x: int, p: int) -> int:
    """Field element as a signed integer in (-p/2, p/2]."""
    x %= p
    return x - p if x > p // 2 else x


def float_to_field(v: float) -> int:
    """IEEE-754 single-precision bit pattern."""
    return int(np.array([v], dtype="<f4").view("<u4")[0])


def field_to_float(x: int) -> float:
    return float(np.array([x & 0xFFFFFFFF], dtype="<u4").view("<f4")[0])
