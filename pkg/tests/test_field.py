"""Tests for Shamir sharing over the prime field"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lang.errors import ConfigError, MalformedShare, NotEnoughShares
from mpc.field import (
    FieldParams, Share, consistent, field_to_float, float_to_field, from_signed, lagrange_at_zero,
    modinv, reconstruct, share, to_signed,
)
from mpc.rng import FixedRng, ProtocolRng

MERSENNE = 2 ** 61 - 1


def test_hand_checked_sharing(small_params):
    """Test: f(x) = 5 + 3x gives shares 8, 11, 14."""
    shares = share(5, FixedRng([3]), small_params)
    assert shares == [Share(1, 8), Share(2, 11), Share(3, 14)]
    assert reconstruct(shares, small_params) == 5


def test_lagrange_coefficients():
    assert lagrange_at_zero([1, 2], 101) == [2, 100]
    assert modinv(3, 101) * 3 % 101 == 1
    with pytest.raises(ZeroDivisionError):
        modinv(0, 101)


@pytest.mark.parametrize("prime,parties,threshold", [
    (2, 3, 1),
    (101, 0, 0),
    (101, 3, 2),
    (101, 4, 2),
    (101, 3, -1),
])
def test_invalid_parameters(prime, parties, threshold):
    with pytest.raises(ConfigError):
        FieldParams(prime, parties, threshold)


@given(secret=st.integers(min_value=0, max_value=MERSENNE - 1),
       seed=st.integers(min_value=0, max_value=2 ** 32),
       shape=st.sampled_from([(1, 0), (3, 1), (5, 2), (7, 3), (4, 1)]))
def test_any_t_plus_one_shares_reconstruct(secret, seed, shape):
    """Test: every sharing reconstructs and is consistent."""
    params = FieldParams(MERSENNE, *shape)
    shares = share(secret, ProtocolRng(seed), params)
    assert len(shares) == params.parties
    assert reconstruct(shares, params) == secret
    assert reconstruct(shares[-(params.threshold + 1):], params) == secret
    assert consistent([s.value for s in shares], params)


def test_reconstruct_errors(small_params):
    shares = share(7, ProtocolRng(1), small_params)
    with pytest.raises(NotEnoughShares):
        reconstruct(shares[:1], small_params)
    with pytest.raises(NotEnoughShares):
        reconstruct([shares[0], shares[0]], small_params)
    with pytest.raises(MalformedShare):
        reconstruct([Share(4, 1), shares[0]], small_params)
    with pytest.raises(MalformedShare):
        reconstruct([Share(1, 101), shares[1]], small_params)


def test_corrupted_share_is_inconsistent(small_params):
    """Test: the corrupt_party hook shifts one share and breaks consistency."""
    rng = ProtocolRng(3, corrupt_party=2)
    values = [s.value for s in share(9, rng, small_params)]
    values[1] = (values[1] + rng.perturbation(2)) % small_params.prime
    assert not consistent(values, small_params)
    assert rng.perturbation(1) == 0


def test_rng_is_replayable():
    a, b = ProtocolRng(11), ProtocolRng(11)
    assert a.coefficients(5, MERSENNE) == b.coefficients(5, MERSENNE)
    assert a.draws == 5


def test_signed_encoding():
    assert from_signed(-1, 101) == 100
    assert to_signed(100, 101) == -1
    assert to_signed(50, 101) == 50
    assert to_signed(51, 101) == -50


def test_float_bit_patterns():
    assert float_to_field(1.0) == 0x3F800000
    assert field_to_float(0x3F800000) == 1.0
    assert field_to_float(float_to_field(-2.5)) == -2.5
