import pytest
from hypothesis import given, strategies as st

from detlab.rng import SplitMix64, sample, shuffle

# Reference outputs of the splitmix64 generator.
SEED_1234567 = [6457827717110365317, 3203168211198807973, 9817491932198370423,
                4593380528125082431, 16408922859458223821]
SEED_0 = [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F, 0xF88BB8A8724C81EC,
          0x1B39896A51A8749B, 0x53CB9F0C747EA2EA]


def test_reference_streams():
    r = SplitMix64(1234567)
    assert [r.next() for _ in SEED_1234567] == SEED_1234567
    r = SplitMix64(0)
    assert [r.next() for _ in SEED_0] == SEED_0


def test_shuffle_by_hand():
    items = list(range(7))
    for k, i in enumerate(range(6, 0, -1)):
        j = SEED_0[k] % (i + 1)
        items[i], items[j] = items[j], items[i]
    assert shuffle(range(7), SplitMix64(0)) == items
    assert sample(7, 3, SplitMix64(0)) == sorted(items[:3])


@given(st.integers(0, 2**64 - 1), st.integers(1, 60))
def test_shuffle_is_permutation(seed, n):
    assert sorted(shuffle(range(n), SplitMix64(seed))) == list(range(n))


@given(st.integers(0, 2**64 - 1), st.integers(-5, 5), st.integers(0, 10))
def test_between_bounds(seed, lo, span):
    v = SplitMix64(seed).between(lo, lo + span)
    assert lo <= v <= lo + span


def test_sample_errors():
    with pytest.raises(ValueError):
        sample(3, 4, SplitMix64(0))
    with pytest.raises(ValueError):
        SplitMix64(0).below(0)
