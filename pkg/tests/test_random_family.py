import numpy as np
import pytest
from scipy import stats

from models.errors import DimensionMismatch, DomainError, InvalidProblem, SetValuedAt, UnsupportedComposite
from models.functions import Quadratic
from models.operators import AffineMonotone, NormalCone, Subdifferential
from models.random_family import RandomFamily, SampleStream
from models.sets import Ball, Box, FullSpace, Halfspace


def shifted_pair():
    """{x - 1, x + 1} with equal weights; the mean vanishes at 0."""
    return RandomFamily((AffineMonotone.identity(1, [1.0]), AffineMonotone.identity(1, [-1.0])), np.array([0.5, 0.5]))


def test_degenerate_distribution_always_picks_the_only_member():
    family = RandomFamily((AffineMonotone.rotation_2d(),), np.ones(1))
    stream = SampleStream(3)
    assert {family.sample(stream) for _ in range(1000)} == {0}
    assert stream.counter == 1000


@pytest.mark.slow
def test_fair_coin_frequency():
    family = shifted_pair()
    stream = SampleStream(11)
    draws = 1_000_000
    ones = sum(family.sample(stream) for _ in range(draws))
    assert abs(ones / draws - 0.5) <= 0.002


def test_sampling_law_passes_chi_square():
    weights = np.array([0.1, 0.2, 0.3, 0.4])
    members = tuple(AffineMonotone(np.eye(1), [float(i)]) for i in range(4))
    family = RandomFamily(members, weights)
    stream = SampleStream(2024)
    draws = 100_000
    counts = np.bincount([family.sample(stream) for _ in range(draws)], minlength=4)
    assert stats.chisquare(counts, draws * weights).pvalue >= 1e-4


def test_streams_are_reproducible_and_independent():
    family = RandomFamily.normalized([AffineMonotone(np.eye(1), [0.0])] * 5)
    first = [family.sample(SampleStream.for_replica(9, 0)) for _ in range(3)]
    a, b = SampleStream.for_replica(9, 0), SampleStream.for_replica(9, 0)
    seq_a = [family.sample(a) for _ in range(1000)]
    seq_b = [family.sample(b) for _ in range(1000)]
    assert seq_a == seq_b
    assert len(set(first)) == 1
    other = SampleStream.for_replica(9, 1)
    assert [family.sample(other) for _ in range(1000)] != seq_a


def test_negative_seed_is_rejected():
    with pytest.raises(InvalidProblem):
        SampleStream(-1)


def test_weights_are_validated():
    member = AffineMonotone(np.eye(1), [0.0])
    with pytest.raises(InvalidProblem):
        RandomFamily((member, member), np.array([0.7, 0.7]))
    with pytest.raises(InvalidProblem):
        RandomFamily((member, member), np.array([1.0, 0.0]))
    with pytest.raises(InvalidProblem):
        RandomFamily((), np.array([]))
    with pytest.raises(DimensionMismatch):
        RandomFamily((member, AffineMonotone(np.eye(2), [0.0, 0.0])), np.array([0.5, 0.5]))
    family = RandomFamily.normalized([member, member], [1.0, 3.0])
    np.testing.assert_allclose(family.weights, [0.25, 0.75])


def test_mean_of_shifted_pair_cancels():
    np.testing.assert_allclose(shifted_pair().mean_apply([0.0]), [0.0])


def test_mean_of_single_member():
    family = RandomFamily((AffineMonotone(np.eye(1), [0.0]),), np.ones(1))
    np.testing.assert_allclose(family.mean_apply([3.0]), [3.0])


def test_mean_is_set_valued_on_a_boundary():
    family = RandomFamily((NormalCone(Box([0], [1])),), np.ones(1))
    with pytest.raises(SetValuedAt):
        family.mean_apply([1.0])
    with pytest.raises(DomainError):
        family.mean_apply([3.0])


def test_mean_is_linear_in_the_weights():
    a = AffineMonotone(np.array([[2.0, 1.0], [-1.0, 1.0]]), [1.0, 0.0])
    b = AffineMonotone(np.eye(2), [0.0, -2.0])
    family = RandomFamily((a, b), np.array([0.25, 0.75]))
    x = np.array([0.3, -1.2])
    np.testing.assert_allclose(family.mean_apply(x), 0.25 * a.value_at(x) + 0.75 * b.value_at(x))
    t, off = family.mean_linear_part()
    np.testing.assert_allclose(t @ x + off, family.mean_apply(x))


def test_common_zero_check():
    sets = (Box([0, 0], [2, 2]), Halfspace([1, 1], 3.0), Ball([1, 1], 1.0))
    family = RandomFamily.normalized([NormalCone(s) for s in sets])
    assert family.common_zero_check([1.0, 1.0], 1e-12)
    assert not shifted_pair().common_zero_check([0.0], 1e-12)
    assert not family.common_zero_check([5.0, 5.0], 1e-12)
    assert not family.common_zero_check([np.nan, 1.0], 1e-12)
    assert not family.common_zero_check([1.0], 1e-12)


def test_essential_domain():
    assert isinstance(shifted_pair().essential_domain(), FullSpace)
    family = RandomFamily.normalized([NormalCone(Box([0, 0], [2, 2])), NormalCone(Box([1, 1], [3, 3])),
                                      AffineMonotone.rotation_2d()])
    domain = family.essential_domain()
    assert isinstance(domain, Box)
    np.testing.assert_array_equal(domain.lower, [1, 1])
    assert shifted_pair().common_domain
    assert not family.common_domain


def test_affine_detection():
    assert shifted_pair().is_affine
    assert RandomFamily((Subdifferential(Quadratic(np.eye(1), [1.0])),), np.ones(1)).is_affine
    family = RandomFamily((NormalCone(Box([0], [1])),), np.ones(1))
    assert not family.is_affine
    with pytest.raises(UnsupportedComposite):
        family.mean_linear_part()


def test_zero_certificate():
    certificate = shifted_pair().zero_certificate([0.0])
    assert certificate.residual == 0.0
    assert certificate.second_moment == pytest.approx(1.0)
    np.testing.assert_allclose(certificate.selection[0], [-1.0])
    np.testing.assert_allclose(certificate.selection[1], [1.0])
