import numpy as np
import pytest

from models.data_models import TRACE_COLUMNS, DiagnosticsSettings, SppaState, StepSchedule
from models.diagnostics import batch_average
from models.errors import DimensionMismatch, InvalidProblem, NonFiniteIterate
from models.functions import Linear
from models.operators import AffineMonotone, NormalCone, Subdifferential
from models.random_family import RandomFamily, SampleStream
from models.sets import Box, Halfspace
from models.sppa import run, sppa_step, tail_positive_variation, update_average


def single(op):
    return RandomFamily((op,), np.ones(1))


def shifted_pair(a=-1.0, b=1.0):
    return RandomFamily((AffineMonotone.identity(1, [a]), AffineMonotone.identity(1, [b])), np.array([0.5, 0.5]))


def test_update_average_first_step():
    xbar, total = update_average(np.zeros(1), 0.0, np.array([5.0]), 2.0)
    np.testing.assert_array_equal(xbar, [5.0])
    assert total == 2.0


@pytest.mark.parametrize("lams, xs", [((1.0, 1.0), (0.0, 2.0)), ((2.0, 1.0), (0.0, 3.0))])
def test_update_average_is_the_weighted_mean(lams, xs):
    xbar, total = np.zeros(1), 0.0
    for lam, x in zip(lams, xs):
        xbar, total = update_average(xbar, total, np.array([x]), lam)
    np.testing.assert_allclose(xbar, [1.0])
    assert total == sum(lams)


def test_step_with_identity_member():
    state = sppa_step(SppaState.initial([2.0, 2.0]), single(AffineMonotone(np.eye(2), [0, 0])), StepSchedule(),
                      SampleStream(0))
    np.testing.assert_allclose(state.x, [1.0, 1.0])
    assert (state.n, state.last_index, state.last_lambda) == (1, 0, 1.0)
    np.testing.assert_allclose(state.xbar, [1.0, 1.0])


def test_step_with_rotation_contracts_by_root_two():
    state = sppa_step(SppaState.initial([1.0, 0.0]), single(AffineMonotone.rotation_2d()), StepSchedule(),
                      SampleStream(0))
    np.testing.assert_allclose(state.x, [0.5, -0.5])
    assert np.linalg.norm(state.x) == pytest.approx(1.0 / np.sqrt(2.0))


def test_step_fixes_feasible_points():
    family = RandomFamily.normalized([NormalCone(Box([0, 0], [2, 2])), NormalCone(Halfspace([1, 1], 3.0))])
    state = sppa_step(SppaState.initial([1.0, 1.0]), family, StepSchedule(), SampleStream(0))
    np.testing.assert_array_equal(state.x, [1.0, 1.0])


def test_step_consumes_one_draw():
    stream = SampleStream(5)
    state = SppaState.initial([0.0])
    for _ in range(7):
        state = sppa_step(state, shifted_pair(), StepSchedule(), stream)
    assert stream.counter == 7 and state.n == 7


def test_step_checks_dimension():
    with pytest.raises(DimensionMismatch):
        sppa_step(SppaState.initial([1.0]), single(AffineMonotone.rotation_2d()), StepSchedule(), SampleStream(0))


def test_non_finite_iterate_aborts_the_run():
    family = single(Subdifferential(Linear([-1e308])))
    with pytest.raises(NonFiniteIterate) as info:
        run(family, StepSchedule(), [1e308], 5, SampleStream(0))
    assert info.value.iteration == 1


def test_run_needs_at_least_one_step():
    with pytest.raises(InvalidProblem):
        run(shifted_pair(), StepSchedule(), [0.0], 0, SampleStream(0))


def test_identity_run_matches_the_contraction_product():
    schedule = StepSchedule()
    report = run(single(AffineMonotone(np.eye(1), [0.0])), schedule, [1.0], 10, SampleStream(0))
    expected = np.prod(1.0 / (1.0 + schedule.steps(10)))
    assert len(report.trace) == 10
    assert list(report.trace.columns) == TRACE_COLUMNS
    assert report.summary.final_x[0] == pytest.approx(expected, rel=1e-14)
    assert report.trace["norm_x"].iloc[-1] == pytest.approx(expected, rel=1e-14)


def test_trace_stride_and_final_row():
    report = run(shifted_pair(), StepSchedule(), [3.0], 25, SampleStream(1), stride=10)
    assert report.trace["n"].tolist() == [10, 20, 25]
    assert report.iterates.shape == (3, 1)
    assert report.lambdas.shape == (25,)


def test_undefined_columns_are_missing_not_zero():
    report = run(shifted_pair(), StepSchedule(), [3.0], 5, SampleStream(1))
    assert report.trace["dist_to_solution"].isna().all()
    assert report.trace["objective_avg"].isna().all()
    assert (report.trace["dist_to_domain"] == 0.0).all()
    assert report.summary.dist_to_solution is None


def test_running_average_matches_batch_recomputation():
    family = shifted_pair(3.0, 1.0)
    report = run(family, StepSchedule(), [0.0], 2000, SampleStream(4), stride=1)
    batch = batch_average(report.iterates, report.lambdas)
    np.testing.assert_allclose(report.summary.final_xbar, batch, rtol=1e-12)


def test_burn_in_excludes_early_iterates():
    family = shifted_pair(3.0, 1.0)
    burn_in = 100
    report = run(family, StepSchedule(), [0.0], 500, SampleStream(4), stride=1,
                 diagnostics=DiagnosticsSettings(burn_in=burn_in))
    batch = batch_average(report.iterates[burn_in:], report.lambdas[burn_in:])
    np.testing.assert_allclose(report.summary.final_xbar, batch, rtol=1e-12)
    assert report.trace["dist_avg_to_feasible"].iloc[:burn_in].isna().all()


def test_runs_replay_bit_for_bit():
    family = RandomFamily.normalized([NormalCone(Halfspace([-1, 0], 0.0)), NormalCone(Halfspace([0, -1], 0.0)),
                                      NormalCone(Halfspace([1, 1], 2.0))])
    first = run(family, StepSchedule(), [5.0, -3.0], 300, SampleStream(8, 2))
    second = run(family, StepSchedule(), [5.0, -3.0], 300, SampleStream(8, 2))
    assert first.trace.equals(second.trace)
    np.testing.assert_array_equal(first.indices, second.indices)
    np.testing.assert_array_equal(first.summary.final_xbar, second.summary.final_xbar)


def test_run_follows_the_single_step_recursion():
    family = RandomFamily.normalized([AffineMonotone.rotation_2d(), NormalCone(Box([-1, -1], [1, 1]))], [1.0, 3.0])
    report = run(family, StepSchedule(), [4.0, 2.0], 120, SampleStream(7), stride=1,
                 diagnostics=DiagnosticsSettings(burn_in=10))
    state, stream = SppaState.initial([4.0, 2.0]), SampleStream(7)
    for k in range(120):
        state = sppa_step(state, family, StepSchedule(), stream, burn_in=10)
        np.testing.assert_array_equal(report.iterates[k], state.x)
        assert (report.indices[k], report.lambdas[k]) == (state.last_index, state.last_lambda)
    np.testing.assert_array_equal(report.summary.final_xbar, state.xbar)


def test_common_zero_runs_are_fejer_monotone():
    family = RandomFamily.normalized([NormalCone(Halfspace([-1, 0], 0.0)), NormalCone(Halfspace([0, -1], 0.0)),
                                      NormalCone(Halfspace([1, 1], 2.0))])
    x_star = np.array([0.5, 0.5])
    assert family.common_zero_check(x_star, 1e-12)
    report = run(family, StepSchedule(), [5.0, -3.0], 2000, SampleStream(3), stride=1, x_star=x_star)
    dist = report.trace["dist_to_solution"].to_numpy()
    start = np.linalg.norm(np.array([5.0, -3.0]) - x_star)
    assert dist[0] <= start + 1e-12
    assert np.all(np.diff(dist) <= 1e-12)


def test_domain_ratio_is_recorded_when_enabled():
    family = RandomFamily.normalized([NormalCone(Box([0, 0], [2, 2])), NormalCone(Box([1, 1], [3, 3]))])
    report = run(family, StepSchedule(), [5.0, -4.0], 200, SampleStream(0),
                 diagnostics=DiagnosticsSettings(domain_ratio=True))
    assert report.domain_ratio.shape == (200,)
    assert report.summary.sup_domain_ratio == pytest.approx(np.max(report.domain_ratio))
    assert np.all(report.domain_ratio >= 0.0)


def test_domain_ratio_supremum_covers_unrecorded_steps():
    family = RandomFamily.normalized([NormalCone(Box([0, 0], [2, 2])), NormalCone(Box([1, 1], [3, 3]))])
    settings = DiagnosticsSettings(domain_ratio=True)
    every = run(family, StepSchedule(), [5.0, -4.0], 200, SampleStream(4), diagnostics=settings, stride=1)
    sparse = run(family, StepSchedule(), [5.0, -4.0], 200, SampleStream(4), diagnostics=settings, stride=50)
    assert sparse.domain_ratio.shape == (4,)
    assert sparse.summary.sup_domain_ratio == pytest.approx(np.max(every.domain_ratio), rel=1e-12)
    assert sparse.summary.sup_domain_ratio >= np.max(sparse.domain_ratio)


def test_tail_positive_variation():
    assert tail_positive_variation(np.array([5.0, 4.0, 1.0, 2.0, 1.0, 3.0])) == pytest.approx(2.0)
    assert tail_positive_variation(np.array([3.0, 2.0, 1.0])) == 0.0
    assert tail_positive_variation(np.array([1.0])) == 0.0
