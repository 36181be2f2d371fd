import numpy as np
import pytest

from models.data_models import SppaState, StepSchedule
from models.enums import ProblemKind
from models.errors import (CertificateError, ConfigError, DimensionMismatch, EmptyIntersection, InvalidProblem,
                           SingularMean)
from models.functions import Quadratic, WeightedL1
from models.operators import AffineMonotone, NormalCone, SaddleBilinear, Subdifferential
from models.problems.builders import (build_constrained_program, build_family, build_feasibility, build_rotation,
                                      build_saddle, build_strongly_monotone, build_variational_inequality,
                                      random_affine_pool, random_quadratic_pool, random_saddle_pool)
from models.problems.registry import ProblemRegistry
from models.random_family import SampleStream
from models.sets import Box, Halfspace, Intersection
from models.sppa import run, sppa_step

TRIANGLE = [Halfspace([-1, 0], 0.0), Halfspace([0, -1], 0.0), Halfspace([1, 1], 2.0)]


def interval(lo, hi):
    return Box([lo], [hi])


def test_identical_boxes_keep_a_feasible_start_fixed():
    instance = build_feasibility([Box([0, 0], [1, 1]), Box([0, 0], [1, 1])])
    report = run(instance.family, StepSchedule(), [0.3, 0.7], 50, SampleStream(0))
    np.testing.assert_array_equal(report.summary.final_x, [0.3, 0.7])
    assert instance.certificate == "member_distance"


def test_touching_boxes_meet_in_one_point():
    instance = build_feasibility([Box([0, 0], [1, 1]), Box([1, 1], [2, 2])], anchor=[-3.0, 5.0])
    np.testing.assert_allclose(instance.known_solution, [1.0, 1.0])


def test_feasibility_solution_is_the_projection_of_the_anchor():
    instance = build_feasibility(TRIANGLE, anchor=[5.0, -3.0])
    np.testing.assert_allclose(instance.known_solution, [2.0, 0.0], atol=1e-9)
    assert instance.residual <= 1e-9
    assert instance.family.common_zero_check(instance.known_solution, 1e-9)


def test_disjoint_sets_are_reported():
    with pytest.raises(EmptyIntersection):
        build_feasibility([Halfspace([1.0], 0.0), Halfspace([-1.0], -1.0)])
    with pytest.raises(EmptyIntersection):
        build_feasibility([Box([0], [1]), Box([2], [3])])


def test_nested_intersections_are_flattened():
    instance = build_feasibility([Intersection((Box([0, 0], [2, 2]), TRIANGLE[2]))])
    assert instance.family.size == 2


def test_constrained_program_with_inactive_constraint():
    pool = [Quadratic([[1.0]], [-1.0]), Quadratic([[1.0]], [1.0])]
    instance = build_constrained_program(pool, None, [interval(0.0, 10.0)], 0.5)
    np.testing.assert_allclose(instance.known_solution, [0.0], atol=1e-9)
    assert instance.certificate == "kkt_residual"


def test_constrained_program_with_active_constraint():
    pool = [Quadratic([[1.0]], [-1.0]), Quadratic([[1.0]], [1.0])]
    instance = build_constrained_program(pool, [0.5, 0.5], [interval(1.0, 10.0)], 0.5)
    np.testing.assert_allclose(instance.known_solution, [1.0], atol=1e-9)
    assert instance.objective(np.array([1.0])) == pytest.approx(0.5)


def test_constrained_program_member_layout_and_weights():
    pool = [Quadratic([[1.0]], [-1.0]), Quadratic([[1.0]], [1.0])]
    sets = [interval(0.0, 10.0), Halfspace([1.0], 5.0)]
    instance = build_constrained_program(pool, [0.25, 0.75], sets, 0.4, set_weights=[1.0, 3.0])
    family = instance.family
    np.testing.assert_allclose(family.weights, [0.1, 0.3, 0.15, 0.45])
    assert [type(m) for m in family.members] == [Subdifferential, Subdifferential, NormalCone, NormalCone]


def test_constrained_steps_are_exact_prox_or_projection():
    pool = random_quadratic_pool(seed=3, size=4, dim=2, center=[1.0, 1.0])
    sets = [Box([0, 0], [1, 1]), Halfspace([1, 1], 1.5)]
    instance = build_constrained_program(pool, None, sets, 0.5)
    schedule = StepSchedule()
    stream = SampleStream(12)
    state = SppaState.initial([3.0, -2.0])
    for _ in range(200):
        previous = state
        state = sppa_step(state, instance.family, schedule, stream)
        k = state.last_index
        if k < len(pool):
            expected = pool[k].prox(state.last_lambda, previous.x)
        else:
            expected = sets[k - len(pool)].project(previous.x)
        np.testing.assert_array_equal(state.x, expected)


def test_constrained_program_without_quadratic_pool_has_no_reference():
    instance = build_constrained_program([WeightedL1([1.0])], None, [interval(1.0, 2.0)], 0.5)
    assert instance.known_solution is None
    assert instance.objective(np.array([1.5])) == pytest.approx(1.5)


@pytest.mark.parametrize("p0", [0.0, 1.0, 1.5])
def test_constrained_program_rejects_bad_probability(p0):
    with pytest.raises(InvalidProblem):
        build_constrained_program([Quadratic([[1.0]], [0.0])], None, [interval(0.0, 1.0)], p0)


def test_pure_bilinear_saddle_is_a_rotation():
    instance = build_saddle([SaddleBilinear([[0.0]], [[0.0]], [[-1.0]], [0.0], [0.0])])
    np.testing.assert_allclose(instance.family.members[0].T, AffineMonotone.rotation_2d().M)
    np.testing.assert_allclose(instance.known_solution, [0.0, 0.0])
    assert instance.modulus == 0.0
    assert instance.gap_fn(np.zeros(2)) is None


def test_strongly_monotone_saddle():
    instance = build_saddle([SaddleBilinear([[1.0]], [[1.0]], [[1.0]], [0.0], [0.0])])
    np.testing.assert_allclose(instance.known_solution, [0.0, 0.0])
    assert instance.modulus == pytest.approx(1.0)
    assert instance.gap_fn(instance.known_solution) == pytest.approx(0.0, abs=1e-12)


def test_saddle_pool_must_share_shapes():
    with pytest.raises(DimensionMismatch):
        build_saddle([SaddleBilinear([[1.0]], [[1.0]], [[1.0]], [0.0], [0.0]),
                      SaddleBilinear(np.eye(2), [[1.0]], [[1.0], [0.0]], [0.0, 0.0], [0.0])])


def test_strongly_monotone_pair():
    pool = [AffineMonotone.identity(1, [1.0]), AffineMonotone.identity(1, [-1.0])]
    instance = build_strongly_monotone(pool)
    np.testing.assert_allclose(instance.known_solution, [0.0])
    assert instance.modulus == pytest.approx(1.0)
    assert instance.strong_convergence
    assert instance.selection.second_moment == pytest.approx(1.0)


def test_strongly_monotone_single_member():
    instance = build_strongly_monotone([AffineMonotone(2.0 * np.eye(2), [-2.0, 0.0])])
    np.testing.assert_allclose(instance.known_solution, [1.0, 0.0])


def test_rotation_is_not_strongly_monotone():
    with pytest.raises(InvalidProblem):
        build_strongly_monotone([AffineMonotone.rotation_2d()])


def test_singular_saddle_mean_is_reported():
    with pytest.raises(SingularMean):
        build_saddle([SaddleBilinear([[0.0]], [[0.0]], [[0.0]], [0.0], [0.0])])


def test_variational_inequality_on_a_box():
    operator = AffineMonotone(np.eye(2), [-2.0, -2.0])
    instance = build_variational_inequality(operator, [Box([0, 0], [1, 1])], 0.5)
    np.testing.assert_allclose(instance.known_solution, [1.0, 1.0], atol=1e-9)
    assert instance.certificate == "natural_residual"
    assert instance.family.members[0] is operator


def test_rotation_instance():
    instance = build_rotation()
    assert instance.kind is ProblemKind.ROTATION
    np.testing.assert_array_equal(instance.known_solution, [0.0, 0.0])


def test_family_certificate_falls_back_to_common_zero():
    instance = build_family([NormalCone(Box([0, 0], [1, 1])), NormalCone(Halfspace([1, 1], 1.0))],
                            known_solution=[0.5, 0.5])
    assert instance.certificate == "common_zero"
    pair = build_family([AffineMonotone.identity(1, [1.0]), AffineMonotone.identity(1, [-1.0])],
                        known_solution=[0.0])
    assert pair.certificate == "mean_residual"


def test_wrong_known_solution_fails_its_certificate():
    with pytest.raises(CertificateError):
        build_family([AffineMonotone(np.eye(1), [0.0])], known_solution=[1.0])


def test_random_pools_are_reproducible():
    a = random_affine_pool(seed=5, size=3, dim=4, alpha=0.5)
    b = random_affine_pool(seed=5, size=3, dim=4, alpha=0.5)
    for m, n in zip(a, b):
        np.testing.assert_array_equal(m.M, n.M)
        assert m.modulus >= 0.5 - 1e-12
    saddles = random_saddle_pool(seed=5, size=3, dx=2, dy=2)
    assert all(s.modulus >= 1.0 - 1e-12 for s in saddles)
    quadratics = random_quadratic_pool(seed=5, size=5, dim=3, center=[0.0, 0.0, 0.0])
    assert all(np.linalg.eigvalsh(q.Q)[0] >= 1.0 - 1e-12 for q in quadratics)


def test_registry_builds_from_json():
    registry = ProblemRegistry()
    instance = registry.build({
        "kind": "constrained_program",
        "functions": [{"kind": "quadratic", "Q": [[1]], "b": [-1]}, {"kind": "quadratic", "Q": [[1]], "b": [1]}],
        "sets": [{"kind": "box", "lower": [1], "upper": [10]}],
        "p0": 0.5,
    })
    np.testing.assert_allclose(instance.known_solution, [1.0], atol=1e-9)
    saddle = registry.build({"kind": "random_saddle", "seed": 1, "pool_size": 3, "dx": 2, "dy": 2})
    assert saddle.dim == 4
    strong = registry.build({"kind": "strongly_monotone", "members": [{"M": [[2, 0], [0, 2]], "b": [-2, 0]}]})
    np.testing.assert_allclose(strong.known_solution, [1.0, 0.0])
    assert set(registry.list_kinds()) == {k.value for k in ProblemKind}


def test_registry_reports_invalid_data_as_config_errors():
    registry = ProblemRegistry()
    with pytest.raises(ConfigError) as info:
        registry.build({"kind": "constrained_program", "functions": [{"kind": "quadratic", "Q": [[1]], "b": [0]}],
                        "sets": [{"kind": "box", "lower": [0], "upper": [1]}], "p0": 2.0})
    assert info.value.field == "problem"
    with pytest.raises(ConfigError) as info:
        registry.build({"kind": "feasibility", "sets": [{"kind": "ball", "center": [0], "radius": -1}]})
    assert info.value.field == "problem.sets[0]"
    with pytest.raises(ConfigError):
        registry.build({"kind": "variational_inequality",
                        "operator": {"kind": "subdifferential", "function": {"kind": "linear", "b": [1, 1]}},
                        "sets": [{"kind": "box", "lower": [0, 0], "upper": [1, 1]}], "p0": 0.5})
