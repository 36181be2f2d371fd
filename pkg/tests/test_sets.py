import numpy as np
import pytest

from models.errors import DimensionMismatch, EmptyIntersection, InvalidProblem, UnsupportedSet
from models.sets import Ball, Box, FullSpace, Halfspace, Hyperplane, Intersection, project


def test_ball_projection_is_radial():
    np.testing.assert_allclose(project(Ball([0.0, 0.0], 1.0), [3.0, 4.0]), [0.6, 0.8])


def test_box_projection_clamps():
    np.testing.assert_array_equal(project(Box([0, 0], [1, 1]), [2.0, -0.5]), [1.0, 0.0])


def test_feasible_point_is_fixed():
    np.testing.assert_array_equal(project(Halfspace([0, 1], 2.0), [5.0, 1.0]), [5.0, 1.0])


def test_hyperplane_projection():
    np.testing.assert_allclose(project(Hyperplane([1, 1], 1.0), [1.0, 1.0]), [0.5, 0.5])


def test_project_rejects_intersections():
    region = Intersection((Box([0, 0], [1, 1]), Halfspace([1, 1], 1.0)))
    with pytest.raises(UnsupportedSet):
        project(region, [1.0, 1.0])


def test_project_checks_dimension():
    with pytest.raises(DimensionMismatch):
        project(Box([0, 0], [1, 1]), [1.0, 2.0, 3.0])


@pytest.mark.parametrize("factory", [
    lambda: Box([1.0], [0.0]),
    lambda: Halfspace([0.0, 0.0], 1.0),
    lambda: Ball([0.0], 0.0),
    lambda: Ball([0.0], -1.0),
])
def test_invalid_sets_are_rejected(factory):
    with pytest.raises(InvalidProblem):
        factory()


def test_set_data_is_read_only():
    box = Box([0.0], [1.0])
    with pytest.raises(ValueError):
        box.lower[0] = 5.0


def test_projection_is_idempotent_and_nearest(rng):
    sets = [Box([-1, 0, 0], [1, 2, 1]), Halfspace([1, -2, 0.5], 0.3), Ball([0.2, 0.1, -0.3], 1.5),
            Hyperplane([0, 1, 1], -0.4)]
    for s in sets:
        for _ in range(200):
            x = 3.0 * rng.standard_normal(3)
            p = s.project(x)
            assert s.contains(p)
            np.testing.assert_allclose(s.project(p), p, atol=1e-12)
            # variational inequality of the projection
            for _ in range(5):
                y = s.project(3.0 * rng.standard_normal(3))
                assert float((x - p) @ (y - p)) <= 1e-9


def test_interior_and_boundary():
    box = Box([0, 0], [1, 1])
    assert box.is_interior(np.array([0.5, 0.5]))
    assert not box.is_interior(np.array([1.0, 0.5]))
    assert FullSpace(2).is_interior(np.array([9.0, 9.0]))
    assert not Hyperplane([1, 0], 0.0).is_interior(np.array([0.0, 3.0]))


def test_box_normal_cone_projection():
    box = Box([0, 0], [1, 1])
    out = box.normal_cone_projection(np.array([1.0, 0.5]), np.array([2.0, 3.0]))
    np.testing.assert_array_equal(out, [2.0, 0.0])
    out = box.normal_cone_projection(np.array([1.0, 0.5]), np.array([-2.0, 3.0]))
    np.testing.assert_array_equal(out, [0.0, 0.0])


def test_translated_sets_move_with_the_shift():
    shift = np.array([1.0, -2.0])
    assert Box([0, 0], [1, 1]).translated(shift).contains(np.array([1.5, -1.5]))
    assert Halfspace([1, 0], 0.0).translated(shift).contains(np.array([0.9, 0.0]))
    assert not Halfspace([1, 0], 0.0).translated(shift).contains(np.array([1.1, 0.0]))
    np.testing.assert_array_equal(Ball([0, 0], 1.0).translated(shift).center, shift)


def test_simplified_merges_boxes():
    region = Intersection((Box([0, 0], [2, 2]), FullSpace(2), Box([1, -1], [3, 1])))
    merged = region.simplified()
    assert isinstance(merged, Box)
    np.testing.assert_array_equal(merged.lower, [1, 0])
    np.testing.assert_array_equal(merged.upper, [2, 1])


def test_simplified_keeps_other_members():
    region = Intersection((Box([0, 0], [2, 2]), Intersection((Halfspace([1, 1], 1.0), Box([0, 0], [1, 3])))))
    simplified = region.simplified()
    assert isinstance(simplified, Intersection)
    assert len(simplified.members) == 2
    assert isinstance(simplified.members[0], Box)


def test_disjoint_boxes_are_reported():
    with pytest.raises(EmptyIntersection):
        Intersection((Box([0, 0], [1, 1]), Box([2, 2], [3, 3]))).simplified()


def test_intersection_requires_common_dimension():
    with pytest.raises(DimensionMismatch):
        Intersection((Box([0], [1]), Box([0, 0], [1, 1])))
