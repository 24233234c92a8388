from fractions import Fraction

import pytest

from surfinv.algebra import QQ, MPoly
from surfinv.image import (
    ClusteringAmbiguity,
    DegenerateImageError,
    ImageProblem,
    _cluster,
    alternate_chart,
    count_image_points,
    generic_combinations,
    homogenize_into_chart,
)
from surfinv.pipeline import image_problem


def xy():
    return MPoly.gens(QQ, ("x", "y"))


def one():
    return MPoly.const(QQ, ("x", "y"), QQ.one)


class TestGuards:
    def test_planar_map_is_rejected(self):
        # [x : y : 1 : 0] on w^2 = 1 lands inside the hyperplane w = 0
        x, y = xy()
        zero = MPoly.zero(QQ, ("x", "y"))
        p = ImageProblem((x, y, one()), zero, one(), (), (1, 0, 0))
        with pytest.raises(DegenerateImageError, match="plane"):
            count_image_points(p)

    def test_dependent_components(self):
        x, y = xy()
        p = ImageProblem((x, y, x + y), one(), one(), (), (1, 1, 0))
        with pytest.raises(DegenerateImageError, match="dependent"):
            count_image_points(p)

    def test_weight_mismatch(self):
        x, y = xy()
        p = ImageProblem((x, y, one()), one(), one(), (), (1, 0, 0))
        with pytest.raises(DegenerateImageError, match="weights"):
            count_image_points(p)

    def test_vanishing_branch(self):
        x, y = xy()
        zero = MPoly.zero(QQ, ("x", "y"))
        p = ImageProblem((x, y, one()), one(), zero, (), (1, 0, 2))
        with pytest.raises(DegenerateImageError):
            count_image_points(p)

    def test_section_containing_a_line(self):
        x, y = xy()
        p = ImageProblem((x, x * y, one()), one(), one(), (), (2, 2, 0))
        with pytest.raises(DegenerateImageError):
            count_image_points(p)


class TestToyMaps:
    def test_two_sheets_over_one_point(self):
        # section x = y = 0 meets the branch-free locus: two preimages, two images
        x, y = xy()
        p = ImageProblem((x, y, one()), one(), one() + x * x + y * y, (), (1, 0, 2))
        c = count_image_points(p)
        assert (c.plane_points, c.preimages, c.image_points) == (1, 2, 2)
        assert c.numeric_image_points == 2 and c.shear == "0"

    def test_branch_point_gives_one_image(self):
        x, y = xy()
        p = ImageProblem((x - 1, y, one()), one(), x * x + y * y - 1, (), (1, 0, 2))
        c = count_image_points(p)
        assert (c.plane_points, c.preimages, c.image_points) == (1, 1, 1)

    def test_shear_separates_shared_abscissa(self):
        # x = 0, y = +-1 share an x-coordinate; g vanishes on one of them
        x, y = xy()
        p = ImageProblem((x, y * y - 1, one()), one() + x + y, one(), (), (2, 2, 0))
        c = count_image_points(p)
        assert c.shear != "0"
        assert (c.plane_points, c.preimages, c.image_points) == (2, 4, 3)
        assert c.numeric_image_points == 3

    def test_base_point_is_removed(self):
        x, y = xy()
        p = ImageProblem((x, y * y - 1, one()), one() + x + y, one(), ((QQ(0), QQ(1)),), (2, 2, 0))
        c = count_image_points(p)
        assert (c.plane_points, c.image_points) == (1, 1)

    def test_invariance_under_combinations_and_charts(self):
        x, y = xy()
        p = ImageProblem((x - 1, y + 2, one()), one(), one() + x * x + y * y, (), (1, 0, 2))
        base = count_image_points(p).image_points
        q = generic_combinations(p, [[1, 2, 3], [-1, 1, 5], [2, 0, 1]])
        assert count_image_points(q).image_points == base
        assert count_image_points(alternate_chart(p, Fraction(1, 7), Fraction(-2, 3))).image_points == base


def test_homogenize_rejects_excess_degree():
    x, y = xy()
    with pytest.raises(ValueError):
        homogenize_into_chart(x * x * y, 2, QQ(1), QQ(0))
    assert homogenize_into_chart(x, 1, QQ(0), QQ(0)) == x
    assert homogenize_into_chart(one(), 1, QQ(1), QQ(2)) == one() + x + 2 * y


def test_cluster_ambiguity_band():
    dist = lambda a, b: abs(a - b)
    assert _cluster([0.0, 1e-20, 1.0], dist, 1e-8) == 2
    with pytest.raises(ClusteringAmbiguity):
        _cluster([0.0, 1e-9], dist, 1e-8)


@pytest.fixture(scope="module")
def problem(cfg):
    return image_problem(cfg)


class TestExample:
    def test_count(self, problem):
        c = count_image_points(problem)
        assert c.image_points == c.numeric_image_points == 6
        assert c.eliminant_squarefree_degree == c.numeric_image_points
        assert c.resultant_degree == c.bezout_bound

    def test_generic_combination(self, problem):
        q = generic_combinations(problem, [[1, 2, 3], [-1, 1, 5], [2, 0, 1]])
        assert count_image_points(q).image_points == 6

    def test_alternate_chart(self, cfg, problem):
        a, b = cfg.image["alternate_chart"]
        assert count_image_points(alternate_chart(problem, a, b)).image_points == 6
