from fractions import Fraction as Fr

import pytest

from rigidkit.rational_geometry import (
    centroid_and_volume,
    mat_det,
    point_in_hull,
    primitive_vector,
    separating_functional,
)
from rigidkit.toric import (
    ConvexBody,
    DelzantPolytope,
    MomentData,
    ToricError,
    ball_subpolytope,
    blowup_moment_data,
    builtin_moment_data,
    delzant_verify,
    fiber_status,
    normalize,
    product_of_spheres_moment_data,
    projective_moment_data,
    simplex_polytope,
    special_point,
    stable_displaceability_certificate,
)


class TestPolytopeBasics:
    def test_simplex_facets_and_edges(self):
        p = simplex_polytope(2)
        assert len(p.facets) == 3
        assert len(p.edges) == 3
        assert p.contains((Fr(1, 4), Fr(1, 4)))
        assert not p.contains((1, 1))

    def test_cube(self):
        p = DelzantPolytope(3, [(x, y, z) for x in (0, 1) for y in (0, 1)
                                for z in (0, 1)])
        assert len(p.facets) == 6
        assert len(p.edges) == 12

    def test_interval(self):
        p = DelzantPolytope(1, [(0,), (1,)])
        assert p.contains((Fr(1, 2),)) and not p.contains((2,))
        assert p.edges == ((0, 1),)

    def test_non_extreme_point_rejected(self):
        with pytest.raises(ToricError, match="extreme"):
            DelzantPolytope(2, [(0, 0), (1, 0), (0, 1), (Fr(1, 4), Fr(1, 4))])

    def test_degenerate_rejected(self):
        with pytest.raises(ToricError):
            DelzantPolytope(2, [(0, 0), (1, 0), (2, 0)])

    def test_dimension_cap(self):
        with pytest.raises(ToricError):
            DelzantPolytope(5, [tuple([0] * 5)] * 6)

    def test_edge_directions_primitive(self):
        p = simplex_polytope(2, scale=3)
        for i in range(3):
            for d in p.edge_directions(i):
                assert max(abs(x) for x in d) >= 1
                assert primitive_vector(d) == d


class TestNormalize:
    def test_simplex_shift(self):
        for n in (1, 2, 3):
            _, w = normalize(simplex_polytope(n))
            assert w == tuple([Fr(-1, n + 1)] * n)

    def test_symmetric_square_identity(self):
        h = Fr(1, 2)
        p = DelzantPolytope(2, [(-h, -h), (h, -h), (-h, h), (h, h)])
        q, w = normalize(p)
        assert w == (0, 0)
        assert q == p

    def test_interval(self):
        p = DelzantPolytope(1, [(0,), (1,)])
        q, w = normalize(p)
        assert w == (Fr(-1, 2),)
        assert sorted(q.vertices) == [(Fr(-1, 2),), (Fr(1, 2),)]

    def test_idempotent(self):
        p = DelzantPolytope(2, [(1, 0), (3, 0), (0, 3), (0, 1)])
        q1, _ = normalize(p)
        q2, w2 = normalize(q1)
        assert w2 == (0, 0)
        assert q1 == q2


class TestDelzantCondition:
    def test_simplex_and_square_ok(self):
        assert delzant_verify(simplex_polytope(2)) == []
        sq = DelzantPolytope(2, [(0, 0), (1, 0), (0, 1), (1, 1)])
        assert delzant_verify(sq) == []

    def test_failing_triangle(self):
        p = DelzantPolytope(2, [(0, 0), (2, 0), (0, 1)])
        bad = delzant_verify(p)
        assert len(bad) == 1
        assert "det" in bad[0] and "2" in bad[0]
        assert "0" in bad[0] and "1" in bad[0]  # names the vertex (0, 1)

    def test_blowup_polytope_delzant(self):
        assert delzant_verify(blowup_moment_data().polytope) == []


class TestSpecialPoint:
    def test_cp2(self):
        md = projective_moment_data(2)
        assert md.kappa == Fr(1, 3)
        assert special_point(md) == (0, 0)

    def test_product_of_spheres(self):
        md = product_of_spheres_moment_data()
        assert md.kappa == Fr(1, 2)
        assert special_point(md) == (0, 0)

    def test_blowup_interior_and_average(self):
        md = blowup_moment_data()
        spec = special_point(md)
        assert spec == (Fr(-1, 12), Fr(-1, 12))
        assert md.polytope.strictly_contains(spec)
        m = len(md.polytope.vertices)
        avg = tuple(sum(v[i] for v in md.polytope.vertices) / Fr(m)
                    for i in range(2))
        assert avg == spec

    def test_vertex_disagreement_reported(self):
        # wrong kappa: the per-vertex values differ
        md = MomentData(projective_moment_data(2).polytope, kappa=Fr(1, 2))
        with pytest.raises(ToricError, match="per-vertex"):
            special_point(md)

    def test_unnormalized_translates(self):
        md = MomentData(simplex_polytope(2), kappa=Fr(1, 3))
        spec = special_point(md)
        assert spec == (Fr(1, 3), Fr(1, 3))

    def test_requires_kappa(self):
        md = MomentData(simplex_polytope(2))
        with pytest.raises(ToricError, match="kappa"):
            special_point(md)


class TestDisplaceability:
    def test_threshold_exact(self):
        for n in range(1, 5):
            md = projective_moment_data(n)
            thr = Fr(n, n + 1)
            below = ball_subpolytope(n, thr - Fr(1, 50))
            at = ball_subpolytope(n, thr)
            assert stable_displaceability_certificate(md, below) is not None
            assert stable_displaceability_certificate(md, at) is None
            if thr + Fr(1, 50) <= 1:
                above = ball_subpolytope(n, thr + Fr(1, 50))
                assert stable_displaceability_certificate(md, above) is None

    def test_origin_inside(self):
        md = projective_moment_data(2)
        body = ConvexBody([(Fr(-1, 5), Fr(-1, 5)), (Fr(1, 5), 0), (0, Fr(1, 5))])
        assert stable_displaceability_certificate(md, body) is None

    def test_single_point(self):
        md = projective_moment_data(2)
        p = (Fr(1, 5), Fr(1, 10))
        cert = stable_displaceability_certificate(md, ConvexBody([p]))
        assert cert is not None
        assert sum(c * x for c, x in zip(cert, p)) > 0

    def test_boundary_case_origin_on_face(self):
        # segment with 0 as an endpoint: contained, no certificate
        md = projective_moment_data(1)
        body = ConvexBody([(0,), (Fr(1, 4),)])
        assert stable_displaceability_certificate(md, body) is None

    def test_requires_compressible(self):
        md = blowup_moment_data()
        with pytest.raises(ToricError, match="compressible"):
            stable_displaceability_certificate(md, ConvexBody([(Fr(1, 5), 0)]))

    def test_body_outside_polytope(self):
        md = projective_moment_data(2)
        with pytest.raises(ToricError, match="outside"):
            stable_displaceability_certificate(md, ConvexBody([(5, 5)]))

    def test_lower_dimensional_body(self):
        md = projective_moment_data(2)
        seg = ConvexBody([(Fr(1, 8), Fr(1, 8)), (Fr(1, 7), Fr(1, 7))])
        cert = stable_displaceability_certificate(md, seg)
        assert cert is not None
        for g in seg.generators:
            assert sum(c * x for c, x in zip(cert, g)) > 0


class TestBallSubpolytope:
    def test_r_one_is_whole_simplex(self):
        body = ball_subpolytope(2, 1)
        md = projective_moment_data(2)
        assert sorted(body.generators) == sorted(md.polytope.vertices)

    def test_boundary_membership(self):
        for n in (1, 2, 3):
            body = ball_subpolytope(n, Fr(n, n + 1))
            assert body.contains(tuple([0] * n))
            smaller = ball_subpolytope(n, Fr(n, n + 1) - Fr(1, 100))
            assert not smaller.contains(tuple([0] * n))

    def test_range_check(self):
        with pytest.raises(ToricError):
            ball_subpolytope(2, 0)
        with pytest.raises(ToricError):
            ball_subpolytope(2, Fr(3, 2))


class TestFiberStatus:
    def test_special_fiber(self):
        md = projective_moment_data(2)
        rep = fiber_status(md, (0, 0))
        assert rep["status"] == "superheavy_special"

    def test_compressible_off_center(self):
        md = projective_moment_data(2)
        rep = fiber_status(md, (Fr(1, 5), 0))
        assert rep["status"] == "stably_displaceable"
        assert rep["certificate"] is not None

    def test_noncompressible_unknown(self):
        md = blowup_moment_data()
        rep = fiber_status(md, (0, 0))
        assert rep["status"] == "unknown"

    def test_outside_errors(self):
        md = projective_moment_data(2)
        with pytest.raises(ToricError, match="outside"):
            fiber_status(md, (2, 2))


class TestRationalGeometry:
    def test_centroid_of_chopped_simplex(self):
        pts = [(1, 0), (3, 0), (0, 3), (0, 1)]
        c, vol = centroid_and_volume([tuple(map(Fr, p)) for p in pts], 2)
        assert vol == Fr(4)
        assert c == (Fr(13, 12), Fr(13, 12))

    def test_point_in_hull(self):
        tri = [(0, 0), (1, 0), (0, 1)]
        assert point_in_hull((Fr(1, 4), Fr(1, 4)), [tuple(map(Fr, p)) for p in tri], 2)
        assert not point_in_hull((1, 1), [tuple(map(Fr, p)) for p in tri], 2)
        # boundary
        assert point_in_hull((Fr(1, 2), 0), [tuple(map(Fr, p)) for p in tri], 2)

    def test_separating_functional_sound(self):
        pts = [(Fr(1, 3), Fr(1, 5)), (Fr(2, 5), Fr(1, 2)), (Fr(1, 2), Fr(1, 7))]
        f = separating_functional(pts, 2)
        assert f is not None
        assert all(sum(c * x for c, x in zip(f, p)) > 0 for p in pts)

    def test_no_certificate_when_zero_inside(self):
        pts = [(Fr(-1, 2), 0), (Fr(1, 2), Fr(1, 3)), (Fr(1, 4), Fr(-1, 3))]
        assert separating_functional(pts, 2) is None

    def test_det(self):
        assert mat_det([[Fr(1), Fr(2)], [Fr(3), Fr(4)]]) == -2


def test_builtin_registry():
    for name in ("cpn1", "cpn2", "cpn3", "cpn4", "s2xs2", "blowup"):
        md = builtin_moment_data(name)
        assert delzant_verify(md.polytope) == []
    with pytest.raises(KeyError):
        builtin_moment_data("nope")
