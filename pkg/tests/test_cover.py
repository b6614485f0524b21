from fractions import Fraction

from thurston.cover import (
    INFINITY,
    build_pl_map,
    domain_marked_from_parent,
    iterate,
    is_topological_polynomial,
    lift_triangulation,
    lift_word,
    local_degree,
    orbifold_data,
    postcritical_set,
    pullback_curve,
    riemann_hurwitz_defect,
)
from thurston.curves import MappingClassWord, dehn_twist
from thurston.exceptions import (
    BranchPointNotVertex,
    MarkedSetNotInvariant,
    NotACover,
    NotSimplicial,
    OrientationReversed,
    PostcriticalNotMarked,
)
from thurston.surface import (
    MarkedSphere,
    Subdivision,
    build_triangulation,
    euler_characteristic,
    refine_barycentric,
    standard_sphere,
)

from . import CorpusTestCase

TETRAHEDRON = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]


class OrbifoldTestCase(CorpusTestCase):
    corpus = (
        "z2",
        "z3",
        "z2-fixed",
        "basilica",
        "lattes2",
        "lattes2-shifted",
        "levy-disk",
        "levy-two-cycle",
    )

    def test__orbifold_data__power_maps(self):
        for name in ("z2", "z3", "z2-fixed"):
            data = orbifold_data(self.maps[name])
            self.assertEqual(data.signature, (INFINITY, INFINITY), name)
            self.assertEqual(data.euler, 0)
            self.assertTrue(data.is_parabolic)
            self.assertEqual(data.signature_id, 1)

    def test__orbifold_data__lattes(self):
        for name in ("lattes2", "lattes2-shifted"):
            data = orbifold_data(self.maps[name])
            self.assertEqual(data.signature, (2, 2, 2, 2), name)
            self.assertEqual(data.signature_text, "(2,2,2,2)")
            self.assertEqual(data.signature_id, 6)

    def test__orbifold_data__basilica_is_hyperbolic(self):
        data = orbifold_data(self.maps["basilica"])
        self.assertEqual(data.signature, (INFINITY, INFINITY, INFINITY))
        self.assertEqual(data.euler, Fraction(-1))
        self.assertFalse(data.is_parabolic)

    def test__orbifold_data__euler_characteristic_not_positive(self):
        for name, f in self.maps.items():
            self.assertLessEqual(orbifold_data(f).euler, 0, name)

    def test__riemann_hurwitz__holds_on_corpus(self):
        for name, f in self.maps.items():
            self.assertEqual(riemann_hurwitz_defect(f), 0, name)

    def test__degrees(self):
        self.assertEqual(self.maps["z2"].degree, 2)
        self.assertEqual(self.maps["z3"].degree, 3)
        self.assertEqual(self.maps["basilica"].degree, 2)
        self.assertEqual(self.maps["lattes2"].degree, 4)

    def test__portrait__basilica(self):
        portrait = self.maps["basilica"].portrait
        # -1 -> 0 -> -1 and infinity fixed
        self.assertEqual(portrait.dynamics, {1: 2, 2: 1, 4: 4})
        self.assertEqual(set(portrait.critical_values), {1, 4})
        self.assertEqual(set(portrait.postcritical), {1, 2, 4})

    def test__is_topological_polynomial(self):
        self.assertTrue(is_topological_polynomial(self.maps["z2"]))
        self.assertTrue(is_topological_polynomial(self.maps["basilica"]))
        self.assertFalse(is_topological_polynomial(self.maps["lattes2"]))

    def test__iterate__multiplies_degrees(self):
        f = self.maps["z2"]
        g = iterate(f, 2)
        self.assertEqual(g.degree, 4)
        self.assertEqual(riemann_hurwitz_defect(g), 0)
        self.assertEqual(orbifold_data(g).signature, (INFINITY, INFINITY))

    def test__pullback_curve__degrees_sum_to_degree(self):
        f = self.maps["levy-two-cycle"]
        for curve in f.reference.filling_system:
            components = pullback_curve(f, curve)
            self.assertEqual(sum(d for _, d in components), f.degree)


class BuildMapTestCase(CorpusTestCase):
    corpus = ("z2", "z2-ring")

    def setUp(self):
        super().setUp()
        self.t = build_triangulation(TETRAHEDRON)

    def _images(self, vertex_image):
        return [
            self.t.by_vertex_set[frozenset(vertex_image[v] for v in tri)]
            for tri in self.t.triangles
        ]

    def test__domain_marked_from_parent__ring_points(self):
        f = self.maps["z2-ring"]
        found = domain_marked_from_parent(f.domain.tri, f.codomain.tri, f.parent, f.marked)
        self.assertEqual(list(found), list(f.domain.marked))
        # the domain ring winds twice, so marked ring points sit at every other vertex
        self.assertEqual(list(found), [0, 1, 2, 4, 6])

    def test__build_pl_map__reflection_raises_exc(self):
        vertex_image = [1, 0, 2, 3]
        sphere = MarkedSphere(self.t, [])
        with self.assertRaises(OrientationReversed):
            build_pl_map(sphere, sphere, vertex_image, self._images(vertex_image))

    def test__build_pl_map__degree_one_raises_exc(self):
        vertex_image = [0, 1, 2, 3]
        sphere = MarkedSphere(self.t, [])
        with self.assertRaises(NotACover):
            build_pl_map(sphere, sphere, vertex_image, self._images(vertex_image))

    def test__build_pl_map__short_triangle_image_raises_exc(self):
        f = self.maps["z2"]
        with self.assertRaises(NotSimplicial) as cm:
            build_pl_map(f.domain, f.codomain, f.vertex_image, f.triangle_image[:-1])
        self.assertEqual(cm.exception.pointer, "/triangle_image")

    def test__build_pl_map__marked_set_not_invariant_raises_exc(self):
        f = self.maps["z2"]
        with self.assertRaises(MarkedSetNotInvariant):
            build_pl_map(
                MarkedSphere(f.domain.tri, [0, 2]),
                f.codomain,
                f.vertex_image,
                f.triangle_image,
            )

    def test__portrait__unmarked_critical_value_raises_exc(self):
        f = self.maps["z2"]
        g = build_pl_map(
            MarkedSphere(f.domain.tri, [0]),
            MarkedSphere(f.codomain.tri, [0]),
            f.vertex_image,
            f.triangle_image,
        )
        with self.assertRaises(PostcriticalNotMarked):
            orbifold_data(g)


class LiftTestCase(CorpusTestCase):
    corpus = ("z2", "basilica", "levy-disk")

    def test__local_degree__poles(self):
        f = self.maps["z2"]
        self.assertEqual(local_degree(f, 0), 2)
        self.assertEqual(local_degree(f, 1), 2)
        self.assertEqual(local_degree(f, 2), 1)

    def test__postcritical_set(self):
        self.assertEqual(set(postcritical_set(self.maps["z2"])), {0, 1})
        self.assertEqual(set(postcritical_set(self.maps["basilica"])), {1, 2, 4})

    def test__lift_triangulation__codomain_itself(self):
        f = self.maps["z2"]
        lifted = lift_triangulation(f, f.codomain.tri)
        self.assertEqual(lifted.tri.vertex_count, f.domain.tri.vertex_count)
        self.assertEqual(len(lifted.tri.triangles), len(f.domain.tri.triangles))
        self.assertEqual(lifted.vertex_image, tuple(f.vertex_image))

    def test__lift_triangulation__barycentric_refinement(self):
        f = self.maps["z2"]
        subdivision = Subdivision.from_refinement(refine_barycentric(f.codomain.tri))
        lifted = lift_triangulation(f, subdivision)
        self.assertEqual(len(lifted.tri.triangles), 6 * len(f.domain.tri.triangles))
        self.assertEqual(euler_characteristic(lifted.tri), 2)
        self.assertEqual(sorted(set(lifted.parent)), list(range(len(f.domain.tri.triangles))))

    def test__lift_triangulation__foreign_triangulation_raises_exc(self):
        with self.assertRaises(BranchPointNotVertex):
            lift_triangulation(self.maps["z2"], standard_sphere(6))

    def test__lift_word__levy_curve(self):
        f = self.maps["levy-disk"]
        curve = f.reference.pair_curve(2, 3)
        self.assertEqual(list(lift_word(f, dehn_twist(curve))), [(curve, 1)])
        self.assertEqual(list(lift_word(f, dehn_twist(curve, 2))), [(curve, 2)])
        self.assertEqual(lift_word(f, MappingClassWord()), MappingClassWord())
