from django.test import SimpleTestCase

from thurston.exceptions import Disconnected, NonManifold, WrongEuler
from thurston.surface import (
    MarkedSphere,
    Subdivision,
    build_triangulation,
    euler_characteristic,
    isomorphisms,
    refine_barycentric,
    standard_sphere,
)

TETRAHEDRON = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]


class TriangulationTestCase(SimpleTestCase):
    def test__build_triangulation__tetrahedron(self):
        t = build_triangulation(TETRAHEDRON)
        self.assertEqual(t.vertex_count, 4)
        self.assertEqual(len(t.edges), 6)
        self.assertEqual(euler_characteristic(t), 2)

    def test__build_triangulation__reorients_to_first_triple(self):
        flipped = [(0, 1, 2), (0, 3, 2), (0, 3, 1), (1, 3, 2)]
        t = build_triangulation(flipped)
        self.assertEqual(t.triangles[0], (0, 1, 2))
        self.assertEqual(t.triangles[1], (0, 2, 3))

    def test__build_triangulation__repeated_vertex_raises_exc(self):
        with self.assertRaises(NonManifold):
            build_triangulation([(0, 0, 1)] + TETRAHEDRON[1:])

    def test__build_triangulation__disconnected_raises_exc(self):
        shifted = [tuple(v + 4 for v in t) for t in TETRAHEDRON]
        with self.assertRaises(Disconnected):
            build_triangulation(TETRAHEDRON + shifted)

    def test__build_triangulation__torus_raises_exc(self):
        # the 7-vertex torus
        torus = [
            (i, (i + 1) % 7, (i + 3) % 7) for i in range(7)
        ] + [(i, (i + 3) % 7, (i + 2) % 7) for i in range(7)]
        with self.assertRaises(WrongEuler):
            build_triangulation(torus)

    def test__build_triangulation__open_disk_raises_exc(self):
        with self.assertRaises(WrongEuler):
            build_triangulation(TETRAHEDRON[:3])

    def test__standard_sphere__bipyramid(self):
        t = standard_sphere(6)
        self.assertEqual(t.vertex_count, 6)
        self.assertEqual(len(t.triangles), 8)
        self.assertEqual(t.link(0), (2, 3, 4, 5))
        self.assertEqual(len(t.fan(0)), 4)

    def test__refine_barycentric__counts(self):
        t = build_triangulation(TETRAHEDRON)
        refined = refine_barycentric(t)
        self.assertEqual(len(refined.triangulation.triangles), 6 * len(t.triangles))
        self.assertEqual(euler_characteristic(refined.triangulation), 2)
        subdivision = Subdivision.from_refinement(refined)
        for v in range(4):
            self.assertEqual(subdivision.locations[v], ("vertex", v))
        self.assertEqual(subdivision.locations[4][0], "edge")
        self.assertEqual(subdivision.locations[refined.face_vertex[0]], ("face", 0))

    def test__isomorphisms__tetrahedron_has_twelve(self):
        t = build_triangulation(TETRAHEDRON)
        self.assertEqual(len(list(isomorphisms(t, t))), 12)
        fixed = list(isomorphisms(t, t, fixed={0: 0}))
        self.assertEqual(len(fixed), 3)


class MarkedSphereTestCase(SimpleTestCase):
    def test__reference__needs_four_marked_points(self):
        t = standard_sphere(6)
        self.assertIsNone(MarkedSphere(t, [0, 1, 2]).reference)
        reference = MarkedSphere(t, [0, 1, 2, 3]).reference
        self.assertEqual(reference.labels, (0, 1, 2, 3))
        self.assertEqual(reference.tri.vertex_count, 4)
        self.assertEqual(len(reference.tri.triangles), 4)

    def test__marked_sphere__duplicate_raises_exc(self):
        with self.assertRaises(NonManifold):
            MarkedSphere(standard_sphere(5), [0, 0])
