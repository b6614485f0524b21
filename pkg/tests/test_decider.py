from fractions import Fraction

from sympy.combinatorics import Permutation

from thurston.corpus import CORPUS, pillowcase_map
from thurston.cover import build_pl_map, conjugate
from thurston.curves import IDENTITY, Multicurve, dehn_twist
from thurston.decider import (
    AFFINE,
    IDENTICAL,
    RELABELLING,
    Equivalent,
    NotEquivalent,
    affine_witness,
    compare_invariants,
    decide_equivalence,
    hurwitz_certificate,
    lift_identity_holds,
    piece_correspondences,
    relabelling,
    twist_lattice_witness,
)
from thurston.decomposition import decompose_along
from thurston.hurwitz import MonodromyTuple
from thurston.surface import MarkedSphere, build_triangulation

from . import CorpusTestCase


def relabelled(f, sigma0, sigma1):
    """
    ``f`` with its codomain and domain vertices renamed.
    """
    t0 = build_triangulation([tuple(sigma0[v] for v in t) for t in f.codomain.tri.triangles])
    t1 = build_triangulation([tuple(sigma1[v] for v in t) for t in f.domain.tri.triangles])
    vertex_image = [0] * t1.vertex_count
    for v, x in enumerate(f.vertex_image):
        vertex_image[sigma1[v]] = sigma0[x]
    return build_pl_map(
        MarkedSphere(t1, [sigma1[v] for v in f.domain.marked]),
        MarkedSphere(t0, [sigma0[q] for q in f.codomain.marked]),
        vertex_image,
        f.triangle_image,
        f.parent,
    )


def swap_poles(count):
    return {v: {0: 1, 1: 0}.get(v, v) for v in range(count)}


class InvariantsTestCase(CorpusTestCase):
    corpus = ("z2", "z3", "z2-fixed", "lattes2", "lattes2-shifted")

    def test__decide_equivalence__same_map(self):
        f = self.maps["z2"]
        result = decide_equivalence(f, f, self.small_budget())
        self.assertIsInstance(result, Equivalent)
        self.assertEqual(result.kind, IDENTICAL)
        self.assertIsNone(result.relabelling)

    def test__decide_equivalence__every_corpus_map_with_itself(self):
        for name in CORPUS:
            f = self.maps[name] if name in self.maps else CORPUS[name]()
            result = decide_equivalence(f, f, self.small_budget())
            self.assertIsInstance(result, Equivalent, name)
            self.assertEqual(result.kind, IDENTICAL, name)

    def test__decide_equivalence__degree_differs(self):
        result = decide_equivalence(self.maps["z2"], self.maps["z3"], self.small_budget())
        self.assertIsInstance(result, NotEquivalent)
        self.assertEqual(result.invariant, "degree")
        self.assertTrue(result.decided)

    def test__decide_equivalence__marked_points_differ(self):
        result = decide_equivalence(self.maps["z2"], self.maps["z2-fixed"], self.small_budget())
        self.assertEqual(result.invariant, "marked_points")

    def test__compare_invariants__lattes_pair_agree(self):
        self.assertIsNone(compare_invariants(self.maps["lattes2"], self.maps["lattes2-shifted"]))


class RelabellingTestCase(CorpusTestCase):
    corpus = ("z2",)

    def setUp(self):
        super().setUp()
        self.f = self.maps["z2"]
        self.g = relabelled(
            self.f,
            swap_poles(self.f.codomain.tri.vertex_count),
            swap_poles(self.f.domain.tri.vertex_count),
        )

    def test__relabelling__finds_vertex_maps(self):
        found = relabelling(self.f, self.g)
        self.assertIsNotNone(found)
        sigma0, sigma1 = found
        self.assertEqual({sigma0[q] for q in self.f.marked}, set(self.g.marked))
        for v, w in sigma1.items():
            self.assertEqual(sigma0[self.f.vertex_image[v]], self.g.vertex_image[w])

    def test__decide_equivalence__relabelled_map(self):
        result = decide_equivalence(self.f, self.g, self.small_budget())
        self.assertIsInstance(result, Equivalent)
        self.assertEqual(result.kind, RELABELLING)
        self.assertEqual({result.relabelling[q] for q in self.f.marked}, {0, 1})


class TwistTestCase(CorpusTestCase):
    corpus = ("levy-disk",)

    def setUp(self):
        super().setUp()
        self.f = self.maps["levy-disk"]
        self.curve = self.f.reference.pair_curve(2, 3)
        self.twist = dehn_twist(self.curve)

    def test__lift_identity_holds__twist_about_levy_curve(self):
        self.assertTrue(lift_identity_holds(self.f, IDENTITY, self.twist))
        self.assertFalse(lift_identity_holds(self.f, self.twist, IDENTITY))

    def test__twist_lattice_witness__degree_one_curve(self):
        self.assertIsNone(twist_lattice_witness(self.f, self.twist, [self.curve]))

    def test__decide_equivalence__conjugate_by_twist(self):
        for k in (1, 2, -1):
            g = conjugate(self.f, dehn_twist(self.curve, k))
            self.assertTrue(g.is_twisted)
            result = decide_equivalence(self.f, g, self.small_budget())
            self.assertIsInstance(result, Equivalent, k)
            self.assertEqual(result.kind, IDENTICAL, k)

    def test__piece_correspondences__levy_curve(self):
        gluing = decompose_along(self.f, Multicurve([self.curve]))
        # the swap of the two thick parts breaks the step degrees
        self.assertEqual(list(piece_correspondences(gluing, gluing)), [((0,), (0, 1))])


class HurwitzCertificateTestCase(CorpusTestCase):
    def setUp(self):
        super().setUp()
        self.x = Permutation([[0, 1]], size=3)
        self.y = Permutation([[1, 2]], size=3)

    def _tuple(self, perms, degree=3):
        return MonodromyTuple(range(len(perms)), perms, degree)

    def test__hurwitz_certificate__same_orbit(self):
        start = self._tuple([self.x, self.x, self.y, self.y])
        self.assertIsNone(hurwitz_certificate(start, start))

    def test__hurwitz_certificate__different_passports(self):
        x = Permutation([[0, 1, 2]], size=4)
        y = Permutation([[0, 3, 1]], size=4)
        y_prime = Permutation([[0, 1, 3]], size=4)
        first = self._tuple([x, y, (x * y) ** -1], 4)
        second = self._tuple([x, y_prime, (x * y_prime) ** -1], 4)
        certificate = hurwitz_certificate(first, second)
        self.assertIsInstance(certificate, NotEquivalent)
        self.assertEqual(certificate.invariant, "hurwitz_class")

    def test__hurwitz_certificate__large_orbit_is_undecided(self):
        start = self._tuple([self.x, self.x, self.y, self.y])
        moved = self._tuple([self.x, self.x * self.y * self.x**-1, self.x, self.y])
        self.assertIsNone(hurwitz_certificate(start, moved, max_states=1))


class MarkedAffineTestCase(CorpusTestCase):
    corpus = ("lattes2-marked",)

    def setUp(self):
        super().setUp()
        self.f = self.maps["lattes2-marked"]
        self.g = pillowcase_map(2, grid=2, marked=[(0, Fraction(1, 4))])

    def test__affine_witness__rotated_marking(self):
        result, reason = affine_witness(self.f, self.g)
        self.assertIsNone(reason)
        self.assertIsInstance(result, Equivalent)
        self.assertEqual(result.kind, AFFINE)

    def test__decide_equivalence__rotated_marking(self):
        result = decide_equivalence(self.f, self.g, self.small_budget())
        self.assertIsInstance(result, Equivalent)
        self.assertIn(result.kind, (RELABELLING, AFFINE))
