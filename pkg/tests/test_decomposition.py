import itertools
from fractions import Fraction

import sympy
from django.test import SimpleTestCase

from thurston.curves import Multicurve
from thurston.decomposition import (
    StepMap,
    TwistLattice,
    cap,
    codomain_pieces,
    decompose,
    decompose_along,
    solve_integer,
    solve_twist_equation,
    standard_form,
    twist_modulus,
)
from thurston.exceptions import DecompositionError, NotStable
from thurston.obstruction import is_stable

from . import CorpusTestCase


class TwistLatticeTestCase(CorpusTestCase):
    def test__solve_twist_equation__two_curves(self):
        lattice = TwistLattice(("a", "b"), [[0, 1], [Fraction(1, 2), 0]], 2)
        self.assertEqual(lattice.system, sympy.Matrix([[2, -2], [-1, 2]]))
        self.assertEqual(solve_twist_equation(lattice, (2, 1), (0, 0)), (3, 2))
        self.assertEqual(solve_twist_equation(lattice, (5, 5), (5, 5)), (0, 0))

    def test__solve_twist_equation__no_integer_solution(self):
        lattice = TwistLattice(("a", "b"), [[0, 1], [Fraction(1, 2), 0]], 2)
        # det 2, and (1, 0) is not in the image
        self.assertIsNone(solve_twist_equation(lattice, (1, 0), (0, 0)))

    def test__solve_integer__agrees_with_bounded_search(self):
        box = list(itertools.product(range(-10, 11), repeat=2))
        for _ in range(500):
            rows = self.random_matrix(2, bound=3)
            target = tuple(self.random.randint(-6, 6) for _ in range(2))
            x = solve_integer(sympy.Matrix(rows), sympy.Matrix(target))
            if x is not None:
                self.assertEqual(sympy.Matrix(rows) * x, sympy.Matrix(target))
                continue
            for a, b in box:
                image = tuple(r[0] * a + r[1] * b for r in rows)
                self.assertNotEqual(image, target, (rows, target))

    def test__solve_integer__recovers_planted_solution(self):
        for _ in range(30):
            B = sympy.Matrix(
                [[self.random.randint(-4, 4) for _ in range(3)] for _ in range(2)]
            )
            planted = sympy.Matrix([self.random.randint(-5, 5) for _ in range(3)])
            x = solve_integer(B, B * planted)
            self.assertIsNotNone(x, (B, planted))
            self.assertEqual(B * x, B * planted)


class StepMapTestCase(SimpleTestCase):
    def test__then__multiplies_degrees(self):
        first = StepMap(0, 1, {"a": "b"}, {"b": [("a", 2)]}, 2)
        second = StepMap(1, 0, {"b": "a"}, {"a": [("b", 3)]}, 3)
        composite = first.then(second)
        self.assertEqual(composite.degree, 6)
        self.assertEqual(composite.dynamics, {"a": "a"})
        self.assertEqual(composite.preimages["a"], (("a", 6),))

    def test__then__regular_value_of_first(self):
        first = StepMap(0, 1, {}, {}, 2)
        second = StepMap(1, 0, {}, {"a": [(None, 2)]}, 2)
        composite = first.then(second)
        self.assertEqual(composite.preimages["a"], ((None, 2), (None, 2)))


class DecompositionTestCase(CorpusTestCase):
    corpus = ("levy-disk",)

    def setUp(self):
        super().setUp()
        self.f = self.maps["levy-disk"]
        self.curve = self.f.reference.pair_curve(2, 3)
        self.multicurve = Multicurve([self.curve])

    def test__codomain_pieces__one_curve(self):
        pieces, parents = codomain_pieces(self.multicurve, self.f.marked)
        self.assertEqual(parents, [None])
        self.assertEqual(pieces[0].labels, frozenset({0, 1}))
        self.assertEqual(pieces[1].labels, frozenset({2, 3}))
        self.assertEqual(pieces[0].caps, (cap(0),))
        self.assertEqual(pieces[1].punctures, (2, 3, cap(0)))

    def test__standard_form__levy_curve(self):
        sf = standard_form(self.f, self.multicurve)
        self.assertTrue(sf.verify())
        (annulus,) = sf.annuli
        self.assertEqual([p.degree for p in annulus.preimages], [1])

    def test__twist_modulus__levy_curve(self):
        lattice = twist_modulus(standard_form(self.f, self.multicurve))
        self.assertEqual(lattice.N, 1)
        self.assertEqual(lattice.system, sympy.Matrix([[0]]))
        self.assertIsNone(solve_twist_equation(lattice, (1,), (0,)))

    def test__decompose_along__inner_disk_is_homeomorphism(self):
        gluing = decompose_along(self.f, self.multicurve)
        self.assertEqual(len(gluing.pieces), 2)
        self.assertEqual(gluing.piece_map, {0: 0, 1: 1})
        inner = gluing.return_map_of(1)
        self.assertTrue(inner.is_homeomorphism)
        outer = gluing.return_map_of(0)
        self.assertFalse(outer.is_homeomorphism)
        self.assertEqual(outer.degree, self.f.degree)

    def test__first_return_maps__degrees_multiply(self):
        gluing = decompose_along(self.f, self.multicurve)
        for patched in gluing.first_return_maps():
            expected = 1
            for piece in patched.cycle:
                expected *= gluing.step_degree(piece)
            self.assertEqual(patched.degree, expected)

    def test__decompose__standard_form(self):
        gluing = decompose(standard_form(self.f, self.multicurve))
        self.assertEqual(gluing.piece_map, decompose_along(self.f, self.multicurve).piece_map)
        self.assertEqual(sorted(gluing.step_degree(X.index) for X in gluing.pieces), [1, 2])

    def test__decompose__patched_spheres(self):
        spheres = decompose_along(self.f, self.multicurve).patched_spheres
        self.assertEqual(len(spheres), 2)
        for sphere in spheres:
            self.assertEqual(sphere.exponents, {cap(0): 1})
        # marked points plus two caps per curve
        total = sum(len(sphere.punctures) for sphere in spheres)
        self.assertEqual(total, len(self.f.marked) + 2 * len(self.multicurve))


class StandardFormErrorsTestCase(CorpusTestCase):
    corpus = ("levy-two-cycle",)

    def test__standard_form__unstable_multicurve_raises_exc(self):
        f = self.maps["levy-two-cycle"]
        # the preimage holds the curve round the ends of the opposite ring edge
        multicurve = Multicurve([f.reference.pair_curve(2, 3)])
        self.assertFalse(is_stable(f, multicurve))
        with self.assertRaises(NotStable):
            standard_form(f, multicurve)
        self.assertTrue(issubclass(NotStable, DecompositionError))
