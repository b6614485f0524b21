from fractions import Fraction

import sympy

from thurston.corpus import corner_quotient, pillowcase_map
from thurston.curves import IDENTITY, apply_mapping_class, dehn_twist
from thurston.exceptions import (
    BadMatrix,
    NotInGeneratingSet,
    NotParabolic,
    NotPeriodic,
    ParabolicError,
    UnsupportedMarking,
)
from thurston.matrices import IDENTITY_2
from thurston.parabolic import (
    CORNERS,
    FIXED_POINT,
    GEOMETRIZABLE,
    LEVY,
    AffineQuotient,
    affine_equivalence,
    centralizer_residues,
    classify_parabolic,
    extract_affine_model,
    find_levy_pair,
    geometrize,
    homology_action,
    lattice_escape_time,
    lift_rmcg_twist,
    lifting_rounds,
    nielsen_index,
    point,
    same_class,
    same_nielsen_class,
    slope,
)

from . import CorpusTestCase

THIRD = sympy.Rational(1, 3)


class AffineQuotientTestCase(CorpusTestCase):
    def test__corner_quotient__doubling(self):
        m = corner_quotient([[2, 0], [0, 2]])
        self.assertEqual(m.degree, 4)
        self.assertEqual(m.dynamics, {0: 0, 1: 0, 2: 0, 3: 0})
        self.assertEqual(m.periodic_labels, (0,))
        self.assertEqual(m.q, 2)

    def test__corner_quotient__rotation_cycle(self):
        m = corner_quotient([[3, 1], [1, 2]])
        self.assertEqual(m.dynamics, {0: 0, 1: 3, 3: 2, 2: 1})
        self.assertEqual(m.period(1), 3)

    def test__validate__small_determinant_raises_exc(self):
        with self.assertRaises(BadMatrix):
            AffineQuotient([[1, 1], [0, 1]], (0, 0), {0: (0, 0)}, {0: 0}).validate()

    def test__validate__unrelated_lift_raises_exc(self):
        m = AffineQuotient([[2, 0], [0, 2]], (0, 0), {0: (0, 0), 1: (THIRD, 0)}, {0: 0, 1: 0})
        with self.assertRaises(ParabolicError):
            m.validate()

    def test__same_class__symmetry(self):
        self.assertTrue(same_class(point((THIRD, 0)), point((2 * THIRD, 0))))
        self.assertFalse(same_class(point((THIRD, 0)), point((THIRD, THIRD))))


class LatticeDynamicsTestCase(CorpusTestCase):
    def test__lattice_escape_time__doubling(self):
        A = [[2, 0], [0, 2]]
        self.assertEqual(lattice_escape_time(A, (0, 0), (1, 0)), 1)
        self.assertEqual(lattice_escape_time(A, (0, 0), (2, 0)), 2)
        self.assertEqual(lattice_escape_time(A, (0, 0), (4, 4)), 3)
        self.assertIs(lattice_escape_time(A, (0, 0), (0, 0)), FIXED_POINT)

    def test__lattice_escape_time__unit_eigenvalue_raises_exc(self):
        with self.assertRaises(BadMatrix):
            lattice_escape_time([[2, 0], [0, 1]], (0, 0), (1, 0))

    def test__nielsen_index__fixed_corner(self):
        m = corner_quotient([[2, 0], [0, 2]])
        index = nielsen_index(m, 0)
        self.assertEqual(index.period, 1)
        self.assertEqual(index.element.sign, 1)
        with self.assertRaises(NotPeriodic):
            nielsen_index(m, 1)

    def test__same_nielsen_class__distinct_fixed_points(self):
        m = AffineQuotient(
            [[2, 0], [0, 2]], (0, 0), {0: (0, 0), 1: (THIRD, 0)}, {0: 0, 1: 1}
        ).validate()
        self.assertTrue(same_nielsen_class(m, 0, 0))
        self.assertFalse(same_nielsen_class(m, 0, 1))
        self.assertIsNone(find_levy_pair(m))

    def test__centralizer_residues__commute_with_matrix(self):
        A = sympy.Matrix([[3, 1], [1, 2]])
        residues = centralizer_residues(A, 4)
        self.assertEqual(residues[0], IDENTITY_2)
        keys = {tuple(x % 4 for x in C) for C in residues}
        self.assertEqual(len(keys), len(residues))
        for C in residues:
            self.assertEqual(abs(C.det()), 1)
            self.assertEqual(C * A, A * C)
        self.assertIn((3, 0, 0, 3), keys)

    def test__find_levy_pair__tripling_corners(self):
        self.assertIsNone(find_levy_pair(corner_quotient([[3, 0], [0, 3]])))


class GeometrizeTestCase(CorpusTestCase):
    def test__geometrize__corner_model_is_its_own(self):
        m = corner_quotient([[2, 0], [0, 2]])
        model = geometrize(m)
        self.assertEqual(model, m)
        self.assertEqual(model.lifts[0], point((0, 0)))

    def test__affine_equivalence__self(self):
        m = corner_quotient([[2, 0], [0, 2]])
        witness = affine_equivalence(m, m)
        self.assertIsNotNone(witness)
        self.assertTrue(witness.holds(m, m))

    def test__affine_equivalence__conjugate_matrices(self):
        S = sympy.ImmutableMatrix([[1, 1], [0, 1]])
        A = sympy.ImmutableMatrix([[3, 1], [1, 2]])
        m1 = corner_quotient(A)
        m2 = corner_quotient(S * A * S.inv())
        witness = affine_equivalence(m1, m2)
        self.assertIsNotNone(witness)
        self.assertTrue(witness.holds(m1, m2))

    def test__affine_equivalence__different_degree(self):
        m1 = corner_quotient([[2, 0], [0, 2]])
        m2 = corner_quotient([[3, 0], [0, 3]])
        self.assertIsNone(affine_equivalence(m1, m2))


class ClassifyTestCase(CorpusTestCase):
    corpus = ("z2", "z2-fixed", "basilica", "lattes2", "levy-disk")

    def test__extract_affine_model__lattes(self):
        model = extract_affine_model(self.maps["lattes2"])
        self.assertIn(model.A, (2 * IDENTITY_2, -2 * IDENTITY_2))
        self.assertEqual(model.b, point((0, 0)))
        self.assertEqual(model.degree, 4)

    def test__classify_parabolic__lattes_is_geometrizable(self):
        result = classify_parabolic(self.maps["lattes2"], self.small_budget())
        self.assertEqual(result.outcome, GEOMETRIZABLE)
        self.assertTrue(result.decided)
        self.assertEqual(result.orbifold.signature_text, "(2,2,2,2)")

    def test__classify_parabolic__few_marked_points(self):
        for name in ("z2", "z2-fixed"):
            result = classify_parabolic(self.maps[name], self.small_budget())
            self.assertEqual(result.outcome, GEOMETRIZABLE, name)

    def test__classify_parabolic__inserted_disk(self):
        result = classify_parabolic(self.maps["levy-disk"], self.small_budget())
        self.assertEqual(result.outcome, LEVY)
        self.assertTrue(result.witness.degenerate)

    def test__classify_parabolic__hyperbolic_raises_exc(self):
        with self.assertRaises(NotParabolic):
            classify_parabolic(self.maps["basilica"])


class PillowcaseTestCase(CorpusTestCase):
    corpus = ("lattes2",)

    def setUp(self):
        super().setUp()
        self.f = self.maps["lattes2"]
        self.horizontal = self.f.reference.pair_curve(0, 1)
        self.vertical = self.f.reference.pair_curve(0, 2)

    def test__slope__standard_curves(self):
        self.assertEqual(slope(self.horizontal), (1, 0))
        self.assertEqual(slope(self.vertical), (0, 1))
        twisted = apply_mapping_class(dehn_twist(self.horizontal), self.vertical)
        self.assertEqual(slope(twisted), (2, 1))

    def test__homology_action__doubling(self):
        self.assertIn(homology_action(self.f), (2 * IDENTITY_2, -2 * IDENTITY_2))

    def test__lift_rmcg_twist__square_twist(self):
        lifted = lift_rmcg_twist(self.f, dehn_twist(self.horizontal, 2))
        self.assertGreaterEqual(len(lifted), 1)
        for curve, _ in lifted:
            # z -> 2z preserves slopes
            self.assertEqual(curve, self.horizontal)

    def test__lift_rmcg_twist__odd_twist_raises_exc(self):
        with self.assertRaises(NotInGeneratingSet):
            lift_rmcg_twist(self.f, dehn_twist(self.horizontal, 1))

    def test__lift_rmcg_twist__parallel_preimages_collected(self):
        lifted = lift_rmcg_twist(self.f, dehn_twist(self.horizontal, 2))
        self.assertEqual(list(lifted), [(self.horizontal, 2)])

    def test__lifting_rounds__square_twist_survives(self):
        self.assertEqual(lifting_rounds(self.f, IDENTITY), 0)
        self.assertIsNone(lifting_rounds(self.f, dehn_twist(self.horizontal, 2), rounds=3))


class RingLiftingTestCase(CorpusTestCase):
    corpus = ("z2-ring",)

    def setUp(self):
        super().setUp()
        self.f = self.maps["z2-ring"]
        self.first = self.f.reference.pair_curve(2, 3)
        self.second = self.f.reference.pair_curve(3, 4)

    def test__power_map__ring_is_marked(self):
        self.assertEqual(len(self.f.marked), 5)
        self.assertEqual(set(self.f.portrait.postcritical), {0, 1})

    def test__lift_rmcg_twist__peripheral_preimages(self):
        self.assertTrue(lift_rmcg_twist(self.f, dehn_twist(self.first)).is_empty())

    def test__lifting_rounds__reaches_identity(self):
        words = [
            dehn_twist(self.first),
            dehn_twist(self.second, -1),
            dehn_twist(self.first, 2).then(dehn_twist(self.second)),
        ]
        for word in words:
            self.assertEqual(lifting_rounds(self.f, word), 1, word)


class MarkedPillowcaseTestCase(CorpusTestCase):
    corpus = ("lattes2-marked",)

    def setUp(self):
        super().setUp()
        self.f = self.maps["lattes2-marked"]
        (self.x,) = set(self.f.marked) - set(self.f.portrait.postcritical)

    def test__pillowcase_map__extra_point_is_critical(self):
        self.assertEqual(len(self.f.marked), 5)
        self.assertEqual(set(self.f.portrait.postcritical), {0, 1, 2, 3})
        self.assertEqual(self.f.marked_dynamics[self.x], 1)
        self.assertEqual(self.f.portrait.local_degree(self.x), 2)

    def test__extract_affine_model__pre_periodic_point(self):
        model = extract_affine_model(self.f)
        self.assertIn(model.A, (2 * IDENTITY_2, -2 * IDENTITY_2))
        self.assertEqual(model.degree, 4)
        self.assertEqual(model.q, 4)
        self.assertIsNone(model.period(self.x))
        lift = model.lifts[self.x]
        self.assertFalse(any(same_class(lift, point(c)) for c in CORNERS))
        self.assertTrue(same_class(model(lift), model.lifts[1]))

    def test__classify_parabolic__marked_lattes_is_geometrizable(self):
        result = classify_parabolic(self.f, self.small_budget())
        self.assertEqual(result.outcome, GEOMETRIZABLE)
        self.assertEqual(result.orbifold.signature_text, "(2,2,2,2)")
        self.assertEqual(set(result.model.labels), set(self.f.marked))
        self.assertEqual(result.model.periodic_labels, (0,))

    def test__extract_affine_model__rotated_marking_is_conjugate(self):
        g = pillowcase_map(2, grid=2, marked=[(0, Fraction(1, 4))])
        first = geometrize(extract_affine_model(self.f))
        second = geometrize(extract_affine_model(g))
        witness = affine_equivalence(first, second, orientation_preserving=True)
        self.assertIsNotNone(witness)
        self.assertTrue(witness.holds(first, second))
        self.assertEqual(witness.bijection[self.x], next(iter(set(g.marked) - {0, 1, 2, 3})))

    def test__extract_affine_model__twisted_marking_raises_exc(self):
        curve = self.f.reference.pair_curve(0, 1)
        with self.assertRaises(UnsupportedMarking):
            extract_affine_model(self.f.with_twist(dehn_twist(curve, 2)))
