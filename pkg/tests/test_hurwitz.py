import itertools

from sympy.combinatorics import Permutation

from thurston.hurwitz import (
    MonodromyTuple,
    cycle_type,
    enumerate_tuples,
    hurwitz_classes,
    hurwitz_equivalent,
    hurwitz_orbit,
    monodromy_tuple,
)

from . import CorpusTestCase


def _tuple(perms, degree):
    return MonodromyTuple(range(len(perms)), perms, degree)


class MonodromyTestCase(CorpusTestCase):
    corpus = ("z2", "z3", "basilica", "lattes2")

    def test__monodromy_tuple__power_maps(self):
        for name, degree in (("z2", 2), ("z3", 3)):
            found = monodromy_tuple(self.maps[name])
            self.assertEqual(found.degree, degree)
            self.assertEqual(found.passport, ((degree,), (degree,)))
            self.assertTrue(found.product.is_Identity)

    def test__monodromy_tuple__basilica(self):
        found = monodromy_tuple(self.maps["basilica"])
        self.assertEqual(sorted(found.branch_values), [1, 4])
        self.assertEqual(found.passport, ((2,), (2,)))

    def test__monodromy_tuple__lattes(self):
        found = monodromy_tuple(self.maps["lattes2"])
        self.assertEqual(len(found), 3)
        self.assertEqual(set(found.passport), {(2, 2)})
        self.assertTrue(found.is_transitive)

    def test__hurwitz_equivalent__same_map(self):
        f = self.maps["basilica"]
        self.assertTrue(hurwitz_equivalent(f, f))
        found = hurwitz_equivalent(f, f, correspondence={1: 1, 4: 4})
        self.assertTrue(found)
        self.assertEqual(sorted(found.bijection), [0, 1])

    def test__hurwitz_equivalent__different_degree(self):
        self.assertFalse(hurwitz_equivalent(self.maps["z2"], self.maps["z3"]))


class HurwitzClassTestCase(CorpusTestCase):
    def test__hurwitz_classes__simple_cubics(self):
        classes = hurwitz_classes(3, [(2, 1)] * 4)
        self.assertEqual(len(classes), 1)

    def test__hurwitz_classes__three_cycles(self):
        classes = hurwitz_classes(3, [(3,)] * 3)
        self.assertEqual(len(classes), 1)
        (only,) = classes
        self.assertEqual(len(only), 1)

    def test__hurwitz_equivalent__passports_differ(self):
        x = Permutation([[0, 1, 2]], size=4)
        y = Permutation([[0, 3, 1]], size=4)
        y_prime = Permutation([[0, 1, 3]], size=4)
        first = _tuple([x, y, (x * y) ** -1], 4)
        second = _tuple([x, y_prime, (x * y_prime) ** -1], 4)
        self.assertEqual(cycle_type((x * y) ** -1), (3, 1))
        self.assertEqual(cycle_type((x * y_prime) ** -1), (2, 2))
        self.assertFalse(hurwitz_equivalent(first, second))

    def test__hurwitz_equivalent__agrees_with_classes(self):
        types = [(3, 1)] * 3
        classes = hurwitz_classes(4, types)
        class_of = {key: i for i, c in enumerate(classes) for key in c}
        tuples = sorted(enumerate_tuples(4, types))
        for a, b in itertools.combinations(tuples, 2):
            found = hurwitz_equivalent(_tuple(a, 4), _tuple(b, 4))
            self.assertEqual(bool(found), class_of[a] == class_of[b], (a, b))

    def test__hurwitz_orbit__contains_start(self):
        x = Permutation([[0, 1]], size=3)
        y = Permutation([[1, 2]], size=3)
        start = _tuple([x, x, y, y], 3)
        self.assertIn(start.canonical(), hurwitz_orbit(start))
