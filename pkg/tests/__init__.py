import random

from django.test import SimpleTestCase

from thurston.budget import Budget
from thurston.corpus import build


class CorpusTestCase(SimpleTestCase):
    """
    Builds the corpus maps once per test class.
    """

    corpus = ()

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.maps = {name: build(name) for name in cls.corpus}

    def setUp(self):
        self.random = random.Random(20240229)

    @staticmethod
    def small_budget(**kwargs):
        values = {"weight": 4, "word_length": 2, "seconds": 120}
        values.update(kwargs)
        return Budget(**values)

    def random_matrix(self, size, bound=5):
        return [[self.random.randint(-bound, bound) for _ in range(size)] for _ in range(size)]
