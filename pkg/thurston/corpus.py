"""
Builders of the bundled example maps.

Power maps live on bipyramids: the poles are ``0`` and ``infinity`` and the
ring of the domain winds ``degree`` times round the ring of the codomain. A
placement tells where each domain ring vertex sits on the codomain ring,
which fixes the identification of the two spheres. Pillowcase maps are
quotients of ``z -> n z + b`` on the half-integer grid.
"""
import logging
from fractions import Fraction

from thurston.cover import build_pl_map
from thurston.parabolic import CORNERS, AffineQuotient, same_class
from thurston.surface import (
    MarkedSphere,
    Triangulation,
    build_triangulation,
    standard_sphere,
)

logger = logging.getLogger(__name__)

SOUTH, NORTH = 0, 1
VERTEX, EDGE = "vertex", "edge"


def _ring(j):
    return 2 + j


def _circle_map(degree, equator, placement, marked_ring=(), poles=(SOUTH, NORTH)):
    """
    ``placement[i]`` is ``(VERTEX, j)`` when domain ring vertex ``i`` sits
    at codomain ring vertex ``j`` and ``(EDGE, j)`` when it sits inside the
    ring edge from ``j`` to ``j + 1``. Ring vertex ``i`` maps to ring
    vertex ``i mod equator``.
    """
    size = degree * equator
    t0 = standard_sphere(equator + 2)
    t1 = standard_sphere(size + 2)
    vertex_image = [SOUTH, NORTH] + [_ring(i % equator) for i in range(size)]
    triangle_image, parent = [], []
    for t in t1.triangles:
        (pole,) = set(t) & {SOUTH, NORTH}
        ends = sorted(v - 2 for v in t if v != pole)
        # the ring edge leaving vertex i
        i = ends[1] if ends == [0, size - 1] else ends[0]
        image = frozenset(vertex_image[v] for v in t)
        triangle_image.append(t0.by_vertex_set[image])
        _, j = placement[i]
        parent.append(t0.by_vertex_set[frozenset((pole, _ring(j), _ring((j + 1) % equator)))])
    at = {j: _ring(i) for i, (kind, j) in enumerate(placement) if kind == VERTEX}
    codomain_marked = list(poles) + [_ring(j) for j in marked_ring]
    domain_marked = list(poles) + [at[j] for j in marked_ring]
    return build_pl_map(
        MarkedSphere(t1, domain_marked),
        MarkedSphere(t0, codomain_marked),
        vertex_image,
        triangle_image,
        parent,
    )


def uniform_placement(degree, equator):
    return [
        (VERTEX if i % degree == 0 else EDGE, i // degree) for i in range(degree * equator)
    ]


def power_map(degree=2, equator=3, mark_fixed=False, mark_ring=False):
    """
    ``z -> z^degree`` marked at ``0`` and ``infinity``, and at the fixed
    point ``1`` with ``mark_fixed``. With ``mark_ring`` every codomain ring
    vertex is marked; for ``degree`` prime to ``equator`` they are the
    roots of unity of order ``equator``, which the map permutes.
    """
    if mark_ring:
        ring = tuple(range(equator))
    else:
        ring = (0,) if mark_fixed else ()
    return _circle_map(degree, equator, uniform_placement(degree, equator), ring)


def inserted_disk_map(degree=2, equator=3):
    """
    A power map with a disk inserted at the fixed point ``1``: the ring edge
    from ``a`` to ``b`` is mapped onto itself, so both ends are fixed and
    the curve round them is a degenerate Levy cycle.
    """
    size = degree * equator
    placement = [(VERTEX, 0), (VERTEX, 1)]
    slots = {2 * j - 1: j for j in range(2, equator)}
    current = 1
    for i in range(2, size):
        if i in slots:
            current = slots[i]
            placement.append((VERTEX, current))
        else:
            placement.append((EDGE, current))
    return _circle_map(degree, equator, placement, (0, 1))


def levy_two_cycle_map():
    """
    ``z^2`` on a ring of four vertices placed so that the ring edges
    ``0`` and ``2`` are swapped homeomorphically: the curves round their
    ends form a degenerate Levy cycle of length two.
    """
    placement = [
        (EDGE, 3),
        (EDGE, 3),
        (VERTEX, 0),
        (VERTEX, 1),
        (VERTEX, 2),
        (VERTEX, 3),
        (EDGE, 3),
        (EDGE, 3),
    ]
    return _circle_map(2, 4, placement, (0, 1, 2, 3))


def basilica_map():
    """
    ``z -> z^2 - 1`` on the real line model: ring ``-2, -1, 0, 1, inf``
    with the half-planes coned off. With three marked points every
    identification of the spheres is isotopic, so none is stored.
    """
    # codomain: -2 -1 0 1 inf on the ring, then the upper and lower cone points
    ring = [0, 1, 2, 3, 4]
    upper, lower = 5, 6
    t0 = build_triangulation(
        [(a, b, upper) for a, b in zip(ring, ring[1:] + ring[:1])]
        + [(b, a, lower) for a, b in zip(ring, ring[1:] + ring[:1])]
    )
    # domain: 0 1 sqrt2 inf i -1 -sqrt2 -i and a cone point per quadrant
    quadrants = [
        ((0, 1, 2, 3, 4), 8),
        ((0, 4, 3, 6, 5), 9),
        ((0, 5, 6, 3, 7), 10),
        ((0, 7, 3, 2, 1), 11),
    ]
    triples = []
    for boundary, centre in quadrants:
        for a, b in zip(boundary, boundary[1:] + boundary[:1]):
            triples.append((a, b, centre))
    t1 = build_triangulation(triples)
    vertex_image = [1, 2, 3, 4, 0, 2, 3, 0, upper, lower, upper, lower]
    triangle_image = [t0.by_vertex_set[frozenset(vertex_image[v] for v in t)] for t in t1.triangles]
    return build_pl_map(
        MarkedSphere(t1, [5, 0, 3]),
        MarkedSphere(t0, [1, 2, 4]),
        vertex_image,
        triangle_image,
    )


# pillowcase


class PillowcaseGrid:
    """
    The grid ``(1/2k) Z^2`` with diagonals of slope one, modulo unit
    translations and ``z -> -z``. Points are integer pairs in units of
    ``1/2k``; the corners ``0, 1/2, i/2, (1+i)/2`` get the ids ``0 .. 3``.
    """

    def __init__(self, k):
        self.k = k
        self.period = 2 * k
        points = {self.canonical((x, y)) for x in range(self.period) for y in range(self.period)}
        corners = [(0, 0), (k, 0), (0, k), (k, k)]
        rest = sorted(points - set(corners))
        self.points = corners + rest
        self.ids = {p: i for i, p in enumerate(self.points)}
        triples, self.lifts = [], []
        seen = set()
        for x in range(self.period):
            for y in range(self.period):
                for lift in (
                    ((x, y), (x + 1, y), (x + 1, y + 1)),
                    ((x, y), (x + 1, y + 1), (x, y + 1)),
                ):
                    triple = tuple(self.id_of(p) for p in lift)
                    if frozenset(triple) in seen:
                        continue
                    seen.add(frozenset(triple))
                    triples.append(triple)
                    self.lifts.append(lift)
        self.tri: Triangulation = build_triangulation(triples, len(self.points))

    def __repr__(self):
        return "PillowcaseGrid(k={})".format(self.k)

    def canonical(self, p):
        n = self.period
        a = (p[0] % n, p[1] % n)
        b = (-p[0] % n, -p[1] % n)
        return min(a, b)

    def id_of(self, p):
        return self.ids[self.canonical(p)]

    def triangle_at(self, point):
        """
        The triangle holding a point given in plane coordinates (units of
        ``1/2k``, rationals allowed) off the grid lines.
        """
        i, j = int(point[0] // 1), int(point[1] // 1)
        u, v = point[0] - i, point[1] - j
        if u > v:
            lift = ((i, j), (i + 1, j), (i + 1, j + 1))
        else:
            lift = ((i, j), (i + 1, j + 1), (i, j + 1))
        return self.tri.by_vertex_set[frozenset(self.id_of(p) for p in lift)]


def pillowcase_map(scale=2, shift=(0, 0), grid=1, marked=()):
    """
    The quotient of ``z -> scale * z + shift`` for an integer ``scale >= 2``
    and ``shift`` in ``(1/2) Z^2``, marked at the four corners and at the
    plane points ``marked``, which must lie on the codomain grid
    ``(1/2 grid) Z^2``.
    """
    shift = tuple(Fraction(s) for s in shift)
    B = tuple(int(2 * grid * s) for s in shift)
    if any(2 * s != int(2 * s) for s in shift):
        raise ValueError("The shift must be a half-integer vector.")
    coarse, fine = PillowcaseGrid(grid), PillowcaseGrid(grid * scale)
    # a fine point p / 2kn maps to p / 2k + shift, that is p + B in coarse units
    vertex_image = [coarse.id_of((x + B[0], y + B[1])) for x, y in fine.points]
    triangle_image, parent = [], []
    for t, lift in zip(fine.tri.triangles, fine.lifts):
        triangle_image.append(coarse.tri.by_vertex_set[frozenset(vertex_image[v] for v in t)])
        centre = tuple(Fraction(sum(p[c] for p in lift), 3 * scale) for c in (0, 1))
        parent.append(coarse.triangle_at(centre))
    codomain_marked, domain_marked = [0, 1, 2, 3], [0, 1, 2, 3]
    for z in marked:
        at = tuple(Fraction(c) * coarse.period for c in z)
        if any(c.denominator != 1 for c in at):
            raise ValueError("{} is not a point of the grid.".format(z))
        label = coarse.id_of(at)
        if label in codomain_marked:
            continue
        codomain_marked.append(label)
        domain_marked.append(fine.id_of(tuple(c * scale for c in at)))
    f = build_pl_map(
        MarkedSphere(fine.tri, domain_marked),
        MarkedSphere(coarse.tri, codomain_marked),
        vertex_image,
        triangle_image,
        parent,
    )
    logger.debug("pillowcase map %s z + %s", scale, [str(s) for s in shift])
    return f


def lattes_map():
    return pillowcase_map(2, (0, 0))


# name -> builder of the bundled corpus
CORPUS = {
    "z2": lambda: power_map(2),
    "z3": lambda: power_map(3),
    "z2-fixed": lambda: power_map(2, mark_fixed=True),
    "z2-ring": lambda: power_map(2, mark_ring=True),
    "basilica": basilica_map,
    "lattes2": lattes_map,
    "lattes2-shifted": lambda: pillowcase_map(2, (Fraction(1, 2), 0)),
    "lattes2-marked": lambda: pillowcase_map(2, grid=2, marked=[(Fraction(1, 4), 0)]),
    "levy-disk": inserted_disk_map,
    "levy-two-cycle": levy_two_cycle_map,
}


def corner_quotient(A, b=(0, 0)):
    """
    The affine quotient of ``z -> A z + b`` marked at the four corners of
    the pillowcase.
    """
    lifts = dict(enumerate(CORNERS))
    probe = AffineQuotient(A, b, lifts, {x: x for x in lifts})
    dynamics = {}
    for x in lifts:
        image = probe(probe.lifts[x])
        dynamics[x] = next(y for y, w in probe.lifts.items() if same_class(image, w))
    return AffineQuotient(A, b, lifts, dynamics).validate()


# affine sections without a PL map
AFFINE_CORPUS = {
    "affine-2z": lambda: corner_quotient([[2, 0], [0, 2]]),
    "affine-1-i": lambda: corner_quotient([[1, 1], [-1, 1]]),
    "affine-3112": lambda: corner_quotient([[3, 1], [1, 2]]),
}


def build(name):
    if name in AFFINE_CORPUS:
        return AFFINE_CORPUS[name]()
    return CORPUS[name]()
