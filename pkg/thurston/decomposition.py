"""
Decomposition of a Thurston map along a stable multicurve.

Everything is computed on isotopy classes. The thick parts of the codomain
are the nodes of the laminar tree of the multicurve's insides; the pieces
of the domain are cut out by the whole preimage of the multicurve, nested by
the sets of points of ``f^-1(Q)`` they enclose. Each thick part is patched
with one cap puncture per boundary curve, and the dynamics on patched pieces
is recorded as a branch portrait.
"""
import logging
from collections import defaultdict
from functools import cached_property
from math import lcm

import sympy
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.polys.domains import ZZ

from thurston.cover import (
    Portrait,
    domain_sides,
    left_vertex,
    orbifold_data,
    pullback_curve,
    special_vertices,
)
from thurston.curves import IDENTITY, Multicurve
from thurston.exceptions import BudgetExceeded, NotNested, NotStable
from thurston.obstruction import is_stable, thurston_matrix
from thurston.surface import MarkedSphere, standard_sphere, walk_parity

logger = logging.getLogger(__name__)

ROOT = 0


def cap(j):
    """
    The puncture replacing the disk beyond the ``j``-th curve.
    """
    return ("cap", j)


class PreimageAnnulus:
    """
    A component of ``f^-1(curve j)``. ``klass`` is the index of the curve
    of the multicurve it is homotopic to, ``None`` when it is inessential;
    ``inside`` is the set of points of ``f^-1(Q)`` it encloses.
    """

    def __init__(self, index, j, preimage, outside, inside, klass):
        self.index = index
        self.j = j
        self.curve = preimage.curve
        self.degree = preimage.degree
        self.walk = preimage.walk
        self.outside = outside
        self.inside = inside
        self.klass = klass
        self.rank = None

    def __repr__(self):
        return "PreimageAnnulus(j={}, class={}, degree={}, rank={})".format(
            self.j, self.klass, self.degree, self.rank
        )

    @property
    def is_essential(self):
        return self.curve.is_essential


class Annulus:
    def __init__(self, j, curve, preimages):
        self.j = j
        self.curve = curve
        self.preimages = tuple(sorted(preimages, key=lambda p: p.rank))

    def __repr__(self):
        return "Annulus({}, {} preimage annuli)".format(self.j, len(self.preimages))


class StandardForm:
    """
    A map with a stable multicurve and every preimage annulus assigned to
    the annulus of its class. ``witness`` is the word conjugating the input
    map to ``map``.
    """

    def __init__(self, f, multicurve, components, witness=IDENTITY):
        self.map = f
        self.multicurve = multicurve
        self.components = tuple(components)
        self.witness = witness

    def __repr__(self):
        return "StandardForm({!r}, {} preimage annuli)".format(
            self.multicurve, len(self.components)
        )

    @cached_property
    def annuli(self):
        return tuple(
            Annulus(j, curve, [p for p in self.components if p.klass == j])
            for j, curve in enumerate(self.multicurve)
        )

    def verify(self) -> bool:
        """
        Every essential preimage annulus lies in the annulus of its class,
        and the annuli of one class are nested, outermost first.
        """
        for p in self.components:
            if p.is_essential and p.klass is None:
                return False
        for annulus in self.annuli:
            insides = [p.inside for p in annulus.preimages]
            if any(not inner < outer for outer, inner in zip(insides, insides[1:])):
                return False
        return True


def standard_form(f, multicurve, budget=None) -> StandardForm:
    multicurve = Multicurve.sorted(multicurve)
    if not is_stable(f, multicurve):
        raise NotStable("{!r} is not stable, so no standard form exists.".format(multicurve))
    components = []
    for j, curve in enumerate(multicurve):
        for preimage in pullback_curve(f, curve):
            outside, inside = domain_sides(f, preimage.walk)
            klass = multicurve.index(preimage.curve) if preimage.curve in multicurve else None
            components.append(PreimageAnnulus(len(components), j, preimage, outside, inside, klass))
    for j in range(len(multicurve)):
        same = sorted(
            (p for p in components if p.klass == j), key=lambda p: (-len(p.inside), p.index)
        )
        for rank, p in enumerate(same):
            p.rank = rank
    sf = StandardForm(f, multicurve, components)
    if not sf.verify():
        raise NotNested("The preimage annuli of {!r} do not nest.".format(multicurve))
    logger.debug("%r", sf)
    return sf


# codomain pieces


class Piece:
    """
    A thick part of the codomain. Piece ``j + 1`` lies just inside curve
    ``j``; piece 0 holds the first marked point.
    """

    def __init__(self, index, labels, outer, children):
        self.index = index
        self.labels = frozenset(labels)
        self.outer = outer
        self.children = tuple(children)

    def __repr__(self):
        return "Piece({}, labels={}, boundary={})".format(
            self.index, sorted(self.labels), list(self.boundary)
        )

    @property
    def boundary(self):
        return ((self.outer,) if self.outer is not None else ()) + self.children

    @property
    def caps(self):
        return tuple(cap(j) for j in self.boundary)

    @property
    def punctures(self):
        return tuple(sorted(self.labels)) + self.caps


def _laminar_parents(insides):
    """
    For each set, the index of the least set strictly containing it.
    """
    parents = []
    for i, inside in enumerate(insides):
        containing = [k for k, other in enumerate(insides) if k != i and inside < other]
        parents.append(min(containing, key=lambda k: len(insides[k])) if containing else None)
    return parents


def codomain_pieces(multicurve, labels):
    insides = [frozenset(c.inside) for c in multicurve]
    parents = _laminar_parents(insides)
    pieces = []
    for index in range(len(insides) + 1):
        j = index - 1 if index else None
        children = [k for k, p in enumerate(parents) if p == j]
        region = insides[j] if j is not None else frozenset(labels)
        for k in children:
            region = region - insides[k]
        pieces.append(Piece(index, region, j, children))
    return pieces, parents


# domain pieces


class DomainPiece:
    def __init__(self, index, outer, children, special):
        self.index = index
        self.outer = outer
        self.children = tuple(children)
        self.special = frozenset(special)

    def __repr__(self):
        return "DomainPiece({}, outer={}, children={})".format(
            self.index, self.outer, list(self.children)
        )

    @property
    def boundary(self):
        return ((self.outer,) if self.outer is not None else ()) + self.children


class StepMap:
    """
    The patched map from one thick part to the next, as branch data:
    ``dynamics`` on the punctures of the source and ``preimages[y]`` the
    ``(puncture or None, local degree)`` over the puncture ``y`` of the
    target.
    """

    def __init__(self, source, target, dynamics, preimages, degree):
        self.source = source
        self.target = target
        self.dynamics = dict(dynamics)
        self.preimages = {y: tuple(v) for y, v in preimages.items()}
        self.degree = degree

    def __repr__(self):
        return "StepMap({} -> {}, degree={})".format(self.source, self.target, self.degree)

    def then(self, second):
        """
        ``second o self``.
        """
        dynamics = {x: second.dynamics[y] for x, y in self.dynamics.items()}
        preimages = defaultdict(list)
        for z, listed in second.preimages.items():
            for y, d in listed:
                if y is None:
                    # not a critical value of self, so every preimage is regular
                    preimages[z].extend([(None, d)] * self.degree)
                    continue
                below = self.preimages.get(y, ())
                preimages[z].extend((x, d * e) for x, e in below)
                if d > 1:
                    preimages[z].extend([(None, d)] * (self.degree - sum(e for _, e in below)))
        return StepMap(self.source, second.target, dynamics, preimages, self.degree * second.degree)


class PatchedMap:
    """
    The composite of the step maps round a periodic cycle of thick parts.
    """

    is_homeomorphism = False

    def __init__(self, piece, cycle, step, punctures):
        self.piece = piece
        self.cycle = tuple(cycle)
        self.degree = step.degree
        self.portrait = Portrait(punctures, step.dynamics, step.preimages, step.degree)

    def __repr__(self):
        return "{}(piece={}, cycle={}, degree={})".format(
            type(self).__name__, self.piece, list(self.cycle), self.degree
        )

    @cached_property
    def orbifold(self):
        return orbifold_data(self.portrait)

    @property
    def postcritical(self):
        return self.portrait.postcritical


class Homeomorphism(PatchedMap):
    """
    A first-return map of degree one: not a Thurston map.
    """

    is_homeomorphism = True


class PatchedSphere:
    """
    A thick part with one cap puncture per boundary curve; ``exponents``
    maps each cap to the local degree of the step map there.
    """

    def __init__(self, piece, exponents):
        self.piece = piece
        self.exponents = dict(exponents)

    def __repr__(self):
        return "PatchedSphere({}, punctures={})".format(self.piece.index, list(self.punctures))

    @property
    def punctures(self):
        return self.piece.punctures

    @cached_property
    def vertex_of(self):
        return {x: v for v, x in enumerate(self.punctures)}

    @cached_property
    def sphere(self) -> MarkedSphere:
        n = len(self.punctures)
        return MarkedSphere(standard_sphere(max(n, 4)), range(n))


class GluingData:
    """
    Thick parts, how the domain pieces map onto them, and the periodic
    cycles with their first-return maps.
    """

    def __init__(self, sf: StandardForm):
        self.standard_form = sf
        f = sf.map
        self.map = f
        self.multicurve = sf.multicurve
        self.pieces, self.curve_parents = codomain_pieces(self.multicurve, f.marked)
        self.label_of = dict(zip(f.domain.marked, f.codomain.marked))
        self.domain_pieces = self._domain_pieces()
        self.main = self._main_pieces()
        self.steps = {X.index: self._step(X) for X in self.pieces}
        self.piece_map = {i: step.target for i, step in self.steps.items()}

    def __repr__(self):
        return "GluingData({} pieces, cycles={})".format(len(self.pieces), self.cycles)

    # codomain side

    def piece_of_label(self, x):
        for piece in self.pieces:
            if x in piece.labels:
                return piece.index
        raise KeyError(x)

    def locate(self, curve):
        """
        The thick part holding a curve disjoint from the multicurve.
        """
        inside = frozenset(curve.inside)
        containing = [
            j for j, c in enumerate(self.multicurve) if inside < frozenset(c.inside)
        ]
        if not containing:
            return ROOT
        return min(containing, key=lambda j: len(self.multicurve[j].inside)) + 1

    def outside_of(self, j):
        parent = self.curve_parents[j]
        return ROOT if parent is None else parent + 1

    @property
    def adjacency(self):
        """
        ``(outer piece, inner piece, curve index)`` per curve.
        """
        return tuple((self.outside_of(j), j + 1, j) for j in range(len(self.multicurve)))

    # domain side

    def _domain_pieces(self):
        components = self.standard_form.components
        insides = [p.inside for p in components]
        parents = _laminar_parents(insides)
        special = special_vertices(self.map)
        pieces = []
        for index in range(len(components) + 1):
            k = index - 1 if index else None
            children = [c for c, p in enumerate(parents) if p == k]
            region = insides[k] if k is not None else special
            for c in children:
                region = region - insides[c]
            pieces.append(DomainPiece(index, k, children, region))
        return pieces

    def _far_side(self, piece, c):
        component = self.standard_form.components[c]
        return component.outside if c == piece.outer else component.inside

    def _labels_in(self, vertices):
        return frozenset(self.label_of[v] for v in vertices if v in self.label_of)

    def _filled(self, piece):
        """
        Boundary classes and labels of a domain piece with the disks beyond
        its inessential boundaries filled in, or ``None`` when the piece
        lies in such a disk.
        """
        labels = set(self._labels_in(piece.special))
        classes = []
        for c in piece.boundary:
            component = self.standard_form.components[c]
            far = self._labels_in(self._far_side(piece, c))
            if component.is_essential:
                classes.append(component.klass)
            elif len(far) <= 1:
                labels |= far
            else:
                return None
        return tuple(sorted(classes)), frozenset(labels)

    def _main_pieces(self):
        main = {}
        for P in self.domain_pieces:
            filled = self._filled(P)
            if filled is None:
                continue
            for X in self.pieces:
                if filled == (tuple(sorted(X.boundary)), X.labels) and X.index not in main:
                    main[X.index] = P
        missing = [X.index for X in self.pieces if X.index not in main]
        if missing:
            raise BudgetExceeded("No domain piece matches the thick parts {}.".format(missing))
        return main

    def image_of(self, P):
        """
        The thick part a domain piece maps into.
        """
        f = self.map
        if P.special:
            v = min(P.special)
            return self.piece_of_label(f.vertex_image[v])
        # no point of f^-1(Q): compare the sides of the outer boundary
        component = self.standard_form.components[P.outer]
        walk = component.walk
        tri = f.domain.tri
        parity = walk_parity(tri, walk, f.domain.marked[0])
        inside_on_left = parity[left_vertex(tri, walk)] == 1
        image = self.multicurve[component.j]
        reference = f.reference
        head = reference.labels[left_vertex(reference.tri, image.walk)]
        image_inside_on_left = head in image.inside
        if inside_on_left == image_inside_on_left:
            return component.j + 1
        return self.outside_of(component.j)

    def _step(self, X) -> StepMap:
        f = self.map
        P = self.main[X.index]
        target = self.image_of(P)
        dynamics = {}
        preimages = defaultdict(list)
        degree = 0 if P.boundary else f.degree
        first_image = None
        for c in P.boundary:
            component = self.standard_form.components[c]
            if first_image is None:
                first_image = component.j
            if component.j == first_image:
                degree += component.degree
            if component.is_essential:
                source = cap(component.klass)
            else:
                far = self._labels_in(self._far_side(P, c))
                source = next(iter(far)) if far else None
            if source is not None:
                dynamics[source] = cap(component.j)
            if source is not None or component.degree > 1:
                preimages[cap(component.j)].append((source, component.degree))
        for v in sorted(P.special):
            y = f.vertex_image[v]
            d = f.local_degrees[v]
            x = self.label_of.get(v)
            if x is not None:
                dynamics[x] = y
            if x is not None or d > 1:
                preimages[y].append((x, d))
        return StepMap(X.index, target, dynamics, preimages, degree)

    def step_degree(self, piece):
        return self.steps[piece].degree

    # cycles

    @cached_property
    def cycles(self):
        found = []
        seen = set()
        for start in range(len(self.pieces)):
            orbit = [start]
            while self.piece_map[orbit[-1]] not in orbit:
                orbit.append(self.piece_map[orbit[-1]])
            first = orbit.index(self.piece_map[orbit[-1]])
            cycle = orbit[first:]
            key = frozenset(cycle)
            if key not in seen:
                seen.add(key)
                low = cycle.index(min(cycle))
                found.append(tuple(cycle[low:] + cycle[:low]))
        return tuple(sorted(found))

    @cached_property
    def returns(self):
        maps = {}
        for cycle in self.cycles:
            for i, piece in enumerate(cycle):
                order = cycle[i:] + cycle[:i]
                step = self.steps[order[0]]
                for nxt in order[1:]:
                    step = step.then(self.steps[nxt])
                kind = Homeomorphism if step.degree == 1 else PatchedMap
                maps[piece] = kind(piece, order, step, self.pieces[piece].punctures)
        return maps

    def return_map_of(self, piece):
        """
        The first-return map of a periodic thick part, ``None`` for a
        pre-periodic one.
        """
        return self.returns.get(piece)

    def first_return_maps(self):
        return [self.returns[cycle[0]] for cycle in self.cycles]

    @cached_property
    def patched_spheres(self):
        spheres = []
        for X in self.pieces:
            exponents = {}
            for y, listed in self.steps[X.index].preimages.items():
                for x, d in listed:
                    if x in X.caps:
                        exponents[x] = d
            for c in X.caps:
                exponents.setdefault(c, 1)
            spheres.append(PatchedSphere(X, exponents))
        return spheres


def decompose(sf: StandardForm) -> GluingData:
    gluing = GluingData(sf)
    logger.debug("%r", gluing)
    return gluing


def decompose_along(f, multicurve, budget=None) -> GluingData:
    return decompose(standard_form(f, multicurve, budget))


def first_return_maps(gluing: GluingData):
    return gluing.first_return_maps()


# twist lattice


class TwistLattice:
    """
    The twists about the curves of the multicurve and the integer ``N``
    for which every ``T^N`` lifts; ``N M`` is integral.
    """

    def __init__(self, multicurve, matrix, N):
        self.multicurve = multicurve
        self.matrix = matrix
        self.N = N

    def __repr__(self):
        return "TwistLattice(N={}, {!r})".format(self.N, self.multicurve)

    @property
    def basis(self):
        return tuple((c, 1) for c in self.multicurve)

    @property
    def system(self):
        """
        ``N I - N M`` as an integer matrix.
        """
        n = len(self.multicurve)
        return sympy.Matrix(
            n,
            n,
            lambda i, j: int(self.N * ((1 if i == j else 0) - self.matrix[i][j])),
        )


def twist_modulus(sf: StandardForm) -> TwistLattice:
    degrees = [p.degree for p in sf.components if p.klass is not None]
    N = lcm(*degrees) if degrees else 1
    M = thurston_matrix(sf.map, sf.multicurve)
    assert all((N * x).denominator == 1 for row in M.as_lists() for x in row), "N M not integral"
    return TwistLattice(sf.multicurve, M, N)


def solve_integer(B, c):
    """
    An integer ``x`` with ``B x = c``, or ``None``. With the Smith form
    ``D = S B T`` the system reads ``D y = S c`` for ``x = T y``; the
    coordinates of ``y`` beyond the rank are zero.
    """
    D, S, T = smith_normal_decomp(sympy.Matrix(B), domain=ZZ)
    rhs = S * sympy.Matrix(c)
    rows, cols = D.shape
    y = sympy.zeros(cols, 1)
    for i in range(rows):
        d = D[i, i] if i < cols else 0
        if d == 0:
            if rhs[i] != 0:
                return None
            continue
        if rhs[i] % d:
            return None
        y[i] = rhs[i] // d
    return T * y


def solve_twist_equation(lattice: TwistLattice, m, n):
    """
    An integer solution of ``(N I - N M) x = m - n``, or ``None``.
    """
    rhs = sympy.Matrix([int(a) - int(b) for a, b in zip(m, n)])
    if not any(rhs):
        return tuple(0 for _ in rhs)
    x = solve_integer(lattice.system, rhs)
    return None if x is None else tuple(int(v) for v in x)
