"""
PL Thurston maps as simplicial branched covers.

A map sends the triangles of a domain triangulation ``T1`` onto the
triangles of a codomain triangulation ``T0``. The optional ``parent`` table
says which ``T0`` triangle contains each ``T1`` triangle: it identifies the
domain sphere with the codomain sphere, so that curves can be pulled back
and maps iterated. The optional ``twist`` word ``psi`` makes the object
represent ``f o psi``.
"""
import logging
from collections import defaultdict
from fractions import Fraction
from functools import cached_property
from math import lcm

from thurston.curves import (
    IDENTITY,
    Curve,
    MappingClassWord,
    apply_to_walk,
    reduce_walk,
)
from thurston.exceptions import (
    BranchPointNotVertex,
    MarkedSetNotInvariant,
    MissingIdentity,
    NotACover,
    NotLiftable,
    NotSimplicial,
    OrientationReversed,
    PostcriticalNotMarked,
)
from thurston.surface import (
    MarkedSphere,
    Subdivision,
    Triangulation,
    edge_key,
    rotations,
    walk_parity,
)

logger = logging.getLogger(__name__)


class Infinity:
    """
    The orbifold weight of points on a cycle through a critical point.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "∞"

    __str__ = __repr__

    def __reduce__(self):
        return (Infinity, ())


INFINITY = Infinity()

PARABOLIC_SIGNATURES = {
    (INFINITY, INFINITY): 1,
    (2, 2, INFINITY): 2,
    (2, 4, 4): 3,
    (2, 3, 6): 4,
    (3, 3, 3): 5,
    (2, 2, 2, 2): 6,
}

HYPERBOLIC = "hyperbolic"
PARABOLIC = "parabolic"


def weight_key(w):
    return (w is INFINITY, 0 if w is INFINITY else w)


def format_weight(w):
    return str(w)


class Portrait:
    """
    Branch data of a self-map of a marked sphere.

    ``preimages[x]`` lists ``(label, local_degree)`` for the preimages of the
    label ``x``; preimages that are neither labelled nor critical may be
    left out, an unlabelled preimage is recorded with label ``None``.
    """

    def __init__(self, labels, dynamics, preimages, degree):
        self.labels = tuple(labels)
        self.dynamics = dict(dynamics)
        self.preimages = {x: tuple(preimages.get(x, ())) for x in self.labels}
        self.degree = degree

    def __repr__(self):
        return "Portrait(labels={}, degree={})".format(list(self.labels), self.degree)

    def local_degree(self, label):
        for y, d in self.preimages[self.dynamics[label]]:
            if y == label:
                return d
        return 1

    @cached_property
    def critical_values(self):
        return tuple(x for x in self.labels if any(d > 1 for _, d in self.preimages[x]))

    @cached_property
    def postcritical(self):
        found = []
        frontier = list(self.critical_values)
        while frontier:
            x = frontier.pop(0)
            if x in found:
                continue
            found.append(x)
            frontier.append(self.dynamics[x])
        return tuple(x for x in self.labels if x in found)

    def cycle(self, x):
        """
        The periodic cycle through ``x``, or ``None`` if ``x`` is strictly
        pre-periodic.
        """
        orbit = [x]
        while True:
            y = self.dynamics[orbit[-1]]
            if y == x:
                return orbit
            if y in orbit:
                return None
            orbit.append(y)

    def is_homeomorphism(self):
        return self.degree == 1


class OrbifoldData:
    def __init__(self, weights, euler, signature):
        self.weights = weights
        self.euler = euler
        self.signature = signature
        self.signature_id = PARABOLIC_SIGNATURES.get(signature) if euler == 0 else None
        self.kind = PARABOLIC if euler == 0 else HYPERBOLIC

    def __repr__(self):
        return "OrbifoldData(signature={}, euler={}, kind={})".format(
            self.signature_text, self.euler, self.kind
        )

    @property
    def signature_text(self):
        return "(" + ",".join(format_weight(w) for w in self.signature) + ")"

    @property
    def is_parabolic(self):
        return self.kind == PARABOLIC


def orbifold_data(f) -> OrbifoldData:
    """
    Weights ``N(x)``: 1 off the postcritical set, infinite on cycles through
    a critical point and otherwise the least common multiple of
    ``deg_y(f) * N(y)`` over the preimages ``y`` of ``x``, computed as a
    fixpoint on the finite portrait.
    """
    portrait = f if isinstance(f, Portrait) else f.portrait
    post = set(portrait.postcritical)
    weights = {x: 1 for x in portrait.labels}
    for x in post:
        orbit = portrait.cycle(x)
        if orbit and any(portrait.local_degree(y) > 1 for y in orbit):
            weights[x] = INFINITY
    for _ in range(len(portrait.labels) + 2):
        changed = False
        for x in portrait.labels:
            if x not in post or weights[x] is INFINITY:
                continue
            value = 1
            for y, d in portrait.preimages[x]:
                w = 1 if y is None else weights[y]
                if w is INFINITY:
                    value = INFINITY
                    break
                value = lcm(value, d * w)
            if value != weights[x]:
                weights[x] = value
                changed = True
        if not changed:
            break
    euler = Fraction(2)
    for w in weights.values():
        euler -= 1 if w is INFINITY else 1 - Fraction(1, w)
    signature = tuple(sorted((w for w in weights.values() if w != 1), key=weight_key))
    return OrbifoldData(weights, euler, signature)


class Preimage:
    """
    A component of the preimage of a curve, with the covering degree on it.
    Unpacks as ``(curve, degree)``.
    """

    def __init__(self, curve, degree, walk):
        self.curve = curve
        self.degree = degree
        self.walk = walk

    def __iter__(self):
        return iter((self.curve, self.degree))

    def __repr__(self):
        return "Preimage({!r}, degree={})".format(self.curve, self.degree)


class PLThurstonMap:
    def __init__(
        self,
        domain,
        codomain,
        vertex_image,
        triangle_image,
        degree,
        parent=None,
        twist=IDENTITY,
    ):
        self.domain = domain
        self.codomain = codomain
        self.vertex_image = tuple(vertex_image)
        self.triangle_image = tuple(triangle_image)
        self.degree = degree
        self.parent = None if parent is None else tuple(parent)
        self.twist = twist or IDENTITY

    def __repr__(self):
        return "PLThurstonMap(degree={}, T1={!r}, T0={!r})".format(
            self.degree, self.domain.tri, self.codomain.tri
        )

    @property
    def marked(self):
        return self.codomain.marked

    @cached_property
    def marked_dynamics(self):
        return {
            q: self.vertex_image[self.domain.marked[i]]
            for i, q in enumerate(self.codomain.marked)
        }

    @cached_property
    def preimage_triangles(self):
        table = defaultdict(list)
        for i, t in enumerate(self.triangle_image):
            table[t].append(i)
        return {t: tuple(v) for t, v in table.items()}

    @cached_property
    def local_degrees(self):
        return tuple(
            len(self.domain.tri.fan(v)) // len(self.codomain.tri.fan(self.vertex_image[v]))
            for v in range(self.domain.tri.vertex_count)
        )

    @cached_property
    def critical_points(self):
        return tuple(v for v, d in enumerate(self.local_degrees) if d > 1)

    @cached_property
    def portrait(self) -> Portrait:
        labels = self.codomain.marked
        label_of = {v: q for v, q in zip(self.domain.marked, labels)}
        preimages = defaultdict(list)
        for v, d in enumerate(self.local_degrees):
            x = self.vertex_image[v]
            if x not in self.codomain.marked_set:
                if d > 1:
                    raise PostcriticalNotMarked(
                        "Critical value {} is not a marked vertex.".format(x)
                    )
                continue
            if d > 1 or v in label_of:
                preimages[x].append((label_of.get(v), d))
        return Portrait(labels, self.marked_dynamics, preimages, self.degree)

    @cached_property
    def reference(self):
        return self.codomain.reference

    @property
    def is_twisted(self):
        return not self.twist.is_empty()

    def with_twist(self, twist):
        return PLThurstonMap(
            self.domain,
            self.codomain,
            self.vertex_image,
            self.triangle_image,
            self.degree,
            self.parent,
            twist,
        )

    def twisted(self, word):
        """
        The map ``F o word``.
        """
        return self.with_twist(word.then(self.twist))

    def same_combinatorics(self, other):
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self.vertex_image == other.vertex_image
            and self.triangle_image == other.triangle_image
            and self.parent == other.parent
        )

    def require_identity(self):
        if self.parent is None:
            raise MissingIdentity(
                "The map carries no identification of its domain with its codomain."
            )

    @cached_property
    def subdivision(self):
        self.require_identity()
        return Subdivision(self.codomain.tri, self.domain.tri, self.parent)

    @cached_property
    def pullbacks(self):
        # curve -> components of its preimage, filled by pullback_curve
        return {}


def build_pl_map(domain, codomain, vertex_image, triangle_image, parent=None, twist=None):
    """
    Check the simplicial branched cover data and return the map.
    """
    t1, t0 = domain.tri, codomain.tri
    vertex_image = [int(v) for v in vertex_image]
    triangle_image = [int(t) for t in triangle_image]
    if len(vertex_image) != t1.vertex_count:
        raise NotSimplicial(
            "Expected {} vertex images, got {}.".format(t1.vertex_count, len(vertex_image)),
            pointer="/vertex_image",
        )
    if len(triangle_image) != len(t1.triangles):
        raise NotSimplicial(
            "Expected {} triangle images, got {}.".format(
                len(t1.triangles), len(triangle_image)
            ),
            pointer="/triangle_image",
        )
    for v, x in enumerate(vertex_image):
        if not 0 <= x < t0.vertex_count:
            raise NotSimplicial(
                "Vertex image {} does not exist.".format(x),
                pointer="/vertex_image/{}".format(v),
            )
    for i, (tri, image) in enumerate(zip(t1.triangles, triangle_image)):
        if not 0 <= image < len(t0.triangles):
            raise NotSimplicial(
                "Triangle image {} does not exist.".format(image),
                pointer="/triangle_image/{}".format(i),
            )
        mapped = tuple(vertex_image[v] for v in tri)
        if set(mapped) != set(t0.triangles[image]):
            raise NotSimplicial(
                "Triangle {} is not mapped onto triangle {}.".format(i, image),
                pointer="/triangle_image/{}".format(i),
            )
        if mapped not in rotations(t0.triangles[image]):
            raise OrientationReversed(
                "Triangle {} is mapped with reversed orientation.".format(i),
                pointer="/triangle_image/{}".format(i),
            )
    counts = defaultdict(int)
    for image in triangle_image:
        counts[image] += 1
    degrees = {counts[t] for t in range(len(t0.triangles))}
    if len(degrees) != 1:
        raise NotACover("Codomain triangles have {} preimages.".format(sorted(degrees)))
    (degree,) = degrees
    if degree < 2:
        raise NotACover("The degree is {}; Thurston maps have degree at least 2.".format(degree))
    fibres = defaultdict(int)
    for v in range(t1.vertex_count):
        upstairs = len(t1.fan(v))
        downstairs = len(t0.fan(vertex_image[v]))
        if upstairs % downstairs:
            raise NotACover("The link of vertex {} does not cover its image link.".format(v))
        fibres[vertex_image[v]] += upstairs // downstairs
    for x, total in sorted(fibres.items()):
        if total != degree:
            raise NotACover("Local degrees over vertex {} sum to {}.".format(x, total))
    if len(domain.marked) != len(codomain.marked):
        raise MarkedSetNotInvariant("Domain and codomain marked sets differ in size.")
    for i, v in enumerate(domain.marked):
        if vertex_image[v] not in codomain.marked_set:
            raise MarkedSetNotInvariant(
                "Marked point {} maps to unmarked vertex {}.".format(
                    codomain.marked[i], vertex_image[v]
                ),
                pointer="/marked/{}".format(i),
            )
    if parent is not None:
        parent = [int(t) for t in parent]
        if len(parent) != len(t1.triangles) or not all(
            0 <= t < len(t0.triangles) for t in parent
        ):
            raise NotSimplicial("The parent table does not match the triangles.", pointer="/parent")
        subdivision = Subdivision(t0, t1, parent)
        for i, (v, q) in enumerate(zip(domain.marked, codomain.marked)):
            if subdivision.locations[v] != ("vertex", q):
                raise MarkedSetNotInvariant(
                    "Domain vertex {} does not sit at marked point {}.".format(v, q),
                    pointer="/domain_marked/{}".format(i),
                )
    f = PLThurstonMap(domain, codomain, vertex_image, triangle_image, degree, parent, twist)
    logger.debug("built %r", f)
    return f


def domain_marked_from_parent(t1, t0, parent, marked):
    """
    The domain vertices sitting at the codomain marked vertices.
    """
    subdivision = Subdivision(t0, t1, parent)
    out = []
    for q in marked:
        v = subdivision.vertex_at(q)
        if v is None:
            raise MissingIdentity("No domain vertex sits at marked point {}.".format(q))
        out.append(v)
    return out


def local_degree(f: PLThurstonMap, v: int) -> int:
    return f.local_degrees[v]


def postcritical_set(f: PLThurstonMap):
    return f.portrait.postcritical


def riemann_hurwitz_defect(f: PLThurstonMap) -> int:
    """
    ``sum(deg_v - 1) - (2 deg - 2)``; zero for every branched cover of the
    sphere.
    """
    return sum(d - 1 for d in f.local_degrees) - (2 * f.degree - 2)


def is_topological_polynomial(f: PLThurstonMap) -> bool:
    label_of = dict(zip(f.domain.marked, f.codomain.marked))
    for q in f.codomain.marked:
        fibre = [v for v, x in enumerate(f.vertex_image) if x == q]
        if (
            len(fibre) == 1
            and label_of.get(fibre[0]) == q
            and f.local_degrees[fibre[0]] == f.degree
        ):
            return True
    return False


class LiftedTriangulation:
    """
    Result of :func:`lift_triangulation`: ``tri`` triangulates the domain,
    ``vertex_image``/``triangle_image`` give the simplicial map onto the
    lifted codomain triangulation and ``parent`` places each new triangle
    in a triangle of the original domain triangulation.
    """

    def __init__(self, tri, vertex_image, triangle_image, parent):
        self.tri = tri
        self.vertex_image = tuple(vertex_image)
        self.triangle_image = tuple(triangle_image)
        self.parent = tuple(parent)


def lift_triangulation(f: PLThurstonMap, subdivision) -> LiftedTriangulation:
    """
    Pull a subdivision of the codomain back through ``f``. Domain vertices
    keep their ids; new vertices are numbered in order of appearance.
    """
    if isinstance(subdivision, Triangulation):
        if subdivision != f.codomain.tri:
            raise BranchPointNotVertex(
                "Only subdivisions of the codomain triangulation can be lifted."
            )
        subdivision = Subdivision.trivial(subdivision)
    locations = subdivision.locations
    present = {loc[1] for loc in locations.values() if loc[0] == "vertex"}
    for v in f.critical_points:
        if f.vertex_image[v] not in present:
            raise BranchPointNotVertex(
                "Branch value {} is not a vertex of the subdivision.".format(f.vertex_image[v])
            )
    t1 = f.domain.tri
    children = defaultdict(list)
    for s, t in enumerate(subdivision.parent):
        children[t].append(s)
    ids = {}
    next_id = t1.vertex_count
    vertex_image = {}
    triangles, triangle_image, parent = [], [], []
    for sigma, tau in enumerate(f.triangle_image):
        corner = {f.vertex_image[v]: v for v in t1.triangles[sigma]}
        for s in children[tau]:
            lifted = []
            for p in subdivision.tri.triangles[s]:
                kind, where = locations[p]
                if kind == "vertex":
                    key = ("vertex", corner[where])
                elif kind == "edge":
                    key = ("edge", edge_key(corner[where[0]], corner[where[1]]), p)
                else:
                    key = ("face", sigma, p)
                if key not in ids:
                    if kind == "vertex":
                        ids[key] = corner[where]
                    else:
                        ids[key] = next_id
                        next_id += 1
                    vertex_image[ids[key]] = p
                lifted.append(ids[key])
            triangles.append(tuple(lifted))
            triangle_image.append(s)
            parent.append(sigma)
    tri = Triangulation(next_id, triangles)
    return LiftedTriangulation(
        tri, [vertex_image[v] for v in range(next_id)], triangle_image, parent
    )


def iterate(f: PLThurstonMap, n: int) -> PLThurstonMap:
    """
    ``f`` composed with itself ``n`` times, as a simplicial map from an
    iterated lift onto the codomain triangulation.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        return f
    f.require_identity()
    if f.is_twisted:
        raise MissingIdentity("Iterates are only formed for untwisted maps.")
    g = f
    for _ in range(n - 1):
        lifted = lift_triangulation(f, g.subdivision)
        vertex_image = [g.vertex_image[p] for p in lifted.vertex_image]
        triangle_image = [g.triangle_image[s] for s in lifted.triangle_image]
        parent = [f.parent[sigma] for sigma in lifted.parent]
        domain = MarkedSphere(lifted.tri, f.domain.marked)
        g = PLThurstonMap(
            domain,
            f.codomain,
            vertex_image,
            triangle_image,
            g.degree * f.degree,
            parent,
        )
    return g


def _lift_walk(f, walk):
    """
    Sheets of the lift of a closed walk of codomain triangles: a list of
    ``(domain walk, degree)`` pairs, one per component.
    """
    t1, t0 = f.domain.tri, f.codomain.tri
    n = len(walk)
    starts = f.preimage_triangles[walk[0]]
    successor = {}
    paths = {}
    for sigma in starts:
        current = sigma
        path = []
        for i in range(n):
            path.append(current)
            a, b = t0.shared_edge(walk[i], walk[(i + 1) % n])
            corner = {f.vertex_image[v]: v for v in t1.triangles[current]}
            current = t1.across(current, (corner[a], corner[b]))
        successor[sigma] = current
        paths[sigma] = path
    seen = set()
    components = []
    for sigma in starts:
        if sigma in seen:
            continue
        cycle, current = [], sigma
        while current not in seen:
            seen.add(current)
            cycle.append(current)
            current = successor[current]
        domain_walk = [t for s in cycle for t in paths[s]]
        components.append((domain_walk, len(cycle)))
    return components


def carry_to_codomain(f, domain_walk):
    """
    A closed walk of domain triangles as a reduced walk of the codomain
    reference triangulation, through ``parent`` and then ``psi^-1``.
    """
    f.require_identity()
    walk = reduce_walk([f.parent[t] for t in domain_walk])
    walk = f.reference.from_codomain(walk) if walk else []
    if f.is_twisted and walk:
        walk = apply_to_walk(f.twist.inverse(), walk)
    return walk


def pullback_curve(f: PLThurstonMap, curve: Curve):
    """
    Components of ``f^-1(curve)`` with the degree of ``f`` on each. The
    degrees sum to ``deg f``.
    """
    reference = f.reference
    if not curve.walk:
        trivial = Curve(reference, [])
        return [Preimage(trivial, 1, []) for _ in range(f.degree)]
    if curve in f.pullbacks:
        return f.pullbacks[curve]
    components = []
    for domain_walk, degree in _lift_walk(f, curve.codomain_walk()):
        walk = carry_to_codomain(f, domain_walk)
        components.append(Preimage(Curve(reference, walk), degree, domain_walk))
    logger.debug("pulled back %r: %s components", curve, len(components))
    f.pullbacks[curve] = components
    return components


def special_vertices(f: PLThurstonMap):
    """
    The domain vertices in ``f^-1(Q)``.
    """
    return frozenset(v for v, x in enumerate(f.vertex_image) if x in f.codomain.marked_set)


def left_vertex(tri, walk):
    """
    A vertex on the left of a closed embedded triangle walk: the head of
    the edge crossed first, as directed in the triangle it is left from.
    """
    (a, b) = tri.shared_edge(walk[0], walk[1 % len(walk)])
    for p, q, _ in rotations(tri.triangles[walk[0]]):
        if {p, q} == {a, b}:
            return q


def domain_sides(f: PLThurstonMap, domain_walk):
    """
    The two sets of domain vertices in ``f^-1(Q)`` separated by a closed
    domain walk, the side holding the first domain marked vertex first.
    """
    parity = walk_parity(f.domain.tri, domain_walk, f.domain.marked[0])
    special = special_vertices(f)
    outer = frozenset(v for v in special if parity[v] == 0)
    inner = frozenset(v for v in special if parity[v] == 1)
    return outer, inner


def lift_generator(f: PLThurstonMap, curve: Curve, exponent: int) -> MappingClassWord:
    """
    The lift of ``T_curve^exponent``: the product of ``T_alpha^(exponent/d)``
    over the essential components ``alpha`` of degree ``d``. The components
    are disjoint, so homotopic ones are collected into one power.
    """
    generators = {}
    for component, degree in pullback_curve(f, curve):
        if not component.is_essential:
            continue
        if exponent % degree:
            raise NotLiftable(
                "T^{} does not lift: a preimage component has degree {}.".format(exponent, degree)
            )
        generators[component] = generators.get(component, 0) + exponent // degree
    return MappingClassWord(list(generators.items()))


def lift_word(f: PLThurstonMap, word: MappingClassWord) -> MappingClassWord:
    lifted = IDENTITY
    for curve, exponent in word:
        lifted = lifted.then(lift_generator(f, curve, exponent))
    return lifted


def conjugate(f: PLThurstonMap, word: MappingClassWord) -> PLThurstonMap:
    """
    ``h o f o h^-1`` for a liftable word ``h``, written as
    ``f o (Lift(h) o h^-1)``.
    """
    return f.twisted(word.inverse().then(lift_word(f, word)))
