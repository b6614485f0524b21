"""
Marked Thurston maps with parabolic orbifold.

A ``(2,2,2,2)`` map is modelled by an affine map ``L(z) = A z + b`` of the
plane modulo the orbifold group ``G`` generated by the unit translations
and ``z -> -z``. Lattice points are sympy column vectors with rational
entries; group elements are ``z -> sign * z + w`` with ``w`` integral.
"""
import itertools
import logging
from fractions import Fraction
from math import gcd, isqrt

import networkx as nx
import sympy

from thurston.budget import UNSUPPORTED_MATRIX, Inconclusive, as_budget
from thurston.cover import (
    OrbifoldData,
    is_topological_polynomial,
    lift_word,
    orbifold_data,
    pullback_curve,
)
from thurston.curves import (
    apply_mapping_class,
    dehn_twist,
    fan_between,
    intersection_number,
    is_identity_class,
)
from thurston.exceptions import (
    BadMatrix,
    BudgetExceeded,
    MissingIdentity,
    NotInGeneratingSet,
    NotParabolic,
    NotPeriodic,
    ParabolicError,
    UnsupportedMarking,
)
from thurston.matrices import (
    HAS_UNIT_EIGENVALUE,
    IDENTITY_2,
    as_matrix,
    automorph,
    conjugator,
    eigen_class,
    form_of,
    gl2z_conjugacy,
    require_no_unit_eigenvalue,
)
from thurston.obstruction import detect_levy, search_obstruction
from thurston.settings import get_settings
from thurston.surface import edge_key

logger = logging.getLogger(__name__)

#: signature id of the pillowcase orbifold (2,2,2,2)
PILLOWCASE = 6

HALF = sympy.Rational(1, 2)
CORNERS = ((0, 0), (HALF, 0), (0, HALF), (HALF, HALF))


def point(values):
    return sympy.ImmutableMatrix([sympy.Rational(x) for x in values])


def is_lattice(v, q=1) -> bool:
    return all((x * q).is_integer for x in v)


def same_class(z, w) -> bool:
    """
    ``z`` and ``w`` project to the same point of the pillowcase.
    """
    return is_lattice(z - w) or is_lattice(z + w)


def reduced(v):
    """
    The representative of ``v + Z^2`` in ``[0, 1)^2``.
    """
    return point(x - sympy.floor(x) for x in v)


def denominator(points) -> int:
    q = 1
    for v in points:
        for x in v:
            d = int(sympy.Rational(x).q)
            q = q * d // gcd(q, d)
    return q


class OrbifoldGroupElement:
    """
    ``z -> sign * z + w``: the translation ``T_w`` when ``sign`` is 1 and
    the symmetry about ``w / 2`` otherwise.
    """

    def __init__(self, sign, w):
        self.sign = 1 if sign > 0 else -1
        self.w = point(w)
        if not is_lattice(self.w):
            raise ParabolicError("{} is not a lattice vector.".format(list(self.w)))

    @classmethod
    def translation(cls, w):
        return cls(1, w)

    @classmethod
    def symmetry(cls, center):
        return cls(-1, 2 * point(center))

    @classmethod
    def identity(cls):
        return cls(1, (0, 0))

    def __repr__(self):
        if self.sign == 1:
            return "T({}, {})".format(*self.w)
        return "S({}, {})".format(*(self.w / 2))

    def __eq__(self, other):
        return (self.sign, self.w) == (other.sign, other.w)

    def __hash__(self):
        return hash((self.sign, tuple(self.w)))

    def __call__(self, z):
        return self.sign * z + self.w

    def __mul__(self, other):
        # self o other
        return OrbifoldGroupElement(self.sign * other.sign, self.sign * other.w + self.w)

    @property
    def is_translation(self):
        return self.sign == 1

    @property
    def center(self):
        return self.w / 2

    def inverse(self):
        return OrbifoldGroupElement(self.sign, -self.sign * self.w)

    def push_forward(self, A, b):
        """
        ``F_*(g)`` with ``L o g = F_*(g) o L``: ``T_v`` goes to ``T_{Av}``
        and the symmetry about ``c`` to the one about ``A c + b``.
        """
        return OrbifoldGroupElement(self.sign, as_matrix(A) * self.w + (1 - self.sign) * point(b))


def stabilizer(z):
    """
    The elements of ``G`` fixing ``z``: the symmetry about ``z`` when ``z``
    is a corner.
    """
    found = [OrbifoldGroupElement.identity()]
    if is_lattice(2 * z):
        found.append(OrbifoldGroupElement(-1, 2 * z))
    return found


class AffineQuotient:
    """
    ``L(z) = A z + b`` with one lift per marked label. ``dynamics`` maps
    each label to its image; ``source`` is the PL map the model was
    extracted from, if any.
    """

    def __init__(self, A, b, lifts, dynamics, q=None, signature_id=PILLOWCASE, source=None):
        self.A = as_matrix(A)
        self.b = point(b)
        self.lifts = {x: point(z) for x, z in lifts.items()}
        self.dynamics = dict(dynamics)
        self.q = q or denominator(self.lifts.values())
        self.signature_id = signature_id
        self.source = source

    def __repr__(self):
        return "AffineQuotient(A={}, b={}, labels={})".format(
            list(self.A), list(self.b), list(self.lifts)
        )

    def __eq__(self, other):
        return (
            isinstance(other, AffineQuotient)
            and self.A == other.A
            and self.b == other.b
            and self.dynamics == other.dynamics
            and all(same_class(self.lifts[x], other.lifts[x]) for x in self.lifts)
        )

    __hash__ = None

    @property
    def labels(self):
        return tuple(self.lifts)

    @property
    def degree(self):
        return abs(int(self.A.det()))

    @property
    def orbifold(self) -> OrbifoldData:
        """
        The orbifold of the quotient: weight 2 at the marked corners, 1 at
        the other marked points.
        """
        weights = {x: 2 if is_lattice(2 * z) else 1 for x, z in self.lifts.items()}
        euler = 2 - sum(1 - Fraction(1, w) for w in weights.values())
        signature = tuple(sorted(w for w in weights.values() if w != 1))
        return OrbifoldData(weights, euler, signature)

    def __call__(self, z):
        return self.A * z + self.b

    def preimage(self, z):
        return self.A.inv() * (z - self.b)

    def iterate(self, n):
        """
        ``(A^n, b_n)`` with ``L^n(z) = A^n z + b_n``.
        """
        power, offset = IDENTITY_2, point((0, 0))
        for _ in range(n):
            power, offset = self.A * power, self.A * offset + self.b
        return power, offset

    def period(self, x):
        """
        The period of a periodic label, ``None`` for strictly pre-periodic
        ones.
        """
        orbit = [x]
        y = self.dynamics[x]
        while y not in orbit:
            orbit.append(y)
            y = self.dynamics[y]
        if y != x:
            return None
        return len(orbit)

    @property
    def periodic_labels(self):
        return tuple(x for x in self.lifts if self.period(x) is not None)

    def relation(self, x):
        """
        The element ``g`` with ``L(z_x) = g z_y`` for ``y = f(x)``.
        """
        image, target = self(self.lifts[x]), self.lifts[self.dynamics[x]]
        if is_lattice(image - target):
            return OrbifoldGroupElement(1, image - target)
        if is_lattice(image + target):
            return OrbifoldGroupElement(-1, image + target)
        raise ParabolicError(
            "The lift of {} does not map to the lift of its image {}.".format(x, self.dynamics[x])
        )

    def validate(self):
        if self.degree < 2:
            raise BadMatrix("|det A| = {} is smaller than 2.".format(self.degree))
        if not is_lattice(2 * self.b):
            raise ParabolicError("b = {} is not a half-integer vector.".format(list(self.b)))
        for x, z in self.lifts.items():
            if not is_lattice(z, self.q):
                raise ParabolicError("The lift of {} is not in (1/{})Z^2.".format(x, self.q))
            if self.dynamics.get(x) not in self.lifts:
                raise ParabolicError("The image of {} is not marked.".format(x))
            self.relation(x)
        return self


# extraction from a PL map


class Slopes:
    """
    Slopes of curves on a sphere with four marked points ``p0 .. p3``,
    identified with the pillowcase so that the curve around ``p0, p1`` has
    direction ``(1, 0)``, the one around ``p0, p2`` direction ``(0, 1)`` and
    the twist of the latter about the former direction ``(2, 1)``.
    """

    def __init__(self, reference):
        p = reference.labels
        self.horizontal = reference.pair_curve(p[0], p[1])
        self.vertical = reference.pair_curve(p[0], p[2])
        self.diagonal = apply_mapping_class(dehn_twist(self.horizontal, 1), self.vertical)

    def __call__(self, curve):
        # i(c, c') = 2 |det(v, v')| on the pillowcase
        x = intersection_number(curve, self.vertical) // 2
        y = intersection_number(curve, self.horizontal) // 2
        if x == 0 or y == 0:
            return (1, 0) if y == 0 else (0, 1)
        if intersection_number(curve, self.diagonal) // 2 == abs(x - 2 * y):
            return (x, y)
        return (x, -y)


def slope(curve):
    """
    ``(p, q)`` with ``p >= 0`` for an essential curve on a sphere with four
    marked points.
    """
    return Slopes(curve.reference)(curve)


def homology_action(f):
    """
    The matrix of the torus lift on ``H_1``, up to sign, read off from the
    pullbacks of three curves: every component of ``f^-1`` of a curve of
    direction ``v`` has direction ``w`` with ``A w = +-d v``, ``d`` the
    degree on it.
    """
    slopes = Slopes(f.reference)
    curves = (slopes.horizontal, slopes.vertical, slopes.diagonal)
    pulled = []
    for curve in curves:
        components = [p for p in pullback_curve(f, curve) if p.curve.is_essential]
        if not components:
            raise NotParabolic("The preimage of {!r} has no essential component.".format(curve))
        pulled.append((point(slopes(components[0].curve)), components[0].degree))
    (w1, d1), (w2, d2), (w3, d3) = pulled
    W = sympy.Matrix.hstack(w1, w2)
    for sign in (1, -1):
        A = sympy.ImmutableMatrix(sympy.diag(d1, sign * d2) * W.inv())
        if not is_lattice(A):
            continue
        image = A * w3
        if image in (d3 * point((2, 1)), -d3 * point((2, 1))):
            return A
    raise NotParabolic("The pullbacks are not those of an affine map.")


# cutting the codomain open

# arcs of the cut cycle: bottom a -> b, right b -> c, top c -> d, left d -> a
BOTTOM, RIGHT, TOP, LEFT = range(4)

# the back square next to the front square [0, 1/2]^2 across each arc is
# the image of [1/2, 1] x [0, 1/2] under this element
ACROSS = (
    OrbifoldGroupElement(-1, (1, 0)),
    OrbifoldGroupElement.identity(),
    OrbifoldGroupElement(-1, (1, 1)),
    OrbifoldGroupElement(1, (-1, 0)),
)

# a, b, c, d in the front and in the back square
FRONT_CORNERS = ((0, 0), (HALF, 0), (HALF, HALF), (0, HALF))
BACK_CORNERS = ((1, 0), (HALF, 0), (HALF, HALF), (1, HALF))


class PillowcaseChart:
    """
    The codomain cut open along an edge cycle through the corners ``a, b,
    c, d``, in that order. Triangles left of the cycle lie in the front
    square ``[0, 1/2]^2``, the others in the back square
    ``[1/2, 1] x [0, 1/2]``. A walk of triangles is developed into the
    plane by one element of ``G`` per triangle, its frame.
    """

    def __init__(self, tri, corners):
        self.tri = tri
        self.corners, self.arcs = self._cut(tuple(corners))
        self.arc_of = {
            edge_key(u, v): r for r, arc in enumerate(self.arcs) for u, v in zip(arc, arc[1:])
        }
        dual = tri.dual_graph()
        dual.remove_edges_from(tri.triangles_at_edge(e) for e in self.arc_of)
        a, step = self.arcs[BOTTOM][:2]
        self.front = frozenset(nx.node_connected_component(dual, tri.directed[(a, step)]))

    def __repr__(self):
        return "PillowcaseChart(corners={})".format(self.corners)

    def _cut(self, corners):
        graph = nx.Graph(list(self.tri.edges))
        for rest in itertools.permutations(corners[1:]):
            order = (corners[0],) + rest
            used = set(order)
            arcs = []
            for u, v in zip(order, order[1:] + order[:1]):
                allowed = graph.subgraph((set(graph) - used) | {u, v})
                try:
                    arc = nx.shortest_path(allowed, u, v)
                except nx.NetworkXNoPath:
                    break
                used.update(arc)
                arcs.append(arc)
            else:
                return order, arcs
        raise NotParabolic("No edge cycle of the codomain runs through the four corners.")

    def develop(self, walk):
        """
        The frame of the last triangle of a walk of adjacent triangles, the
        first one being in the identity frame.
        """
        g = OrbifoldGroupElement.identity()
        for s, t in zip(walk, walk[1:]):
            r = self.arc_of.get(self.tri.shared_edge(s, t))
            if r is None:
                continue
            g = g * ACROSS[r] if s in self.front else g * ACROSS[r].inverse()
        return g

    def position(self, t, corner):
        """
        The corner ``corner`` of triangle ``t`` in the square of ``t``.
        """
        i = self.corners.index(corner)
        return point(FRONT_CORNERS[i] if t in self.front else BACK_CORNERS[i])


def _without_repeats(walk):
    out = []
    for t in walk:
        if not out or out[-1] != t:
            out.append(t)
    return out


def _cycle_fixed_point(cycle, pull):
    """
    The fixed point of ``pull(c0) o pull(c1) o ... o pull(cn)`` where each
    ``pull(x)`` is an affine map ``(M, c)``.
    """
    M, c = IDENTITY_2, point((0, 0))
    for x in reversed(cycle):
        N, d = pull(x)
        M, c = N * M, N * c + d
    fixed = IDENTITY_2 - M
    if fixed.det() == 0:
        raise BadMatrix("The cycle {} has no isolated fixed point.".format(cycle))
    return fixed.inv() * c


def chart_model(f) -> AffineQuotient:
    """
    The affine model of an untwisted ``(2,2,2,2)`` map marked at more
    points than its postcritical set. The corners are lifted through a
    :class:`PillowcaseChart` along walks from domain triangle ``0``, which
    fixes ``L``; every other marked point is pulled back along its orbit,
    and a cycle of them goes to the fixed point of the pullback round it.
    """
    f.require_identity()
    if f.is_twisted:
        raise UnsupportedMarking(
            "Extra marked points are only placed for maps without a stored twist."
        )
    t1, t0 = f.domain.tri, f.codomain.tri
    chart = PillowcaseChart(t0, f.portrait.postcritical)
    dual = t1.dual_graph()
    dynamics = f.marked_dynamics
    walks = {
        y: nx.shortest_path(dual, 0, t1.fan(v)[0])
        for y, v in zip(f.codomain.marked, f.domain.marked)
    }
    ends, inner = {}, {}
    for y, walk in walks.items():
        parents = _without_repeats([f.parent[t] for t in walk])
        ends[y] = parents[-1]
        inner[y] = chart.develop(parents)
    outer = {}
    for y, walk in walks.items():
        image = [f.triangle_image[t] for t in walk]
        image += fan_between(t0, dynamics[y], image[-1], ends[dynamics[y]])[1:]
        outer[y] = chart.develop(image)

    def lift(frames, x, y):
        return frames[x](chart.position(ends[y], y))

    source = [lift(inner, p, p) for p in chart.corners]
    target = [lift(outer, p, dynamics[p]) for p in chart.corners]
    D = sympy.Matrix.hstack(source[1] - source[0], source[2] - source[0])
    E = sympy.Matrix.hstack(target[1] - target[0], target[2] - target[0])
    A = sympy.ImmutableMatrix(E * D.inv())
    b = target[0] - A * source[0]
    if not is_lattice(A) or A * source[3] + b != target[3]:
        raise NotParabolic("The lifted corners do not move by an affine map.")
    if abs(int(A.det())) != f.degree:
        raise NotParabolic("det A = {} differs from the degree {}.".format(A.det(), f.degree))
    inverse = A.inv()

    def pull(x):
        # L(z_x) = k z_f(x) with k = outer_x o inner_f(x)^-1
        k = outer[x] * inner[dynamics[x]].inverse()
        return k.sign * inverse, inverse * (k.w - b)

    lifts = dict(zip(chart.corners, source))
    pending = [x for x in f.marked if x not in lifts]
    while pending:
        ready = [x for x in pending if dynamics[x] in lifts]
        if not ready:
            x = pending[0]
            for _ in pending:
                x = dynamics[x]
            cycle = [x]
            while dynamics[cycle[-1]] != x:
                cycle.append(dynamics[cycle[-1]])
            lifts[x] = _cycle_fixed_point(cycle, pull)
            pending.remove(x)
            continue
        for x in ready:
            N, d = pull(x)
            lifts[x] = N * lifts[dynamics[x]] + d
            pending.remove(x)
    model = AffineQuotient(A, b, {x: lifts[x] for x in f.marked}, dynamics, source=f)
    return model.validate()


def extract_affine_model(f) -> AffineQuotient:
    """
    The affine model of a ``(2,2,2,2)`` map. When the marked set is the
    postcritical set the ``i``-th marked point goes to the ``i``-th corner
    of :data:`CORNERS`; other markings go through :func:`chart_model`.
    """
    orbifold = orbifold_data(f)
    if not orbifold.is_parabolic:
        raise NotParabolic("The orbifold {} is hyperbolic.".format(orbifold.signature_text))
    if orbifold.signature_id != PILLOWCASE:
        raise NotParabolic(
            "Affine models are extracted for signature (2,2,2,2), not {}.".format(
                orbifold.signature_text
            )
        )
    if set(f.marked) != set(f.portrait.postcritical):
        model = chart_model(f)
        logger.debug("extracted %r through %s marked points", model, len(f.marked))
        return model
    A = homology_action(f)
    if abs(int(A.det())) != f.degree:
        raise NotParabolic("det A = {} differs from the degree {}.".format(A.det(), f.degree))
    labels = f.reference.labels
    lifts = {x: point(c) for x, c in zip(labels, CORNERS)}
    dynamics = f.marked_dynamics
    b = lifts[dynamics[labels[0]]]
    model = AffineQuotient(A, b, lifts, dynamics, q=2, source=f).validate()
    logger.debug("extracted %r", model)
    return model


# lattice dynamics


class FixedPoint:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "FixedPoint"


FIXED_POINT = FixedPoint()


def fixed_point(A, b):
    A = as_matrix(A)
    return (A - IDENTITY_2).inv() * -point(b)


def lattice_escape_time(A, b, v, q=1, rounds=None):
    """
    The least ``n >= 1`` with ``L^-n(v)`` outside ``(1/q)Z^2``, or
    :data:`FIXED_POINT` when ``v`` is the fixed point of ``L``.
    """
    require_no_unit_eigenvalue(A)
    A, b, v = as_matrix(A), point(b), point(v)
    if v == fixed_point(A, b):
        return FIXED_POINT
    rounds = get_settings().MAX_ROUNDS if rounds is None else rounds
    inverse = A.inv()
    z = v
    for n in range(1, rounds + 1):
        z = inverse * (z - b)
        if not is_lattice(z, q):
            return n
    raise BudgetExceeded("{} stays in (1/{})Z^2 for {} backward steps.".format(list(v), q, rounds))


# Nielsen classes


class NielsenIndex:
    def __init__(self, period, element):
        self.period = period
        self.element = element

    def __repr__(self):
        return "NielsenIndex(n={}, {!r})".format(self.period, self.element)

    def __eq__(self, other):
        return (self.period, self.element) == (other.period, other.element)

    def __hash__(self):
        return hash((self.period, self.element))


def index_of(m: AffineQuotient, z, n) -> NielsenIndex:
    power, offset = m.iterate(n)
    image = power * z + offset
    if is_lattice(image - z):
        return NielsenIndex(n, OrbifoldGroupElement(1, image - z))
    if is_lattice(image + z):
        return NielsenIndex(n, OrbifoldGroupElement(-1, image + z))
    raise NotPeriodic("{} is not fixed by L^{} on the quotient.".format(list(z), n))


def nielsen_index(m: AffineQuotient, label, n=None) -> NielsenIndex:
    period = m.period(label)
    if period is None:
        raise NotPeriodic("{} is not periodic.".format(label))
    n = period if n is None else n
    if n % period:
        raise NotPeriodic("{} has period {}, not dividing {}.".format(label, period, n))
    return index_of(m, m.lifts[label], n)


def _twisted_conjugate_exists(power, offset, g1, g2):
    """
    Whether ``g1 = H(k) g2 k^-1`` for some ``k`` in ``G``, ``H`` the
    push-forward by ``L^n``. With ``k = (s, w)`` the right side is
    ``(sign g2, (A^n - sign I) w + s u + (1 - s) b_n)``.
    """
    if g1.sign != g2.sign:
        return False
    system = power - g2.sign * IDENTITY_2
    for s in (1, -1):
        rhs = g1.w - s * g2.w - (1 - s) * offset
        if is_lattice(system.inv() * rhs):
            return True
    return False


def same_nielsen_class(m: AffineQuotient, q1, q2) -> bool:
    """
    Some lifts of ``q1`` and ``q2`` share a Nielsen index for ``L^n``,
    ``n`` the least common multiple of the periods.
    """
    if q1 == q2:
        return True
    require_no_unit_eigenvalue(m.A)
    p1, p2 = m.period(q1), m.period(q2)
    if p1 is None or p2 is None:
        raise NotPeriodic("Nielsen classes are defined for periodic points.")
    n = p1 * p2 // gcd(p1, p2)
    power, offset = m.iterate(n)
    z1, z2 = m.lifts[q1], m.lifts[q2]
    i1, i2 = index_of(m, z1, n).element, index_of(m, z2, n).element
    return any(
        _twisted_conjugate_exists(power, offset, i1 * s1, i2 * s2)
        for s1 in stabilizer(z1)
        for s2 in stabilizer(z2)
    )


def find_levy_pair(m: AffineQuotient):
    """
    Two distinct periodic labels in the same Nielsen class, or ``None``.
    """
    require_no_unit_eigenvalue(m.A)
    for q1, q2 in itertools.combinations(m.periodic_labels, 2):
        if same_nielsen_class(m, q1, q2):
            logger.info("%s and %s share a Nielsen class", q1, q2)
            return (q1, q2)
    return None


class LevyPair:
    """
    Two periodic marked points in one Nielsen class: a degenerate Levy
    cycle.
    """

    def __init__(self, first, second):
        self.pair = (first, second)

    def __repr__(self):
        return "LevyPair{}".format(self.pair)

    def __eq__(self, other):
        return isinstance(other, LevyPair) and set(self.pair) == set(other.pair)

    def __hash__(self):
        return hash(frozenset(self.pair))


def geometrize(m: AffineQuotient):
    """
    The marked affine model, or a :class:`LevyPair`. Periodic points move
    to the solution of ``L^n(z) = ind(z) z``; pre-periodic points to the
    preimage of their image along their original relation.
    """
    require_no_unit_eigenvalue(m.A)
    pair = find_levy_pair(m)
    if pair is not None:
        return LevyPair(*pair)
    lifts = {}
    for x in m.periodic_labels:
        n = m.period(x)
        g = nielsen_index(m, x).element
        power, offset = m.iterate(n)
        lifts[x] = (power - g.sign * IDENTITY_2).inv() * (g.w - offset)
    pending = [x for x in m.labels if x not in lifts]
    while pending:
        for x in list(pending):
            y = m.dynamics[x]
            if y in lifts:
                lifts[x] = m.preimage(m.relation(x)(lifts[y]))
                pending.remove(x)
    model = AffineQuotient(
        m.A, m.b, {x: lifts[x] for x in m.labels}, m.dynamics, signature_id=m.signature_id
    )
    logger.debug("geometrized to %r", model)
    return model.validate()


# affine conjugacy


def _integer_tuple(M):
    return tuple(int(x) for x in M)


def _times(M, N):
    p, q, r, s = M
    t, u, v, w = N
    return (p * t + q * v, p * u + q * w, r * t + s * v, r * u + s * w)


def _unit_solutions(A):
    """
    ``u I + v A0`` of determinant +-1 for a non-scalar ``A`` whose unit
    group is finite; ``A0 = (A - a I) / g`` spans the integral centralizer.
    """
    a, b, c, d = _integer_tuple(A)
    g = gcd(gcd(b, c), d - a)
    a0 = (0, b // g, c // g, (d - a) // g)
    bound = 8 + 2 * (abs(a0[3]) + abs(a0[1]) + abs(a0[2]))
    found = []
    for u in range(-bound, bound + 1):
        for v in range(-bound, bound + 1):
            M = (u + v * a0[0], v * a0[1], v * a0[2], u + v * a0[3])
            if abs(M[0] * M[3] - M[1] * M[2]) == 1:
                found.append(M)
    return found


def centralizer_generators(A):
    """
    Generators of the centralizer of ``A`` in GL2(Z).
    """
    A = as_matrix(A)
    F = form_of(A)
    if F == (0, 0, 0):
        return [(1, 1, 0, 1), (0, -1, 1, 0), (1, 0, 0, -1)]
    gens = [(-1, 0, 0, -1)]
    improper = conjugator(A, A, -1)
    if improper is not None:
        gens.append(_integer_tuple(improper))
    a, b, c = F
    D = b * b - 4 * a * c
    if D > 0 and isqrt(D) ** 2 != D:
        gens.append(_integer_tuple(automorph(F)))
    elif D == 0:
        # I + N with N the nilpotent part of (A - a I) / g
        p, q, r, s = _integer_tuple(A)
        g = gcd(gcd(q, r), s - p)
        t = (s - p) // g
        gens.append((1 - t // 2, q // g, r // g, 1 + t // 2))
    else:
        gens.extend(_unit_solutions(A))
    return gens


def centralizer_residues(A, modulus):
    """
    Integer representatives of the centralizer of ``A`` in GL2(Z), one per
    residue class mod ``modulus``, identity first.
    """
    gens = centralizer_generators(A)
    identity = (1, 0, 0, 1)
    key = lambda M: tuple(x % modulus for x in M)  # noqa: E731
    found = {key(identity): identity}
    order = [identity]
    frontier = [identity]
    while frontier:
        following = []
        for M in frontier:
            for G in gens:
                N = _times(M, G)
                if key(N) not in found:
                    found[key(N)] = N
                    order.append(N)
                    following.append(N)
        frontier = following
    return [sympy.ImmutableMatrix(2, 2, list(M)) for M in order]


def _label_bijections(m1, m2, fixed_labels):
    if fixed_labels:
        if set(m1.labels) == set(m2.labels) and m1.dynamics == m2.dynamics:
            yield {x: x for x in m1.labels}
        return
    if len(m1.labels) != len(m2.labels):
        return
    for image in itertools.permutations(m2.labels):
        pi = dict(zip(m1.labels, image))
        if all(pi[m1.dynamics[x]] == m2.dynamics[pi[x]] for x in m1.labels):
            yield pi


def _translations(B, rhs):
    """
    ``t`` mod ``Z^2`` with ``B t = rhs`` mod ``Z^2``.
    """
    size = abs(int(B.det()))
    inverse = B.inv()
    seen = set()
    found = []
    for k in itertools.product(range(size), repeat=2):
        t = reduced(inverse * (rhs + point(k)))
        if t not in seen:
            seen.add(t)
            found.append(t)
    return sorted(found, key=lambda v: tuple(v))


class AffineWitness:
    """
    ``S(z) = M z + t`` and ``g`` in ``G`` with ``L2 = g o S o L1 o S^-1``,
    ``S`` carrying the lift of ``x`` onto that of ``bijection[x]``.
    """

    def __init__(self, g, M, t, bijection):
        self.g = g
        self.M = M
        self.t = t
        self.bijection = bijection

    def __repr__(self):
        return "AffineWitness(g={!r}, M={}, t={}, variant={})".format(
            self.g, list(self.M), list(self.t), self.variant
        )

    @property
    def variant(self):
        return "SL2" if self.M.det() == 1 else "GL2"

    def __call__(self, z):
        return self.M * z + self.t

    def holds(self, m1, m2) -> bool:
        """
        Check the relation on two generic points and on the marked lifts.
        """
        inverse = self.M.inv()
        for z in (point((0, 0)), point((sympy.Rational(1, 3), sympy.Rational(2, 7)))):
            conjugated = self(m1(inverse * (z - self.t)))
            if self.g(conjugated) != m2(z):
                return False
        return all(
            same_class(self(m1.lifts[x]), m2.lifts[y]) for x, y in self.bijection.items()
        )


def affine_equivalence(
    m1: AffineQuotient, m2: AffineQuotient, fixed_labels=False, orientation_preserving=False
):
    """
    An :class:`AffineWitness` or ``None``. The linear part runs over the
    GL2(Z) conjugators composed with the centralizer of ``A1`` mod
    ``2 q1``, the translation over the finite solutions mod ``Z^2``. With
    ``orientation_preserving`` only ``det M = 1`` is accepted.
    """
    require_no_unit_eigenvalue(m1.A)
    require_no_unit_eigenvalue(m2.A)
    bijections = list(_label_bijections(m1, m2, fixed_labels))
    if not bijections:
        return None
    modulus = 2 * m1.q
    for sign in (1, -1):
        conjugacy = gl2z_conjugacy(m1.A, sign * m2.A)
        if conjugacy is None:
            continue
        starts = [S for S in (conjugacy.sl2, conjugacy.gl2) if S is not None]
        for S, C in itertools.product(starts, centralizer_residues(m1.A, modulus)):
            M = S * C
            if orientation_preserving and M.det() != 1:
                continue
            conjugated = M * m1.A * M.inv()
            B = IDENTITY_2 - conjugated
            for t in _translations(B, sign * m2.b - M * m1.b):
                for pi in bijections:
                    if all(same_class(M * m1.lifts[x] + t, m2.lifts[pi[x]]) for x in pi):
                        u = m2.b - sign * (B * t + M * m1.b)
                        witness = AffineWitness(OrbifoldGroupElement(sign, u), M, t, pi)
                        logger.debug("affine conjugacy %r", witness)
                        return witness
    return None


# lifting


def in_generating_set(f, curve, exponent) -> bool:
    """
    Twists about curves that are inessential rel the postcritical set, and
    squares of any twist.
    """
    if exponent % 2 == 0:
        return True
    post = set(f.portrait.postcritical)
    outer = post - set(curve.inside)
    inner = post & set(curve.inside)
    return len(outer) <= 1 or len(inner) <= 1


def lift_rmcg_twist(m, word):
    """
    ``Lift(word)`` for a word in the generators of the pure mapping class
    group of ``(S^2, Q)`` that lift through every ``(2,2,2,2)`` map.
    """
    f = m.source if isinstance(m, AffineQuotient) else m
    if f is None:
        raise MissingIdentity("The affine model carries no PL map to lift through.")
    for curve, exponent in word:
        if not in_generating_set(f, curve, exponent):
            raise NotInGeneratingSet(
                "T^{} about {!r} is not a generator.".format(exponent, curve)
            )
    return lift_word(f, word)


def lifting_rounds(m, word, rounds=None):
    """
    The number of lifts after which ``word`` becomes the identity, or
    ``None`` within ``rounds``.
    """
    f = m.source if isinstance(m, AffineQuotient) else m
    rounds = get_settings().MAX_ROUNDS if rounds is None else rounds
    current = word
    for n in range(rounds + 1):
        if is_identity_class(current, f.reference):
            return n
        current = lift_rmcg_twist(f, current)
    return None


# classification


GEOMETRIZABLE = "geometrizable"
LEVY = "degenerate_levy_cycle"
OBSTRUCTED = "obstructed"
INCONCLUSIVE = "inconclusive"


class ParabolicClassification:
    def __init__(self, orbifold, outcome, model=None, eigen=None, witness=None):
        self.orbifold = orbifold
        self.outcome = outcome
        self.model = model
        self.eigen = eigen
        self.witness = witness

    def __repr__(self):
        return "ParabolicClassification({}, {})".format(self.orbifold.signature_text, self.outcome)

    @property
    def decided(self):
        return self.outcome != INCONCLUSIVE


def classify_parabolic(f, budget=None) -> ParabolicClassification:
    """
    Geometrizable or degenerate Levy cycle. ``(2,2,2,2)`` maps are decided
    on their affine model; the other signatures by the obstruction search.
    """
    orbifold = orbifold_data(f)
    if not orbifold.is_parabolic:
        raise NotParabolic("The orbifold {} is hyperbolic.".format(orbifold.signature_text))
    if orbifold.signature_id == PILLOWCASE:
        try:
            model = extract_affine_model(f)
        except BadMatrix:
            return ParabolicClassification(
                orbifold, INCONCLUSIVE, witness=Inconclusive(UNSUPPORTED_MATRIX)
            )
        eigen = eigen_class(model.A)
        if eigen.kind == HAS_UNIT_EIGENVALUE:
            return ParabolicClassification(
                orbifold, INCONCLUSIVE, model, eigen, Inconclusive(UNSUPPORTED_MATRIX)
            )
        result = geometrize(model)
        if isinstance(result, LevyPair):
            return ParabolicClassification(orbifold, LEVY, model, eigen, result)
        return ParabolicClassification(orbifold, GEOMETRIZABLE, result, eigen)
    if f.reference is None:
        return ParabolicClassification(orbifold, GEOMETRIZABLE)
    budget = as_budget(budget)
    found = search_obstruction(f, budget)
    if found:
        witness = detect_levy(f, found.multicurve)
        if witness is not None and (witness.degenerate or is_topological_polynomial(f)):
            return ParabolicClassification(orbifold, LEVY, witness=witness)
        return ParabolicClassification(orbifold, OBSTRUCTED, witness=found)
    return ParabolicClassification(
        orbifold, INCONCLUSIVE, witness=budget.give_up("classify_parabolic")
    )
