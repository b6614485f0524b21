"""
Simple closed curves and mapping classes on a marked sphere.

Curves are stored relative to a :class:`Reference` triangulation whose
vertex set is exactly the marked set. A curve is a cyclic walk through the
triangles of the reference (equivalently an edge path of its barycentric
refinement through face centres and edge midpoints). After removing
back-tracking the walk is the normal representative of the isotopy class
and its crossing counts per edge are the normal coordinates.
"""
import itertools
import logging
from functools import cached_property

from thurston.budget import as_budget
from thurston.exceptions import CurveNotEssential, NotClosed, NotEmbedded
from thurston.surface import Triangulation, contract_to, edge_key, rotations

logger = logging.getLogger(__name__)

TRIVIAL = "trivial"
PERIPHERAL = "peripheral"
ESSENTIAL = "essential"


def reduce_walk(walk):
    """
    Cyclically reduce a closed walk of triangles: drop repeated entries and
    cancel every back-track ``s, t, s``. Walks shorter than three triangles
    bound a disk and reduce to ``[]``.
    """
    stack = []
    for t in walk:
        if stack and stack[-1] == t:
            continue
        if len(stack) >= 2 and stack[-2] == t:
            stack.pop()
            continue
        stack.append(t)
    while len(stack) >= 3:
        if stack[0] == stack[-1]:
            stack.pop()
        elif stack[1] == stack[-1]:
            stack = stack[2:]
        elif stack[0] == stack[-2]:
            stack = stack[:-2]
        else:
            break
    if len(stack) >= 2 and stack[0] == stack[-1]:
        stack.pop()
    return stack if len(stack) >= 3 else []


def canonical_rotation(walk):
    if not walk:
        return ()
    candidates = []
    for seq in (list(walk), list(reversed(walk))):
        for i in range(len(seq)):
            candidates.append(tuple(seq[i:] + seq[:i]))
    return min(candidates)


def fan_between(tri, v, start, stop):
    """
    Triangles around ``v`` from ``start`` to ``stop`` (both included), in
    positive rotation.
    """
    ring = tri.fan(v)
    i = ring.index(start)
    out = []
    while True:
        out.append(ring[i])
        if ring[i] == stop:
            return out
        i = (i + 1) % len(ring)


class Reference:
    """
    A triangulation with vertex set ``subset`` obtained from a marked sphere
    by edge contractions, together with the transport of walks between the
    two.
    """

    def __init__(self, sphere, subset):
        self.sphere = sphere
        self.labels = tuple(subset)
        self.contraction = contract_to(sphere.tri, self.labels)
        relabel = {v: i for i, v in enumerate(self.labels)}
        self.tri = Triangulation(
            len(self.labels),
            [tuple(relabel[v] for v in t) for t in self.contraction.final],
        )
        self.index = {frozenset(t): i for i, t in enumerate(self.contraction.final)}

    def __repr__(self):
        return "Reference(marked={})".format(list(self.labels))

    def __eq__(self, other):
        return (
            isinstance(other, Reference)
            and self.sphere == other.sphere
            and self.labels == other.labels
        )

    def __hash__(self):
        return hash((self.sphere, self.labels))

    @property
    def edges(self):
        return self.tri.edges

    def label_edge(self, e):
        return (self.labels[e[0]], self.labels[e[1]])

    # transport -------------------------------------------------------------

    def from_codomain(self, walk):
        """
        Carry a closed walk of triangles of the sphere's triangulation to a
        reduced walk of the reference.
        """
        tri = self.sphere.tri
        sets = [frozenset(tri.triangles[t]) for t in walk]
        for i, step in enumerate(self.contraction.steps):
            sets = self._contract(sets, step, self.contraction.stages[i])
        return reduce_walk([self.index[s] for s in sets])

    def _contract(self, walk, step, stage):
        u, w, x, y = step
        collapsed_a = frozenset((u, w, x))
        collapsed_b = frozenset((u, w, y))
        walk = reduce_walk(walk)
        if not walk:
            return []
        ring = _stage_fan(stage, u, collapsed_a, x)
        detour = ring[1 : ring.index(collapsed_b)]
        out = []
        n = len(walk)
        for i, t in enumerate(walk):
            out.append(t)
            nxt = walk[(i + 1) % n]
            if t == collapsed_a and nxt == collapsed_b:
                out.extend(detour)
            elif t == collapsed_b and nxt == collapsed_a:
                out.extend(reversed(detour))
        out = reduce_walk(out)
        renamed = []
        for t in out:
            if t in (collapsed_a, collapsed_b):
                continue
            renamed.append(frozenset(w if v == u else v for v in t))
        return reduce_walk(renamed)

    def to_codomain(self, walk):
        """
        Carry a walk of the reference back to a closed walk of triangles of
        the sphere's triangulation.
        """
        sets = [frozenset(self.contraction.final[t]) for t in walk]
        for i in reversed(range(len(self.contraction.steps))):
            u, w, x, y = self.contraction.steps[i]
            renamed = self.contraction.renamed[i]
            originals = [renamed.get(s, s) for s in sets]
            out = []
            n = len(originals)
            for j, o in enumerate(originals):
                out.append(o)
                nxt = originals[(j + 1) % n]
                if n > 1 and len(o & nxt) < 2:
                    common = sets[j] & sets[(j + 1) % n]
                    out.append(frozenset((u, w, x)) if x in common else frozenset((u, w, y)))
            sets = out
        tri = self.sphere.tri
        return [tri.by_vertex_set[s] for s in sets]

    # curves on the reference -------------------------------------------

    def coordinates(self, walk):
        counts = [0] * len(self.tri.edges)
        n = len(walk)
        for i, t in enumerate(walk):
            e = self.tri.shared_edge(t, walk[(i + 1) % n])
            counts[self.tri.edge_index[e]] += 1
        return tuple(counts)

    def curve(self, walk):
        return Curve(self, reduce_walk(list(walk)))

    def corner(self, coords, t, v):
        """
        Number of normal arcs of ``coords`` cutting off corner ``v`` of
        triangle ``t``.
        """
        a, b, c = rotations(self.tri.triangles[t])[self.tri.triangles[t].index(v)]
        x = coords[self.tri.edge_index[edge_key(a, b)]]
        y = coords[self.tri.edge_index[edge_key(c, a)]]
        z = coords[self.tri.edge_index[edge_key(b, c)]]
        return (x + y - z) // 2

    def trace(self, coords):
        """
        Split a normal coordinate vector into its connected components.
        Each component is a list of crossings ``(edge, position, from, to)``
        where ``position`` counts from the smaller endpoint of ``edge``.
        """
        tri = self.tri
        seen = set()
        components = []
        for e in tri.edges:
            x = coords[tri.edge_index[e]]
            for r in range(x):
                if (e, r) in seen:
                    continue
                to, frm = tri.triangles_at_edge(e)
                crossings = []
                edge, pos = e, r
                while (edge, pos) not in seen:
                    seen.add((edge, pos))
                    crossings.append((edge, pos, frm, to))
                    edge, pos = self._next_crossing(coords, edge, pos, to)
                    frm, to = to, tri.across(to, edge)
                components.append(crossings)
        return components

    def _next_crossing(self, coords, e, r, t):
        tri = self.tri
        lo, hi = e
        x = coords[tri.edge_index[e]]
        c_lo = self.corner(coords, t, lo)
        if r < c_lo:
            v, rank = lo, r
        else:
            v, rank = hi, x - 1 - r
        z = tri.third_vertex(t, e)
        out = edge_key(v, z)
        if out[0] == v:
            return out, rank
        return out, coords[tri.edge_index[out]] - 1 - rank

    def curve_from_coordinates(self, coords):
        components = self.trace(coords)
        if not components:
            return Curve(self, [])
        if len(components) > 1:
            raise NotEmbedded("The coordinates describe {} curves.".format(len(components)))
        return Curve(self, [c[2] for c in components[0]])

    def sides(self, coords):
        """
        Partition of the marked labels into the two sides of the curve with
        coordinates ``coords``; the side holding the first label comes first.
        """
        parity = {0: 0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in self.tri.neighbors[v]:
                if u not in parity:
                    parity[u] = parity[v] ^ (coords[self.tri.edge_index[edge_key(u, v)]] % 2)
                    stack.append(u)
        outer = frozenset(self.labels[v] for v in parity if parity[v] == 0)
        inner = frozenset(self.labels[v] for v in parity if parity[v] == 1)
        return outer, inner

    def pair_curve(self, u, w):
        """
        The curve enclosing the marked vertices ``u`` and ``w`` along the
        reference edge joining them.
        """
        a, b = self.labels.index(u), self.labels.index(w)
        tri = self.tri
        if b not in tri.neighbors[a]:
            raise CurveNotEssential("{} and {} are not joined by a reference edge.".format(u, w))
        first = tri.directed[(a, b)]
        second = tri.directed[(b, a)]
        around_a = fan_between(tri, a, first, second)
        around_b = fan_between(tri, b, second, first)
        return Curve(self, reduce_walk(around_a + around_b[1:-1]))

    @cached_property
    def filling_system(self):
        return tuple(self.pair_curve(self.labels[a], self.labels[b]) for a, b in self.tri.edges)


def _stage_fan(stage, v, start, neighbour):
    """
    Triangles of ``stage`` around ``v`` in cyclic order, starting at
    ``start`` and leaving it through the edge ``{v, neighbour}``.
    """
    around = [t for t in stage if v in t]
    ring = [start]
    current, via = start, neighbour
    while True:
        (nxt,) = [t for t in around if t != current and v in t and via in t]
        if nxt == start:
            return ring
        ring.append(nxt)
        (via,) = nxt - {v, via}
        current = nxt


class Curve:
    """
    Isotopy class of a simple closed curve, given by its reduced walk in a
    reference triangulation.
    """

    def __init__(self, reference, walk):
        self.reference = reference
        self.walk = canonical_rotation(walk)
        self.coordinates = reference.coordinates(self.walk) if self.walk else (
            (0,) * len(reference.tri.edges)
        )

    def __repr__(self):
        return "Curve({})".format(list(self.coordinates))

    def __eq__(self, other):
        return (
            isinstance(other, Curve)
            and self.reference == other.reference
            and self.coordinates == other.coordinates
        )

    def __hash__(self):
        return hash(self.coordinates)

    def __lt__(self, other):
        return (self.weight, self.coordinates) < (other.weight, other.coordinates)

    @property
    def weight(self):
        return sum(self.coordinates)

    @cached_property
    def sides(self):
        return self.reference.sides(self.coordinates)

    @cached_property
    def inside(self):
        """
        Marked points on the side not holding the first marked point.
        """
        return self.sides[1]

    @cached_property
    def kind(self):
        smaller = min(len(s) for s in self.sides)
        if smaller == 0:
            return TRIVIAL
        if smaller == 1:
            return PERIPHERAL
        return ESSENTIAL

    @property
    def is_essential(self):
        return self.kind == ESSENTIAL

    @property
    def peripheral_vertex(self):
        if self.kind != PERIPHERAL:
            return None
        (v,) = min(self.sides, key=len)
        return v

    def codomain_walk(self):
        return self.reference.to_codomain(list(self.walk))


class Multicurve:
    """
    Ordered disjoint, pairwise non-homotopic essential curves.
    """

    def __init__(self, curves, check=True):
        self.curves = tuple(curves)
        if check:
            for c in self.curves:
                if not c.is_essential:
                    raise CurveNotEssential("{!r} is not essential.".format(c))
            for a, b in itertools.combinations(self.curves, 2):
                if a == b:
                    raise NotEmbedded("{!r} appears twice.".format(a))
                if intersection_number(a, b):
                    raise NotEmbedded("{!r} and {!r} intersect.".format(a, b))

    def __iter__(self):
        return iter(self.curves)

    def __len__(self):
        return len(self.curves)

    def __getitem__(self, i):
        return self.curves[i]

    def __eq__(self, other):
        return isinstance(other, Multicurve) and self.curves == other.curves

    def __hash__(self):
        return hash(self.curves)

    def __repr__(self):
        return "Multicurve({})".format(list(self.curves))

    def index(self, curve):
        return self.curves.index(curve)

    def as_set(self):
        return frozenset(self.curves)

    @property
    def weight(self):
        return sum(c.weight for c in self.curves)

    @classmethod
    def sorted(cls, curves):
        return cls(sorted(set(curves)), check=False)


class MappingClassWord:
    """
    A product of Dehn twists. Generators apply in the listed order: the
    word ``[(a, 1), (b, -1)]`` is the homeomorphism ``T_b^-1 o T_a``.
    """

    def __init__(self, generators=()):
        self.generators = tuple((c, int(k)) for c, k in generators if k)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __eq__(self, other):
        return isinstance(other, MappingClassWord) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        return "MappingClassWord({})".format(
            " ".join("T{}^{}".format(list(c.coordinates), k) for c, k in self.generators)
            or "id"
        )

    def then(self, other):
        return MappingClassWord(self.generators + tuple(other))

    def inverse(self):
        return MappingClassWord((c, -k) for c, k in reversed(self.generators))

    def is_empty(self):
        return not self.generators


IDENTITY = MappingClassWord()


def canonical_form(sphere, path, refinement=None):
    """
    Curve of the left push-off of a closed embedded edge path.

    ``path`` lists vertices with the first repeated at the end. It may live
    in ``sphere.tri`` or, when ``refinement`` is given, in its refined
    triangulation; refined walks are carried down through the parent map.
    """
    reference = sphere.reference
    tri = refinement.triangulation if refinement is not None else sphere.tri
    path = [int(v) for v in path]
    if len(path) < 4 or path[0] != path[-1]:
        raise NotClosed("An edge path must return to its first vertex.")
    cycle = path[:-1]
    if len(set(cycle)) != len(cycle):
        raise NotEmbedded("The edge path visits a vertex twice.")
    for v in cycle:
        if v in sphere.marked_set:
            raise NotEmbedded("The edge path passes through marked vertex {}.".format(v))
    n = len(cycle)
    walk = []
    for i, v in enumerate(cycle):
        before, after = cycle[i - 1], cycle[(i + 1) % n]
        if (v, after) not in tri.directed or (before, v) not in tri.directed:
            raise NotClosed("{} is not an edge.".format((v, after)))
        fan = []
        b = after
        while True:
            t = tri.directed[(v, b)]
            fan.append(t)
            (c,) = set(tri.triangles[t]) - {v, b}
            if c == before:
                break
            b = c
        walk.extend(reversed(fan))
    if refinement is not None:
        walk = [refinement.parent[t] for t in walk]
    walk = reduce_walk(walk)
    if reference is None:
        return None
    return Curve(reference, reference.from_codomain(walk))


def homotopic(a: Curve, b: Curve) -> bool:
    return a == b


def _crossings(walk):
    n = len(walk)
    return [(walk[i], walk[(i + 1) % n]) for i in range(n)]


def _head(tri, crossing):
    x, y = crossing
    (a, b) = tri.shared_edge(x, y)
    for p, q, _ in rotations(tri.triangles[x]):
        if {p, q} == {a, b}:
            return q


def _left_of(tri, crossing, other):
    """
    True when the crossing ``other``, adjacent to ``crossing``, shares with
    it the left endpoint of ``crossing``.
    """
    here = set(tri.shared_edge(*crossing))
    there = set(tri.shared_edge(*other))
    (v,) = here & there
    return v == _head(tri, crossing)


def intersection_number(a: Curve, b: Curve) -> int:
    """
    Geometric intersection number, counting the corridors along which the
    two normal curves travel together and swap sides.
    """
    if not a.walk or not b.walk or a == b:
        return 0
    tri = a.reference.tri
    ca = _crossings(list(a.walk))
    n = len(ca)
    total = 0
    for walk in (list(b.walk), list(reversed(b.walk))):
        cb = _crossings(walk)
        m = len(cb)
        for i in range(n):
            for j in range(m):
                if ca[i] != cb[j] or ca[i - 1] == cb[j - 1]:
                    continue
                k = 0
                while k < n and ca[(i + k) % n] == cb[(j + k) % m]:
                    k += 1
                if k >= n:
                    continue
                start = _left_of(tri, ca[i], ca[i - 1])
                end = _left_of(tri, ca[(i + k - 1) % n], ca[(i + k) % n])
                if start != end:
                    total += 1
    return total


def dehn_twist(c: Curve, k: int = 1) -> MappingClassWord:
    if not c.is_essential:
        raise CurveNotEssential("Twists are only taken about essential curves.")
    return MappingClassWord([(c, k)])


class _TwistAction:
    """
    The action of ``T_a`` on dual walks. Each step of a walk across an edge
    picks up one loop of ``a`` per strand of ``a`` it crosses.
    """

    def __init__(self, a):
        self.reference = a.reference
        (crossings,) = self.reference.trace(a.coordinates)
        self.crossings = crossings
        self.walk = [c[2] for c in crossings]
        self.position = {(c[0], c[1]): i for i, c in enumerate(crossings)}
        self.coords = a.coordinates
        self._cache = {}

    def _loop(self, q, forward):
        length = len(self.walk)
        if forward:
            return [self.walk[(q + s) % length] for s in range(1, length + 1)]
        return [self.walk[(q - s) % length] for s in range(1, length + 1)]

    def _forward_image(self, p, q, sign):
        ref = self.reference
        tri = ref.tri
        e = tri.shared_edge(p, q)
        lo, hi = e
        gap_p = ref.corner(self.coords, p, lo)
        gap_q = ref.corner(self.coords, q, lo)
        if gap_p < gap_q:
            strands, v = range(gap_p, gap_q), lo
        else:
            strands, v = range(gap_p - 1, gap_q - 1, -1), hi
        length = len(self.walk)
        _, n1, _ = rotations(tri.triangles[q])[tri.triangles[q].index(v)]
        image = [q]
        for r in strands:
            k = self.position[(e, r)]
            _, _, frm, to = self.crossings[k]
            if to == q:
                entering = e
                at = (k + 1) % length
            else:
                entering = self.crossings[(k - 1) % length][0]
                at = k
            left = entering == edge_key(v, n1)
            image.extend(self._loop(at, (1 if left else -1) * sign > 0))
        return image

    def image(self, p, q, sign):
        key = (p, q, sign)
        if key not in self._cache:
            if p < q:
                self._cache[key] = self._forward_image(p, q, sign)
            else:
                full = [q] + self._forward_image(q, p, sign)
                self._cache[key] = list(reversed(full))[1:]
        return self._cache[key]

    def apply(self, walk, sign):
        if not walk:
            return []
        out = [walk[0]]
        n = len(walk)
        for i in range(n):
            out.extend(self.image(walk[i], walk[(i + 1) % n], sign))
        return reduce_walk(out[:-1])


def apply_mapping_class(w: MappingClassWord, c: Curve) -> Curve:
    walk = list(c.walk)
    actions = {}
    for a, k in w:
        if a not in actions:
            actions[a] = _TwistAction(a)
        for _ in range(abs(k)):
            walk = actions[a].apply(walk, 1 if k > 0 else -1)
    return Curve(c.reference, walk)


def apply_to_walk(w: MappingClassWord, walk):
    """
    The image of a reduced reference walk, as a reduced reference walk.
    """
    walk = list(walk)
    for a, k in w:
        action = _TwistAction(a)
        for _ in range(abs(k)):
            walk = action.apply(walk, 1 if k > 0 else -1)
    return walk


def pair_curve(sphere, u, w):
    return sphere.reference.pair_curve(u, w)


def filling_system(sphere):
    """
    The curves around every edge of the reference triangulation. A mapping
    class fixing all of them fixes every reference edge up to isotopy and is
    therefore trivial.
    """
    if sphere.reference is None:
        return ()
    return sphere.reference.filling_system


def is_identity_class(w: MappingClassWord, reference=None) -> bool:
    if w.is_empty():
        return True
    reference = reference or w.generators[0][0].reference
    if len(reference.labels) < 4:
        return True
    return all(apply_mapping_class(w, c) == c for c in reference.filling_system)


def action_key(w: MappingClassWord, reference):
    return tuple(apply_mapping_class(w, c).coordinates for c in reference.filling_system)


def _admissible(tri, coords, assigned):
    for t in range(len(tri.triangles)):
        idx = [tri.edge_index[e] for e in tri.edges_of(t)]
        if all(i < assigned for i in idx):
            x, y, z = (coords[i] for i in idx)
            if (x + y + z) % 2 or x > y + z or y > x + z or z > x + y:
                return False
    return True


def _vectors(tri, total):
    count = len(tri.edges)
    coords = [0] * count

    def fill(i, remaining):
        if i == count - 1:
            coords[i] = remaining
            if _admissible(tri, coords, count):
                yield tuple(coords)
            return
        for value in range(remaining + 1):
            coords[i] = value
            if _admissible(tri, coords, i + 1):
                yield from fill(i + 1, remaining - value)

    if count:
        yield from fill(0, total)


def enumerate_multicurves(sphere, weight_bound, budget=None):
    """
    Stream every multicurve of total weight at most ``weight_bound``, by
    increasing weight and then lexicographically on coordinates.
    """
    reference = sphere.reference if hasattr(sphere, "reference") else sphere
    if reference is None:
        return
    budget = as_budget(budget)
    for total in range(1, weight_bound + 1):
        for coords in _vectors(reference.tri, total):
            budget.check("enumerate_multicurves")
            components = reference.trace(coords)
            curves = [Curve(reference, [c[2] for c in comp]) for comp in components]
            if any(not c.is_essential for c in curves):
                continue
            if len(set(curves)) != len(curves):
                continue
            yield Multicurve(sorted(curves), check=False)


def generators(sphere):
    """
    Twist generators: one twist per reference edge curve, in edge order.
    """
    return filling_system(sphere)


def enumerate_mapping_classes(sphere, length_bound, budget=None):
    """
    Stream twist words of length at most ``length_bound`` whose action on
    the filling system has not been seen before. Words are produced by
    length, then lexicographically on (generator index, exponent sign).
    """
    reference = sphere.reference
    budget = as_budget(budget)
    yield IDENTITY
    if reference is None:
        return
    letters = [(c, s) for c in generators(sphere) for s in (1, -1)]
    seen = {action_key(IDENTITY, reference)}
    for length in range(1, length_bound + 1):
        for combo in itertools.product(letters, repeat=length):
            if any(a[0] == b[0] and a[1] == -b[1] for a, b in zip(combo, combo[1:])):
                continue
            budget.check("enumerate_mapping_classes")
            word = MappingClassWord(combo)
            key = action_key(word, reference)
            if key in seen:
                continue
            seen.add(key)
            yield word
