"""
Triangulated oriented 2-spheres with marked vertices.

A :class:`Triangulation` is purely combinatorial: dense vertex ids
``0..V-1`` and an ordered list of positively oriented vertex triples.
Every derived structure (edges, links, adjacency) is recomputed from the
triples, so two triangulations built from the same triples are equal.
"""
import logging
from collections import defaultdict, deque
from functools import cached_property

import networkx as nx

from thurston.exceptions import (
    Disconnected,
    NoReferenceTriangulation,
    NonManifold,
    WrongEuler,
)

logger = logging.getLogger(__name__)


def edge_key(u, v):
    return (u, v) if u < v else (v, u)


def rotations(triple):
    a, b, c = triple
    return ((a, b, c), (b, c, a), (c, a, b))


class Triangulation:
    """
    An oriented simplicial 2-sphere.

    Instances are only created through :func:`build_triangulation`, which
    checks every invariant, or by trusted constructions in this package
    that preserve them.
    """

    def __init__(self, vertex_count, triangles):
        self.vertex_count = vertex_count
        self.triangles = tuple(tuple(t) for t in triangles)

    def __repr__(self):
        return "Triangulation(V={}, F={})".format(self.vertex_count, len(self.triangles))

    def __eq__(self, other):
        return (
            isinstance(other, Triangulation)
            and self.vertex_count == other.vertex_count
            and self.triangles == other.triangles
        )

    def __hash__(self):
        return hash((self.vertex_count, self.triangles))

    #: sorted tuple of edges ``(u, v)`` with ``u < v``
    @cached_property
    def edges(self):
        found = set()
        for t in self.triangles:
            for a, b, _ in rotations(t):
                found.add(edge_key(a, b))
        return tuple(sorted(found))

    @cached_property
    def edge_index(self):
        return {e: i for i, e in enumerate(self.edges)}

    #: directed edge ``(a, b)`` -> index of the triangle in which ``a -> b``
    #: appears in the positive orientation
    @cached_property
    def directed(self):
        table = {}
        for i, t in enumerate(self.triangles):
            for a, b, _ in rotations(t):
                table[(a, b)] = i
        return table

    @cached_property
    def by_vertex_set(self):
        return {frozenset(t): i for i, t in enumerate(self.triangles)}

    def triangles_at_edge(self, e):
        """
        The two triangles sharing edge ``e = (u, v)``: first the one in which
        ``u -> v`` is positively oriented.
        """
        u, v = e
        return self.directed[(u, v)], self.directed[(v, u)]

    def across(self, t, e):
        """
        The triangle on the other side of edge ``e`` of triangle ``t``.
        """
        first, second = self.triangles_at_edge(edge_key(*e))
        return second if first == t else first

    def shared_edge(self, s, t):
        common = set(self.triangles[s]) & set(self.triangles[t])
        if len(common) != 2:
            return None
        return edge_key(*common)

    def edges_of(self, t):
        return tuple(edge_key(a, b) for a, b, _ in rotations(self.triangles[t]))

    def third_vertex(self, t, e):
        (v,) = set(self.triangles[t]) - set(e)
        return v

    @cached_property
    def neighbors(self):
        table = defaultdict(set)
        for u, v in self.edges:
            table[u].add(v)
            table[v].add(u)
        return {v: frozenset(n) for v, n in table.items()}

    def link(self, v):
        """
        Neighbours of ``v`` in positive cyclic order.
        """
        successor = {}
        for t in self.triangles:
            for a, b, c in rotations(t):
                if a == v:
                    successor[b] = c
        start = min(successor)
        cycle = [start]
        while successor[cycle[-1]] != start:
            cycle.append(successor[cycle[-1]])
        return tuple(cycle)

    def fan(self, v):
        """
        Triangles around ``v`` in positive cyclic order, matching :meth:`link`.
        """
        ring = self.link(v)
        return tuple(self.directed[(v, b)] for b in ring)

    def dual_graph(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.triangles)))
        for e in self.edges:
            graph.add_edge(*self.triangles_at_edge(e))
        return graph


def walk_parity(tri: Triangulation, walk, base):
    """
    For every vertex, the parity of the number of times a path from
    ``base`` to it crosses the closed triangle walk. For an embedded walk
    the two parity classes are its two sides.
    """
    crossings = defaultdict(int)
    n = len(walk)
    for i in range(n):
        e = tri.shared_edge(walk[i], walk[(i + 1) % n])
        if e is not None:
            crossings[e] += 1
    parity = {base: 0}
    stack = [base]
    while stack:
        v = stack.pop()
        for u in tri.neighbors[v]:
            if u not in parity:
                parity[u] = parity[v] ^ (crossings[edge_key(u, v)] % 2)
                stack.append(u)
    return parity


def euler_characteristic(t: Triangulation) -> int:
    return t.vertex_count - len(t.edges) + len(t.triangles)


def _orient(triples):
    """
    Flip triples so that neighbours induce opposite orientations on shared
    edges. The first triple keeps its orientation.
    """
    oriented = list(triples)
    by_edge = defaultdict(list)
    for i, t in enumerate(oriented):
        for a, b, _ in rotations(t):
            by_edge[edge_key(a, b)].append(i)
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for a, b, _ in rotations(oriented[i]):
            for j in by_edge[edge_key(a, b)]:
                if j == i:
                    continue
                agrees = any(x == a and y == b for x, y, _ in rotations(oriented[j]))
                if j not in seen:
                    if agrees:
                        x, y, z = oriented[j]
                        oriented[j] = (x, z, y)
                    seen.add(j)
                    queue.append(j)
                elif agrees:
                    raise NonManifold(
                        "Triangles {} and {} induce the same orientation on edge "
                        "{}; the surface is not orientable.".format(i, j, (a, b))
                    )
    return oriented


def build_triangulation(triples, vertex_count=None) -> Triangulation:
    """
    Validate ``triples`` as an oriented triangulated sphere.

    Checks run in a fixed order and the first violation is reported:
    simplex shape, connectivity, Euler characteristic, edge incidence and
    orientability, vertex links. Orientation is normalised so that all
    triples are positively oriented relative to the first one.
    """
    triples = [tuple(int(v) for v in t) for t in triples]
    if not triples:
        raise WrongEuler("A triangulation needs at least one triangle.")
    for i, t in enumerate(triples):
        if len(t) != 3 or len(set(t)) != 3:
            raise NonManifold("Triangle {} does not have 3 distinct vertices.".format(i))
        if min(t) < 0:
            raise NonManifold("Triangle {} uses a negative vertex id.".format(i))
    used = {v for t in triples for v in t}
    if vertex_count is None:
        vertex_count = max(used) + 1
    if max(used) >= vertex_count:
        raise NonManifold("Vertex id {} is out of range.".format(max(used)))
    sets = defaultdict(list)
    for i, t in enumerate(triples):
        sets[frozenset(t)].append(i)
    for indices in sets.values():
        if len(indices) > 1:
            raise NonManifold("Triangles {} share all three vertices.".format(indices))

    graph = nx.Graph()
    graph.add_nodes_from(range(vertex_count))
    for a, b, c in triples:
        graph.add_edges_from(((a, b), (b, c), (c, a)))
    if not nx.is_connected(graph):
        raise Disconnected(
            "The complex has {} connected components.".format(
                nx.number_connected_components(graph)
            )
        )

    edges = {edge_key(a, b) for t in triples for a, b, _ in rotations(t)}
    chi = vertex_count - len(edges) + len(triples)
    if chi != 2:
        raise WrongEuler("V - E + F = {} - {} + {} = {}.".format(
            vertex_count, len(edges), len(triples), chi
        ))

    incidence = defaultdict(int)
    for t in triples:
        for a, b, _ in rotations(t):
            incidence[edge_key(a, b)] += 1
    for e in sorted(incidence):
        if incidence[e] != 2:
            raise NonManifold(
                "Edge {} lies in {} triangles instead of 2.".format(e, incidence[e])
            )

    oriented = _orient(triples)
    t = Triangulation(vertex_count, oriented)
    for v in range(vertex_count):
        successor = {}
        for tri in oriented:
            for a, b, c in rotations(tri):
                if a == v:
                    successor[b] = c
        start = min(successor)
        steps, current = 1, successor[start]
        while current != start and steps <= len(successor):
            current = successor[current]
            steps += 1
        if steps != len(successor):
            raise NonManifold("The link of vertex {} is not a single cycle.".format(v))
    return t


def standard_sphere(n) -> Triangulation:
    """
    The tetrahedron for four vertices, otherwise the bipyramid with poles 0
    and 1 over the ring ``2 .. n - 1``.
    """
    if n == 4:
        return build_triangulation([(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)])
    ring = list(range(2, n))
    triples = []
    for a, b in zip(ring, ring[1:] + ring[:1]):
        triples.append((0, a, b))
        triples.append((1, b, a))
    return build_triangulation(triples)


class Refinement:
    """
    Result of :func:`refine_barycentric`.

    Old vertices keep their ids. Edge midpoints get ids ``V .. V+E-1`` in
    edge order and face centres ``V+E .. V+E+F-1`` in triangle order.
    ``parent[i]`` is the old triangle containing new triangle ``i``.
    """

    def __init__(self, original, triangulation, edge_vertex, face_vertex, parent):
        self.original = original
        self.triangulation = triangulation
        self.edge_vertex = edge_vertex
        self.face_vertex = face_vertex
        self.parent = parent

    def __repr__(self):
        return "Refinement({!r} -> {!r})".format(self.original, self.triangulation)


def refine_barycentric(t: Triangulation) -> Refinement:
    V = t.vertex_count
    edge_vertex = {e: V + i for i, e in enumerate(t.edges)}
    face_vertex = {}
    triples, parent = [], []
    for i, (a, b, c) in enumerate(t.triangles):
        f = V + len(t.edges) + i
        face_vertex[i] = f
        m_ab = edge_vertex[edge_key(a, b)]
        m_bc = edge_vertex[edge_key(b, c)]
        m_ca = edge_vertex[edge_key(c, a)]
        for sub in (
            (a, m_ab, f),
            (m_ab, b, f),
            (b, m_bc, f),
            (m_bc, c, f),
            (c, m_ca, f),
            (m_ca, a, f),
        ):
            triples.append(sub)
            parent.append(i)
    refined = Triangulation(V + len(t.edges) + len(t.triangles), triples)
    return Refinement(t, refined, edge_vertex, face_vertex, tuple(parent))


class MarkedSphere:
    """
    A triangulation together with the ordered marked set ``Q``.

    ``postcritical`` is filled in by :mod:`thurston.cover` once the dynamics
    is known.
    """

    def __init__(self, tri: Triangulation, marked, postcritical=()):
        marked = tuple(int(v) for v in marked)
        if len(set(marked)) != len(marked):
            raise NonManifold("Marked vertex ids must be distinct.")
        for v in marked:
            if not 0 <= v < tri.vertex_count:
                raise NonManifold("Marked vertex {} does not exist.".format(v))
        self.tri = tri
        self.marked = marked
        self.postcritical = tuple(postcritical)

    def __repr__(self):
        return "MarkedSphere({!r}, marked={})".format(self.tri, list(self.marked))

    def __eq__(self, other):
        return (
            isinstance(other, MarkedSphere)
            and self.tri == other.tri
            and self.marked == other.marked
        )

    def __hash__(self):
        return hash((self.tri, self.marked))

    @cached_property
    def marked_set(self):
        return frozenset(self.marked)

    def with_marked(self, marked):
        return MarkedSphere(self.tri, marked)

    @cached_property
    def reference(self):
        """
        The reference triangulation used for normal coordinates, or ``None``
        when fewer than four points are marked (no essential curves).
        """
        if len(self.marked) < 4:
            return None
        # imported here: curves depends on this module
        from thurston.curves import Reference

        return Reference(self, self.marked)

    def reference_for(self, subset):
        """
        Reference triangulation that forgets the marked points outside
        ``subset``.
        """
        from thurston.curves import Reference

        subset = tuple(v for v in self.marked if v in set(subset))
        if len(subset) < 4:
            return None
        if subset == self.marked:
            return self.reference
        return Reference(self, subset)


class Contraction:
    """
    Edge contractions reducing a triangulation to one whose vertex set is a
    given subset.

    ``steps[i]`` is ``(u, w, x, y)``: vertex ``u`` was merged into ``w``,
    collapsing the triangles ``{u, w, x}`` and ``{u, w, y}``.
    ``stages[i]`` holds the triangles (as frozensets of original vertex ids)
    before step ``i``; ``stages[-1]`` is the final complex.
    ``renamed[i]`` maps a triangle of stage ``i+1`` to the triangle of stage
    ``i`` it came from.
    """

    def __init__(self, steps, stages, renamed, final):
        self.steps = steps
        self.stages = stages
        self.renamed = renamed
        self.final = final


def _link_ok(adjacency, u, w, apexes, size):
    return size > 4 and adjacency[u] & adjacency[w] == set(apexes)


def contract_to(tri: Triangulation, keep) -> Contraction:
    """
    Contract every vertex outside ``keep`` into a neighbour while preserving
    simpliciality (link condition). Vertices are processed in increasing id
    order and merged into the smallest admissible neighbour, so the result
    is deterministic.
    """
    keep = set(keep)
    triangles = [tuple(t) for t in tri.triangles]
    stages = [[frozenset(t) for t in triangles]]
    steps, renamed = [], []
    while True:
        adjacency = defaultdict(set)
        for a, b, c in triangles:
            adjacency[a] |= {b, c}
            adjacency[b] |= {a, c}
            adjacency[c] |= {a, b}
        size = len(adjacency)
        pending = sorted(v for v in adjacency if v not in keep)
        if not pending:
            break
        move = None
        for u in pending:
            for w in sorted(adjacency[u], key=lambda v: (v not in keep, v)):
                apexes = [
                    next(iter(set(t) - {u, w}))
                    for t in triangles
                    if u in t and w in t
                ]
                if len(apexes) == 2 and _link_ok(adjacency, u, w, apexes, size):
                    move = (u, w, apexes[0], apexes[1])
                    break
            if move:
                break
        if move is None:
            raise NoReferenceTriangulation(
                "Vertices {} cannot be contracted away.".format(pending)
            )
        u, w, x, y = move
        mapping = {}
        new_triangles = []
        for t in triangles:
            if u in t and w in t:
                continue
            new = tuple(w if v == u else v for v in t)
            new_triangles.append(new)
            mapping[frozenset(new)] = frozenset(t)
        triangles = new_triangles
        steps.append(move)
        renamed.append(mapping)
        stages.append([frozenset(t) for t in triangles])
        logger.debug("contracted %s into %s", u, w)
    return Contraction(steps, stages, renamed, triangles)


def isomorphisms(a: Triangulation, b: Triangulation, fixed=None):
    """
    Orientation-preserving simplicial isomorphisms ``a -> b`` as vertex maps.

    An isomorphism of oriented sphere triangulations is determined by the
    image of one oriented triangle, so at most ``3 * F`` candidates are
    propagated. ``fixed`` restricts to maps agreeing with the given partial
    vertex map.
    """
    if (
        a.vertex_count != b.vertex_count
        or len(a.triangles) != len(b.triangles)
        or len(a.edges) != len(b.edges)
    ):
        return
    fixed = fixed or {}
    base = a.triangles[0]
    for target in b.triangles:
        for image in rotations(target):
            mapping = dict(zip(base, image))
            if any(mapping.get(k, v) != v for k, v in fixed.items() if k in mapping):
                continue
            ok = True
            queue = deque([0])
            done = {0}
            while queue and ok:
                i = queue.popleft()
                for p, q, _ in rotations(a.triangles[i]):
                    j = a.directed[(q, p)]
                    (r,) = set(a.triangles[j]) - {p, q}
                    k = b.directed.get((mapping[q], mapping[p]))
                    if k is None:
                        ok = False
                        break
                    (s,) = set(b.triangles[k]) - {mapping[p], mapping[q]}
                    if r in mapping and mapping[r] != s:
                        ok = False
                        break
                    mapping[r] = s
                    if j not in done:
                        done.add(j)
                        queue.append(j)
            if not ok or len(set(mapping.values())) != len(mapping):
                continue
            if any(mapping.get(k) != v for k, v in fixed.items()):
                continue
            yield mapping


class Subdivision:
    """
    A triangulation ``tri`` subdividing ``base``: ``parent[i]`` is the base
    triangle containing triangle ``i``.
    """

    def __init__(self, base, tri, parent):
        self.base = base
        self.tri = tri
        self.parent = tuple(parent)

    @classmethod
    def trivial(cls, base):
        return cls(base, base, range(len(base.triangles)))

    @classmethod
    def from_refinement(cls, refinement):
        return cls(refinement.original, refinement.triangulation, refinement.parent)

    @cached_property
    def locations(self):
        """
        For every vertex, ``("vertex", v)``, ``("edge", e)`` or
        ``("face", t)``: the open base simplex containing it.
        """
        found = {}
        for w in range(self.tri.vertex_count):
            parents = {self.parent[t] for t in self.tri.fan(w)}
            if len(parents) == 1:
                (t,) = parents
                found[w] = ("face", t)
                continue
            common = set.intersection(*(set(self.base.triangles[t]) for t in parents))
            if len(parents) == 2:
                found[w] = ("edge", edge_key(*common))
            else:
                (v,) = common
                found[w] = ("vertex", v)
        return found

    def vertex_at(self, v):
        for w, location in self.locations.items():
            if location == ("vertex", v):
                return w
        return None
