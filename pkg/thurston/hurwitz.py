"""
Monodromy of PL branched covers and Hurwitz equivalence.

Sheets over the codomain are labelled by lifting along a spanning tree of
the dual graph whose edges cross the complement of a primal spanning tree
``Y``. Only crossings of ``Y`` permute sheets, so the loop around a vertex is
the product of the crossings of its ``Y``-edges, and the loops ordered by
the subtree recursion of ``Y`` multiply to the identity.
"""
import itertools
import logging
from collections import deque

import networkx as nx
from sympy.combinatorics import Permutation, PermutationGroup

from thurston.exceptions import BudgetExceeded
from thurston.settings import get_settings

logger = logging.getLogger(__name__)


class MonodromyTuple:
    """
    One permutation of the sheets per branch value, in an order whose
    product is the identity.
    """

    def __init__(self, branch_values, permutations, degree):
        self.branch_values = tuple(branch_values)
        self.permutations = tuple(Permutation(p, size=degree) for p in permutations)
        self.degree = degree

    def __repr__(self):
        return "MonodromyTuple({})".format(
            ", ".join(
                "{}: {}".format(v, p.cyclic_form) for v, p in zip(self.branch_values, self)
            )
        )

    def __iter__(self):
        return iter(self.permutations)

    def __len__(self):
        return len(self.permutations)

    @property
    def product(self):
        total = Permutation(list(range(self.degree)))
        for p in self.permutations:
            total = total * p
        return total

    @property
    def is_transitive(self):
        if self.degree == 1:
            return True
        generators = list(self.permutations) or [Permutation(self.degree - 1)]
        return PermutationGroup(generators).is_transitive()

    @property
    def passport(self):
        return tuple(sorted(cycle_type(p) for p in self.permutations))

    def canonical(self):
        return canonical_tuple(self.permutations, self.degree)[0]


def cycle_type(p):
    return tuple(sorted((len(c) for c in p.full_cyclic_form), reverse=True))


def _sheets(f, tree_edges, base):
    """
    ``sheets[t][i]``: the domain triangle over ``t`` on sheet ``i``.
    """
    t0, t1 = f.codomain.tri, f.domain.tri
    sheets = {base: tuple(sorted(f.preimage_triangles[base]))}
    queue = deque([base])
    while queue:
        t = queue.popleft()
        for e in t0.edges_of(t):
            if e in tree_edges:
                continue
            s = t0.across(t, e)
            if s in sheets:
                continue
            sheets[s] = tuple(_lift_step(f, t1, sigma, e) for sigma in sheets[t])
            queue.append(s)
    assert len(sheets) == len(t0.triangles), "cotree does not span"
    return sheets


def _lift_step(f, t1, sigma, edge):
    corner = {f.vertex_image[v]: v for v in t1.triangles[sigma]}
    a, b = edge
    return t1.across(sigma, (corner[a], corner[b]))


def _crossing(f, sheets, s, t):
    t0, t1 = f.codomain.tri, f.domain.tri
    edge = t0.shared_edge(s, t)
    position = {sigma: j for j, sigma in enumerate(sheets[t])}
    return Permutation([position[_lift_step(f, t1, sigma, edge)] for sigma in sheets[s]])


def _vertex_loop(f, sheets, v, parent):
    """
    The permutation of the loop around ``v`` starting just after the edge
    to ``parent`` and the children in the order the loop crosses them.
    """
    t0 = f.codomain.tri
    ring = t0.link(v)
    fan = t0.fan(v)
    n = len(fan)
    # crossing fan[i - 1] -> fan[i] goes over the edge {v, ring[i]}
    start = ring.index(parent) if parent is not None else 0
    total = Permutation(list(range(len(sheets[fan[0]]))))
    crossed = []
    for k in range(1, n + 1):
        i = (start + k) % n
        total = total * _crossing(f, sheets, fan[i - 1], fan[i])
        crossed.append(ring[i])
    return total, crossed


def monodromy_tuple(f) -> MonodromyTuple:
    t0 = f.codomain.tri
    graph = nx.Graph(list(t0.edges))
    root = min(graph.nodes)
    tree = nx.bfs_tree(graph, root)
    parent = {v: u for u, v in tree.edges}
    tree_edges = {tuple(sorted(e)) for e in tree.edges}
    sheets = _sheets(f, tree_edges, 0)

    loops = {}
    children = {}
    for v in graph.nodes:
        loop, crossed = _vertex_loop(f, sheets, v, parent.get(v))
        loops[v] = loop
        children[v] = [u for u in crossed if parent.get(u) == v]

    order = []

    def visit(v):
        for child in reversed(children[v]):
            visit(child)
        order.append(v)

    visit(root)
    critical_values = {f.vertex_image[v] for v in f.critical_points}
    branch = [v for v in order if v in critical_values]
    found = MonodromyTuple(branch, [loops[v] for v in branch], f.degree)
    assert found.product.is_Identity, "monodromy product is not the identity"
    assert found.is_transitive, "monodromy is not transitive"
    logger.debug("%r", found)
    return found


# Hurwitz equivalence


def canonical_tuple(perms, degree):
    """
    The least relabelling of the tuple under simultaneous conjugation, and
    the relabelling ``label`` (old sheet -> new sheet) producing it.
    """
    arrays = [p.array_form for p in perms]
    best = None
    for start in range(degree):
        label = {start: 0}
        queue = deque([start])
        pending = iter(range(degree))
        while len(label) < degree:
            if not queue:
                x = next(y for y in pending if y not in label)
                label[x] = len(label)
                queue.append(x)
            x = queue.popleft()
            for a in arrays:
                y = a[x]
                if y not in label:
                    label[y] = len(label)
                    queue.append(y)
        relabelled = [[0] * degree for _ in arrays]
        for new, a in zip(relabelled, arrays):
            for x in range(degree):
                new[label[x]] = label[a[x]]
        key = tuple(tuple(a) for a in relabelled)
        if best is None or key < best[0]:
            best = (key, label)
    return best


def braid_moves(arrays):
    """
    Tuples reached by one elementary braid move or its inverse.
    """
    perms = [Permutation(list(a)) for a in arrays]
    for i in range(len(perms) - 1):
        g, h = perms[i], perms[i + 1]
        yield perms[:i] + [g * h * g**-1, g] + perms[i + 2:]
        yield perms[:i] + [h, h**-1 * g * h] + perms[i + 2:]


def hurwitz_orbit(monodromy, max_states=None):
    """
    Canonical forms of every tuple in the braid orbit.
    """
    max_states = get_settings().HURWITZ_MAX_STATES if max_states is None else max_states
    degree = monodromy.degree
    start = monodromy.canonical()
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for moved in braid_moves(current):
            key = canonical_tuple(moved, degree)[0]
            if key not in seen:
                seen.add(key)
                queue.append(key)
                if len(seen) > max_states:
                    raise BudgetExceeded(
                        "The braid orbit has more than {} tuples.".format(max_states)
                    )
    logger.debug("braid orbit of %s tuples", len(seen))
    return seen


class HurwitzEquivalence:
    """
    Truthy when equivalent; ``bijection`` maps sheets of the first cover to
    sheets of the second when the branch correspondence was fixed.
    """

    def __init__(self, equivalent, bijection=None):
        self.equivalent = equivalent
        self.bijection = bijection

    def __repr__(self):
        return "HurwitzEquivalence({}, bijection={})".format(self.equivalent, self.bijection)

    def __bool__(self):
        return self.equivalent


def _as_tuple(cover):
    if isinstance(cover, MonodromyTuple):
        return cover
    return monodromy_tuple(cover)


def hurwitz_equivalent(first, second, correspondence=None, max_states=None):
    """
    With no ``correspondence`` decide whether the covers lie in one Hurwitz
    class; otherwise ``correspondence`` maps branch values of ``first`` to
    those of ``second`` and only a simultaneous conjugation is sought.
    """
    a, b = _as_tuple(first), _as_tuple(second)
    if a.degree != b.degree or len(a) != len(b) or a.passport != b.passport:
        return HurwitzEquivalence(False)
    if correspondence is not None:
        position = {v: i for i, v in enumerate(b.branch_values)}
        reordered = [b.permutations[position[correspondence[v]]] for v in a.branch_values]
        key_a, label_a = canonical_tuple(a.permutations, a.degree)
        key_b, label_b = canonical_tuple(reordered, b.degree)
        if key_a != key_b:
            return HurwitzEquivalence(False)
        back = {new: old for old, new in label_b.items()}
        return HurwitzEquivalence(True, {x: back[label_a[x]] for x in range(a.degree)})
    return HurwitzEquivalence(b.canonical() in hurwitz_orbit(a, max_states))


# exhaustive oracle


def enumerate_tuples(degree, cycle_types):
    """
    Canonical forms of every transitive tuple with the given cycle types
    and product the identity.
    """
    candidates = [
        [p for p in _all_permutations(degree) if cycle_type(p) == tuple(ct)] for ct in cycle_types
    ]
    found = set()
    for perms in itertools.product(*candidates):
        total = Permutation(list(range(degree)))
        for p in perms:
            total = total * p
        if not total.is_Identity:
            continue
        tuple_ = MonodromyTuple(range(len(perms)), perms, degree)
        if tuple_.is_transitive:
            found.add(tuple_.canonical())
    return found


def _all_permutations(degree):
    return [Permutation(list(p)) for p in itertools.permutations(range(degree))]


def hurwitz_classes(degree, cycle_types):
    """
    The braid orbits among :func:`enumerate_tuples`, as connected
    components of the move graph.
    """
    tuples = enumerate_tuples(degree, cycle_types)
    graph = nx.Graph()
    graph.add_nodes_from(tuples)
    for key in tuples:
        for moved in braid_moves(key):
            graph.add_edge(key, canonical_tuple(moved, degree)[0])
    return [frozenset(c) for c in nx.connected_components(graph)]
