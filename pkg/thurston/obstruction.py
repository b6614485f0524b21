"""
Thurston linear transformations, obstructions and Levy cycles.
"""
import itertools
import logging
from fractions import Fraction

import networkx as nx
import sympy

from thurston import lp
from thurston.budget import NO_CANDIDATE, NO_STANDARD_FORM, as_budget
from thurston.cover import domain_sides, pullback_curve
from thurston.curves import Multicurve, enumerate_multicurves, intersection_number
from thurston.exceptions import BudgetExceeded, DecompositionError
from thurston.signals import levy_cycle_found, obstruction_found

logger = logging.getLogger(__name__)


class ThurstonMatrix:
    """
    ``entries[i][j]`` is the sum of ``1/deg`` over the components of the
    preimage of ``multicurve[j]`` homotopic to ``multicurve[i]``;
    ``contributions[i][j]`` lists those degrees.
    """

    def __init__(self, multicurve, entries, contributions=None):
        self.multicurve = multicurve
        self.entries = tuple(tuple(Fraction(x) for x in row) for row in entries)
        n = len(self.entries)
        self.contributions = contributions or tuple(
            tuple(() for _ in range(n)) for _ in range(n)
        )

    def __repr__(self):
        return "ThurstonMatrix({})".format(
            [[str(x) for x in row] for row in self.entries]
        )

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        if isinstance(other, ThurstonMatrix):
            return self.entries == other.entries
        return self.entries == tuple(tuple(Fraction(x) for x in row) for row in other)

    def __hash__(self):
        return hash(self.entries)

    def as_lists(self):
        return [list(row) for row in self.entries]

    def scaled(self, n):
        return [[x * n for x in row] for row in self.entries]

    def submatrix(self, indices):
        return [[self.entries[i][j] for j in indices] for i in indices]

    def permuted(self, permutation):
        """
        The matrix of the multicurve reordered so that the new ``i``-th
        curve is the old ``permutation[i]``-th.
        """
        return [[self.entries[p][q] for q in permutation] for p in permutation]

    def equivalent_to(self, other):
        """
        Equal up to simultaneously reordering rows and columns; returns the
        permutation or ``None``.
        """
        if len(self) != len(other):
            return None
        target = [list(row) for row in other.entries]
        for permutation in itertools.permutations(range(len(self))):
            if self.permuted(permutation) == target:
                return permutation
        return None


def _matrix(m):
    if isinstance(m, ThurstonMatrix):
        return m.as_lists()
    return [[Fraction(x) for x in row] for row in m]


def thurston_matrix(f, multicurve) -> ThurstonMatrix:
    curves = list(multicurve)
    n = len(curves)
    index = {c: i for i, c in enumerate(curves)}
    entries = [[Fraction(0)] * n for _ in range(n)]
    contributions = [[[] for _ in range(n)] for _ in range(n)]
    for j, delta in enumerate(curves):
        for component, degree in pullback_curve(f, delta):
            i = index.get(component)
            if i is None:
                continue
            entries[i][j] += Fraction(1, degree)
            contributions[i][j].append(degree)
    return ThurstonMatrix(
        multicurve,
        entries,
        tuple(tuple(tuple(sorted(c)) for c in row) for row in contributions),
    )


def spectral_at_least_one(matrix) -> bool:
    return lp.spectral_radius_at_least_one(_matrix(matrix))


def is_simple_obstruction(matrix) -> bool:
    return lp.has_positive_supervector(_matrix(matrix))


def is_stable(f, multicurve) -> bool:
    members = set(multicurve)
    for curve in multicurve:
        for component, _ in pullback_curve(f, curve):
            if component.is_essential and component not in members:
                return False
    return True


def closure_under_pullback(f, multicurve, budget=None):
    """
    Add the essential preimage components until the multicurve is stable.
    Returns ``None`` when a new component meets the multicurve or the
    count exceeds ``|Q| - 3``.
    """
    budget = as_budget(budget)
    limit = len(f.marked) - 3
    current = list(multicurve)
    queue = list(current)
    while queue:
        budget.check("closure_under_pullback")
        curve = queue.pop(0)
        for component, _ in pullback_curve(f, curve):
            if not component.is_essential or component in current:
                continue
            if any(intersection_number(component, c) for c in current):
                return None
            if len(current) >= limit:
                return None
            current.append(component)
            queue.append(component)
    return Multicurve.sorted(current)


class Found:
    decided = True

    def __init__(self, multicurve, matrix):
        self.multicurve = multicurve
        self.matrix = matrix

    def __repr__(self):
        return "Found({!r})".format(self.multicurve)

    def __bool__(self):
        return True


class NotFoundWithinBudget:
    decided = False

    def __init__(self, weight, reason="weight"):
        self.weight = weight
        self.reason = reason

    def __repr__(self):
        return "NotFoundWithinBudget(weight={}, reason={!r})".format(self.weight, self.reason)

    def __bool__(self):
        return False


def _obstructions(f, budget):
    """
    Stable obstructions reached from the enumerated multicurves, in order
    of first discovery.
    """
    if f.reference is None:
        return
    seen = set()
    for candidate in enumerate_multicurves(f.reference, budget.weight, budget):
        if not spectral_at_least_one(thurston_matrix(f, candidate)):
            continue
        closed = closure_under_pullback(f, candidate, budget)
        if closed is None or closed in seen:
            continue
        seen.add(closed)
        # the candidate's matrix is a principal submatrix of the closed one
        matrix = thurston_matrix(f, closed)
        logger.debug("obstruction %r", closed)
        obstruction_found.send(sender=Found, map=f, multicurve=closed, matrix=matrix)
        yield Found(closed, matrix)


def search_obstruction(f, budget=None):
    """
    The first stable obstruction in enumeration order, or
    :class:`NotFoundWithinBudget`.
    """
    budget = as_budget(budget)
    try:
        for found in _obstructions(f, budget):
            logger.info("found obstruction %r", found.multicurve)
            return found
    except BudgetExceeded:
        return NotFoundWithinBudget(budget.weight, reason="seconds")
    budget.give_up("search_obstruction")
    return NotFoundWithinBudget(budget.weight)


def search_obstructions(f, budget=None):
    """
    Every stable obstruction reached within the weight budget. Raises
    :class:`BudgetExceeded` when the time budget runs out.
    """
    budget = as_budget(budget)
    return list(_obstructions(f, budget))


class LevyWitness:
    """
    ``cycle[i]`` has a degree-one preimage homotopic to ``cycle[i - 1]``.
    For degenerate witnesses ``disk_side[i]`` is the set of marked points in
    the disk ``D_i`` bounded by ``cycle[i]``.
    """

    def __init__(self, cycle, degrees, degenerate, disk_side=None):
        self.cycle = tuple(cycle)
        self.degrees = tuple(degrees)
        self.degenerate = degenerate
        self.disk_side = tuple(disk_side) if disk_side else None

    def __repr__(self):
        return "LevyWitness(length={}, degenerate={})".format(len(self.cycle), self.degenerate)


def _levy_graph(f, curves):
    graph = nx.DiGraph()
    graph.add_nodes_from(curves)
    members = set(curves)
    for b in curves:
        for preimage in pullback_curve(f, b):
            if preimage.degree == 1 and preimage.curve in members:
                graph.add_edge(preimage.curve, b, preimage=preimage)
    return graph


def _rotated(cycle):
    i = cycle.index(min(cycle))
    return cycle[i:] + cycle[:i]


def _small_side(curve, marked):
    outer, inner = curve.sides
    if len(outer) != len(inner):
        return min((outer, inner), key=len)
    first = min(outer | inner, key=marked.index)
    return outer if first in outer else inner


def _degenerate_disks(f, graph, cycle, flip):
    """
    The disks ``D_i`` if the restriction of ``f`` to the disk bounded by
    each degree-one preimage is a homeomorphism onto the next disk.
    """
    marked = list(f.marked)
    label_of = dict(zip(f.domain.marked, f.codomain.marked))
    critical = set(f.critical_points)
    disks = []
    for curve in cycle:
        side = _small_side(curve, marked)
        if flip:
            side = frozenset(marked) - side
        disks.append(side)
    n = len(cycle)
    for i in range(n):
        preimage = graph.edges[cycle[i], cycle[(i + 1) % n]]["preimage"]
        candidates = [
            s for s in domain_sides(f, preimage.walk)
            if frozenset(label_of[v] for v in s if v in label_of) == disks[i]
        ]
        if len(candidates) != 1:
            return None
        (disk,) = candidates
        if disk & critical:
            return None
        if frozenset(f.vertex_image[v] for v in disk) != disks[(i + 1) % n]:
            return None
    return disks


def detect_levy(f, multicurve):
    """
    A Levy cycle inside ``multicurve``, degenerate ones first, or ``None``.
    """
    curves = sorted(set(multicurve))
    if not curves:
        return None
    graph = _levy_graph(f, curves)
    cycles = sorted((_rotated(c) for c in nx.simple_cycles(graph)), key=lambda c: (len(c), c))
    logger.debug("%s Levy cycles among %s curves", len(cycles), len(curves))
    witness = None
    for cycle in cycles:
        for flip in (False, True):
            disks = _degenerate_disks(f, graph, cycle, flip)
            if disks is not None:
                witness = LevyWitness(cycle, [1] * len(cycle), True, disks)
                break
        if witness:
            break
    if witness is None and cycles:
        witness = LevyWitness(cycles[0], [1] * len(cycles[0]), False)
    if witness is not None:
        logger.info("found %r", witness)
        levy_cycle_found.send(sender=LevyWitness, map=f, witness=witness)
    return witness


# oracles


def _sympy_matrix(matrix):
    return sympy.Matrix(
        [[sympy.Rational(x.numerator, x.denominator) for x in row] for row in _matrix(matrix)]
    )


def brute_force_lambda_at_least_one(matrix) -> bool:
    """
    ``lambda(M) >= 1`` from the characteristic polynomial: the spectral
    radius of a nonnegative matrix is a real eigenvalue.
    """
    m = _sympy_matrix(matrix)
    if m.rows == 0:
        return False
    t = sympy.Symbol("t")
    poly = sympy.Poly(m.charpoly(t).as_expr(), t)
    return poly.count_roots(1) > 0


def brute_force_simple(matrix) -> bool:
    """
    Simple iff every index set closed under the matrix carries a block of
    spectral radius at least one.
    """
    entries = _matrix(matrix)
    n = len(entries)
    if n == 0:
        return False
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            rest = [j for j in range(n) if j not in subset]
            if any(entries[i][j] for i in subset for j in rest):
                continue
            block = [[entries[i][j] for j in subset] for i in subset]
            if not brute_force_lambda_at_least_one(block):
                return False
    return True


# canonical obstruction


def _disjointness_graph(curves):
    graph = nx.Graph()
    graph.add_nodes_from(curves)
    for a, b in itertools.combinations(curves, 2):
        if intersection_number(a, b) == 0:
            graph.add_edge(a, b)
    return graph


def _characterized(f, candidate, obstructions, budget):
    """
    Whether the first-return maps of the decomposition along ``candidate``
    are homeomorphisms, (2,2,2,2) maps whose remaining obstructions are all
    of the square-degree kind, or carry no further obstruction.
    """
    # imported here: decomposition depends on this module
    from thurston.decomposition import decompose_along

    gluing = decompose_along(f, candidate)
    members = candidate.as_set()
    for found in obstructions:
        extra = [c for c in found.multicurve if c not in members]
        if not extra:
            continue
        if any(intersection_number(c, d) for c in extra for d in candidate):
            continue
        pieces = {gluing.locate(c) for c in extra}
        returns = [gluing.return_map_of(p) for p in pieces]
        if any(r is None for r in returns):
            # an extra curve in a pre-periodic piece
            continue
        if all(r.is_homeomorphism for r in returns):
            continue
        indices = [found.multicurve.index(c) for c in extra]
        block = found.matrix.submatrix(indices)
        if not spectral_at_least_one(block):
            continue
        if all(r.orbifold.signature_id == 6 for r in returns):
            square = all(
                d * d == gluing.step_degree(gluing.locate(found.multicurve[i]))
                for i in indices
                for j in indices
                for d in found.matrix.contributions[i][j]
            )
            if square:
                continue
        logger.debug("%r fails on %r", candidate, found.multicurve)
        return False
    return True


def canonical_obstruction(f, budget=None):
    """
    The intersection of the stable multicurves, built from the
    obstructions found within budget, that satisfy the combinatorial
    characterization of the canonical obstruction.
    """
    budget = as_budget(budget)
    try:
        obstructions = search_obstructions(f, budget)
    except BudgetExceeded:
        return budget.give_up("canonical_obstruction")
    if not obstructions:
        return Multicurve([])
    found_curves = sorted({c for found in obstructions for c in found.multicurve})
    graph = _disjointness_graph(found_curves)
    candidates = [Multicurve([], check=False)] + [
        Multicurve.sorted(clique) for clique in nx.enumerate_all_cliques(graph)
    ]
    accepted = []
    try:
        for candidate in candidates:
            budget.check("canonical_obstruction")
            if not is_stable(f, candidate):
                continue
            if candidate and not spectral_at_least_one(thurston_matrix(f, candidate)):
                continue
            if _characterized(f, candidate, obstructions, budget):
                accepted.append(candidate.as_set())
    except BudgetExceeded:
        return budget.give_up("canonical_obstruction")
    except DecompositionError as exc:
        return budget.give_up("canonical_obstruction", NO_STANDARD_FORM, exc.message)
    if not accepted:
        return budget.give_up("canonical_obstruction", NO_CANDIDATE)
    result = Multicurve.sorted(frozenset.intersection(*accepted))
    if result and not (
        is_stable(f, result) and spectral_at_least_one(thurston_matrix(f, result))
    ):
        return budget.give_up(
            "canonical_obstruction", NO_CANDIDATE, "intersection is no obstruction"
        )
    logger.info("canonical obstruction %r", result)
    return result
