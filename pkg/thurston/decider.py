"""
Thurston equivalence of two PL maps within a budget.

Invariants come first: each one that differs is returned as the certificate
of a :class:`NotEquivalent`. Then witnesses are searched: a simplicial
relabelling, the twist lattice of the canonical obstruction, the affine
models of ``(2,2,2,2)`` maps and finally liftable twist words. Each
:class:`Equivalent` carries a witness that has been checked exactly.
"""
import itertools
import logging
from collections import Counter

from thurston.budget import (
    BUDGET_EXHAUSTED,
    HOMEOMORPHISM_PIECE,
    SELF_EQUIVALENCES,
    UNSUPPORTED_MATRIX,
    Inconclusive,
    as_budget,
)
from thurston.cover import lift_word, orbifold_data
from thurston.curves import (
    IDENTITY,
    MappingClassWord,
    enumerate_mapping_classes,
    is_identity_class,
)
from thurston.decomposition import (
    decompose_along,
    solve_twist_equation,
    standard_form,
    twist_modulus,
)
from thurston.exceptions import BudgetExceeded, NotLiftable, ParabolicError
from thurston.hurwitz import hurwitz_equivalent, monodromy_tuple
from thurston.obstruction import canonical_obstruction, thurston_matrix
from thurston.parabolic import (
    PILLOWCASE,
    LevyPair,
    affine_equivalence,
    extract_affine_model,
    geometrize,
)
from thurston.surface import isomorphisms, rotations

logger = logging.getLogger(__name__)

IDENTICAL = "identity"
RELABELLING = "relabelling"
TWIST_LATTICE = "twist_lattice"
AFFINE = "affine"
WORD = "word"


class Equivalent:
    """
    ``witness`` is a twist word ``h`` with ``g = h o f o h^-1`` up to
    isotopy, or an affine conjugacy of the models for ``AFFINE``.
    ``relabelling`` is the codomain vertex map applied to ``g`` first.
    """

    decided = True

    def __init__(self, witness, kind=WORD, relabelling=None):
        self.witness = witness
        self.kind = kind
        self.relabelling = relabelling

    def __repr__(self):
        return "Equivalent({}, {!r})".format(self.kind, self.witness)

    def __bool__(self):
        return True


class NotEquivalent:
    """
    ``invariant`` names the invariant that differs.
    """

    decided = True

    def __init__(self, invariant, detail=""):
        self.invariant = invariant
        self.detail = detail

    def __repr__(self):
        return "NotEquivalent({!r})".format(self.invariant)

    def __bool__(self):
        return False


# invariants


def _portrait_bijections(f, g):
    """
    Bijections of the marked sets conjugating the dynamics and keeping the
    local degrees.
    """
    pf, pg = f.portrait, g.portrait
    if len(pf.labels) != len(pg.labels):
        return
    for image in itertools.permutations(pg.labels):
        pi = dict(zip(pf.labels, image))
        if all(
            pi[pf.dynamics[x]] == pg.dynamics[pi[x]]
            and pf.local_degree(x) == pg.local_degree(pi[x])
            for x in pf.labels
        ):
            yield pi


def _return_key(r):
    return (r.degree, r.orbifold.signature, r.is_homeomorphism)


class PieceOracle:
    """
    Compares the first-return maps of two corresponding periodic thick
    parts. ``compare`` answers ``False`` when they cannot be equivalent and
    ``None`` when undecided.
    """

    reason = BUDGET_EXHAUSTED

    def applies(self, r) -> bool:
        raise NotImplementedError

    def compare(self, first, second):
        if _return_key(first) != _return_key(second):
            return False
        return None


class HomeomorphismOracle(PieceOracle):
    reason = HOMEOMORPHISM_PIECE

    def applies(self, r):
        return r.is_homeomorphism


class ParabolicOracle(PieceOracle):
    reason = SELF_EQUIVALENCES

    def applies(self, r):
        return not r.is_homeomorphism and r.orbifold.is_parabolic

    def compare(self, first, second):
        if super().compare(first, second) is False:
            return False
        if len(first.postcritical) != len(second.postcritical):
            return False
        return None


class HyperbolicOracle(PieceOracle):
    def applies(self, r):
        return not r.is_homeomorphism and not r.orbifold.is_parabolic

    def compare(self, first, second):
        if super().compare(first, second) is False:
            return False
        ranks = sorted(len(first.portrait.preimages[x]) for x in first.portrait.labels)
        other = sorted(len(second.portrait.preimages[x]) for x in second.portrait.labels)
        return False if ranks != other else None


PIECE_ORACLES = (HomeomorphismOracle(), ParabolicOracle(), HyperbolicOracle())


def _oracle_for(r, oracles):
    return next(o for o in oracles if o.applies(r))


def compare_invariants(f, g):
    """
    A :class:`NotEquivalent` for the first cheap invariant that differs,
    else ``None``.
    """
    if f.degree != g.degree:
        return NotEquivalent("degree", "{} != {}".format(f.degree, g.degree))
    if len(f.marked) != len(g.marked):
        return NotEquivalent("marked_points", "{} != {}".format(len(f.marked), len(g.marked)))
    of, og = orbifold_data(f), orbifold_data(g)
    if of.signature != og.signature:
        return NotEquivalent("orbifold", "{} != {}".format(of.signature_text, og.signature_text))
    if next(_portrait_bijections(f, g), None) is None:
        return NotEquivalent("portrait", "no bijection of marked points conjugates the dynamics")
    first, second = monodromy_tuple(f), monodromy_tuple(g)
    if first.passport != second.passport:
        return NotEquivalent("passport", "{} != {}".format(first.passport, second.passport))
    return hurwitz_certificate(first, second)


def hurwitz_certificate(first, second, max_states=None):
    """
    A :class:`NotEquivalent` when the monodromy tuples lie in different
    braid orbits; ``None`` when they agree or the orbit is too large.
    """
    try:
        found = hurwitz_equivalent(first, second, max_states=max_states)
    except BudgetExceeded as exc:
        logger.debug("Hurwitz class undecided: %s", exc.message)
        return None
    if found:
        return None
    return NotEquivalent("hurwitz_class", "the monodromy tuples lie in different braid orbits")


def compare_obstructions(f, g, budget=None, oracles=PIECE_ORACLES):
    """
    Compare canonical obstructions, their Thurston matrices and the
    first-return maps of the pieces. Returns ``(certificate, multicurve, reason)``
    where ``multicurve``, the canonical obstruction of ``f``, is ``None``
    when it could not be found.
    """
    budget = as_budget(budget)
    gf = canonical_obstruction(f, budget)
    gg = canonical_obstruction(g, budget)
    if isinstance(gf, Inconclusive) or isinstance(gg, Inconclusive):
        return None, None, BUDGET_EXHAUSTED
    if len(gf) != len(gg):
        return (
            NotEquivalent("canonical_obstruction", "{} != {} curves".format(len(gf), len(gg))),
            gf,
            None,
        )
    if not gf:
        return None, gf, None
    mf, mg = thurston_matrix(f, gf), thurston_matrix(g, gg)
    if mf.equivalent_to(mg) is None:
        return NotEquivalent("thurston_matrix", "{!r} != {!r}".format(mf, mg)), gf, None
    try:
        df, dg = decompose_along(f, gf), decompose_along(g, gg)
        rf, rg = df.first_return_maps(), dg.first_return_maps()
    except BudgetExceeded:
        return None, gf, BUDGET_EXHAUSTED
    if Counter(map(_return_key, rf)) != Counter(map(_return_key, rg)):
        return NotEquivalent("first_return", "the first-return maps differ"), gf, None
    reason = None
    for r in rf:
        oracle = _oracle_for(r, oracles)
        matching = [s for s in rg if _return_key(s) == _return_key(r)]
        verdicts = [oracle.compare(r, s) for s in matching]
        if all(v is False for v in verdicts):
            return NotEquivalent("first_return", "no piece of g matches {!r}".format(r)), gf, None
        if reason is None and oracle.reason != BUDGET_EXHAUSTED:
            reason = oracle.reason
    try:
        found = next(piece_correspondences(df, dg, budget, oracles), None)
    except BudgetExceeded:
        return None, gf, BUDGET_EXHAUSTED
    if found is None:
        detail = "no matching of curves and thick parts respects the dynamics"
        return NotEquivalent("piece_correspondence", detail), gf, None
    return None, gf, reason


def _curve_bijections(mf, mg, budget):
    """
    Bijections ``sigma`` of curve indices with ``mg[sigma i][sigma j] = mf[i][j]``.
    """
    n = len(mf)
    for sigma in itertools.permutations(range(n)):
        budget.check("piece_correspondence")
        if all(mg[sigma[i]][sigma[j]] == mf[i][j] for i in range(n) for j in range(n)):
            yield sigma


def _ends(gluing, j):
    return frozenset((gluing.outside_of(j), j + 1))


def _pieces_agree(df, dg, tau, oracles):
    for X in df.pieces:
        Y = dg.pieces[tau[X.index]]
        if len(X.labels) != len(Y.labels):
            return False
        if tau[df.piece_map[X.index]] != dg.piece_map[Y.index]:
            return False
        if df.step_degree(X.index) != dg.step_degree(Y.index):
            return False
        first, second = df.return_map_of(X.index), dg.return_map_of(Y.index)
        if (first is None) != (second is None):
            return False
        if first is not None and _oracle_for(first, oracles).compare(first, second) is False:
            return False
    return True


def piece_correspondences(df, dg, budget=None, oracles=PIECE_ORACLES):
    """
    Pairs ``(sigma, tau)`` of a curve bijection keeping the Thurston matrix
    and the piece bijection it induces on the thick parts, under which the
    step maps and first-return maps of the two decompositions agree.
    """
    budget = as_budget(budget)
    mf = thurston_matrix(df.map, df.multicurve).as_lists()
    mg = thurston_matrix(dg.map, dg.multicurve).as_lists()
    count = len(df.pieces)
    if count != len(dg.pieces):
        return
    for sigma in _curve_bijections(mf, mg, budget):
        for tau in itertools.permutations(range(count)):
            budget.check("piece_correspondence")
            if any(
                frozenset(tau[x] for x in _ends(df, j)) != _ends(dg, sigma[j])
                for j in range(len(sigma))
            ):
                continue
            if _pieces_agree(df, dg, tau, oracles):
                yield sigma, tau


# witnesses


def lift_identity_holds(f, phi, h) -> bool:
    """
    Whether ``phi = Lift(h) o h^-1`` up to isotopy rel the marked set.
    """
    try:
        lifted = lift_word(f, h)
    except NotLiftable:
        return False
    return is_identity_class(h.inverse().then(lifted).then(phi.inverse()), f.reference)


def _twist_vector(phi, multicurve):
    """
    Exponents of ``phi`` when it is a multitwist on ``multicurve``.
    """
    exponents = [0] * len(multicurve)
    for curve, k in phi:
        if curve not in multicurve:
            return None
        exponents[multicurve.index(curve)] += k
    return exponents


def twist_lattice_witness(f, phi, multicurve, budget=None):
    """
    Solve ``(M - I) e = c`` for the twist exponents ``e = n + N x`` of
    ``h`` about the curves of ``multicurve``, ``c`` those of ``phi``, one
    residue ``n`` in ``[0, N)^Γ`` at a time.
    """
    budget = as_budget(budget)
    lattice = twist_modulus(standard_form(f, multicurve, budget))
    multicurve = lattice.multicurve
    c = _twist_vector(phi, multicurve)
    if c is None:
        return None
    M, N, k = lattice.matrix, lattice.N, len(multicurve)
    for n in itertools.product(range(N), repeat=k):
        budget.check("twist_lattice")
        rhs = [sum(M[i][j] * n[j] for j in range(k)) - n[i] - c[i] for i in range(k)]
        if any(x.denominator != 1 for x in rhs):
            continue
        x = solve_twist_equation(lattice, [int(v) for v in rhs], [0] * k)
        if x is None:
            continue
        h = MappingClassWord(
            (curve, n[i] + N * x[i]) for i, curve in enumerate(multicurve)
        )
        if lift_identity_holds(f, phi, h):
            return h
    return None


def affine_witness(f, g):
    """
    ``(witness or None, reason)`` for two ``(2,2,2,2)`` maps, compared on
    their marked affine models; ``reason`` is ``None`` when decided.
    """
    try:
        mf, mg = extract_affine_model(f), extract_affine_model(g)
        first, second = geometrize(mf), geometrize(mg)
    except ParabolicError:
        return None, UNSUPPORTED_MATRIX
    if isinstance(first, LevyPair) or isinstance(second, LevyPair):
        if isinstance(first, LevyPair) != isinstance(second, LevyPair):
            return NotEquivalent("levy_cycle", "only one map has a degenerate Levy cycle"), None
        return None, SELF_EQUIVALENCES
    witness = affine_equivalence(first, second, orientation_preserving=True)
    if witness is None:
        return NotEquivalent("affine_model", "the affine models are not conjugate"), None
    assert witness.holds(first, second), "affine witness does not verify"
    return Equivalent(witness, AFFINE), None


def _triangle_map(a, b, vertex_map):
    """
    Triangle index map of a vertex map, or ``None`` when it does not carry
    oriented triangles onto oriented triangles.
    """
    table = []
    for t in a.triangles:
        image = tuple(vertex_map[v] for v in t)
        j = b.by_vertex_set.get(frozenset(image))
        if j is None or image not in rotations(b.triangles[j]):
            return None
        table.append(j)
    return table


def relabelling(f, g):
    """
    Codomain and domain vertex maps carrying the simplicial data of ``f``
    (twist ignored) onto that of ``g``, or ``None``.
    """
    a1, b1 = f.domain.tri, g.domain.tri
    a0, b0 = f.codomain.tri, g.codomain.tri
    if a0.vertex_count != b0.vertex_count:
        return None
    for sigma1 in isomorphisms(a1, b1):
        sigma0 = {}
        if any(
            sigma0.setdefault(f.vertex_image[v], g.vertex_image[w]) != g.vertex_image[w]
            for v, w in sigma1.items()
        ):
            continue
        if len(sigma0) != a0.vertex_count or len(set(sigma0.values())) != len(sigma0):
            continue
        if {sigma0[q] for q in f.marked} != set(g.marked):
            continue
        tri0 = _triangle_map(a0, b0, sigma0)
        tri1 = _triangle_map(a1, b1, sigma1)
        if tri0 is None or tri1 is None:
            continue
        position = {q: i for i, q in enumerate(g.codomain.marked)}
        if any(
            sigma1[v] != g.domain.marked[position[sigma0[q]]]
            for v, q in zip(f.domain.marked, f.codomain.marked)
        ):
            continue
        if (f.parent is None) != (g.parent is None):
            continue
        if f.parent is not None and any(
            g.parent[tri1[t]] != tri0[f.parent[t]] for t in range(len(a1.triangles))
        ):
            continue
        return sigma0, sigma1
    return None


def _word_search(f, phi, budget):
    for h in enumerate_mapping_classes(f.codomain, budget.word_length, budget):
        if lift_identity_holds(f, phi, h):
            return h
    return None


def decide_equivalence(f, g, budget=None, oracles=PIECE_ORACLES):
    """
    :class:`Equivalent`, :class:`NotEquivalent` or :class:`Inconclusive`.
    """
    budget = as_budget(budget)
    if f.same_combinatorics(g) and f.twist == g.twist:
        return Equivalent(IDENTITY, IDENTICAL)
    reason = BUDGET_EXHAUSTED
    try:
        certificate = compare_invariants(f, g)
        if certificate is not None:
            logger.info("not equivalent: %r", certificate)
            return certificate
        certificate, multicurve, obstruction_reason = compare_obstructions(f, g, budget, oracles)
        if certificate is not None:
            logger.info("not equivalent: %r", certificate)
            return certificate
        reason = obstruction_reason or reason

        found_relabelling = None
        target = g
        if not f.same_combinatorics(g) and not g.is_twisted:
            found_relabelling = relabelling(f, g)
            if found_relabelling is not None:
                target = f.with_twist(IDENTITY)

        sigma0 = found_relabelling[0] if found_relabelling else None
        if f.same_combinatorics(target) and f.reference is None:
            # no essential curves, every twist is trivial
            return Equivalent(IDENTITY, RELABELLING if sigma0 else IDENTICAL, sigma0)
        if f.same_combinatorics(target):
            # target = f o phi
            phi = target.twist.then(f.twist.inverse())
            if is_identity_class(phi, f.reference):
                return Equivalent(IDENTITY, RELABELLING if sigma0 else IDENTICAL, sigma0)
            if multicurve:
                h = twist_lattice_witness(f, phi, multicurve, budget)
                if h is not None:
                    return Equivalent(h, TWIST_LATTICE, sigma0)

        if orbifold_data(f).signature_id == PILLOWCASE:
            result, affine_reason = affine_witness(f, g)
            if result is not None:
                logger.info("%r", result)
                return result
            reason = affine_reason or reason

        if f.same_combinatorics(target):
            h = _word_search(f, phi, budget)
            if h is not None:
                return Equivalent(h, WORD, sigma0)
    except BudgetExceeded:
        return budget.give_up("decide_equivalence")
    return budget.give_up("decide_equivalence", reason)
