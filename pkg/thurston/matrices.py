"""
Integer 2x2 matrices: exact eigenvalue classification and conjugacy over
GL2(Z).

Conjugacy is reduced to equivalence of binary quadratic forms. For
``A = [[a, b], [c, d]]`` put ``Q_A(v) = det(v, A v) = c x^2 + (d - a) x y - b y^2``;
then ``S A S^-1 = B`` exactly when ``tr A = tr B`` and
``Q_B o S = det(S) Q_A``. Forms are written ``(a, b, c)`` for
``a x^2 + b x y + c y^2`` and act on the right: ``F o U`` is
``v -> F(U v)``.
"""
import itertools
import logging
from math import gcd, isqrt

import sympy
from sympy.core.intfunc import igcdex

from thurston.exceptions import BadMatrix
from thurston.settings import get_settings

logger = logging.getLogger(__name__)

EXPANDING = "expanding"
HYPERBOLIC_NONEXPANDING = "hyperbolic_nonexpanding"
HAS_UNIT_EIGENVALUE = "has_unit_eigenvalue"

IDENTITY_2 = sympy.ImmutableMatrix([[1, 0], [0, 1]])
FLIP = sympy.ImmutableMatrix([[1, 0], [0, -1]])


def as_matrix(m):
    if isinstance(m, str):
        m = [int(x) for x in m.split()]
    m = sympy.ImmutableMatrix(m)
    if m.shape != (2, 2):
        m = m.reshape(2, 2)
    return m


class EigenClass:
    """
    ``kind`` is one of :data:`EXPANDING`, :data:`HYPERBOLIC_NONEXPANDING`
    and :data:`HAS_UNIT_EIGENVALUE`; ``eigenvalues`` is the pair of
    integer eigenvalues when there is one.
    """

    def __init__(self, kind, eigenvalues=None):
        self.kind = kind
        self.eigenvalues = eigenvalues

    def __repr__(self):
        if self.eigenvalues:
            return "EigenClass({}, integer_pair{})".format(self.kind, self.eigenvalues)
        return "EigenClass({})".format(self.kind)

    def __eq__(self, other):
        if isinstance(other, str):
            return self.kind == other
        return (self.kind, self.eigenvalues) == (other.kind, other.eigenvalues)

    def __hash__(self):
        return hash((self.kind, self.eigenvalues))

    @property
    def is_integer_pair(self):
        return self.eigenvalues is not None


def characteristic(A):
    A = as_matrix(A)
    return int(A.trace()), int(A.det())


def eigen_class(A) -> EigenClass:
    """
    Signs of ``p(t) = t^2 - tr t + det`` at ``1`` and ``-1``: a root at
    ``+-1`` is a unit eigenvalue; otherwise, since ``|det| >= 2``, both
    roots leave the unit disk unless ``p(1) p(-1) < 0``.
    """
    tr, det = characteristic(A)
    if abs(det) < 2:
        raise BadMatrix("|det A| = {} is smaller than 2.".format(abs(det)))
    at_one = 1 - tr + det
    at_minus_one = 1 + tr + det
    discriminant = tr * tr - 4 * det
    eigenvalues = None
    if discriminant >= 0 and isqrt(discriminant) ** 2 == discriminant:
        root = isqrt(discriminant)
        eigenvalues = ((tr - root) // 2, (tr + root) // 2)
    if at_one == 0 or at_minus_one == 0:
        return EigenClass(HAS_UNIT_EIGENVALUE, eigenvalues)
    if at_one * at_minus_one > 0:
        return EigenClass(EXPANDING, eigenvalues)
    return EigenClass(HYPERBOLIC_NONEXPANDING, eigenvalues)


def require_no_unit_eigenvalue(A):
    if eigen_class(A).kind == HAS_UNIT_EIGENVALUE:
        raise BadMatrix("{} has an eigenvalue 1 or -1.".format(list(as_matrix(A))))


# binary quadratic forms


def form_of(A):
    A = as_matrix(A)
    a, b, c, d = (int(x) for x in A)
    return (c, d - a, -b)


def act(form, U):
    """
    ``F o U``.
    """
    a, b, c = form
    p, q, r, s = (int(x) for x in U)
    return (
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def _translate(form, r):
    U = sympy.ImmutableMatrix([[1, r], [0, 1]])
    return act(form, U), U


def _rho(form, s):
    U = sympy.ImmutableMatrix([[0, -1], [1, s]])
    return act(form, U), U


def _reduce_definite(form):
    """
    Gauss reduction of a positive definite form, with the transformation.
    """
    a, b, c = form
    total = IDENTITY_2
    r = (a - b) // (2 * a)
    form, U = _translate(form, r)
    total = total * U
    a, b, c = form
    while not (a < c or (a == c and b >= 0)):
        s = (c + b) // (2 * c)
        form, U = _rho(form, s)
        total = total * U
        a, b, c = form
    return form, total


def _below_root(x, D):
    # x < sqrt(D) for a non-square D > 0
    return x < 0 or x * x < D


def _is_reduced_indefinite(form, D):
    a, b, _ = form
    return (
        b > 0
        and _below_root(b, D)
        and _below_root(2 * abs(a) - b, D)
        and not _below_root(2 * abs(a) + b, D)
    )


def _normalise_indefinite(form, D):
    a, b, _ = form
    m = 2 * abs(a)
    if a * a > D:
        target = b % m
        if target > abs(a):
            target -= m
    else:
        root = isqrt(D)
        target = root - (root - b) % m
    return _translate(form, (target - b) // (2 * a))


def _rho_indefinite(form, D):
    a, b, c = form
    flipped, U = _rho((a, b, c), 0)
    normal, V = _normalise_indefinite(flipped, D)
    return normal, U * V


def _reduce_indefinite(form, D):
    form, total = _normalise_indefinite(form, D)
    while not _is_reduced_indefinite(form, D):
        form, U = _rho_indefinite(form, D)
        total = total * U
    return form, total


def reduced_cycle(form):
    """
    The cycle of reduced forms properly equivalent to an indefinite form of
    non-square discriminant, each with the transformation from ``form``.
    """
    a, b, c = form
    D = b * b - 4 * a * c
    start, total = _reduce_indefinite(form, D)
    cycle = [(start, total)]
    current = start
    while True:
        current, U = _rho_indefinite(current, D)
        total = total * U
        if current == start:
            return cycle
        cycle.append((current, total))


def _complete(x, y):
    """
    A matrix in SL2(Z) with first column ``(x, y)``.
    """
    s, r, _ = igcdex(x, y)
    # x s + y r = 1, so det [[x, -r], [y, s]] = 1
    return sympy.ImmutableMatrix([[x, -r], [y, s]])


def _square_canonical(form, root):
    """
    The unique ``(0, root, c)`` with ``0 <= c < root`` (or ``(0, 0, c)``)
    properly equivalent to a form of discriminant ``root^2``.
    """
    a, b, c = form
    if a == 0:
        # y (b x + c y)
        g = gcd(b, c) or 1
        directions = [(1, 0), (c // g, -b // g)]
    else:
        directions = []
        for sign in (1, -1):
            num, den = -b + sign * root, 2 * a
            g = gcd(num, den)
            directions.append((num // g, den // g))
    for x, y in directions:
        U = _complete(x, y)
        image = act(form, U)
        if image[0] != 0 or (root and image[1] != root):
            continue
        if root:
            shifted, V = _translate(image, -(image[2] // root))
            return shifted, U * V
        return image, U
    raise AssertionError("no isotropic direction for {}".format(form))


def form_representative(form):
    """
    A proper-equivalence representative and a matrix ``U`` with
    ``form o U`` equal to it, or ``None`` for the reduced cycles of
    indefinite forms, which have no single representative.
    """
    a, b, c = form
    D = b * b - 4 * a * c
    if D < 0:
        if a < 0:
            reduced, U = _reduce_definite((-a, -b, -c))
            return tuple(-x for x in reduced), U
        return _reduce_definite(form)
    root = isqrt(D)
    if root * root == D:
        return _square_canonical(form, root)
    return None


def proper_equivalence(F, G):
    """
    ``U`` in SL2(Z) with ``F o U = G``, or ``None``.
    """
    if F == G:
        return IDENTITY_2
    a, b, c = F
    D = b * b - 4 * a * c
    if D != G[1] ** 2 - 4 * G[0] * G[2]:
        return None
    if F == (0, 0, 0) or G == (0, 0, 0):
        return None
    canonical_f = form_representative(F)
    if canonical_f is not None:
        (rf, uf), (rg, ug) = canonical_f, form_representative(G)
        if rf != rg:
            return None
        return uf * ug.inv()
    target, ug = _reduce_indefinite(G, D)
    for reduced, uf in reduced_cycle(F):
        if reduced == target:
            return uf * ug.inv()
    return None


class Conjugacy:
    """
    Witnesses ``S`` with ``S A1 S^-1 = A2``: ``sl2`` has determinant 1,
    ``gl2`` determinant -1. Either may be ``None``.
    """

    def __init__(self, sl2=None, gl2=None):
        self.sl2 = sl2
        self.gl2 = gl2

    def __repr__(self):
        return "Conjugacy(sl2={}, gl2={})".format(
            None if self.sl2 is None else list(self.sl2),
            None if self.gl2 is None else list(self.gl2),
        )

    @property
    def witness(self):
        return self.sl2 if self.sl2 is not None else self.gl2

    @property
    def variant(self):
        return "SL2" if self.sl2 is not None else "GL2"


def conjugates(S, A1, A2) -> bool:
    S, A1, A2 = as_matrix(S), as_matrix(A1), as_matrix(A2)
    return abs(S.det()) == 1 and S * A1 == A2 * S


def gl2z_conjugacy(A1, A2):
    """
    A :class:`Conjugacy` carrying every variant found, or ``None`` when
    ``A1`` and ``A2`` are not conjugate in GL2(Z).
    """
    A1, A2 = as_matrix(A1), as_matrix(A2)
    if characteristic(A1) != characteristic(A2):
        return None
    if A1 == A2:
        found = Conjugacy(sl2=IDENTITY_2)
        gl2 = conjugator(A1, A2, -1)
        found.gl2 = gl2
        return found
    F1, F2 = form_of(A1), form_of(A2)
    if F1 == (0, 0, 0) or F2 == (0, 0, 0):
        # scalar matrices only conjugate to themselves
        return None
    sl2 = conjugator(A1, A2, 1)
    gl2 = conjugator(A1, A2, -1)
    if sl2 is None and gl2 is None:
        logger.debug("%s and %s are not conjugate", list(A1), list(A2))
        return None
    return Conjugacy(sl2, gl2)


def conjugator(A1, A2, sign):
    F1, F2 = form_of(A1), form_of(A2)
    if F1 == (0, 0, 0):
        return IDENTITY_2 if sign == 1 else FLIP
    if sign == 1:
        S = proper_equivalence(F2, F1)
    else:
        U = proper_equivalence(act(F2, FLIP), tuple(-x for x in F1))
        S = None if U is None else FLIP * U
    if S is None:
        return None
    S = sympy.ImmutableMatrix(S)
    assert conjugates(S, A1, A2), (list(S), list(A1), list(A2))
    return S


def brute_force_conjugacy(A1, A2, bound=None):
    """
    Search ``S`` with entries in ``[-bound, bound]``. Finding nothing is
    only conclusive when the characteristic polynomials differ.
    """
    bound = get_settings().GL2Z_ORACLE_BOUND if bound is None else bound
    A1, A2 = as_matrix(A1), as_matrix(A2)
    if characteristic(A1) != characteristic(A2):
        return None
    values = range(-bound, bound + 1)
    for p, q, r, s in itertools.product(values, repeat=4):
        if abs(p * s - q * r) != 1:
            continue
        S = sympy.ImmutableMatrix([[p, q], [r, s]])
        if S * A1 == A2 * S:
            return S
    return None


def automorph(form):
    """
    The proper automorph of an indefinite form of non-square discriminant
    read off from one turn round its reduced cycle. It generates the proper
    automorphs up to sign.
    """
    a, b, c = form
    D = b * b - 4 * a * c
    start, total = _reduce_indefinite(form, D)
    current, around = _rho_indefinite(start, D)
    while current != start:
        current, step = _rho_indefinite(current, D)
        around = around * step
    # form o total = start and start o around = start
    return total * around * total.inv()
