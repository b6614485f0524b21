class ThurstonError(Exception):
    """
    Base class of every error raised by :mod:`thurston`.

    ``pointer`` is a JSON pointer into the map file the error refers to,
    when there is one.
    """

    default_message = "Invalid input."

    def __init__(self, message=None, pointer=None):
        self.message = message or self.default_message
        self.pointer = pointer
        super().__init__(self.message)

    def __str__(self):
        if self.pointer:
            return "{}: {}".format(self.pointer, self.message)
        return self.message


# surface


class TriangulationError(ThurstonError):
    default_message = "Not a triangulated sphere."


class NonManifold(TriangulationError):
    default_message = "Some edge or vertex link violates the manifold condition."


class Disconnected(TriangulationError):
    default_message = "The complex is not connected."


class WrongEuler(TriangulationError):
    default_message = "The Euler characteristic is not 2."


# cover


class MapError(ThurstonError):
    default_message = "Not a PL Thurston map."


class NotSimplicial(MapError):
    default_message = "A triangle is not mapped bijectively onto a triangle."


class OrientationReversed(MapError):
    default_message = "A triangle is mapped with reversed orientation."


class NotACover(MapError):
    default_message = "The map is not a branched cover of degree at least 2."


class MarkedSetNotInvariant(MapError):
    default_message = "The marked set is not forward invariant."


class PostcriticalNotMarked(MapError):
    default_message = "A postcritical point is not marked."


class BranchPointNotVertex(MapError):
    default_message = "A branch value is not a vertex of the triangulation."


class MissingIdentity(MapError):
    default_message = (
        "The map carries no parent data, so the identity isotopy class of "
        "the sphere is unknown."
    )


class NotLiftable(MapError):
    default_message = "The mapping class does not lift through the map."


# curves


class CurveError(ThurstonError):
    default_message = "Invalid curve."


class NotEmbedded(CurveError):
    default_message = "The edge path is not embedded."


class NotClosed(CurveError):
    default_message = "The edge path is not closed."


class CurveNotEssential(CurveError):
    default_message = "The curve is not essential."


class NoReferenceTriangulation(CurveError):
    default_message = (
        "The marked sphere has no triangulation with vertex set equal to the "
        "marked set."
    )


# parabolic


class ParabolicError(ThurstonError):
    default_message = "Invalid affine data."


class NotParabolic(ParabolicError):
    default_message = "The orbifold of the map is not parabolic."


class BadMatrix(ParabolicError):
    default_message = "The matrix has an eigenvalue equal to 1 or -1."


class NotPeriodic(ParabolicError):
    default_message = "The marked point is not periodic with the given period."


class NotInGeneratingSet(ParabolicError):
    default_message = "The word uses a generator outside the lifting set."


class UnsupportedMarking(ParabolicError):
    default_message = (
        "Marked points outside the postcritical set are only placed for maps "
        "without a stored twist."
    )


# decomposition


class DecompositionError(ThurstonError):
    default_message = "The multicurve does not decompose the sphere."


class NotStable(DecompositionError):
    default_message = "The multicurve is not stable under pullback."


class NotNested(DecompositionError):
    default_message = "The curves of the multicurve cross or repeat."


# budgets


class BudgetExceeded(ThurstonError):
    default_message = "The search budget was exhausted."


# files


class FileFormatError(ThurstonError):
    default_message = "Invalid map file."


class ParseError(FileFormatError):
    default_message = "The document is not valid JSON."


class ValidationError(FileFormatError):
    default_message = "The document does not describe a valid object."


# command line


class UsageError(ThurstonError):
    default_message = "Invalid command line."
