"""
Reading and writing map files.

A map file is a UTF-8 JSON document validated by
:class:`thurston.serializers.MapFileSerializer`. Writing is canonical (sorted
keys, two-space indent, trailing newline), so a file written by
:func:`serialize` reads back to the same bytes.
"""
import json
import logging
import os

from rest_framework.settings import api_settings

from thurston.corpus import AFFINE_CORPUS, CORPUS, build
from thurston.cover import build_pl_map, domain_marked_from_parent
from thurston.curves import MappingClassWord
from thurston.exceptions import FileFormatError, ParseError, ThurstonError, ValidationError
from thurston.parabolic import AffineQuotient, denominator
from thurston.serializers import MapFileSerializer, RationalField
from thurston.settings import get_settings
from thurston.surface import MarkedSphere, build_triangulation

logger = logging.getLogger(__name__)

BUNDLED_CORPUS = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus"
)


class MapDocument:
    """
    Everything a map file holds: the map (if any), the affine section (if
    any) and the named curves, which live on the reference triangulation
    of the codomain.
    """

    def __init__(self, map=None, affine=None, curves=None):
        self.map = map
        self.affine = affine
        self.curves = dict(curves or {})

    def __repr__(self):
        return "MapDocument(map={!r}, affine={!r}, curves={})".format(
            self.map, self.affine, sorted(self.curves)
        )

    @classmethod
    def of(cls, subject, curves=None):
        if isinstance(subject, AffineQuotient):
            return cls(affine=subject, curves=curves)
        return cls(map=subject, curves=curves)

    @property
    def subject(self):
        return self.map if self.map is not None else self.affine


def flatten_errors(errors, pointer=""):
    """
    Yield ``(json_pointer, message)`` for a nested serializer error
    structure.
    """
    if isinstance(errors, dict):
        for key in sorted(errors, key=str):
            if key == api_settings.NON_FIELD_ERRORS_KEY:
                child = pointer
            else:
                child = "{}/{}".format(pointer, key)
            yield from flatten_errors(errors[key], child)
    elif isinstance(errors, list):
        if all(isinstance(e, str) for e in errors):
            for e in errors:
                yield pointer, str(e)
        else:
            for i, e in enumerate(errors):
                yield from flatten_errors(e, "{}/{}".format(pointer, i))
    else:
        yield pointer, str(errors)


def _at(pointer, exc):
    if exc.pointer is None:
        exc.pointer = pointer
    return exc


def _triangulation(vertices, triangles, pointer):
    try:
        tri = build_triangulation(triangles, vertices)
    except ThurstonError as exc:
        raise _at(pointer, exc)
    return tri


def _map(data):
    t1 = _triangulation(data["vertices"], data["triangles"], "/triangles")
    codomain = data["codomain"]
    t0 = _triangulation(codomain["vertices"], codomain["triangles"], "/codomain/triangles")
    marked = data["marked"]
    parent = data.get("parent")
    if "domain_marked" in data:
        domain_marked = data["domain_marked"]
    elif parent is not None:
        domain_marked = domain_marked_from_parent(t1, t0, parent, marked)
    else:
        domain_marked = marked
    try:
        domain = MarkedSphere(t1, domain_marked)
    except ThurstonError as exc:
        raise _at("/domain_marked", exc)
    try:
        codomain = MarkedSphere(t0, marked)
    except ThurstonError as exc:
        raise _at("/marked", exc)
    return build_pl_map(domain, codomain, data["vertex_image"], data["triangle_image"], parent)


def _curves(f, data):
    curves = {}
    if not data:
        return curves
    reference = f.reference if f is not None else None
    if reference is None:
        raise ValidationError("Curves need a map with at least four marked points.", "/curves")
    size = len(reference.tri.edges)
    for name, coordinates in data.items():
        pointer = "/curves/{}".format(name)
        if len(coordinates) != size:
            raise ValidationError(
                "Expected {} edge coordinates, got {}.".format(size, len(coordinates)), pointer
            )
        try:
            curves[name] = reference.curve_from_coordinates(tuple(coordinates))
        except ThurstonError as exc:
            raise _at(pointer, exc)
    return curves


def _affine(data):
    lifts = {int(x): z for x, z in data["lifts"].items()}
    dynamics = {int(x): y for x, y in data["dynamics"].items()}
    try:
        return AffineQuotient(data["A"], data["b"], lifts, dynamics, data.get("q")).validate()
    except ThurstonError as exc:
        raise _at("/affine", exc)


def parse_document(content) -> MapDocument:
    if isinstance(content, bytes):
        try:
            content = content.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("The document is not UTF-8: {}.".format(exc.reason))
    try:
        raw = json.loads(content)
    except json.JSONDecodeError as exc:
        raise ParseError("Line {}, column {}: {}.".format(exc.lineno, exc.colno, exc.msg))
    serializer = MapFileSerializer(data=raw)
    if not serializer.is_valid():
        pointer, message = next(flatten_errors(serializer.errors))
        raise ValidationError(message, pointer)
    data = serializer.validated_data
    f = _map(data) if "vertices" in data else None
    curves = _curves(f, data.get("curves"))
    if data.get("twist"):
        word = MappingClassWord(
            (curves[g["curve"]], g["exponent"]) for g in data["twist"]
        )
        f = f.with_twist(word)
    affine = _affine(data["affine"]) if "affine" in data else None
    document = MapDocument(f, affine, curves)
    logger.debug("parsed %r", document)
    return document


def parse_map_file(content):
    """
    The PL Thurston map of a map file, or its affine quotient when the file
    holds only an affine section.
    """
    return parse_document(content).subject


def find_map_file(name):
    """
    A path given on the command line, or the name of a bundled map file
    searched in ``CORPUS_DIRS`` and the bundled corpus.
    """
    if os.path.exists(name):
        return name
    for directory in list(get_settings().CORPUS_DIRS) + [BUNDLED_CORPUS]:
        for candidate in (name, name + ".json"):
            path = os.path.join(directory, candidate)
            if os.path.exists(path):
                return path
    raise FileFormatError("No map file named {!r}.".format(name))


def load(name) -> MapDocument:
    """
    Read a map file. Names of bundled maps without a file on disk are built
    in memory.
    """
    try:
        path = find_map_file(name)
    except FileFormatError:
        stem, extension = os.path.splitext(os.path.basename(name))
        if extension not in ("", ".json", ".map"):
            raise
        if stem not in CORPUS and stem not in AFFINE_CORPUS:
            raise
        return MapDocument.of(build(stem))
    with open(path, "rb") as fp:
        content = fp.read()
    try:
        return parse_document(content)
    except ThurstonError as exc:
        exc.message = "{}: {}".format(os.path.basename(path), exc.message)
        raise


# writing


def _rational(x):
    return RationalField().to_representation(x)


def _affine_data(m):
    data = {
        "A": [[int(m.A[i, j]) for j in range(2)] for i in range(2)],
        "b": [_rational(x) for x in m.b],
        "lifts": {str(x): [_rational(c) for c in z] for x, z in m.lifts.items()},
        "dynamics": {str(x): int(y) for x, y in m.dynamics.items()},
    }
    if m.q != denominator(m.lifts.values()):
        data["q"] = m.q
    return data


def _default_domain_marked(f):
    if f.parent is not None:
        return tuple(domain_marked_from_parent(f.domain.tri, f.codomain.tri, f.parent, f.marked))
    return f.marked


def _map_data(f, curves):
    data = {
        "vertices": f.domain.tri.vertex_count,
        "triangles": [list(t) for t in f.domain.tri.triangles],
        "marked": list(f.marked),
        "vertex_image": list(f.vertex_image),
        "triangle_image": list(f.triangle_image),
        "codomain": {
            "vertices": f.codomain.tri.vertex_count,
            "triangles": [list(t) for t in f.codomain.tri.triangles],
        },
    }
    if f.parent is not None:
        data["parent"] = list(f.parent)
    if f.domain.marked != _default_domain_marked(f):
        data["domain_marked"] = list(f.domain.marked)
    if f.is_twisted:
        twist = []
        for curve, exponent in f.twist:
            name = next((n for n, c in curves.items() if c == curve), None)
            if name is None:
                name = "c{}".format(len(curves))
                while name in curves:
                    name += "_"
                curves[name] = curve
            twist.append([name, exponent])
        data["twist"] = twist
    return data


def serialize(subject, curves=None) -> bytes:
    """
    The canonical map file of a map, an affine quotient or a
    :class:`MapDocument`.
    """
    if not isinstance(subject, MapDocument):
        subject = MapDocument.of(subject, curves)
    curves = dict(subject.curves)
    data = {"format_version": get_settings().FORMAT_VERSION}
    if subject.map is not None:
        data.update(_map_data(subject.map, curves))
    if subject.affine is not None:
        data["affine"] = _affine_data(subject.affine)
    if curves:
        data["curves"] = {name: list(c.coordinates) for name, c in curves.items()}
    return (json.dumps(data, sort_keys=True, indent=2) + "\n").encode("utf-8")


def dump(subject, path, curves=None):
    with open(path, "wb") as fp:
        fp.write(serialize(subject, curves))
