from math import gcd

from rest_framework import serializers as rfs

from .settings import get_settings


def _triple():
    return rfs.ListField(child=rfs.IntegerField(min_value=0), min_length=3, max_length=3)


def _ids(**kwargs):
    return rfs.ListField(child=rfs.IntegerField(min_value=0), **kwargs)


class RationalField(rfs.Field):
    """
    A rational written ``[num, den]`` with ``den > 0`` and the fraction in
    lowest terms; a bare integer stands for ``[n, 1]``.
    """

    default_error_messages = {
        "invalid": "Expected an integer or a [num, den] pair.",
        "denominator": "The denominator must be positive.",
        "reduced": "{num}/{den} is not in lowest terms.",
    }

    def to_internal_value(self, data):
        from sympy import Rational

        if isinstance(data, bool):
            self.fail("invalid")
        if isinstance(data, int):
            return Rational(data)
        if not isinstance(data, list) or len(data) != 2:
            self.fail("invalid")
        num, den = data
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (num, den)):
            self.fail("invalid")
        if den <= 0:
            self.fail("denominator")
        if gcd(num, den) != 1:
            self.fail("reduced", num=num, den=den)
        return Rational(num, den)

    def to_representation(self, value):
        return [int(value.p), int(value.q)]


class TwistSerializer(rfs.Serializer):
    """
    One generator ``[curve_name, exponent]`` of a twist word.
    """

    curve = rfs.CharField()
    exponent = rfs.IntegerField()

    def to_internal_value(self, data):
        if not isinstance(data, list) or len(data) != 2:
            raise rfs.ValidationError("Expected a [curve_name, exponent] pair.")
        return super().to_internal_value({"curve": data[0], "exponent": data[1]})

    def to_representation(self, instance):
        curve, exponent = instance
        return [curve, exponent]


class TriangulationSerializer(rfs.Serializer):
    vertices = rfs.IntegerField(min_value=3)
    triangles = rfs.ListField(child=_triple(), min_length=1)


class AffineSectionSerializer(rfs.Serializer):
    """
    ``L(z) = A z + b`` with the lifts of the marked points and their
    dynamics; labels are integer strings.
    """

    A = rfs.ListField(
        child=rfs.ListField(child=rfs.IntegerField(), min_length=2, max_length=2),
        min_length=2,
        max_length=2,
    )
    b = rfs.ListField(child=RationalField(), min_length=2, max_length=2)
    q = rfs.IntegerField(min_value=1, required=False)
    lifts = rfs.DictField(
        child=rfs.ListField(child=RationalField(), min_length=2, max_length=2)
    )
    dynamics = rfs.DictField(child=rfs.IntegerField(min_value=0))

    def validate_lifts(self, value):
        for label in value:
            if not label.isdigit():
                raise rfs.ValidationError("Label {!r} is not a vertex id.".format(label))
        return value

    def validate(self, attrs):
        labels = set(attrs["lifts"])
        if set(attrs["dynamics"]) != labels:
            raise rfs.ValidationError({"dynamics": "The dynamics must list every lifted label."})
        for label, image in attrs["dynamics"].items():
            if str(image) not in labels:
                raise rfs.ValidationError(
                    {"dynamics": "Label {} maps to an unknown label {}.".format(label, image)}
                )
        return attrs


class MapFileSerializer(rfs.Serializer):
    """
    The map file: a simplicial branched cover between two triangulated
    spheres, optionally with an affine section and named curves.
    """

    format_version = rfs.IntegerField()
    vertices = rfs.IntegerField(min_value=3, required=False)
    triangles = rfs.ListField(child=_triple(), min_length=1, required=False)
    marked = _ids(required=False)
    vertex_image = _ids(required=False)
    triangle_image = _ids(required=False)
    codomain = TriangulationSerializer(required=False)
    parent = _ids(required=False)
    domain_marked = _ids(required=False)
    twist = TwistSerializer(many=True, required=False)
    curves = rfs.DictField(child=_ids(), required=False)
    affine = AffineSectionSerializer(required=False)

    map_keys = ("vertices", "triangles", "marked", "vertex_image", "triangle_image")

    def validate_format_version(self, value):
        expected = get_settings().FORMAT_VERSION
        if value != expected:
            raise rfs.ValidationError(
                "Format version {} is not supported; expected {}.".format(value, expected)
            )
        return value

    def validate(self, attrs):
        present = [key for key in self.map_keys if key in attrs]
        if present and len(present) != len(self.map_keys):
            missing = [key for key in self.map_keys if key not in attrs]
            raise rfs.ValidationError({missing[0]: "This field is required."})
        if not present and "affine" not in attrs:
            raise rfs.ValidationError("The document holds neither a map nor an affine section.")
        if present and "codomain" not in attrs:
            # a simplicial map of degree >= 2 never maps a triangulation onto itself
            raise rfs.ValidationError({"codomain": "This field is required."})
        for generator in attrs.get("twist", ()):
            if generator["curve"] not in attrs.get("curves", {}):
                raise rfs.ValidationError(
                    {"twist": "Unknown curve {!r}.".format(generator["curve"])}
                )
        return attrs
