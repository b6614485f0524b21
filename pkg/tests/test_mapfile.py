import json
import os
import tempfile

from django.test import override_settings

from thurston.corpus import build, corner_quotient
from thurston.cover import INFINITY, orbifold_data
from thurston.curves import dehn_twist
from thurston.exceptions import (
    FileFormatError,
    NotSimplicial,
    ParseError,
    ValidationError,
)
from thurston.mapfile import (
    MapDocument,
    dump,
    find_map_file,
    load,
    parse_document,
    parse_map_file,
    serialize,
)

from . import CorpusTestCase

AFFINE_2Z = {
    "format_version": 1,
    "affine": {
        "A": [[2, 0], [0, 2]],
        "b": [0, 0],
        "lifts": {"0": [0, 0], "1": [[1, 2], 0], "2": [0, [1, 2]], "3": [[1, 2], [1, 2]]},
        "dynamics": {"0": 0, "1": 0, "2": 0, "3": 0},
    },
}


def _document(**changes):
    data = json.loads(json.dumps(AFFINE_2Z))
    data["affine"].update(changes)
    return json.dumps(data)


class ParseTestCase(CorpusTestCase):
    def test__parse_map_file__affine_section(self):
        m = parse_map_file(json.dumps(AFFINE_2Z))
        self.assertEqual(m, corner_quotient([[2, 0], [0, 2]]))
        self.assertEqual(m.q, 2)

    def test__parse_document__not_json_raises_exc(self):
        with self.assertRaises(ParseError):
            parse_document("{")

    def test__parse_document__not_utf8_raises_exc(self):
        with self.assertRaises(ParseError):
            parse_document(b"\xff\xfe")

    def test__parse_document__not_reduced_raises_exc(self):
        with self.assertRaisesMessage(ValidationError, "2/4 is not in lowest terms.") as cm:
            parse_document(_document(b=[[2, 4], 0]))
        self.assertEqual(cm.exception.pointer, "/affine/b/0")

    def test__parse_document__negative_denominator_raises_exc(self):
        with self.assertRaises(ValidationError) as cm:
            parse_document(_document(b=[[1, -2], 0]))
        self.assertEqual(cm.exception.pointer, "/affine/b/0")

    def test__parse_document__unknown_image_raises_exc(self):
        with self.assertRaises(ValidationError) as cm:
            parse_document(_document(dynamics={"0": 0, "1": 0, "2": 0, "3": 7}))
        self.assertEqual(cm.exception.pointer, "/affine/dynamics")

    def test__parse_document__format_version_raises_exc(self):
        data = dict(AFFINE_2Z, format_version=2)
        with self.assertRaises(ValidationError) as cm:
            parse_document(json.dumps(data))
        self.assertEqual(cm.exception.pointer, "/format_version")

    def test__parse_document__empty_document_raises_exc(self):
        with self.assertRaisesMessage(
            ValidationError, "The document holds neither a map nor an affine section."
        ):
            parse_document(json.dumps({"format_version": 1}))

    def test__parse_document__missing_codomain_raises_exc(self):
        data = json.loads(serialize(build("z2")))
        del data["codomain"]
        with self.assertRaises(ValidationError) as cm:
            parse_document(json.dumps(data))
        self.assertEqual(cm.exception.pointer, "/codomain")

    def test__parse_document__short_triangle_image_raises_exc(self):
        data = json.loads(serialize(build("z2")))
        data["triangle_image"].pop()
        with self.assertRaises(NotSimplicial) as cm:
            parse_document(json.dumps(data))
        self.assertEqual(cm.exception.pointer, "/triangle_image")

    def test__parse_document__unknown_twist_curve_raises_exc(self):
        data = json.loads(serialize(build("z2")))
        data["twist"] = [["a", 1]]
        with self.assertRaises(ValidationError) as cm:
            parse_document(json.dumps(data))
        self.assertEqual(cm.exception.pointer, "/twist")


class SerializeTestCase(CorpusTestCase):
    corpus = ("z2", "basilica", "lattes2", "levy-disk")

    def test__serialize__round_trip(self):
        for name, f in self.maps.items():
            content = serialize(f)
            self.assertTrue(content.endswith(b"\n"))
            self.assertEqual(serialize(parse_map_file(content)), content, name)

    def test__serialize__affine_round_trip(self):
        m = corner_quotient([[3, 1], [1, 2]])
        content = serialize(m)
        self.assertNotIn("q", json.loads(content)["affine"])
        self.assertEqual(parse_map_file(content), m)
        self.assertEqual(serialize(parse_map_file(content)), content)

    def test__serialize__names_twist_curves(self):
        f = self.maps["levy-disk"]
        curve = f.reference.pair_curve(2, 3)
        content = serialize(f.with_twist(dehn_twist(curve, 2)))
        data = json.loads(content)
        self.assertEqual(data["twist"], [["c0", 2]])
        self.assertEqual(data["curves"], {"c0": list(curve.coordinates)})
        document = parse_document(content)
        self.assertEqual(document.curves, {"c0": curve})
        self.assertEqual(list(document.map.twist), [(curve, 2)])
        self.assertEqual(serialize(document), content)

    def test__serialize__keeps_curve_names(self):
        f = self.maps["levy-disk"]
        curve = f.reference.pair_curve(2, 3)
        content = serialize(f.with_twist(dehn_twist(curve)), curves={"disk": curve})
        self.assertEqual(json.loads(content)["twist"], [["disk", 1]])

    def test__serialize__domain_marked_only_when_needed(self):
        self.assertNotIn("domain_marked", json.loads(serialize(self.maps["z2"])))
        data = json.loads(serialize(self.maps["basilica"]))
        self.assertEqual(data["domain_marked"], [5, 0, 3])
        self.assertNotIn("parent", data)


class LoadTestCase(CorpusTestCase):
    def test__load__bundled_files(self):
        z2 = load("z2").map
        self.assertEqual(z2.degree, 2)
        self.assertEqual(orbifold_data(z2).signature, (INFINITY, INFINITY))
        basilica = load("basilica.json").map
        self.assertEqual(orbifold_data(basilica).signature, (INFINITY, INFINITY, INFINITY))
        self.assertEqual(load("affine-2z").affine, corner_quotient([[2, 0], [0, 2]]))

    def test__load__builds_corpus_names_in_memory(self):
        document = load("lattes2")
        self.assertEqual(document.map.degree, 4)
        self.assertIsNone(document.affine)

    def test__load__unknown_name_raises_exc(self):
        with self.assertRaises(FileFormatError):
            load("no-such-map")

    def test__load__prefixes_file_name(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "broken.json")
            with open(path, "w") as fp:
                fp.write("[")
            with self.assertRaisesMessage(ParseError, "broken.json: "):
                load(path)

    def test__find_map_file__corpus_dirs(self):
        with tempfile.TemporaryDirectory() as directory:
            dump(corner_quotient([[2, 0], [0, 2]]), os.path.join(directory, "mine.json"))
            with override_settings(THURSTON={"CORPUS_DIRS": [directory]}):
                path = find_map_file("mine")
                self.assertEqual(path, os.path.join(directory, "mine.json"))
                self.assertIsInstance(load("mine"), MapDocument)
