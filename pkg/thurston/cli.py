"""
Command-line front end.

``run_command(argv)`` parses the arguments, runs one subcommand and returns
a :class:`Report`; the ``thurston`` management command and the
``thurston`` console script only print it. Exit codes: 0 when the question
was decided, 1 on an input error and 2 when a budget ran out first.
"""
import argparse
import json
import logging
import os
import sys
from functools import lru_cache

import humanize
import jsonschema

from thurston.budget import BUDGET_EXHAUSTED, Budget, Inconclusive
from thurston.corpus import AFFINE_CORPUS, CORPUS
from thurston.cover import orbifold_data
from thurston.curves import Multicurve, enumerate_multicurves
from thurston.decider import AFFINE, Equivalent, NotEquivalent, decide_equivalence
from thurston.decomposition import decompose_along
from thurston.exceptions import (
    BudgetExceeded,
    FileFormatError,
    ThurstonError,
    UsageError,
    ValidationError,
)
from thurston.mapfile import dump, load
from thurston.matrices import gl2z_conjugacy
from thurston.obstruction import (
    canonical_obstruction,
    detect_levy,
    search_obstruction,
    thurston_matrix,
)
from thurston.parabolic import (
    GEOMETRIZABLE,
    INCONCLUSIVE,
    LEVY,
    LevyPair,
    classify_parabolic,
    geometrize,
)
from thurston.settings import get_settings

logger = logging.getLogger(__name__)

DECIDED, INPUT_ERROR, INCONCLUSIVE_EXIT = 0, 1, 2

STATUS = {DECIDED: "decided", INPUT_ERROR: "error", INCONCLUSIVE_EXIT: "inconclusive"}


class Report:
    """
    The outcome of one command: text lines for people and ``result`` for
    ``--json``.
    """

    def __init__(self, command, lines=(), result=None, exit_code=DECIDED, as_json=False):
        self.command = command
        self.lines = list(lines)
        self.result = result or {}
        self.exit_code = exit_code
        self.as_json = as_json
        self.error = None

    def __repr__(self):
        return "Report({!r}, exit_code={})".format(self.command, self.exit_code)

    @property
    def data(self):
        data = {
            "command": self.command,
            "exit_code": self.exit_code,
            "format_version": get_settings().FORMAT_VERSION,
            "status": STATUS[self.exit_code],
            "result": self.result,
        }
        if self.error is not None:
            data["error"] = self.error
        return data

    def render(self) -> str:
        if self.as_json:
            data = self.data
            jsonschema.validate(instance=data, schema=report_schema())
            return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
        return "".join(line + "\n" for line in self.lines)


@lru_cache(maxsize=None)
def _schema(path):
    with open(path, encoding="utf-8") as fp:
        return json.load(fp)


def report_schema():
    return _schema(get_settings().REPORT_SCHEMA)


# formatting


def q(x):
    return str(x)


def matrix_text(rows):
    return "[" + ", ".join("[" + ", ".join(q(x) for x in row) + "]" for row in rows) + "]"


def _rows(M):
    return [[M[i, j] for j in range(M.cols)] for i in range(M.rows)]


def vector_text(v):
    return "(" + ", ".join(q(x) for x in v) + ")"


def puncture_text(x):
    if isinstance(x, tuple):
        return "cap{}".format(x[1])
    return str(x)


def curve_data(curve):
    return {
        "coordinates": list(curve.coordinates),
        "inside": sorted(curve.inside),
        "kind": curve.kind,
    }


def curve_text(curve):
    return "around {} {}".format(
        " ".join(str(x) for x in sorted(curve.inside)), vector_text(curve.coordinates)
    )


def word_text(word):
    if not len(word):
        return "id"
    return " ".join("T{}^{}".format(vector_text(c.coordinates), k) for c, k in word)


def word_data(word):
    return [{"curve": curve_data(c), "exponent": k} for c, k in word]


def budget_text(budget):
    seconds = "no time limit" if budget.seconds is None else humanize.naturaldelta(budget.seconds)
    return "weight {}, word length {}, {}".format(
        humanize.intcomma(budget.weight), budget.word_length, seconds
    )


def budget_data(budget):
    return {"weight": budget.weight, "word_length": budget.word_length, "seconds": budget.seconds}


def _inconclusive(report, outcome, budget):
    report.exit_code = INCONCLUSIVE_EXIT
    report.lines.append("Inconclusive ({})".format(outcome.reason))
    if outcome.detail:
        report.lines.append("detail: {}".format(outcome.detail))
    report.lines.append("budget: {}".format(budget_text(budget)))
    report.result.update(
        {"reason": outcome.reason, "detail": outcome.detail, "budget": budget_data(budget)}
    )
    return report


def _not_found(result):
    detail = "no obstruction within weight {} ({})".format(result.weight, result.reason)
    return Inconclusive(BUDGET_EXHAUSTED, detail)


def _multicurve_lines(f, multicurve, report):
    matrix = thurston_matrix(f, multicurve)
    report.lines.extend("  {}".format(curve_text(c)) for c in multicurve)
    report.lines.append("matrix {}".format(matrix_text(matrix.entries)))
    report.result["curves"] = [curve_data(c) for c in multicurve]
    report.result["matrix"] = [[q(x) for x in row] for row in matrix.entries]


# commands


def _map_of(document, name):
    if document.map is None:
        raise ValidationError("{} holds no map.".format(name), "/vertices")
    return document.map


def cmd_validate(options, budget, report):
    document = load(options.file)
    f, m = document.map, document.affine
    if f is not None:
        report.lines.append(
            "valid PL Thurston map: degree {}, {} marked points, {} vertices, {} triangles".format(
                f.degree,
                len(f.marked),
                humanize.intcomma(f.domain.tri.vertex_count),
                humanize.intcomma(len(f.domain.tri.triangles)),
            )
        )
        if f.is_twisted:
            report.lines.append("twist {}".format(word_text(f.twist)))
        report.result.update(
            {
                "kind": "map",
                "degree": f.degree,
                "marked": list(f.marked),
                "vertices": f.domain.tri.vertex_count,
                "triangles": len(f.domain.tri.triangles),
                "critical_points": list(f.critical_points),
                "twisted": f.is_twisted,
            }
        )
    if m is not None:
        report.lines.append(
            "{}affine quotient: degree {}, A = {}, b = {}".format(
                "" if f is not None else "valid ",
                m.degree,
                matrix_text(_rows(m.A)),
                vector_text(m.b),
            )
        )
        report.result.setdefault("kind", "affine")
        report.result["affine_degree"] = m.degree
    if document.curves:
        report.lines.append("curves: {}".format(" ".join(sorted(document.curves))))
        report.result["curves"] = sorted(document.curves)
    return report


def cmd_orbifold(options, budget, report):
    document = load(options.file)
    if document.map is None and document.affine is not None:
        data = document.affine.orbifold
    else:
        data = orbifold_data(_map_of(document, options.file))
    signature = tuple(str(w) for w in data.signature)
    euler, kind = data.euler, data.kind
    weights = {str(x): str(w) for x, w in sorted(data.weights.items())}
    report.lines.append(
        "signature ({}), chi = {}, {}".format(",".join(signature), q(euler), kind)
    )
    report.result.update(
        {"signature": list(signature), "euler": q(euler), "kind": kind, "weights": weights}
    )
    return report


def cmd_obstruct(options, budget, report):
    f = _map_of(load(options.file), options.file)
    if f.reference is None:
        report.lines.append("no obstruction: fewer than four marked points")
        report.result["obstructed"] = False
        return report
    if options.canonical:
        result = canonical_obstruction(f, budget)
        if isinstance(result, Inconclusive):
            return _inconclusive(report, result, budget)
        report.result["obstructed"] = bool(len(result))
        if not len(result):
            report.lines.append("canonical obstruction: empty")
            return report
        report.lines.append("canonical obstruction of {} curves".format(len(result)))
        _multicurve_lines(f, result, report)
        return report
    found = search_obstruction(f, budget)
    if not found:
        report.lines.append(
            "no obstruction of weight at most {} found".format(humanize.intcomma(found.weight))
        )
        return _inconclusive(report, _not_found(found), budget)
    report.lines.append("obstruction of {} curves".format(len(found.multicurve)))
    _multicurve_lines(f, found.multicurve, report)
    report.lines.append("spectral radius >= 1")
    report.result["obstructed"] = True
    return report


def cmd_levy(options, budget, report):
    f = _map_of(load(options.file), options.file)
    if f.reference is None:
        report.lines.append("no Levy cycle: fewer than four marked points")
        report.result["levy"] = None
        return report
    found = search_obstruction(f, budget)
    if not found:
        return _inconclusive(report, _not_found(found), budget)
    witness = detect_levy(f, found.multicurve)
    if witness is None:
        report.lines.append("obstruction without a Levy cycle")
        report.result["levy"] = None
        _multicurve_lines(f, found.multicurve, report)
        return report
    report.lines.append(
        "{}Levy cycle of length {}".format(
            "degenerate " if witness.degenerate else "", len(witness.cycle)
        )
    )
    report.lines.extend("  {}".format(curve_text(c)) for c in witness.cycle)
    report.result["levy"] = {
        "degenerate": witness.degenerate,
        "cycle": [curve_data(c) for c in witness.cycle],
        "disks": [sorted(d) for d in witness.disk_side] if witness.disk_side else None,
    }
    return report


def _model_lines(model, report):
    report.lines.append("A = {}, b = {}".format(matrix_text(_rows(model.A)), vector_text(model.b)))
    for x in model.labels:
        report.lines.append(
            "  {} at {} -> {}".format(x, vector_text(model.lifts[x]), model.dynamics[x])
        )
    report.result["model"] = {
        "A": [[q(x) for x in row] for row in _rows(model.A)],
        "b": [q(x) for x in model.b],
        "lifts": {str(x): [q(c) for c in z] for x, z in model.lifts.items()},
    }


def cmd_classify_parabolic(options, budget, report):
    document = load(options.file)
    if document.map is None and document.affine is not None:
        result = geometrize(document.affine)
        if isinstance(result, LevyPair):
            outcome, model, pair = LEVY, document.affine, result.pair
        else:
            outcome, model, pair = GEOMETRIZABLE, result, None
        eigen = None
    else:
        c = classify_parabolic(_map_of(document, options.file), budget)
        if c.outcome == INCONCLUSIVE:
            report.result["signature"] = c.orbifold.signature_text
            return _inconclusive(report, c.witness, budget)
        outcome, model, eigen = c.outcome, c.model, c.eigen
        pair = c.witness.pair if isinstance(c.witness, LevyPair) else None
    report.lines.append(outcome.replace("_", " "))
    report.result["outcome"] = outcome
    if eigen is not None:
        report.lines.append("matrix {}".format(eigen.kind.replace("_", " ")))
        report.result["eigen"] = eigen.kind
    if pair is not None:
        report.lines.append("points {} and {} share a Nielsen class".format(*pair))
        report.result["pair"] = list(pair)
    if model is not None:
        _model_lines(model, report)
    return report


def _matrix_argument(text, flag):
    try:
        a, b, c, d = (int(x) for x in text.split())
    except ValueError:
        raise UsageError("{} expects four integers, got {!r}.".format(flag, text))
    return [[a, b], [c, d]]


def cmd_matrix_conjugacy(options, budget, report):
    A1 = _matrix_argument(options.a1, "--a1")
    A2 = _matrix_argument(options.a2, "--a2")
    found = gl2z_conjugacy(A1, A2)
    report.result["conjugate"] = found is not None
    if found is None:
        report.lines.append("not conjugate in GL2(Z)")
        return report
    for variant, S in (("SL2(Z)", found.sl2), ("GL2(Z), det -1", found.gl2)):
        if S is not None:
            report.lines.append("conjugate in {}: S = {}".format(variant, matrix_text(_rows(S))))
    report.result["witness"] = [[q(x) for x in row] for row in _rows(found.witness)]
    report.result["variant"] = found.variant
    return report


def cmd_decompose(options, budget, report):
    document = load(options.file)
    f = _map_of(document, options.file)
    if options.curves:
        missing = [name for name in options.curves if name not in document.curves]
        if missing:
            raise UsageError("Unknown curve {!r}.".format(missing[0]))
        multicurve = Multicurve.sorted([document.curves[name] for name in options.curves])
    else:
        multicurve = canonical_obstruction(f, budget)
        if isinstance(multicurve, Inconclusive):
            return _inconclusive(report, multicurve, budget)
    try:
        gluing = decompose_along(f, multicurve, budget)
    except BudgetExceeded as exc:
        return _inconclusive(report, budget.give_up("decompose", detail=exc.message), budget)
    report.lines.append("multicurve of {} curves".format(len(multicurve)))
    report.lines.extend("  {}".format(curve_text(c)) for c in multicurve)
    pieces = []
    for X in gluing.pieces:
        target = gluing.piece_map[X.index]
        report.lines.append(
            "piece {}: {} -> piece {}".format(
                X.index, " ".join(puncture_text(x) for x in X.punctures), target
            )
        )
        pieces.append(
            {
                "index": X.index,
                "punctures": [puncture_text(x) for x in X.punctures],
                "target": target,
                "degree": gluing.steps[X.index].degree,
            }
        )
    returns = []
    for r in gluing.first_return_maps():
        kind = "homeomorphism" if r.is_homeomorphism else r.orbifold.kind
        report.lines.append(
            "cycle {}: degree {}, signature {}, {}".format(
                " ".join(str(i) for i in r.cycle), r.degree, r.orbifold.signature_text, kind
            )
        )
        returns.append(
            {
                "cycle": list(r.cycle),
                "degree": r.degree,
                "signature": r.orbifold.signature_text,
                "kind": kind,
            }
        )
    report.result.update(
        {"curves": [curve_data(c) for c in multicurve], "pieces": pieces, "returns": returns}
    )
    return report


def cmd_decide(options, budget, report):
    f = _map_of(load(options.first), options.first)
    g = _map_of(load(options.second), options.second)
    result = decide_equivalence(f, g, budget)
    if isinstance(result, Inconclusive):
        return _inconclusive(report, result, budget)
    if isinstance(result, NotEquivalent):
        report.lines.append("Not equivalent ({})".format(result.invariant))
        if result.detail:
            report.lines.append("detail: {}".format(result.detail))
        report.result.update(
            {"equivalent": False, "invariant": result.invariant, "detail": result.detail}
        )
        return report
    assert isinstance(result, Equivalent)
    report.lines.append("Equivalent ({})".format(result.kind))
    report.result.update({"equivalent": True, "kind": result.kind})
    if result.kind == AFFINE:
        w = result.witness
        report.lines.append(
            "witness M = {}, t = {}".format(matrix_text(_rows(w.M)), vector_text(w.t))
        )
        report.result["witness"] = {
            "M": [[q(x) for x in row] for row in _rows(w.M)],
            "t": [q(x) for x in w.t],
        }
    elif len(result.witness):
        report.lines.append("witness {}".format(word_text(result.witness)))
        report.result["witness"] = word_data(result.witness)
    if result.relabelling:
        report.lines.append(
            "relabelling {}".format(
                " ".join("{}->{}".format(a, b) for a, b in sorted(result.relabelling.items()))
            )
        )
        report.result["relabelling"] = {str(a): b for a, b in result.relabelling.items()}
    return report


def cmd_export_corpus(options, budget, report):
    directory = options.directory
    os.makedirs(directory, exist_ok=True)
    written = []
    for name, builder in sorted(list(CORPUS.items()) + list(AFFINE_CORPUS.items())):
        path = os.path.join(directory, name + ".json")
        dump(builder(), path)
        written.append(name)
    report.lines.append(
        "wrote {} map files to {}".format(humanize.intcomma(len(written)), directory)
    )
    report.result["written"] = written
    return report


def cmd_curves(options, budget, report):
    document = load(options.file)
    f = _map_of(document, options.file)
    reference = f.reference
    if reference is None:
        report.lines.append("no essential curves: fewer than four marked points")
        report.result["curves"] = {}
        return report
    named = {}
    for name in sorted(document.curves):
        curve = document.curves[name]
        report.lines.append("{}: {}, {}".format(name, curve_text(curve), curve.kind))
        named[name] = curve_data(curve)
    report.result["curves"] = named
    if options.weight:
        found = [
            m[0]
            for m in enumerate_multicurves(reference, options.weight, budget)
            if len(m) == 1
        ]
        report.lines.append(
            "{} essential curves of weight at most {}".format(
                humanize.intcomma(len(found)), options.weight
            )
        )
        report.lines.extend("  {}".format(curve_text(c)) for c in found)
        report.result["enumerated"] = [curve_data(c) for c in found]
    return report


COMMANDS = {
    "validate": cmd_validate,
    "orbifold": cmd_orbifold,
    "obstruct": cmd_obstruct,
    "levy": cmd_levy,
    "classify-parabolic": cmd_classify_parabolic,
    "matrix-conjugacy": cmd_matrix_conjugacy,
    "decompose": cmd_decompose,
    "decide": cmd_decide,
    "export-corpus": cmd_export_corpus,
    "curves": cmd_curves,
}


# parsing


class CommandLineParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def add_common_arguments(parser):
    parser.add_argument("--json", action="store_true", help="Print a JSON report.")
    parser.add_argument("--max-weight", type=int, help="Cap on multicurve weight.")
    parser.add_argument("--max-word-length", type=int, help="Cap on twist word length.")
    parser.add_argument(
        "--budget-seconds", type=int, help="Wall-clock cap, checked between search steps."
    )


def _file_arguments(parser):
    parser.add_argument("file")


def _obstruct_arguments(parser):
    parser.add_argument("file")
    parser.add_argument(
        "--canonical", action="store_true", help="Compute the canonical obstruction."
    )


def _matrix_conjugacy_arguments(parser):
    parser.add_argument("--a1", required=True, help='Entries row by row, e.g. "2 1 1 1".')
    parser.add_argument("--a2", required=True)


def _decompose_arguments(parser):
    parser.add_argument("file")
    parser.add_argument(
        "--curve",
        dest="curves",
        action="append",
        help="Named curve of the map file; the canonical obstruction by default.",
    )


def _decide_arguments(parser):
    parser.add_argument("first")
    parser.add_argument("second")


def _export_corpus_arguments(parser):
    parser.add_argument("directory")


def _curves_arguments(parser):
    parser.add_argument("file")
    parser.add_argument(
        "--weight", type=int, default=0, help="Also list curves up to this weight."
    )


# command -> (help, adds its own arguments to a parser)
ARGUMENTS = {
    "validate": ("Check a map file.", _file_arguments),
    "orbifold": ("Orbifold signature and Euler characteristic.", _file_arguments),
    "obstruct": ("Search for a Thurston obstruction.", _obstruct_arguments),
    "levy": ("Search for a Levy cycle.", _file_arguments),
    "classify-parabolic": ("Geometrize a map with parabolic orbifold.", _file_arguments),
    "matrix-conjugacy": (
        "Decide conjugacy of two integer 2x2 matrices.",
        _matrix_conjugacy_arguments,
    ),
    "decompose": ("Decompose along a multicurve.", _decompose_arguments),
    "decide": ("Decide combinatorial equivalence of two maps.", _decide_arguments),
    "export-corpus": ("Write the bundled example maps.", _export_corpus_arguments),
    "curves": ("List curves of the reference triangulation.", _curves_arguments),
}


def build_parser():
    common = CommandLineParser(add_help=False)
    add_common_arguments(common)
    parser = CommandLineParser(prog="thurston", description="PL Thurston maps.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    for name, (help, add_arguments) in ARGUMENTS.items():
        add_arguments(sub.add_parser(name, parents=[common], help=help))
    return parser


def run_options(command, options) -> Report:
    """
    Run ``command`` on parsed options: an :class:`argparse.Namespace` or
    the options dict of a management command.
    """
    if isinstance(options, dict):
        options = argparse.Namespace(**options)
    as_json = bool(getattr(options, "json", False))
    try:
        budget = Budget(options.max_weight, options.max_word_length, options.budget_seconds)
        report = Report(command, as_json=as_json)
        logger.info("running %s with %r", command, budget)
        return COMMANDS[command](options, budget, report)
    except OSError as exc:
        return _error(command, FileFormatError(str(exc)), as_json)
    except ThurstonError as exc:
        return _error(command, exc, as_json)


def run_command(argv) -> Report:
    as_json = "--json" in argv
    command = next((a for a in argv if a in COMMANDS), None)
    try:
        options = build_parser().parse_args(argv)
    except ThurstonError as exc:
        return _error(command, exc, as_json)
    return run_options(options.command, options)


def _error(command, exc, as_json):
    report = Report(command, exit_code=INPUT_ERROR, as_json=as_json)
    report.lines.append("error: {}".format(exc))
    report.error = {"type": type(exc).__name__, "message": exc.message, "pointer": exc.pointer}
    logger.info("%s failed: %s", command, exc)
    return report


def main(argv=None):
    from django.conf import settings

    if not settings.configured:
        import django

        settings.configure(INSTALLED_APPS=["rest_framework", "thurston"])
        django.setup()
    report = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(report.render())
    return report.exit_code
