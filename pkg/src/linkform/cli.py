"""Command-line front end: parse forms and matrices from JSON, run the
pipelines, and emit deterministic JSON or CSV reports.

    linkform <verb> --in <file|-> --out <file|-> --format json|csv
             [--field-sqrt d] [--truncation N]

Verbs: classify, jumps, sigfn, witt, metabolic, representable,
represent, verify, reduce.  Inputs are JSON documents carrying a
top-level "field" ("R" or "C") plus one of "cyclic", "basic",
"presented", or "matrix"; the reduce verb additionally takes
"lagrangian", a list of coordinate vectors.  Coordinates outside the
rationals need the session extension fixed up front with --field-sqrt
(auto-inference is refused, for reproducibility).

Exit codes: 0 success; 2 malformed input (parse errors, unknown keys,
unsupported format); 3 violated mathematical precondition, with a
machine-readable JSON reason on stderr; 4 internal identity violation.
Output is byte-stable for a fixed input and version, and written
atomically.  Decimal columns in CSV are approximations (suffix
``_approx`` or prefix ``approx_``) and are never consumed by any verb;
everything exact travels in the exact tags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from . import matrixrep
from .errors import (
    IdentityError,
    LinkformError,
    ParseError,
    PreconditionError,
)
from .field import ExactPoint, RootOfUnity
from .forms import (
    CyclicForm,
    PresentedForm,
    QuotientClass,
    StructuredForm,
    _poly_from_obj,
    form_from_json,
    form_to_json,
    point_to_json,
    poly_to_json,
)
from .matrixrep import verify_identities
from .represent import build_representative, is_representable
from .signature import (
    JUMP_CONVENTION,
    _complex_hodge,
    _reduce_presentation,
    is_metabolic,
    signature_function,
    sublagrangian_reduce,
    witt_class,
)

VERBS = ("classify", "jumps", "sigfn", "witt", "metabolic",
         "representable", "represent", "verify", "reduce")

SIGFN_CSV_COLUMNS = ("kind", "left_anchor", "right_anchor", "exact_tag",
                     "approx_arg_lo", "approx_arg_hi", "value")


# ---------------------------------------------------------------------------
# input plumbing
# ---------------------------------------------------------------------------


def _read_json(path: str) -> dict:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read input: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"input is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ParseError("top-level input must be a JSON object")
    return data


def _need(data: dict, key: str):
    if key not in data:
        raise ParseError(f"input is missing the required key {key!r}")
    return data[key]


def _parse_form(data: dict, d: int):
    try:
        return form_from_json(data, d)
    except (KeyError, ValueError, TypeError) as e:
        raise ParseError(f"malformed form input: {e}") from e


def _parse_structured(data: dict, d: int) -> StructuredForm:
    form = _parse_form(data, d)
    return form if isinstance(form, StructuredForm) else form.classify()


def _parse_matrix(data: dict, d: int):
    field = _need(data, "field")
    rows = _need(data, "matrix")
    try:
        m = [[_poly_from_obj(cell, d) for cell in row] for row in rows]
    except (KeyError, ValueError, TypeError) as e:
        raise ParseError(f"malformed matrix input: {e}") from e
    if not m or any(len(row) != len(m) for row in m):
        raise ParseError("matrix input must be square and non-empty")
    return m, field


def _parse_vectors(data: dict, d: int):
    vecs = _need(data, "lagrangian")
    try:
        return [[_poly_from_obj(cell, d) for cell in vec] for vec in vecs]
    except (KeyError, ValueError, TypeError) as e:
        raise ParseError(f"malformed lagrangian input: {e}") from e


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _point_tag(pt) -> str:
    """Deterministic exact label for an exact circle point."""
    if pt.is_one():
        return "1"
    if pt.is_minus_one():
        return "-1"
    if isinstance(pt, RootOfUnity):
        return f"rou({pt.k},{pt.n})"
    if isinstance(pt, ExactPoint):
        return f"xi({pt.x},{pt.y})"
    return "isolated"


def _turn(pt) -> float:
    return round(pt.approx_turn(), 9)


def _matrix_json(m, field: str) -> dict:
    return {"field": field,
            "matrix": [[poly_to_json(e) for e in row] for row in m]}


def _jump_rows(jumps: dict) -> list:
    return [{"point": point_to_json(pt), "value": v}
            for pt, v in sorted(jumps.items())]


def _hodge_json(h) -> dict:
    p = [{"n": n, "eps": eps, "xi": point_to_json(pt), "count": c}
         for (n, eps, pt), c in sorted(
             h.p.items(), key=lambda kv: (kv[0][0], -kv[0][1], kv[0][2]))]
    qc = [{"n": n, "xi": point_to_json(pt), "count": c}
          for (n, pt), c in sorted(h.q_circle.items(),
                                   key=lambda kv: (kv[0][0], kv[0][1]))]
    qi = [{"n": n, "chain": [poly_to_json(q) for q in chain]}
          for n, chain in sorted(h.q_interior.items())]
    return {"p": p, "q_circle": qc, "q_interior": qi}


def _report_json(report: dict) -> dict:
    return {
        "breakpoints": [point_to_json(pt) for pt in report["breakpoints"]],
        "jumps": _jump_rows(report["jumps"]),
        "identities": dict(report["identities"]),
    }


def _sigfn_rows(sf) -> list:
    """CSV rows, counterclockwise from 1: alternating point and arc rows
    (plus a leading arc when 1 itself is not a breakpoint)."""
    if not sf.points:
        return [("arc", "1", "1", "", 0.0, 1.0, sf.base)]
    rows = []
    tags = [_point_tag(p) for p in sf.points]
    turns = [_turn(p) for p in sf.points]
    if turns[0] != 0.0:
        rows.append(("arc", "1", tags[0], "", 0.0, turns[0], sf.base))
    for i, pt in enumerate(sf.points):
        rows.append(("point", tags[i], tags[i], tags[i],
                     turns[i], turns[i], sf.point_values[i]))
        nxt_tag = tags[i + 1] if i + 1 < len(tags) else "1"
        nxt_turn = turns[i + 1] if i + 1 < len(turns) else 1.0
        rows.append(("arc", tags[i], nxt_tag, "",
                     turns[i], nxt_turn, sf.arc_values[i]))
    return rows


def _sigfn_json(sf) -> dict:
    segments = [{"point": point_to_json(pt), "point_value": pv,
                 "arc_value_after": av}
                for pt, pv, av in zip(sf.points, sf.point_values,
                                      sf.arc_values)]
    return {"field": sf.field, "base": sf.base, "segments": segments}


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------


def _vb_classify(data, d):
    s = _parse_structured(data, d)
    return {"form": form_to_json(s), "rank": s.rank,
            "hodge": _hodge_json(s.hodge_numbers())}


def _vb_jumps(data, d):
    s = _parse_structured(data, d)
    jumps, _ = _complex_hodge(s)
    payload = {"field": s.field, "jumps": _jump_rows(jumps),
               "total": sum(jumps.values())}
    rows = [(_point_tag(pt), _turn(pt), v) for pt, v in sorted(jumps.items())]
    return payload, ("exact_tag", "turn_approx", "value"), rows


def _vb_sigfn(data, d):
    s = _parse_structured(data, d)
    sf = signature_function(s)
    return _sigfn_json(sf), SIGFN_CSV_COLUMNS, _sigfn_rows(sf)


def _vb_witt(data, d):
    s = _parse_structured(data, d)
    w = witt_class(s)
    return {"field": w.field, "is_zero": w.is_zero(),
            "classes": _jump_rows(w.jumps)}


def _vb_metabolic(data, d):
    s = _parse_structured(data, d)
    return {"field": s.field, "metabolic": is_metabolic(s)}


def _vb_representable(data, d):
    s = _parse_structured(data, d)
    v = is_representable(s)
    return {"field": s.field, "representable": v.representable,
            "total_jump": v.total_jump, "certificate": v.certificate}


def _vb_represent(data, d):
    s = _parse_structured(data, d)
    v = is_representable(s)
    if not v.representable:
        raise PreconditionError(
            f"not representable: total signature jump is {v.total_jump}")
    m = build_representative(s)
    return {"field": s.field, "matrix": _matrix_json(m, s.field)["matrix"],
            "verification": _report_json(verify_identities(m, s.field))}


def _vb_verify(data, d):
    m, field = _parse_matrix(data, d)
    # verify_identities classifies internally and raises IdentityError
    # (exit 4) on any cross-pipeline mismatch
    return {"field": field, **_report_json(verify_identities(m, field))}


def _vb_reduce(data, d):
    vecs = _parse_vectors(data, d)
    form = _parse_form(data, d)
    if isinstance(form, StructuredForm):
        reduced = sublagrangian_reduce(form, vecs)
    else:
        if isinstance(form, CyclicForm):
            form = PresentedForm(form.field, [form.f],
                                 [[QuotientClass(form.h, form.f)]])
        g = form.rank
        if any(len(v) != g for v in vecs):
            raise PreconditionError(
                f"sublattice vectors must have {g} ring coordinates")
        for u in vecs:
            for v in vecs:
                if not form.pair_eval(u, v).is_zero():
                    raise PreconditionError(
                        "the given sublattice is not isotropic")
        if vecs:
            reduced = _reduce_presentation(form.field, form.orders,
                                           form.gram, form.pair_eval,
                                           vecs).classify()
        else:
            reduced = form.classify()
    return {"form": form_to_json(reduced), "rank": reduced.rank}


_HANDLERS = {
    "classify": _vb_classify,
    "jumps": _vb_jumps,
    "sigfn": _vb_sigfn,
    "witt": _vb_witt,
    "metabolic": _vb_metabolic,
    "representable": _vb_representable,
    "represent": _vb_represent,
    "verify": _vb_verify,
    "reduce": _vb_reduce,
}


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def _write_atomic(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        return
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target),
                               prefix=".linkform-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linkform",
        description="Classify linking forms over Laurent rings and "
                    "cross-validate their signature invariants.")
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("--in", dest="infile", default="-",
                        help="input JSON file, or - for stdin (default)")
    parser.add_argument("--out", dest="outfile", default="-",
                        help="output file, or - for stdout (default)")
    parser.add_argument("--format", choices=("json", "csv"), default="json",
                        help="output format (csv for sigfn and jumps only)")
    parser.add_argument("--field-sqrt", dest="field_sqrt", type=int, default=0,
                        metavar="D",
                        help="adjoin sqrt(D) to the session coefficient "
                             "field; required whenever a coordinate needs it")
    parser.add_argument("--truncation", type=int, default=None, metavar="N",
                        help="floor for the default jet truncation order in "
                             "matrix-local classification")
    return parser


def run(argv=None) -> int:
    """Parse arguments, run one job, and return the exit status."""
    args = _build_parser().parse_args(argv)
    if args.truncation is not None:
        if args.truncation < 1:
            print(json.dumps({"error": {
                "type": "ParseError",
                "message": "--truncation must be a positive integer"}}),
                file=sys.stderr)
            return 2
        matrixrep.DEFAULT_TRUNCATION = args.truncation
    try:
        result = _HANDLERS[args.verb](_read_json(args.infile),
                                      args.field_sqrt)
        if isinstance(result, tuple):
            payload, columns, rows = result
        else:
            payload, columns, rows = result, None, None
        if args.format == "csv":
            if columns is None:
                raise ParseError(
                    f"the {args.verb} verb has no csv output; use json")
            text = _csv_text(columns, rows)
        else:
            payload["jump_convention"] = JUMP_CONVENTION
            text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
        _write_atomic(args.outfile, text)
        return 0
    except ParseError as e:
        return _fail(2, e)
    except PreconditionError as e:
        return _fail(3, e)
    except LinkformError as e:
        return _fail(4, e)


def _fail(code: int, exc: Exception) -> int:
    print(json.dumps({"error": {"type": type(exc).__name__,
                                "message": str(exc)}}),
          file=sys.stderr)
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
