"""Tests for the command-line front end: verbs, formats, exit codes."""

from __future__ import annotations

import io
import json
import sys

import pytest

from linkform import matrixrep
from linkform.cli import main
from linkform.field import RootOfUnity
from linkform.forms import (
    EForm,
    StructuredForm,
    _poly_from_obj,
    form_from_json,
)
from linkform.matrixrep import classify_matrix
from linkform.signature import JUMP_CONVENTION

TREFOIL_COEFFS = {"-1": "1", "0": "-1", "1": "1"}
TREFOIL_FORM = {"field": "R", "cyclic": {"h": {"coeffs": {"0": "1"}},
                                         "f": {"coeffs": TREFOIL_COEFFS}}}
PAIR_FORM = {"field": "C", "basic": [
    {"type": "e", "n": 1, "eps": 1, "xi": {"xi": ["0", "1"]}},
    {"type": "e", "n": 1, "eps": -1, "xi": {"xi": ["0", "1"]}},
]}
ODD_FORM = {"field": "C", "basic": [
    {"type": "e", "n": 3, "eps": 1, "xi": {"xi": ["0", "1"]}},
]}
TREFOIL_MATRIX = {"field": "R", "matrix": [[{"coeffs": TREFOIL_COEFFS}]]}

_TREF_Q = {"num": {"coeffs": {"0": "1"}}, "den": {"coeffs": TREFOIL_COEFFS}}
_TREF_Q_NEG = {"num": {"coeffs": {"0": "-1"}}, "den": {"coeffs": TREFOIL_COEFFS}}
_ZERO_Q = {"num": {"coeffs": {"0": "0"}}, "den": {"coeffs": {"0": "1"}}}
HYPERBOLIC_PRESENTED = {
    "field": "R",
    "presented": {
        "orders": [{"coeffs": TREFOIL_COEFFS}, {"coeffs": TREFOIL_COEFFS}],
        "gram": [[_TREF_Q, _ZERO_Q], [_ZERO_Q, _TREF_Q_NEG]],
    },
    "lagrangian": [[{"coeffs": {"0": "1"}}, {"coeffs": {"0": "1"}}]],
}


@pytest.fixture(autouse=True)
def _reset_truncation():
    yield
    matrixrep.DEFAULT_TRUNCATION = None


def _write(tmp_path, data, name="in.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def _run_json(tmp_path, data, argv, capsys):
    code = main([argv[0], "--in", _write(tmp_path, data)] + argv[1:])
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def test_classify_trefoil(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, TREFOIL_FORM, ["classify"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["jump_convention"] == JUMP_CONVENTION
    assert payload["rank"] == 1
    assert payload["form"] == {
        "field": "R",
        "basic": [{"type": "e", "n": 1, "eps": 1,
                   "xi": {"root_of_unity": [1, 6]}}],
    }
    assert payload["hodge"]["p"] == [
        {"n": 1, "eps": 1, "xi": {"root_of_unity": [1, 6]}, "count": 1}]
    assert payload["hodge"]["q_circle"] == []
    assert payload["hodge"]["q_interior"] == []


def test_classify_output_reparses_to_the_same_form(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, TREFOIL_FORM, ["classify"], capsys)
    assert code == 0
    reparsed = form_from_json(json.loads(out)["form"])
    expected = StructuredForm("R", [EForm(1, 1, RootOfUnity(1, 6), "R")])
    assert reparsed == expected


def test_output_is_byte_stable(tmp_path, capsys):
    src = _write(tmp_path, TREFOIL_FORM)
    out1, out2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["classify", "--in", src, "--out", out1]) == 0
    assert main(["classify", "--in", src, "--out", out2]) == 0
    capsys.readouterr()
    blob = (tmp_path / "a.json").read_bytes()
    assert blob == (tmp_path / "b.json").read_bytes()
    assert blob.endswith(b"\n")
    # atomic write leaves no temp droppings behind
    assert not list(tmp_path.glob(".linkform-*"))


def test_stdin_input(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(TREFOIL_FORM)))
    assert main(["classify"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["rank"] == 1


def test_session_field_is_required_and_sufficient(tmp_path, capsys):
    data = {"field": "R", "basic": [
        {"type": "e", "n": 1, "eps": 1, "xi": {"xi": ["1/2", "1/2*r"]}}]}
    code, _, err = _run_json(tmp_path, data, ["classify"], capsys)
    assert code == 2
    assert json.loads(err)["error"]["type"] == "ParseError"
    code, out, _ = _run_json(tmp_path, data,
                             ["classify", "--field-sqrt", "3"], capsys)
    assert code == 0
    assert json.loads(out)["rank"] == 1


# ---------------------------------------------------------------------------
# jumps and sigfn
# ---------------------------------------------------------------------------


def test_jumps_json(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, TREFOIL_FORM, ["jumps"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["total"] == 0
    assert payload["jumps"] == [
        {"point": {"root_of_unity": [1, 6]}, "value": -1},
        {"point": {"root_of_unity": [5, 6]}, "value": 1},
    ]


def test_jumps_csv(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, TREFOIL_FORM,
                             ["jumps", "--format", "csv"], capsys)
    assert code == 0
    assert out == ('exact_tag,turn_approx,value\n'
                   '"rou(1,6)",0.166666667,-1\n'
                   '"rou(5,6)",0.833333333,1\n')


def test_sigfn_csv_trefoil(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, TREFOIL_FORM,
                             ["sigfn", "--format", "csv"], capsys)
    assert code == 0
    assert out.splitlines() == [
        "kind,left_anchor,right_anchor,exact_tag,"
        "approx_arg_lo,approx_arg_hi,value",
        'arc,1,"rou(1,6)",,0.0,0.166666667,0',
        'point,"rou(1,6)","rou(1,6)","rou(1,6)",'
        '0.166666667,0.166666667,-1',
        'arc,"rou(1,6)","rou(5,6)",,0.166666667,0.833333333,-2',
        'point,"rou(5,6)","rou(5,6)","rou(5,6)",'
        '0.833333333,0.833333333,-1',
        'arc,"rou(5,6)",1,,0.833333333,1.0,0',
    ]


def test_sigfn_csv_of_the_empty_form(tmp_path, capsys):
    data = {"field": "R", "basic": []}
    code, out, _ = _run_json(tmp_path, data, ["sigfn", "--format", "csv"],
                             capsys)
    assert code == 0
    assert out.splitlines() == [
        "kind,left_anchor,right_anchor,exact_tag,"
        "approx_arg_lo,approx_arg_hi,value",
        "arc,1,1,,0.0,1.0,0",
    ]


def test_sigfn_json(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, TREFOIL_FORM, ["sigfn"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["base"] == 0
    assert [seg["point_value"] for seg in payload["segments"]] == [-1, -1]
    assert [seg["arc_value_after"] for seg in payload["segments"]] == [-2, 0]


# ---------------------------------------------------------------------------
# witt and metabolic
# ---------------------------------------------------------------------------


def test_witt_json(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, TREFOIL_FORM, ["witt"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["is_zero"] is False
    assert payload["classes"] == [
        {"point": {"root_of_unity": [1, 6]}, "value": 1}]


def test_metabolic_json(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, PAIR_FORM, ["metabolic"], capsys)
    assert code == 0
    assert json.loads(out)["metabolic"] is True
    code, out, _ = _run_json(tmp_path, TREFOIL_FORM, ["metabolic"], capsys)
    assert code == 0
    assert json.loads(out)["metabolic"] is False


# ---------------------------------------------------------------------------
# representability verbs
# ---------------------------------------------------------------------------


def test_representable_rejection(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, ODD_FORM, ["representable"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["representable"] is False
    assert payload["total_jump"] == -1
    assert payload["certificate"] == "total-jump-nonzero"


def test_represent_builds_and_verifies(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, PAIR_FORM, ["represent"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["verification"]["identities"] == {
        "jumpisjump": "ok", "jumpisjump_half": "ok", "sigissig2": "ok"}
    m = [[_poly_from_obj(cell) for cell in row] for row in payload["matrix"]]
    expected = form_from_json(PAIR_FORM)
    assert classify_matrix(m, "C").is_isometric(expected)


def test_represent_refuses_obstructed_forms(tmp_path, capsys):
    code, _, err = _run_json(tmp_path, ODD_FORM, ["represent"], capsys)
    assert code == 3
    error = json.loads(err)["error"]
    assert error["type"] == "PreconditionError"
    assert "total signature jump" in error["message"]


def test_verify_matrix_report(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, TREFOIL_MATRIX, ["verify"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["breakpoints"] == [{"root_of_unity": [1, 6]},
                                      {"root_of_unity": [5, 6]}]
    assert payload["jumps"] == [
        {"point": {"root_of_unity": [1, 6]}, "value": -1},
        {"point": {"root_of_unity": [5, 6]}, "value": 1},
    ]
    assert payload["identities"] == {
        "jumpisjump": "ok", "jumpisjump_half": "ok", "sigissig2": "ok"}


def test_verify_rejects_singular_matrices(tmp_path, capsys):
    data = {"field": "R", "matrix": [[{"coeffs": {"0": "0"}}]]}
    code, _, err = _run_json(tmp_path, data, ["verify"], capsys)
    assert code == 3
    assert json.loads(err)["error"]["type"] == "PreconditionError"


# ---------------------------------------------------------------------------
# reduce
# ---------------------------------------------------------------------------


def test_reduce_hyperbolic_presented_form(tmp_path, capsys):
    code, out, _ = _run_json(tmp_path, HYPERBOLIC_PRESENTED, ["reduce"],
                             capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["form"] == {"field": "R", "basic": []}
    assert payload["rank"] == 0


def test_reduce_structured_even_layer(tmp_path, capsys):
    data = {"field": "C",
            "basic": [{"type": "e", "n": 2, "eps": 1,
                       "xi": {"xi": ["0", "1"]}}],
            "lagrangian": [[{"coeffs": {"0": "-1*i", "1": "1"}}]]}
    code, out, _ = _run_json(tmp_path, data, ["reduce"], capsys)
    assert code == 0
    assert json.loads(out)["rank"] == 0


def test_reduce_with_empty_sublattice_just_classifies(tmp_path, capsys):
    data = dict(TREFOIL_FORM)
    data["lagrangian"] = []
    code, out, _ = _run_json(tmp_path, data, ["reduce"], capsys)
    assert code == 0
    assert json.loads(out)["form"]["basic"] == [
        {"type": "e", "n": 1, "eps": 1, "xi": {"root_of_unity": [1, 6]}}]


def test_reduce_rejects_non_isotropic_sublattices(tmp_path, capsys):
    data = dict(HYPERBOLIC_PRESENTED)
    data["lagrangian"] = [[{"coeffs": {"0": "1"}}, {"coeffs": {"0": "0"}}]]
    code, _, err = _run_json(tmp_path, data, ["reduce"], capsys)
    assert code == 3
    assert "isotropic" in json.loads(err)["error"]["message"]


def test_reduce_rejects_wrong_vector_length(tmp_path, capsys):
    data = dict(HYPERBOLIC_PRESENTED)
    data["lagrangian"] = [[{"coeffs": {"0": "1"}}]]
    code, _, err = _run_json(tmp_path, data, ["reduce"], capsys)
    assert code == 3
    assert json.loads(err)["error"]["type"] == "PreconditionError"


# ---------------------------------------------------------------------------
# job-level failures and flags
# ---------------------------------------------------------------------------


def test_malformed_json_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    code = main(["classify", "--in", str(path)])
    _, err = capsys.readouterr()
    assert code == 2
    assert json.loads(err)["error"]["type"] == "ParseError"


def test_missing_file_exits_2(tmp_path, capsys):
    code = main(["classify", "--in", str(tmp_path / "absent.json")])
    _, err = capsys.readouterr()
    assert code == 2


def test_missing_form_body_exits_3(tmp_path, capsys):
    code, _, err = _run_json(tmp_path, {"field": "R"}, ["classify"], capsys)
    assert code == 3
    assert json.loads(err)["error"]["type"] == "PreconditionError"


def test_missing_nested_key_exits_2(tmp_path, capsys):
    data = {"field": "R", "cyclic": {"h": {"coeffs": {"0": "1"}}}}
    code, _, err = _run_json(tmp_path, data, ["classify"], capsys)
    assert code == 2
    assert json.loads(err)["error"]["type"] == "ParseError"


def test_csv_unsupported_for_classify(tmp_path, capsys):
    code, _, err = _run_json(tmp_path, TREFOIL_FORM,
                             ["classify", "--format", "csv"], capsys)
    assert code == 2
    assert "csv" in json.loads(err)["error"]["message"]


def test_degenerate_presented_form_exits_3(tmp_path, capsys):
    data = {"field": "R",
            "presented": {
                "orders": [{"coeffs": TREFOIL_COEFFS}],
                "gram": [[_ZERO_Q]],
            }}
    code, _, err = _run_json(tmp_path, data, ["classify"], capsys)
    assert code == 3
    assert json.loads(err)["error"]["type"] == "DegenerateFormError"


def test_truncation_flag_sets_the_process_floor(tmp_path, capsys):
    code, _, _ = _run_json(tmp_path, TREFOIL_MATRIX,
                           ["verify", "--truncation", "9"], capsys)
    assert code == 0
    assert matrixrep.DEFAULT_TRUNCATION == 9


def test_truncation_flag_rejects_nonpositive_values(tmp_path, capsys):
    code, _, err = _run_json(tmp_path, TREFOIL_MATRIX,
                             ["verify", "--truncation", "0"], capsys)
    assert code == 2
    assert json.loads(err)["error"]["type"] == "ParseError"
