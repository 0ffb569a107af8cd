import json

import pytest

import app
from app import build_parser, main, parse_command
from domain.enums import OperatorDomain, OutputFormat, Verb
from domain.exceptions import ValidationError
from tests.fixtures.families import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_classify_onb_file(capsys):
    code, out, _ = run(capsys, "classify", "--input", fixture_path("onb2.json"))
    assert code == 0
    report = json.loads(out)
    assert report["consensus"]["RieszBasis"] is True
    basis = [row for row in report["labels"] if row["label"] == "RieszBasis"]
    assert {row["via"] for row in basis} == {"C", "D", "S", "G"}
    assert all(row["A"] == pytest.approx(1.0) and row["B"] == pytest.approx(1.0) for row in basis)
    assert report["agreement"] is True


def test_classify_fixture(capsys):
    code, out, _ = run(capsys, "classify", "--fixture", "R6")
    assert code == 0
    assert json.loads(out)["consensus"]["Bessel"] is True


def test_lnx2_probe(capsys):
    code, out, _ = run(capsys, "gallery", "--fixture", "R4", "--probe-lnx2", "--levels", "1000")
    assert code == 0
    trace = json.loads(out)["trace"]
    assert len(trace) == 1
    assert trace[0]["level"] == 1000
    assert trace[0]["error"] <= 1 / 1001


def test_lnx2_probe_on_other_fixture_is_input_error(capsys):
    code, _, err = run(capsys, "gallery", "--fixture", "R3", "--probe-lnx2")
    assert code == 2
    assert "R4" in err


def test_probe_r3_gram_domain(capsys):
    code, out, _ = run(capsys, "probe", "--fixture", "R3", "--coeff", "delta1", "--domain", "G")
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "NotInDomain"
    assert report["anchor"] == "δ_1∉dom(G)"
    # ensure_ascii is off: the anchor is written verbatim
    assert "δ_1∉dom(G)" in out


def test_probe_with_custom_coefficients(capsys):
    coeff = "custom:" + fixture_path("harmonic4.json")
    code, out, _ = run(capsys, "probe", "--fixture", "R4", "--coeff", coeff, "--domain", "D")
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "InDomain"
    assert report["limit"][0][0] == pytest.approx(1 - 0.5 + 1 / 3 - 0.25)


@pytest.mark.parametrize("domain", ["C", "S", "D", "G"])
def test_r2_harmonic_from_the_cli_exits_cleanly(capsys, domain):
    code, out, _ = run(capsys, "probe", "--fixture", "R2", "--coeff", "harmonic", "--domain", domain)
    assert code == 0
    report = json.loads(out)
    expected = "NotInDomain" if domain in ("C", "S") else "NumericEvidenceDiverges"
    assert report["status"] == expected


def test_gallery_passes(capsys):
    code, out, _ = run(capsys, "gallery")
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert [fx["id"] for fx in report["fixtures"]] == [f"R{i}" for i in range(1, 8)]
    r1 = report["fixtures"][0]
    assert r1["sup_fiber_sum"] == "inf"


def test_operators(capsys):
    code, out, _ = run(capsys, "operators", "--input", fixture_path("frame_e1_e1_e2.json"))
    assert code == 0
    report = json.loads(out)
    assert report["G"][0][1] == [1.0, 0.0]
    assert report["passed"] is True


def test_transform(capsys):
    code, out, _ = run(
        capsys, "transform", "--input", fixture_path("onb2.json"),
        "--operator", fixture_path("diag12.json"), "--rule", "riesz_basis",
    )
    assert code == 0
    report = json.loads(out)
    assert report["sandwich"] is True
    assert report["predicted"]["A"] == pytest.approx(1.0)
    assert report["actual"]["B"] == pytest.approx(4.0)


def test_transform_hypothesis_violation_exits_with_input_error(capsys):
    code, _, err = run(
        capsys, "transform", "--input", fixture_path("onb2.json"),
        "--operator", fixture_path("rank_one.json"), "--rule", "frame",
    )
    assert code == 2
    assert "surjective" in err


def test_factorize(capsys):
    code, out, _ = run(capsys, "factorize", "--input", fixture_path("frame_e1_e1_e2.json"))
    assert code == 0
    report = json.loads(out)
    assert report["v"] == [[[1.0, 0.0], [1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]]
    assert report["properties"]["Frame"] is True
    assert report["properties"]["RieszFischer"] is False
    assert report["matches_classification"] is True


def test_text_format(capsys):
    code, out, _ = run(capsys, "classify", "--input", fixture_path("onb2.json"), "--format", "text")
    assert code == 0
    assert "consensus:" in out


def test_output_is_byte_deterministic(capsys):
    argv = ("classify", "--input", fixture_path("frame_e1_e1_e2.json"))
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_tolerance_flag_is_reported(capsys):
    code, out, _ = run(capsys, "classify", "--input", fixture_path("onb2.json"), "--tol-rank", "1e-6")
    assert code == 0
    assert json.loads(out)["tolerance"]["rank_rel"] == 1e-6


@pytest.mark.parametrize("argv", [
    ("frobnicate",),
    ("classify",),
    ("classify", "--input", "a.json", "--fixture", "R1"),
    ("probe", "--fixture", "R3", "--coeff", "delta1", "--domain", "X"),
    ("classify", "--input", "a.json", "--unknown"),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "usage" in err


@pytest.mark.parametrize("argv", [
    ("classify", "--input", fixture_path("bad_length.json")),
    ("classify", "--input", fixture_path("missing.json")),
    ("classify", "--fixture", "R9"),
    ("probe", "--fixture", "R3", "--coeff", "fibonacci", "--domain", "G"),
    ("probe", "--fixture", "R3", "--coeff", "delta1", "--domain", "G", "--levels", "5,3"),
    ("classify", "--input", fixture_path("onb2.json"), "--tol-rank", "2"),
])
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert "error:" in err


def test_internal_failure_exits_1(capsys, monkeypatch):
    def broken(command):
        raise RuntimeError("boom")

    monkeypatch.setattr(app, "execute", broken)
    code, _, err = run(capsys, "gallery")
    assert code == 1
    assert "internal error: boom" in err


def test_parse_command_defaults():
    command = parse_command(["probe", "--fixture", "R2", "--coeff", "quarter-geometric", "--domain", "S"])
    assert command.verb == Verb.PROBE
    assert command.domain == OperatorDomain.S
    assert command.levels == (64, 256, 1024, 4096)
    assert command.output_format == OutputFormat.JSON
    assert command.tol_rank is None


def test_parse_command_validates_levels():
    with pytest.raises(ValidationError):
        parse_command(["gallery", "--levels", "0"])


def test_parser_lists_every_verb():
    help_text = build_parser().format_help()
    for verb in Verb:
        assert verb.value in help_text
