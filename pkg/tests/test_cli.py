"""Command-line behavior: subcommands, schemas, determinism, exit codes."""

import io
import json
from contextlib import redirect_stdout

import pytest

from faultline.cli import main
from faultline.documents import bundled_document, bundled_names, load_document
from faultline.errors import ValidationError


def run_cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def test_selftest_passes():
    code, out = run_cli("selftest")
    assert code == 0
    assert out.count("PASS") == 3
    assert "3/3 examples pass" in out


def test_cohomology_bundled_section4():
    code, out = run_cli("cohomology", "-i", "bundled:period_doubling")
    assert code == 0
    doc = json.loads(out)
    assert doc["H1"]["expr"] == "Z[1/2] (+) Z"
    assert doc["H2"]["expr"] == "Z[1/L:x^2-x-3]^2 (+) (Z[1/L:x^2-x-3] (x) Z[1/2])"
    assert doc["H3"]["expr"] == "(Z[1/L:x^2-x-3] (x) Z[1/L:x^2-x-3])^2"
    assert doc["H_above_3"] == "0"
    assert doc["essential_vertices"]["n"] == 2
    assert doc["d1"]["recognized"] == "Z[1/2] (+) Z^2"


def test_analyze_identity_degenerate(tmp_path):
    doc = {
        "alphabets": {"one": ["a"]},
        "substitutions": {"id": {"alphabet": "one", "rules": {"a": "a"}}},
    }
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    code, out = run_cli("analyze", "-i", str(path))
    assert code == 0
    rep = json.loads(out)["substitutions"]["id"]
    assert rep["perron_root"]["decimal"].startswith("1.0")
    assert rep["degenerate"] is True
    assert rep["spectral_class"] == "Unimodular"


def test_fault_subcommand_table():
    code, out = run_cli("fault", "-i", "bundled:doubling_swap",
                        "--top", "sigma1", "--bottom", "sigma2", "--rounds", "6")
    assert code == 0
    rep = json.loads(out)
    assert rep["classification"] == "RegularFault"
    assert len(rep["rounds"]) == 6
    assert rep["rounds"][0]["top"] == "ba"
    assert rep["rounds"][0]["bottom"] == "ab"
    assert rep["rounds"][5]["max_discrepancy"] == 6


def test_ap_subcommand():
    code, out = run_cli("ap", "-i", "bundled:period_doubling", "--name", "rho")
    assert code == 0
    rep = json.loads(out)
    assert sorted(rep["complex"]["edges"]) == ["0|0", "0|1", "1|0"]
    assert rep["complex"]["vertex_map"] == [1, 0]
    assert rep["border_forcing"] == {"right_forced_in": 1, "left_forced_in": None}


def test_mu_subcommand():
    code, out = run_cli("mu", "-i", "bundled:doubling_swap", "--name", "sigma1")
    assert code == 0
    rep = json.loads(out)
    assert rep["h1_of_tiling_space"]["expr"] == "Z[1/L:x^2-x-3]"
    assert rep["limit"]["a_prime"] == [[1, 1], [3, 0]]


def test_render_writes_svg(tmp_path):
    out_path = tmp_path / "patch.svg"
    code, _ = run_cli("render", "-i", "bundled:doubling_swap",
                      "--rounds", "2", "--overlay", "1", "-o", str(out_path))
    assert code == 0
    svg = out_path.read_text()
    assert svg.count("<rect") == 20
    assert svg.count("<line") == 3


def test_reports_are_deterministic():
    runs = [run_cli("cohomology", "-i", "bundled:row_thirds", "--format", "json")[1]
            for _ in range(2)]
    assert runs[0] == runs[1]


def test_document_roundtrip():
    for name in bundled_names():
        doc = bundled_document(name)
        again = load_document(doc.to_dict())
        assert again.substitutions == doc.substitutions
        assert again.dpv == doc.dpv
        assert again.options == doc.options
        assert again.to_dict() == doc.to_dict()


def test_unknown_fields_rejected(tmp_path):
    bad = {
        "alphabets": {"ab": ["a", "b"]},
        "substitutions": {"s": {"alphabet": "ab", "rules": {"a": "ab", "b": "a"}}},
        "extra": 1,
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, _ = run_cli("analyze", "-i", str(path))
    assert code == 1
    with pytest.raises(ValidationError):
        load_document(bad)


def test_missing_input_is_validation_error():
    code, _ = run_cli("cohomology")
    assert code == 1


def test_text_format():
    code, out = run_cli("analyze", "-i", "bundled:doubling_swap",
                        "--name", "sigma1", "--format", "text")
    assert code == 0
    assert "charpoly: x^2-x-3" in out
    assert "spectral_class: NonPisotExpanding" in out


def test_undetermined_exit_code(tmp_path):
    doc = {
        "alphabets": {"ab": ["a", "b"]},
        "substitutions": {
            "t1": {"alphabet": "ab", "rules": {"a": "ab", "b": "a"}},
            "t2": {"alphabet": "ab", "rules": {"a": "ba", "b": "a"}},
        },
        "options": {"modulus_letter": "b"},
    }
    path = tmp_path / "golden.json"
    path.write_text(json.dumps(doc))
    code, out = run_cli("fault", "-i", str(path), "--top", "t1", "--bottom", "t2")
    assert code == 2
    assert json.loads(out)["classification"] == "Undetermined"


def test_env_cap_override(monkeypatch):
    monkeypatch.setenv("FAULTLINE_MAX_WORD_LEN", "100")
    code, _ = run_cli("fault", "-i", "bundled:doubling_swap",
                      "--top", "sigma1", "--bottom", "sigma2", "--rounds", "12")
    assert code == 3  # resource cap


def test_schema_validation_messages():
    with pytest.raises(ValidationError):
        load_document({"alphabets": {"ab": ["a", "a"]}, "substitutions": {}})
    with pytest.raises(ValidationError):
        load_document({
            "alphabets": {"ab": ["a", "b"]},
            "substitutions": {"s": {"alphabet": "ab", "rules": {"a": "ab"}}},
        })
    with pytest.raises(ValidationError):
        load_document({
            "alphabets": {"ab": ["a", "b"]},
            "substitutions": {"s": {"alphabet": "ab", "rules": {"a": "ab", "b": ""}}},
        })
