from __future__ import annotations

import io
import json

import jsonschema
import pytest

from reflectionlab import cli, report
from reflectionlab.classical import CrosscheckResult
from reflectionlab.report import GroupType, InvalidTypeDescriptor, ResultDocument, parse_type

from conftest import GOLDEN, ROOT, read_golden

SCHEMA = json.loads((ROOT / "schema" / "result-v1.json").read_text("utf-8"))
FAST_TYPES = ["B5", "D6", "E6", "F4", "G2", "H3", "H4"]


def run_cli(*argv) -> tuple[int, str]:
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("text, expected", [("b5", GroupType("B", 5)), (" E8 ", GroupType("E", 8)),
                                            ("I2:12", GroupType("I", 2, 12)), ("I2(5)", GroupType("I", 2, 5)),
                                            ("h4", GroupType("H", 4))])
def test_parse_type(text, expected):
    assert parse_type(text) == expected


@pytest.mark.parametrize("text", ["X9", "E9", "I2:2", "B1", "F5", "", "A-1"])
def test_parse_type_rejects(text):
    with pytest.raises(InvalidTypeDescriptor):
        parse_type(text)


@pytest.mark.parametrize("stem", FAST_TYPES)
def test_markdown_matches_golden(stem, cache_env):
    code, text = run_cli("classify", "--type", stem)
    assert code == 0
    assert text == (GOLDEN / f"{stem}.md").read_text("utf-8")


@pytest.mark.parametrize("stem", FAST_TYPES)
def test_equal_labels_iff_equal_gamma_class(stem, cache_env):
    doc = report.run(parse_type(stem), report.RunOptions(cache_dir=cache_env))
    for a in doc.records:
        for b in doc.records:
            assert (a.gamma_label == b.gamma_label) == (a.gamma_class == b.gamma_class)


def test_golden_parser_reads_blocks():
    blocks = read_golden("G2")
    assert [len(b) for b in blocks] == [1, 1, 1, 4]
    assert blocks[-1][0] == {"type": "G2", "order": 12, "class_size": 1, "class": "G2"}


@pytest.mark.parametrize("stem", ["G2", "B5", "H3", "I2:8"])
def test_json_validates_and_round_trips(stem, cache_env):
    code, text = run_cli("classify", "--type", stem, "--format", "json")
    assert code == 0
    data = json.loads(text)
    jsonschema.validate(data, SCHEMA)
    assert ResultDocument.from_json(text).to_json() == text


def test_csv(cache_env):
    code, text = run_cli("classify", "--type", "F4", "--format", "csv")
    lines = text.splitlines()
    assert lines[0].startswith("type,parameter,order,class_size")
    assert len(lines) == 38


def test_ungrouped_markdown_has_no_separators(cache_env):
    _, text = run_cli("classify", "--type", "F4", "--no-group-by-closure")
    assert "| --- |" not in text
    assert text.count("\n| ") == 37 + 2


def test_threads_do_not_change_output(tmp_path):
    outs = [run_cli("classify", "--type", "H3", "--format", "json", "--threads", str(k), "--no-cache")[1]
            for k in (1, 4)]
    assert outs[0] == outs[1]


def test_invalid_type_exit_code(cache_env, capsys):
    code, _ = run_cli("classify", "--type", "Q7")
    assert code == cli.EXIT_BAD_TYPE
    assert "cannot parse" in capsys.readouterr().err
    assert run_cli("crosscheck", "--type", "E6")[0] == cli.EXIT_BAD_TYPE


def test_budget_exhaustion_gives_partial_output(capsys):
    code, text = run_cli("classify", "--type", "E7", "--budget", "5000", "--format", "json", "--no-cache")
    assert code == cli.EXIT_BUDGET
    doc = json.loads(text)
    jsonschema.validate(doc, SCHEMA)
    assert doc["warning"] and "budget" in doc["warning"]
    assert 0 < len(doc["records"]) < 47
    assert "warning" in capsys.readouterr().err


def test_search_budget_exhaustion(capsys):
    code, text = run_cli("gamma", "--type", "F4", "--budget", "1", "--no-cache")
    assert code == cli.EXIT_BUDGET
    assert "injective: unknown" in text


def test_cache_hit_skips_computation(cache_env, monkeypatch):
    first = run_cli("classify", "--type", "G2", "--format", "json")[1]
    assert (cache_env / "v1-G2.json").exists()

    def boom(*a, **k):
        raise AssertionError("recomputed")

    monkeypatch.setattr(report, "compute", boom)
    assert run_cli("classify", "--type", "G2", "--format", "json")[1] == first


def test_env_overrides_cache_dir(cache_env, tmp_path):
    other = tmp_path / "other"
    run_cli("classify", "--type", "G2", "--cache-dir", str(other))
    assert (cache_env / "v1-G2.json").exists()
    assert not other.exists()


def test_cache_dir_without_env(tmp_path, monkeypatch):
    monkeypatch.delenv("REFLECTIONLAB_CACHE", raising=False)
    run_cli("classify", "--type", "G2", "--cache-dir", str(tmp_path / "c"))
    code, listing = run_cli("cache", "list", "--cache-dir", str(tmp_path / "c"))
    assert code == 0 and listing.startswith("v1-G2.json")
    assert run_cli("cache", "clear", "--cache-dir", str(tmp_path / "c"))[1] == "removed 1 entries\n"
    assert run_cli("cache", "list", "--cache-dir", str(tmp_path / "c"))[1] == ""


def test_corrupt_cache_entry_is_recomputed(cache_env):
    cache_env.mkdir(parents=True)
    (cache_env / "v1-G2.json").write_text("{not json", "utf-8")
    code, text = run_cli("classify", "--type", "G2")
    assert code == 0 and text == (GOLDEN / "G2.md").read_text("utf-8")


def test_gamma_text(cache_env):
    code, text = run_cli("gamma", "--type", "G2", "--check-injective", "--check-surjective", "--find-coincidences")
    assert code == 0
    assert "injective: false" in text and "surjective: true" in text
    assert "A2 (class size 1) ~ Ã2 (class size 1)" in text


def test_gamma_json(cache_env):
    code, text = run_cli("gamma", "--type", "H3", "--format", "json", "--check-surjective")
    data = json.loads(text)
    assert data["injective"] is True and data["surjective"] is False and data["class_count"] == 10


def test_surjectivity_refused_above_cap(cache_env, capsys, monkeypatch):
    monkeypatch.setattr(cli, "DEFAULT", cli.DEFAULT.__class__(class_enum_cap=100))
    code, text = run_cli("gamma", "--type", "H3", "--check-surjective")
    assert code == 0
    assert "refused" in capsys.readouterr().err
    assert "surjective" not in text


def test_dihedral(cache_env):
    code, text = run_cli("gamma", "--type", "I2:9", "--check-injective", "--check-surjective")
    assert "injective: true" in text and "surjective: false" in text
    code, text = run_cli("gamma", "--type", "I2:10", "--check-injective", "--check-surjective")
    assert "injective: false" in text and "surjective: false" in text


def test_crosscheck_pass_and_mismatch(monkeypatch):
    code, text = run_cli("crosscheck", "--type", "D4")
    assert code == 0 and text == "D4: pass\n"
    bad = CrosscheckResult("D4", False, [("A1", 2, "21^2.", "A1")], [], [])
    monkeypatch.setattr(cli, "crosscheck", lambda family, n: bad)
    code, text = run_cli("crosscheck", "--type", "D4", "--format", "json")
    assert code == cli.EXIT_MISMATCH
    assert json.loads(text)["only_predicted"] == [["A1", 2, "21^2.", "A1"]]


def test_cli_argument_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        cli.main(["classify", "--type", "G2", "--format", "xml"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        cli.main(["classify", "--type", "G2", "--threads", "0"])
