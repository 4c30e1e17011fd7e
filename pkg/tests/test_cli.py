import json
import os
import re
import subprocess
import sys

import jsonschema
import pytest

from quadnil import cli, schemas
from quadnil.family import Assignment, SymbolicFamily
from quadnil.linalg import Matrix, from_json, to_json


def run(*argv):
    """In-process run: (exit code, stdout text)."""
    code, text, out = cli.run(list(argv))
    return code, text


def run_main(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_json(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc, encoding="utf-8")
    return str(path)


JSON_CASES = [
    ("family", ["family", "--d", "5"]),
    ("bmatrix", ["bmatrix", "--d", "6"]),
    ("bmatrix", ["bmatrix", "--d", "5", "--assign", "a1=1,a10=-2/3"]),
    ("table", ["table", "--d", "5"]),
    ("table", ["table", "--d", "5", "--assign", "a1=1,a10=1", "--pad", "1"]),
    ("check", ["check", "--d", "5", "--assign", "a1=1,a10=1"]),
    ("check", ["check", "--d", "5", "--assign", "a1=1"]),
    ("rank", ["rank", "--d", "7", "--assign", "a1=1,a10=1,a15=1"]),
    ("search", ["search", "--d", "6", "--max-size", "3", "--seed", "7"]),
    ("search", ["search", "--d", "4", "--max-size", "6"]),
    ("certify", ["certify", "--d", "4"]),
    ("certify-support", ["certify", "--d", "5", "--support", "a1,a10"]),
    ("certify-support", ["certify", "--d", "5", "--support", "a1,a2"]),
]


@pytest.mark.parametrize("schema, argv", JSON_CASES)
def test_json_output_validates_and_round_trips(schema, argv):
    _, text = run(*argv, "--format", "json")
    doc = json.loads(text)
    jsonschema.validate(doc, schemas.BY_COMMAND[schema])
    assert cli.render(json.loads(cli.render(doc))) == text


def test_typed_round_trips():
    _, text = run("family", "--d", "5", "--format", "json")
    assert SymbolicFamily.from_json(json.loads(text)).to_json() == json.loads(text)
    _, text = run("bmatrix", "--d", "5", "--assign", "a3=7/2", "--format", "json")
    assert to_json(from_json(json.loads(text))) == json.loads(text)
    _, text = run("bmatrix", "--d", "5", "--format", "json")
    assert to_json(from_json(json.loads(text))) == json.loads(text)
    asg = Assignment.parse("a1=1,a10=-2/3", 5)
    jsonschema.validate(asg.to_json(), schemas.ASSIGNMENT)
    assert Assignment.from_json(json.loads(json.dumps(asg.to_json()))) == asg


def test_exit_codes(capsys):
    assert run_main(capsys, "rank", "--d", "7", "--assign", "a1=1,a10=1,a15=1")[0] == 0
    assert run_main(capsys, "rank", "--d", "7", "--assign", "a1=1,a10=1")[0] == 1
    assert run_main(capsys, "check", "--d", "5", "--assign", "a1=1")[0] == 1
    assert run_main(capsys, "search", "--d", "4", "--max-size", "6")[0] == 0
    assert run_main(capsys, "certify", "--d", "5", "--support", "a1")[0] == 1
    assert run_main(capsys, "family")[0] == 2
    assert run_main(capsys, "nonsense")[0] == 2
    assert run_main(capsys, "family", "--d", "1")[0] == 2
    assert run_main(capsys, "search", "--d", "9")[0] == 2
    assert run_main(capsys, "rank", "--d", "5", "--assign", "a11=1")[0] == 2


def test_rank_text_report():
    code, text = run("rank", "--d", "7", "--assign", "a1=1,a10=1,a15=1")
    assert code == 0 and text == "rank 7\nd-quadratic: true\n"


def test_search_text_report():
    code, text = run("search", "--d", "4", "--max-size", "6")
    assert "min_support = IMPOSSIBLE" in text
    assert "CANNOT: all order-4 minors restricted to this support are the zero polynomial" in text


@pytest.mark.parametrize(
    "doc, field",
    [
        ('{"d": 5, "values": {"a1": "x"}}', "values.a1"),
        ('{"d": 5, "values": {"b1": "1"}}', "values.b1"),
        ('{"values": {"a1": "1"}}', "'d'"),
        ('{"d": 5}', "'values'"),
        ('{"d": 5, "values": {"a1": "1"}', "not valid JSON"),
    ],
)
def test_malformed_assignment_names_the_field(tmp_path, capsys, doc, field):
    path = write_json(tmp_path, "asg.json", doc)
    code, out, err = run_main(capsys, "rank", "--d", "5", "--assignment", path)
    assert code == 2 and out == ""
    assert re.search(field, err)


def test_malformed_family_and_matrices(tmp_path, capsys):
    doc = SymbolicFamily.canonical(4).to_json()
    doc["matrices"][2][1][0] = "*"
    path = write_json(tmp_path, "fam.json", doc)
    code, _, err = run_main(capsys, "check", "--d", "4", "--family", path, "--assign", "a1=1")
    assert code == 2 and "matrices[2]" in err
    q = write_json(tmp_path, "q.json", {"rows": 2, "cols": 2})
    code, _, err = run_main(capsys, "hat", "--q", q)
    assert code == 2 and "'entries'" in err
    missing = str(tmp_path / "absent.json")
    code, _, err = run_main(capsys, "hat", "--q", missing)
    assert code == 2 and "absent.json" in err


def test_user_family_is_checked(tmp_path, capsys):
    doc = SymbolicFamily.canonical(4).to_json()
    doc["matrices"][0][1][2] = "+a2"
    path = write_json(tmp_path, "fam.json", doc)
    code, out, _ = run_main(capsys, "check", "--d", "4", "--family", path, "--assign", "a1=1", "--format", "json")
    report = json.loads(out)
    assert code == 1 and report["cond1"] is False and report["invariance"] is None


def test_iso_command(tmp_path, capsys):
    from quadnil.family import build_B
    from quadnil.isometry import transform

    BA = build_B(5).evaluate({1: 1, 10: 1})
    Q = Matrix([[1, 1, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 2, 0, 0], [0, 0, 0, 1, 3], [0, 0, 0, 0, -1]])
    files = {n: write_json(tmp_path, f"{n}.json", to_json(M)) for n, M in (("ba", BA), ("be", transform(BA, Q)), ("q", Q))}
    code, out, _ = run_main(capsys, "iso", "--d", "5", "--ba", files["ba"], "--be", files["be"], "--q", files["q"], "--format", "json")
    assert code == 0 and json.loads(out) == {"match": True, "residual_nonzeros": 0}
    jsonschema.validate(json.loads(out), schemas.ISO_REPORT)
    code, out, _ = run_main(capsys, "iso", "--ba", files["ba"], "--be", files["ba"], "--q", files["q"])
    assert code == 1 and out.startswith("match: false")
    singular = write_json(tmp_path, "s.json", to_json(Matrix.zeros(5, 5)))
    code, _, err = run_main(capsys, "iso", "--ba", files["ba"], "--be", files["be"], "--q", singular)
    assert code == 2 and "singular" in err


def test_hat_command(tmp_path):
    q = write_json(tmp_path, "q.json", {"rows": 3, "cols": 3, "entries": [["1", "2", "0"], ["0", "1", "0"], ["0", "0", "1/2"]]})
    code, text = run("hat", "--q", q, "--format", "json")
    doc = json.loads(text)
    jsonschema.validate(doc, schemas.MATRIX)
    assert doc["entries"] == [["1", "0", "0"], ["0", "1/2", "1"], ["0", "0", "1/2"]]
    _, latex = run("hat", "--q", q, "--format", "latex")
    assert "\\frac{1}{2}" in latex


@pytest.mark.parametrize("argv", [["bmatrix", "--d", "6"], ["family", "--d", "4"], ["table", "--d", "6"]])
def test_latex_matches_text_entry_sequence(argv):
    _, text = run(*argv)
    _, latex = run(*argv, "--format", "latex")
    norm = lambda s: re.sub(r"[{}_]", "", s)  # noqa: E731
    text_tokens = re.findall(r"-?a\d+|(?<![\w{])0(?![\w}])", text)
    latex_tokens = [norm(t) for t in re.findall(r"-?a_\{\d+\}|(?<![\w{])0(?![\w}])", latex)]
    assert text_tokens == latex_tokens
    assert latex.count("\\begin{") == latex.count("\\end{")


def test_latex_refused_for_reports(capsys):
    code, _, err = run_main(capsys, "rank", "--d", "5", "--assign", "a1=1", "--format", "latex")
    assert code == 2 and "latex" in err


def test_out_file(tmp_path, capsys):
    out = tmp_path / "c5.txt"
    code, stdout, _ = run_main(capsys, "bmatrix", "--d", "5", "--out", str(out))
    assert code == 0 and stdout == ""
    assert out.read_text(encoding="utf-8") == run("bmatrix", "--d", "5")[1]


def test_byte_identical_across_runs_and_threads():
    argv = [sys.executable, "-m", "quadnil", "search", "--d", "7", "--max-size", "3", "--format", "json"]
    outputs = set()
    for threads in ("1", "1", "4"):
        env = dict(os.environ, QUADNIL_THREADS=threads)
        outputs.add(subprocess.run(argv, env=env, capture_output=True, check=True).stdout)
    assert len(outputs) == 1


def test_seed_does_not_change_output():
    a = run("search", "--d", "6", "--max-size", "3", "--seed", "1", "--format", "json")
    b = run("search", "--d", "6", "--max-size", "3", "--seed", "99", "--format", "json")
    assert a == b


def test_assignment_file_and_inline_agree(tmp_path):
    path = write_json(tmp_path, "a.json", Assignment.parse("a1=1,a20=1", 6).to_json())
    assert run("rank", "--d", "6", "--assignment", path) == run("rank", "--d", "6", "--assign", "a1=1,a20=1")
    with pytest.raises(cli.UsageError):
        run("rank", "--d", "5", "--assignment", path)
    with pytest.raises(cli.UsageError):
        run("rank", "--d", "6", "--assignment", path, "--assign", "a1=1")


def test_listing_cap_zero_lists_everything():
    _, text = run("search", "--d", "5", "--max-size", "2", "--listing-cap", "0", "--format", "json")
    doc = json.loads(text)
    assert len(doc["achieving"]) == doc["achieving_total"] == 15
    with pytest.raises(cli.UsageError):
        run("search", "--d", "5", "--listing-cap", "-1")
