import io
import json

import pytest

from definetti.cli import main, parse_constraints, parse_fuels, UsageError

POLYA = '{"process": "polya", "alpha": "1", "beta": "1"}'


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_parse_fuels():
    assert parse_fuels("1..3,5") == [1, 2, 3, 5]
    for bad in ("3,2", "0..2", "a", "1,1"):
        with pytest.raises(UsageError):
            parse_fuels(bad)


def test_parse_constraints():
    assert len(parse_constraints("1/4,1/2;3/4,-1")) == 2
    with pytest.raises(UsageError):
        parse_constraints("1/4;1/2,1/3")


def test_query_tsv_monotone_and_deterministic():
    argv = ("query", "--spec", POLYA, "--pi", "(1/2,1]", "--constraints", "1/2", "--fuel", "1..6")
    code, text = run(*argv)
    assert code == 0
    lines = text.strip().split("\n")
    assert lines[0] == "fuel\tlower_rational\tlower_decimal"
    values = [line.split("\t")[2] for line in lines[1:]]
    assert values == sorted(values) and len(values) == 6
    assert run(*argv)[1] == text


def test_query_json_with_bracket():
    code, text = run("query", "--spec", POLYA, "--pi", "(1/2,1]", "--constraints", "1/2",
                     "--fuel", "2,4", "--format", "json", "--assume-continuous")
    rows = json.loads(text)["rows"]
    assert code == 0 and [r["fuel"] for r in rows] == [2, 4]
    assert all("upper" in r for r in rows)
    assert rows[1]["upper_decimal"] <= rows[0]["upper_decimal"]


def test_query_domain_rescaling():
    a = run("query", "--spec", POLYA, "--pi", "(5,10]", "--constraints", "1/2", "--fuel", "3",
            "--domain", "0,10")[1]
    b = run("query", "--spec", POLYA, "--pi", "(1/2,1]", "--constraints", "1/2", "--fuel", "3")[1]
    assert a == b


def test_query_table_spec(tmp_path):
    spec = tmp_path / "t.json"
    spec.write_text(json.dumps({"process": "table", "entries": [
        {"box": "(1/2,1]", "fuel": 1, "lower": "1/2"}]}))
    code, text = run("query", "--spec", str(spec), "--pi", "(1/2,1]", "--constraints", "1/4",
                     "--fuel", "1..3")
    assert code == 0 and len(text.splitlines()) == 4


@pytest.mark.parametrize("argv", [
    ("query", "--spec", '{"process": "polya", "alpha": 0.5, "beta": "1"}', "--pi", "(0,1)",
     "--constraints", "1/2", "--fuel", "1"),
    ("query", "--spec", POLYA, "--pi", "(0,1)", "--constraints", "1/2,1/2", "--fuel", "1"),
    ("query", "--spec", POLYA, "--pi", "(0,1)", "--constraints", "1/2", "--fuel", "3,1"),
    ("query", "--spec", POLYA, "--pi", "[1/4,1/2)", "--constraints", "1/2", "--fuel", "1"),
    ("sample", "--spec", POLYA, "-n", "0"),
    ("frobnicate",),
])
def test_usage_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_transform_writes_file(tmp_path):
    out = tmp_path / "m.json"
    code, _ = run("transform", "--spec", '{"process": "polya", "alpha": "3/2", "beta": "5/2"}',
                  "--out", str(out))
    doc = json.loads(out.read_text())
    assert code == 0 and doc["measure"] == "beta_bernoulli" and doc["alpha"] == "3/2"
    assert doc["status"] == "closed-form" and doc["verified_depth"] == 8


def test_forward_accepts_transform_output(tmp_path):
    out = tmp_path / "m.json"
    run("transform", "--spec", '{"process": "iid_uniform"}', "--out", str(out))
    code, text = run("forward", "--spec", str(out), "--box", "(0,1/2)", "--fuel", "1..4")
    assert code == 0 and len(text.splitlines()) == 5


def test_sample_deterministic():
    a = run("sample", "--spec", POLYA, "-n", "12", "--seed", "4")[1]
    assert a == run("sample", "--spec", POLYA, "-n", "12", "--seed", "4")[1]
    assert set(a.split()) <= {"0", "1"}


def test_selftest_single_criterion():
    code, text = run("selftest", "--only", "2")
    assert code == 0 and text.startswith("[PASS] criterion 2")
