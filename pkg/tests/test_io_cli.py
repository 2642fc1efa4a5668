import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from conftest import fixture_game, mixed_classes
from sigref.cli import main
from sigref.equilibria import is_sequential_equilibrium
from sigref.io import (
    NumericError,
    SchemaError,
    class_from_dict,
    class_to_dict,
    encode,
    fixture_path,
    game_from_dict,
    game_to_dict,
    load_fixture,
    parse_game_spec,
)
from sigref.spence import SpenceSpec

GOLDEN = Path(__file__).parent / "golden"
FINITE = ["beer_quiche", "hiding", "coordination", "reasonable_doubt",
          "cheap_talk_1", "cheap_talk_2", "cheap_talk_3", "discrete_spence"]


def fixture_json(name):
    return json.loads(fixture_path(name).read_text())


def test_parse_bundled_games():
    g = load_fixture("beer_quiche")
    assert (g.n_types, g.n_messages, len(g.actions)) == (2, 2, 2)
    spec = load_fixture("spence3")
    assert isinstance(spec, SpenceSpec)
    assert spec.prior == (F(35, 100), F(20, 100), F(45, 100))


def test_prior_errors_carry_path():
    data = fixture_json("beer_quiche")
    data["prior"] = [0.1, 0.8]
    with pytest.raises(SchemaError) as err:
        parse_game_spec(json.dumps(data))
    assert err.value.path == "$.prior"
    data = fixture_json("spence3")
    data["prior"] = [0.3, 0.2, 0.4]
    with pytest.raises(SchemaError) as err:
        parse_game_spec(json.dumps(data))
    assert err.value.path == "$.prior"


def test_malformed_inputs():
    with pytest.raises(SchemaError):
        parse_game_spec("{not json")
    with pytest.raises(SchemaError) as err:
        parse_game_spec('{"types": [], "prior": []}')
    assert err.value.path == "$.action_model"
    data = fixture_json("hiding")
    data["sender_payoff"][0][3] = "lots"
    with pytest.raises(NumericError):
        parse_game_spec(json.dumps(data))
    data = fixture_json("hiding")
    data["sender_payoff"][0][1] = "m9"
    with pytest.raises(SchemaError) as err:
        parse_game_spec(json.dumps(data))
    assert err.value.path == "$.sender_payoff[0][1]"


def test_fractions_as_strings():
    assert load_fixture("reasonable_doubt").prior == (F(1, 3),) * 3


def test_encode():
    assert encode(F(3)) == 3
    assert encode(F(7, 4)) == 1.75
    assert encode(F(1, 3)) == "1/3"


@pytest.mark.parametrize("name", FINITE)
def test_game_round_trip(name):
    g = fixture_game(name)
    back = game_from_dict(json.loads(json.dumps(game_to_dict(g))))
    assert game_to_dict(back) == game_to_dict(g)


@pytest.mark.parametrize("name", FINITE)
def test_class_rows_round_trip_and_reverify(name):
    g = fixture_game(name)
    for c in mixed_classes(name):
        row = json.loads(json.dumps(class_to_dict(g, c)))
        back = class_from_dict(g, row)
        assert back.payoffs == c.payoffs
        assert is_sequential_equilibrium(g, back.profile), c.label


def test_fixture_override(tmp_path, monkeypatch):
    data = fixture_json("beer_quiche")
    data["name"] = "override"
    (tmp_path / "beer_quiche.json").write_text(json.dumps(data))
    monkeypatch.setenv("SIGREF_FIXTURES", str(tmp_path))
    assert load_fixture("beer_quiche").name == "override"
    assert load_fixture("hiding").name == "hiding"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", FINITE)
def test_golden_graph_and_compare(capsys, name):
    code, out, _ = run_cli(capsys, "graph", name)
    assert code == 0
    assert out == (GOLDEN / f"{name}.dot").read_text()
    code, out, _ = run_cli(capsys, "compare", name, "--format", "text")
    assert code == 0
    assert out == (GOLDEN / f"{name}.txt").read_text()


def test_golden_spence(capsys):
    code, out, _ = run_cli(capsys, "spence", "spence2", "--grid-step", "0.25")
    assert code == 0 and out == (GOLDEN / "spence2.json").read_text()
    report = json.loads(out)
    assert report["lex_max"]["payoffs"] == [1.75, 1.75]
    assert report["report"]["passed"]
    code, out, _ = run_cli(capsys, "spence", "spence3", "--grid-step", "1/2")
    assert code == 0 and out == (GOLDEN / "spence3.json").read_text()


def test_compare_hiding_row(capsys):
    _, out, _ = run_cli(capsys, "compare", "hiding")
    sel = json.loads(out)["selected"]
    assert sel["intuitive"] == sel["D1"] == ["pooling@m1", "pooling@m2"]
    assert sel["G-P"] == sel["undefeated"] == sel["persuasive-most"] == ["pooling@m2"]


def test_graph_doubt_has_cycle(capsys):
    _, out, _ = run_cli(capsys, "graph", "reasonable_doubt", "--format", "json")
    d = json.loads(out)
    assert [len(c) for c in d["cycles"]] == [3]
    assert sum(1 for e in d["edges"] if e["to"] == "pooling@m4") == 3


def test_solve_and_refine(capsys, tmp_path):
    out_file = tmp_path / "bq.json"
    code, out, _ = run_cli(capsys, "solve", "beer_quiche", "--out", str(out_file), "--seed", "3")
    assert code == 0 and out == ""
    data = json.loads(out_file.read_text())
    assert data["seed"] == 3
    assert [c["label"] for c in data["classes"]] == ["pooling@beer", "pooling@quiche"]
    code, out, _ = run_cli(capsys, "refine", "beer_quiche", "--criterion", "intuitive")
    rows = json.loads(out)["verdicts"]
    assert [r["intuitive"]["pass"] for r in rows] == [True, False]
    assert rows[1]["intuitive"]["witness"]["message"] == "beer"
    code, out, _ = run_cli(capsys, "solve", "discrete_spence", "--mixed-support", "2", "--format", "text")
    assert code == 0 and "3 equilibrium classes" in out


def test_random_spec_suite(capsys):
    code, out, _ = run_cli(capsys, "spence", "--random-specs", "3", "--seed", "5", "--check")
    data = json.loads(out)
    assert code == 0 and data["seed"] == 5 and data["failed"] == 0


def test_input_errors_exit_2(capsys, tmp_path):
    assert run_cli(capsys, "solve", "no_such_game")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"prior": [1]}')
    code, _, err = run_cli(capsys, "solve", str(bad))
    assert code == 2 and "action_model" in err
    assert run_cli(capsys, "compare", "hiding", "--format", "dot")[0] == 2
    assert run_cli(capsys, "spence", "hiding")[0] == 2
    assert run_cli(capsys, "spence", "spence2", "--grid-step", "-1")[0] == 2
    assert run_cli(capsys, "solve")[0] == 2


class _FailingReport:
    passed = False
    n_classes = 0
    most_persuasive = []

    def to_dict(self, spec):
        return {"passed": False}


def test_check_flag_reports_failures(capsys, monkeypatch):
    import sigref.cli as cli

    monkeypatch.setattr(cli, "verify_theorems", lambda *a, **k: _FailingReport())
    assert run_cli(capsys, "spence", "spence2", "--check", "--grid-step", "1")[0] == 1
    assert run_cli(capsys, "spence", "spence2", "--grid-step", "1")[0] == 0
