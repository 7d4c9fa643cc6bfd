import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from foldbox.cli import main

GOLDEN = Path(__file__).parent.parent / "golden"


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, list(args))


class TestValidate:
    def test_json_net(self, runner):
        res = invoke(runner, "validate", "--net", str(GOLDEN / "evolution.pn.json"))
        assert res.exit_code == 0
        doc = json.loads(res.output)
        assert doc == {"places": 3, "transitions": 3, "marking": {"1": 2}}

    def test_pnz_net(self, runner):
        res = invoke(runner, "validate", "--net", str(GOLDEN / "evolution.pnz"))
        assert res.exit_code == 0
        assert json.loads(res.output)["transitions"] == 3

    def test_malformed_file(self, runner, tmp_path):
        bad = tmp_path / "bad.pn.json"
        bad.write_text("{")
        res = invoke(runner, "validate", "--net", str(bad))
        assert res.exit_code == 1
        assert "error:" in res.output

    def test_missing_file(self, runner):
        res = invoke(runner, "validate", "--net", "nope.pn.json")
        assert res.exit_code == 2  # click usage error


class TestAnalyze:
    def test_traffic_light_report(self, runner):
        res = invoke(
            runner,
            "analyze",
            "--net",
            str(GOLDEN / "trafficlight.pn.json"),
            "--predicate",
            "mutual-exclusion",
        )
        assert res.exit_code == 0
        doc = json.loads(res.output)
        assert doc["safe"] is True
        assert doc["predicate"]["status"] == "holds"

    def test_bad_variant_counterexample(self, runner):
        res = invoke(
            runner,
            "analyze",
            "--net",
            str(GOLDEN / "trafficlight-bad.pn.json"),
            "--predicate",
            "mutual-exclusion",
        )
        doc = json.loads(res.output)
        assert doc["predicate"]["status"] == "counterexample"
        assert sorted(doc["predicate"]["counterexample"]) == ["go1", "go2"]

    def test_unknown_predicate(self, runner):
        res = invoke(
            runner,
            "analyze",
            "--net",
            str(GOLDEN / "trafficlight.pn.json"),
            "--predicate",
            "fairness",
        )
        assert res.exit_code == 1

    def test_needs_marking(self, runner):
        res = invoke(runner, "analyze", "--net", str(GOLDEN / "evolution.pnz"))
        assert res.exit_code == 1
        assert "marking" in res.output


class TestCodecCommands:
    def test_decode_encode_round_trip(self, runner, tmp_path):
        netfile = tmp_path / "evo.pn.json"
        pnzfile = tmp_path / "evo.pnz"
        res = invoke(
            runner, "decode", "--in", str(GOLDEN / "evolution.pnz"), "--out", str(netfile)
        )
        assert res.exit_code == 0
        res = invoke(runner, "encode", "--in", str(netfile), "--out", str(pnzfile))
        assert res.exit_code == 0
        assert pnzfile.read_text() == (GOLDEN / "evolution.pnz").read_text().strip()

    def test_decode_rejects_garbage(self, runner, tmp_path):
        bad = tmp_path / "bad.pnz"
        bad.write_text("1,2,3")
        out = tmp_path / "out.pn.json"
        res = invoke(runner, "decode", "--in", str(bad), "--out", str(out))
        assert res.exit_code == 1
        assert not out.exists()

    def test_fold_prints_generators(self, runner):
        res = invoke(runner, "fold", "--net", str(GOLDEN / "evolution.pn.json"))
        doc = json.loads(res.output)
        assert doc["pnz"] == "1,0,2,0,1,0,2,0,2,0,3,0"
        assert doc["generators"][2] == {"label": 3, "source": [2], "target": [3]}

    def test_unfold_writes_net(self, runner, tmp_path):
        out = tmp_path / "out.pn.json"
        res = invoke(
            runner, "unfold", "--in", str(GOLDEN / "evolution.pnz"), "--out", str(out)
        )
        assert res.exit_code == 0
        assert json.loads(out.read_text())["transitions"][0]["input"] == {"1": 1}


class TestExportDot:
    def test_net_dot(self, runner):
        res = invoke(runner, "export-dot", "--net", str(GOLDEN / "evolution.pn.json"))
        assert res.exit_code == 0
        assert res.output.startswith("digraph")

    def test_reachability_dot(self, runner):
        res = invoke(
            runner,
            "export-dot",
            "--net",
            str(GOLDEN / "evolution.pn.json"),
            "--reachability",
        )
        assert res.exit_code == 0
        assert "digraph" in res.output and "t1" in res.output


class TestStep:
    def test_session_lifecycle(self, runner, tmp_path):
        sess = str(tmp_path / "session.json")
        net = str(GOLDEN / "evolution.pn.json")
        res = invoke(runner, "step", "--net", net, "--session", sess)
        state = json.loads(res.output)
        assert state["marking"] == {"p1": 2}
        assert {e["transition"] for e in state["enabled"]} == {"t1", "t2"}

        res = invoke(runner, "step", "--net", net, "--session", sess, "--fire", "t1")
        state = json.loads(res.output)
        assert state["marking"] == {"p1": 1, "p2": 1}

        res = invoke(runner, "step", "--net", net, "--session", sess, "--fire", "t2")
        res = invoke(
            runner,
            "step",
            "--net",
            net,
            "--session",
            sess,
            "--fire",
            "t3",
            "--choice",
            "1",
        )
        state = json.loads(res.output)
        assert state["marking"] == {"p2": 1, "p3": 1}
        assert "g<3>" in state["term"]

    def test_disabled_firing_fails(self, runner, tmp_path):
        sess = str(tmp_path / "session.json")
        res = invoke(
            runner,
            "step",
            "--net",
            str(GOLDEN / "evolution.pn.json"),
            "--session",
            sess,
            "--fire",
            "t3",
        )
        assert res.exit_code == 1
        assert not Path(sess).exists()


class TestRun:
    def test_quicksort(self, runner):
        res = invoke(
            runner,
            "run",
            "--net",
            str(GOLDEN / "quicksort.pn.json"),
            "--binding",
            str(GOLDEN / "qs-binding.json"),
            "--tokens",
            "[[3,1,2]]",
            "--fire",
            "sort",
        )
        assert res.exit_code == 0
        assert json.loads(res.output) == [[1, 2, 3]]

    def test_no_place_for_value(self, runner):
        res = invoke(
            runner,
            "run",
            "--net",
            str(GOLDEN / "quicksort.pn.json"),
            "--binding",
            str(GOLDEN / "qs-binding.json"),
            "--tokens",
            '["text"]',
        )
        assert res.exit_code == 1
