import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from rgraph_topos import corpus
from rgraph_topos.cli import main
from rgraph_topos.core import ValidationError
from rgraph_topos.graphfile import (
    GraphFileError,
    export_dot,
    parse_graph_file,
    parse_graph_text,
    write_graph_file,
)

ROOT = Path(__file__).resolve().parent.parent
SAMPLES = ROOT / "samples"
GOLDEN = Path(__file__).resolve().parent / "golden"

# name -> (argv, expected exit code, artifact file or None)
GOLDEN_RUNS = {
    "show_k2": (["show", "k2.json"], 0, None),
    "show_omega": (["show", "@Omega"], 0, None),
    "hom_count_1_k2": (["hom", "1.json", "k2.json", "--count"], 0, None),
    "hom_count_e_omega": (["hom", "e.json", "omega.json", "--count"], 0, None),
    "cantor_3": (["cantor", "--size", "3"], 0, None),
    "export_dot_k2": (["export-dot", "k2.json", "-o", "k2.dot"], 0, "k2.dot"),
    "export_dot_omega": (["export-dot", "omega.json", "-o", "omega.dot"], 0, "omega.dot"),
}


def run_cli(args, cwd):
    proc = subprocess.run(
        [sys.executable, "-m", "rgraph_topos.cli", *args],
        cwd=cwd,
        capture_output=True,
        env={**os.environ, "PYTHONHASHSEED": "random"},
    )
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture
def workdir(tmp_path):
    for f in SAMPLES.iterdir():
        shutil.copy(f, tmp_path / f.name)
    return tmp_path


def transcript(name, workdir):
    args, _, artifact = GOLDEN_RUNS[name]
    code, out, _ = run_cli(args, workdir)
    data = f"exit: {code}\n".encode() + out
    if artifact:
        data += b"--- " + artifact.encode() + b"\n" + (workdir / artifact).read_bytes()
    return code, data


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden_transcripts(name, workdir):
    code, first = transcript(name, workdir)
    _, second = transcript(name, workdir)
    assert first == second
    assert code == GOLDEN_RUNS[name][1]
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("RGT_UPDATE_GOLDEN"):
        path.write_bytes(first)
    assert first == path.read_bytes()


def invoke(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


VERDICT_FOR = {0: "pass", 1: "fail", 3: "error", 4: "error"}


class TestExitCodes:
    def test_hom_count(self, capsys):
        code, rep = invoke(capsys, "hom", str(SAMPLES / "1.json"), str(SAMPLES / "k2.json"), "--count")
        assert code == 0 and rep["details"] == {"count": 2}

    def test_hom_listing(self, capsys):
        code, rep = invoke(capsys, "hom", "@E", "@Omega")
        assert code == 0 and len(rep["details"]["morphisms"]) == 5

    def test_check_topos_three_vertices(self, capsys):
        code, rep = invoke(capsys, "check", "topos", "--max-vertices", "3")
        assert code == 0 and rep["verdict"] == "pass"
        laws = rep["details"]["laws"]
        assert len(laws) == 3 and all(t["passed"] for t in laws.values())
        assert rep["details"]["counterexamples"] == {}

    def test_failing_property_exits_one(self, capsys, monkeypatch):
        from rgraph_topos import cli
        from rgraph_topos.reports import CheckReport

        def broken(graphs, budget=None):
            report = CheckReport("classifier")
            report.fail(graph="E", problem="injected")
            return report

        monkeypatch.setattr(cli, "verify_classifier", broken)
        code, rep = invoke(capsys, "check", "topos", "--max-vertices", "1")
        assert code == 1 and rep["verdict"] == "fail"
        assert rep["details"]["counterexamples"]["classifier"][0]["problem"] == "injected"

    def test_usage_errors(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["exp", "--base", "@K2"])
        assert info.value.code == 2
        assert main(["show", "@nope"]) == 2
        assert main(["lawvere", "@E", "--seed", "3"]) == 2

    def test_invalid_input_exits_three(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"vertices": ["a"], "edges": [{"name": "e", "src": "a"}]}')
        code, rep = invoke(capsys, "show", str(bad))
        assert code == 3 and "edges[0]" in rep["details"]["error"]

    def test_budget_exits_four(self, capsys, monkeypatch):
        monkeypatch.setenv("RGT_BUDGET", "3")
        code, rep = invoke(capsys, "hom", "@E", "@K2")
        assert code == 4 and rep["verdict"] == "error"

    @pytest.mark.parametrize(
        "args",
        [
            ["show", "@E"],
            ["global-elements", "@Omega"],
            ["edge-points", "@K2"],
            ["classify", "@E", "--sub", "s,t;1_E"],
            ["check", "exp-complete"],
            ["check", "tournament", "@K2"],
            ["cantor", "--size", "2", "--witness"],
            ["lawvere", "@K2", "--exhaustive"],
            ["no-surjection", "@E"],
            ["hom", "@K3", "@K3"],
        ],
    )
    def test_exit_code_matches_verdict(self, capsys, args):
        code, rep = invoke(capsys, *args)
        assert rep["verdict"] == VERDICT_FOR[code]
        assert rep["tool_version"] and isinstance(rep["inputs"], dict)

    def test_classify(self, capsys):
        code, rep = invoke(capsys, "classify", "@E", "--sub", "s,t")
        assert code == 0
        assert rep["details"]["characteristic"]["edges"]["1_E"] == "extra@true"

    def test_exp_writes_file(self, capsys, tmp_path):
        out = tmp_path / "x.json"
        code, _ = invoke(capsys, "exp", "--base", "@K2", "--power", "@E", "-o", str(out))
        g = parse_graph_file(out)
        assert code == 0 and (g.n_vertices, g.n_edges) == (4, 16)

    def test_product_writes_file(self, capsys, tmp_path):
        out = tmp_path / "p.json"
        assert invoke(capsys, "product", "@K2", "@K2", "-o", str(out))[0] == 0
        assert parse_graph_file(out).n_edges == 16

    def test_ac_discrete_file(self, capsys):
        code, rep = invoke(capsys, "check", "ac-discrete", str(SAMPLES / "collapse.json"))
        assert code == 0 and rep["details"]["f_h_f_equals_f"]


class TestSamplingFlag:
    def test_exhaustive_flag(self, capsys):
        code, rep = invoke(capsys, "lawvere", "@E", "--exhaustive")
        assert code == 0 and rep["details"]["exhaustive"] and not rep["details"]["sampled"]

    def test_sampled_flag(self, capsys, monkeypatch):
        monkeypatch.setenv("RGT_BUDGET", "100")
        code, rep = invoke(capsys, "lawvere", "@D3", "--sample", "4", "--seed", "7")
        assert code == 0 and rep["details"]["sampled"] and not rep["details"]["exhaustive"]
        again = invoke(capsys, "lawvere", "@D3", "--sample", "4", "--seed", "7")[1]
        assert again == rep

    def test_exhaustive_over_budget_refuses(self, capsys, monkeypatch):
        monkeypatch.setenv("RGT_BUDGET", "100")
        assert invoke(capsys, "lawvere", "@D3", "--exhaustive")[0] == 4


class TestGraphFiles:
    def test_k2_sample(self):
        g = parse_graph_file(SAMPLES / "k2.json")
        assert (g.n_vertices, g.n_edges) == (2, 4)

    @pytest.mark.parametrize("path", sorted(p.name for p in SAMPLES.glob("*.json") if p.name != "collapse.json"))
    def test_round_trip(self, path, tmp_path):
        g = parse_graph_file(SAMPLES / path)
        write_graph_file(g, tmp_path / path)
        assert parse_graph_file(tmp_path / path) == g

    def test_builtins_round_trip(self, tmp_path):
        for name in corpus.BUILTINS:
            g = corpus.builtin(name)
            write_graph_file(g, tmp_path / "g.json")
            assert parse_graph_file(tmp_path / "g.json") == g

    def test_missing_src_has_location(self):
        text = '{\n  "vertices": ["a"],\n  "edges": [\n    {"name": "e", "tgt": "a"}\n  ]\n}\n'
        with pytest.raises(GraphFileError) as info:
            parse_graph_text(text, "g.json")
        assert "edges[0]" in str(info.value) and "src" in str(info.value)
        assert ":4" in str(info.value)

    def test_json_syntax_error_position(self):
        with pytest.raises(GraphFileError, match=r"g.json:2:"):
            parse_graph_text('{\n  "vertices": [,]\n}', "g.json")

    def test_explicit_mode_bad_distinguished(self):
        text = json.dumps(
            {
                "loops": "explicit",
                "vertices": ["a", "b"],
                "edges": [
                    {"name": "la", "src": "a", "tgt": "a", "distinguished": True},
                    {"name": "x", "src": "a", "tgt": "b", "distinguished": True},
                    {"name": "lb", "src": "b", "tgt": "b", "distinguished": True},
                ],
            }
        )
        with pytest.raises(ValidationError, match="invalid distinguished loop"):
            parse_graph_text(text)


class TestDot:
    def test_terminal(self):
        dot = export_dot(corpus.builtin("1"))
        assert dot.count("->") == 1 and dot.count("style=dashed") == 1
        assert dot.count(";\n") == 2

    def test_omega(self):
        dot = export_dot(corpus.builtin("Omega"))
        assert dot.count("->") == 5 and dot.count("style=dashed") == 2

    def test_deterministic(self):
        assert export_dot(corpus.builtin("K2")) == export_dot(corpus.builtin("K2"))
