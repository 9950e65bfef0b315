from __future__ import annotations

import json

import pytest

from planprov.cli import main
from planprov.scenarios import (
    rover_appraisals_dicts,
    rover_domain_dict,
    rover_problem_dict,
)

GOAL = "goal:have_image(objective1,high_res)"


@pytest.fixture()
def workdir(tmp_path):
    (tmp_path / "domain.json").write_text(json.dumps(rover_domain_dict()))
    (tmp_path / "problem.json").write_text(json.dumps(rover_problem_dict()))
    (tmp_path / "appraisals.json").write_text(json.dumps(rover_appraisals_dicts()))
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def plan_and_convert(workdir, capsys):
    code, _, err = run(
        capsys,
        "plan",
        "--domain", str(workdir / "domain.json"),
        "--problem", str(workdir / "problem.json"),
        "--all-plans", "8",
        "-o", str(workdir / "plans.json"),
    )
    assert code == 0, err
    code, _, err = run(
        capsys,
        "convert",
        "--plans", str(workdir / "plans.json"),
        "--problem", str(workdir / "problem.json"),
        "--appraisals", str(workdir / "appraisals.json"),
        "-o", str(workdir / "graph.json"),
    )
    assert code == 0, err
    return workdir / "graph.json"


def test_plan_convert_query_pipeline(workdir, capsys):
    graph_file = plan_and_convert(workdir, capsys)
    doc = json.loads(graph_file.read_text())
    assert len(doc["nodes"]) == 25

    code, out, _ = run(
        capsys,
        "query",
        "--graph", str(graph_file),
        "--kind", "replan",
        "--focus", GOAL,
        "--refute", "flier1",
        "--threshold", "0.5",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["verdicts"]["needs_replan"] is True
    assert payload["confidence"] == 0.2


def test_query_sensitivity_with_class_selector(workdir, capsys):
    graph_file = plan_and_convert(workdir, capsys)
    code, out, _ = run(
        capsys,
        "query",
        "--graph", str(graph_file),
        "--kind", "sensitivity",
        "--focus", GOAL,
        "--refute-class", "op:take_image",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["verdicts"]["necessary"] is True


def test_query_set_confidence(workdir, capsys):
    graph_file = plan_and_convert(workdir, capsys)
    code, out, _ = run(
        capsys,
        "query",
        "--graph", str(graph_file),
        "--kind", "reliability",
        "--focus", GOAL,
        "--refute", "flier1",
        "--set-confidence", "TerrainMap=0.9",
    )
    assert code == 0
    assert json.loads(out)["confidence"] == 0.9


def test_export_dot_on_empty_graph(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"nodes": [], "edges": [], "appraisals": []}))
    code, out, _ = run(capsys, "export-dot", "--graph", str(empty))
    assert code == 0
    assert out.startswith("digraph provenance {")
    assert out.rstrip().endswith("}")


def test_export_dot_styles_refuted(workdir, capsys):
    graph_file = plan_and_convert(workdir, capsys)
    code, out, _ = run(
        capsys, "export-dot", "--graph", str(graph_file), "--refute", "TerrainMap"
    )
    assert code == 0
    assert "dashed" in out


def test_exit_code_usage_error(capsys):
    code, _, err = run(capsys, "query", "--graph")
    assert code == 1


def test_exit_code_unsolvable(tmp_path, capsys):
    (tmp_path / "domain.json").write_text(json.dumps(rover_domain_dict()))
    problem = rover_problem_dict()
    problem["state"] = [s for s in problem["state"] if "visible" not in str(s)]
    (tmp_path / "problem.json").write_text(json.dumps(problem))
    code, _, err = run(
        capsys,
        "plan",
        "--domain", str(tmp_path / "domain.json"),
        "--problem", str(tmp_path / "problem.json"),
    )
    assert code == 3
    assert "no plan" in err


def test_exit_code_unknown_focus(workdir, capsys):
    graph_file = plan_and_convert(workdir, capsys)
    code, _, err = run(
        capsys,
        "query",
        "--graph", str(graph_file),
        "--kind", "reliability",
        "--focus", "ghost",
    )
    assert code == 3
    assert "ghost" in err


def test_exit_code_invalid_graph(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "nodes": [
                    {"id": "x", "kind": "Entity", "subtype": "Task", "label": "x"}
                ],
                "edges": [],
                "appraisals": [],
            }
        )
    )
    code, _, err = run(
        capsys, "query", "--graph", str(bad), "--kind", "reliability", "--focus", "x"
    )
    assert code == 2
    assert "SubtypeMismatch" in err
