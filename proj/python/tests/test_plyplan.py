import json
import os
import pathlib

import pytest

import plyplan

DATA = pathlib.Path(os.environ.get("PLYPLAN_TEST_DATA", pathlib.Path(__file__).resolve().parents[2] / "tests" / "data"))
BOOK3 = DATA / "book3.json"
CELL = DATA / "cell.json"


def independent_pair():
    def ply(pid, x0, layer):
        return {
            "id": pid,
            "layer": layer,
            "material": {"name": "carbon-ncf", "air_permeable": False},
            "curvature": "flat",
            "polygon": [[x0, 0.0], [x0 + 0.4, 0.0], [x0 + 0.4, 0.3], [x0, 0.3]],
            "drop_frame": {"position": [x0 + 0.2, 2.15, 0.5], "rpy": [0.0, 0.0, 0.0]},
        }

    return {"plies": [ply("A", 0.0, 0), ply("B", 1.0, 1)]}


def test_generate_is_deterministic():
    a = plyplan.generate_plybook(7, 3)
    assert a == plyplan.generate_plybook(7, 3)
    assert len(a["plies"]) == 7
    assert a["plies"][0]["id"] == "P00"


def test_default_cell_round_trips():
    assert plyplan.default_cell() == json.loads(CELL.read_text())


def test_analyze_matrices():
    deps = plyplan.analyze(BOOK3)
    assert deps["dep"][0][1] is True
    assert deps["dep"][1][0] is False


def test_micro_instance_makespans():
    book = independent_pair()
    assert plyplan.plan(book, strategy="sequential")["makespan"] == 70
    opt = plyplan.plan(book, strategy="optimal")
    assert opt["makespan"] == 55
    assert opt["optimal"] is True


def test_strategy_ordering():
    book = plyplan.generate_plybook(8, 1)
    spans = {s: plyplan.plan(book, strategy=s)["makespan"] for s in plyplan.STRATEGIES}
    assert spans["optimal"] <= spans["greedy"] <= spans["sequential"]


def test_pddl_round_trip():
    domain, problem = plyplan.emit_pddl(BOOK3, CELL, name="book3")
    assert domain == (DATA / "book3-domain.pddl").read_text()
    assert problem == (DATA / "book3-problem.pddl").read_text()
    assert plyplan.check_domain(domain) == []
    assert plyplan.check_problem(problem, domain) == []
    plan = plyplan.plan(BOOK3, CELL)
    text = plyplan.plan_to_pddl(plan, BOOK3)
    back = plyplan.import_plan(text, BOOK3, CELL)
    assert back["actions"] == plan["actions"]
    assert back["strategy"] == "external"


def test_export_and_gantt():
    plan = plyplan.plan(BOOK3, CELL)
    sim = plyplan.export_sim(plan, BOOK3)
    assert sim["makespan"] == plan["makespan"]
    starts = [s["t_start"] for s in sim["steps"]]
    assert starts == sorted(starts)
    assert plyplan.gantt(plan, BOOK3) == (DATA / "book3-gantt.svg").read_text()


def test_report_table():
    table = plyplan.report(independent_pair())
    lines = table.splitlines()
    assert lines[0].split()[:3] == ["strategy", "status", "makespan"]
    assert lines[1].split()[:3] == ["sequential", "ok", "70"]


def test_parse_error_is_typed():
    with pytest.raises(plyplan.ParseError) as info:
        plyplan.analyze("{not json")
    assert info.value.kind == "ParseError"
    assert isinstance(info.value, plyplan.PlyplanError)


def test_invalid_external_plan_carries_violations():
    with pytest.raises(plyplan.InvalidExternalPlan) as info:
        plyplan.import_plan("(pick-p0-c0 r1)\n", BOOK3, CELL)
    assert info.value.violations
    assert any(v.startswith("goal") for v in info.value.violations)


def test_unknown_action():
    with pytest.raises(plyplan.UnknownAction):
        plyplan.import_plan("(fly r1)\n", BOOK3, CELL)


def test_budget_exceeded_without_incumbent_is_reported():
    table = plyplan.report(plyplan.generate_plybook(23, 42), strategies=["optimal"], budget=10)
    assert "optimal" in table
