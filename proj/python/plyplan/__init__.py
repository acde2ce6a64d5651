"""Pick-and-place planning for ply layup with two robots.

Inputs accept JSON text, an already-decoded dict, or a path to a JSON file.
Functions returning JSON documents return decoded Python objects.
"""

import json
import os

from . import _plyplan
from ._plyplan import (
    BudgetExceeded,
    CyclicDependency,
    DeadEnd,
    DegenerateGeometry,
    InapplicableAction,
    IndexOutOfRange,
    InstanceTooLarge,
    InvalidExternalPlan,
    InvariantError,
    NoFeasibleConfiguration,
    ParseError,
    PlanSyntaxError,
    PlyplanError,
    UnknownAction,
    UnsupportedCurvature,
    check_domain,
    check_problem,
)

STRATEGIES = ("sequential", "greedy", "optimal")

__all__ = [
    "STRATEGIES",
    "analyze",
    "assign",
    "check_domain",
    "check_problem",
    "default_cell",
    "emit_pddl",
    "export_sim",
    "gantt",
    "generate_plybook",
    "import_plan",
    "plan",
    "plan_to_pddl",
    "report",
    "PlyplanError",
    "ParseError",
    "InvariantError",
    "DegenerateGeometry",
    "CyclicDependency",
    "IndexOutOfRange",
    "UnsupportedCurvature",
    "NoFeasibleConfiguration",
    "InapplicableAction",
    "DeadEnd",
    "BudgetExceeded",
    "InstanceTooLarge",
    "PlanSyntaxError",
    "UnknownAction",
    "InvalidExternalPlan",
]


def _text(doc):
    if doc is None:
        return None
    if isinstance(doc, (dict, list)):
        return json.dumps(doc)
    if isinstance(doc, os.PathLike):
        with open(doc, encoding="utf-8") as f:
            return f.read()
    return doc


def _plain(doc):
    """Text input that is a file path rather than JSON or plan text."""
    if isinstance(doc, os.PathLike):
        with open(doc, encoding="utf-8") as f:
            return f.read()
    return doc


def generate_plybook(n, seed):
    return json.loads(_plyplan.generate_plybook(n, seed))


def default_cell():
    return json.loads(_plyplan.default_cell())


def analyze(book, cell=None):
    return json.loads(_plyplan.analyze(_text(book), _text(cell)))


def assign(book, cell=None):
    return json.loads(_plyplan.assign(_text(book), _text(cell)))


def plan(book, cell=None, strategy="optimal", budget=None):
    kwargs = {} if budget is None else {"budget": budget}
    return json.loads(_plyplan.plan(_text(book), _text(cell), strategy, **kwargs))


def emit_pddl(book, cell=None, name="plyplan"):
    """Returns (domain, problem) PDDL texts."""
    return _plyplan.emit_pddl(_text(book), _text(cell), name)


def plan_to_pddl(plan_doc, book):
    return _plyplan.plan_to_pddl(_text(plan_doc), _text(book))


def import_plan(plan_text, book, cell=None):
    return json.loads(_plyplan.import_plan(_plain(plan_text), _text(book), _text(cell)))


def export_sim(plan_doc, book):
    return json.loads(_plyplan.export_sim(_text(plan_doc), _text(book)))


def gantt(plan_doc, book):
    return _plyplan.gantt(_text(plan_doc), _text(book))


def report(book, cell=None, strategies=STRATEGIES, budget=None):
    kwargs = {} if budget is None else {"budget": budget}
    return _plyplan.report(_text(book), _text(cell), list(strategies), **kwargs)
