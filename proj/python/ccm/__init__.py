"""Straggler-resilient coded matrix multiplication.

Plans are built from the same scheme dictionaries the ``ccm`` tool reads
from its config files. Reports come back as plain dictionaries.
"""

import json
from fractions import Fraction

from . import _core
from ._core import Error, Plan, condition_number, direct_product

__all__ = [
    "Error",
    "Plan",
    "batch_simulate",
    "build_plan",
    "condition_number",
    "direct_product",
    "loads",
    "multiply",
    "simulate",
    "verify_threshold",
    "worst_case_condition",
]


def build_plan(kind, **params):
    """build_plan("poly_matmul", m=2, n=2, workers=5)"""
    return _core.build_plan(json.dumps({"kind": kind, **params}))


def multiply(plan, a, b, stragglers=()):
    """Returns (A^T B, decode strategy)."""
    return _core.multiply(plan, a, b, list(stragglers))


def verify_threshold(plan, budget, mode="subset", guard=1_000_000):
    return json.loads(_core.verify_threshold(plan, budget, mode, guard))


def worst_case_condition(plan, budget, mode="subset", samples=None, seed=0, guard=1_000_000):
    report = json.loads(_core.worst_case_condition(plan, budget, mode, samples, seed, guard))
    if report["worst"] == "inf":
        report["worst"] = float("inf")
    return report


def loads(plan, r, t, w):
    raw = json.loads(_core.loads(plan, r, t, w))
    return {k: [Fraction(v) for v in vals] for k, vals in raw.items()}


def simulate(plan, delay, seed=0):
    return json.loads(_core.simulate(plan, json.dumps(delay), seed))


def batch_simulate(plan, delay, trials, seed=0):
    return json.loads(_core.batch_simulate(plan, json.dumps(delay), trials, seed))
