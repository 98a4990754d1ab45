"""Exact explanation scores for classifiers.

Wraps the native module with a dict-in / dict-out surface. Classifiers,
entities, distributions and problems may be passed as dicts or as JSON
text; reports come back as parsed JSON. Scores and responsibilities are
exact rationals rendered as canonical "p/q" strings; pass approx=True to
add float fields next to them.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from . import _core
from ._core import CapExceededError, ParseError, PreconditionError

__all__ = [
    "CapExceededError",
    "ParseError",
    "PreconditionError",
    "abduce",
    "causes",
    "compile_tree",
    "count",
    "count_by_distance",
    "diagnose",
    "label",
    "resp",
    "selftest",
    "shap",
    "to_fraction",
]


def _text(payload: Any) -> str:
    return payload if isinstance(payload, str) else json.dumps(payload)


def _dist_text(distribution: Any) -> str:
    if distribution is None:
        return ""
    return _text(distribution)


def to_fraction(score: str) -> Fraction:
    """Parse a canonical "p/q" score string into a Fraction."""
    return Fraction(score)


def label(classifier: Any, entity: Any) -> int:
    return _core.label(_text(classifier), _text(entity))


def count(circuit: Any, mode: str = "exact", cap: int = 20) -> int:
    return int(_core.count(_text(circuit), mode, cap))


def count_by_distance(circuit: Any, entity: Any, cap: int = 20) -> dict:
    out = json.loads(_core.count_by_distance(_text(circuit), _text(entity), cap))
    out["by_distance"] = [int(n) for n in out["by_distance"]]
    return out


def shap(
    classifier: Any,
    entity: Any,
    distribution: Any = None,
    method: str = "exact",
    approx: bool = False,
    cap: int = 14,
) -> dict:
    return json.loads(
        _core.shap(_text(classifier), _text(entity), _dist_text(distribution), method, approx, cap)
    )


def resp(
    classifier: Any,
    entity: Any,
    distribution: Any = None,
    features: list[str] | None = None,
    label_of_interest: int = 1,
    include_original: bool = False,
    approx: bool = False,
) -> dict:
    return json.loads(
        _core.resp(
            _text(classifier),
            _text(entity),
            _dist_text(distribution),
            features or [],
            label_of_interest,
            include_original,
            approx,
        )
    )


def causes(instance: Any, query: str, approx: bool = False, cap: int = 20) -> dict:
    return json.loads(_core.causes(_text(instance), query, approx, cap))


def diagnose(problem: Any, mode: str = "minimal", cap: int = 20) -> dict:
    return json.loads(_core.diagnose(_text(problem), mode, cap))


def abduce(problem: Any, cap: int = 20) -> dict:
    return json.loads(_core.abduce(_text(problem), cap))


def compile_tree(tree: Any, verify: bool = False, cap: int = 20) -> dict:
    return json.loads(_core.compile_tree(_text(tree), verify, cap))


def selftest(seed: int = 0) -> bool:
    ok, _transcript = _core.selftest(seed)
    return ok
