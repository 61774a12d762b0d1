"""JSON encoding of ground sets, colored sets, rank functions and divisors.

Rationals travel as strings ``"p/q"`` (or plain integers) so nothing is lost.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .chow import BASES, Divisor
from .errors import InputError
from .ground import GroundSet
from .multimatroid import RankFunction


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def rational(value: Any) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"expected a rational as an integer or 'p/q' string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {value!r}") from None


def rational_str(value: Any) -> str:
    return str(Fraction(value))


def ground_from_json(obj: Any) -> GroundSet:
    if not isinstance(obj, dict) or not isinstance(obj.get("blocks"), list):
        raise InputError('a ground set is {"blocks": [[labels], ...]}')
    if not all(isinstance(b, list) and all(isinstance(x, str) for x in b) for b in obj["blocks"]):
        raise InputError("blocks must be lists of string labels")
    return GroundSet(obj["blocks"])


def ground_to_json(ground: GroundSet) -> dict:
    return {"blocks": [list(b) for b in ground.blocks]}


def set_from_json(ground: GroundSet, labels: Any) -> int:
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise InputError(f"a colored set is a list of labels, got {labels!r}")
    return ground.colored_set(labels)


def set_to_json(ground: GroundSet, mask: int) -> list[str]:
    return list(ground.labels_of(mask))


def ranks_from_json(ground: GroundSet, obj: Any) -> RankFunction:
    if not isinstance(obj, dict) or not isinstance(obj.get("ranks"), list):
        raise InputError('a rank function is {"ranks": [{"set": [...], "rank": "p/q"}, ...]}')
    values = {}
    for entry in obj["ranks"]:
        if not isinstance(entry, dict) or "set" not in entry or "rank" not in entry:
            raise InputError(f"bad rank entry {entry!r}")
        s = set_from_json(ground, entry["set"])
        if s in values:
            raise InputError(f"rank of {ground.format(s)} given twice")
        values[s] = rational(entry["rank"])
    return RankFunction(ground, values)


def ranks_to_json(rk: RankFunction) -> dict:
    g = rk.ground
    return {"ranks": [{"set": set_to_json(g, s), "rank": rational_str(rk(s))} for s in g.colored_sets]}


def divisor_from_json(ground: GroundSet, obj: Any, basis: str | None = None) -> Divisor:
    if not isinstance(obj, dict) or not isinstance(obj.get("coefficients"), list):
        raise InputError('a divisor is {"basis": "X", "coefficients": [{"set": [...], "coef": "p/q"}, ...]}')
    basis = basis or obj.get("basis", "X")
    if basis not in BASES:
        raise InputError(f"unknown basis {basis!r}")
    coeffs = {}
    for entry in obj["coefficients"]:
        if not isinstance(entry, dict) or "set" not in entry or "coef" not in entry:
            raise InputError(f"bad coefficient entry {entry!r}")
        s = set_from_json(ground, entry["set"])
        if not s:
            raise InputError("divisors have no coefficient on the empty set")
        coeffs[s] = coeffs.get(s, 0) + rational(entry["coef"])
    return Divisor(ground, basis, coeffs)


def divisor_to_json(divisor: Divisor) -> dict:
    g = divisor.ground
    return {
        "basis": divisor.basis,
        "coefficients": [
            {"set": set_to_json(g, s), "coef": rational_str(divisor.coefficient(s))}
            for s in g.nonempty_sets
            if divisor.coefficient(s)
        ],
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default)


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return rational_str(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")
