"""Ground sets, rank functions and divisors from the worked examples, shipped as JSON."""

from __future__ import annotations

import json
from importlib import resources

from ..chow import Divisor
from ..ground import GroundSet
from ..io import divisor_from_json, ground_from_json, ranks_from_json
from ..multimatroid import RankFunction

GROUND_SETS = ("b2", "abc12", "singletons")


def path(name: str):
    return resources.files(__name__).joinpath(name)


def load(name: str):
    return json.loads(path(name).read_text(encoding="utf-8"))


def ground(name: str) -> GroundSet:
    return ground_from_json(load(f"{name}.json"))


def ranks(name: str) -> RankFunction:
    """``name`` is ``<ground>_<label>``, e.g. ``b2_multimatroid``."""
    g = ground(name.split("_", 1)[0])
    return ranks_from_json(g, load(f"{name}.json"))


def divisor(name: str) -> Divisor:
    g = ground(name.split("_", 1)[0])
    return divisor_from_json(g, load(f"{name}.json"))
