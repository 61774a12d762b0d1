"""Verification of the two degree identities and the seeded suite runner.

``verify_a`` compares h-monomial degrees with transversal counts and
``verify_b`` compares the top power of ``D_M`` with the independence complex
volume.  ``run_suite`` drives both over fixtures and seeded samples; its
summary depends only on the config, never on timing or worker count.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Any, Callable, Sequence

from . import fixtures
from .chow import Divisor, convert, degree_product, h_monomial
from .errors import ColorfanError, InputError, InternalConsistencyError
from .fan import build_fan, check_unimodular, corrupt_fan
from .geometry import ipc_volume, ipc_volume_via_transversals, normal_complex_equals_ipc
from .ground import GroundSet, transversal_count
from .io import rational_str, set_to_json
from .multimatroid import (
    CUBICAL,
    PSEUDO_CUBICAL,
    RankFunction,
    boolean_multimatroid,
    check_multimatroid_axioms,
    check_R_axioms,
    cubicality,
    divisor_of,
    is_pseudo_cubical,
    quadratic_rank,
    random_R_multimatroid,
    sum_h_rank,
)

METHODS = ("triangulation", "transversal")


@dataclass
class VerificationReport:
    instance: dict
    lhs: Fraction
    rhs: Fraction
    third: Fraction | None = None
    elapsed: float = 0.0
    seed: int | None = None

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs and (self.third is None or self.third == self.lhs)

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "instance": self.instance,
            "lhs": rational_str(self.lhs),
            "rhs": rational_str(self.rhs),
            "equal": self.equal,
        }
        if self.third is not None:
            out["third"] = rational_str(self.third)
        if self.seed is not None:
            out["seed"] = self.seed
        if timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out


def verify_a(ground: GroundSet, sets: Sequence[int], fan=None, cache: dict | None = None) -> VerificationReport:
    if len(sets) != ground.n:
        raise InputError(f"need exactly {ground.n} colored sets, got {len(sets)}")
    start = time.perf_counter()
    fan = fan if fan is not None else build_fan(ground)
    lhs = degree_product(fan, h_monomial(ground, sets), cache=cache)
    rhs = Fraction(transversal_count(ground, sets))
    instance = {"blocks": [list(b) for b in ground.blocks], "sets": [set_to_json(ground, s) for s in sets]}
    return VerificationReport(instance, lhs, rhs, elapsed=time.perf_counter() - start)


def verify_b(
    ground: GroundSet,
    rk: RankFunction,
    methods: Sequence[str] = ("triangulation",),
    budget_n: int = 4,
    seed: int | None = None,
    fan=None,
) -> VerificationReport:
    if rk.ground != ground:
        raise InputError("rank function lives on a different ground set")
    if not methods or any(m not in METHODS for m in methods):
        raise InputError(f"methods must be a nonempty subset of {METHODS}")
    start = time.perf_counter()
    fan = fan if fan is not None else build_fan(ground)
    lhs = degree_product(fan, [divisor_of(rk)] * ground.n)
    values = []
    for m in methods:
        values.append(ipc_volume(rk) if m == "triangulation" else ipc_volume_via_transversals(rk, budget_n))
    instance = {"blocks": [list(b) for b in ground.blocks], "methods": list(methods)}
    return VerificationReport(
        instance, lhs, values[0], values[1] if len(values) > 1 else None, time.perf_counter() - start, seed
    )


# -- suite -------------------------------------------------------------------

DEFAULT_CONFIG: dict[str, Any] = {
    "seed": 0,
    "budget_n": 4,
    "corrupt_fan": False,
    "fixtures": True,
    "structure": {"sizes": [[2, 2], [3, 2], [2, 2, 2], [3, 3, 2]]},
    "theorem_a": {"exhaustive": [[2, 2], [3, 2], [3, 3]], "sampled": [[2, 2, 2]], "samples": 20},
    "theorem_b": {
        "methods": ["triangulation", "transversal"],
        "instances": [
            {"sizes": [2, 2], "mode": "general", "count": 6},
            {"sizes": [2, 2], "mode": PSEUDO_CUBICAL, "count": 4},
            {"sizes": [3, 2], "mode": "general", "count": 3},
            {"sizes": [2, 2, 2], "mode": "general", "count": 2},
            {"sizes": [2, 2, 2], "mode": PSEUDO_CUBICAL, "count": 2},
        ],
    },
    "normal_complex": {"sizes": [[2, 2], [3, 2]], "count": 3},
}


class _Suite:
    def __init__(self) -> None:
        self.checked = 0
        self.failures: list[dict] = []

    def record(self, name: str, fn: Callable[[], object]) -> None:
        """Run one check; ``fn`` returns None on success or a failure detail."""
        self.checked += 1
        try:
            detail = fn()
        except InternalConsistencyError as exc:
            self.failures.append({"instance": name, "kind": "internal", "detail": str(exc)})
            return
        except ColorfanError as exc:
            self.failures.append({"instance": name, "kind": "error", "detail": str(exc)})
            return
        if detail is not None:
            self.failures.append({"instance": name, "kind": "verification", "detail": detail})

    def to_json(self) -> dict:
        return {"checked": self.checked, "failed": len(self.failures), "failures": self.failures}


def _sizes_name(sizes: Sequence[int]) -> str:
    return "x".join(map(str, sizes))


def _expect(value, expected) -> str | None:
    return None if value == expected else f"got {value}, expected {expected}"


def _fixture_suite(suite: _Suite) -> None:
    b2 = fixtures.ground("b2")
    abc = fixtures.ground("abc12")
    fan = build_fan(b2)
    m = fixtures.ranks("b2_multimatroid")
    r = fixtures.ranks("b2_real_multimatroid")
    sum_h = fixtures.divisor("b2_sum_h")
    suite.record("b2 sum_h degree", lambda: _expect(degree_product(fan, [sum_h, sum_h]), 68))
    suite.record("b2 sum_h volume", lambda: _expect(ipc_volume(sum_h_rank(b2)), 68))
    suite.record("b2 real multimatroid degree", lambda: _expect(degree_product(fan, [divisor_of(r)] * 2), 124))
    suite.record("b2 real multimatroid volume", lambda: _expect(ipc_volume(r), 124))
    suite.record("b2 boolean volume", lambda: _expect(ipc_volume(boolean_multimatroid(b2)), 8))
    suite.record("b2 multimatroid axioms", lambda: None if check_multimatroid_axioms(m).ok else "axiom failure")
    suite.record(
        "b2 real multimatroid boundedness",
        lambda: None if not check_multimatroid_axioms(r)["BR2"].ok and check_R_axioms(r).ok else "unexpected axioms",
    )
    suite.record("b2 multimatroid cubicality", lambda: _expect(cubicality(m).kind, PSEUDO_CUBICAL))
    suite.record("b2 real multimatroid cubicality", lambda: _expect(cubicality(r).kind, CUBICAL))
    suite.record("abc12 sum_h cubicality", lambda: _expect(cubicality(sum_h_rank(abc)).kind, PSEUDO_CUBICAL))
    suite.record("b2 quadratic cubicality", lambda: _expect(cubicality(quadratic_rank(b2)).kind, CUBICAL))
    h = convert(Divisor(b2, "X", {s: r(s) for s in b2.nonempty_sets}), "H")
    suite.record(
        "b2 real multimatroid in h basis",
        lambda: _expect([h.coefficient(s) for s in b2.nonempty_sets], [-1, -1, -2, -2, 3, 3, 3, 3]),
    )
    bad = fixtures.ranks("singletons_ranks")
    suite.record(
        "singletons piece differs",
        lambda: None if not normal_complex_equals_ipc(bad, force=True) else "pieces unexpectedly agree",
    )


def _chain_str(g: GroundSet, chain) -> str:
    return "(" + " ⊊ ".join(g.format(s) for s in chain) + ")"


def _unimodular_detail(g: GroundSet, witness) -> str:
    chain, product = witness
    return f"not unimodular at cone {_chain_str(g, chain)} (invariant factor product {product})"


def _structure_suite(suite: _Suite, sizes_list, corrupt: bool) -> None:
    for sizes in sizes_list:
        g = GroundSet.from_sizes(sizes)

        def check(g=g):
            uni, bal = build_fan(g).certify()
            if not uni.ok:
                return _unimodular_detail(g, uni.witness)
            if not bal.ok:
                return f"top cycle unbalanced at {_chain_str(g, bal.witness)}"
            return None

        suite.record(f"fan {_sizes_name(sizes)}", check)
    if corrupt:
        def corrupted():
            g = fixtures.ground("b2")
            verdict = check_unimodular(corrupt_fan(build_fan(g)))
            return None if verdict.ok else _unimodular_detail(g, verdict.witness)

        suite.record("corrupted fan b2", corrupted)


def _theorem_a_suite(suite: _Suite, cfg: dict, seed: int) -> None:
    for sizes in cfg.get("exhaustive", []):
        g = GroundSet.from_sizes(sizes)
        fan = build_fan(g)
        cache: dict = {}
        for sets in combinations_with_replacement(g.nonempty_sets, g.n):
            suite.record(
                f"h-monomial {_sizes_name(sizes)} {[g.format(s) for s in sets]}",
                lambda: _mismatch(verify_a(g, sets, fan, cache)),
            )
    rng = random.Random(f"{seed}:theorem_a")
    for sizes in cfg.get("sampled", []):
        g = GroundSet.from_sizes(sizes)
        fan = build_fan(g)
        for _ in range(cfg.get("samples", 0)):
            sets = sorted((rng.choice(g.nonempty_sets) for _ in range(g.n)), key=GroundSet.sort_key)
            suite.record(
                f"h-monomial {_sizes_name(sizes)} {[g.format(s) for s in sets]}",
                lambda: _mismatch(verify_a(g, sets, fan)),
            )


def _mismatch(report: VerificationReport) -> str | None:
    if report.equal:
        return None
    third = "" if report.third is None else f" / {report.third}"
    return f"{report.lhs} != {report.rhs}{third}"


def _theorem_b_task(task: tuple) -> dict:
    sizes, mode, seed, methods, budget_n = task
    g = GroundSet.from_sizes(sizes)
    name = f"D_M^n {_sizes_name(sizes)} {mode} seed {seed}"
    try:
        rk = random_R_multimatroid(g, seed, mode)
        report = verify_b(g, rk, methods, budget_n, seed)
    except InternalConsistencyError as exc:
        return {"instance": name, "kind": "internal", "detail": str(exc)}
    except ColorfanError as exc:
        return {"instance": name, "kind": "error", "detail": str(exc)}
    detail = _mismatch(report)
    out = {"instance": name, "pseudo_cubical": is_pseudo_cubical(rk)}
    if detail is not None:
        out.update(kind="verification", detail=detail)
    return out


def worker_count() -> int:
    raw = os.environ.get("COLORFAN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"COLORFAN_THREADS must be an integer, got {raw!r}") from None


def parallel_map(fn: Callable, items: list) -> list:
    """Order-preserving map, fanned out over COLORFAN_THREADS processes."""
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def theorem_b_tasks(cfg: dict, seed: int, budget_n: int) -> list[tuple]:
    methods = tuple(cfg.get("methods", ["triangulation"]))
    tasks = []
    for idx, spec in enumerate(cfg.get("instances", [])):
        for k in range(spec.get("count", 1)):
            tasks.append((tuple(spec["sizes"]), spec.get("mode", "general"), seed * 100000 + idx * 1000 + k, methods, budget_n))
    return tasks


def _theorem_b_suite(suite: _Suite, cfg: dict, seed: int, budget_n: int) -> dict:
    results = parallel_map(_theorem_b_task, theorem_b_tasks(cfg, seed, budget_n))
    non_pc = 0
    for res in results:
        suite.checked += 1
        if "kind" in res:
            suite.failures.append({k: res[k] for k in ("instance", "kind", "detail")})
        elif not res["pseudo_cubical"]:
            non_pc += 1
    return {"non_pseudo_cubical": non_pc}


def _normal_complex_suite(suite: _Suite, cfg: dict, seed: int) -> None:
    for sizes in cfg.get("sizes", []):
        g = GroundSet.from_sizes(sizes)
        for k in range(cfg.get("count", 0)):
            s = seed * 100000 + k

            def check(g=g, s=s):
                rk = random_R_multimatroid(g, s, PSEUDO_CUBICAL)
                report: list = []
                return None if normal_complex_equals_ipc(rk, report=report) else str(report[0])

            suite.record(f"normal complex {_sizes_name(sizes)} seed {s}", check)


def run_suite(config: dict | None = None) -> dict:
    """Run the configured suites; missing keys fall back to ``DEFAULT_CONFIG``."""
    cfg = dict(DEFAULT_CONFIG)
    cfg.update(config or {})
    unknown = set(cfg) - set(DEFAULT_CONFIG)
    if unknown:
        raise InputError(f"unknown config keys: {sorted(unknown)}")
    seed = cfg["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise InputError("seed must be an integer")
    budget_n = cfg["budget_n"]
    suites: dict[str, dict] = {}
    if cfg["fixtures"]:
        s = _Suite()
        _fixture_suite(s)
        suites["fixtures"] = s.to_json()
    s = _Suite()
    _structure_suite(s, cfg["structure"].get("sizes", []), cfg["corrupt_fan"])
    suites["structure"] = s.to_json()
    s = _Suite()
    _theorem_a_suite(s, cfg["theorem_a"], seed)
    suites["theorem_a"] = s.to_json()
    s = _Suite()
    extra = _theorem_b_suite(s, cfg["theorem_b"], seed, budget_n)
    suites["theorem_b"] = s.to_json() | extra
    s = _Suite()
    _normal_complex_suite(s, cfg["normal_complex"], seed)
    suites["normal_complex"] = s.to_json()
    failures = sum(v["failed"] for v in suites.values())
    internal = any(f["kind"] == "internal" for v in suites.values() for f in v["failures"])
    return {
        "seed": seed,
        "config": cfg,
        "suites": suites,
        "checked": sum(v["checked"] for v in suites.values()),
        "failed": failures,
        "internal_error": internal,
        "passed": failures == 0,
    }
