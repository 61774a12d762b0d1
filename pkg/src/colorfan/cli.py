"""Command-line front end.

Exit codes: 0 success, 1 a checked property or identity failed, 2 bad input,
3 an internal consistency assertion fired.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import json
import math
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import io
from .chow import convert, degree_product
from .errors import ColorfanError, InputError, InternalConsistencyError
from .fan import build_fan, describe
from .geometry import (
    globally_bounded_piece,
    ipc_volume,
    ipc_volume_via_transversals,
    normal_complex_piece,
    same_polytope,
)
from .ground import GroundSet, all_max_chains, is_chain
from .harness import DEFAULT_CONFIG, run_suite, verify_a, verify_b
from .multimatroid import (
    check_multimatroid_axioms,
    check_R_axioms,
    cubicality,
    divisor_of,
    is_pseudo_cubical,
    random_R_multimatroid,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _ground(path: str) -> GroundSet:
    return io.ground_from_json(io.load_json(path))


def _chain_json(g: GroundSet, chain) -> list[list[str]]:
    return [io.set_to_json(g, s) for s in chain]


def _parse_chain(g: GroundSet, text: str) -> tuple[int, ...]:
    """``"1;1,2"`` is the chain {1} ⊊ {1,2}."""
    chain = tuple(g.colored_set([x.strip() for x in part.split(",") if x.strip()]) for part in text.split(";"))
    if not is_chain(chain) or len(chain) != g.n or not g.is_maximal(chain[-1]):
        raise InputError(f"{text!r} is not a maximal chain of colored sets")
    return chain


def _axioms_json(g: GroundSet, report) -> dict:
    out = {}
    for name, res in report.items():
        witness = res.witness
        if isinstance(witness, int):
            witness = io.set_to_json(g, witness)
        elif isinstance(witness, tuple):
            witness = [io.set_to_json(g, w) if isinstance(w, int) else w for w in witness]
        out[name] = {"pass": res.ok, "witness": witness}
    return out


def _polytope_json(p) -> dict:
    return {
        "hrep": [{"a": [io.rational_str(x) for x in a], "b": io.rational_str(b)} for a, b in p.hrep],
        "vertices": [[io.rational_str(x) for x in v] for v in p.vertices()],
    }


# -- subcommands: each returns (payload, exit code) ----------------------------

def cmd_describe_fan(args) -> tuple[Any, int]:
    out = describe(build_fan(_ground(args.ground)))
    return out, EXIT_OK if out["unimodular"] and out["balanced"] else EXIT_FAIL


def cmd_convert_basis(args) -> tuple[Any, int]:
    g = _ground(args.ground)
    d = io.divisor_from_json(g, io.load_json(args.divisor), args.source)
    return io.divisor_to_json(convert(d, args.target)), EXIT_OK


def cmd_degree(args) -> tuple[Any, int]:
    g = _ground(args.ground)
    data = io.load_json(args.divisors)
    items = data.get("divisors") if isinstance(data, dict) else data
    if not isinstance(items, list):
        raise InputError('divisors file must be {"divisors": [...]} or a list')
    divisors = [io.divisor_from_json(g, d) for d in items]
    return {"degree": io.rational_str(degree_product(build_fan(g), divisors))}, EXIT_OK


def _ranks(args) -> tuple[GroundSet, Any]:
    g = _ground(args.ground)
    return g, io.ranks_from_json(g, io.load_json(args.ranks))


def cmd_check_axioms(args) -> tuple[Any, int]:
    g, rk = _ranks(args)
    out = {}
    ok = True
    if args.kind in ("R", "both"):
        rep = check_R_axioms(rk)
        out["R"] = _axioms_json(g, rep)
        ok &= rep.ok
    if args.kind in ("multimatroid", "both"):
        rep = check_multimatroid_axioms(rk)
        out["multimatroid"] = _axioms_json(g, rep)
        ok &= rep.ok
    out["pass"] = ok
    return out, EXIT_OK if ok else EXIT_FAIL


def cmd_cubicality(args) -> tuple[Any, int]:
    g, rk = _ranks(args)
    res = cubicality(rk)
    chain = None if res.chain is None else _chain_json(g, res.chain)
    return {"kind": res.kind, "chain": chain, "witness": res.detail}, EXIT_OK


def cmd_ipc_volume(args) -> tuple[Any, int]:
    g, rk = _ranks(args)
    out: dict[str, Any] = {}
    if args.method in ("triangulation", "both"):
        out["triangulation"] = ipc_volume(rk)
    if args.method in ("transversal", "both"):
        out["transversal"] = ipc_volume_via_transversals(rk, args.budget_n)
    if len(set(out.values())) > 1:
        raise InternalConsistencyError(f"volume oracles disagree: {out}")
    out = {k: io.rational_str(v) for k, v in out.items()}
    out["volume"] = next(iter(out.values()))
    return out, EXIT_OK


def cmd_normal_complex(args) -> tuple[Any, int]:
    g, rk = _ranks(args)
    chains = [_parse_chain(g, args.chain)] if args.chain else all_max_chains(g)
    d = divisor_of(rk)
    pieces = []
    all_equal = True
    for chain in chains:
        piece = normal_complex_piece(d, chain)
        equal = same_polytope(piece, globally_bounded_piece(rk, chain))
        all_equal &= equal
        pieces.append(
            {"chain": _chain_json(g, chain), "coordinates": io.set_to_json(g, chain[-1]), "globally_bounded": equal}
            | _polytope_json(piece)
        )
    if args.emit_svg:
        if g.n != 2:
            raise InputError("SVG output is only available for n = 2")
        with open(args.emit_svg, "w", encoding="utf-8") as fh:
            fh.write(orthant_svg(pieces))
    return {"pseudo_cubical": is_pseudo_cubical(rk), "pieces_equal_global": all_equal, "pieces": pieces}, EXIT_OK


def orthant_svg(pieces: list[dict]) -> str:
    """One panel per maximal colored set, pieces drawn in its two coordinates."""
    panels: dict[tuple, list] = {}
    for p in pieces:
        panels.setdefault(tuple(p["coordinates"]), []).append(p)
    scale_max = max((Fraction(x) for p in pieces for v in p["vertices"] for x in v), default=Fraction(1)) or 1
    size, pad = 200, 20
    colors = ("#6a9fb5", "#d28445")
    parts = []
    for col, (coords, group) in enumerate(panels.items()):
        ox = col * (size + 2 * pad) + pad
        parts.append(f'<g transform="translate({ox},{pad})">')
        parts.append(f'<text x="0" y="-5" font-size="10">{" ".join(coords)}</text>')
        parts.append(f'<line x1="0" y1="{size}" x2="{size}" y2="{size}" stroke="black"/>')
        parts.append(f'<line x1="0" y1="0" x2="0" y2="{size}" stroke="black"/>')
        for k, p in enumerate(group):
            pts = [(float(Fraction(v[0]) / scale_max) * size, size - float(Fraction(v[1]) / scale_max) * size) for v in p["vertices"]]
            cx = sum(x for x, _ in pts) / len(pts)
            cy = sum(y for _, y in pts) / len(pts)
            pts.sort(key=lambda q: math.atan2(q[1] - cy, q[0] - cx))
            path = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
            parts.append(f'<polygon points="{path}" fill="{colors[k % 2]}" fill-opacity="0.5" stroke="black"/>')
        parts.append("</g>")
    width = len(panels) * (size + 2 * pad)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{size + 2 * pad}">\n'
        + "\n".join(parts)
        + "\n</svg>\n"
    )


def cmd_verify_a(args) -> tuple[Any, int]:
    g = _ground(args.ground)
    data = io.load_json(args.sets)
    sets = data.get("sets") if isinstance(data, dict) else data
    if not isinstance(sets, list):
        raise InputError('sets file must be {"sets": [[labels], ...]}')
    report = verify_a(g, [io.set_from_json(g, s) for s in sets])
    return report.to_json(), EXIT_OK if report.equal else EXIT_FAIL


def cmd_verify_b(args) -> tuple[Any, int]:
    g, rk = _ranks(args)
    methods = ("triangulation", "transversal") if args.method == "both" else (args.method,)
    report = verify_b(g, rk, methods, args.budget_n, args.seed)
    return report.to_json(), EXIT_OK if report.equal else EXIT_FAIL


def cmd_run_suite(args) -> tuple[Any, int]:
    config = io.load_json(args.config) if args.config else {}
    if not isinstance(config, dict):
        raise InputError("suite config must be a JSON object")
    if args.seed is not None:
        config["seed"] = args.seed
    if args.budget_n is not None:
        config["budget_n"] = args.budget_n
    if args.corrupt_fan:
        config["corrupt_fan"] = True
    summary = run_suite(config)
    if summary["internal_error"]:
        return summary, EXIT_INTERNAL
    return summary, EXIT_OK if summary["passed"] else EXIT_FAIL


def cmd_random(args) -> tuple[Any, int]:
    g = _ground(args.ground)
    rk = random_R_multimatroid(g, args.seed, args.mode, args.budget)
    return io.ranks_to_json(rk), EXIT_OK


# -- output ------------------------------------------------------------------

def _rows(payload: Any) -> list[dict]:
    if isinstance(payload, dict):
        for key in ("ranks", "coefficients", "rays", "pieces"):
            if isinstance(payload.get(key), list):
                return payload[key]
        return [payload]
    if isinstance(payload, list):
        return payload
    return [{"value": payload}]


def to_csv(payload: Any) -> str:
    rows = _rows(payload)
    columns: list[str] = []
    for row in rows:
        for k in row:
            if k not in columns:
                columns.append(k)
    buf = _stdio.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: v if isinstance(v, (str, int, float)) and not isinstance(v, bool) else json.dumps(v, default=str) for k, v in row.items()})
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    group = fmt.add_mutually_exclusive_group()
    group.add_argument("--json", dest="format", action="store_const", const="json", help="JSON output (default)")
    group.add_argument("--csv", dest="format", action="store_const", const="csv", help="CSV output")
    fmt.set_defaults(format="json")

    parser = _Parser(prog="colorfan", description="Colored fans, divisor degrees and independence complex volumes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn, help: str, ranks: bool = False, ground: bool = True):
        p = sub.add_parser(name, parents=[fmt], help=help)
        if ground:
            p.add_argument("ground", help="ground set JSON")
        if ranks:
            p.add_argument("ranks", help="rank function JSON")
        p.set_defaults(func=fn)
        return p

    add("describe-fan", cmd_describe_fan, "rays, cone counts and certification verdicts")
    p = add("convert-basis", cmd_convert_basis, "re-express a divisor in another basis")
    p.add_argument("divisor", help="divisor JSON")
    p.add_argument("--from", dest="source", choices=("X", "F", "H"), help="override the file's basis")
    p.add_argument("--to", dest="target", choices=("X", "F", "H"), required=True)
    p = add("degree", cmd_degree, "degree of a product of n divisors")
    p.add_argument("--divisors", required=True, help="JSON list of divisors")
    p = add("check-axioms", cmd_check_axioms, "R1-R3 and BR1-BR4 with witnesses", ranks=True)
    p.add_argument("--kind", choices=("R", "multimatroid", "both"), default="both")
    add("cubicality", cmd_cubicality, "cubical / pseudo-cubical classification", ranks=True)
    p = add("ipc-volume", cmd_ipc_volume, "normalized volume of the independence complex", ranks=True)
    p.add_argument("--method", choices=("triangulation", "transversal", "both"), default="triangulation")
    p.add_argument("--budget-n", type=int, default=4)
    p = add("normal-complex", cmd_normal_complex, "pieces of the normal complex of D_M", ranks=True)
    p.add_argument("--chain", help='maximal chain as "a;a,b" (sets separated by ";")')
    p.add_argument("--emit-svg", metavar="PATH", help="write an SVG of the pieces (n = 2)")
    p = add("verify-a", cmd_verify_a, "h-monomial degree against transversal count")
    p.add_argument("--sets", required=True, help='JSON {"sets": [...]}')
    p = add("verify-b", cmd_verify_b, "top power of D_M against the complex volume", ranks=True)
    p.add_argument("--method", choices=("triangulation", "transversal", "both"), default="both")
    p.add_argument("--budget-n", type=int, default=4)
    p.add_argument("--seed", type=int)
    p = add("run-suite", cmd_run_suite, "seeded verification suites", ground=False)
    p.add_argument("--config", help=f"JSON config; keys {sorted(DEFAULT_CONFIG)}")
    p.add_argument("--seed", type=int)
    p.add_argument("--budget-n", type=int)
    p.add_argument("--corrupt-fan", action="store_true", help="inject a non-unimodular cone")
    p = add("random", cmd_random, "seeded random R-multimatroid")
    p.add_argument("--mode", choices=("general", "pseudo_cubical"), default="general")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=1000, help="rejection sampling attempts")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, code = args.func(args)
    except InternalConsistencyError as exc:
        print(f"colorfan: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ColorfanError, ValueError) as exc:
        print(f"colorfan: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(to_csv(payload) if args.format == "csv" else io.dumps(payload) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
