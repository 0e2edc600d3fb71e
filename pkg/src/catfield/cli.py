"""Batch command-line interface: ``catfield <command> ...``.

Exit codes: 0 success, 1 validation failure, 2 usage error. Errors are
printed to stderr as ``error: <module>.<Code>: <message>``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .algebra import center_basis, convolve, element_from_json
from .category import (
    FinCategory,
    InvolutionStructure,
    inverse_involution,
    involution_from_json,
    make_standard,
    reversal_involution,
    validate_category,
)
from .causal import (
    CausalCategory,
    causal_from_json,
    local_algebra,
    make_causal,
    minkowski_lattice,
    relevant_category,
)
from .dynamics import walk_evolve, walk_from_json, with_horizon
from .errors import CatFieldError, NotDaggerStructure, UsageError
from .gns import gns_construct
from .rig import rig_instance
from .states import DEFAULT_TOL, state_from_json
from .theorems import CheckResult, run_suite, spacelike_region_pairs

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    rig: str = "complex"
    tolerance: float = DEFAULT_TOL
    seed: int = 0
    output: str | None = None
    format: str = "json"


# ------------------------------------------------------------------- loading
def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def resolve_category(ref: str, base: Path | None = None) -> tuple[FinCategory, dict]:
    """A category from a JSON path or a standard spec such as ``indiscrete:2``."""
    candidates = [Path(ref)] + ([base / ref] if base is not None else [])
    for p in candidates:
        if p.is_file():
            raw = _read_json(str(p))
            return validate_category(raw), raw
    kind, _, arg = ref.partition(":")
    if kind in ("discrete", "indiscrete", "cyclic", "symmetric") and arg.isdigit():
        cat = make_standard(kind, int(arg))
        return cat, {}
    raise UsageError(f"cannot resolve category {ref!r}")


def default_involution(cat: FinCategory, raw: dict) -> InvolutionStructure:
    if "involution" in raw:
        return involution_from_json(cat, raw["involution"])
    if cat.is_indiscrete():
        return reversal_involution(cat)
    inv = inverse_involution(cat)
    if not inv.is_whole:
        raise NotDaggerStructure("category has no involution entry and is not a groupoid")
    return inv


def causal_of(cat: FinCategory, raw: dict) -> CausalCategory:
    if "causal" in raw or "involution" in raw:
        return causal_from_json(cat, raw)
    inv = reversal_involution(cat) if cat.is_indiscrete() else None
    return make_causal(cat, None, inv)


def parse_objects(cat: FinCategory, spec: Sequence[str]) -> list[str]:
    """Object lists: repeated tokens, ``;``-separated, or comma-separated (pairs when ids contain commas)."""
    out: list[str] = []
    for token in spec:
        if token in cat.object_index:
            out.append(token)
            continue
        if ";" in token:
            out.extend(t.strip() for t in token.split(";") if t.strip())
            continue
        parts = [t.strip() for t in token.split(",") if t.strip()]
        if any("," in o for o in cat.objects) and len(parts) % 2 == 0:
            out.extend(f"{parts[i]},{parts[i + 1]}" for i in range(0, len(parts), 2))
        else:
            out.extend(parts)
    for o in out:
        cat.check_object(o)
    return out


# ------------------------------------------------------------------ output
def _dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def theorem_table(results: list[CheckResult]) -> str:
    lines = [f"{'check':<28} {'result':<6} {'cases':>8}"]
    for r in results:
        lines.append(f"{r.name:<28} {'PASS' if r.passed else 'FAIL':<6} {r.cases:>8}")
    return "\n".join(lines) + "\n"


def _c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# ---------------------------------------------------------------- commands
def cmd_validate(args, cfg: RunConfig) -> int:
    cat, _ = resolve_category(args.category)
    _emit(cfg, f"{len(cat.objects)} objects, {len(cat.arrows)} arrows, category axioms OK\n")
    return EXIT_OK


def _element(path: str, category: str | None, cfg: RunConfig):
    raw = _read_json(path)
    ref = category or raw.get("category")
    if ref is None:
        raise UsageError(f"{path} names no category; pass --category")
    cat, _ = resolve_category(ref, Path(path).parent)
    rig = rig_instance(raw.get("rig", cfg.rig))
    return element_from_json(cat, rig, raw)


def cmd_algebra_mul(args, cfg: RunConfig) -> int:
    a = _element(args.a, args.category, cfg)
    b = _element(args.b, args.category, cfg)
    out = convolve(a, b).to_json()
    out["category"] = a.category.name
    _emit(cfg, _dumps(out))
    return EXIT_OK


def cmd_center(args, cfg: RunConfig) -> int:
    cat, _ = resolve_category(args.category)
    basis = center_basis(cat)
    payload = {"dimension": len(basis), "basis": [b.to_json()["weights"] for b in basis]}
    _emit(cfg, _dumps(payload))
    return EXIT_OK


def cmd_relevant(args, cfg: RunConfig) -> int:
    cat, raw = resolve_category(args.category)
    cc = causal_of(cat, raw)
    O = parse_objects(cat, args.objects)
    sel = relevant_category(cc, O)
    payload = {
        "objects": sorted(sel.objects),
        "relevant_arrows": [a for a in cat.arrows if a in sel.relevant_arrows],
        "classification": {a: None if v is None else {"form": v[0], "witness": list(v[1])} for a, v in sel.classification.items()},
    }
    _emit(cfg, _dumps(payload))
    return EXIT_OK


def cmd_local_algebra(args, cfg: RunConfig) -> int:
    cat, raw = resolve_category(args.category)
    cc = causal_of(cat, raw)
    O = parse_objects(cat, args.objects)
    basis = local_algebra(cc, O, rig_instance(cfg.rig), args.involution, args.reading)
    payload = {
        "objects": sorted(O),
        "with_involution": basis.with_involution,
        "span_main": list(basis.span_main),
        "central_dimension": 1 if basis.central is None else int(basis.central.shape[1]),
        "dimension": basis.dimension,
    }
    _emit(cfg, _dumps(payload))
    return EXIT_OK


def _suite_output(cfg: RunConfig, results: list[CheckResult], extra: dict) -> int:
    if cfg.format == "json":
        _emit(cfg, _dumps({**extra, "results": [r.row() for r in results]}))
    else:
        _emit(cfg, theorem_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVALID


def cmd_check_theorems(args, cfg: RunConfig) -> int:
    cat, raw = resolve_category(args.category)
    cc = causal_of(cat, raw)
    results = run_suite(cc, np.random.default_rng(cfg.seed), args.region_pairs, args.element_pairs)
    return _suite_output(cfg, results, {"category": cat.name})


def cmd_state_check(args, cfg: RunConfig) -> int:
    raw = _read_json(args.state)
    ref = args.category or raw.get("category")
    if ref is None:
        raise UsageError("state names no category; pass --category")
    cat, craw = resolve_category(ref, Path(args.state).parent)
    s = state_from_json(default_involution(cat, craw), raw, tol=cfg.tolerance)
    _emit(cfg, _dumps(s.report()))
    return EXIT_OK


def cmd_gns(args, cfg: RunConfig) -> int:
    cat, craw = resolve_category(args.category)
    s = state_from_json(default_involution(cat, craw), _read_json(args.state), tol=cfg.tolerance)
    space = gns_construct(s, cfg.tolerance)
    _emit(cfg, _dumps(space.report(include_rep=args.representation)))
    return EXIT_OK


def cmd_walk(args, cfg: RunConfig) -> int:
    raw = _read_json(args.config)
    wc = walk_from_json(raw)
    if args.steps is not None:
        wc = with_horizon(wc, args.steps)
    traj = walk_evolve(wc, cfg.tolerance)
    if cfg.format == "csv":
        _emit(cfg, traj.to_csv())
    else:
        payload = {
            "rows": [{"t": t, "observable": n, "re": re, "im": im} for t, n, re, im in traj.rows],
            "unit": [_c(u) for u in traj.unit_values],
        }
        _emit(cfg, _dumps(payload))
    return EXIT_OK


def cmd_demo_minkowski(args, cfg: RunConfig) -> int:
    cc = minkowski_lattice(args.t, args.x, args.flavor)
    rng = np.random.default_rng(cfg.seed)
    pairs = spacelike_region_pairs(cc, np.random.default_rng(cfg.seed), 1)
    results = run_suite(cc, rng, args.region_pairs, args.element_pairs)
    extra = {
        "lattice": {"t": args.t, "x": args.x, "flavor": args.flavor},
        "objects": len(cc.objects),
        "arrows": len(cc.ambient.arrows),
        "causal_arrows": len(cc.causal_arrows),
        "example_regions": [sorted(p) for p in pairs[0]] if pairs else [],
        "seed": cfg.seed,
    }
    if cfg.format == "json":
        return _suite_output(cfg, results, extra)
    header = f"minkowski lattice {args.t}x{args.x} ({args.flavor}): {extra['objects']} objects, {extra['arrows']} arrows\n"
    if pairs:
        header += f"example spacelike regions: {sorted(pairs[0][0])} | {sorted(pairs[0][1])}\n"
    _emit(cfg, header + theorem_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVALID


# ------------------------------------------------------------------ parser
def _env_tolerance() -> float:
    raw = os.environ.get("CATFIELD_TOLERANCE")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError as exc:
        raise UsageError(f"CATFIELD_TOLERANCE={raw!r} is not a number") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rig", default="complex", help="rig name: complex, boolean, natural, tropical, matrix N")
    common.add_argument("--tol", type=float, default=None, help="tolerance (default from CATFIELD_TOLERANCE or 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--output", "-o", default=None, help="write output to this path")
    common.add_argument("--format", choices=("json", "csv", "table"), default=None)

    p = _Parser(prog="catfield", description="Category algebras as toy models of quantum fields.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check the category axioms")
    s.add_argument("category")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("algebra", help="algebra operations")
    asub = s.add_subparsers(dest="op", required=True, parser_class=_Parser)
    m = asub.add_parser("mul", parents=[common], help="convolution product of two elements")
    m.add_argument("a")
    m.add_argument("b")
    m.add_argument("--category", default=None)
    m.set_defaults(func=cmd_algebra_mul)

    s = sub.add_parser("center", parents=[common], help="basis of the center of the complex algebra")
    s.add_argument("category")
    s.set_defaults(func=cmd_center)

    for name, func, text in (
        ("relevant", cmd_relevant, "relevant subcategory of an object set"),
        ("local-algebra", cmd_local_algebra, "spanning data of a local algebra"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("category")
        s.add_argument("--objects", nargs="+", required=True, help="object ids; lattice points as t,x")
        if name == "local-algebra":
            s.add_argument("--involution", action="store_true")
            s.add_argument("--reading", choices=("convex", "cycle"), default="convex")
        s.set_defaults(func=func)

    s = sub.add_parser("check-theorems", parents=[common], help="Structure, Nonexistence and Commutativity checks")
    s.add_argument("category")
    s.add_argument("--region-pairs", type=int, default=5)
    s.add_argument("--element-pairs", type=int, default=20)
    s.set_defaults(func=cmd_check_theorems)

    s = sub.add_parser("state", help="state operations")
    ssub = s.add_subparsers(dest="op", required=True, parser_class=_Parser)
    c = ssub.add_parser("check", parents=[common], help="validate a state")
    c.add_argument("state")
    c.add_argument("--category", default=None)
    c.set_defaults(func=cmd_state_check)

    s = sub.add_parser("gns", parents=[common], help="GNS construction")
    s.add_argument("category")
    s.add_argument("state")
    s.add_argument("--representation", action="store_true", help="include the representation matrices")
    s.set_defaults(func=cmd_gns)

    s = sub.add_parser("walk", parents=[common], help="coined quantum walk trajectory")
    s.add_argument("config")
    s.add_argument("--steps", type=int, default=None)
    s.set_defaults(func=cmd_walk)

    s = sub.add_parser("demo", help="demonstrations")
    dsub = s.add_subparsers(dest="op", required=True, parser_class=_Parser)
    d = dsub.add_parser("minkowski", parents=[common], help="theorem suite on a lattice")
    d.add_argument("--t", type=int, required=True)
    d.add_argument("--x", type=int, required=True)
    d.add_argument("--flavor", choices=("indiscrete", "thin"), default="indiscrete")
    d.add_argument("--region-pairs", type=int, default=5)
    d.add_argument("--element-pairs", type=int, default=20)
    d.set_defaults(func=cmd_demo_minkowski)
    return p


DEFAULT_FORMAT = {"walk": "csv", "check-theorems": "table", "demo": "table"}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        tol = args.tol if args.tol is not None else _env_tolerance()
        cfg = RunConfig(
            args.command,
            [v for k, v in vars(args).items() if k in ("category", "state", "config", "a", "b") and v],
            args.rig,
            tol,
            args.seed,
            args.output,
            args.format or DEFAULT_FORMAT.get(args.command, "json"),
        )
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc.code()}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CatFieldError as exc:
        print(f"error: {exc.code()}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (KeyError, ValueError, TypeError) as exc:
        print(f"error: cli.InvalidInput: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
