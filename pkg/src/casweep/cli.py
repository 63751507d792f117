"""Command line front end.

Every subcommand prints a JSON report to stdout and a one line summary to
stderr.  Reports carry a fixed schema tag and are serialized with sorted
keys so they are stable under golden-file comparison.

Exit codes: 0 for an affirmative verdict, 1 for a negative one, 2 for
usage or input errors, 3 when a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .blockrule import BlockRule, representation_eval, sweep_range
from .ca import LocalRule
from .closing import left_closing_decide, right_closing_decide
from .core import (
    EpConfig,
    ResourceCapError,
    ep_from_json,
    ep_to_json,
    ep_unzip,
    ep_zip,
    prime_factors,
    vp,
)
from .hierarchy import NotBiClosingError, decompose_biclosing, shift_offset, verify_decomposition
from .mealy import good_states, mealy_from_block, slider_sweeper_agree, sweeper_eval
from .stairs import slider_exists
from .synthesis import stair_index, synthesize, verify_slider
from .zautomata import (
    ZAutomaton,
    graph_mismatch_automaton,
    intersect,
    is_empty,
    is_slider_rule_for,
    member,
    nonempty_witness,
    slider_relation_automaton,
    sweeper_relation_automaton,
)

SCHEMA = "casweep-report-v1"


class InputError(ValueError):
    """Bad file contents or arguments that violate a command precondition."""


# ---------------------------------------------------------------------------
# I/O helpers

def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def load_local_rule(path: str) -> LocalRule:
    try:
        return LocalRule.from_json(_load_json(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a local rule: {exc}") from exc


def load_block_rule(path: str) -> BlockRule:
    try:
        return BlockRule.from_json(_load_json(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a block rule: {exc}") from exc


def load_config(path: str) -> EpConfig:
    try:
        return ep_from_json(_load_json(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a configuration: {exc}") from exc


def _emit(report: dict, summary: str) -> None:
    full = {"schema": SCHEMA}
    full.update(report)
    print(json.dumps(full, indent=2, sort_keys=True))
    print(summary, file=sys.stderr)


def _lambda_valuations(verdict, q: int) -> dict:
    lam = verdict.lam
    primes = set(prime_factors(q))
    primes |= set(prime_factors(lam.numerator))
    primes |= set(prime_factors(lam.denominator))
    return {str(p): vp(lam, p) for p in sorted(primes)}


# ---------------------------------------------------------------------------
# Subcommands

def _analysis_report(f, max_psi: int) -> tuple[dict, bool]:
    left = left_closing_decide(f)
    right = right_closing_decide(f)
    verdict = slider_exists(f, cap=max_psi)
    report = {
        "rule": f.to_json(),
        "left_closing": left.to_json(),
        "right_closing": right.to_json(),
        "slider": verdict.to_json(),
    }
    if left:
        report["lambda_valuations"] = _lambda_valuations(verdict, f.q)
        report["shift_offset"] = shift_offset(f)
    return report, bool(verdict)


def cmd_analyze(args: argparse.Namespace) -> int:
    f = load_local_rule(args.rule)
    report, exists = _analysis_report(f, args.max_psi)
    report["command"] = "analyze"
    if exists:
        _emit(report, f"slider exists at block length "
                      f"{3 * report['slider']['m']}")
        return 0
    if not report["left_closing"]["closed"]:
        _emit(report, "no slider: rule is not left-closing")
    else:
        primes = ", ".join(str(p)
                           for p in report["slider"]["violating_primes"])
        _emit(report, f"no slider: lambda has positive valuation at {primes}")
    return 1


def cmd_synthesize(args: argparse.Namespace) -> int:
    f = load_local_rule(args.rule)
    report, exists = _analysis_report(f, args.max_psi)
    report["command"] = "synthesize"
    if not exists:
        _emit(report, "no slider exists for this rule")
        return 1
    chi = synthesize(f)
    if not is_slider_rule_for(chi, f, max_states=args.max_automaton_states):
        raise RuntimeError("synthesized rule failed its own exact check")
    payload = chi.to_json()
    payload["manifest"] = stair_index(f).manifest()
    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    report["block_length"] = chi.block_length
    report["self_check"] = "exact"
    report["out"] = args.out
    _emit(report, f"wrote block rule of length {chi.block_length} to {args.out}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    chi = load_block_rule(args.block)
    f = load_local_rule(args.rule)
    if args.exact:
        try:
            ok = is_slider_rule_for(chi, f, max_states=args.max_automaton_states)
        except ResourceCapError:
            raise
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        report = {
            "command": "verify",
            "mode": "exact",
            "block_length": chi.block_length,
            "verified": ok,
        }
        _emit(report, "exact check passed" if ok else "exact check failed")
        return 0 if ok else 1
    try:
        result = verify_slider(chi, f, samples=args.samples, seed=args.seed)
        agree = slider_sweeper_agree(chi, f, samples=args.samples, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    verified = result.ok and agree
    report = {
        "command": "verify",
        "mode": "sample",
        "samples": args.samples,
        "seed": args.seed,
        "slider_samples_ok": result.ok,
        "sweeper_agreement": agree,
        "verified": verified,
    }
    if result.counterexample is not None:
        x, i, y, z = result.counterexample
        report["counterexample"] = {
            "input": ep_to_json(x),
            "anchor": i,
            "backward_limit": ep_to_json(y),
            "forward_limit": ep_to_json(z),
        }
    _emit(report, "sampling check passed" if verified else "sampling check failed")
    return 0 if verified else 1


def _trace_rows(chi: BlockRule, x: EpConfig, anchor: int, steps: int) -> list[str]:
    lo = anchor - 2
    hi = anchor + steps + chi.block_length + 2
    rows = []
    for t in range(steps + 1):
        stage = sweep_range(chi, x, anchor, anchor + t)
        rows.append("".join(str(stage.cell(c)) for c in range(lo, hi)))
    return rows


def cmd_sweep(args: argparse.Namespace) -> int:
    chi = load_block_rule(args.block)
    x = load_config(args.config)
    if chi.q != x.q:
        raise InputError("block rule and configuration use different alphabets")
    report: dict = {
        "command": "sweep",
        "mode": args.mode,
        "anchor": args.anchor,
        "input": ep_to_json(x),
    }
    if args.trace:
        rows = _trace_rows(chi, x, args.anchor, args.trace)
        report["trace"] = rows
        for row in rows:
            print(row, file=sys.stderr)
    if args.mode == "slider":
        y, z = representation_eval(chi, x, args.anchor)
        report["backward_limit"] = ep_to_json(y)
        report["forward_limit"] = ep_to_json(z)
        _emit(report, "both limit sweeps converge")
        return 0
    outcome = sweeper_eval(chi, x)
    report["outcome"] = outcome.to_json()
    if outcome.converges:
        _emit(report, "forward sweeps converge")
        return 0
    _emit(report, "forward sweeps oscillate between two limits")
    return 1


def cmd_mealy(args: argparse.Namespace) -> int:
    chi = load_block_rule(args.block)
    machine = mealy_from_block(chi)
    if args.max_automaton_states is not None:
        good = good_states(machine, cap=args.max_automaton_states)
    else:
        good = good_states(machine)
    bad = sorted(set(range(machine.size)) - good)
    report = {
        "command": "mealy",
        "states": machine.size,
        "good": sorted(good),
        "bad": bad,
        "all_good": not bad,
    }
    _emit(report, f"{len(good)} of {machine.size} states are good")
    return 0 if not bad else 1


def cmd_decompose(args: argparse.Namespace) -> int:
    f = load_local_rule(args.rule)
    try:
        decomposition = decompose_biclosing(f)
    except NotBiClosingError as exc:
        report = {
            "command": "decompose",
            "rule": f.to_json(),
            "biclosing": False,
            "failing_side": exc.verdict.side,
            "witness": [ep_to_json(c) for c in exc.verdict.witness],
        }
        _emit(report, f"rule is not {exc.verdict.side}-closing")
        return 1
    verified = verify_decomposition(decomposition, samples=args.samples,
                                    seed=args.seed)
    os.makedirs(args.out_dir, exist_ok=True)
    stage_files = []
    for idx, stage in enumerate(decomposition.stages, start=1):
        name = f"stage{idx}.json"
        with open(os.path.join(args.out_dir, name), "w", encoding="utf-8") as handle:
            json.dump(stage.rule.to_json(), handle, indent=2, sort_keys=True)
            handle.write("\n")
        stage_files.append({"direction": stage.direction.value, "rule_file": name})
    manifest = {"claimed_ca_file": args.rule, "stages": stage_files}
    with open(os.path.join(args.out_dir, "decomposition.json"), "w",
              encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    report = {
        "command": "decompose",
        "rule": f.to_json(),
        "biclosing": True,
        "shift_offset": shift_offset(f),
        "stages": [
            {"direction": stage.direction.value, "block_length": stage.rule.block_length}
            for stage in decomposition.stages
        ],
        "samples": args.samples,
        "seed": args.seed,
        "verified": verified,
        "out_dir": args.out_dir,
    }
    _emit(report, "decomposition verified" if verified
          else "decomposition failed verification")
    return 0 if verified else 1


def cmd_closing(args: argparse.Namespace) -> int:
    f = load_local_rule(args.rule)
    left = left_closing_decide(f)
    right = right_closing_decide(f)
    report = {
        "command": "closing",
        "rule": f.to_json(),
        "left": left.to_json(),
        "right": right.to_json(),
        "biclosing": bool(left) and bool(right),
    }
    sides = [side for side, v in (("left", left), ("right", right)) if v]
    _emit(report, f"closing sides: {', '.join(sides) if sides else 'none'}")
    return 0 if left and right else 1


def _build_automaton(args: argparse.Namespace) -> ZAutomaton:
    if args.kind == "mismatch":
        if args.vs is not None:
            raise InputError("--vs only applies to slider and sweeper automata")
        return graph_mismatch_automaton(load_local_rule(args.source))
    chi = load_block_rule(args.source)
    try:
        if args.kind == "slider":
            auto = slider_relation_automaton(
                chi, max_states=args.max_automaton_states)
        else:
            auto = sweeper_relation_automaton(
                chi, max_states=args.max_automaton_states)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.vs is not None:
        auto = intersect(auto, graph_mismatch_automaton(load_local_rule(args.vs)))
        cap = args.max_automaton_states
        if cap is not None and len(auto.states) > cap:
            raise ResourceCapError(
                f"intersection has {len(auto.states)} states, cap is {cap}")
    return auto


def cmd_automata(args: argparse.Namespace) -> int:
    auto = _build_automaton(args)
    base = {
        "command": "automata",
        "action": args.action,
        "kind": args.kind,
        "states": len(auto.states),
        "edges": len(auto.edges),
    }
    if args.action == "dump":
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(auto.to_json(), handle, indent=2, sort_keys=True)
            handle.write("\n")
        base["out"] = args.out
        _emit(base, f"wrote automaton with {len(auto.states)} states to {args.out}")
        return 0
    if args.action == "inspect":
        base["initial"] = len(auto.initial)
        base["final"] = len(auto.final)
        base["alphabet"] = auto.q
        base["arity"] = auto.arity
        _emit(base, f"{len(auto.states)} states, {len(auto.edges)} edges")
        return 0
    if args.action == "member":
        if auto.arity != 2:
            raise InputError("member needs a pair automaton")
        y = load_config(args.input)
        z = load_config(args.output)
        try:
            accepted = member(auto, ep_zip(y, z))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        base["member"] = accepted
        _emit(base, "pair accepted" if accepted else "pair rejected")
        return 0 if accepted else 1
    empty = is_empty(auto)
    base["empty"] = empty
    if not empty:
        witness = nonempty_witness(auto)
        if auto.arity == 2:
            wy, wz = ep_unzip(witness)
            base["witness"] = {"input": ep_to_json(wy), "output": ep_to_json(wz)}
        else:
            base["witness"] = ep_to_json(witness)
    _emit(base, "language is empty" if empty else "language is nonempty")
    return 0 if empty else 1


# ---------------------------------------------------------------------------
# Parser

def _add_cap(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-automaton-states", type=int, default=None,
                        help="abort with exit code 3 beyond this many states")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casweep",
        description="decide, synthesize, and verify single-sweep block "
                    "realizations of one-dimensional cellular automata")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="closing structure and slider existence")
    p.add_argument("rule", help="local rule JSON file")
    p.add_argument("--max-psi", type=int, default=1 << 24,
                   help="cap on the stair enumeration")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synthesize", help="build a block rule realizing the CA")
    p.add_argument("rule", help="local rule JSON file")
    p.add_argument("out", help="output block rule JSON file")
    p.add_argument("--max-psi", type=int, default=1 << 24)
    _add_cap(p)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", help="check a block rule against a CA")
    p.add_argument("block", help="block rule JSON file")
    p.add_argument("rule", help="local rule JSON file")
    p.add_argument("--exact", action="store_true",
                   help="decide equality exactly instead of sampling")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    _add_cap(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run limit sweeps on a configuration")
    p.add_argument("block", help="block rule JSON file")
    p.add_argument("config", help="configuration JSON file")
    p.add_argument("--mode", choices=("slider", "sweeper"), default="slider")
    p.add_argument("--anchor", type=int, default=0)
    p.add_argument("--trace", type=int, default=0, metavar="STEPS",
                   help="print the first STEPS partial sweeps as a grid")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mealy", help="classify sweep states as good or bad")
    p.add_argument("block", help="block rule JSON file")
    _add_cap(p)
    p.set_defaults(func=cmd_mealy)

    p = sub.add_parser("decompose", help="two-stage sweep factorization")
    p.add_argument("rule", help="local rule JSON file")
    p.add_argument("out_dir", help="directory for stage files")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("closing", help="left and right closing verdicts")
    p.add_argument("rule", help="local rule JSON file")
    p.set_defaults(func=cmd_closing)

    p = sub.add_parser("automata", help="work with relation automata")
    p.add_argument("action", choices=("dump", "inspect", "member", "empty"))
    p.add_argument("--kind", choices=("slider", "sweeper", "mismatch"),
                   default="slider")
    p.add_argument("source", help="block rule file (slider, sweeper) or "
                                  "local rule file (mismatch)")
    p.add_argument("--vs", metavar="RULE", default=None,
                   help="intersect with the mismatch automaton of this CA")
    p.add_argument("--out", help="output file for dump")
    p.add_argument("--input", help="backward-limit configuration for member")
    p.add_argument("--output", help="forward-limit configuration for member")
    _add_cap(p)
    p.set_defaults(func=cmd_automata)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "automata":
        if args.action == "dump" and not args.out:
            parser.error("dump requires --out")
        if args.action == "member" and not (args.input and args.output):
            parser.error("member requires --input and --output")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
