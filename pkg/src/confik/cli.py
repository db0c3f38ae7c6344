"""Command-line frontend.

Subcommands::

    confik check model.fm
    confik dispensable model.fm [--decide a=1 ...]
    confik minmodels model.fm [--decide a=1 ...]
    confik complete model.fm --mode blind|shopping [--decide a=1 ...]
    confik simulate model.fm --runs N --seed S [--csv out.csv]
    confik osd classify problem.osd
    confik serve --port P --model model.fm [--static DIR] [--snapshot FILE]

Model inputs may be feature-model text or plain DIMACS CNF (detected from a
``p cnf`` header or a ``.cnf`` / ``.dimacs`` extension).  Exit codes: 0 on
success, 1 on usage errors, 2 on input errors (parse failures, unsatisfiable
models, inconsistent --decide literals).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import engine, reasoning, simulate
from .errors import (
    ConfikError,
    DimacsError,
    InconsistentDecision,
    ModelSyntaxError,
    NoSolutions,
    PreferenceError,
    TooLarge,
    UnsatInput,
    UnsatModel,
)
from .logic import ClauseSet, Lit, count_models, from_dimacs, is_satisfiable, to_cnf
from .model import FeatureModel, parse_model, translate
from .osd import classify_values, parse_osd

__all__ = ["run_cli", "main"]

_PRODUCT_LIMIT = 10**6


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _InputError(Exception):
    pass


def _read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _InputError(f"cannot read {path!r}: {exc}") from exc


def _load(path: str) -> tuple[str, Optional[FeatureModel], ClauseSet]:
    text = _read_file(path)
    name = path.rsplit("/", 1)[-1]
    for suffix in (".fm", ".cnf", ".dimacs", ".txt"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
            break
    looks_dimacs = path.endswith((".cnf", ".dimacs")) or any(
        line.strip().startswith("p cnf")
        for line in text.splitlines()
        if line.strip() and not line.strip().startswith("c")
    )
    try:
        if looks_dimacs:
            return name, None, from_dimacs(text)
        fm = parse_model(text)
        return name, fm, to_cnf(translate(fm), fm.var_table)
    except (ModelSyntaxError, DimacsError) as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _parse_decides(cs: ClauseSet, pairs: Sequence[str]) -> list[tuple[int, bool]]:
    out = []
    table = cs.var_table
    for pair in pairs:
        if "=" not in pair:
            raise _InputError(f"--decide expects name=value, got {pair!r}")
        name, _, raw = pair.partition("=")
        name = name.strip()
        raw = raw.strip().lower()
        if name not in table:
            raise _InputError(f"--decide references unknown variable {name!r}")
        if raw in ("1", "true", "yes"):
            value = True
        elif raw in ("0", "false", "no"):
            value = False
        else:
            raise _InputError(f"--decide value must be 0/1/true/false, got {raw!r}")
        out.append((table.id_of(name), value))
    return out


def _session_with_decides(cs: ClauseSet, pairs: Sequence[str]) -> engine.Session:
    try:
        session = engine.new_session(cs)
        for var, value in _parse_decides(cs, pairs):
            session = engine.apply_decision(session, var, value)
    except (UnsatModel, InconsistentDecision, ConfikError) as exc:
        raise _InputError(str(exc)) from exc
    return session


def _names(cs: ClauseSet, ids) -> str:
    ordered = sorted(ids)
    if not ordered:
        return "(none)"
    return " ".join(cs.var_table.name_of(v) for v in ordered)


def _feature_set(cs: ClauseSet, ids) -> str:
    return "{" + ", ".join(cs.var_table.name_of(v) for v in sorted(ids)) + "}"


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_check(args) -> int:
    _, fm, cs = _load(args.model)
    n_features = len(fm.features) if fm else cs.var_table.user_count
    print(f"features: {n_features}")
    print(f"clauses: {len(cs.clauses)}")
    sat = is_satisfiable(cs)
    print(f"satisfiable: {'yes' if sat else 'no'}")
    if not sat:
        print("products: 0")
        return 0
    count = count_models(cs, cap=_PRODUCT_LIMIT)
    if count > _PRODUCT_LIMIT:
        print(f"products: > {_PRODUCT_LIMIT}")
    else:
        print(f"products: {count}")
    return 0


def _cmd_dispensable(args) -> int:
    _, _, cs = _load(args.model)
    session = _session_with_decides(cs, args.decide)
    report = reasoning.dispensable_vars(cs, [_as_lit(d) for d in session.decisions])
    unassigned = set(session.unassigned())
    auto_false = set(report.dispensable) & unassigned
    inferred_true = {
        d.var for d in session.decisions if d.origin == "inferred" and d.value
    }
    needs = unassigned - set(report.dispensable)
    print(f"auto-false: {_names(cs, auto_false)}")
    print(f"forced-true: {_names(cs, inferred_true)}")
    print(f"needs-attention: {_names(cs, needs)}")
    return 0


def _as_lit(decision: engine.Decision) -> Lit:
    return Lit(decision.var, decision.value)


def _cmd_minmodels(args) -> int:
    _, _, cs = _load(args.model)
    session = _session_with_decides(cs, args.decide)
    try:
        mm = reasoning.enumerate_minimal_models(cs, [_as_lit(d) for d in session.decisions])
    except UnsatInput as exc:
        raise _InputError(str(exc)) from exc
    print(f"minimal models: {len(mm.models)}")
    for model in mm.models:
        print(_feature_set(cs, model.true_set()))
    return 0


def _cmd_complete(args) -> int:
    _, _, cs = _load(args.model)
    session = _session_with_decides(cs, args.decide)
    if args.mode == "blind":
        session = engine.complete_blind(session)
    else:
        before = {d.var for d in session.decisions}
        session = engine.shopping_principle(session)
        auto = {d.var for d in session.decisions if d.origin == "auto" and d.var not in before}
        print(f"auto-false: {_names(cs, auto)}")
        print(f"highlighted: {_names(cs, session.highlight)}")
    complete = engine.is_complete(session)
    print(f"complete: {'yes' if complete else 'no'}")
    if complete:
        selected = {d.var for d in session.decisions if d.value}
        print(f"selected: {_feature_set(cs, selected)}")
    return 0


def _cmd_simulate(args) -> int:
    name, fm, cs = _load(args.model)
    n_features = len(fm.features) if fm else cs.var_table.user_count
    try:
        stats = simulate.simulate_manual(cs, runs=args.runs, seed=args.seed)
    except UnsatInput as exc:
        raise _InputError(str(exc)) from exc
    for line in simulate.table_lines(name, n_features, len(cs.clauses), stats):
        print(line)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(simulate.CSV_HEADER + "\n")
            fh.write(simulate.csv_row(name, n_features, len(cs.clauses), stats) + "\n")
    return 0


def _cmd_osd_classify(args) -> int:
    text = _read_file(args.problem)
    try:
        problem = parse_osd(text)
        classification = classify_values(problem)
    except (ModelSyntaxError, NoSolutions, PreferenceError, TooLarge) as exc:
        raise _InputError(f"{args.problem}: {exc}") from exc
    labels = {"settled": "settled", "non_optimal": "non-optimal", "open": "open"}
    for i, name in enumerate(problem.names):
        parts = [
            f"{value} {labels[classification.status[(i, value)]]}"
            for value in problem.domains[i]
        ]
        print(f"{name}: " + ", ".join(parts))
    return 0


def _cmd_serve(args) -> int:
    from .service import ConfiguratorService, make_server, run_server

    default_model = None
    default_name = "model"
    if args.model:
        default_name, fm, cs = _load(args.model)
        if fm is None:
            raise _InputError("serve needs a feature-model file, not DIMACS")
        if not is_satisfiable(cs):
            raise _InputError(f"{args.model}: the model admits no products")
        default_model = _read_file(args.model)
    service = ConfiguratorService(default_model=default_model, default_name=default_name)
    if args.snapshot:
        if os.path.exists(args.snapshot):
            restored = service.load_snapshot(args.snapshot)
            print(f"restored {restored} session(s) from {args.snapshot}", flush=True)
    server = make_server(service, host=args.host, port=args.port, static_dir=args.static)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}", flush=True)
    run_server(server, snapshot_path=args.snapshot)
    return 0


# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="confik", description="feature-model configurator toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="model statistics and satisfiability")
    p.add_argument("model")
    p.set_defaults(fn=_cmd_check)

    for cmd, fn in (("dispensable", _cmd_dispensable), ("minmodels", _cmd_minmodels)):
        p = sub.add_parser(cmd)
        p.add_argument("model")
        p.add_argument("--decide", action="append", default=[], metavar="VAR=VALUE")
        p.set_defaults(fn=fn)

    p = sub.add_parser("complete", help="finish a configuration")
    p.add_argument("model")
    p.add_argument("--mode", choices=["blind", "shopping"], required=True)
    p.add_argument("--decide", action="append", default=[], metavar="VAR=VALUE")
    p.set_defaults(fn=_cmd_complete)

    p = sub.add_parser("simulate", help="random manual configuration experiment")
    p.add_argument("model")
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("osd", help="finite-domain problems")
    osd_sub = p.add_subparsers(dest="osd_command", required=True)
    pc = osd_sub.add_parser("classify")
    pc.add_argument("problem")
    pc.set_defaults(fn=_cmd_osd_classify)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--port", type=int, default=8234)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--model", default=None)
    p.add_argument("--static", default=None)
    p.add_argument("--snapshot", default=None)
    p.set_defaults(fn=_cmd_serve)

    return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
