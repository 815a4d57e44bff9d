"""Command-line interface.

Subcommands: solve, nimber, outcome, canonize, children, simplify, check,
verify, count-tree.  Output is line-oriented and deterministic; errors
print one diagnostic line on stderr and exit non-zero.
"""

from __future__ import annotations

import argparse
import os
import sys

from .canonize import canonical_form, count_complete_tree, parse_key
from .checker import (
    check_compute,
    export_dot,
    read_solution_text,
    verify_solution,
    write_solution_text,
)
from .engine import Couple, Engine, Outcome
from .errors import SproutsError
from .moves import child_keys
from .position import parse, render, start_string
from .simplify import simplify
from .store import Store


def _load_store(path: str | None) -> Store:
    store = Store()
    if path and os.path.exists(path):
        store.import_text(path)
    return store


def cmd_solve(args: argparse.Namespace) -> int:
    store = _load_store(args.db)
    if args.db:
        store.attach_journal(args.db)
    engine = Engine(store=store, budget=args.budget)
    if args.serve is not None:
        from .service import ExploreServer, Session

        session = Session.for_string(start_string(args.spots), store=store,
                                     budget=args.budget)
        server = ExploreServer(session, port=args.serve).start()
        print(f"serving session on {server.address[0]}:{server.address[1]}",
              file=sys.stderr)
        session.start()
        session.join()
        server.stop()
        if session.status != "done":
            raise SproutsError(session.error or f"session {session.status}")
        # The outcome is proven; derive the nimber from the now-filled store.
        nimber = engine.nimber_of_string(start_string(args.spots))
    else:
        _, nimber = engine.solve_spots(args.spots)
    outcome = Outcome.WIN if nimber else Outcome.LOSS
    print(f"{outcome}, nimber {nimber}")
    if args.db:
        store.close()
        store.export_text(args.db)
    return 0


def cmd_nimber(args: argparse.Namespace) -> int:
    engine = Engine(store=_load_store(args.db), budget=args.budget)
    print(engine.nimber_of_string(args.position))
    return 0


def cmd_outcome(args: argparse.Namespace) -> int:
    engine = Engine(store=_load_store(args.db), budget=args.budget)
    print(engine.outcome(Couple(canonical_form(args.position), args.nimber)))
    return 0


def cmd_canonize(args: argparse.Namespace) -> int:
    print(canonical_form(args.position))
    return 0


def cmd_children(args: argparse.Namespace) -> int:
    for key in child_keys(parse_key(canonical_form(args.position))):
        print(key)
    return 0


def cmd_simplify(args: argparse.Namespace) -> int:
    print(render(simplify(parse(args.position))))
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    reference = Store()
    reference.import_text(args.db)
    root = Couple(canonical_form(start_string(args.spots)), 0)
    tree = check_compute(root, reference)
    write_solution_text(tree, args.out)
    print(f"solution tree: {len(tree)} couples, {len(tree.used_records)} records used")
    if args.min_store:
        minimized = Store()
        for key, nimber in tree.used_records.items():
            minimized.put(key, nimber)
        minimized.export_text(args.min_store)
    if args.dot:
        dot, legend = export_dot(tree, min_lives=args.min_lives, labels=args.labels)
        with open(args.dot, "w", encoding="ascii") as fh:
            fh.write(dot)
        if legend is not None:
            with open(args.dot + ".legend.txt", "w", encoding="ascii") as fh:
                fh.write(legend)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    tree = read_solution_text(args.solution)
    problems = verify_solution(tree)
    for problem in problems:
        print(problem, file=sys.stderr)
    print("pass" if not problems else f"fail ({len(problems)} problems)")
    return 0 if not problems else 1


def cmd_count_tree(args: argparse.Namespace) -> int:
    print(count_complete_tree(args.spots, node_budget=args.budget))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sprouts",
        description="Solve and explore the game of Sprouts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="outcome and nimber of the p-spot game")
    p.add_argument("--spots", type=int, required=True)
    p.add_argument("--db", help="store file to resume from and write back")
    p.add_argument("--budget", type=int, help="node budget")
    p.add_argument("--serve", type=int, help="expose the session on this TCP port")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("nimber", help="nimber of a position string")
    p.add_argument("--position", required=True)
    p.add_argument("--db")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_nimber)

    p = sub.add_parser("outcome", help="win/loss of (position + nim heap)")
    p.add_argument("--position", required=True)
    p.add_argument("--nimber", type=int, required=True)
    p.add_argument("--db")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_outcome)

    p = sub.add_parser("canonize", help="canonical key of a position string")
    p.add_argument("--position", required=True)
    p.set_defaults(func=cmd_canonize)

    p = sub.add_parser("children", help="canonical children of a position string")
    p.add_argument("--position", required=True)
    p.set_defaults(func=cmd_children)

    p = sub.add_parser("simplify", help="simplified form of a position string")
    p.add_argument("--position", required=True)
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("check", help="standalone check computation from a store")
    p.add_argument("--spots", type=int, required=True)
    p.add_argument("--db", required=True, help="reference store from a prior solve")
    p.add_argument("--out", required=True, help="solution tree output file")
    p.add_argument("--min-store", help="write the minimized store here")
    p.add_argument("--dot", help="write a Graphviz file here")
    p.add_argument("--min-lives", type=int, default=0)
    p.add_argument("--labels", choices=["full", "reference-numbers"], default="full")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="validate a solution tree file")
    p.add_argument("--solution", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count-tree", help="distinct keys in the complete game tree")
    p.add_argument("--spots", type=int, required=True)
    p.add_argument("--budget", type=int, help="cap on distinct positions")
    p.set_defaults(func=cmd_count_tree)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SproutsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
