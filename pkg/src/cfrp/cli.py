"""Command-line entry points.

    cfrp train --iterations N --epoch-size K --seed S --store PATH --benchmark PATH --report PATH
    cfrp eval --store PATH --benchmark PATH [--workers W] [--mode argmax|sample:SEED]
    cfrp play --store PATH --seed S --log PATH --opponent normal|pongpong|qidui
    cfrp replay --log PATH
    cfrp bench-gen --deals N --seed S --out PATH
    cfrp inspect --store PATH --key K

Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 internal
invariant violation.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from . import cfr, engine, persistence
from .abstraction import DEFAULT_SCHEDULE, decode
from .cfr import average_strategy
from .eval import EvalAgent, evaluate, parse_mode, play_game
from .patterns import PATTERNS, Pattern
from .tiles import KIND_NAMES, MASK64, NUM_KINDS, format_hand, shuffle_deal

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MASK64:
        raise argparse.ArgumentTypeError(f"{text} is not a 64-bit unsigned integer")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text} must be >= 0")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} must be >= 1")
    return value


def _turns(text: str) -> tuple:
    try:
        turns = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad turn list {text!r}") from None
    if not turns or any(t < 1 for t in turns) or list(turns) != sorted(set(turns)):
        raise argparse.ArgumentTypeError("decision turns must be increasing integers >= 1")
    return turns


def _mode(text: str) -> str:
    try:
        parse_mode(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _pattern(text: str) -> Pattern:
    try:
        return Pattern.from_label(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown pattern {text!r}") from None


def _check_writable(path: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        raise UsageError(f"directory does not exist: {directory}")


def _check_readable(path: str) -> None:
    if not os.path.isfile(path):
        raise FileNotFoundError(f"no such file: {path}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfrp", description="CFR over abstract patterns in two-player Mahjong")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="run chance-sampled CFR")
    p.add_argument("--iterations", type=_nonneg, required=True)
    p.add_argument("--epoch-size", type=_positive, required=True)
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--benchmark", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--decision-turns", type=_turns, default=DEFAULT_SCHEDULE)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--mode", type=_mode, default="argmax")

    p = sub.add_parser("eval", help="estimate exploitability on a benchmark")
    p.add_argument("--store", required=True)
    p.add_argument("--benchmark", required=True)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--mode", type=_mode, default="argmax")
    p.add_argument("--decision-turns", type=_turns, default=DEFAULT_SCHEDULE)

    p = sub.add_parser("play", help="play one logged game against a fixed agent")
    p.add_argument("--store", required=True)
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("--log", required=True)
    p.add_argument("--opponent", type=_pattern, required=True)
    p.add_argument("--seat", type=int, choices=(0, 1), default=0)
    p.add_argument("--mode", type=_mode, default="argmax")
    p.add_argument("--decision-turns", type=_turns, default=DEFAULT_SCHEDULE)

    p = sub.add_parser("replay", help="render a game log")
    p.add_argument("--log", required=True)

    p = sub.add_parser("bench-gen", help="write a seeded benchmark file")
    p.add_argument("--deals", type=_nonneg, required=True)
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("inspect", help="show one stored node")
    p.add_argument("--store", required=True)
    p.add_argument("--key", type=int, required=True)
    return parser


# -- commands -----------------------------------------------------------------

def cmd_train(args, out) -> int:
    _check_readable(args.benchmark)
    _check_writable(args.store)
    _check_writable(args.report)
    benchmark = persistence.read_benchmark(args.benchmark)
    config = cfr.TrainConfig(iterations=args.iterations, epoch_size=args.epoch_size,
                             seed=args.seed, benchmark=benchmark, store_path=args.store,
                             report_path=args.report, schedule=args.decision_turns,
                             eval_workers=args.workers, eval_mode=args.mode)
    store, reports = cfr.train(config)
    for r in reports:
        print(r.csv_row(), file=out)
    print(f"trained {args.iterations} iterations; {len(store)} nodes -> {args.store}", file=out)
    return EXIT_OK


def cmd_eval(args, out) -> int:
    _check_readable(args.store)
    _check_readable(args.benchmark)
    store = persistence.load_store(args.store)
    store.read_only = True
    benchmark = persistence.read_benchmark(args.benchmark)
    if not benchmark:
        raise UsageError("benchmark is empty")
    report = evaluate(store, benchmark, mode=args.mode, workers=args.workers,
                      schedule=args.decision_turns)
    print(report.summary(), file=out)
    return EXIT_OK


def cmd_play(args, out) -> int:
    _check_readable(args.store)
    _check_writable(args.log)
    store = persistence.load_store(args.store)
    store.read_only = True
    agent = EvalAgent(store, args.mode, args.seat, args.decision_turns)
    utility, log = play_game(shuffle_deal(args.seed), agent, args.seat, args.opponent)
    engine_final = engine.replay_actions(shuffle_deal(args.seed), log)
    if engine.terminal_utility(engine_final) != log.utilities():
        raise AssertionError("logged result disagrees with the replayed game")
    persistence.write_log(log, args.log)
    print(f"agent seat {args.seat} vs {args.opponent.label}: agent utility {utility:+d} "
          f"-> {args.log}", file=out)
    return EXIT_OK


def cmd_replay(args, out) -> int:
    _check_readable(args.log)
    log = persistence.read_log(args.log)
    for line in render_log(log):
        print(line, file=out)
    return EXIT_OK


def cmd_bench_gen(args, out) -> int:
    _check_writable(args.out)
    deals = persistence.make_benchmark(args.deals, args.seed)
    persistence.write_benchmark(deals, args.out, seed=args.seed)
    print(f"wrote {len(deals)} deals -> {args.out}", file=out)
    return EXIT_OK


def cmd_inspect(args, out) -> int:
    _check_readable(args.store)
    store = persistence.load_store(args.store)
    node = store.get(args.key)
    if node is None:
        print(f"key {args.key} not in store ({len(store)} nodes)", file=sys.stderr)
        return EXIT_IO
    f = decode(node.key)
    labels = [p.label for p in PATTERNS]
    print(f"key {node.key}", file=out)
    print(f"round={f.round} pairs={f.pairs} pongs={f.pongs_kongs} "
          f"characters={f.character_tiles} winds={f.wind_tiles}", file=out)
    print("legal: " + " ".join(lab for lab, m in zip(labels, node.legal_mask) if m), file=out)
    print(f"visits: {node.visits}", file=out)
    for name, values in (("regret_sum", node.regret_sum), ("strategy_sum", node.strategy_sum),
                         ("average", average_strategy(node))):
        print(f"{name}: " + " ".join(f"{lab}={v:.6g}" for lab, v in zip(labels, values)), file=out)
    return EXIT_OK


COMMANDS = {
    "train": cmd_train, "eval": cmd_eval, "play": cmd_play, "replay": cmd_replay,
    "bench-gen": cmd_bench_gen, "inspect": cmd_inspect,
}


# -- replay rendering -----------------------------------------------------------

def render_log(log: engine.GameLog) -> List[str]:
    """Turn-by-turn text with both hands visible; the last line is END."""
    hands = [[0] * NUM_KINDS, [0] * NUM_KINDS]
    melds: List[list] = [[], []]
    discards: List[list] = [[], []]
    last_discard = None
    prev = None
    lines = []

    def show(p):
        m = " ".join(f"[{t} {KIND_NAMES[b]}]" for t, b in melds[p])
        return f"P{p}: {format_hand(hands[p])}" + (f" | {m}" if m else "")

    for ev in log.events:
        tag = ev[0]
        if tag == "SEED":
            lines.append(f"deal seed {ev[1]}")
        elif tag == "HAND":
            p = ev[1]
            for k in ev[2]:
                hands[p][k] += 1
            lines.append(f"dealt {show(p)}")
        elif tag == "DRAW":
            _, p, k, end = ev
            hands[p][k] += 1
            lines.append(f"P{p} draws {KIND_NAMES[k]} ({end})   {show(p)}")
        elif tag == "DISCARD":
            _, p, k = ev
            hands[p][k] -= 1
            discards[p].append(k)
            last_discard = k
            lines.append(f"P{p} discards {KIND_NAMES[k]}   {show(p)}")
        elif tag in ("CHOW", "PONG", "KONG"):
            p, k = ev[1], ev[2]
            exposed = tag != "KONG" or ev[3] == "exposed"
            if exposed:
                discards[1 - p].pop()
                hands[p][last_discard] += 1
            tiles = (k, k + 1, k + 2) if tag == "CHOW" else (k,) * (4 if tag == "KONG" else 3)
            for t in tiles:
                hands[p][t] -= 1
            name = tag.lower() if tag != "KONG" else f"{ev[3]} kong"
            melds[p].append((name, k))
            lines.append(f"P{p} {name} on {KIND_NAMES[k]}   {show(p)}")
        elif tag == "PASS":
            lines.append(f"P{ev[1]} passes (phase {ev[2]})")
        elif tag == "POLICY":
            _, p, rnd, pat = ev
            lines.append(f"P{p} commits to {Pattern(pat).label} at round {rnd}")
        elif tag == "END":
            if ev[1] == "win" and prev is not None and prev[0] == "DISCARD" \
                    and prev[1] != ev[2]:
                # won on the opponent's discard
                discards[prev[1]].pop()
                hands[ev[2]][prev[2]] += 1
            for p in (0, 1):
                lines.append(f"final {show(p)}  discards: "
                             + (" ".join(KIND_NAMES[k] for k in discards[p]) or "-"))
            u = log.utilities()
            if ev[1] == "drawn":
                lines.append(f"END drawn utilities {u[0]:+d} {u[1]:+d}")
            else:
                lines.append(f"END win P{ev[2]} {Pattern(ev[3]).label} {ev[4]} "
                             f"utilities {u[0]:+d} {u[1]:+d}")
        if tag != "POLICY":
            prev = ev
    if not lines or not lines[-1].startswith("END"):
        raise ValueError("log has no END event")
    return lines


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(message)s")
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        if isinstance(exc, engine.IllegalActionError):
            print(f"invariant violation: {exc}", file=sys.stderr)
            return EXIT_INVARIANT
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except AssertionError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
