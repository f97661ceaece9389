"""Line-oriented text formats: node store, game log, benchmark, epoch report.

Every file starts with a versioned header. Reals are written with ``repr``,
which is the shortest decimal that parses back to the same double, so all
formats round-trip bit-exactly. Writes go to a temporary file in the target
directory and are renamed into place.
"""

import os
import tempfile
from typing import Iterable, List, Optional, Sequence

from .cfr import NUM_ACTIONS, CFRNode, EpochReport, NodeStore
from .engine import GameLog
from .patterns import Pattern
from .tiles import (GENERATOR_VERSION, HAND_SIZE, MASK64, NUM_KINDS, Deal,
                    seed_stream, shuffle_deal)

STORE_HEADER = "cfrp-store v1 actions=normal,pongpong,qidui"
LOG_HEADER = "cfrp-log v1"
BENCH_MAGIC = "cfrp-bench"
BENCH_VERSION = "v1"
REPORT_HEADER = "epoch,iterations_total,nodes,exploitability"


class FormatError(ValueError):
    """Malformed or incompatible file content; ``line`` is 1-based when known."""

    def __init__(self, path, line: Optional[int], message: str):
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")


def atomic_write(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_lines(path) -> List[str]:
    with open(path, "r", encoding="ascii", newline="") as fh:
        text = fh.read()
    if text and not text.endswith("\n"):
        # a missing final newline means the file was cut short
        lines = text.split("\n")
        raise FormatError(path, len(lines), "truncated line (no trailing newline)")
    return text.split("\n")[:-1]


def _real(tok: str) -> float:
    x = float(tok)
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite real {tok!r}")
    return x


# -- node store ---------------------------------------------------------------

def format_store(store: NodeStore) -> str:
    out = [STORE_HEADER]
    for node in store:  # sorted by key
        mask = "".join("1" if m else "0" for m in node.legal_mask)
        reals = ",".join(repr(float(x)) for x in list(node.regret_sum) + list(node.strategy_sum))
        out.append(f"{node.key},{mask},{node.visits},{reals}")
    return "\n".join(out) + "\n"


def parse_store(lines: Sequence[str], path="<store>") -> NodeStore:
    if not lines:
        raise FormatError(path, None, "empty file (missing header)")
    if lines[0] != STORE_HEADER:
        raise FormatError(path, 1, f"bad header {lines[0]!r}; expected {STORE_HEADER!r}")
    store = NodeStore()
    prev = -1
    for no, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 3 + 2 * NUM_ACTIONS:
            raise FormatError(path, no, f"expected {3 + 2 * NUM_ACTIONS} fields, got {len(parts)}")
        try:
            key = int(parts[0])
            mask_bits = parts[1]
            if len(mask_bits) != NUM_ACTIONS or set(mask_bits) - {"0", "1"}:
                raise ValueError(f"bad legal mask {mask_bits!r}")
            visits = int(parts[2])
            reals = [_real(t) for t in parts[3:]]
        except ValueError as exc:
            raise FormatError(path, no, str(exc)) from None
        if not 0 <= key < 1 << 20:
            raise FormatError(path, no, f"key {key} outside the 20-bit range")
        if key in store:
            raise FormatError(path, no, f"duplicate key {key}")
        if key < prev:
            raise FormatError(path, no, f"key {key} out of order (after {prev})")
        prev = key
        mask = tuple(b == "1" for b in mask_bits)
        if not any(mask):
            raise FormatError(path, no, f"key {key}: empty legal mask")
        store.add(CFRNode(key, mask, reals[:NUM_ACTIONS], reals[NUM_ACTIONS:], visits))
    return store


def save_store(store: NodeStore, path) -> None:
    atomic_write(path, format_store(store))


def load_store(path) -> NodeStore:
    return parse_store(_read_lines(path), path)


# -- game log -----------------------------------------------------------------

def format_event(ev) -> str:
    tag = ev[0]
    if tag == "SEED":
        return f"SEED {ev[1]}"
    if tag == "HAND":
        return f"HAND {ev[1]} " + " ".join(str(k) for k in ev[2])
    if tag == "POLICY":
        return f"POLICY {ev[1]} {ev[2]} {Pattern(ev[3]).label}"
    if tag == "END":
        if ev[1] == "drawn":
            return "END drawn"
        return f"END win {ev[2]} {Pattern(ev[3]).label} {ev[4]}"
    return " ".join(str(x) for x in ev)


def _player(tok):
    p = int(tok)
    if p not in (0, 1):
        raise ValueError(f"bad player {tok}")
    return p


def _kind(tok):
    k = int(tok)
    if not 0 <= k < NUM_KINDS:
        raise ValueError(f"bad tile kind {tok}")
    return k


def _choice(tok, options):
    if tok not in options:
        raise ValueError(f"expected one of {'/'.join(options)}, got {tok!r}")
    return tok


def _u64(tok):
    x = int(tok)
    if not 0 <= x <= MASK64 or str(x) != tok:
        raise ValueError(f"bad 64-bit seed {tok!r}")
    return x


# tag -> (number of fields after the tag, parser)
_EVENT_PARSERS = {
    "SEED": (1, lambda t: ("SEED", _u64(t[0]))),
    "HAND": (1 + HAND_SIZE, lambda t: ("HAND", _player(t[0]), tuple(_kind(x) for x in t[1:]))),
    "DRAW": (3, lambda t: ("DRAW", _player(t[0]), _kind(t[1]), _choice(t[2], ("front", "back")))),
    "DISCARD": (2, lambda t: ("DISCARD", _player(t[0]), _kind(t[1]))),
    "CHOW": (2, lambda t: ("CHOW", _player(t[0]), _kind(t[1]))),
    "PONG": (2, lambda t: ("PONG", _player(t[0]), _kind(t[1]))),
    "KONG": (3, lambda t: ("KONG", _player(t[0]), _kind(t[1]),
                           _choice(t[2], ("concealed", "exposed")))),
    "PASS": (2, lambda t: ("PASS", _player(t[0]), int(_choice(t[1], ("0", "1"))))),
    "POLICY": (3, lambda t: ("POLICY", _player(t[0]), int(t[1]), Pattern.from_label(t[2]))),
}


def parse_event(line: str):
    toks = line.split(" ")
    tag, rest = toks[0], toks[1:]
    if tag == "END":
        if rest == ["drawn"]:
            return ("END", "drawn")
        if len(rest) != 4 or rest[0] != "win":
            raise ValueError(f"END expects 'drawn' or 'win p pattern points', got {rest}")
        pattern = Pattern.from_label(rest[2])
        pts = int(rest[3])
        if pts not in (1, 2):
            raise ValueError(f"bad points {rest[3]}")
        return ("END", "win", _player(rest[1]), pattern, pts)
    if tag not in _EVENT_PARSERS:
        raise ValueError(f"unknown event tag {tag!r}")
    arity, parser = _EVENT_PARSERS[tag]
    if len(rest) != arity:
        raise ValueError(f"{tag} expects {arity} fields, got {len(rest)}")
    ev = parser(rest)
    if format_event(ev) != line:
        raise ValueError(f"non-canonical spelling {line!r}")
    return ev


def format_log(log: GameLog) -> str:
    return "\n".join([LOG_HEADER] + [format_event(ev) for ev in log.events]) + "\n"


def parse_log(lines: Sequence[str], path="<log>") -> GameLog:
    if not lines or lines[0] != LOG_HEADER:
        raise FormatError(path, 1, f"missing header {LOG_HEADER!r}")
    events = []
    for no, line in enumerate(lines[1:], start=2):
        try:
            events.append(parse_event(line))
        except (ValueError, KeyError) as exc:
            raise FormatError(path, no, str(exc)) from None
    return GameLog(events)


def write_log(log: GameLog, path) -> None:
    atomic_write(path, format_log(log))


def read_log(path) -> GameLog:
    return parse_log(_read_lines(path), path)


# -- benchmark ------------------------------------------------------------------

def make_benchmark(count: int, seed: int) -> List[Deal]:
    """``count`` deals whose seeds are the first outputs of SplitMix64(seed)."""
    return [shuffle_deal(s) for s in seed_stream(seed, count)]


def format_benchmark(deals: Sequence[Deal], seed: Optional[int] = None) -> str:
    seed_tok = "none" if seed is None else str(seed)
    out = [f"{BENCH_MAGIC} {BENCH_VERSION} count={len(deals)} seed={seed_tok} "
           f"generator={GENERATOR_VERSION}"]
    out.extend(d.to_line() for d in deals)
    return "\n".join(out) + "\n"


def parse_benchmark(lines: Sequence[str], path="<benchmark>") -> List[Deal]:
    if not lines:
        raise FormatError(path, None, "empty file (missing header)")
    head = lines[0].split(" ")
    fields = dict(tok.split("=", 1) for tok in head[2:] if "=" in tok)
    if head[:2] != [BENCH_MAGIC, BENCH_VERSION] or set(fields) != {"count", "seed", "generator"}:
        raise FormatError(path, 1, f"bad header {lines[0]!r}")
    if fields["generator"] != GENERATOR_VERSION:
        raise FormatError(path, 1, f"generator {fields['generator']!r} is not {GENERATOR_VERSION!r}")
    try:
        count = int(fields["count"])
        seed = None if fields["seed"] == "none" else _u64(fields["seed"])
    except ValueError as exc:
        raise FormatError(path, 1, str(exc)) from None
    if count != len(lines) - 1:
        raise FormatError(path, 1, f"header says {count} deals, file has {len(lines) - 1}")
    seeds = seed_stream(seed, count) if seed is not None else [None] * count
    deals = []
    for no, (line, s) in enumerate(zip(lines[1:], seeds), start=2):
        try:
            deal = Deal.from_line(line, s)
        except ValueError as exc:
            raise FormatError(path, no, str(exc)) from None
        if deal.to_line() != line:
            raise FormatError(path, no, "non-canonical spelling")
        if s is not None and deal.permutation != shuffle_deal(s).permutation:
            raise FormatError(path, no, f"deal does not match generator seed {s}")
        deals.append(deal)
    return deals


def write_benchmark(deals: Sequence[Deal], path, seed: Optional[int] = None) -> None:
    atomic_write(path, format_benchmark(deals, seed))


def read_benchmark(path) -> List[Deal]:
    return parse_benchmark(_read_lines(path), path)


# -- epoch report -------------------------------------------------------------

def format_report(reports: Iterable[EpochReport]) -> str:
    return "\n".join([REPORT_HEADER] + [r.csv_row() for r in reports]) + "\n"


def write_report(reports: Iterable[EpochReport], path) -> None:
    atomic_write(path, format_report(reports))


def read_report(path) -> List[EpochReport]:
    lines = _read_lines(path)
    if not lines or lines[0] != REPORT_HEADER:
        raise FormatError(path, 1, "bad report header")
    out = []
    for no, line in enumerate(lines[1:], start=2):
        try:
            e, it, n, x = line.split(",")
            out.append(EpochReport(int(e), int(it), int(n), float(x)))
        except ValueError as exc:
            raise FormatError(path, no, str(exc)) from None
    return out
