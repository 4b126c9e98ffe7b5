"""Command-line interface.

Every command except ``extract`` prints one JSON report on stdout.  Exit
codes: 0 success / found / synchronizing, 1 not synchronizing, 2 input or
validation error, 3 search limit exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .bk import generate_bk, state_names as bk_state_names
from .clusters import NotTotalError, decompose, sync_prerequisites
from .io import PfaDocument, parse_pfa, serialize_pfa, to_dot
from .pfa import Pfa, Word, total_letters
from .reduction import extract_assignment, parse_dimacs, reduce
from .search import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_VISITED,
    Found,
    LimitExceeded,
    Limits,
    NotSingleton,
    Synchronizing,
    shortest_sync_word,
    verify_word,
)

EXIT_OK, EXIT_NOT_SYNC, EXIT_ERROR, EXIT_LIMIT = 0, 1, 2, 3

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "input_digest", "outcome", "word", "lengths", "clusters", "timing"],
    "properties": {
        "command": {"type": "string"},
        "input_digest": {"type": ["string", "null"], "pattern": "^[0-9a-f]{64}$"},
        "outcome": {"type": "string"},
        "word": {"type": ["array", "null"], "items": {"type": "string"}},
        "word_text": {"type": "string"},
        "lengths": {
            "type": "object",
            "required": ["word", "states", "alphabet"],
            "properties": {
                "word": {"type": ["integer", "null"], "minimum": 0},
                "states": {"type": "integer", "minimum": 1},
                "alphabet": {"type": "integer", "minimum": 1},
            },
        },
        "clusters": {"type": ["object", "null"]},
        "timing": {
            "type": "object",
            "required": ["seconds"],
            "properties": {"seconds": {"type": "number", "minimum": 0}},
        },
        "details": {"type": "object"},
    },
}


class CliError(Exception):
    pass


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _load_pfa(path: str) -> tuple[PfaDocument, str]:
    data = _read(path)
    try:
        doc = parse_pfa(data.decode("utf-8"))
    except UnicodeDecodeError:
        raise CliError(f"{path}: not UTF-8 text") from None
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None
    return doc, _digest(data)


def _letter(pfa: Pfa, name: str) -> int:
    try:
        return pfa.letter_index(name)
    except KeyError:
        raise CliError(f"unknown letter {name!r}") from None


def parse_word(pfa: Pfa, tokens: Sequence[str], compact: bool = False) -> Word:
    """Letters as separate tokens or one space-separated string.

    With ``compact`` the tokens are concatenated and split into characters,
    which requires an alphabet of single-character letters.
    """
    if compact:
        if any(len(x) != 1 for x in pfa.alphabet):
            raise CliError("--compact needs an alphabet of single-character letters")
        names = [ch for tok in tokens for ch in tok if not ch.isspace()]
    else:
        names = [x for tok in tokens for x in tok.split()]
    out = []
    for pos, name in enumerate(names):
        if name not in pfa.alphabet:
            hint = " (use --compact for concatenated letters)" if len(name) > 1 else ""
            raise CliError(f"word position {pos}: unknown letter {name!r}{hint}")
        out.append(pfa.letter_index(name))
    return tuple(out)


def format_word(pfa: Pfa, word: Word, compact: bool = False) -> str:
    names = pfa.word_names(word)
    if compact and all(len(x) == 1 for x in pfa.alphabet):
        return "".join(names)
    return " ".join(names)


def _report(command, pfa: Optional[Pfa], digest, outcome, started, word=None,
            clusters=None, compact=False, **details) -> dict:
    rep = {
        "command": command,
        "input_digest": digest,
        "outcome": outcome,
        "word": None if word is None else pfa.word_names(word),
        "lengths": {
            "word": None if word is None else len(word),
            "states": pfa.state_count if pfa else 1,
            "alphabet": pfa.letter_count if pfa else 1,
        },
        "clusters": clusters,
        "timing": {"seconds": round(time.perf_counter() - started, 6)},
        "details": details,
    }
    if word is not None:
        rep["word_text"] = format_word(pfa, word, compact)
    return rep


def _named_summary(doc: PfaDocument, letter: int) -> dict:
    d = decompose(doc.pfa, letter)
    names = doc.state_names
    summary = d.summary()
    summary["letter"] = doc.pfa.alphabet[letter]
    summary["cycles"] = [[names[q] for q in c] for c in summary["cycles"]]
    summary["levels"] = {names[q]: lv for q, lv in enumerate(d.level)}
    summary["one_cluster"] = len(d.clusters) == 1
    return summary


def cmd_analyze(args) -> tuple[dict, int]:
    started = time.perf_counter()
    doc, digest = _load_pfa(args.file)
    pfa = doc.pfa
    prereq = sync_prerequisites(pfa)
    if args.letter is not None:
        letter = _letter(pfa, args.letter)
    else:
        totals = total_letters(pfa)
        letter = totals[0] if totals else None
    if letter is None:
        clusters, outcome = None, "no-total-letter"
    else:
        try:
            clusters = _named_summary(doc, letter)
        except NotTotalError as exc:
            raise CliError(
                f"letter {exc.letter_name!r} is not total: undefined on state {doc.state_names[exc.state]!r}"
            ) from None
        outcome = "one-cluster" if clusters["one_cluster"] else "multi-cluster"
    return _report("analyze", pfa, digest, outcome, started, clusters=clusters,
                   prerequisites=prereq.to_dict(pfa)), EXIT_OK


def cmd_solve(args) -> tuple[dict, int]:
    started = time.perf_counter()
    doc, digest = _load_pfa(args.file)
    pfa = doc.pfa
    res = shortest_sync_word(pfa, Limits(args.max_visited, args.max_depth))
    if isinstance(res, Found):
        return _report("solve", pfa, digest, "found", started, word=res.word,
                       compact=args.compact, state=doc.state_names[res.state]), EXIT_OK
    if isinstance(res, LimitExceeded):
        return _report("solve", pfa, digest, "limit-exceeded", started,
                       visited=res.visited, depth=res.depth), EXIT_LIMIT
    return _report("solve", pfa, digest, "not-synchronizing", started,
                   visited=res.visited), EXIT_NOT_SYNC


def cmd_verify(args) -> tuple[dict, int]:
    started = time.perf_counter()
    doc, digest = _load_pfa(args.file)
    pfa = doc.pfa
    word = parse_word(pfa, args.word, args.compact)
    res = verify_word(pfa, word)
    names = doc.state_names
    if isinstance(res, Synchronizing):
        return _report("verify", pfa, digest, "synchronizing", started, word=word,
                       compact=args.compact, state=names[res.state]), EXIT_OK
    if isinstance(res, NotSingleton):
        return _report("verify", pfa, digest, "not-singleton", started, word=word,
                       compact=args.compact, states=[names[q] for q in res.states]), EXIT_NOT_SYNC
    return _report("verify", pfa, digest, "undefined", started, word=word, compact=args.compact,
                   position=res.position, state=names[res.state],
                   letter=pfa.alphabet[res.letter]), EXIT_NOT_SYNC


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def cmd_gen_bk(args) -> tuple[dict, int]:
    started = time.perf_counter()
    try:
        inst = generate_bk(args.k)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    text = serialize_pfa(inst.pfa, bk_state_names(args.k), comment=f"B_{args.k}")
    word_path = args.output + ".word"
    _write(args.output, text)
    _write(word_path, format_word(inst.pfa, inst.expected_word) + "\n")
    return _report("gen-bk", inst.pfa, _digest(text.encode()), "generated", started,
                   word=inst.expected_word, output=args.output, word_file=word_path), EXIT_OK


def cmd_reduce(args) -> tuple[dict, int]:
    started = time.perf_counter()
    data = _read(args.cnf)
    try:
        phi = parse_dimacs(data.decode("utf-8"))
    except UnicodeDecodeError:
        raise CliError(f"{args.cnf}: not UTF-8 text") from None
    except ValueError as exc:
        raise CliError(f"{args.cnf}: {exc}") from None
    out = reduce(phi)
    names = out.state_names()
    _write(args.output, serialize_pfa(out.pfa, names, comment=f"reduction of {args.cnf}"))
    map_path = args.map or args.output + ".map.json"
    sidecar = {
        "variables": out.variable_count,
        "clauses": out.clause_count,
        "alphabet": list(out.pfa.alphabet),
        "states": out.state_map,
        "s_init": [names[q] for q in out.s_init],
        "s_end": [names[q] for q in out.s_end],
    }
    _write(map_path, json.dumps(sidecar, indent=1) + "\n")
    return _report("reduce", out.pfa, _digest(data), "reduced", started,
                   output=args.output, map=map_path,
                   variables=out.variable_count, clause_count=out.clause_count), EXIT_OK


def cmd_extract(args) -> tuple[str, int]:
    data = _read(args.map)
    try:
        sidecar = json.loads(data)
        n = int(sidecar["variables"])
        alphabet = sidecar["alphabet"]
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"{args.map}: malformed state map ({exc})") from None
    pfa = Pfa.from_transitions(1, alphabet, {})
    word = parse_word(pfa, args.word, args.compact)
    try:
        e = extract_assignment(word, n)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    lits = [str(j) if v else str(-j) for j, v in enumerate(e, 1)]
    return "v " + " ".join(lits) + " 0", EXIT_OK


def cmd_dot(args) -> tuple[dict, int]:
    started = time.perf_counter()
    doc, digest = _load_pfa(args.file)
    pfa = doc.pfa
    if args.letter is not None:
        letter = _letter(pfa, args.letter)
    else:
        totals = total_letters(pfa)
        letter = totals[0] if totals else None
    text = to_dot(pfa, doc.state_names, letter, title=Path(args.file).stem)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
        return None, EXIT_OK
    return _report("dot", pfa, digest, "written", started, output=args.output), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carsync", description="Careful synchronization of partial finite automata."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="cluster structure and synchronization prerequisites")
    p.add_argument("file")
    p.add_argument("--letter", help="letter to decompose (default: first total letter)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("solve", help="shortest carefully synchronizing word")
    p.add_argument("file")
    p.add_argument("--max-visited", type=int, default=DEFAULT_MAX_VISITED)
    p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    p.add_argument("--compact", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a candidate word")
    p.add_argument("file")
    p.add_argument("word", nargs="*", help="letter names (space separated)")
    p.add_argument("--compact", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen-bk", help="write the automaton B_k")
    p.add_argument("k", type=int)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen_bk)

    p = sub.add_parser("reduce", help="compile a 3-CNF formula into a binary PFA")
    p.add_argument("cnf")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--map", help="state map path (default: OUTPUT.map.json)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("extract", help="read an assignment off a synchronizing word")
    p.add_argument("map")
    p.add_argument("word", nargs="*")
    p.add_argument("--compact", action="store_true")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("dot", help="Graphviz export")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--letter", help="mark the cycles of this letter")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # word letters may follow an option such as --compact
    if extra and hasattr(args, "word") and not any(x.startswith("-") for x in extra):
        args.word = list(args.word) + extra
    elif extra:
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        result, code = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if isinstance(result, dict):
        print(json.dumps(result, indent=2))
    elif result is not None:
        print(result)
    return code


if __name__ == "__main__":
    sys.exit(main())
