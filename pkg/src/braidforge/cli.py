"""Command line entry point: ``braidforge <verb> [flags]``.

Exit codes: 0 found / ok, 1 not admitted (or a failed replay),
2 inconclusive, 64 usage error, 65 malformed input data, 74 file I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import grid as G
from .braid import SCHEMA_VERSION, BraidError, format_word, parse_word
from .corpus import MOVE_ALIASES, SpecIncompatible, run_benchmark_suite, standard_specs
from .recognize import (
    FOUND,
    INCONCLUSIVE,
    NOT_ADMITTED,
    RECOGNIZERS,
    MoveCertificate,
    ReplayError,
    SearchBudget,
    related_by_move,
    replay_certificate,
    replay_frames,
)
from .render import render_diagram, write_frames
from .transit import braid_to_grid, grid_to_braid

EXIT_OK = 0
EXIT_NOT_ADMITTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_IO = 74

OUTCOME_EXIT = {FOUND: EXIT_OK, NOT_ADMITTED: EXIT_NOT_ADMITTED, INCONCLUSIVE: EXIT_INCONCLUSIVE}
OUTCOME_LINE = {FOUND: "FOUND", NOT_ADMITTED: "NOT ADMITTED", INCONCLUSIVE: "INCONCLUSIVE"}

MOVES = ("destab", "thin-exchange", "flype", "double-destab")
RELATED_MOVES = ("thin-exchange", "flype", "double-destab")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="braidforge", description="Recognize destabilizations, exchange moves "
                "and flypes of closed braids through arc presentations.")
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)

    def budget_flags(sp):
        sp.add_argument("--max-states", type=_positive, help="state budget (default 100000 "
                        "or BRAIDFORGE_MAX_STATES)")
        sp.add_argument("--max-moves", type=_positive, help="longest certificate explored")
        sp.add_argument("--seed", type=int, default=0, help="seed (only bench draws randomness)")

    r = sub.add_parser("recognize", help="search for a move")
    r.add_argument("--move", required=True, choices=MOVES)
    r.add_argument("--word", required=True, help='braid word such as "n=3: 1 -2"')
    r.add_argument("--trace", help="write the certificate JSON here")
    r.add_argument("--json", action="store_true", help="print the verdict as JSON")
    budget_flags(r)

    rel = sub.add_parser("related", help="are two braids one move apart?")
    rel.add_argument("--move", required=True, choices=RELATED_MOVES)
    rel.add_argument("--word-a", required=True)
    rel.add_argument("--word-b", required=True)
    rel.add_argument("--json", action="store_true")
    budget_flags(rel)

    c = sub.add_parser("convert", help="word to grid JSON or grid JSON to word")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--word")
    src.add_argument("--grid", help="grid JSON file")
    c.add_argument("--output", help="write here instead of stdout")

    rp = sub.add_parser("replay", help="verify a certificate file")
    rp.add_argument("certificate", nargs="?")
    rp.add_argument("--trace", help="certificate file (same as the positional argument)")

    rd = sub.add_parser("render", help="draw a diagram")
    rsrc = rd.add_mutually_exclusive_group(required=True)
    rsrc.add_argument("--word")
    rsrc.add_argument("--grid", help="grid JSON file")
    rsrc.add_argument("--trace", help="certificate file: draws its initial diagram")
    rd.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    rd.add_argument("--output", help="write here instead of stdout")
    rd.add_argument("--frames", help="with --trace: one SVG per replay step into this directory")

    b = sub.add_parser("bench", help="run the seeded benchmark")
    b.add_argument("--move", required=True, choices=MOVES)
    b.add_argument("--count", type=_positive, default=20)
    b.add_argument("--csv", help="CSV report path")
    b.add_argument("--json", dest="json_path", help="JSON report path")
    b.add_argument("--no-timing", action="store_true", help="omit wall times (byte-stable reports)")
    budget_flags(b)
    return p


def _budget(args) -> SearchBudget:
    base = SearchBudget.default()
    return SearchBudget(args.max_states or base.max_states, args.max_moves or base.max_moves)


def _word(text: str):
    try:
        return parse_word(text)
    except BraidError as exc:
        raise DataError(f"bad braid word {text!r}: {exc}") from None


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path} is not JSON: {exc}") from None


def _emit(text: str, path: str | None, out) -> None:
    if path:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror}") from None
    else:
        out.write(text)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _load_certificate(path: str) -> MoveCertificate:
    doc = _read_json(path)
    try:
        return MoveCertificate.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path} is not a certificate: {exc}") from None


def cmd_recognize(args, out) -> int:
    w = _word(args.word)
    v = RECOGNIZERS[MOVE_ALIASES[args.move]](w, _budget(args))
    if args.json:
        out.write(_dump(v.to_json()))
    else:
        line = f"{OUTCOME_LINE[v.outcome]} move={args.move} word=\"{format_word(w)}\" states={v.states_visited}"
        if v.certificate is not None:
            line += f" moves={len(v.certificate.moves)} terminal=\"{v.certificate.claim['terminalWord']}\""
        if "reason" in v.detail:
            line += f" reason=\"{v.detail['reason']}\""
        out.write(line + "\n")
    if args.trace and v.certificate is not None:
        _emit(_dump(v.certificate.to_json()), args.trace, out)
    return OUTCOME_EXIT[v.outcome]


def cmd_related(args, out) -> int:
    a, b = _word(args.word_a), _word(args.word_b)
    v = related_by_move(a, b, MOVE_ALIASES[args.move], _budget(args))
    if args.json:
        out.write(_dump(v.to_json()))
    else:
        line = f"{OUTCOME_LINE[v.outcome]} move={args.move} states={v.states_visited}"
        if "reason" in v.detail:
            line += f" reason=\"{v.detail['reason']}\""
        if "image" in v.detail:
            line += f" via=\"{v.detail['representative']}\" image=\"{v.detail['image']}\""
        out.write(line + "\n")
    return OUTCOME_EXIT[v.outcome]


def cmd_convert(args, out) -> int:
    if args.word is not None:
        g, trace = braid_to_grid(_word(args.word))
        doc = G.presentation_to_json(g)
        doc["source"] = trace.to_json()
        _emit(_dump(doc), args.output, out)
    else:
        g, _ = _grid_from_file(args.grid)
        w, _ = grid_to_braid(g)
        _emit(format_word(w) + "\n", args.output, out)
    return EXIT_OK


def _grid_from_file(path: str):
    doc = _read_json(path)
    try:
        return G.presentation_from_json(doc)
    except G.GridError as exc:
        raise DataError(f"{path}: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path} is not a grid document: {exc}") from None


def cmd_replay(args, out) -> int:
    path = args.certificate or args.trace
    if not path:
        raise UsageError("replay needs a certificate path")
    cert = _load_certificate(path)
    try:
        replay_certificate(cert)
    except ReplayError as exc:
        out.write(f"FAILED {type(exc).__name__}: {exc}\n")
        return EXIT_NOT_ADMITTED
    out.write(f"OK moves={len(cert.moves)} claim={cert.claim.get('move')}\n")
    return EXIT_OK


def cmd_render(args, out) -> int:
    if args.frames and not args.trace:
        raise UsageError("--frames needs --trace")
    if args.word is not None:
        g, _ = braid_to_grid(_word(args.word))
        sc = None
    elif args.grid is not None:
        g, sc = _grid_from_file(args.grid)
    else:
        cert = _load_certificate(args.trace)
        g, sc = cert.initial_grid, cert.config
        if args.frames:
            try:
                paths = write_frames(replay_frames(cert), args.frames)
            except G.PreconditionViolated as exc:
                raise DataError(f"certificate does not replay: {exc}") from None
            out.write(f"wrote {len(paths)} frames to {args.frames}\n")
            return EXIT_OK
    _emit(render_diagram(g, args.format, sc), args.output, out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    try:
        specs = standard_specs(args.move, args.count, args.seed)
    except SpecIncompatible as exc:
        raise DataError(str(exc)) from None
    rep = run_benchmark_suite(specs, _budget(args))
    timing = not args.no_timing
    if args.csv:
        _emit(rep.to_csv(timing), args.csv, out)
    if args.json_path:
        _emit(rep.to_json(timing), args.json_path, out)
    summary = rep.summary()
    out.write(json.dumps({"schemaVersion": SCHEMA_VERSION, "move": args.move,
                          "verdicts": summary["verdicts"], "instances": summary["instances"]},
                         sort_keys=True) + "\n")
    return EXIT_OK


COMMANDS = {"recognize": cmd_recognize, "related": cmd_related, "convert": cmd_convert,
            "replay": cmd_replay, "render": cmd_render, "bench": cmd_bench}


def run_cli(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.verb:
            raise UsageError("a verb is required: " + ", ".join(COMMANDS))
        return COMMANDS[args.verb](args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except DataError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DATA
    except OSError as exc:
        err.write(f"i/o error: {exc}\n")
        return EXIT_IO


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
