"""Command-line entry point.

Exit status is 0 on success, 1 on data errors and 2 on usage errors.
Text input comes from a positional argument, ``--file`` or standard input,
in that order of preference; at most one of the first two may be given.
"""

from __future__ import annotations

import argparse
import logging
import sys

from asciisub import baselines
from asciisub.cipher import KeySchedule, derive_keys, encrypt
from asciisub.codec import MODES, get_mode
from asciisub.cryptanalysis import (
    DEFAULT_LIMIT,
    LETTERS,
    ciphertext_only_attack,
    diffusion_report,
    known_plaintext_attack,
    load_frequency_table,
)
from asciisub.envelope import KeyTransport, decode_text, encode_text, seal, unseal
from asciisub.errors import AsubError


class UsageError(Exception):
    pass


def parse_keys(spec: str) -> KeySchedule:
    try:
        keys = tuple(int(k) for k in spec.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"keys must be comma-separated integers, got {spec!r}") from None
    try:
        return KeySchedule(keys)
    except AsubError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def format_keys(keys) -> str:
    return " ".join(f"K{i}={'?' if k is None else k}" for i, k in enumerate(keys, 1))


def _add_input(p: argparse.ArgumentParser, what: str = "text") -> None:
    p.add_argument("text", nargs="?", help=f"{what} (default: read --file or standard input)")
    p.add_argument("-f", "--file", help=f"read {what} from this file")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", help="write to this file instead of standard output")


def _add_mode(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=sorted(MODES), default="paper", help="codec mode (default: paper)")


def _read_input(args: argparse.Namespace) -> str:
    if args.text is not None and args.file is not None:
        raise UsageError("give the input either as an argument or with --file, not both")
    if args.text is not None:
        return args.text
    if args.file is not None:
        with open(args.file, encoding="utf-8", newline="") as fh:
            return fh.read()
    return sys.stdin.read()


def _read_envelope(args: argparse.Namespace):
    text = _read_input(args)
    # Shell command substitution strips the final newline.
    if text and not text.endswith("\n"):
        text += "\n"
    return decode_text(text)


def _write(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_encrypt(args: argparse.Namespace) -> int:
    config = get_mode(args.mode)
    text = _read_input(args)
    schedule = args.keys if args.keys is not None else derive_keys(text, config)
    transport = KeyTransport.EXTERNAL if args.external else KeyTransport.IN_BAND
    env = seal(encrypt(text, schedule, config), schedule, transport)
    if args.external:
        print(format_keys(schedule.keys), file=sys.stderr)
    _write(args, encode_text(env))
    return 0


def cmd_decrypt(args: argparse.Namespace) -> int:
    env = _read_envelope(args)
    if env.key_transport is KeyTransport.EXTERNAL and args.keys is None:
        raise UsageError("envelope carries no keys; pass --keys K1,K2,...")
    _write(args, unseal(env, args.keys))
    return 0


def cmd_keys(args: argparse.Namespace) -> int:
    schedule = derive_keys(_read_input(args), get_mode(args.mode))
    _write(args, format_keys(schedule.keys) + "\n")
    return 0


def cmd_attack(args: argparse.Namespace) -> int:
    env = _read_envelope(args)
    config = get_mode(env.mode_name)
    if args.kind == "known-plaintext":
        recovered = known_plaintext_attack(args.plaintext, env.values, config, n_keys=args.n_keys)
        _write(args, format_keys(recovered.keys) + "\n")
        return 0

    freq = load_frequency_table(args.freq)
    report = ciphertext_only_attack(
        env.values, config, freq, n_keys=args.n_keys, alphabet=args.alphabet, limit=args.limit
    )
    for note in report.notes:
        print(f"# {note}", file=sys.stderr)
    rows = report.candidates if args.all else report.candidates[: args.top]
    lines = ["rank\tschedule\tscore\tplaintext"]
    for rank, c in enumerate(rows, 1):
        keys = ",".join("?" if k is None else str(k) for k in c.keys)
        lines.append(f"{rank}\t{keys}\t{c.score:.6f}\t{c.plaintext}")
    _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    env = _read_envelope(args)
    report = diffusion_report(args.plaintext, env.values)
    lines = ["symbol\tdistinct\tvalues"]
    for symbol in sorted(report.mapping):
        counts = report.mapping[symbol]
        values = ",".join(f"{v}x{n}" for v, n in sorted(counts.items()))
        lines.append(f"{symbol!r}\t{len(counts)}\t{values}")
    lines.append(f"max_distinct\t{report.max_distinct}")
    _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_baseline(args: argparse.Namespace) -> int:
    text = _read_input(args).rstrip("\n")
    if args.cipher == "mono":
        fn = baselines.mono_decrypt if args.decrypt else baselines.mono_encrypt
        out = fn(text, baselines.ShiftKey(args.shift))
    else:
        fn = baselines.keyword_decrypt if args.decrypt else baselines.keyword_encrypt
        out = fn(text, baselines.KeywordKey(args.key))
    _write(args, out + "\n")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from asciisub import netdemo

    netdemo.serve(args.port, get_mode(args.mode), host=args.host, external_keys=args.external_keys)
    return 0


def cmd_send(args: argparse.Namespace) -> int:
    from asciisub import netdemo

    reply = netdemo.send(
        args.addr, args.message, get_mode(args.mode), external_keys=args.external_keys, timeout=args.timeout
    )
    print(reply)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="asciisub", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("encrypt", help="encrypt text into a text envelope")
    _add_input(p)
    _add_output(p)
    _add_mode(p)
    p.add_argument("--keys", type=parse_keys, help="explicit schedule K1,K2,... (default: derive from text)")
    p.add_argument("--external", action="store_true", help="leave keys out of the envelope (printed to stderr)")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a text envelope")
    _add_input(p, "envelope")
    _add_output(p)
    p.add_argument("--keys", type=parse_keys, help="schedule K1,K2,... (required for external transport)")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("keys", help="print the keys derived from a text")
    _add_input(p)
    _add_output(p)
    _add_mode(p)
    p.set_defaults(func=cmd_keys)

    attack = sub.add_parser("attack", help="recover keys from an envelope")
    kinds = attack.add_subparsers(dest="kind", required=True, metavar="KIND")
    p = kinds.add_parser("known-plaintext", help="keys from a matching plaintext")
    _add_input(p, "envelope")
    _add_output(p)
    p.add_argument("--plaintext", required=True, help="plaintext matching the envelope")
    p.add_argument("--n-keys", type=int, default=2, help="number of keys in the schedule (default: 2)")
    p.set_defaults(func=cmd_attack)
    p = kinds.add_parser("ciphertext-only", help="rank every feasible schedule by letter frequency")
    _add_input(p, "envelope")
    _add_output(p)
    p.add_argument("--n-keys", type=int, default=2, help="number of keys in the schedule (default: 2)")
    p.add_argument("--alphabet", default=LETTERS, help="plaintext alphabet to search (default: A-Z)")
    p.add_argument("--freq", help="letter frequency table file (default: bundled English)")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="maximum candidate schedules")
    p.add_argument("--top", type=int, default=10, help="rows to print (default: 10)")
    p.add_argument("--all", action="store_true", help="print every candidate")
    p.set_defaults(func=cmd_attack)

    analyze = sub.add_parser("analyze", help="measure ciphertext properties")
    kinds = analyze.add_subparsers(dest="kind", required=True, metavar="KIND")
    p = kinds.add_parser("diffusion", help="ciphertext values seen per plaintext symbol")
    _add_input(p, "envelope")
    _add_output(p)
    p.add_argument("--plaintext", required=True, help="plaintext matching the envelope")
    p.set_defaults(func=cmd_analyze)

    baseline = sub.add_parser("baseline", help="shift and keyword reference ciphers")
    kinds = baseline.add_subparsers(dest="cipher", required=True, metavar="CIPHER")
    p = kinds.add_parser("mono", help="fixed shift, uppercase output")
    _add_input(p)
    _add_output(p)
    p.add_argument("--shift", type=int, required=True, help="shift 0-25")
    p.add_argument("-d", "--decrypt", action="store_true")
    p.set_defaults(func=cmd_baseline)
    p = kinds.add_parser("keyword", help="repeating keyword shift, a=1")
    _add_input(p)
    _add_output(p)
    p.add_argument("--key", required=True, help="lowercase keyword")
    p.add_argument("-d", "--decrypt", action="store_true")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("serve", help="run the TCP receiver")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--host", default="127.0.0.1")
    _add_mode(p)
    p.add_argument("--external-keys", type=parse_keys, help="shared schedule K1,K2,... instead of in-band keys")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("send", help="send one message to a receiver")
    p.add_argument("--addr", required=True, help="HOST:PORT")
    p.add_argument("--message", required=True)
    _add_mode(p)
    p.add_argument("--external-keys", type=parse_keys, help="shared schedule K1,K2,... instead of in-band keys")
    p.add_argument("--timeout", type=float, default=5.0, help="seconds (default: 5)")
    p.set_defaults(func=cmd_send)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose or args.command == "serve" else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except AsubError as exc:
        print(f"{parser.prog}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"{parser.prog}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
