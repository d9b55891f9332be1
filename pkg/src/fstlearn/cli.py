"""Command-line surface and the text formats for machines and samples.

Machine files: a header ``fst <input chars> <output chars> <initial id>``
followed by ``state <id> [accept]`` lines and ``trans <src> <sym> <dst>
<output|->`` lines, where ``-`` stands for the empty string (also used for an
empty alphabet field).  Sample files: one ``input TAB output`` pair per line,
empty field meaning the empty string.

Exit codes: 0 success, 1 domain failure (rejected input, failed property,
inconsistent data), 2 integrity failure (parse error, non-functional machine).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, TextIO

from . import ambiguity, oracle, transform
from .core import Transducer, transduce, trim, validate
from .errors import ConfigurationError, ConflictError, FormatError, InconsistencyError
from .infer import LearnerConfig, infer


def serialize_machine(t: Transducer, epsilon_output: Optional[str] = None) -> str:
    def chars(alphabet):
        return "".join(sorted(alphabet)) or "-"

    lines = [
        f"fst {chars(t.input_alphabet)} {chars(t.output_alphabet)} {t.initial}"
    ]
    for q in sorted(t.states):
        lines.append(f"state {q} accept" if q in t.accepting else f"state {q}")
    for tr in t.transitions:
        lines.append(f"trans {tr.src} {tr.symbol} {tr.dst} {tr.out or '-'}")
    if epsilon_output is not None:
        lines.append(f"epsilon-output {epsilon_output or '-'}")
    return "\n".join(lines) + "\n"


def parse_machine(text: str) -> tuple[Transducer, Optional[str]]:
    states: list[int] = []
    accepting: list[int] = []
    transitions: list[tuple] = []
    header = None
    epsilon_output = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        try:
            if fields[0] == "fst":
                if header is not None:
                    raise FormatError(f"line {lineno}: duplicate header")
                if len(fields) != 4:
                    raise FormatError(f"line {lineno}: bad header")
                header = (
                    set(fields[1]) - {"-"} if fields[1] != "-" else set(),
                    set(fields[2]) - {"-"} if fields[2] != "-" else set(),
                    int(fields[3]),
                )
            elif fields[0] == "state":
                states.append(int(fields[1]))
                if len(fields) > 2:
                    if fields[2] != "accept":
                        raise FormatError(f"line {lineno}: bad state flag")
                    accepting.append(int(fields[1]))
            elif fields[0] == "trans":
                if len(fields) != 5:
                    raise FormatError(f"line {lineno}: bad transition")
                out = "" if fields[4] == "-" else fields[4]
                transitions.append((int(fields[1]), fields[2], int(fields[3]), out))
            elif fields[0] == "epsilon-output":
                epsilon_output = "" if fields[1] == "-" else fields[1]
            else:
                raise FormatError(f"line {lineno}: unknown record {fields[0]!r}")
        except (ValueError, IndexError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if header is None:
        raise FormatError("missing fst header line")
    machine = Transducer(states, header[0], header[1], header[2], accepting, transitions)
    problems = validate(machine)
    if problems:
        raise FormatError("; ".join(v.detail for v in problems))
    return machine, epsilon_output


def serialize_samples(pairs) -> str:
    return "".join(f"{inp}\t{out}\n" for inp, out in pairs)


def parse_samples(text: str) -> list[tuple[str, str]]:
    pairs = []
    seen: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        if raw == "":
            continue
        if raw.count("\t") != 1:
            raise FormatError(f"line {lineno}: expected exactly one tab")
        inp, out = raw.split("\t")
        if inp in seen and seen[inp] != out:
            raise ConflictError(inp, seen[inp], out)
        seen[inp] = out
        pairs.append((inp, out))
    return pairs


def export_dot(t: Transducer) -> str:
    lines = ["digraph fst {", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in sorted(t.states):
        shape = "doublecircle" if q in t.accepting else "circle"
        lines.append(f'  q{q} [shape={shape}, label="{q}"];')
    lines.append(f"  __start -> q{t.initial};")
    for tr in t.transitions:
        out = tr.out if tr.out else "ε"
        lines.append(f'  q{tr.src} -> q{tr.dst} [label="{tr.symbol}/{out}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- commands ----------------------------------------------------------------


def _load_machine(path: str) -> tuple[Transducer, Optional[str]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_machine(fh.read())


def cmd_learn(args) -> int:
    try:
        with open(args.samples, "r", encoding="utf-8") as fh:
            pairs = parse_samples(fh.read())
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConflictError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    cfg = LearnerConfig(max_merge_passes=args.max_passes, emit_trace=args.trace)
    try:
        model = infer(pairs, cfg)
    except (ConflictError, InconsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(serialize_machine(model.machine, model.epsilon_output))
    return 0


def cmd_eval(args) -> int:
    try:
        machine, epsilon_output = _load_machine(args.machine)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.input == "" and epsilon_output is not None:
        print(epsilon_output)
        return 0
    outputs = sorted(transduce(machine, args.input))
    if not outputs:
        print("REJECT")
        return 1
    if len(outputs) > 1:
        for out in outputs:
            print(out)
        return 2
    print(outputs[0])
    return 0


def cmd_check(args) -> int:
    try:
        machine, _ = _load_machine(args.machine)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    ok = True
    if args.functional:
        report = oracle.check_functional_up_to(machine, args.max_len)
        ok &= _print_report(report)
    if args.ambiguity:
        st = ambiguity.square_reach(trim(machine))
        witness = ambiguity.find_ambiguity(trim(machine), st)
        if witness is None:
            print("ambiguity: pass")
        else:
            ok = False
            print(f"ambiguity: FAIL input={witness.path_a.input_word!r}")
    if args.lpp:
        report = oracle.check_local_prefix_preservation_up_to(
            trim(machine), args.max_len
        )
        ok &= _print_report(report)
    return 0 if ok else 1


def _print_report(report: oracle.BoundedCheckReport) -> bool:
    if report.verdict:
        print(f"{report.property_name}: pass (bound {report.bound})")
    else:
        print(
            f"{report.property_name}: FAIL (bound {report.bound}) "
            f"counterexample={report.counterexample!r}"
        )
    return report.verdict


def cmd_transform(args) -> int:
    try:
        machine, epsilon_output = _load_machine(args.machine)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.totalize is not None:
            result = transform.totalize(machine, args.totalize)
        elif args.disambiguate:
            result = transform.disambiguate(machine)
        else:
            result = trim(machine)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(serialize_machine(result, epsilon_output))
    return 0


def cmd_gen_informant(args) -> int:
    try:
        machine, _ = _load_machine(args.machine)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        pairs = oracle.generate_informant(machine, args.max_len)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(serialize_samples(pairs))
    return 0


def cmd_export_dot(args) -> int:
    try:
        machine, _ = _load_machine(args.machine)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(export_dot(machine))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fstlearn",
        description="Learn and manipulate nondeterministic functional transducers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn a machine from a sample file")
    p.add_argument("samples")
    p.add_argument("output")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--max-passes", type=int, default=1)
    p.set_defaults(fn=cmd_learn)

    p = sub.add_parser("eval", help="run a machine on one input")
    p.add_argument("machine")
    p.add_argument("--input", required=True)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("check", help="check machine properties")
    p.add_argument("machine")
    p.add_argument("--functional", action="store_true")
    p.add_argument("--ambiguity", action="store_true")
    p.add_argument("--lpp", action="store_true")
    p.add_argument("--max-len", type=int, default=6)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("transform", help="apply a closure construction")
    p.add_argument("machine")
    p.add_argument("output")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--totalize", metavar="SYM")
    group.add_argument("--disambiguate", action="store_true")
    group.add_argument("--trim", action="store_true")
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("gen-informant", help="dump the bounded relation")
    p.add_argument("machine")
    p.add_argument("output")
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(fn=cmd_gen_informant)

    p = sub.add_parser("export-dot", help="print a graph description")
    p.add_argument("machine")
    p.set_defaults(fn=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
