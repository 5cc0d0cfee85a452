"""Command-line entry point: ``phoml check | normalize | props | examples``."""

from __future__ import annotations

import argparse
import difflib
import sys
from importlib import resources
from pathlib import Path

from .frontend.parser import ParseError
from .frontend.printer import print_expr
from .frontend.script import CheckDirective, NormalizeDirective, ScriptError, parse, run as run_script
from .reduction import DEFAULT_FUEL, reduce

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
BUNDLED = ("sec3_1.phoml", "sec3_2.phoml")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def bundled_dir() -> Path:
    return Path(str(resources.files("phoml") / "examples"))


def resolve(path: str) -> Path:
    """A path on disk, or failing that a bundled script of the same name."""
    p = Path(path)
    if p.exists():
        return p
    candidate = bundled_dir() / p.name
    if candidate.exists():
        return candidate
    raise FileNotFoundError(path)


def load(path: str):
    file = resolve(path)
    return parse(file.read_text(), file.name)


def cmd_check(args, out, err) -> int:
    script = load(args.file)
    try:
        for r in run_script(script, args.fuel):
            print("\n".join(r.lines), file=out)
    except ScriptError as exc:
        print(exc.render(), file=err)
        return EXIT_FAIL
    return EXIT_OK


def cmd_normalize(args, out, err) -> int:
    script = load(args.file)
    d = script.definition(args.name)
    if d is None:
        print(f"error: no definition named {args.name!r} in {args.file}", file=err)
        return EXIT_USAGE
    outcome = reduce(d.expr, args.fuel, trace=args.trace)
    if args.trace:
        print(print_expr(d.expr), file=out)
        for i, s in enumerate(outcome.trace, 1):
            cong = "".join(f"cong-{slot} " for slot in s.position)
            print(f"[{i}] {cong}{s.rule}", file=out)
            print(f"    {print_expr(s.result)}", file=out)
    print(f"status={outcome.status.value} steps={outcome.steps}", file=out)
    print(print_expr(outcome.result), file=out)
    return EXIT_OK


def cmd_props(args, out, err) -> int:
    from .harness import properties
    cases = args.cases if args.cases is not None else properties.PROFILES[args.profile]
    names = [args.suite] if args.suite else list(properties.REGISTRY)
    unknown = [n for n in names if n not in properties.REGISTRY]
    if unknown:
        print(f"error: unknown suite {unknown[0]!r}; known: {', '.join(properties.REGISTRY)}", file=err)
        return EXIT_USAGE
    failed = False
    for name in names:
        verdict = properties.run_property(name, cases, seed=args.seed)
        print("\n".join(verdict.lines()), file=out)
        failed |= bool(verdict.failures)
    return EXIT_FAIL if failed else EXIT_OK


def directive_outputs(script) -> list[tuple[str, str]]:
    """``(golden file name, text)`` for every directive of a script, in order."""
    outputs, n = [], 0
    for r in run_script(script):
        if r.is_directive:
            n += 1
            kind = "check" if isinstance(r.item, CheckDirective) else "normalize"
            outputs.append((f"{n:02d}-{kind}.out", "\n".join(r.lines) + "\n"))
    return outputs


def cmd_examples(args, out, err) -> int:
    golden = bundled_dir() / "golden"
    status = EXIT_OK
    for name in BUNDLED:
        script = parse((bundled_dir() / name).read_text(), name)
        try:
            outputs = directive_outputs(script)
        except ScriptError as exc:
            print(f"FAIL {name}: {exc.render()}", file=err)
            status = EXIT_FAIL
            continue
        stem = golden / Path(name).stem
        if args.bless:
            stem.mkdir(parents=True, exist_ok=True)
            for fname, text in outputs:
                (stem / fname).write_text(text)
        mismatches = 0
        expected_files = sorted(p.name for p in stem.glob("*.out")) if stem.exists() else []
        if expected_files != [f for f, _ in outputs]:
            print(f"FAIL {name}: golden files {expected_files} do not match directives", file=err)
            mismatches += 1
        for fname, text in outputs:
            path = stem / fname
            expected = path.read_text() if path.exists() else ""
            if expected != text:
                mismatches += 1
                diff = difflib.unified_diff(expected.splitlines(True), text.splitlines(True),
                                            str(path), "actual")
                err.writelines(diff)
        print(f"{'OK' if not mismatches else 'FAIL'} {name} directives={len(outputs)}", file=out)
        if mismatches:
            status = EXIT_FAIL
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="phoml", description="Typecheck and normalize proof scripts; run the metatheory suites.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="typecheck every statement of a script")
    c.add_argument("file")
    c.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    c.set_defaults(func=cmd_check)

    n = sub.add_parser("normalize", help="normalize a definition")
    n.add_argument("file")
    n.add_argument("--name", required=True)
    n.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    n.add_argument("--trace", action="store_true")
    n.set_defaults(func=cmd_normalize)

    p = sub.add_parser("props", help="run metatheory property suites")
    p.add_argument("--suite")
    p.add_argument("--cases", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", choices=("ci", "full"), default="ci")
    p.set_defaults(func=cmd_props)

    e = sub.add_parser("examples", help="run the bundled scripts against their golden outputs")
    e.add_argument("--bless", action="store_true", help="rewrite the golden files")
    e.set_defaults(func=cmd_examples)
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "fuel", 1) < 1:
        print("error: --fuel must be positive", file=err)
        return EXIT_USAGE
    try:
        return args.func(args, out, err)
    except ParseError as exc:
        print(f"PARSE ERROR {exc}", file=err)
        return EXIT_USAGE
    except (FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: cannot read {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
