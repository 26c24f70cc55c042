"""Operator entry points for every pipeline stage and the evaluation harness.

Exit status: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import metrics as metrics_mod
from .errors import PPTSError, UsageError
from .gateway import GatewayConfig, serve
from .llm import BackendConfig, ChatMessage, complete
from .recovery import recover
from .sanitizer import SurrogateMap, sanitize


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_input(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")


def _defender_from_args(args) -> metrics_mod.DefenderSetup:
    if getattr(args, "config", None):
        cfg = GatewayConfig.from_yaml(args.config)
        types = [t for t in cfg.types]
        from .sanitizer import privacy_types

        return metrics_mod.DefenderSetup(
            types=privacy_types(types),
            config=cfg.sanitizer,
            kb=cfg.kb,
            seed=args.seed if args.seed is not None else cfg.seed,
            max_retries=cfg.max_retries,
            enabled=not getattr(args, "no_sanitize", False),
            reasonability=not getattr(args, "no_reasonability", False),
        )
    defender = corpus_mod.default_defender(
        seed=args.seed if args.seed is not None else 42,
        enabled=not getattr(args, "no_sanitize", False),
        reasonability=not getattr(args, "no_reasonability", False),
    )
    return defender


def _select_types(defender: metrics_mod.DefenderSetup, names: list[str]):
    known = {t.name for t in defender.types}
    unknown = [n for n in names if n not in known]
    if unknown:
        raise UsageError(f"unknown privacy type(s): {', '.join(unknown)}")
    return [t for t in defender.types if t.name in names]


def _backend_from_args(args) -> BackendConfig:
    choice = getattr(args, "backend", None) or "mock-echo"
    if choice == "mock-echo":
        return BackendConfig(kind="mock-echo")
    if choice == "mock-extract":
        return corpus_mod.extraction_backend()
    if choice == "remote":
        if not getattr(args, "config", None):
            raise UsageError("remote backend requires --config with backend settings")
        return GatewayConfig.from_yaml(args.config).backend
    raise UsageError(f"unknown backend {choice!r}")


def cmd_sanitize(args) -> int:
    defender = _defender_from_args(args)
    types = _select_types(defender, args.types.split(","))
    text = _read_input(args.infile)
    outcome = sanitize(
        text, types, defender.config, defender.kb, defender.seed, defender.max_retries,
        reasonability=defender.reasonability,
    )
    sys.stdout.write(outcome.sanitized)
    if args.map_out:
        Path(args.map_out).write_text(
            json.dumps({"entries": outcome.mapping.to_records()}, indent=2, ensure_ascii=False)
            + "\n",
            encoding="utf-8",
        )
    return 0


def cmd_recover(args) -> int:
    text = _read_input(args.infile)
    records = json.loads(Path(args.map).read_text(encoding="utf-8"))["entries"]
    mapping = SurrogateMap.from_records(records)
    sys.stdout.write(recover(text, mapping).text)
    return 0


def cmd_chat(args) -> int:
    defender = _defender_from_args(args)
    types = _select_types(defender, args.types.split(","))
    backend = _backend_from_args(args)
    mapping = SurrogateMap()
    print("Interactive privacy-filtered chat. Ctrl-D to quit.")
    while True:
        try:
            line = input("you> ")
        except EOFError:
            print()
            return 0
        if not line.strip():
            continue
        outcome = sanitize(
            line, types, defender.config, defender.kb, defender.seed, defender.max_retries,
            reasonability=defender.reasonability, initial_map=mapping,
        )
        mapping = outcome.mapping
        reply = complete([ChatMessage("user", outcome.sanitized)], backend)
        restored = recover(reply, mapping).text
        print(f"transmitted> {outcome.sanitized}")
        print(f"raw reply>   {reply}")
        print(f"restored>    {restored}")


def cmd_eval(args) -> int:
    corpus = metrics_mod.read_corpus(args.corpus)
    defender = _defender_from_args(args)
    backend = _backend_from_args(args)
    attacker = corpus_mod.default_attacker()
    report = metrics_mod.evaluate(corpus, defender, backend, attacker)
    Path(args.report).write_text(report.to_json() + "\n", encoding="utf-8")
    print(report.render_table())
    return 0


def cmd_attack(args) -> int:
    corpus = metrics_mod.read_corpus(args.corpus)
    sanitized_by_id = {}
    for line in Path(args.sanitized).read_text(encoding="utf-8").splitlines():
        if line.strip():
            record = json.loads(line)
            sanitized_by_id[record["id"]] = record["text"]
    missing = [e.id for e in corpus if e.id not in sanitized_by_id]
    if missing:
        raise UsageError(f"sanitized file lacks entries for: {', '.join(missing[:5])}")
    sanitized = [sanitized_by_id[e.id] for e in corpus]
    attacker = corpus_mod.default_attacker()
    defender = _defender_from_args(args)
    results = metrics_mod.attack_only(corpus, sanitized, args.level, attacker, defender.types)
    print(f"{'id':<12} {'success':<8} recovered")
    for result in results:
        recovered = ", ".join(f"{t}:{v}" for v, t in sorted(result.recovered_values)) or "-"
        print(f"{result.example_id:<12} {str(result.success):<8} {recovered}")
    return 0


def cmd_serve(args) -> int:
    config = GatewayConfig.from_yaml(args.config) if args.config else GatewayConfig.default()
    serve(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ppts", description="Privacy-preserving chat gateway and evaluation harness")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="gateway-style YAML config (defaults to packaged data)")
        p.add_argument("--seed", type=int, default=None, help="override the sanitizer seed")

    p = sub.add_parser("sanitize", help="sanitize a text file")
    common(p)
    p.add_argument("--in", dest="infile", required=True, help="input file, or - for stdin")
    p.add_argument("--types", required=True, help="comma-separated privacy types")
    p.add_argument("--map-out", help="write the plaintext-ciphertext map here (JSON)")
    p.set_defaults(func=cmd_sanitize)

    p = sub.add_parser("recover", help="restore private values in a response file")
    common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--map", required=True, help="map JSON produced by sanitize")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("chat", help="interactive filtered chat loop")
    common(p)
    p.add_argument("--types", required=True)
    p.add_argument("--backend", default="mock-echo", help="mock-echo | mock-extract | remote")
    p.set_defaults(func=cmd_chat)

    p = sub.add_parser("eval", help="run the evaluation harness over a corpus")
    common(p)
    p.add_argument("--corpus", required=True, help="line-delimited JSON corpus")
    p.add_argument("--report", required=True, help="where to write the JSON report")
    p.add_argument("--backend", default="mock-extract")
    p.add_argument("--no-sanitize", action="store_true", help="disable the privacy filter")
    p.add_argument("--no-reasonability", action="store_true", help="disable the consistency check")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("attack", help="run a simulated attack over sanitized texts")
    common(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--sanitized", required=True, help="line-delimited JSON: {id, text}")
    p.add_argument("--level", required=True, choices=["literal", "inference"])
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("serve", help="run the gateway until signaled")
    p.add_argument("--config", help="gateway YAML config (defaults to packaged data)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PPTSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
