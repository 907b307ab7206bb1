"""Command-line front end.

Exit codes: 0 completed as expected, 1 usage or configuration error,
2 verification or attack outcome contrary to expectation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .attacks import CorruptionSpec
from .errors import AuditError, ConfigError, CorruptTranscript, MismatchOnReplay
from .harness import state as state_dir
from .harness.config import ExperimentConfig
from .harness.runner import load_world, replay, run_experiment, run_trial

EXIT_OK, EXIT_USAGE, EXIT_CONTRARY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _state(args) -> Path:
    return Path(args.state)


def cmd_setup(args) -> int:
    keys = state_dir.setup(_state(args), args.backend, args.seed)
    print(f"keys for backend {args.backend} written to {args.state}")
    print(f"v = {keys.v.hex()[:32]}...")
    return EXIT_OK


def cmd_upload(args) -> int:
    path = _state(args)
    if args.file is not None:
        suite, _ = state_dir.load_suite(path)
        blocks = state_dir.blocks_from_bytes(suite, Path(args.file).read_bytes(), args.blocks)
        file = state_dir.upload(path, blocks=blocks)
    else:
        file = state_dir.upload(path, n=args.blocks, domain=args.domain)
    print(f"uploaded {file.n} blocks, file name {file.name:x}")
    return EXIT_OK


def cmd_corrupt(args) -> int:
    spec = CorruptionSpec.from_text(Path(args.spec).read_text())
    state_dir.corrupt(_state(args), spec)
    print(f"corrupted {len(spec.deltas)} block(s), spec digest {spec.digest()}")
    return EXIT_OK


def _state_trial(args, protocol: str, attack: str) -> int:
    path = _state(args)
    suite, _ = state_dir.load_suite(path)
    _, stored, _ = state_dir.load_files(path, suite)
    backend = "real" if suite.backend_id == "real" else suite.backend_id
    config = ExperimentConfig(protocol=protocol, n=stored.n, c=min(args.c, stored.n), trials=1,
                              attack=attack, backend=backend, seed=args.seed)
    world = load_world(path, config)
    result = run_trial(config, world, 0)
    out = Path(args.out) if args.out else path / "transcripts" / f"{args.command}-{protocol}-{attack}-{args.seed}.audlt"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(result.transcript.to_text())
    print(f"verdict: {'accept' if result.accepted else 'reject'}")
    print(f"storage corrupted: {result.storage_corrupted} (challenged blocks: {result.challenged_corrupted})")
    if result.error:
        print(f"error: {result.error}")
    print(f"transcript: {out}")
    return EXIT_OK if result.as_expected else EXIT_CONTRARY


def cmd_audit(args) -> int:
    return _state_trial(args, args.protocol, "none")


def cmd_attack(args) -> int:
    if args.scenario == 1 and args.protocol != "tpa":
        raise ConfigError("scenario 1 forgery is defined for the tpa protocol only")
    return _state_trial(args, args.protocol, f"scenario{args.scenario}")


def _print_summary(summary) -> None:
    print(summary.to_text(), end="")
    if summary.out_dir is not None:
        print(f"transcripts: {summary.out_dir}")


def cmd_guess(args) -> int:
    config = ExperimentConfig(
        protocol=args.protocol, n=args.n, c=args.c, domain=args.domain_size, trials=args.trials,
        attack=f"guess-{args.protocol}", guess_domain=args.domain_size, exhaustive=not args.first_hit,
        backend=args.backend, seed=args.seed,
    )
    summary = run_experiment(config, args.out)
    _print_summary(summary)
    for t, res in enumerate(summary.results):
        g = res.guess
        if g is None:
            print(f"trial {t}: no candidate accepted")
        else:
            print(f"trial {t}: {len(g.accepted)}/{g.tried} accepted, first {g.recovered}, unique={g.unique}")
    return EXIT_OK if summary.unexpected == 0 else EXIT_CONTRARY


def cmd_experiment(args) -> int:
    config = ExperimentConfig.load(args.config)
    summary = run_experiment(config, args.out)
    _print_summary(summary)
    return EXIT_OK if summary.unexpected == 0 else EXIT_CONTRARY


def cmd_replay(args) -> int:
    try:
        report = replay(args.transcript)
    except MismatchOnReplay as exc:
        print(f"MISMATCH: {exc}")
        if exc.report is not None:
            print(exc.report.to_text(), end="")
        return EXIT_CONTRARY
    except CorruptTranscript as exc:
        print(f"CORRUPT: {exc}")
        return EXIT_CONTRARY
    print(report.to_text(), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="auditlab", description="Public auditing protocols and attacks on them.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_state(p):
        p.add_argument("--state", default="auditlab-state", help="state directory (default: %(default)s)")
        return p

    p = with_state(sub.add_parser("setup", help="generate user keys"))
    p.add_argument("--backend", default="real", help="real, mock or mock:<prime>")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_setup)

    p = with_state(sub.add_parser("upload", help="outsource a file to the server role"))
    p.add_argument("--file", help="read blocks from this file instead of generating them")
    p.add_argument("--blocks", type=int, required=True, help="number of blocks n")
    p.add_argument("--domain", type=int, help="generated block values lie in [0, DOMAIN)")
    p.set_defaults(func=cmd_upload)

    p = with_state(sub.add_parser("corrupt", help="modify the server's copy"))
    p.add_argument("--spec", required=True, help="corruption spec: lines of index=delta_hex")
    p.set_defaults(func=cmd_corrupt)

    for name, helptext in (("audit", "run one audit"), ("attack", "run one audit through a forging interceptor")):
        p = with_state(sub.add_parser(name, help=helptext))
        p.add_argument("--protocol", choices=("tpa", "zkpa"), default="tpa")
        p.add_argument("--c", type=int, default=16, help="challenged blocks")
        p.add_argument("--seed", type=int, default=0, help="seed for challenge and blinding")
        p.add_argument("--out", help="transcript path")
        if name == "attack":
            p.add_argument("--scenario", type=int, choices=(1, 2), required=True)
        p.set_defaults(func=cmd_audit if name == "audit" else cmd_attack)

    p = sub.add_parser("guess", help="offline guessing against a fresh world with small-domain blocks")
    p.add_argument("--protocol", choices=("tpa", "zkpa"), default="tpa")
    p.add_argument("--domain-size", type=int, default=16)
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--backend", default="real")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--first-hit", action="store_true", help="stop at the first accepted candidate")
    p.add_argument("--out", help="directory for transcripts")
    p.set_defaults(func=cmd_guess)

    p = sub.add_parser("experiment", help="run a batch described by a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="directory for transcripts and summary")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("replay", help="re-derive a transcript and compare byte for byte")
    p.add_argument("--transcript", required=True)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"auditlab {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AuditError as exc:
        print(f"auditlab {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONTRARY


if __name__ == "__main__":
    sys.exit(main())
