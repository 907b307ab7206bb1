"""Trial execution, experiments and replay.

A world (keys plus an outsourced file) comes either from the experiment seed or
from a CLI state directory. Each trial then runs one full audit over an
in-process channel with its own child stream, ``RandomStream(seed).child(trial)``,
split further into corruption, server and auditor streams.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

from .. import codec
from ..attacks import (
    CorruptionSpec,
    GuessResult,
    GuessSpace,
    apply_corruption,
    offline_guess_tpa,
    offline_guess_zkpa,
)
from ..backend import GroupSuite, get_suite
from ..errors import AuditError, ConfigError, CorruptTranscript, MismatchOnReplay, NotFound
from ..rng import RandomStream
from ..tpa import PublicKey, StoredFile, UserKeys, verify_proof
from ..zkpa import ZkpaResponse, zkpa_verify_proof
from . import state as state_dir
from .config import ExperimentConfig
from .roles import (
    TO_AUDITOR,
    TO_SERVER,
    Auditor,
    Channel,
    CloudServer,
    Interceptor,
    Scenario1Interceptor,
    Scenario2Interceptor,
    User,
    delta_only_knowledge,
    full_knowledge,
)
from .transcript import AuditTranscript, ParsedTranscript, parse_transcript, wire_message

_SOURCE_KEYS = ("rec", "format", "world", "state_path", "state_digest", "trial")


@dataclass
class World:
    suite: GroupSuite
    keys: UserKeys
    original: StoredFile
    stored: StoredFile
    base_spec: CorruptionSpec
    source: list[tuple[str, str]]
    _pks: dict = field(default_factory=dict, repr=False)

    def public_key(self, protocol: str) -> PublicKey:
        if protocol not in self._pks:
            self._pks[protocol] = User(self.suite, self.keys).public_key(protocol)
        return self._pks[protocol]


def build_world(config: ExperimentConfig) -> World:
    suite = get_suite(config.backend)
    ws = state_dir.world_stream(config.seed)
    user = User.setup(suite, ws.child("keys"))
    blocks = state_dir.generate_blocks(suite, config.n, config.domain, ws.child("blocks"))
    file = user.outsource(blocks, ws.child("siggen"))
    return World(suite, user.keys, file, file, CorruptionSpec(), [("world", "seed")])


def load_world(path: str | Path, config: ExperimentConfig) -> World:
    """World from a state directory; the stored copy carries any corruption already applied."""
    path = Path(path).resolve()
    suite, keys = state_dir.load_keys(path)
    if suite.backend_id != get_suite(config.backend).backend_id:
        raise ConfigError(f"state uses backend {suite.backend_id}, config asks for {config.backend}")
    original, stored, spec = state_dir.load_files(path, suite)
    if stored.n != config.n:
        raise ConfigError(f"state file has n={stored.n}, config has n={config.n}")
    if config.corruption != "none":
        raise ConfigError("state worlds take corruption from the state directory (use corrupt)")
    source = [
        ("world", "state"),
        ("state_path", str(path).encode().hex()),
        ("state_digest", state_dir.digest(path)),
    ]
    return World(suite, keys, original, stored, spec, source)


@dataclass
class TrialResult:
    transcript: AuditTranscript
    accepted: bool
    storage_corrupted: bool
    challenged_corrupted: bool
    success: bool
    as_expected: bool
    corrupted_blocks: int = 0
    guess: GuessResult | None = None
    rm_identity: bool | None = None
    error: str | None = None


def _trial_corruption(config: ExperimentConfig, world: World, stream: RandomStream) -> CorruptionSpec:
    if config.corruption == "all":
        return CorruptionSpec.random(world.suite, config.n, stream)
    if config.corruption == "one":
        return CorruptionSpec.random(world.suite, config.n, stream, [1 + stream.randbelow(config.n)])
    return world.base_spec


def _interceptor(config: ExperimentConfig, world: World, pk: PublicKey, spec: CorruptionSpec) -> Interceptor:
    if config.attack == "scenario1":
        return Scenario1Interceptor(world.suite, pk, full_knowledge(world.original, spec))
    if config.attack == "scenario2":
        return Scenario2Interceptor(world.suite, delta_only_knowledge(spec, world.original.n))
    return Interceptor()


def _fmt_bool(value: bool | None) -> str:
    return "-" if value is None else str(int(bool(value)))


def _run_guess(config, world, pk, name, chal, resp, server, truth) -> tuple[GuessResult | None, bool | None]:
    space = GuessSpace.uniform(chal.indices, range(config.guess_domain))
    try:
        if config.attack == "guess-zkpa":
            result = offline_guess_zkpa(world.suite, pk, name, chal, resp, space, config.exhaustive)
        else:
            result = offline_guess_tpa(world.suite, pk, name, chal, resp.sigma, space, config.exhaustive)
    except NotFound:
        return None, None
    rm_identity = None
    if config.attack == "guess-zkpa" and server.last_blinding is not None:
        trace = result.trace_for(truth)
        rm_identity = trace is not None and trace["r_m"] == server.last_blinding[0]
    return result, rm_identity


def run_trial(config: ExperimentConfig, world: World, trial: int = 0) -> TrialResult:
    suite = world.suite
    ts = RandomStream(config.seed).child(trial)
    spec = _trial_corruption(config, world, ts.child("corruption"))
    stored = apply_corruption(suite, world.original, spec) if spec is not world.base_spec else world.stored
    corrupted_blocks = sum(a != b for a, b in zip(stored.blocks, world.original.blocks))
    storage_corrupted = corrupted_blocks > 0

    pk = world.public_key(config.protocol)
    server = CloudServer(suite, stored, pk, ts.child("server"))
    auditor = Auditor(suite, pk, world.original.n, ts.child("auditor"))
    channel = Channel(_interceptor(config, world, pk, spec))
    transcript = AuditTranscript(world.source + config.items() + [("trial", str(trial))])

    def send(direction: str, message: str) -> str:
        delivered = channel.send(direction, message)
        seq = len(channel.log)
        entry = channel.log[-1]
        transcript.add("wire", ("seq", seq), ("dir", direction), ("image", "sent"),
                       *codec.decode_kv(entry.before).items())
        if entry.via is not None:
            transcript.add("wire", ("seq", seq), ("dir", direction), ("image", "delivered"),
                           ("via", entry.via), *codec.decode_kv(entry.after).items())
        return delivered

    accepted, error, chal, guess, rm_identity = False, None, None, None, None
    stage = "tag"
    try:
        reply = server.handle(send(TO_SERVER, codec.tag_request()))
        name = auditor.check_tag(send(TO_AUDITOR, reply))
        transcript.add("event", ("kind", "tag-verified"), ("name", suite.encode_scalar(name).hex()))
        stage = "challenge"
        chal = auditor.challenge(config.c)
        delivered = send(TO_SERVER, codec.encode_challenge(suite, chal, config.protocol))
        stage = "proof"
        answer = send(TO_AUDITOR, server.handle(delivered))
        stage = "verify"
        resp = codec.decode_response(suite, answer)
        accepted = auditor.verify(name, chal, resp)
    except (AuditError, ValueError) as exc:
        error = type(exc).__name__
        transcript.add("error", ("kind", error), ("stage", stage))
    transcript.add("verdict", ("result", "accept" if accepted else "reject"))

    challenged = chal.indices if chal is not None else ()
    challenged_corrupted = any(stored.blocks[i - 1] != world.original.blocks[i - 1] for i in challenged)

    if config.is_guess:
        truth = {i: stored.blocks[i - 1] for i in challenged}
        if accepted:
            guess, rm_identity = _run_guess(config, world, pk, name, chal, resp, server, truth)
        found = guess is not None
        truth_accepted = found and truth in guess.accepted
        unique = guess.unique if found else None
        first = ",".join(f"{i}:{m}" for i, m in guess.recovered.items()) if found else "-"
        transcript.add(
            "guess",
            ("tried", guess.tried if found else 0),
            ("accepted", len(guess.accepted) if found else 0),
            ("first", first),
            ("truth_accepted", _fmt_bool(truth_accepted)),
            ("unique", _fmt_bool(unique)),
            ("reading", (guess.reading if found else None) or "-"),
            ("rm_identity", _fmt_bool(rm_identity)),
        )
        recovered = found and guess.recovered == truth
        success = bool(recovered and (unique is not False))
        as_expected = success
    elif config.attack in ("scenario1", "scenario2"):
        success = accepted and storage_corrupted
        as_expected = success
    else:
        success = accepted
        as_expected = accepted == (not challenged_corrupted) and error is None

    knowledge = channel.interceptor.knowledge
    transcript.add(
        "attack",
        ("scenario", config.attack),
        ("knowledge", knowledge.level.value if knowledge is not None else "-"),
        ("corruption", spec.digest() if spec.deltas else "-"),
        ("storage_corrupted", int(storage_corrupted)),
        ("challenged_corrupted", int(challenged_corrupted)),
    )
    transcript.add("outcome", ("success", int(success)), ("as_expected", int(as_expected)))
    return TrialResult(transcript, accepted, storage_corrupted, challenged_corrupted, success,
                       as_expected, corrupted_blocks, guess, rm_identity, error)


def run_audit(config: ExperimentConfig, world: World, trial: int = 0) -> AuditTranscript:
    return run_trial(config, world, trial).transcript


@dataclass
class ExperimentSummary:
    config: ExperimentConfig
    results: list[TrialResult]
    wall_time: float
    out_dir: Path | None = None

    @property
    def trials(self) -> int:
        return len(self.results)

    @property
    def accepts(self) -> int:
        return sum(r.accepted for r in self.results)

    @property
    def successes(self) -> int:
        return sum(r.success for r in self.results)

    @property
    def unexpected(self) -> int:
        return sum(not r.as_expected for r in self.results)

    @property
    def rate_name(self) -> str:
        if self.config.is_guess:
            return "recovery_rate"
        if self.config.attack != "none":
            return "attack_success_rate"
        return "accept_rate"

    @property
    def rate(self) -> float:
        return self.successes / self.trials

    def to_text(self) -> str:
        rows = [
            ("trials", self.trials),
            ("accepts", self.accepts),
            ("successes", self.successes),
            (self.rate_name, f"{self.rate:.4f}"),
            ("unexpected", self.unexpected),
            ("wall_time_s", f"{self.wall_time:.3f}"),
        ]
        return "".join(f"{k} = {v}\n" for k, v in rows)


def transcript_name(trial: int) -> str:
    return f"trial-{trial:04d}.audlt"


def run_experiment(config: ExperimentConfig, out_dir: str | Path | None = None,
                   world: World | None = None) -> ExperimentSummary:
    """Run ``config.trials`` audits; persist transcripts and a summary when ``out_dir`` is set."""
    start = time.perf_counter()
    world = world or build_world(config)
    results = [run_trial(config, world, t) for t in range(config.trials)]
    summary = ExperimentSummary(config, results, time.perf_counter() - start)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for t, res in enumerate(results):
            (out / transcript_name(t)).write_text(res.transcript.to_text())
        (out / "config.txt").write_text("".join(f"{k} = {v}\n" for k, v in config.items()))
        (out / "summary.txt").write_text(summary.to_text())
        summary.out_dir = out
    return summary


# -- replay --------------------------------------------------------------------

@dataclass
class ReplayReport:
    path: str
    recorded_verdict: bool | None
    replayed_verdict: bool | None
    offline_verdict: bool | None
    identical: bool
    first_difference: int | None = None
    recorded_line: str | None = None
    replayed_line: str | None = None

    @property
    def verdict_flip(self) -> bool:
        return self.recorded_verdict != self.replayed_verdict or (
            self.offline_verdict is not None and self.offline_verdict != self.recorded_verdict
        )

    def to_text(self) -> str:
        def show(v):
            return {True: "accept", False: "reject", None: "-"}[v]

        lines = [
            f"transcript: {self.path}",
            f"identical: {self.identical}",
            f"recorded verdict: {show(self.recorded_verdict)}",
            f"replayed verdict: {show(self.replayed_verdict)}",
            f"offline re-verification: {show(self.offline_verdict)}",
        ]
        if not self.identical:
            lines.append(f"first difference at line {self.first_difference}")
            lines.append(f"  recorded: {self.recorded_line}")
            lines.append(f"  replayed: {self.replayed_line}")
            if self.verdict_flip:
                lines.append("verdict flip detected")
        return "\n".join(lines) + "\n"


def config_from_header(header: dict[str, str]) -> ExperimentConfig:
    try:
        return ExperimentConfig.from_mapping({k: v for k, v in header.items() if k not in _SOURCE_KEYS})
    except (ConfigError, TypeError) as exc:
        raise CorruptTranscript(f"header does not describe a valid experiment: {exc}") from None


def _delivered_messages(parsed: ParsedTranscript) -> dict[str, str]:
    """Last image of each wire message, keyed by message kind."""
    by_seq: dict[str, dict[str, str]] = {}
    for rec in parsed.of_kind("wire"):
        by_seq[rec["seq"]] = rec
    return {rec.get("msg", "?"): wire_message(rec) for rec in by_seq.values()}


def reverify(parsed: ParsedTranscript, world: World, protocol: str) -> bool | None:
    """Run the verification equation on the recorded messages alone.

    None when the transcript never reached a response.
    """
    suite = world.suite
    msgs = _delivered_messages(parsed)
    if not {"tag", "challenge", "response"} <= msgs.keys():
        return None
    try:
        pk = world.public_key(protocol)
        tag, _ = codec.decode_tag(msgs["tag"])
        chal = codec.decode_challenge(suite, msgs["challenge"])
        resp = codec.decode_response(suite, msgs["response"])
        if isinstance(resp, ZkpaResponse):
            return protocol == "zkpa" and zkpa_verify_proof(suite, pk, tag.name, chal, resp)
        return verify_proof(suite, pk, tag.name, chal, resp)
    except (AuditError, ValueError):
        return False


def replay(path: str | Path) -> ReplayReport:
    """Rebuild the world named in the header, rerun the trial and diff byte for byte.

    Raises MismatchOnReplay (carrying the report) on any difference, including
    a change to the state directory a transcript was recorded against.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except UnicodeDecodeError:
        raise CorruptTranscript(f"{path} is not text") from None
    parsed = parse_transcript(text)
    header = parsed.header
    config = config_from_header(header)
    try:
        trial = int(header["trial"])
    except (KeyError, ValueError):
        raise CorruptTranscript("header lacks a trial index") from None

    source = header.get("world")
    if source == "seed":
        world = build_world(config)
    elif source == "state":
        try:
            state_path = Path(bytes.fromhex(header["state_path"]).decode())
        except (KeyError, ValueError):
            raise CorruptTranscript("header lacks a valid state_path") from None
        if not state_path.is_dir():
            raise MismatchOnReplay(f"state directory {state_path} is gone")
        if state_dir.digest(state_path) != header.get("state_digest"):
            raise MismatchOnReplay(f"state directory {state_path} changed since recording")
        world = load_world(state_path, config)
    else:
        raise CorruptTranscript(f"unknown world source {source!r}")

    rerun = run_trial(config, world, trial).transcript
    fresh = rerun.to_text()
    report = ReplayReport(
        path=str(path),
        recorded_verdict=parsed.verdict,
        replayed_verdict=rerun.verdict,
        offline_verdict=reverify(parsed, world, config.protocol),
        identical=fresh == text,
    )
    if not report.identical:
        old, new = text.splitlines(), fresh.splitlines()
        k = next((j for j, (a, b) in enumerate(zip(old, new)) if a != b), min(len(old), len(new)))
        report.first_difference = k + 1
        report.recorded_line = old[k] if k < len(old) else "<end of file>"
        report.replayed_line = new[k] if k < len(new) else "<end of file>"
        raise MismatchOnReplay(f"{path}: replay differs at line {k + 1}", report)
    if report.recorded_verdict and not report.offline_verdict:
        raise MismatchOnReplay(f"{path}: recorded accept does not re-verify offline", report)
    return report
