"""The three protocol parties plus the man in the middle.

Each role holds only what it is entitled to: the auditor a public key and n,
the server the stored file and public values, the delta-only interceptor the
deltas and whatever it sees on the wire.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .. import codec, tpa, zkpa
from ..attacks import (
    CorruptionSpec,
    DeltaOnlyKnowledge,
    FullKnowledge,
    scenario1_forge,
    scenario2_forge,
)
from ..backend import GroupSuite
from ..rng import RandomStream
from ..tpa import PublicKey, StoredFile, UserKeys
from ..zkpa import ZkpaPublicKey

TO_SERVER = "auditor>server"
TO_AUDITOR = "server>auditor"


@dataclass
class User:
    suite: GroupSuite
    keys: UserKeys

    @classmethod
    def setup(cls, suite: GroupSuite, stream: RandomStream) -> "User":
        return cls(suite, tpa.keygen(suite, stream))

    def outsource(self, blocks, stream: RandomStream) -> StoredFile:
        return tpa.siggen(self.suite, self.keys, blocks, stream)

    def public_key(self, protocol: str) -> PublicKey:
        pk = self.keys.public
        return zkpa.zkpa_public_key(self.suite, pk) if protocol == "zkpa" else pk


@dataclass
class CloudServer:
    suite: GroupSuite
    file: StoredFile
    pk: PublicKey
    stream: RandomStream
    # test hook: blinding used for the last ZKPA answer; never put on the wire
    last_blinding: tuple[int, int, int] | None = field(default=None, repr=False)

    def handle(self, message: str) -> str:
        fields = codec.decode_kv(message)
        if fields.get("msg") == "tag-request":
            return codec.encode_tag(self.file.tag, self.file.n)
        if fields.get("msg") == "challenge":
            chal = codec.decode_challenge(self.suite, message)
            if fields["proto"] == "ZKPA":
                tpa.check_indices(self.file, chal)
                blinding = zkpa.sample_zkpa_blinding(self.suite, self.pk, self.stream)
                self.last_blinding = blinding
                resp = zkpa._zkpa_respond(self.suite, self.file, chal, self.pk, *blinding)
            else:
                resp = tpa.gen_proof(self.suite, self.file, chal, self.pk.e_uv, self.stream)
            return codec.encode_response(self.suite, resp)
        raise ValueError(f"server cannot handle {fields.get('msg')!r}")


@dataclass
class Auditor:
    """Holds only public key material and the block count n."""

    suite: GroupSuite
    pk: PublicKey
    n: int
    stream: RandomStream

    def check_tag(self, message: str) -> int:
        tag, n = codec.decode_tag(message)
        if n != self.n:
            raise tpa.BadParams(f"server reports n={n}, auditor expects {self.n}")
        return tpa.verify_tag(self.suite, self.pk.spk, tag)

    def challenge(self, c: int) -> tpa.Challenge:
        return tpa.gen_challenge(self.suite, self.n, c, self.stream)

    def verify(self, name: int, chal: tpa.Challenge, resp) -> bool:
        if isinstance(resp, zkpa.ZkpaResponse):
            if not isinstance(self.pk, ZkpaPublicKey):
                return False
            return zkpa.zkpa_verify_proof(self.suite, self.pk, name, chal, resp)
        return tpa.verify_proof(self.suite, self.pk, name, chal, resp)


class Interceptor:
    """Channel hook: sees every message and returns the bytes to deliver."""

    label = "passive"
    knowledge = None

    def __init__(self):
        self.observed: list[tuple[str, bytes]] = []

    def transform(self, direction: str, message: bytes, knowledge) -> bytes:
        self.observed.append((direction, message))
        return message


class _ForgingInterceptor(Interceptor):
    def __init__(self, suite: GroupSuite, knowledge):
        super().__init__()
        self.suite = suite
        self.knowledge = knowledge

    def transform(self, direction: str, message: bytes, knowledge) -> bytes:
        super().transform(direction, message, knowledge)
        text = message.decode()
        kind = codec.decode_kv(text).get("msg")
        if direction == TO_SERVER and kind == "challenge":
            self.knowledge = replace(knowledge, observed_challenge=codec.decode_challenge(self.suite, text))
            return message
        if direction == TO_AUDITOR and kind == "response" and knowledge.observed_challenge is not None:
            resp = codec.decode_response(self.suite, text)
            self.knowledge = replace(knowledge, intercepted_response=resp)
            forged = self.forge(self.knowledge)
            return codec.encode_response(self.suite, forged).encode()
        return message


class Scenario1Interceptor(_ForgingInterceptor):
    """Knows the original blocks and the deltas; rewrites (mu*, sigma, R)."""

    label = "scenario1"

    def __init__(self, suite: GroupSuite, pk: PublicKey, knowledge: FullKnowledge):
        super().__init__(suite, knowledge)
        self.pk = pk

    def forge(self, k: FullKnowledge):
        return scenario1_forge(
            self.suite, self.pk, k.blocks, k.deltas, k.observed_challenge, k.intercepted_response
        )


class Scenario2Interceptor(_ForgingInterceptor):
    """Knows only the deltas; subtracts h(R) * sum(nu_i beta_i) from mu."""

    label = "scenario2"

    def __init__(self, suite: GroupSuite, knowledge: DeltaOnlyKnowledge):
        super().__init__(suite, knowledge)

    def forge(self, k: DeltaOnlyKnowledge):
        return scenario2_forge(self.suite, k.deltas, k.observed_challenge, k.intercepted_response)


def full_knowledge(original: StoredFile, spec: CorruptionSpec) -> FullKnowledge:
    blocks = {i: m for i, m in enumerate(original.blocks, start=1)}
    return FullKnowledge(blocks=blocks, deltas=spec.densified(original.n))


def delta_only_knowledge(spec: CorruptionSpec, n: int) -> DeltaOnlyKnowledge:
    return DeltaOnlyKnowledge(deltas=spec.densified(n))


@dataclass
class WireRecord:
    direction: str
    before: str
    after: str
    via: str | None


class Channel:
    """Ordered in-process message queue with an optional interceptor."""

    def __init__(self, interceptor: Interceptor | None = None):
        self.interceptor = interceptor
        self.log: list[WireRecord] = []

    def send(self, direction: str, message: str) -> str:
        delivered = message
        via = None
        if self.interceptor is not None:
            out = self.interceptor.transform(direction, message.encode(), self.interceptor.knowledge)
            delivered = out.decode()
            if delivered != message:
                via = self.interceptor.label
        self.log.append(WireRecord(direction, message, delivered, via))
        return delivered
