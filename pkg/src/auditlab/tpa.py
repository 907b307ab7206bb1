"""Privacy-preserving public auditing with homomorphic authenticators.

Setup: ``keygen`` and ``siggen`` (user side). Audit: ``verify_tag`` and
``gen_challenge`` (auditor), ``gen_proof`` (cloud server), ``verify_proof``
(auditor). The verifier checks

    R * e(sigma^gamma, g) == e((prod H(W_i)^nu_i)^gamma * u^mu, v),   gamma = h(R)

where W_i = name || i. gamma deliberately depends on R alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import signature
from .backend import GroupElement, GroupSuite
from .errors import BadParams, EmptyFile, IndexOutOfRange, InvalidTag
from .rng import RandomStream


@dataclass(frozen=True)
class PublicKey:
    spk: GroupElement
    v: GroupElement
    g: GroupElement
    u: GroupElement
    e_uv: GroupElement


@dataclass(frozen=True)
class UserKeys:
    x: int
    ssk: int
    spk: GroupElement
    v: GroupElement
    g: GroupElement
    u: GroupElement
    e_uv: GroupElement

    @property
    def public(self) -> PublicKey:
        return PublicKey(self.spk, self.v, self.g, self.u, self.e_uv)

    @property
    def signing_key(self) -> signature.SigningKey:
        return signature.SigningKey(self.ssk, self.spk)


@dataclass(frozen=True)
class FileTag:
    name: int
    signature: bytes

    def to_bytes(self) -> bytes:
        return self.name.to_bytes(32, "big") + self.signature

    @classmethod
    def from_bytes(cls, data: bytes) -> "FileTag":
        if len(data) < 33:
            raise InvalidTag("file tag too short")
        return cls(int.from_bytes(data[:32], "big"), bytes(data[32:]))


@dataclass(frozen=True)
class StoredFile:
    name: int
    blocks: tuple[int, ...]
    authenticators: tuple[GroupElement, ...]
    tag: FileTag

    def __post_init__(self):
        if not self.blocks:
            raise EmptyFile("a stored file needs at least one block")
        if len(self.blocks) != len(self.authenticators):
            raise ValueError("one authenticator per block is required")

    @property
    def n(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class Challenge:
    """chal = {(i, nu_i)}, 1-based indices, strictly increasing."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((int(i), int(nu)) for i, nu in self.entries))
        if not self.entries:
            raise BadParams("a challenge needs at least one entry")
        idx = self.indices
        if idx[0] < 1 or any(a >= b for a, b in zip(idx, idx[1:])):
            raise BadParams("challenge indices must be distinct, 1-based and increasing")

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(nu for _, nu in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class AuditResponse:
    mu: int
    sigma: GroupElement
    R: GroupElement = field(repr=False)


def block_label(name: int, i: int) -> bytes:
    """W_i = 32-byte big-endian name || 8-byte big-endian index."""
    return name.to_bytes(32, "big") + i.to_bytes(8, "big")


def keygen(suite: GroupSuite, stream: RandomStream) -> UserKeys:
    x = suite.random_nonzero(stream)
    u = suite.random_g1(stream)
    sig_key = signature.keygen(suite, stream)
    g = suite.g2_gen
    v = g ** x
    return UserKeys(x=x, ssk=sig_key.ssk, spk=sig_key.spk, v=v, g=g, u=u, e_uv=suite.pair(u, v))


def authenticator(suite: GroupSuite, keys: UserKeys, name: int, i: int, m: int) -> GroupElement:
    return (suite.hash_to_g1(block_label(name, i)) * keys.u ** m) ** keys.x


def siggen(suite: GroupSuite, keys: UserKeys, blocks: Sequence[int], stream: RandomStream) -> StoredFile:
    if not blocks:
        raise EmptyFile("cannot outsource an empty file")
    if any(not 0 <= m < suite.p for m in blocks):
        raise ValueError("blocks must be scalars in [0, p)")
    name = suite.random_scalar(stream)
    sigmas = tuple(authenticator(suite, keys, name, i, m) for i, m in enumerate(blocks, start=1))
    tag = FileTag(name, signature.sign(suite, keys.signing_key, suite.encode_scalar(name)))
    return StoredFile(name, tuple(blocks), sigmas, tag)


def verify_tag(suite: GroupSuite, spk: GroupElement, tag: FileTag) -> int:
    """Check SSig(name) under spk and return the recovered name."""
    if not 0 <= tag.name < suite.p:
        raise InvalidTag("file name is not a canonical scalar")
    if not signature.verify(suite, spk, suite.encode_scalar(tag.name), tag.signature):
        raise InvalidTag("file tag signature does not verify")
    return tag.name


def gen_challenge(suite: GroupSuite, n: int, c: int, stream: RandomStream) -> Challenge:
    if not 1 <= c <= n:
        raise BadParams(f"need 1 <= c <= n, got c={c}, n={n}")
    indices = sorted(i + 1 for i in stream.sample(n, c))
    return Challenge(tuple((i, suite.random_nonzero(stream)) for i in indices))


def check_indices(file: StoredFile, chal: Challenge) -> None:
    if chal.indices[-1] > file.n:
        raise IndexOutOfRange(f"challenged index {chal.indices[-1]} exceeds n={file.n}")


def combine_blocks(suite: GroupSuite, blocks: Sequence[int], chal: Challenge) -> int:
    """mu' = sum nu_i m_i over the challenged blocks (blocks is 0-based)."""
    return suite.inner(chal.coeffs, (blocks[i - 1] for i in chal.indices))


def aggregate_authenticators(suite: GroupSuite, file: StoredFile, chal: Challenge) -> GroupElement:
    return suite.multi_exp([file.authenticators[i - 1] for i in chal.indices], list(chal.coeffs))


def aggregate_hashes(suite: GroupSuite, name: int, chal: Challenge) -> GroupElement:
    """prod H(W_i)^nu_i over the challenge."""
    hashes = [suite.hash_to_g1(block_label(name, i)) for i in chal.indices]
    return suite.multi_exp(hashes, list(chal.coeffs))


def _respond(suite: GroupSuite, file: StoredFile, chal: Challenge, e_uv: GroupElement, r: int) -> AuditResponse:
    R = e_uv ** r
    gamma = suite.hash_to_scalar(R)
    mu = (r + gamma * combine_blocks(suite, file.blocks, chal)) % suite.p
    return AuditResponse(mu, aggregate_authenticators(suite, file, chal), R)


def sample_blinding(suite: GroupSuite, base: GroupElement, stream: RandomStream) -> int:
    """Draw r for R = base^r, redrawing while h(R) = 0.

    A zero gamma makes every verification equation independent of the data;
    it only occurs with probability 1/p, which matters on small mock groups.
    """
    while True:
        r = suite.random_scalar(stream)
        if suite.hash_to_scalar(base ** r) != 0:
            return r


def gen_proof(
    suite: GroupSuite, file: StoredFile, chal: Challenge, e_uv: GroupElement, stream: RandomStream
) -> AuditResponse:
    check_indices(file, chal)
    return _respond(suite, file, chal, e_uv, sample_blinding(suite, e_uv, stream))


def verify_proof(suite: GroupSuite, pk: PublicKey, name: int, chal: Challenge, resp: AuditResponse) -> bool:
    gamma = suite.hash_to_scalar(resp.R)
    lhs = resp.R * suite.pair(resp.sigma ** gamma, pk.g)
    rhs = suite.pair(aggregate_hashes(suite, name, chal) ** gamma * pk.u ** resp.mu, pk.v)
    return lhs == rhs
