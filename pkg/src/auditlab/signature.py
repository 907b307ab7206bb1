"""Schnorr signatures over G2, used for the file tag SSig_ssk(name).

The protocols treat the tag signature as a black box; this one reuses the
group suite so no extra dependency is needed. Signatures are (c, z) with
c = H(spk | g2^k | msg) and z = k - c*ssk; nonces are derived from the secret
key and message so signing needs no randomness.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .backend import EncodingError, GroupElement, GroupSuite
from .rng import RandomStream

_CHALLENGE_TAG = b"AUDITLAB-SIG-V1|"
_NONCE_TAG = b"AUDITLAB-SIG-NONCE-V1|"


@dataclass(frozen=True)
class SigningKey:
    ssk: int
    spk: GroupElement


def keygen(suite: GroupSuite, stream: RandomStream) -> SigningKey:
    ssk = suite.random_nonzero(stream)
    return SigningKey(ssk, suite.g2_gen ** ssk)


def _challenge(suite: GroupSuite, spk: GroupElement, commit: GroupElement, msg: bytes) -> int:
    return suite.hash_bytes_to_scalar(_CHALLENGE_TAG, spk.to_bytes() + commit.to_bytes() + msg)


def sign(suite: GroupSuite, key: SigningKey, msg: bytes) -> bytes:
    seed = _NONCE_TAG + key.ssk.to_bytes(32, "big") + msg
    k = int.from_bytes(hashlib.sha512(seed).digest(), "big") % (suite.p - 1) + 1
    c = _challenge(suite, key.spk, suite.g2_gen ** k, msg)
    z = (k - c * key.ssk) % suite.p
    return suite.encode_scalar(c) + suite.encode_scalar(z)


def verify(suite: GroupSuite, spk: GroupElement, msg: bytes, signature: bytes) -> bool:
    if len(signature) != 64:
        return False
    try:
        c = suite.decode_scalar(signature[:32])
        z = suite.decode_scalar(signature[32:])
    except EncodingError:
        return False
    commit = (suite.g2_gen ** z) * (spk ** c)
    return _challenge(suite, spk, commit, msg) == c
