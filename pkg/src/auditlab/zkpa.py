"""Zero-knowledge public auditing: the TPA protocol with a triple-blinded response.

The server picks r_m, r_sigma, rho and answers (varsigma, mu, Sigma, R) with

    R = e(g1, g)^r_sigma * e(u, v)^r_m,   gamma = h(R)
    mu = r_m + gamma * mu',   varsigma = r_sigma + gamma * rho,   Sigma = sigma * g1^rho

and the auditor checks

    R * e(Sigma^gamma, g) == e((prod H(W_i)^nu_i)^gamma * u^mu, v) * e(g1, g)^varsigma
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .backend import GroupElement, GroupSuite
from .rng import RandomStream
from .tpa import (
    Challenge,
    PublicKey,
    StoredFile,
    aggregate_authenticators,
    aggregate_hashes,
    check_indices,
    combine_blocks,
)

G1_EXTRA_LABEL = b"AUDITLAB-ZKPA-G1"


@dataclass(frozen=True)
class ZkpaPublicKey(PublicKey):
    g1_extra: GroupElement


def pair_g1g(suite: GroupSuite, pk: ZkpaPublicKey) -> GroupElement:
    """e(g1, g), the GT base the server blinds sigma against."""
    return suite.pair(pk.g1_extra, pk.g)


def extra_generator(suite: GroupSuite) -> GroupElement:
    """g1 = H(label): nobody, including the user, knows its discrete log."""
    counter = 0
    while True:
        label = G1_EXTRA_LABEL if counter == 0 else G1_EXTRA_LABEL + b"|" + str(counter).encode()
        g1 = suite.hash_to_g1(label)
        if not g1.is_identity():
            return g1
        counter += 1


def zkpa_public_key(suite: GroupSuite, pk: PublicKey) -> ZkpaPublicKey:
    return ZkpaPublicKey(pk.spk, pk.v, pk.g, pk.u, pk.e_uv, extra_generator(suite))


@dataclass(frozen=True)
class ZkpaResponse:
    varsigma: int
    mu: int
    Sigma: GroupElement
    R: GroupElement = field(repr=False)


def _zkpa_respond(
    suite: GroupSuite,
    file: StoredFile,
    chal: Challenge,
    pk: ZkpaPublicKey,
    r_m: int,
    r_sigma: int,
    rho: int,
) -> ZkpaResponse:
    """Response for explicit blinding values. Test hook; servers use zkpa_gen_proof."""
    R = pair_g1g(suite, pk) ** r_sigma * pk.e_uv ** r_m
    gamma = suite.hash_to_scalar(R)
    mu = (r_m + gamma * combine_blocks(suite, file.blocks, chal)) % suite.p
    varsigma = (r_sigma + gamma * rho) % suite.p
    Sigma = aggregate_authenticators(suite, file, chal) * pk.g1_extra ** rho
    return ZkpaResponse(varsigma, mu, Sigma, R)


def sample_zkpa_blinding(suite: GroupSuite, pk: ZkpaPublicKey, stream: RandomStream) -> tuple[int, int, int]:
    """Draw (r_m, r_sigma, rho), redrawing the first two while h(R) = 0."""
    e_g1g = pair_g1g(suite, pk)
    while True:
        r_m = suite.random_scalar(stream)
        r_sigma = suite.random_scalar(stream)
        if suite.hash_to_scalar(e_g1g ** r_sigma * pk.e_uv ** r_m) != 0:
            break
    return r_m, r_sigma, suite.random_scalar(stream)


def zkpa_gen_proof(
    suite: GroupSuite, file: StoredFile, chal: Challenge, pk: ZkpaPublicKey, stream: RandomStream
) -> ZkpaResponse:
    check_indices(file, chal)
    return _zkpa_respond(suite, file, chal, pk, *sample_zkpa_blinding(suite, pk, stream))


def zkpa_verify_proof(
    suite: GroupSuite, pk: ZkpaPublicKey, name: int, chal: Challenge, resp: ZkpaResponse
) -> bool:
    gamma = suite.hash_to_scalar(resp.R)
    lhs = resp.R * suite.pair(resp.Sigma ** gamma, pk.g)
    rhs = suite.pair(aggregate_hashes(suite, name, chal) ** gamma * pk.u ** resp.mu, pk.v)
    return lhs == rhs * pair_g1g(suite, pk) ** resp.varsigma
