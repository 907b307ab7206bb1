"""Attacks on storage correctness and on data privacy.

* :func:`scenario1_forge` - an attacker who knows the original blocks and the
  modification rewrites the server's (mu*, sigma, R) into a response that
  verifies for the original data.
* :func:`scenario2_forge` - an attacker who only knows the additive deltas
  subtracts gamma * sum(nu_i * beta_i) from mu*.
* :func:`offline_guess_tpa` - a curious auditor tests block guesses against
  e(sigma, g) == e(prod H(W_i)^nu_i * u^mu', v).
* :func:`offline_guess_zkpa` - the same auditor peels the three blinding values
  off a ZKPA response and then runs the same test.

Authenticators are never forged: the deltas leave sigma_i untouched.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import ClassVar, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .backend import GroupElement, GroupSuite
from .errors import BadParams, DegenerateGamma, IndexOutOfRange, MissingKnowledge, NotFound
from .tpa import AuditResponse, Challenge, PublicKey, StoredFile, aggregate_hashes
from .zkpa import ZkpaPublicKey, ZkpaResponse, pair_g1g

# e(g, g)^varsigma does not typecheck for an asymmetric pairing (g lives in G2);
# the blinding only cancels against e(g1, g)^varsigma.
VARSIGMA_BASE_READING = "e(g1,g)^varsigma"


@dataclass(frozen=True)
class CorruptionSpec:
    """Additive modification m_i* = m_i + beta_i, keyed by 1-based block index."""

    deltas: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "deltas", {int(i): int(b) for i, b in sorted(self.deltas.items())})
        if any(i < 1 for i in self.deltas):
            raise IndexOutOfRange("block indices are 1-based")

    @classmethod
    def random(cls, suite: GroupSuite, n: int, stream, indices: Iterable[int] | None = None) -> "CorruptionSpec":
        """Nonzero uniform deltas on ``indices`` (default: every block)."""
        targets = range(1, n + 1) if indices is None else sorted(indices)
        return cls({i: suite.random_nonzero(stream) for i in targets})

    def densified(self, n: int) -> "CorruptionSpec":
        """Explicit beta_i for every block 1..n, zero where unmodified."""
        return CorruptionSpec({i: self.deltas.get(i, 0) for i in range(1, n + 1)})

    @property
    def is_trivial(self) -> bool:
        return all(b == 0 for b in self.deltas.values())

    def to_text(self) -> str:
        return "".join(f"{i}={b:x}\n" for i, b in self.deltas.items())

    @classmethod
    def from_text(cls, text: str) -> "CorruptionSpec":
        deltas = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"line {lineno}: expected index=beta_hex")
            index = int(key.strip())
            if index in deltas:
                raise ValueError(f"line {lineno}: duplicate index {index}")
            deltas[index] = int(value.strip(), 16)
        return cls(deltas)

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def apply_corruption(suite: GroupSuite, file: StoredFile, spec: CorruptionSpec) -> StoredFile:
    """Modify blocks in place of the server; authenticators and tag stay as they were."""
    if spec.deltas and max(spec.deltas) > file.n:
        raise IndexOutOfRange(f"corruption touches block {max(spec.deltas)} of {file.n}")
    blocks = list(file.blocks)
    for i, beta in spec.deltas.items():
        blocks[i - 1] = (blocks[i - 1] + beta) % suite.p
    return replace(file, blocks=tuple(blocks))


class KnowledgeLevel(str, Enum):
    FULL = "full-knowledge"
    DELTA_ONLY = "delta-only"


@dataclass(frozen=True)
class FullKnowledge:
    """Scenario 1: the attacker has read the original file and chose the deltas."""

    level: ClassVar[KnowledgeLevel] = KnowledgeLevel.FULL
    blocks: Mapping[int, int]
    deltas: CorruptionSpec
    observed_challenge: Challenge | None = None
    intercepted_response: AuditResponse | None = None


@dataclass(frozen=True)
class DeltaOnlyKnowledge:
    """Scenario 2: the attacker knows how blocks were changed, never what they hold."""

    level: ClassVar[KnowledgeLevel] = KnowledgeLevel.DELTA_ONLY
    deltas: CorruptionSpec
    observed_challenge: Challenge | None = None
    intercepted_response: AuditResponse | ZkpaResponse | None = None


def _betas(spec: CorruptionSpec, chal: Challenge) -> list[int]:
    missing = [i for i in chal.indices if i not in spec.deltas]
    if missing:
        raise MissingKnowledge(f"no beta known for challenged blocks {missing}")
    return [spec.deltas[i] for i in chal.indices]


def correction(suite: GroupSuite, gamma: int, chal: Challenge, spec: CorruptionSpec) -> int:
    """alpha = gamma * sum(nu_i * beta_i) mod p."""
    return gamma * suite.inner(chal.coeffs, _betas(spec, chal)) % suite.p


class Scenario1Trace(NamedTuple):
    gamma: int
    alpha: int
    R_hat: GroupElement
    gamma_hat: int
    mu_prime: int
    response: AuditResponse


def scenario1_trace(
    suite: GroupSuite,
    pk: PublicKey,
    original_blocks: Mapping[int, int],
    spec: CorruptionSpec,
    chal: Challenge,
    corrupted_resp: AuditResponse,
) -> Scenario1Trace:
    missing = [i for i in chal.indices if i not in original_blocks]
    if missing:
        raise MissingKnowledge(f"original content unknown for challenged blocks {missing}")
    p = suite.p
    gamma = suite.hash_to_scalar(corrupted_resp.R)
    alpha = correction(suite, gamma, chal, spec)
    R_hat = corrupted_resp.R * suite.pair(pk.u ** alpha, pk.v)
    gamma_hat = suite.hash_to_scalar(R_hat)
    mu_prime = suite.inner(chal.coeffs, (original_blocks[i] for i in chal.indices))
    mu_hat = (mu_prime * (gamma_hat - gamma) + corrupted_resp.mu) % p
    forged = AuditResponse(mu_hat, corrupted_resp.sigma, R_hat)
    return Scenario1Trace(gamma, alpha, R_hat, gamma_hat, mu_prime, forged)


def scenario1_forge(
    suite: GroupSuite,
    pk: PublicKey,
    original_blocks: Mapping[int, int],
    spec: CorruptionSpec,
    chal: Challenge,
    corrupted_resp: AuditResponse,
) -> AuditResponse:
    """Rebuild (mu*, sigma, R) into (mu_hat, sigma, R_hat) valid for the original blocks.

    R_hat = R * e(u^alpha, v) and mu_hat = mu'(gamma_hat - gamma) + mu*, where
    mu' is over the original blocks. A full-knowledge attacker could equally
    build a fresh honest response from the original blocks; this follows the
    rewrite procedure so its algebra can be checked step by step.
    """
    return scenario1_trace(suite, pk, original_blocks, spec, chal, corrupted_resp).response


def scenario2_forge(
    suite: GroupSuite,
    spec: CorruptionSpec,
    chal: Challenge,
    corrupted_resp: AuditResponse | ZkpaResponse,
) -> AuditResponse | ZkpaResponse:
    """Subtract alpha = h(R) * sum(nu_i * beta_i) from mu*; everything else passes through.

    Needs only the deltas, the challenge seen on the wire and R from the
    intercepted response. Works unchanged on ZKPA responses, whose mu has the
    same shape.
    """
    alpha = correction(suite, suite.hash_to_scalar(corrupted_resp.R), chal, spec)
    return replace(corrupted_resp, mu=(corrupted_resp.mu - alpha) % suite.p)


@dataclass(frozen=True)
class GuessSpace:
    """Candidate values per challenged index; enumerated lexicographically."""

    candidates: Mapping[int, tuple[int, ...]]

    def __post_init__(self):
        cands = {int(i): tuple(v) for i, v in sorted(self.candidates.items())}
        if not cands or any(not v for v in cands.values()):
            raise BadParams("every challenged index needs at least one candidate")
        object.__setattr__(self, "candidates", cands)

    @classmethod
    def uniform(cls, indices: Iterable[int], domain: Iterable[int]) -> "GuessSpace":
        values = tuple(domain)
        return cls({i: values for i in indices})

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(self.candidates)

    @property
    def size(self) -> int:
        total = 1
        for v in self.candidates.values():
            total *= len(v)
        return total

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*self.candidates.values())

    def __contains__(self, guess: Sequence[int]) -> bool:
        return len(guess) == len(self.candidates) and all(
            m in vals for m, vals in zip(guess, self.candidates.values())
        )


@dataclass
class GuessResult:
    recovered: dict[int, int]
    accepted: list[dict[int, int]]
    tried: int
    exhaustive: bool
    traces: list[dict] = field(default_factory=list)
    reading: str | None = None

    @property
    def unique(self) -> bool | None:
        return len(self.accepted) == 1 if self.exhaustive else None

    @property
    def trace(self) -> dict:
        return self.traces[0] if self.traces else {}

    def trace_for(self, blocks: Mapping[int, int]) -> dict | None:
        for cand, tr in zip(self.accepted, self.traces):
            if cand == dict(blocks):
                return tr
        return None


def _check_space(chal: Challenge, space: GuessSpace) -> None:
    if space.indices != chal.indices:
        raise BadParams("guess space must cover exactly the challenged indices")


def _search(suite, chal, space, exhaustive, test) -> GuessResult:
    accepted, traces, tried = [], [], 0
    for guess in space:
        tried += 1
        mu_guess = suite.inner(chal.coeffs, guess)
        ok, trace = test(mu_guess)
        if ok:
            accepted.append(dict(zip(chal.indices, guess)))
            traces.append(trace)
            if not exhaustive:
                break
    if not accepted:
        raise NotFound(f"none of {tried} candidates satisfies the check")
    return GuessResult(accepted[0], accepted, tried, exhaustive, traces)


def offline_guess_tpa(
    suite: GroupSuite,
    pk: PublicKey,
    name: int,
    chal: Challenge,
    sigma: GroupElement,
    space: GuessSpace,
    exhaustive: bool = False,
) -> GuessResult:
    """Find blocks with e(sigma, g) == e(prod H(W_i)^nu_i * u^mu~', v).

    With ``exhaustive`` the whole space is scanned and every accepted candidate
    is reported, which makes uniqueness checkable; otherwise the first hit in
    lexicographic order is returned.
    """
    _check_space(chal, space)
    target = suite.pair(sigma, pk.g)
    hashed = aggregate_hashes(suite, name, chal)

    def test(mu_guess):
        return suite.pair(hashed * pk.u ** mu_guess, pk.v) == target, {}

    return _search(suite, chal, space, exhaustive, test)


def offline_guess_zkpa(
    suite: GroupSuite,
    pk: ZkpaPublicKey,
    name: int,
    chal: Challenge,
    resp: ZkpaResponse,
    space: GuessSpace,
    exhaustive: bool = False,
) -> GuessResult:
    """Strip r_m, r_sigma and rho from a ZKPA response for each guess, then test it.

    Per guess: r~_m = mu - gamma*mu~'; A = R / e(u,v)^r~_m (= e(g1,g)^r~_sigma);
    B = (e(g1,g)^varsigma / A)^(1/gamma) (= e(g1,g)^rho~); e(sigma~, g) = e(Sigma, g) / B;
    accept when e(sigma~, g) == e(prod H(W_i)^nu_i * u^mu~', v). The trace of
    each accepted guess carries r~_m, A and B.
    """
    _check_space(chal, space)
    p = suite.p
    gamma = suite.hash_to_scalar(resp.R)
    if gamma == 0:
        raise DegenerateGamma("h(R) = 0; request a fresh audit")
    gamma_inv = pow(gamma, -1, p)
    e_g1g = pair_g1g(suite, pk)
    e_g1g_varsigma = e_g1g ** resp.varsigma
    e_Sigma_g = suite.pair(resp.Sigma, pk.g)
    hashed = aggregate_hashes(suite, name, chal)

    def test(mu_guess):
        r_m = (resp.mu - gamma * mu_guess) % p
        A = resp.R / pk.e_uv ** r_m
        B = (e_g1g_varsigma / A) ** gamma_inv
        e_sigma_g = e_Sigma_g / B
        ok = e_sigma_g == suite.pair(hashed * pk.u ** mu_guess, pk.v)
        return ok, {"r_m": r_m, "A": A, "B": B}

    result = _search(suite, chal, space, exhaustive, test)
    result.reading = VARSIGMA_BASE_READING
    return result
