"""Group-suite interface shared by the curve and mock backends.

Elements of G1, G2 and GT are written multiplicatively: ``a * b`` is the group
law, ``a ** k`` exponentiation by an integer (reduced mod p), ``a / b`` and
``a.inverse()`` division and inversion. Scalars are plain ``int`` in [0, p).
"""

from __future__ import annotations

import hashlib
from abc import ABC, abstractmethod
from functools import cached_property
from typing import Iterable, Sequence

from ..rng import RandomStream

H2G1_DST = b"AUDITLAB-H2G1-V1"
H2S_DST = b"AUDITLAB-H2S-V1"
SCALAR_BYTES = 32

GROUPS = ("G1", "G2", "GT")


class EncodingError(ValueError):
    """Raised when bytes are not the canonical encoding of an element or scalar."""


class GroupElement(ABC):
    group: str

    @abstractmethod
    def __mul__(self, other): ...

    @abstractmethod
    def __pow__(self, k: int): ...

    @abstractmethod
    def inverse(self): ...

    @abstractmethod
    def to_bytes(self) -> bytes: ...

    @abstractmethod
    def is_identity(self) -> bool: ...

    def __truediv__(self, other):
        return self * other.inverse()

    def hex(self) -> str:
        return self.to_bytes().hex()


class GroupSuite(ABC):
    """Pairing context: order p, generators of G1/G2, the map e and the hashes."""

    p: int
    backend_id: str

    @property
    @abstractmethod
    def g1_gen(self) -> GroupElement: ...

    @property
    @abstractmethod
    def g2_gen(self) -> GroupElement: ...

    @property
    @abstractmethod
    def g1_identity(self) -> GroupElement: ...

    @property
    @abstractmethod
    def g2_identity(self) -> GroupElement: ...

    @property
    @abstractmethod
    def gt_identity(self) -> GroupElement: ...

    @abstractmethod
    def pair(self, a: GroupElement, b: GroupElement) -> GroupElement: ...

    @abstractmethod
    def hash_to_g1(self, label: bytes) -> GroupElement: ...

    @abstractmethod
    def decode(self, group: str, data: bytes) -> GroupElement: ...

    @abstractmethod
    def element_size(self, group: str) -> int: ...

    def multi_exp(self, bases: Sequence[GroupElement], exps: Sequence[int]) -> GroupElement:
        """prod(b ** k); backends override with a faster multi-scalar multiplication."""
        if len(bases) != len(exps):
            raise ValueError("bases and exponents differ in length")
        if not bases:
            raise ValueError("empty multi-exponentiation")
        acc = bases[0] ** exps[0]
        for b, k in zip(bases[1:], exps[1:]):
            acc = acc * (b ** k)
        return acc

    @cached_property
    def gt_gen(self) -> GroupElement:
        return self.pair(self.g1_gen, self.g2_gen)

    def hash_to_scalar(self, elem: GroupElement) -> int:
        """h(.): SHA-512 over the canonical GT encoding, reduced mod p."""
        if elem.group != "GT":
            raise TypeError("hash_to_scalar takes a GT element")
        digest = hashlib.sha512(H2S_DST + elem.to_bytes()).digest()
        return int.from_bytes(digest, "big") % self.p

    def hash_bytes_to_scalar(self, tag: bytes, data: bytes) -> int:
        return int.from_bytes(hashlib.sha512(tag + data).digest(), "big") % self.p

    def encode_scalar(self, k: int) -> bytes:
        if not 0 <= k < self.p:
            raise EncodingError(f"scalar {k} outside [0, p)")
        return k.to_bytes(SCALAR_BYTES, "big")

    def decode_scalar(self, data: bytes) -> int:
        if len(data) != SCALAR_BYTES:
            raise EncodingError("scalar encoding must be 32 bytes")
        k = int.from_bytes(data, "big")
        if k >= self.p:
            raise EncodingError("non-canonical scalar (>= p)")
        return k

    def random_scalar(self, stream: RandomStream) -> int:
        return stream.scalar(self.p)

    def random_nonzero(self, stream: RandomStream) -> int:
        return stream.nonzero_scalar(self.p)

    def random_g1(self, stream: RandomStream) -> GroupElement:
        """Uniform non-identity G1 element."""
        return self.g1_gen ** self.random_nonzero(stream)

    def inner(self, coeffs: Iterable[int], values: Iterable[int]) -> int:
        return sum(a * b for a, b in zip(coeffs, values)) % self.p

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.backend_id}>"
