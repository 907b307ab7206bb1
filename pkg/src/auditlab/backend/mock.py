"""Exponent-transcript backend.

Each element is stored as its discrete log with respect to the fixed generator
of its group, over a small prime p. The pairing multiplies exponents, so every
protocol equation can be re-checked with plain modular arithmetic. Offers no
security whatsoever; it exists to serve as an independent algebra oracle.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .base import GROUPS, EncodingError, GroupElement, GroupSuite


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d, s = d // 2, s + 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class MockElement(GroupElement):
    group: str
    exp: int
    p: int

    def _check(self, other: "MockElement") -> None:
        if not isinstance(other, MockElement) or other.group != self.group or other.p != self.p:
            raise TypeError(f"cannot combine {self.group}/{self.p} with {other!r}")

    def __mul__(self, other: "MockElement") -> "MockElement":
        self._check(other)
        return MockElement(self.group, (self.exp + other.exp) % self.p, self.p)

    def __pow__(self, k: int) -> "MockElement":
        return MockElement(self.group, self.exp * k % self.p, self.p)

    def inverse(self) -> "MockElement":
        return MockElement(self.group, -self.exp % self.p, self.p)

    def to_bytes(self) -> bytes:
        return self.exp.to_bytes(_width(self.p), "big")

    def is_identity(self) -> bool:
        return self.exp == 0

    def __repr__(self) -> str:
        return f"{self.group}^({self.exp} mod {self.p})"


def _width(p: int) -> int:
    return (p.bit_length() + 7) // 8


class MockSuite(GroupSuite):
    def __init__(self, p: int = 101):
        if not is_prime(p):
            raise ValueError(f"mock group order must be prime, got {p}")
        self.p = p
        self.backend_id = f"mock:{p}"

    def _elem(self, group: str, exp: int) -> MockElement:
        return MockElement(group, exp % self.p, self.p)

    @property
    def g1_gen(self):
        return self._elem("G1", 1)

    @property
    def g2_gen(self):
        return self._elem("G2", 1)

    @property
    def g1_identity(self):
        return self._elem("G1", 0)

    @property
    def g2_identity(self):
        return self._elem("G2", 0)

    @property
    def gt_identity(self):
        return self._elem("GT", 0)

    def pair(self, a: MockElement, b: MockElement) -> MockElement:
        if a.group != "G1" or b.group != "G2":
            raise TypeError("pair takes (G1, G2)")
        return self._elem("GT", a.exp * b.exp)

    def hash_to_g1(self, label: bytes) -> MockElement:
        if not label:
            raise ValueError("empty label")
        return self._elem("G1", int.from_bytes(hashlib.sha256(label).digest(), "big"))

    def element_size(self, group: str) -> int:
        return _width(self.p)

    def decode(self, group: str, data: bytes) -> MockElement:
        if group not in GROUPS:
            raise ValueError(f"unknown group {group}")
        if len(data) != _width(self.p):
            raise EncodingError(f"{group} encoding must be {_width(self.p)} bytes")
        exp = int.from_bytes(data, "big")
        if exp >= self.p:
            raise EncodingError(f"non-canonical {group} exponent")
        return MockElement(group, exp, self.p)

    def multi_exp(self, bases, exps):
        if len(bases) != len(exps):
            raise ValueError("bases and exponents differ in length")
        if not bases:
            raise ValueError("empty multi-exponentiation")
        return self._elem(bases[0].group, sum(b.exp * k for b, k in zip(bases, exps)))
