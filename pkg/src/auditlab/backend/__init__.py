"""Bilinear-group backends: the real BLS12-381 curve and the mock exponent oracle."""

from __future__ import annotations

from functools import lru_cache

from .base import (
    H2G1_DST,
    H2S_DST,
    SCALAR_BYTES,
    EncodingError,
    GroupElement,
    GroupSuite,
)
from .mock import MockElement, MockSuite


@lru_cache(maxsize=None)
def get_suite(backend_id: str = "real") -> GroupSuite:
    """Return the suite for ``"real"``, ``"mock"`` (p=101) or ``"mock:<prime>"``."""
    if backend_id == "real":
        from .curve import CurveSuite

        return CurveSuite()
    if backend_id == "mock":
        return MockSuite(101)
    if backend_id.startswith("mock:"):
        return MockSuite(int(backend_id[5:]))
    raise ValueError(f"unknown backend {backend_id!r}")


__all__ = [
    "H2G1_DST",
    "H2S_DST",
    "SCALAR_BYTES",
    "EncodingError",
    "GroupElement",
    "GroupSuite",
    "MockElement",
    "MockSuite",
    "get_suite",
]
