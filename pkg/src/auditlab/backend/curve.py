"""BLS12-381 backend (type-3 pairing) on top of the compiled arkworks binding."""

from __future__ import annotations

from .base import H2G1_DST, EncodingError, GroupElement, GroupSuite

try:
    from .. import _bls12381 as _native
except ImportError as exc:  # pragma: no cover - exercised only on broken installs
    _native = None
    _IMPORT_ERROR = exc

SIZES = {"G1": 48, "G2": 96, "GT": 576}


class _CurveElement(GroupElement):
    __slots__ = ("raw", "_bytes")
    group = ""
    _order = 0

    def __init__(self, raw):
        self.raw = raw
        self._bytes = None

    def _wrap(self, raw):
        return type(self)(raw)

    def _k(self, k: int) -> bytes:
        return (k % self._order).to_bytes(32, "big")

    def __mul__(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {self.group} with {other!r}")
        return self._wrap(self.raw.add(other.raw))

    def __pow__(self, k: int):
        return self._wrap(self.raw.mul(self._k(k)))

    def inverse(self):
        return self._wrap(self.raw.neg())

    def to_bytes(self) -> bytes:
        if self._bytes is None:
            self._bytes = self.raw.to_bytes()
        return self._bytes

    def is_identity(self) -> bool:
        return self.raw.is_identity()

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and self.raw.equals(other.raw)

    def __hash__(self) -> int:
        return hash((self.group, self.to_bytes()))

    def __repr__(self) -> str:
        return f"{self.group}<{self.to_bytes()[:8].hex()}..>"


class G1Point(_CurveElement):
    __slots__ = ()
    group = "G1"


class G2Point(_CurveElement):
    __slots__ = ()
    group = "G2"


class GTElement(_CurveElement):
    __slots__ = ()
    group = "GT"

    def __mul__(self, other):
        if type(other) is not GTElement:
            raise TypeError(f"cannot combine GT with {other!r}")
        return GTElement(self.raw.mul(other.raw))

    def __pow__(self, k: int):
        return GTElement(self.raw.pow(self._k(k)))

    def inverse(self):
        return GTElement(self.raw.inv())


_CLASSES = {"G1": G1Point, "G2": G2Point, "GT": GTElement}


class CurveSuite(GroupSuite):
    def __init__(self):
        if _native is None:
            raise RuntimeError(f"native BLS12-381 extension unavailable: {_IMPORT_ERROR}")
        self.p = int.from_bytes(_native.order(), "big")
        self.backend_id = "real"
        for cls in _CLASSES.values():
            cls._order = self.p
        self._g1 = G1Point(_native.G1.generator())
        self._g2 = G2Point(_native.G2.generator())

    @property
    def g1_gen(self):
        return self._g1

    @property
    def g2_gen(self):
        return self._g2

    @property
    def g1_identity(self):
        return G1Point(_native.G1.identity())

    @property
    def g2_identity(self):
        return G2Point(_native.G2.identity())

    @property
    def gt_identity(self):
        return GTElement(_native.GT.identity())

    def pair(self, a, b):
        if type(a) is not G1Point or type(b) is not G2Point:
            raise TypeError("pair takes (G1, G2)")
        return GTElement(_native.pairing(a.raw, b.raw))

    def hash_to_g1(self, label: bytes):
        if not label:
            raise ValueError("empty label")
        return G1Point(_native.G1.hash(label, H2G1_DST))

    def element_size(self, group: str) -> int:
        return SIZES[group]

    def decode(self, group: str, data: bytes):
        native_cls = {"G1": _native.G1, "G2": _native.G2, "GT": _native.GT}.get(group)
        if native_cls is None:
            raise ValueError(f"unknown group {group}")
        try:
            raw = native_cls.from_bytes(bytes(data))
        except ValueError as exc:
            raise EncodingError(str(exc)) from None
        elem = _CLASSES[group](raw)
        # arkworks tolerates a few flag-bit variants; only the canonical form is accepted
        if elem.to_bytes() != bytes(data):
            raise EncodingError(f"non-canonical {group} encoding")
        return elem

    def multi_exp(self, bases, exps):
        if len(bases) != len(exps):
            raise ValueError("bases and exponents differ in length")
        if not bases:
            raise ValueError("empty multi-exponentiation")
        group = bases[0].group
        if group == "GT":
            return super().multi_exp(bases, exps)
        packed = b"".join((k % self.p).to_bytes(32, "big") for k in exps)
        native_cls = _native.G1 if group == "G1" else _native.G2
        return _CLASSES[group](native_cls.msm([b.raw for b in bases], packed))
