"""Encodings: canonical key-value text for wire messages, AUDL1 binary containers.

Wire messages are single lines of space-separated ``key=value`` pairs in a fixed
key order, with group elements and scalars hex-encoded, e.g.::

    msg=response proto=TPA v=1 mu=... sigma=... R=...

Containers hold keys and stored files::

    b"AUDL1" | kind (1 byte) | backend id (u16 length + ascii) | fields (u32 length + bytes)*
"""

from __future__ import annotations

import re
import struct
from typing import Iterable

from .backend import EncodingError, GroupSuite
from .tpa import AuditResponse, Challenge, FileTag, PublicKey, StoredFile, UserKeys
from .zkpa import ZkpaResponse

MAGIC = b"AUDL1"
WIRE_VERSION = "1"
_VALUE = re.compile(r"^[A-Za-z0-9_.:,>+\-/()^]+$")
_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


# -- key-value lines ---------------------------------------------------------

def encode_kv(pairs: Iterable[tuple[str, object]]) -> str:
    out = []
    for key, value in pairs:
        value = str(value)
        if not _KEY.match(key) or not _VALUE.match(value):
            raise EncodingError(f"cannot encode {key}={value!r}")
        out.append(f"{key}={value}")
    return " ".join(out)


def decode_kv(line: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for token in line.strip().split(" "):
        key, sep, value = token.partition("=")
        if not sep or not _KEY.match(key) or not _VALUE.match(value):
            raise EncodingError(f"malformed field {token!r}")
        if key in fields:
            raise EncodingError(f"duplicate field {key!r}")
        fields[key] = value
    return fields


def _hex(data: bytes) -> str:
    return data.hex()


def _unhex(value: str) -> bytes:
    if len(value) % 2 or value != value.lower():
        raise EncodingError("hex fields must be lowercase with an even length")
    try:
        return bytes.fromhex(value)
    except ValueError:
        raise EncodingError(f"bad hex {value[:16]!r}") from None


def _scalar(suite: GroupSuite, value: str) -> int:
    return suite.decode_scalar(_unhex(value))


def _require(fields: dict[str, str], *keys: str) -> None:
    missing = [k for k in keys if k not in fields]
    if missing:
        raise EncodingError(f"message lacks fields {missing}")
    extra = [k for k in fields if k not in keys]
    if extra:
        raise EncodingError(f"unexpected fields {extra}")


# -- wire messages -----------------------------------------------------------

def encode_challenge(suite: GroupSuite, chal: Challenge, protocol: str) -> str:
    entries = ",".join(f"{i}:{_hex(suite.encode_scalar(nu))}" for i, nu in chal.entries)
    return encode_kv([("msg", "challenge"), ("proto", protocol.upper()), ("v", WIRE_VERSION), ("entries", entries)])


def decode_challenge(suite: GroupSuite, text: str) -> Challenge:
    f = decode_kv(text)
    _require(f, "msg", "proto", "v", "entries")
    if f["msg"] != "challenge":
        raise EncodingError("not a challenge message")
    entries = []
    for item in f["entries"].split(","):
        idx, sep, nu = item.partition(":")
        if not sep or not idx.isdigit() or str(int(idx)) != idx:
            raise EncodingError(f"bad challenge entry {item!r}")
        entries.append((int(idx), _scalar(suite, nu)))
    return Challenge(tuple(entries))


def encode_response(suite: GroupSuite, resp: AuditResponse | ZkpaResponse) -> str:
    if isinstance(resp, ZkpaResponse):
        return encode_kv([
            ("msg", "response"), ("proto", "ZKPA"), ("v", WIRE_VERSION),
            ("varsigma", _hex(suite.encode_scalar(resp.varsigma))),
            ("mu", _hex(suite.encode_scalar(resp.mu))),
            ("Sigma", resp.Sigma.hex()),
            ("R", resp.R.hex()),
        ])
    return encode_kv([
        ("msg", "response"), ("proto", "TPA"), ("v", WIRE_VERSION),
        ("mu", _hex(suite.encode_scalar(resp.mu))),
        ("sigma", resp.sigma.hex()),
        ("R", resp.R.hex()),
    ])


def decode_response(suite: GroupSuite, text: str) -> AuditResponse | ZkpaResponse:
    f = decode_kv(text)
    if f.get("msg") != "response" or f.get("v") != WIRE_VERSION:
        raise EncodingError("not a version-1 response message")
    if f.get("proto") == "TPA":
        _require(f, "msg", "proto", "v", "mu", "sigma", "R")
        return AuditResponse(
            _scalar(suite, f["mu"]),
            suite.decode("G1", _unhex(f["sigma"])),
            suite.decode("GT", _unhex(f["R"])),
        )
    if f.get("proto") == "ZKPA":
        _require(f, "msg", "proto", "v", "varsigma", "mu", "Sigma", "R")
        return ZkpaResponse(
            _scalar(suite, f["varsigma"]),
            _scalar(suite, f["mu"]),
            suite.decode("G1", _unhex(f["Sigma"])),
            suite.decode("GT", _unhex(f["R"])),
        )
    raise EncodingError(f"unknown protocol {f.get('proto')!r}")


def encode_tag(tag: FileTag, n: int) -> str:
    # n travels unsigned next to t: the auditor is assumed to know it
    return encode_kv([("msg", "tag"), ("n", n), ("t", _hex(tag.to_bytes()))])


def decode_tag(text: str) -> tuple[FileTag, int]:
    f = decode_kv(text)
    _require(f, "msg", "n", "t")
    if f["msg"] != "tag" or not f["n"].isdigit():
        raise EncodingError("not a tag message")
    return FileTag.from_bytes(_unhex(f["t"])), int(f["n"])


def tag_request() -> str:
    return encode_kv([("msg", "tag-request")])


# -- binary containers -------------------------------------------------------

def _pack_fields(kind: bytes, backend_id: str, fields: list[bytes]) -> bytes:
    bid = backend_id.encode("ascii")
    out = [MAGIC, kind, struct.pack(">H", len(bid)), bid]
    for item in fields:
        out.append(struct.pack(">I", len(item)))
        out.append(item)
    return b"".join(out)


def _unpack_fields(data: bytes, kind: bytes) -> tuple[str, list[bytes]]:
    if data[:5] != MAGIC:
        raise EncodingError("not an AUDL1 container")
    if data[5:6] != kind:
        raise EncodingError(f"expected container kind {kind!r}, found {data[5:6]!r}")
    try:
        (blen,) = struct.unpack_from(">H", data, 6)
        pos = 8 + blen
        backend_id = data[8:pos].decode("ascii")
        fields = []
        while pos < len(data):
            (flen,) = struct.unpack_from(">I", data, pos)
            pos += 4
            if pos + flen > len(data):
                raise EncodingError("truncated container field")
            fields.append(data[pos:pos + flen])
            pos += flen
    except (struct.error, UnicodeDecodeError) as exc:
        raise EncodingError(f"truncated container: {exc}") from None
    return backend_id, fields


def _check_backend(suite: GroupSuite, backend_id: str) -> None:
    if backend_id != suite.backend_id:
        raise EncodingError(f"container is for backend {backend_id}, not {suite.backend_id}")


def dump_keys(suite: GroupSuite, keys: UserKeys) -> bytes:
    return _pack_fields(b"K", suite.backend_id, [
        suite.encode_scalar(keys.x), suite.encode_scalar(keys.ssk),
        keys.spk.to_bytes(), keys.v.to_bytes(), keys.g.to_bytes(), keys.u.to_bytes(), keys.e_uv.to_bytes(),
    ])


def load_keys(suite: GroupSuite, data: bytes) -> UserKeys:
    backend_id, f = _unpack_fields(data, b"K")
    _check_backend(suite, backend_id)
    if len(f) != 7:
        raise EncodingError("key container must have 7 fields")
    keys = UserKeys(
        x=suite.decode_scalar(f[0]), ssk=suite.decode_scalar(f[1]),
        spk=suite.decode("G2", f[2]), v=suite.decode("G2", f[3]), g=suite.decode("G2", f[4]),
        u=suite.decode("G1", f[5]), e_uv=suite.decode("GT", f[6]),
    )
    if keys.v != suite.g2_gen ** keys.x or keys.spk != suite.g2_gen ** keys.ssk:
        raise EncodingError("key container is inconsistent")
    return keys


def dump_public_key(suite: GroupSuite, pk: PublicKey) -> bytes:
    return _pack_fields(b"P", suite.backend_id, [
        pk.spk.to_bytes(), pk.v.to_bytes(), pk.g.to_bytes(), pk.u.to_bytes(), pk.e_uv.to_bytes(),
    ])


def load_public_key(suite: GroupSuite, data: bytes) -> PublicKey:
    backend_id, f = _unpack_fields(data, b"P")
    _check_backend(suite, backend_id)
    if len(f) != 5:
        raise EncodingError("public-key container must have 5 fields")
    return PublicKey(
        spk=suite.decode("G2", f[0]), v=suite.decode("G2", f[1]), g=suite.decode("G2", f[2]),
        u=suite.decode("G1", f[3]), e_uv=suite.decode("GT", f[4]),
    )


def dump_file(suite: GroupSuite, file: StoredFile) -> bytes:
    fields = [suite.encode_scalar(file.name), struct.pack(">I", file.n), file.tag.to_bytes()]
    fields += [suite.encode_scalar(m) for m in file.blocks]
    fields += [s.to_bytes() for s in file.authenticators]
    return _pack_fields(b"F", suite.backend_id, fields)


def load_file(suite: GroupSuite, data: bytes) -> StoredFile:
    backend_id, f = _unpack_fields(data, b"F")
    _check_backend(suite, backend_id)
    if len(f) < 3 or len(f[1]) != 4:
        raise EncodingError("file container header is malformed")
    (n,) = struct.unpack(">I", f[1])
    if len(f) != 3 + 2 * n:
        raise EncodingError(f"file container should hold {n} blocks and authenticators")
    name = suite.decode_scalar(f[0])
    tag = FileTag.from_bytes(f[2])
    if tag.name != name:
        raise EncodingError("file tag names a different file")
    blocks = tuple(suite.decode_scalar(b) for b in f[3:3 + n])
    sigmas = tuple(suite.decode("G1", s) for s in f[3 + n:])
    return StoredFile(name, blocks, sigmas, tag)
