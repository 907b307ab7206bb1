"""On-disk world state for the CLI: keys, the original file, the server's copy.

Layout of a state directory::

    meta.txt        backend=... seed=...
    keys.bin        user key container (never handed to the auditor role)
    public.bin      public key container
    original.bin    file as outsourced
    stored.bin      file as the server holds it (after any corruption)
    corruption.txt  cumulative corruption spec applied to stored.bin
"""

from __future__ import annotations

import hashlib
from pathlib import Path

from .. import codec
from ..attacks import CorruptionSpec, apply_corruption
from ..backend import GroupSuite, get_suite
from ..codec import decode_kv, encode_kv
from ..errors import ConfigError
from ..rng import RandomStream
from ..tpa import StoredFile, UserKeys
from .roles import User

STATE_FILES = ("meta.txt", "keys.bin", "public.bin", "original.bin", "stored.bin", "corruption.txt")
# blocks cut from a byte file stay below 2^248, so they are injective mod p on the curve
CHUNK_BYTES = 31


def world_stream(seed: int) -> RandomStream:
    return RandomStream(seed).child("world")


def generate_blocks(suite: GroupSuite, n: int, domain: int | None, stream: RandomStream) -> list[int]:
    if domain is None:
        return [suite.random_scalar(stream) for _ in range(n)]
    return [stream.randbelow(domain) % suite.p for _ in range(n)]


def blocks_from_bytes(suite: GroupSuite, data: bytes, n: int) -> list[int]:
    """Cut ``data`` into n equal chunks (zero padded) and read each big-endian."""
    if n < 1:
        raise ConfigError("need at least one block")
    size = max(1, -(-len(data) // n))
    if size > CHUNK_BYTES:
        raise ConfigError(f"{len(data)} bytes do not fit in {n} blocks of {CHUNK_BYTES} bytes")
    data = data.ljust(size * n, b"\0")
    return [int.from_bytes(data[k * size:(k + 1) * size], "big") % suite.p for k in range(n)]


def _meta(path: Path) -> dict[str, str]:
    try:
        return decode_kv((path / "meta.txt").read_text())
    except FileNotFoundError:
        raise ConfigError(f"{path} has no meta.txt; run setup first") from None


def setup(path: Path, backend: str, seed: int) -> UserKeys:
    suite = get_suite(backend)
    path.mkdir(parents=True, exist_ok=True)
    user = User.setup(suite, world_stream(seed).child("keys"))
    (path / "meta.txt").write_text(encode_kv([("backend", backend), ("seed", seed)]) + "\n")
    (path / "keys.bin").write_bytes(codec.dump_keys(suite, user.keys))
    (path / "public.bin").write_bytes(codec.dump_public_key(suite, user.keys.public))
    for stale in ("original.bin", "stored.bin", "corruption.txt"):
        (path / stale).unlink(missing_ok=True)
    return user.keys


def load_suite(path: Path) -> tuple[GroupSuite, int]:
    meta = _meta(path)
    return get_suite(meta["backend"]), int(meta["seed"])


def load_keys(path: Path) -> tuple[GroupSuite, UserKeys]:
    suite, _ = load_suite(path)
    return suite, codec.load_keys(suite, (path / "keys.bin").read_bytes())


def upload(path: Path, blocks: list[int] | None = None, n: int | None = None,
           domain: int | None = None) -> StoredFile:
    """Outsource ``blocks`` (or n generated ones) and reset the server copy."""
    suite, keys = load_keys(path)
    _, seed = load_suite(path)
    stream = world_stream(seed)
    if blocks is None:
        blocks = generate_blocks(suite, n, domain, stream.child("blocks"))
    file = User(suite, keys).outsource(blocks, stream.child("siggen"))
    data = codec.dump_file(suite, file)
    (path / "original.bin").write_bytes(data)
    (path / "stored.bin").write_bytes(data)
    (path / "corruption.txt").write_text("")
    return file


def load_files(path: Path, suite: GroupSuite) -> tuple[StoredFile, StoredFile, CorruptionSpec]:
    try:
        original = codec.load_file(suite, (path / "original.bin").read_bytes())
        stored = codec.load_file(suite, (path / "stored.bin").read_bytes())
    except FileNotFoundError:
        raise ConfigError(f"{path} holds no uploaded file; run upload first") from None
    spec = CorruptionSpec.from_text((path / "corruption.txt").read_text())
    return original, stored, spec


def corrupt(path: Path, spec: CorruptionSpec) -> StoredFile:
    """Apply ``spec`` on top of the server copy and accumulate it."""
    suite, _ = load_suite(path)
    _, stored, previous = load_files(path, suite)
    stored = apply_corruption(suite, stored, spec)
    merged = dict(previous.deltas)
    for i, beta in spec.deltas.items():
        merged[i] = (merged.get(i, 0) + beta) % suite.p
    (path / "stored.bin").write_bytes(codec.dump_file(suite, stored))
    (path / "corruption.txt").write_text(CorruptionSpec(merged).to_text())
    return stored


def digest(path: Path) -> str:
    h = hashlib.sha256()
    for name in STATE_FILES:
        f = path / name
        data = f.read_bytes() if f.exists() else b""
        h.update(name.encode() + b"\0" + len(data).to_bytes(8, "big") + data)
    return h.hexdigest()[:32]
