"""Audit transcripts: newline-delimited canonical key-value records.

The first line is the header (format tag, world source, experiment config,
trial index); every later line has a ``rec`` kind: ``wire`` (one per message
image, sent and, when an interceptor rewrote it, delivered), ``event``,
``error``, ``verdict``, ``guess``, ``attack`` and ``outcome``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..backend import EncodingError
from ..codec import decode_kv, encode_kv
from ..errors import CorruptTranscript

FORMAT = "AUDLT1"
_RECORD_KINDS = {"header", "wire", "event", "error", "verdict", "attack", "guess", "outcome"}


@dataclass
class AuditTranscript:
    header: list[tuple[str, str]]
    records: list[list[tuple[str, str]]] = field(default_factory=list)

    def add(self, kind: str, *pairs: tuple[str, object]) -> None:
        self.records.append([("rec", kind)] + [(k, str(v)) for k, v in pairs])

    def lines(self) -> list[str]:
        head = encode_kv([("rec", "header"), ("format", FORMAT)] + self.header)
        return [head] + [encode_kv(r) for r in self.records]

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    @property
    def protocol(self) -> str:
        return dict(self.header)["protocol"]

    @property
    def seed(self) -> str:
        return dict(self.header)["seed"]

    @property
    def verdict(self) -> bool | None:
        for rec in self.records:
            if rec[0] == ("rec", "verdict"):
                return dict(rec)["result"] == "accept"
        return None


@dataclass
class ParsedTranscript:
    header: dict[str, str]
    records: list[dict[str, str]]
    lines: list[str]

    def of_kind(self, kind: str) -> list[dict[str, str]]:
        return [r for r in self.records if r["rec"] == kind]

    @property
    def verdict(self) -> bool | None:
        found = self.of_kind("verdict")
        if not found:
            return None
        return found[-1].get("result") == "accept"


def parse_transcript(text: str) -> ParsedTranscript:
    lines = text.splitlines()
    if not lines:
        raise CorruptTranscript("empty transcript")
    records = []
    for lineno, line in enumerate(lines, start=1):
        try:
            rec = decode_kv(line)
        except EncodingError as exc:
            raise CorruptTranscript(f"line {lineno}: {exc}") from None
        if rec.get("rec") not in _RECORD_KINDS:
            raise CorruptTranscript(f"line {lineno}: unknown record kind {rec.get('rec')!r}")
        records.append(rec)
    header = records[0]
    if header["rec"] != "header" or header.get("format") != FORMAT:
        raise CorruptTranscript("first line must be an AUDLT1 header")
    return ParsedTranscript(header, records[1:], lines)


WIRE_META = ("rec", "seq", "dir", "image", "via")


def wire_message(record: dict[str, str]) -> str:
    """Re-encode the message carried by a wire record, without the envelope."""
    return encode_kv([(k, v) for k, v in record.items() if k not in WIRE_META])
