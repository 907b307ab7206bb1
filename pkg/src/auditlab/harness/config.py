from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from pathlib import Path

from ..errors import ConfigError

PROTOCOLS = ("tpa", "zkpa")
ATTACKS = ("none", "scenario1", "scenario2", "guess-tpa", "guess-zkpa")
CORRUPTIONS = ("none", "all", "one")
GUESS_MODES = ("guess-tpa", "guess-zkpa")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a world built from ``seed`` and ``trials`` audits against it.

    ``domain`` bounds block values to [0, domain); None means all of Z_p.
    ``guess_domain`` is the per-index candidate set size for guessing modes
    (candidates 0..guess_domain-1) and must be absent otherwise.
    """

    protocol: str = "tpa"
    n: int = 64
    c: int = 16
    domain: int | None = None
    trials: int = 100
    attack: str = "none"
    corruption: str = "none"
    guess_domain: int | None = None
    exhaustive: bool = True
    backend: str = "real"
    seed: int = 0

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"protocol must be one of {PROTOCOLS}")
        if self.attack not in ATTACKS:
            raise ConfigError(f"attack must be one of {ATTACKS}")
        if self.corruption not in CORRUPTIONS:
            raise ConfigError(f"corruption must be one of {CORRUPTIONS}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not 1 <= self.c <= self.n:
            raise ConfigError("need 1 <= c <= n")
        if self.domain is not None and self.domain < 1:
            raise ConfigError("domain must be positive")
        if (self.attack in GUESS_MODES) != (self.guess_domain is not None):
            raise ConfigError("guess_domain is required for guessing attacks and only for them")
        if self.attack == "guess-tpa" and self.protocol != "tpa":
            raise ConfigError("guess-tpa runs against the tpa protocol")
        if self.attack == "guess-zkpa" and self.protocol != "zkpa":
            raise ConfigError("guess-zkpa runs against the zkpa protocol")
        if self.attack in GUESS_MODES and self.corruption != "none":
            raise ConfigError("guessing attacks run on uncorrupted storage")
        if self.attack == "scenario1" and self.protocol != "tpa":
            raise ConfigError("scenario1 forgery is defined for the tpa protocol only")
        if self.guess_domain is not None and self.guess_domain < 1:
            raise ConfigError("guess_domain must be positive")

    @property
    def is_guess(self) -> bool:
        return self.attack in GUESS_MODES

    def items(self) -> list[tuple[str, str]]:
        out = []
        for key, value in asdict(self).items():
            if value is None:
                value = "-"
            elif isinstance(value, bool):
                value = int(value)
            out.append((key, str(value)))
        return out

    @classmethod
    def from_mapping(cls, raw: dict[str, str]) -> "ExperimentConfig":
        kwargs = {}
        types = {f.name: f.type for f in fields(cls)}
        for key, value in raw.items():
            key = key.strip().replace("-", "_")
            if key not in types:
                raise ConfigError(f"unknown config key {key!r}")
            value = value.strip()
            kind = types[key]
            try:
                if value in ("-", "", "none") and "None" in kind:
                    kwargs[key] = None
                elif kind == "bool":
                    kwargs[key] = value.lower() in ("1", "true", "yes")
                elif kind.startswith("int"):
                    kwargs[key] = int(value, 0)
                else:
                    kwargs[key] = value
            except ValueError:
                raise ConfigError(f"bad value for {key}: {value!r}") from None
        return cls(**kwargs)

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        """Flat ``key = value`` lines; blank lines and ``#`` comments ignored."""
        raw = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"line {lineno}: expected key = value")
            raw[key.strip()] = value
        return cls.from_mapping(raw)

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text())
