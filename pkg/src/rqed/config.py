"""Flat key = value experiment configuration files.

The format is a single namespace of dotted keys (`atom.gamma = 60`), one
assignment per line, `#` or `;` comments, no sections.  Parse errors and
typed-access errors carry the originating line number and map to CLI exit
code 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

VALID_EXPERIMENTS = (
    "atom-solve",
    "spectrum-sweep",
    "anharmonicity-sweep",
    "circuit-sweep",
    "pulse",
    "resolvent-order",
    "gauge-sweep",
    "observables",
)


@dataclass
class ExperimentConfig:
    """Parsed key/value map with typed, line-number-aware accessors."""

    values: dict[str, str]
    lines: dict[str, int] = field(default_factory=dict)
    path: str = "<memory>"

    def _where(self, key: str) -> str:
        if key in self.lines:
            return f"{self.path}:{self.lines[key]}"
        return self.path

    def has(self, key: str) -> bool:
        return key in self.values

    def get_str(self, key: str, default: str | None = None) -> str:
        if key not in self.values:
            if default is not None:
                return default
            raise ConfigError(f"{self.path}: missing required key '{key}'")
        return self.values[key]

    def get_float(self, key: str, default: float | None = None) -> float:
        if key not in self.values:
            if default is not None:
                return default
            raise ConfigError(f"{self.path}: missing required key '{key}'")
        try:
            return float(self.values[key])
        except ValueError:
            raise ConfigError(
                f"{self._where(key)}: '{key}' = {self.values[key]!r} is not a number"
            ) from None

    def get_int(self, key: str, default: int | None = None) -> int:
        if key not in self.values:
            if default is not None:
                return default
            raise ConfigError(f"{self.path}: missing required key '{key}'")
        try:
            return int(self.values[key])
        except ValueError:
            raise ConfigError(
                f"{self._where(key)}: '{key}' = {self.values[key]!r} is not an integer"
            ) from None

    def get_bool(self, key: str, default: bool | None = None) -> bool:
        if key not in self.values:
            if default is not None:
                return default
            raise ConfigError(f"{self.path}: missing required key '{key}'")
        raw = self.values[key].strip().lower()
        if raw in ("true", "yes", "on", "1"):
            return True
        if raw in ("false", "no", "off", "0"):
            return False
        raise ConfigError(
            f"{self._where(key)}: '{key}' = {self.values[key]!r} is not a boolean"
        )

    def get_float_list(self, key: str, default: list[float] | None = None) -> list[float]:
        if key not in self.values:
            if default is not None:
                return list(default)
            raise ConfigError(f"{self.path}: missing required key '{key}'")
        try:
            return [float(tok) for tok in self.values[key].split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(
                f"{self._where(key)}: '{key}' is not a comma-separated number list"
            ) from None

    def get_str_list(self, key: str, default: list[str] | None = None) -> list[str]:
        if key not in self.values:
            if default is not None:
                return list(default)
            raise ConfigError(f"{self.path}: missing required key '{key}'")
        return [tok.strip() for tok in self.values[key].split(",") if tok.strip()]

    @property
    def experiment(self) -> str:
        exp = self.get_str("experiment")
        if exp not in VALID_EXPERIMENTS:
            raise ConfigError(
                f"{self._where('experiment')}: unknown experiment {exp!r}; "
                f"valid: {', '.join(VALID_EXPERIMENTS)}"
            )
        return exp


def parse_config_text(text: str, path: str = "<memory>") -> ExperimentConfig:
    values: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        if key in values:
            raise ConfigError(
                f"{path}:{lineno}: duplicate key '{key}' (first at line {lines[key]})"
            )
        values[key] = value
        lines[key] = lineno
    return ExperimentConfig(values=values, lines=lines, path=path)


def load_config(path) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from None
    return parse_config_text(text, path=str(p))
