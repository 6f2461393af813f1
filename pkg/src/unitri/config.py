"""Run configurations and their flat key=value file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

from unitri.errors import UsageError

COMMANDS = ("tv-curve", "bound-curve", "spectrum", "superclasses", "words", "compare", "verify")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    command: str = "verify"
    n: int | None = None
    p: int | None = None
    walk: str | None = None
    t: int = 0
    t_max: int | None = None
    eps: float | None = None
    format: str = "csv"
    out: str | None = None
    exact: bool = False
    jobs: int = 1
    budget: int | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; expected one of {COMMANDS}")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")
        if self.jobs < 1:
            raise UsageError("jobs must be >= 1")
        if self.t < 0 or (self.t_max is not None and self.t_max < self.t):
            raise UsageError("need 0 <= t <= t-max")
        if self.eps is not None and not 0 < self.eps < 1:
            raise UsageError("eps must lie in (0, 1)")
        if self.budget is not None and self.budget <= 0:
            raise UsageError("budget must be positive")

    def replace(self, **changes) -> RunConfig:
        return dataclasses.replace(self, **changes)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, bool):
                v = "true" if v else "false"
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"{f.name.replace('_', '-')}={v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> RunConfig:
        return cls(**parse_config_text(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> RunConfig:
        return cls.from_text(Path(path).read_text())


_TYPES = {
    "n": int,
    "p": int,
    "t": int,
    "t_max": int,
    "jobs": int,
    "budget": int,
    "eps": float,
    "exact": bool,
}


def _convert(key: str, raw: str):
    kind = _TYPES.get(key, str)
    if kind is bool:
        low = raw.lower()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise UsageError(f"{key} expects true/false, got {raw!r}")
    try:
        return kind(raw)
    except ValueError as exc:
        raise UsageError(f"{key} expects {kind.__name__}, got {raw!r}") from exc


def parse_config_text(text: str) -> dict:
    """Parse key=value lines; blank lines and # comments are skipped."""
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key=value")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _convert(key, raw)
    return out
