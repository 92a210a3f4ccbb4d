"""
Strict loading of experiment configuration files (JSON or TOML).
"""

import json
import logging
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

from .errors import ConfigurationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

DEFAULT_GRID = 512
DEFAULT_TOL = 1e-11
DEFAULT_OUT = "./cr_discs_out"
SUBCOMMANDS = ("bishop", "defect", "deform-rank", "wedge", "isotopy", "approx", "remove", "selftest")
TOP_LEVEL_KEYS = ("scenario", "grid", "tol", "seed", "out", "tolerances") + SUBCOMMANDS


def find_line(text: Optional[str], key: str, start: int = 1) -> Optional[int]:
    """First line at or after ``start`` where ``key`` appears as a JSON or TOML key."""
    if not text:
        return None
    pattern = re.compile(r'^\s*(?:"{0}"\s*:|{0}\s*=|\[{0}\])|[{{,]\s*"{0}"\s*:'.format(re.escape(key)))
    for number, line in enumerate(text.splitlines(), start=1):
        if number >= start and pattern.search(line):
            return number
    return None


def check_keys(
    data: Dict[str, Any],
    allowed: Iterable[str],
    where: str,
    text: Optional[str] = None,
    start: int = 1,
) -> None:
    """
    Reject keys outside ``allowed``.

    Raises:
        ConfigurationError: naming the first unknown key and, with source text, its line
    """
    allowed = set(allowed)
    for key in data:
        if key not in allowed:
            raise ConfigurationError(
                f"unknown key '{key}' in {where} (allowed: {', '.join(sorted(allowed))})",
                find_line(text, key, start),
            )


def check_grid(size: Any, line: Optional[int] = None) -> int:
    if isinstance(size, bool) or not isinstance(size, int):
        raise ConfigurationError(f"grid size must be an integer, got {size!r}", line)
    if size < 16 or size & (size - 1):
        raise ConfigurationError(f"grid size {size} is invalid: size must be a power of two >= 16", line)
    return size


def check_positive(name: str, value: Any, line: Optional[int] = None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
        raise ConfigurationError(f"{name} must be a positive number, got {value!r}", line)
    return float(value)


def parse_text(text: str, suffix: str) -> Dict[str, Any]:
    """Parse JSON or TOML source text into a dictionary."""
    try:
        if suffix == ".toml":
            return tomllib.loads(text)
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"invalid JSON: {e.msg}", e.lineno)
    except tomllib.TOMLDecodeError as e:
        match = re.search(r"line (\d+)", str(e))
        raise ConfigurationError(f"invalid TOML: {e}", int(match.group(1)) if match else None)
    if not isinstance(data, dict):
        raise ConfigurationError("configuration must be a JSON object", 1)
    return data


def read_file(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"configuration file not found: {path}")
    text = path.read_text(encoding="utf-8")
    data = parse_text(text, path.suffix.lower())
    data["__source__"] = text
    return data


@dataclass
class ExperimentConfig:
    """File-level settings shared by every subcommand, plus one block per subcommand."""
    scenario: Optional[str] = None
    grid: int = DEFAULT_GRID
    tol: float = DEFAULT_TOL
    seed: int = 0
    out: str = DEFAULT_OUT
    tolerances: Dict[str, float] = field(default_factory=dict)
    blocks: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    source: Optional[str] = field(default=None, repr=False)
    base_dir: Optional[str] = field(default=None, repr=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], source: Optional[str] = None) -> "ExperimentConfig":
        data = dict(data)
        source = data.pop("__source__", source)
        check_keys(data, TOP_LEVEL_KEYS, "configuration", source)
        config = cls(source=source)
        if "scenario" in data:
            if not isinstance(data["scenario"], str):
                raise ConfigurationError("scenario must be a file path or bundled name", find_line(source, "scenario"))
            config.scenario = data["scenario"]
        if "grid" in data:
            config.grid = check_grid(data["grid"], find_line(source, "grid"))
        if "tol" in data:
            config.tol = check_positive("tol", data["tol"], find_line(source, "tol"))
        if "seed" in data:
            seed = data["seed"]
            if isinstance(seed, bool) or not isinstance(seed, int):
                raise ConfigurationError(f"seed must be an integer, got {seed!r}", find_line(source, "seed"))
            config.seed = seed
        if "out" in data:
            config.out = str(data["out"])
        tolerances = data.get("tolerances", {})
        if not isinstance(tolerances, dict):
            raise ConfigurationError("tolerances must be a table", find_line(source, "tolerances"))
        for name, value in tolerances.items():
            config.tolerances[name] = check_positive(f"tolerance '{name}'", value, find_line(source, name))
        for name in SUBCOMMANDS:
            if name in data:
                if not isinstance(data[name], dict):
                    raise ConfigurationError(f"block '{name}' must be a table", find_line(source, name))
                config.blocks[name] = dict(data[name])
        return config

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        config = cls.from_dict(read_file(path))
        config.base_dir = str(Path(path).resolve().parent)
        logger.debug("Loaded configuration from %s", path)
        return config

    def override(
        self,
        grid: Optional[int] = None,
        tol: Optional[float] = None,
        seed: Optional[int] = None,
        out: Optional[str] = None,
    ) -> "ExperimentConfig":
        """Apply command-line overrides in place and return self."""
        if grid is not None:
            self.grid = check_grid(grid)
        if tol is not None:
            self.tol = check_positive("tol", tol)
        if seed is not None:
            self.seed = seed
        if out is not None:
            self.out = out
        return self

    def block(self, name: str, defaults: Dict[str, Any]) -> Dict[str, Any]:
        """Defaults for a subcommand overridden by its block, with unknown keys rejected."""
        given = self.blocks.get(name, {})
        check_keys(given, defaults, f"block '{name}'", self.source, find_line(self.source, name) or 1)
        merged = dict(defaults)
        merged.update(given)
        return merged

    def line_of(self, key: str) -> Optional[int]:
        return find_line(self.source, key)

    def to_dict(self) -> Dict[str, Any]:
        """Canonical form used for the manifest hash."""
        return {
            "scenario": self.scenario,
            "grid": self.grid,
            "tol": self.tol,
            "seed": self.seed,
            "tolerances": dict(sorted(self.tolerances.items())),
            "blocks": {name: self.blocks[name] for name in sorted(self.blocks)},
        }
