"""TOML run configuration merged with command-line overrides."""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .backends import HttpBackend, MockBackend
from .errors import ConfigError
from .prompt import PromptOptions


@dataclass(frozen=True)
class BackendConfig:
    kind: str = "mock"
    base_url: str | None = None
    model: str = "default"
    retries: int = 3
    backoff: float = 0.5
    timeout: float = 60.0
    max_output_tokens: int = 1024
    temperature: float = 0.0


@dataclass(frozen=True)
class PromptConfig:
    include_speech: bool = True
    include_captions: bool = True
    modality_prefixes: bool = True
    include_asr_end: bool = False
    task_text: str | None = None


@dataclass(frozen=True)
class CliConfig:
    backend: BackendConfig = field(default_factory=BackendConfig)
    window_tokens: int = 15_000
    prompt: PromptConfig = field(default_factory=PromptConfig)
    two_stage: bool = False
    mode: str = "iterative"
    jobs: int | None = None
    seed: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    def prompt_options(self) -> PromptOptions:
        try:
            return PromptOptions(**asdict(self.prompt))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def make_backend(self):
        b = self.backend
        if b.kind == "mock":
            return MockBackend(seed=self.seed)
        if b.kind == "http":
            if not b.base_url:
                raise ConfigError("[backend] base_url is required for the http backend")
            return HttpBackend(
                b.base_url, b.model, retries=b.retries, backoff=b.backoff, timeout=b.timeout
            )
        raise ConfigError(f"unknown backend kind {b.kind!r}")


def _section(cls, data: Any, name: str):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"[{name}] must be a table")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown keys in [{name}]: {', '.join(sorted(unknown))}")
    return cls(**data)


def load_config(path: str | Path | None) -> CliConfig:
    if path is None:
        return CliConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc

    unknown = set(data) - {"backend", "windowing", "prompt", "run"}
    if unknown:
        raise ConfigError(f"unknown config sections: {', '.join(sorted(unknown))}")
    windowing = data.get("windowing") or {}
    run = data.get("run") or {}
    if set(windowing) - {"window_tokens"}:
        raise ConfigError("[windowing] accepts only window_tokens")
    if set(run) - {"two_stage", "mode", "jobs", "seed"}:
        raise ConfigError("[run] accepts two_stage, mode, jobs, seed")
    cfg = CliConfig(
        backend=_section(BackendConfig, data.get("backend"), "backend"),
        prompt=_section(PromptConfig, data.get("prompt"), "prompt"),
        window_tokens=windowing.get("window_tokens", CliConfig.window_tokens),
        **run,
    )
    return cfg


def apply_overrides(cfg: CliConfig, **overrides: Any) -> CliConfig:
    """Flags win over file values; ``None`` means "not given"."""
    backend_keys = {"backend_kind": "kind", "base_url": "base_url", "model": "model"}
    backend = cfg.backend
    top = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key in backend_keys:
            backend = replace(backend, **{backend_keys[key]: value})
        else:
            top[key] = value
    cfg = replace(cfg, backend=backend, **top)
    if cfg.mode not in ("iterative", "first"):
        raise ConfigError(f"mode must be 'iterative' or 'first', got {cfg.mode!r}")
    if cfg.window_tokens < 1:
        raise ConfigError("window_tokens must be positive")
    if cfg.jobs is not None and cfg.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    return cfg
