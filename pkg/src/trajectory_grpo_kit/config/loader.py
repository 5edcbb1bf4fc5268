"""
Config file and environment loading.

Config text is flat ``key = value`` lines; ``#`` starts a comment, blank
lines are ignored. Every key must be one of ``config_keys()`` and may appear
at most once. Environment overrides use ``TRAJ_KIT_<KEY>`` (upper-case key);
a ``.env`` file is read first when python-dotenv is installed.
"""

import os
from pathlib import Path
from typing import Dict, Mapping, Optional, Union

from ..core.exceptions import ConfigError
from ..core.logging import LoggerAdapter
from .run_config import RunConfig, config_keys

try:
    from dotenv import dotenv_values
    ENV_LOADER_AVAILABLE = True
except ImportError:
    dotenv_values = None
    ENV_LOADER_AVAILABLE = False

ENV_PREFIX = "TRAJ_KIT_"

_logger = LoggerAdapter.get_logger(__name__)


def parse_config_text(text: str) -> Dict[str, str]:
    """Split config text into raw key → value strings.

    Raises:
        ConfigError: malformed line, unknown key or duplicate key
    """
    known = set(config_keys())
    values: Dict[str, str] = {}
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(key=line, reason="expected 'key = value'", line_number=line_number)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(key=key, reason="unknown key", line_number=line_number)
        if key in values:
            raise ConfigError(key=key, reason="duplicate key", line_number=line_number)
        if not value:
            raise ConfigError(key=key, reason="missing value", line_number=line_number)
        values[key] = value
    return values


def load_config(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    """Parse config text into a validated RunConfig.

    Examples:
        >>> load_config("").num_steps
        25
        >>> load_config("group_size = 4").group_size
        4
    """
    return (base or RunConfig()).merge(parse_config_text(text))


def load_config_file(path: Union[str, Path], base: Optional[RunConfig] = None) -> RunConfig:
    """Read and parse a config file (FileNotFoundError propagates)."""
    text = Path(path).read_text(encoding="utf-8")
    config = load_config(text, base)
    _logger.debug(f"Loaded config from {path} (hash {config.config_hash()[:12]})")
    return config


def get_config_from_env(
    base: Optional[RunConfig] = None,
    env_file: Optional[Union[str, Path]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Overlay ``TRAJ_KIT_<KEY>`` variables on ``base``.

    Variables from ``env_file`` (python-dotenv) are applied first; the
    process environment wins over them.

    Args:
        base: Starting config (defaults when omitted)
        env_file: Optional ``.env`` path
        environ: Environment mapping (``os.environ`` when omitted)
    """
    merged: Dict[str, str] = {}
    if env_file is not None:
        if not ENV_LOADER_AVAILABLE:
            raise ImportError("python-dotenv not installed. Install with: pip install python-dotenv")
        merged.update({k: v for k, v in dotenv_values(env_file).items() if v is not None})
    merged.update(os.environ if environ is None else environ)

    overrides: Dict[str, str] = {}
    for key in config_keys():
        name = ENV_PREFIX + key.upper()
        if name in merged:
            overrides[key] = merged[name]
    if overrides:
        _logger.debug(f"Environment overrides: {sorted(overrides)}")
    return (base or RunConfig()).merge(overrides)
