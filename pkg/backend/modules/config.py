"""
Runtime settings for the MCWC toolkit
Values come from the environment (optionally a .env file) so that the CLI,
the Flask service and the test-suite share one source of limits and defaults.
"""
import os
from dataclasses import dataclass, replace
import logging

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

_BACKEND_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEFAULT_REFERENCE_TABLE = os.path.join(_BACKEND_DIR, 'data', 'reference_values.csv')


def _int_env(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"⚠️ Ignoring non-integer {name}={raw!r}, using {default}")
        return default


def _float_env(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"⚠️ Ignoring non-numeric {name}={raw!r}, using {default}")
        return default


@dataclass(frozen=True)
class Settings:
    """Limits and defaults shared by every module"""
    field_cap: int = 4096
    vertex_cap: int = 20000
    node_budget: int = 10_000_000
    construction_cap: int = 4096
    reference_table: str = DEFAULT_REFERENCE_TABLE
    s_eps_ratio: float = 1e-3
    threads: int = 1
    log_level: str = 'INFO'

    @classmethod
    def from_env(cls):
        """Build settings from MCWC_* environment variables"""
        return cls(
            field_cap=_int_env('MCWC_FIELD_CAP', cls.field_cap),
            vertex_cap=_int_env('MCWC_VERTEX_CAP', cls.vertex_cap),
            node_budget=_int_env('MCWC_NODE_BUDGET', cls.node_budget),
            construction_cap=_int_env('MCWC_CONSTRUCTION_CAP', cls.construction_cap),
            reference_table=os.getenv('MCWC_REFERENCE_TABLE', DEFAULT_REFERENCE_TABLE),
            s_eps_ratio=_float_env('MCWC_S_EPS_RATIO', cls.s_eps_ratio),
            threads=max(1, _int_env('MCWC_THREADS', cls.threads)),
            log_level=os.getenv('MCWC_LOG_LEVEL', cls.log_level).upper(),
        )

    def override(self, **changes):
        """Copy with the non-None keyword values applied (CLI flags win)"""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


# Initialize global settings instance
settings = Settings.from_env()
