import os
import logging
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """Runtime knobs, read from the environment (and a .env file)."""

    enumeration_budget: int = Field(default=10**6, ge=1)
    seed: int = Field(default=0, ge=0)
    random_samples: int = Field(default=20, ge=0)
    retry_budget: int = Field(default=2000, ge=1)
    exhaustive_limit: int = Field(default=4096, ge=1)
    log_level: str = 'INFO'
    log_file: Optional[str] = 'leibniz.log'

    @classmethod
    def from_env(cls, **overrides) -> 'Settings':
        load_dotenv()
        values = {}
        env_map = {
            'enumeration_budget': 'LEIBNIZ_BUDGET',
            'seed': 'LEIBNIZ_SEED',
            'random_samples': 'LEIBNIZ_RANDOM_SAMPLES',
            'retry_budget': 'LEIBNIZ_RETRY_BUDGET',
            'exhaustive_limit': 'LEIBNIZ_EXHAUSTIVE_LIMIT',
            'log_level': 'LEIBNIZ_LOG_LEVEL',
            'log_file': 'LEIBNIZ_LOG_FILE',
        }
        for key, var in env_map.items():
            raw = os.getenv(var)
            if raw is None:
                continue
            # Remove any trailing comments, as in hand-edited .env files
            raw = raw.split('#')[0].strip()
            if key == 'log_file' and not raw:
                values[key] = None
            elif raw:
                values[key] = raw
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def configure_logging(settings: Settings) -> None:
    handlers = [logging.StreamHandler()]
    if settings.log_file:
        handlers.insert(0, logging.FileHandler(settings.log_file))
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )
