from pydantic_settings import BaseSettings, SettingsConfigDict
from pathlib import Path
from typing import Optional
import os
from dotenv import load_dotenv
load_dotenv(os.path.join(os.path.dirname(__file__), "../.env"))

DEFAULT_OUT_DIR = Path("runs")
DEFAULT_THREADS = max(1, os.cpu_count() or 1)


class Settings(BaseSettings):
    # Only the output directory may come from the environment; everything
    # else that shapes a run lives in the experiment config file.
    out_dir: Optional[Path] = None

    model_config = SettingsConfigDict(
        env_prefix="FZK_",
        env_file=(".env", "../.env"),
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    def resolve_out_dir(self, explicit: Optional[Path], kind: str) -> Path:
        """Explicit directory (CLI or config file) wins, then FZK_OUT_DIR, then runs/<kind>."""
        if explicit is not None:
            return Path(explicit)
        if self.out_dir is not None:
            return self.out_dir
        return DEFAULT_OUT_DIR / kind


settings = Settings()
