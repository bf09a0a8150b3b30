# paths.py
from pathlib import Path
import os

OUTPUT_DIR_ENV = "IISYM_OUTPUT_DIR"
LOG_FILE_ENV = "IISYM_LOG_FILE"
WORKERS_ENV = "IISYM_WORKERS"
HEIGHT_ENV = "IISYM_HEIGHT"


def canon(p: "Path | str", base: Path | None = None) -> Path:
    """Absolute form of an output, run-log or document path.

    Expands `~` and `$VARS`; relative paths are joined onto `base` when given.
    The target need not exist yet.
    """
    p = Path(os.path.expandvars(str(p))).expanduser()
    if not p.is_absolute() and base is not None:
        p = Path(base) / p
    try:
        return p.resolve(strict=False)
    except OSError:
        return p.absolute()


def output_dir(override: Path | None = None) -> Path:
    if override is not None:
        return canon(override)
    return canon(Path(os.getenv(OUTPUT_DIR_ENV, "./out")))


def log_file(out_dir: Path) -> Path:
    env = os.getenv(LOG_FILE_ENV)
    if env:
        return canon(Path(env))
    return out_dir / "logs" / "runs.jsonl"


def resolve_output(target: Path, out_dir: Path) -> Path:
    """Relative --output paths land inside the output directory."""
    return canon(target, base=out_dir)


def env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from e
