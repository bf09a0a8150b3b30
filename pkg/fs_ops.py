# fs_ops.py
import json, time
from pathlib import Path

from filelock import FileLock

LOCK_TIMEOUT_S = 30


def _lock_for(p: Path) -> FileLock:
    return FileLock(str(p) + ".lock", timeout=LOCK_TIMEOUT_S)


def append_log(logfile: Path, record: dict) -> None:
    logfile.parent.mkdir(parents=True, exist_ok=True)
    with _lock_for(logfile):
        with logfile.open("a", encoding="utf-8") as f:
            f.write(
                json.dumps({"ts": int(time.time()), **record}, ensure_ascii=False) + "\n"
            )


def read_log(logfile: Path, command: str | None = None) -> list[dict]:
    """
    Parse runs.jsonl; skips lines that are not JSON objects.
    """
    if not logfile.exists():
        return []
    records = []
    with logfile.open("r", encoding="utf-8") as f:
        for line in f:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                continue
            if not isinstance(obj, dict):
                continue
            if command is None or obj.get("command") == command:
                records.append(obj)
    return records


def write_document(target: Path, text: str) -> Path:
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = target.with_name(target.name + ".tmp")
    with _lock_for(target):
        tmp.write_text(text, encoding="utf-8")
        tmp.replace(target)
    return target
