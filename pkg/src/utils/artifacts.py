import json
import os
import tempfile
from typing import Any


def atomic_write_text(path: str, content: str, encoding: str = "utf-8") -> None:
    """Write via a sibling temp file and os.replace, so readers never see a partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix=".tmp_", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding=encoding, newline="") as f:
            f.write(content)
        os.replace(tmp_path, path)
    finally:
        try:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
        except OSError:
            pass


def atomic_write_json(path: str, data: Any) -> None:
    content = json.dumps(data, ensure_ascii=False, indent=2, default=str)
    atomic_write_text(path, content + "\n")
