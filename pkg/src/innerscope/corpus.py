"""Access to the bundled example corpus."""

from __future__ import annotations

import importlib.resources
import os


def data_dir() -> str:
    return os.fspath(importlib.resources.files("innerscope") / "data")


def data_path(name: str) -> str:
    if not name.endswith(".json"):
        name += ".json"
    path = os.path.join(data_dir(), name)
    if not os.path.exists(path):
        raise FileNotFoundError("no bundled file named %r" % name)
    return path


def names() -> list[str]:
    return sorted(n[:-5] for n in os.listdir(data_dir()) if n.endswith(".json"))
