# core/persistence.py
import json
import os
from threading import Lock
from typing import Dict, List, Optional

from core.errors import SchemeNotFound
from core.log_utils import get_logger
from core.scheme import FoldingScheme
from core.scheme_file import load_scheme_file, scheme_to_dict
from core.settings import PROJECT_ROOT, SCHEME_DIR, SCHEMES_CONFIG

logger = get_logger("folding.persistence", "Library")


def load_registry(path: str = SCHEMES_CONFIG) -> Dict[str, str]:
    """name -> absolute file path from a [{"name": ..., "file": ...}] registry."""
    if not os.path.exists(path):
        return {}
    with open(path, "r", encoding="utf-8") as f:
        try:
            items = json.load(f)
        except json.JSONDecodeError as e:
            logger.warning(f"⚠️ registry {path} unreadable: {e}")
            return {}
    out = {}
    for item in items if isinstance(items, list) else []:
        name, file = item.get("name"), item.get("file")
        if not name or not file:
            continue
        out[name] = file if os.path.isabs(file) else os.path.join(PROJECT_ROOT, file)
    return out


class SchemeLibrary:
    """
    Directory of named scheme files.

    Attributes:
        directory: where <name>.json files live
        registry: bundled names from the registry file
    Behavior:
        resolve(arg) accepts a file path, a registry name or a library name
    """

    def __init__(self, directory: str = SCHEME_DIR, registry_path: Optional[str] = SCHEMES_CONFIG):
        self.directory = directory
        self.lock = Lock()
        self.registry = load_registry(registry_path) if registry_path else {}
        self._ensure_dir()

    def _ensure_dir(self):
        if not os.path.isdir(self.directory):
            os.makedirs(self.directory, exist_ok=True)

    def path_for(self, name: str) -> str:
        return os.path.join(self.directory, f"{name}.json")

    def names(self) -> List[str]:
        with self.lock:
            found = {f[:-5] for f in os.listdir(self.directory) if f.endswith(".json")}
        return sorted(found | set(self.registry))

    def resolve(self, arg: str) -> str:
        if os.path.isfile(arg):
            return arg
        if arg in self.registry and os.path.isfile(self.registry[arg]):
            return self.registry[arg]
        path = self.path_for(arg)
        if os.path.isfile(path):
            return path
        raise SchemeNotFound(f"no scheme file or library entry named {arg!r}", name=arg)

    def load(self, arg: str) -> FoldingScheme:
        path = self.resolve(arg)
        with self.lock:
            return load_scheme_file(path)

    def save(self, scheme: FoldingScheme, name: Optional[str] = None) -> str:
        name = name or scheme.name
        if not name:
            raise ValueError("scheme needs a name to be saved")
        path = self.path_for(name)
        with self.lock:
            with open(path, "w", encoding="utf-8") as f:
                json.dump(scheme_to_dict(scheme), f, indent=2)
                f.write("\n")
        logger.info(f"✅ saved scheme '{name}' to {path}")
        return path
