"""Language registry: source text + language id -> SyntaxTree.

Each registered language resolves to exactly one backend.  A manifest file
pins the backend id and version per language; parsing refuses to run against
a manifest that disagrees with the compiled-in registry, which is the point
of the pin (node-kind inventories differ between grammar versions, and
silently mixing them would corrupt comparisons).

Backends are pure functions, so every call effectively gets a fresh parser
instance; the returned trees are immutable and safe to share across workers.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from ..tree import SyntaxTree
from . import bash, cfamily, python_backend, ruby, sql

MANIFEST_ENV = "TREESIM_GRAMMAR_PATH"
MANIFEST_NAME = "grammar_manifest.json"

_DATA_DIR = Path(__file__).resolve().parent.parent / "data"


class UnknownLanguageError(ValueError):
    """Raised for a language id absent from the registry."""


class BackendFailureError(RuntimeError):
    """Raised when a backend cannot run or the grammar pin does not match."""


@dataclass(frozen=True)
class BackendInfo:
    language: str
    backend_id: str
    version: str
    fn: Callable[[str, bool], SyntaxTree]


def _cfamily(language: str) -> Callable[[str, bool], SyntaxTree]:
    def run(source: str, include_leaf_text: bool) -> SyntaxTree:
        return cfamily.parse(source, language, include_leaf_text)

    return run


_REGISTRY: dict[str, BackendInfo] = {
    "python": BackendInfo("python", "stdlib-ast", "1.0", lambda s, t: python_backend.parse(s, t)),
    "java": BackendInfo("java", "cfamily-rd", "1.0", _cfamily("java")),
    "javascript": BackendInfo("javascript", "cfamily-rd", "1.0", _cfamily("javascript")),
    "typescript": BackendInfo("typescript", "cfamily-rd", "1.0", _cfamily("typescript")),
    "csharp": BackendInfo("csharp", "cfamily-rd", "1.0", _cfamily("csharp")),
    "kotlin": BackendInfo("kotlin", "cfamily-rd", "1.0", _cfamily("kotlin")),
    "ruby": BackendInfo("ruby", "ruby-rd", "1.0", lambda s, t: ruby.parse(s, t)),
    "bash": BackendInfo("bash", "bash-rd", "1.0", lambda s, t: bash.parse(s, t)),
    "sql": BackendInfo("sql", "sql-rd", "1.0", lambda s, t: sql.parse(s, t)),
}


def supported_languages() -> list[str]:
    return sorted(_REGISTRY)


def manifest_path() -> Path:
    """Bundled manifest, unless the environment points somewhere else."""
    override = os.environ.get(MANIFEST_ENV)
    if override:
        path = Path(override)
        if path.is_dir():
            path = path / MANIFEST_NAME
        return path
    return _DATA_DIR / MANIFEST_NAME


def load_manifest() -> dict:
    path = manifest_path()
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise BackendFailureError(f"grammar manifest unreadable: {path} ({exc})") from exc
    except json.JSONDecodeError as exc:
        raise BackendFailureError(f"grammar manifest malformed: {path} ({exc})") from exc


_PIN_CACHE: set[tuple[str, str]] = set()


def _check_pin(info: BackendInfo) -> None:
    cache_key = (str(manifest_path()), info.language)
    if cache_key in _PIN_CACHE:
        return
    manifest = load_manifest()
    entry = manifest.get("languages", {}).get(info.language)
    if entry is None:
        raise BackendFailureError(
            f"grammar unavailable: {info.language!r} missing from manifest {manifest_path()}"
        )
    pinned = (entry.get("backend"), entry.get("version"))
    if pinned != (info.backend_id, info.version):
        raise BackendFailureError(
            f"grammar pin mismatch for {info.language!r}: manifest has "
            f"{pinned[0]}/{pinned[1]}, registry has {info.backend_id}/{info.version}"
        )
    _PIN_CACHE.add(cache_key)


def _resolve(language) -> BackendInfo:
    name = str(language).strip().lower()
    info = _REGISTRY.get(name)
    if info is None:
        known = ", ".join(supported_languages())
        raise UnknownLanguageError(f"unknown language {language!r}; supported: {known}")
    return info


def parse(source, language, include_leaf_text: bool = False) -> SyntaxTree:
    """Parse source text for a registered language; never raises on bad code.

    Malformed input comes back as a tree containing ERROR nodes with
    had_parse_errors set.  Only an unknown language or an unusable grammar
    (manifest pin mismatch) raises.
    """
    info = _resolve(language)
    _check_pin(info)
    if isinstance(source, bytes):
        source = source.decode("utf-8", errors="replace")
    return info.fn(source, include_leaf_text)


def parse_pair(pred, ref, language, include_leaf_text: bool = False):
    """Parse both sides with the same backend and label configuration."""
    info = _resolve(language)
    _check_pin(info)
    sides = []
    for name, text in (("pred", pred), ("ref", ref)):
        if isinstance(text, bytes):
            text = text.decode("utf-8", errors="replace")
        try:
            sides.append(info.fn(text, include_leaf_text))
        except Exception as exc:  # backends should be total; keep the label if not
            raise BackendFailureError(f"{name}: {info.language} backend failed: {exc}") from exc
    return sides[0], sides[1]
