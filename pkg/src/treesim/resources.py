"""Access to the data files shipped inside the package.

Bundled content: per-language fixture programs under data/fixtures/<lang>/,
the two case-study code pairs under data/appendix/, the demo JSONL dataset,
recorded LLM responses for replay mode, and the grammar manifest.
"""

from __future__ import annotations

from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent / "data"
FIXTURES_DIR = DATA_DIR / "fixtures"
APPENDIX_DIR = DATA_DIR / "appendix"

CASE_PAIRS = {
    # name -> (file_1, file_2, language)
    "loop": ("loop_pair_1.java", "loop_pair_2.java", "java"),
    "max": ("max_pair_1.py", "max_pair_2.py", "python"),
}


def fixture_files(language: str | None = None) -> list[Path]:
    """Bundled example programs, optionally restricted to one language."""
    if language is not None:
        root = FIXTURES_DIR / language
        if not root.is_dir():
            raise ValueError(f"no bundled fixtures for language {language!r}")
        return sorted(root.iterdir())
    return sorted(p for p in FIXTURES_DIR.rglob("*") if p.is_file())


def fixture_languages() -> list[str]:
    return sorted(p.name for p in FIXTURES_DIR.iterdir() if p.is_dir())


def case_pair(name: str) -> tuple[str, str, str]:
    """A case-study pair: (code_1, code_2, language)."""
    try:
        file_1, file_2, language = CASE_PAIRS[name]
    except KeyError:
        raise ValueError(f"unknown case pair {name!r}; have: {sorted(CASE_PAIRS)}") from None
    code_1 = (APPENDIX_DIR / file_1).read_text(encoding="utf-8")
    code_2 = (APPENDIX_DIR / file_2).read_text(encoding="utf-8")
    return code_1, code_2, language


def dataset_path(name: str = "mini") -> Path:
    return DATA_DIR / f"{name}.jsonl"


def recorded_responses_path() -> Path:
    return DATA_DIR / "recorded_llm_responses.json"
