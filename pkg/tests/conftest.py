from __future__ import annotations

import functools
from pathlib import Path

import pytest

from reflectionlab.rootsys import build_root_system

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "golden"

# every ambient with at most 20 positive roots that has a root model
SMALL_AMBIENTS = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("A", 5), ("B", 2), ("B", 3), ("B", 4),
                  ("C", 3), ("C", 4), ("D", 4), ("D", 5), ("G", 2), ("H", 3)]

# criterion number -> (title, passed); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@functools.lru_cache(maxsize=None)
def ambient(family: str, rank: int):
    return build_root_system(family, rank)


def read_golden(stem: str) -> list[list[dict]]:
    """Blocks of rows from a golden table; a row is a dict keyed by column."""
    lines = [l for l in (GOLDEN / f"{stem}.md").read_text(encoding="utf-8").splitlines() if l.startswith("|")]
    head = [c.strip().replace("\\|", "|") for c in lines[0].strip("|").split(" | ")]
    names = {"Type of R": "type", "λ": "parameter", "|R|": "order", "|[R]|": "class_size", "Class": "class"}
    cols = [names[h] for h in head]
    blocks: list[list[dict]] = [[]]
    for line in lines[2:]:
        cells = [c.strip() for c in line.strip()[1:-1].split(" | ")]
        if all(c == "---" for c in cells):
            blocks.append([])
            continue
        row = dict(zip(cols, cells))
        row["order"], row["class_size"] = int(row["order"]), int(row["class_size"])
        blocks[-1].append(row)
    return blocks


@pytest.fixture
def cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("REFLECTIONLAB_CACHE", str(tmp_path / "cache"))
    return tmp_path / "cache"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
