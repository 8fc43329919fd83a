from __future__ import annotations

from pathlib import Path

import pytest

from mltg.documents import Hierarchy, parse_hierarchy, parse_rule

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture(scope="session")
def samples_dir() -> Path:
    return SAMPLES


@pytest.fixture(scope="session")
def hammer() -> Hierarchy:
    return parse_hierarchy((SAMPLES / "hammer.hier").read_text())


@pytest.fixture(scope="session")
def stool() -> Hierarchy:
    return parse_hierarchy((SAMPLES / "stool.hier").read_text())


@pytest.fixture(scope="session")
def plain_rule():
    return parse_rule((SAMPLES / "create_part.rule").read_text())


@pytest.fixture(scope="session")
def full_rule():
    return parse_rule((SAMPLES / "create_part_full.rule").read_text())


@pytest.fixture(scope="session")
def remove_rule():
    return parse_rule((SAMPLES / "remove_part.rule").read_text())
