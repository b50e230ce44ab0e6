import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from riskforge import parse

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def ehealth_text() -> str:
    return (FIXTURES / "ehealth.riskdsl").read_text()


@pytest.fixture(scope="session")
def ehealth(ehealth_text):
    return parse(ehealth_text)


@pytest.fixture(scope="session")
def ehealth_rounded():
    return parse((FIXTURES / "ehealth_rounded.riskdsl").read_text())


@pytest.fixture(scope="session")
def ehealth_path() -> str:
    return str(FIXTURES / "ehealth.riskdsl")
