import json
import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.fixture(scope="session")
def tiny1():
    from labelcover import formats

    game = formats.parse_labelcover(fixture_text("tiny1.lc"))
    plant = formats.parse_assignment(fixture_text("tiny1.assign"))
    golden = json.loads(fixture_text("tiny1_golden.json"))
    return game, plant, golden


@pytest.fixture(scope="session")
def smooth1():
    from labelcover import formats

    game = formats.parse_labelcover(fixture_text("smooth1.lc"))
    plant = formats.parse_assignment(fixture_text("smooth1.assign"))
    return game, plant
