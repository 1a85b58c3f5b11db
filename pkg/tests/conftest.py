import pytest

from actriv.ball import build_ball


@pytest.fixture(scope="session")
def golden_ball():
    """Ball large enough to contain both published certificate endpoints
    (the T13 endpoint class needs cap 14 and depth 12)."""
    return build_ball(2, 14, 12)
