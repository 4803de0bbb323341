from src.isl.errors import (
    BadInputs,
    NoUncoveredGraph,
    QuadratureFail,
    SizeExceeded,
    exit_code_for,
)


def test_smoke() -> None:
    assert exit_code_for(BadInputs("x")) == 2
    assert exit_code_for(SizeExceeded("d", 30, 20)) == 3
    assert exit_code_for(QuadratureFail("x")) == 3
    assert exit_code_for(NoUncoveredGraph("x")) == 1
    assert exit_code_for(RuntimeError("x")) == 1
