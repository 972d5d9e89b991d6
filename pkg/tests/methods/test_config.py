from dataclasses import replace
from typing import Any

import pytest

from monge_ampere.enums import Method
from monge_ampere.methods.config import MethodConfig


def test_defaults_valid() -> None:
    MethodConfig().validate()


@pytest.mark.parametrize(
    "changes",
    [
        {"alpha": 0.0},
        {"alpha": 1.0},
        {"alpha": -0.5},
        {"tolerance": 0.0},
        {"delta": -1e-3},
        {"stencil_width": 0},
        {"max_iterations": 0},
        {"dt": -1.0},
        {"newton_backtrack": 1.0},
        {"newton_min_step": 0.0},
        {"g0": -0.1},
        {"patience": 0},
        {"poisson_tolerance": 0.0},
    ],
)
def test_validate(changes: dict[str, Any]) -> None:
    with pytest.raises(ValueError):
        replace(MethodConfig(), **changes).validate()


@pytest.mark.parametrize(
    "method,n,expected",
    [
        (Method.A_EULER, 31, 9610),
        (Method.A_NEWTON, 31, 50),
        (Method.B, 127, 5000),
        (Method.C, 5, 5000),
    ],
)
def test_iteration_cap(method: Method, n: int, expected: int) -> None:
    assert MethodConfig().iteration_cap(method, n) == expected
    assert MethodConfig(max_iterations=7).iteration_cap(method, n) == 7
