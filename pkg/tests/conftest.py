import sys
from textwrap import dedent

import pytest
from cgaopt.load import default_space
from cgaopt.space import ParameterSpace, ParameterSpec


@pytest.fixture(scope="module")
def rx_space() -> ParameterSpace:
    return default_space()


@pytest.fixture(scope="module")
def small_space() -> ParameterSpace:
    """Five free variables with eleven grid points each"""
    return ParameterSpace(
        [ParameterSpec(name=f"x{i}", min=0, max=10, step=1, initial=5) for i in range(5)]
    )


@pytest.fixture(scope="module")
def tied_space() -> ParameterSpace:
    return ParameterSpace(
        [
            ParameterSpec(name="a", min=0, max=1, step=0.25, initial=0.5),
            ParameterSpec(name="b", min=0, max=4, step=1, initial=2),
            ParameterSpec(name="c", min=0, max=4, step=1, initial=2),
            ParameterSpec(name="d", min=3, max=3, step=1, initial=3),
        ],
        tie_groups=[["b", "c"]],
    )


@pytest.fixture
def stub_simulator(tmp_path):
    """Write a python script acting as a simulator and return the command
    running it"""

    def make(body: str, name: str = "stub.py") -> list[str]:
        script = tmp_path / name
        script.write_text(dedent(body))
        return [sys.executable, str(script), "{netlist}"]

    return make
