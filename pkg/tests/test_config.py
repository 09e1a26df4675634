"""Tests for run configuration validation."""

import pytest

from ncp_maps.core.config import MAX_ENV_DIM, RunConfig


def test_defaults() -> None:
    config = RunConfig(command="eigencurve")
    assert config.fmt == "csv"
    assert config.output_path is None
    assert config.max_env_dim == MAX_ENV_DIM


@pytest.mark.parametrize(
    ("kwargs", "message"),
    [
        ({"grid_step": 0.0}, "grid_step"),
        ({"grid_step": 0.6}, "grid_step"),
        ({"t_samples": 4}, "t_samples"),
        ({"fmt": "xml"}, "format must be one of"),
        ({"a1": 0.8, "a2": 0.8}, "must not exceed 1"),
        ({"c": 1.0}, "c must be in"),
        ({"max_env_dim": 0}, "max_env_dim"),
    ],
)
def test_invalid_values(kwargs: dict[str, object], message: str) -> None:
    with pytest.raises(ValueError, match=message):
        RunConfig(command="test", **kwargs)  # type: ignore[arg-type]


def test_unit_correlation_allowed() -> None:
    config = RunConfig(command="info", a1=0.6, a2=0.8)
    assert config.a1**2 + config.a2**2 == pytest.approx(1.0)
