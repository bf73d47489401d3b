import json

import pytest

from leafmatch import RunConfig


def test_defaults():
    c = RunConfig()
    assert (c.tension, c.spline_points, c.energy_points, c.dce_k, c.eta) == (10.0, 1000, 100, 20, 5)
    assert c.weights == (0.25, 0.25, 0.25, 0.25)
    assert c.frechet_points == 200


def test_json_round_trip(tmp_path):
    c = RunConfig(eta=3, weights=[0.1, 0.2, 0.3, 0.4], seed=9)
    assert RunConfig.from_dict(json.loads(c.to_json())) == c
    (tmp_path / "c.json").write_text(c.to_json())
    assert RunConfig.from_json_file(tmp_path / "c.json") == c


def test_sub_configs():
    c = RunConfig(lambda_=12.0, d_zeta=0.1)
    assert c.match_config().lambda_ == 12.0
    assert c.gnccp_config().d_zeta == 0.1
    assert c.spline_config().samples == 1000


@pytest.mark.parametrize("bad", [
    {"weights": (1, 2)}, {"eta": 0}, {"dce_k": 2}, {"energy_points": 4},
    {"lambda_": -1.0}, {"d_zeta": 0.0}, {"weights": (-1, 0, 0, 0)},
])
def test_invalid(bad):
    with pytest.raises(ValueError):
        RunConfig(**bad)


def test_unknown_keys():
    with pytest.raises(ValueError, match="unknown"):
        RunConfig.from_dict({"tension": 10, "colour": "red"})
