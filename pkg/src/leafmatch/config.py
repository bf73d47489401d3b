"""Run configuration shared by the pipeline and the command line."""

import json
from dataclasses import asdict, dataclass, fields

from .energy import BundleConfig, EnergyWeights
from .geometry import PERIMETER
from .gnccp import GnccpConfig
from .spline import SplineConfig
from .subgraph import MatchConfig


@dataclass(frozen=True)
class RunConfig:
    tension: float = 10.0
    spline_points: int = 1000
    energy_points: int = 100
    frechet_points: int = 200
    screen_points: int = 50
    dce_k: int = 20
    smooth_window: int = 9
    lambda_: float = 0.5 * PERIMETER
    nn_reject: float = 0.1 * PERIMETER
    eta: int = 5
    mappings: int = 40
    refine_top: int = 2
    weights: tuple = (0.25, 0.25, 0.25, 0.25)
    d_zeta: float = 0.05
    gnccp_inner_tol: float = 1e-3
    gnccp_max_inner: int = 100
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.weights) != 4:
            raise ValueError("weights needs 4 entries")
        if self.eta < 1:
            raise ValueError("eta must be >= 1")
        if self.mappings < 1 or self.refine_top < 1:
            raise ValueError("mappings and refine_top must be >= 1")
        if self.dce_k < 3:
            raise ValueError("dce_k must be >= 3")
        if self.energy_points < 8 or self.spline_points < 8 or self.frechet_points < 2 or self.screen_points < 3:
            raise ValueError("point counts too small")
        # sub-configs validate the rest
        self.match_config()
        self.energy_weights()
        self.gnccp_config()
        self.spline_config()

    def spline_config(self):
        return SplineConfig(tension=self.tension, samples=self.spline_points)

    def match_config(self):
        return MatchConfig(lambda_=self.lambda_, nn_reject=self.nn_reject)

    def energy_weights(self):
        return EnergyWeights(*self.weights)

    def gnccp_config(self):
        return GnccpConfig(d_zeta=self.d_zeta, inner_tol=self.gnccp_inner_tol, max_inner=self.gnccp_max_inner)

    def bundle_config(self):
        return BundleConfig()

    def to_dict(self):
        d = asdict(self)
        d["weights"] = list(self.weights)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json_file(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))
