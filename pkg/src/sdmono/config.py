"""Run configuration loaded from a YAML document.

Schema (all keys except ``seed`` optional)::

    seed: 7                      # mandatory integer
    monopoles:
      heights: [1.0, 2.0]        # points on the z-axis, or
      # points: [[x, y, z], ...] # general points of upper half space
    lambda: 1.75                 # quadric parameter, 3/2 < lambda < 2
    tolerances:
      tau_geo: 1.0e-9
      tol_identity: 1.0e-9
      tol_curv: 1.0e-7
      tol_conf: 1.0e-8
      tol_span: 1.0e-9
    samples:
      identity: 1000
      curvature: 100
      conformality: 200
      sweep: 200
      ew: 1000
    suites: [curvature, conformality]   # default: all

Numbers may be written as strings (PyYAML reads ``1e-9`` without a dot as a
string).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from .hyperbolic import HyperbolicPoint
from .monopole import MonopoleConfig

SUITE_NAMES = (
    "connection-identity",
    "curvature",
    "conformality",
    "involution-group",
    "twistor-classification",
    "resolution-lift",
    "einstein-weyl",
)
TWISTOR_SUITES = frozenset({"twistor-classification", "resolution-lift", "einstein-weyl"})

DEFAULT_TOLERANCES = {"tau_geo": 1e-9, "tol_identity": 1e-9, "tol_curv": 1e-7, "tol_conf": 1e-8, "tol_span": 1e-9}
DEFAULT_SAMPLES = {"identity": 1000, "curvature": 100, "conformality": 200, "sweep": 200, "ew": 1000}


class ConfigError(ValueError):
    """Malformed or inconsistent configuration (a usage error)."""


def _num(x, what: str) -> float:
    try:
        return float(x)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be a number, got {x!r}") from None


@dataclass(frozen=True)
class RunConfig:
    seed: int
    heights: tuple | None = (1.0, 2.0)
    points: tuple | None = None
    lam: float = 1.75
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    samples: dict = field(default_factory=lambda: dict(DEFAULT_SAMPLES))
    suites: tuple = SUITE_NAMES

    def __post_init__(self):
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")
        for k, v in self.tolerances.items():
            if not v > 0:
                raise ConfigError(f"tolerance {k} must be positive")
        for k, v in self.samples.items():
            if v < 1:
                raise ConfigError(f"sample count {k} must be at least 1")
        bad = [s for s in self.suites if s not in SUITE_NAMES]
        if bad:
            raise ConfigError(f"unknown suite(s): {', '.join(bad)}")
        if TWISTOR_SUITES & set(self.suites) and not 1.5 < self.lam < 2.0:
            raise ConfigError(f"lambda must lie in (3/2, 2) for the twistor suites, got {self.lam}")
        try:
            self.monopoles()
        except ValueError as exc:
            raise ConfigError(f"invalid monopole configuration: {exc}") from None

    def monopoles(self) -> MonopoleConfig:
        if self.points is not None:
            return MonopoleConfig(tuple(HyperbolicPoint(*p) for p in self.points))
        return MonopoleConfig.from_heights(self.heights)

    def with_suites(self, suites) -> "RunConfig":
        return RunConfig(self.seed, self.heights, self.points, self.lam, self.tolerances, self.samples, tuple(suites))

    def with_seed(self, seed: int) -> "RunConfig":
        return RunConfig(seed, self.heights, self.points, self.lam, self.tolerances, self.samples, self.suites)

    def echo(self) -> dict:
        return {
            "seed": self.seed,
            "monopoles": {"points": [list(p) for p in self.points]} if self.points else {"heights": list(self.heights)},
            "lambda": self.lam,
            "tolerances": dict(self.tolerances),
            "samples": dict(self.samples),
            "suites": list(self.suites),
        }


def parse_config(data) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping")
    unknown = set(data) - {"seed", "monopoles", "lambda", "tolerances", "samples", "suites"}
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(sorted(unknown))}")
    if "seed" not in data:
        raise ConfigError("seed is mandatory")
    kw = {"seed": data["seed"]}
    mono = data.get("monopoles", {"heights": [1.0, 2.0]})
    if not isinstance(mono, dict) or len(set(mono) & {"heights", "points"}) != 1:
        raise ConfigError("monopoles needs exactly one of 'heights' or 'points'")
    if "heights" in mono:
        kw["heights"] = tuple(_num(h, "height") for h in mono["heights"])
    else:
        pts = []
        for p in mono["points"]:
            if not isinstance(p, (list, tuple)) or len(p) != 3:
                raise ConfigError("each point needs three coordinates")
            pts.append(tuple(_num(c, "coordinate") for c in p))
        kw["heights"], kw["points"] = None, tuple(pts)
    if "lambda" in data:
        kw["lam"] = _num(data["lambda"], "lambda")
    tol = dict(DEFAULT_TOLERANCES)
    for k, v in (data.get("tolerances") or {}).items():
        if k not in tol:
            raise ConfigError(f"unknown tolerance {k!r}")
        tol[k] = _num(v, k)
    kw["tolerances"] = tol
    smp = dict(DEFAULT_SAMPLES)
    for k, v in (data.get("samples") or {}).items():
        if k not in smp:
            raise ConfigError(f"unknown sample count {k!r}")
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"sample count {k} must be an integer")
        smp[k] = v
    kw["samples"] = smp
    suites = data.get("suites", ["all"])
    if isinstance(suites, str):
        suites = [suites]
    kw["suites"] = SUITE_NAMES if list(suites) == ["all"] else tuple(suites)
    return RunConfig(**kw)


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML in {path}: {exc}") from None
    return parse_config(data)
