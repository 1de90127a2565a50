"""Scenario files: one YAML document describing a sum, an MC budget, an
output grid and the cdf levels to probe.

Schema (all sections optional except components):

    components:
      n: 8
      mu_db: 0.0          # scalar (common) or list of length n
      sigma_db: 3.0       # scalar or list
      rho: 0.7            # equicorrelation shorthand ...
      # corr: [[1.0, 0.7], [0.7, 1.0]]   # ... or the full matrix
    mc:
      samples: 10000000
      seed: 1
      chunk_size: 65536
    grid:
      min_db: -20.0
      max_db: 40.0
      step_db: 0.5
    levels: [0.5, 0.9, 0.99, 0.999]
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import yaml

from .corrstruct import LognormalSumSpec
from .errors import InputError

DEFAULT_SAMPLES = 10_000_000
DEFAULT_SEED = 1
DEFAULT_LEVELS = (0.5, 0.9, 0.99, 0.999)


@dataclass(frozen=True)
class Grid:
    min_db: float
    max_db: float
    step_db: float

    def __post_init__(self):
        if not (self.step_db > 0.0):
            raise InputError(f"grid step_db must be > 0, got {self.step_db}")
        if not (self.max_db > self.min_db):
            raise InputError("grid max_db must exceed min_db")

    def values_db(self):
        n = int(np.floor((self.max_db - self.min_db) / self.step_db + 1e-9)) + 1
        return self.min_db + self.step_db * np.arange(n)


@dataclass(frozen=True)
class Scenario:
    spec: LognormalSumSpec
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    chunk_size: int = 1 << 16
    grid: Grid = field(default_factory=lambda: Grid(-30.0, 50.0, 0.5))
    levels: tuple = DEFAULT_LEVELS


def _as_vector(value, n, name):
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim == 0:
        return np.full(n, float(arr))
    if arr.shape != (n,):
        raise InputError(f"{name} must be a scalar or a list of length {n}")
    return arr


def _build_spec(comp) -> LognormalSumSpec:
    if not isinstance(comp, dict):
        raise InputError("components section must be a mapping")
    try:
        n = int(comp["n"])
    except KeyError:
        raise InputError("components.n is required") from None
    mu = _as_vector(comp.get("mu_db", 0.0), n, "components.mu_db")
    if "sigma_db" not in comp:
        raise InputError("components.sigma_db is required")
    sig = _as_vector(comp["sigma_db"], n, "components.sigma_db")
    if ("corr" in comp) == ("rho" in comp):
        raise InputError("give exactly one of components.rho or components.corr")
    if "rho" in comp:
        rho = float(comp["rho"])
        if n > 1 and rho <= -1.0 / (n - 1):
            raise InputError(
                f"equicorrelation rho={rho} is not positive definite for "
                f"n={n} (needs rho > {-1.0 / (n - 1):.6g})")
        corr = np.full((n, n), rho)
        np.fill_diagonal(corr, 1.0)
    else:
        corr = np.asarray(comp["corr"], dtype=np.float64)
    return LognormalSumSpec(n=n, mu_db=mu, sigma_db=sig, corr=corr)


def load_scenario(path) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise InputError(f"cannot read scenario file {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise InputError(f"cannot parse scenario file {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("scenario file must contain a YAML mapping")
    unknown = set(doc) - {"components", "mc", "grid", "levels"}
    if unknown:
        raise InputError(f"unknown scenario sections: {sorted(unknown)}")
    if "components" not in doc:
        raise InputError("scenario needs a components section")
    spec = _build_spec(doc["components"])
    mc = doc.get("mc") or {}
    if not isinstance(mc, dict):
        raise InputError("mc section must be a mapping")
    samples = int(mc.get("samples", DEFAULT_SAMPLES))
    seed = int(mc.get("seed", DEFAULT_SEED))
    chunk = int(mc.get("chunk_size", 1 << 16))
    if samples < 1:
        raise InputError(f"mc.samples must be >= 1, got {samples}")
    g = doc.get("grid") or {}
    if not isinstance(g, dict):
        raise InputError("grid section must be a mapping")
    grid = Grid(min_db=float(g.get("min_db", -30.0)),
                max_db=float(g.get("max_db", 50.0)),
                step_db=float(g.get("step_db", 0.5)))
    levels = doc.get("levels", list(DEFAULT_LEVELS))
    if not isinstance(levels, (list, tuple)) or not levels:
        raise InputError("levels must be a non-empty list of probabilities")
    levels = tuple(float(v) for v in levels)
    if any(not (0.0 < v < 1.0) for v in levels):
        raise InputError("every level must lie strictly inside (0, 1)")
    return Scenario(spec=spec, samples=samples, seed=seed, chunk_size=chunk,
                    grid=grid, levels=levels)
