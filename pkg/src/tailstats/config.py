"""Run configuration: flat key=value files merged with command-line overrides."""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .ensembles import EnsembleSpec

__all__ = ["InvalidConfig", "RunConfig", "EXPERIMENTS", "parse_config_text", "load_config", "make_config"]


class InvalidConfig(ValueError):
    """Configuration that cannot describe a run."""


# per-experiment defaults; anything here can be overridden by file or flag
_SUM = dict(kind="inverse_ginibre_sum", m=1)
_FIG123 = dict(_SUM, stream="sum-configurations", n=100, l=[1, 2, 3, 4], trials=10000)
_STABLE = dict(kind="stable_gue", alpha=[0.5, 1.0, 1.5, 1.8], eigensolver="fast")

EXPERIMENTS = {
    "macro": dict(_FIG123, bin_macro=0.1, range_lo=0.25, range_hi=6.0, min_expected=500.0),
    "softedge": dict(_FIG123, bin_micro=0.2, n_smallest=5, range_lo=-8.0, range_hi=4.0,
                     window_lo=-2.0),
    "tail": dict(_FIG123, bin_micro=0.2, n_largest=8, range_lo=0.0, range_hi=4.0,
                 min_expected=300.0, truncation=1e-3),
    "tail-individual": dict(_FIG123, l=[2], bin_macro=0.1, bin_micro=0.2, n_largest=8,
                            range_lo=0.0, range_hi=4.0),
    "spacing-sum-vs-direct": dict(_SUM, n=200, l=[2], trials=10000, bin_spacing=0.1, k_max=3,
                                  range_hi=5.0, eigensolver_direct="fast"),
    "cauchy-compare": dict(_STABLE, n=200, alpha=[1.0], trials=1000, bin_macro=0.1,
                           range_lo=-5.0, range_hi=5.0),
    "stable-density": dict(_STABLE, n=500, trials=1000, bin_macro=0.1, bin_unfolded=0.02,
                           range_lo=-5.0, range_hi=5.0),
    "stable-spacing": dict(_STABLE, n=500, trials=1000, bin_spacing=0.1, k=[1, 2, 250],
                           range_hi=5.0),
    "transition-scan": dict(_SUM, n=100, m=2, l=[4], trials=2000, window=3,
                            gamma=[-1.5, -1.25, -1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0]),
    "poisson-probe": dict(_SUM, n=200, l=[2, 4, 8, 16], trials=2000, eigensolver_direct="fast"),
    "saturation-probe": dict(_STABLE, n=[50, 100, 200, 500], trials=1000),
    "freeprob-check": dict(_SUM, n=200, m=[1, 2], l=[1, 2, 4], trials=1000, chi=[-0.2, -0.5, -0.8]),
}

_COMMON = dict(seed=0, workers=1, out="out", cache=True, eigensolver="dense", sigma=1.0)

_INT_KEYS = {"n", "m", "l", "trials", "seed", "workers", "n_smallest", "n_largest", "k_max", "k", "window"}
_BOOL_KEYS = {"cache"}
_STR_KEYS = {"experiment", "kind", "out", "eigensolver", "eigensolver_direct", "stream"}
_LIST_KEYS = {"l", "alpha", "gamma", "n", "m", "k", "chi"}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in _STR_KEYS:
        return raw
    if key in _BOOL_KEYS:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise InvalidConfig(f"{key}: expected a boolean, got {raw!r}")
    conv = int if key in _INT_KEYS else float
    try:
        if "," in raw or key in _LIST_KEYS:
            items = [conv(p) for p in raw.replace(" ", "").split(",") if p]
            return items if (key in _LIST_KEYS or len(items) != 1) else items[0]
        return conv(raw)
    except ValueError as exc:
        raise InvalidConfig(f"{key}: cannot parse {raw!r}") from exc


def parse_config_text(text: str) -> dict:
    """Parse flat ``key = value`` lines; '#' and ';' start comments."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        cp.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise InvalidConfig(str(exc)) from exc
    return {k.replace("-", "_"): _parse_value(k.replace("-", "_"), v) for k, v in cp["run"].items()}


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidConfig(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


@dataclass
class RunConfig:
    """Full description of one experiment run."""

    experiment: str
    params: dict = field(default_factory=dict)

    def __getattr__(self, name):
        params = self.__dict__.get("params", {})
        if name in params:
            return params[name]
        raise AttributeError(name)

    @property
    def trials(self) -> int:
        return int(self.params["trials"])

    @property
    def master_seed(self) -> int:
        return int(self.params["seed"])

    @property
    def workers(self) -> int:
        return int(self.params["workers"])

    @property
    def output_dir(self) -> Path:
        return Path(self.params["out"])

    def listed(self, key) -> list:
        v = self.params[key]
        return list(v) if isinstance(v, (list, tuple)) else [v]

    def ensemble(self, **over) -> EnsembleSpec:
        """EnsembleSpec from the scalar parameters, with per-scan overrides."""
        first = {k: self.listed(k)[0] for k in ("n", "m", "l") if k in self.params}
        p = dict(kind=self.params["kind"], n=first["n"], m=first.get("m", 1), l=first.get("l", 1),
                 sigma=self.params.get("sigma", 1.0))
        if p["kind"] == "stable_gue":
            p["alpha"] = self.listed("alpha")[0]
        p.update(over)
        return EnsembleSpec(**p)

    def echo(self) -> dict:
        """Config as plain data for the JSON summary (no output path)."""
        d = {k: v for k, v in self.params.items() if k not in ("out", "workers", "cache")}
        d["experiment"] = self.experiment
        return dict(sorted(d.items()))


def make_config(experiment: str, file_values: dict | None = None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then file values, then overrides (command-line flags win)."""
    if experiment not in EXPERIMENTS:
        raise InvalidConfig(f"unknown experiment {experiment!r}")
    params = dict(_COMMON)
    params.update(EXPERIMENTS[experiment])
    for src in (file_values or {}), (overrides or {}):
        for k, v in src.items():
            if k == "experiment":
                if v != experiment:
                    raise InvalidConfig(f"config names experiment {v!r}, command asks for {experiment!r}")
                continue
            if v is not None:
                params[k] = v
    cfg = RunConfig(experiment, params)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    p = cfg.params
    if not isinstance(p.get("trials"), int) or p["trials"] < 1:
        raise InvalidConfig("trials must be an integer >= 1")
    if not isinstance(p.get("workers"), int) or p["workers"] < 1:
        raise InvalidConfig("workers must be an integer >= 1")
    if not isinstance(p.get("seed"), int) or not 0 <= p["seed"] < 2**64:
        raise InvalidConfig("seed must be a 64-bit non-negative integer")
    for k, v in p.items():
        if k.startswith("bin_") and not (isinstance(v, (int, float)) and v > 0):
            raise InvalidConfig(f"{k} must be positive")
    if p["eigensolver"] not in ("dense", "fast"):
        raise InvalidConfig("eigensolver must be 'dense' or 'fast'")
    try:
        for n in cfg.listed("n"):
            for extra in _scan_points(cfg):
                cfg.ensemble(n=n, **extra)
    except (ValueError, TypeError) as exc:
        raise InvalidConfig(str(exc)) from exc


def _scan_points(cfg: RunConfig):
    p = cfg.params
    if p["kind"] == "stable_gue":
        return [dict(alpha=a) for a in cfg.listed("alpha")]
    ms = cfg.listed("m") if "m" in p else [1]
    ls = cfg.listed("l") if "l" in p else [1]
    return [dict(m=m, l=l) for m in ms for l in ls]


def as_plain(spec: EnsembleSpec) -> dict:
    return asdict(spec)
