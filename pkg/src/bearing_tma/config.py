"""INI-style run configuration.

Sections mirror :class:`~bearing_tma.harness.TrialConfig`. Angles are given
in degrees and converted to radians here. Unknown sections or keys are
rejected rather than ignored.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .circumnav import CircumnavConfig
from .harness import ESTIMATORS, TrialConfig
from .model import NoiseConfig, TmaParams
from .plkf import PlkfConfig
from .rtls import RtlsConfig

DEFAULTS = {
    "target": {"p0": "10, 5", "v0": "1, 1"},
    "observer": {"p_o_init": "1, 1", "u_max": "auto"},
    "clock": {"dt": "0.1", "n_steps": "600"},
    "noise": {"sigma_theta_deg": "1", "sigma_p": "0.1", "seed": "0"},
    "rtls": {"lambda": "0.999", "p0_scale": "100", "reg_epsilon": "auto", "reg_rel": "1e-6",
             "var_floor": "1e-12", "pivot_tol": "1e-12", "weighting": "covariance"},
    "plkf": {"q": "1e-4"},
    "circumnav": {"rho": "5", "alpha": "5", "u_f_max": "2", "source": "estimate"},
    "run": {"estimator": "both", "trials": "100"},
}


class ConfigError(ValueError):
    """Malformed, unknown or missing configuration entries."""


@dataclass(frozen=True)
class RunConfig:
    trial: TrialConfig
    estimator: str
    trials: int
    values: dict

    def flat(self) -> list[tuple[str, str]]:
        return [(f"{sec}.{key}", val) for sec, keys in self.values.items() for key, val in keys.items()]


def preset_names() -> list[str]:
    return sorted(p.name[:-4] for p in resources.files("bearing_tma.presets").iterdir()
                  if p.name.endswith(".cfg"))


def resolve_path(path) -> Path:
    """A filesystem path, or the name of a bundled preset."""
    p = Path(path)
    if p.is_file():
        return p
    name = p.name if p.suffix == ".cfg" else p.name + ".cfg"
    bundled = resources.files("bearing_tma.presets") / name
    if p.parent == Path(".") and bundled.is_file():
        return Path(str(bundled))
    raise ConfigError(f"config file not found: {path}")


def _vec(text: str, name: str) -> tuple[float, float]:
    parts = [t for t in text.replace(",", " ").split()]
    if len(parts) != 2:
        raise ConfigError(f"{name} needs two numbers, got {text!r}")
    return tuple(_num(t, name) for t in parts)


def _num(text: str, name: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{name}: expected a number, got {text!r}") from None


def _int(text: str, name: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{name}: expected an integer, got {text!r}") from None


def _auto(text: str, name: str):
    return None if text.strip().lower() == "auto" else _num(text, name)


def apply_override(values: dict, item: str) -> None:
    """Apply one ``section.key=value`` override in place."""
    if "=" not in item:
        raise ConfigError(f"override must look like section.key=value, got {item!r}")
    lhs, value = item.split("=", 1)
    if "." not in lhs:
        raise ConfigError(f"override key must be section.key, got {lhs!r}")
    sec, key = (s.strip() for s in lhs.split(".", 1))
    if sec not in DEFAULTS or key not in DEFAULTS[sec]:
        raise ConfigError(f"unknown config key {sec}.{key}")
    values[sec][key] = value.strip()


def read_values(path=None, overrides=()) -> dict:
    values = {sec: dict(keys) for sec, keys in DEFAULTS.items()}
    if path is not None:
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        try:
            with open(resolve_path(path)) as fh:
                parser.read_file(fh)
        except configparser.Error as err:
            raise ConfigError(f"cannot parse {path}: {err}") from None
        for sec in parser.sections():
            if sec not in DEFAULTS:
                raise ConfigError(f"unknown config section [{sec}]")
            for key, val in parser.items(sec):
                if key not in DEFAULTS[sec]:
                    raise ConfigError(f"unknown config key {sec}.{key}")
                values[sec][key] = val
    for item in overrides:
        apply_override(values, item)
    return values


def build(values: dict) -> RunConfig:
    v = values
    try:
        trial = TrialConfig(
            x_true=TmaParams(_vec(v["target"]["p0"], "target.p0"), _vec(v["target"]["v0"], "target.v0")),
            p_o_init=_vec(v["observer"]["p_o_init"], "observer.p_o_init"),
            u_max=_auto(v["observer"]["u_max"], "observer.u_max"),
            dt=_num(v["clock"]["dt"], "clock.dt"),
            n_steps=_int(v["clock"]["n_steps"], "clock.n_steps"),
            noise=NoiseConfig(math.radians(_num(v["noise"]["sigma_theta_deg"], "noise.sigma_theta_deg")),
                              _num(v["noise"]["sigma_p"], "noise.sigma_p"),
                              _int(v["noise"]["seed"], "noise.seed")),
            rtls=RtlsConfig(lam=_num(v["rtls"]["lambda"], "rtls.lambda"),
                            p0_scale=_num(v["rtls"]["p0_scale"], "rtls.p0_scale"),
                            reg_epsilon=_auto(v["rtls"]["reg_epsilon"], "rtls.reg_epsilon"),
                            reg_rel=_num(v["rtls"]["reg_rel"], "rtls.reg_rel"),
                            var_floor=_num(v["rtls"]["var_floor"], "rtls.var_floor"),
                            pivot_tol=_num(v["rtls"]["pivot_tol"], "rtls.pivot_tol"),
                            weighting=v["rtls"]["weighting"].strip()),
            plkf=PlkfConfig(q=_num(v["plkf"]["q"], "plkf.q")),
            circ=CircumnavConfig(_num(v["circumnav"]["rho"], "circumnav.rho"),
                                 _num(v["circumnav"]["alpha"], "circumnav.alpha"),
                                 _num(v["circumnav"]["u_f_max"], "circumnav.u_f_max")),
            control_source=v["circumnav"]["source"].strip(),
        )
    except ConfigError:
        raise
    except ValueError as err:
        raise ConfigError(str(err)) from None
    estimator = v["run"]["estimator"].strip()
    if estimator not in ESTIMATORS + ("both",):
        raise ConfigError(f"run.estimator must be rtls, plkf or both, got {estimator!r}")
    trials = _int(v["run"]["trials"], "run.trials")
    if trials < 1:
        raise ConfigError("run.trials must be at least 1")
    return RunConfig(trial, estimator, trials, values)


def load(path=None, overrides=()) -> RunConfig:
    return build(read_values(path, overrides))
