"""Experiment configuration files.

The format is INI (``configparser``) with three sections::

    [model]
    name  = vg            ; vg | nig | stable
    sigma = 0.1213        ; vg / nig
    theta = -0.1436       ; vg / nig
    kappa = 0.1686        ; vg / nig
    alpha = 1.5597        ; stable
    A     = 0             ; stable, positive-jump weight
    B     = 0.1486        ; stable, negative-jump weight
    r     = 0.05

    [option]
    kind = barrier        ; asian | lookback | barrier
    S0   = 100
    K    = 100
    B    = 115            ; barrier level, barrier kind only
    T    = 1

    [driver]
    eps             = 0.01
    M               = 4
    N_init          = 10000
    L_min           = 2
    L_max           = 10
    fit_floor_level = 2
    seed            = 0
    stream_offset   = 0

Only ``[model] name`` and ``[option] kind`` are required; everything else
defaults to the calibrated values above.  The discount rate of the option is
always the model's ``r``.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .mlmc import DriverConfig
from .models import CALIBRATED_NIG, CALIBRATED_STABLE, CALIBRATED_VG, LevyModel, NigParams, StableParams, VgParams
from .payoffs import OptionSpec, reference_option
from .rng import ParameterError

__all__ = ["Experiment", "load_config", "parse_config"]


@dataclass
class Experiment:
    model: LevyModel
    option: OptionSpec
    driver: DriverConfig
    eps: Optional[float] = None
    seed: int = 0


def _model(sec) -> LevyModel:
    name = sec.get("name", "").strip().lower()
    if name in ("vg", "nig"):
        base = CALIBRATED_VG if name == "vg" else CALIBRATED_NIG
        cls = VgParams if name == "vg" else NigParams
        params = cls(
            sigma=sec.getfloat("sigma", base.sigma),
            theta=sec.getfloat("theta", base.theta),
            kappa=sec.getfloat("kappa", base.kappa),
            r=sec.getfloat("r", base.r),
        )
    elif name == "stable":
        base = CALIBRATED_STABLE
        params = StableParams(
            alpha=sec.getfloat("alpha", base.alpha),
            a_plus=sec.getfloat("A", base.a_plus),
            b_minus=sec.getfloat("B", base.b_minus),
            r=sec.getfloat("r", base.r),
        )
    else:
        raise ParameterError(f"[model] name must be vg, nig or stable, got {name!r}")
    return LevyModel(params)


def _option(sec, r: float) -> OptionSpec:
    kind = sec.get("kind", "").strip().lower()
    base = reference_option(kind, r)
    if "r" in sec and sec.getfloat("r") != r:
        raise ParameterError("option discount rate must equal the model's r")
    barrier = sec.getfloat("B", base.B) if kind == "barrier" else None
    return OptionSpec(
        kind,
        S0=sec.getfloat("S0", base.S0),
        K=sec.getfloat("K", base.K),
        B=barrier,
        T=sec.getfloat("T", base.T),
        r=r,
    )


def parse_config(text: str) -> Experiment:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    # keys are case-sensitive (A and B differ from a and b)
    cp.optionxform = str
    cp.read_string(text)
    for name in ("model", "option"):
        if not cp.has_section(name):
            raise ParameterError(f"config is missing the [{name}] section")
    model = _model(cp["model"])
    option = _option(cp["option"], model.r)
    drv = cp["driver"] if cp.has_section("driver") else {}
    d = DriverConfig()
    driver = DriverConfig(
        M=int(drv.get("M", d.M)),
        N_init=int(drv.get("N_init", d.N_init)),
        L_min=int(drv.get("L_min", d.L_min)),
        L_max=int(drv.get("L_max", d.L_max)),
        fit_floor_level=int(drv.get("fit_floor_level", d.fit_floor_level)),
        stream_offset=int(drv.get("stream_offset", d.stream_offset)),
    )
    eps = float(drv["eps"]) if "eps" in drv else None
    return Experiment(model, option, driver, eps, int(drv.get("seed", 0)))


def load_config(path) -> Experiment:
    return parse_config(Path(path).read_text())
