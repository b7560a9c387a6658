"""Experiment configuration: INI-style blocks parsed into live objects.

A config has five blocks. [surface] fixes genus and marked points,
[caps] lists one map spec per line in the order the cap indices will
use, [target] names a target family with its parameters, [run] holds
truncation order, check list, seed, and tolerances, [output] the
artifact directory. Parse errors name the offending block.field.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

import numpy as np

from .conformal import CapFamily, make_map
from .numerics import ValidationError
from .series import TargetForm
from .surface import SurfaceSpec
from .targets import build_target

CHECK_NAMES = (
    "pole-structure",
    "harmonicity",
    "q-independence",
    "r0-independence",
    "convergence",
    "uniform convergence",
    "invariance",
)


class ConfigError(ValidationError):
    """A config file is unreadable, incomplete, or out of documented range."""


@dataclass
class ExperimentConfig:
    surface: SurfaceSpec
    target: TargetForm
    target_family: str
    target_params: dict
    M: int
    checks: tuple
    seed: int
    samples: int
    l2_tolerance: float
    sup_tolerance: float
    pole_orders: int
    translation: complex
    invariance_order: int
    condition_limit: float
    probe_center: complex
    probe_radius: float
    probe_points: int
    uniform_margin: float
    strict: bool
    out_dir: str | None
    echo: dict = field(default_factory=dict)


def _complex(block: str, key: str, raw: str) -> complex:
    text = raw.strip().replace(" ", "")
    if text.lower() in ("inf", "infinity"):
        return complex(np.inf)
    try:
        return complex(text)
    except ValueError:
        raise ConfigError(f"{block}.{key}: not a complex number: {raw!r}") from None


def _float(block: str, key: str, raw: str) -> float:
    try:
        return float(raw.strip())
    except ValueError:
        raise ConfigError(f"{block}.{key}: not a number: {raw!r}") from None


def _int(block: str, key: str, raw: str) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ConfigError(f"{block}.{key}: not an integer: {raw!r}") from None


def _parse_map_spec(key: str, spec: str):
    tokens = spec.split()
    if not tokens:
        raise ConfigError(f"caps.{key}: empty map spec")
    kind, params = tokens[0], {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise ConfigError(f"caps.{key}: expected key=value, got {tok!r}")
        name, value = tok.split("=", 1)
        if name == "coefficients":
            try:
                params[name] = [complex(v) for v in value.split(",")]
            except ValueError:
                raise ConfigError(f"caps.{key}: bad coefficient list {value!r}") from None
        else:
            params[name] = _complex("caps", key, value)
    try:
        return make_map(kind, **params)
    except ValidationError as exc:
        raise ConfigError(f"caps.{key}: {exc}") from None


def _parse_h_entries(raw: str) -> dict:
    # grammar: m,k:value entries separated by semicolons
    out = {}
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            mk, value = chunk.split(":")
            m_txt, k_txt = mk.split(",")
            out[(int(m_txt), int(k_txt))] = complex(value.strip().replace(" ", ""))
        except ValueError:
            raise ConfigError(
                f"target.h: expected m,k:value entries separated by ';', got {chunk!r}"
            ) from None
    return out


def parse_config(path: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    for block in ("surface", "caps", "target", "run"):
        if block not in parser:
            raise ConfigError(f"missing [{block}] block")

    echo = {s: dict(parser[s]) for s in parser.sections()}

    # -- surface ------------------------------------------------------------
    s = parser["surface"]
    if "genus" not in s:
        raise ConfigError("surface.genus: required")
    genus = _int("surface", "genus", s["genus"])
    if genus not in (0, 1):
        raise ConfigError(f"surface.genus: must be 0 or 1, got {genus}")
    tau = _complex("surface", "tau", s["tau"]) if "tau" in s else None
    if genus == 1:
        if tau is None:
            raise ConfigError("surface.tau: required for genus 1")
        if not tau.imag > 0:
            raise ConfigError(f"surface.tau: Im tau must be positive, got {tau}")
    elif tau is not None:
        raise ConfigError("surface.tau: not allowed for genus 0")
    q = _complex("surface", "q", s["q"]) if "q" in s else None
    if q in (complex(np.inf),) or (q is not None and not np.isfinite(q)):
        q = None
        if genus == 1:
            raise ConfigError("surface.q: must be finite on the torus")
    w0 = _complex("surface", "w0", s["w0"]) if "w0" in s else None
    margin = _float("surface", "margin", s.get("margin", "0.05"))

    caps_items = list(parser["caps"].items())
    if not caps_items:
        raise ConfigError("caps: at least one map spec required")
    maps = [_parse_map_spec(key, spec) for key, spec in caps_items]
    try:
        caps = CapFamily(maps)
        if genus == 0:
            surface = SurfaceSpec.sphere(caps, q=q, w0=w0)
        else:
            surface = SurfaceSpec.torus(tau, caps, q=q, w0=w0, margin=margin)
    except ValidationError as exc:
        raise ConfigError(f"surface: {exc}") from None

    # -- target ---------------------------------------------------------------
    t = parser["target"]
    family = t.get("family", "").strip()
    if not family:
        raise ConfigError("target.family: required")
    params = {}
    for key in t:
        if key == "family":
            continue
        raw = t[key]
        if key in ("k", "m", "cap", "seed", "order"):
            params[key] = _int("target", key, raw)
        elif key in ("eta", "strength"):
            params[key] = _complex("target", key, raw)
        elif key == "decay":
            params[key] = _float("target", key, raw)
        elif key == "epsilon" or key == "c":
            params[key] = [
                _complex("target", key, v) for v in raw.split(",") if v.strip()
            ]
        elif key == "h":
            params[key] = _parse_h_entries(raw)
        else:
            raise ConfigError(f"target.{key}: unknown parameter")
    try:
        target = build_target(surface, family, **params)
    except ValidationError as exc:
        raise ConfigError(f"target: {exc}") from None

    # -- run -------------------------------------------------------------------
    r = parser["run"]
    if "m" not in r:
        raise ConfigError("run.M: required")
    M = _int("run", "M", r["m"])
    if M < 1:
        raise ConfigError(f"run.M: must be >= 1, got {M}")
    raw_checks = [c.strip() for c in r.get("checks", "").split(",") if c.strip()]
    seen = []
    for name in raw_checks:
        if name not in CHECK_NAMES:
            raise ConfigError(
                f"run.checks: unknown check {name!r}; valid names: {', '.join(CHECK_NAMES)}"
            )
        if name not in seen:
            seen.append(name)
    translation_default = "0.5" if genus == 0 else "0.05"
    margin_default = "0.1" if genus == 0 else "0.05"
    cfg = ExperimentConfig(
        surface=surface,
        target=target,
        target_family=family,
        target_params=params,
        M=M,
        checks=tuple(seen),
        seed=_int("run", "seed", r.get("seed", "0")),
        samples=_int("run", "samples", r.get("samples", "100")),
        l2_tolerance=_float("run", "l2_tolerance", r.get("l2_tolerance", "1e-6")),
        sup_tolerance=_float("run", "sup_tolerance", r.get("sup_tolerance", "1e-6")),
        pole_orders=_int("run", "pole_orders", r.get("pole_orders", "4")),
        translation=_complex("run", "translation", r.get("translation", translation_default)),
        invariance_order=_int("run", "invariance_order", r.get("invariance_order", "3")),
        condition_limit=_float("run", "condition_limit", r.get("condition_limit", "1e12")),
        probe_center=_complex("run", "probe_center", r.get("probe_center", "0")),
        probe_radius=_float("run", "probe_radius", r.get("probe_radius", "0")),
        probe_points=_int("run", "probe_points", r.get("probe_points", "40")),
        uniform_margin=_float("run", "uniform_margin", r.get("uniform_margin", margin_default)),
        strict=r.get("strict", "false").strip().lower() in ("1", "true", "yes"),
        out_dir=parser["output"].get("directory") if "output" in parser else None,
        echo=echo,
    )
    if cfg.probe_radius == 0.0:
        center, radius = _default_probe(surface)
        cfg.probe_center, cfg.probe_radius = center, radius
    return cfg


def _default_probe(surface: SurfaceSpec):
    """A circle of evaluation points away from every cap."""
    if surface.genus == 0:
        centers = surface.caps.centers
        mid = complex(np.mean(centers))
        radius = 0.5
        for k in range(surface.n_caps):
            radius = max(
                radius,
                float(np.max(np.abs(surface.caps.boundary_samples(k) - mid))),
            )
        return mid, radius + 0.75
    # torus: ride the corridor the cycle base found
    base = surface.cycle_base()
    return complex(base), 0.04
