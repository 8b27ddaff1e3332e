"""Flat ``section.key = value`` run configuration.

Blank lines and ``#`` comments are ignored. Every key is optional except the
noncommutative selection: exactly one of ``nc.b0`` or the ``nc.theta`` /
``nc.zeta`` pair must be present (``sweep`` supplies ``nc.b0`` itself).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .nc_dynamics import Gauge
from .thermal_channel import ChannelParams, CMScaling, TrajectoryConfig


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<config>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


def _real(lo=None, strict=False):
    def conv(text):
        v = float(text)
        if not math.isfinite(v):
            raise ValueError("must be finite")
        if lo is not None and (v <= lo if strict else v < lo):
            raise ValueError(f"must be {'>' if strict else '>='} {lo}")
        return v
    return conv


def _choice(*options):
    def conv(text):
        if text not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return text
    return conv


FIELDS = {
    "initial.x0": (_real(), 1.0),
    "initial.y0": (_real(), 0.0),
    "initial.px0": (_real(), 1.0),
    "initial.py0": (_real(), 0.0),
    "system.n_bar": (_real(0.0), 4.0),
    "env.m_bar": (_real(0.0), 2.0),
    "env.gamma": (_real(0.0, strict=True), 0.1),
    "nc.b0": (_real(0.0), None),
    "nc.theta": (_real(0.0), None),
    "nc.zeta": (_real(0.0), None),
    "nc.gauge": (_choice(*(g.value for g in Gauge)), Gauge.POSITION_ONLY.value),
    "units.m": (_real(0.0, strict=True), 1.0),
    "units.omega": (_real(0.0, strict=True), 1.0),
    "units.hbar": (_real(0.0, strict=True), 1.0),
    "units.q": (_real(0.0, strict=True), 1.0),
    "time.t_max": (_real(0.0, strict=True), 100.0),
    "time.dt": (_real(0.0, strict=True), 0.05),
    "channel.cm_scaling": (_choice(*(c.value for c in CMScaling)), CMScaling.PHYSICAL.value),
    "witness.tol": (_real(0.0), 1e-6),
    "output.path": (str, "ncphase_out"),
    "output.format": (_choice("csv", "json"), "csv"),
}
NC_KEYS = ("nc.b0", "nc.theta", "nc.zeta")


@dataclass
class RunConfig:
    values: dict
    lines: dict = field(default_factory=dict)
    source: str = "<config>"

    def __getitem__(self, key):
        return self.values[key]

    def error(self, key: str, message: str) -> ConfigError:
        return ConfigError(f"{key}: {message}", self.lines.get(key), self.source)

    def with_b0(self, b0: float) -> "RunConfig":
        values = {k: v for k, v in self.values.items() if k not in NC_KEYS}
        values["nc.b0"] = float(b0)
        return RunConfig(values, dict(self.lines), self.source)

    def trajectory_config(self) -> TrajectoryConfig:
        v = self.values
        if v["time.dt"] >= v["time.t_max"]:
            raise self.error("time.dt", "must be smaller than time.t_max")
        return TrajectoryConfig(
            initial=(v["initial.x0"], v["initial.y0"], v["initial.px0"], v["initial.py0"]),
            n_bar=v["system.n_bar"],
            channel=ChannelParams(v["env.gamma"], v["env.m_bar"]),
            B0=v.get("nc.b0"),
            gauge=v["nc.gauge"],
            t_max=v["time.t_max"],
            dt=v["time.dt"],
            cm_scaling=v["channel.cm_scaling"],
            theta=v.get("nc.theta"),
            zeta=v.get("nc.zeta"),
            units=(v["units.m"], v["units.omega"], v["units.hbar"], v["units.q"]),
        )


def parse_config(text: str, source: str = "<config>", require_nc: bool = True) -> RunConfig:
    raw = {}
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'section.key = value', got {body!r}", lineno, source)
        key, value = (part.strip() for part in body.split("=", 1))
        if key not in FIELDS:
            raise ConfigError(f"unknown key {key!r}", lineno, source)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", lineno, source)
        if not value:
            raise ConfigError(f"{key}: missing value", lineno, source)
        conv = FIELDS[key][0]
        try:
            raw[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"{key}: invalid value {value!r} ({exc})", lineno, source) from None
        lines[key] = lineno

    if not raw:
        raise ConfigError("config is empty", None, source)

    has_b0 = "nc.b0" in raw
    has_pair = ("nc.theta" in raw, "nc.zeta" in raw)
    if any(has_pair) and not all(has_pair):
        key = "nc.theta" if has_pair[0] else "nc.zeta"
        raise ConfigError("nc.theta and nc.zeta must be given together", lines[key], source)
    if has_b0 and all(has_pair):
        raise ConfigError("give either nc.b0 or nc.theta/nc.zeta, not both", lines["nc.b0"], source)
    if require_nc and not has_b0 and not all(has_pair):
        raise ConfigError("missing noncommutative parameters: set nc.b0 or nc.theta/nc.zeta", None, source)

    values = {}
    for key, (_, default) in FIELDS.items():
        if key in raw:
            values[key] = raw[key]
        elif default is not None:
            values[key] = default
    return RunConfig(values, lines, source)


def load_config(path, require_nc: bool = True) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_config(text, str(path), require_nc)


def format_config(values: dict) -> str:
    """Render resolved values back into the config text format."""
    out = []
    for key in FIELDS:
        if key in values:
            v = values[key]
            out.append(f"{key} = {v!r}" if isinstance(v, float) else f"{key} = {v}")
    return "\n".join(out) + "\n"
