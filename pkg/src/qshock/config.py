"""Run configuration: INI-style config files plus command-line overrides."""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields, replace

from .gaussian_packet import PacketParams


def _floats(text: str) -> tuple[float, ...]:
    items = [s.strip() for s in str(text).replace(";", ",").split(",")]
    return tuple(float(s) for s in items if s)


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt_float(text):
    if text is None or str(text).strip().lower() in ("", "none", "auto"):
        return None
    return float(text)


def _opt_int(text):
    if text is None or str(text).strip().lower() in ("", "none", "auto"):
        return None
    return int(text)


# (section, key) -> (RunConfig attribute, parser)
KEYS = {
    ("params", "hbar"): ("hbar", float),
    ("params", "m"): ("m", float),
    ("params", "sigma0"): ("sigma0", float),
    ("params", "u0"): ("u0", float),
    ("params", "k"): ("k", _opt_float),
    ("params", "dispersive"): ("dispersive", _bool),
    ("grid", "x_min"): ("x_min", _opt_float),
    ("grid", "x_max"): ("x_max", _opt_float),
    ("grid", "n"): ("n", _opt_int),
    ("time", "t"): ("t", float),
    ("time", "dt"): ("dt", float),
    ("time", "steps"): ("steps", _opt_int),
    ("time", "t_max"): ("t_max", _opt_float),
    ("time", "span"): ("span", float),
    ("launch", "x0"): ("launch_x0", _floats),
    ("launch", "t0"): ("launch_t0", _floats),
    ("launch", "family"): ("family", str),
    ("launch", "mode"): ("mode", str),
    ("output", "path"): ("output", str),
    ("output", "format"): ("format", str),
    ("output", "normalized"): ("normalized", _bool),
    ("run", "jobs"): ("jobs", int),
    ("run", "command"): ("sweep_command", str),
}

PARAM_FIELDS = ("hbar", "m", "sigma0", "u0", "k", "dispersive")


@dataclass(frozen=True)
class RunConfig:
    hbar: float = 1.0
    m: float = 1.0
    sigma0: float = 1.0
    u0: float = 10.0
    k: float | None = None
    dispersive: bool = True
    x_min: float | None = None
    x_max: float | None = None
    n: int | None = None
    t: float = 0.0
    dt: float = 1e-4
    steps: int | None = None
    t_max: float | None = None
    span: float = 1.0
    launch_x0: tuple = (-1.0,)
    launch_t0: tuple = (0.0, 0.5, 1.0, 1.5, 2.0)
    family: str = "both"
    mode: str = "paper"
    output: str | None = None
    format: str = "csv"
    normalized: bool = False
    sweep: dict = field(default_factory=dict)
    jobs: int = 1
    sweep_command: str | None = None

    def __post_init__(self):
        if self.family not in ("plus", "minus", "both"):
            raise ValueError(f"family must be plus, minus or both, got {self.family!r}")
        if self.mode not in ("paper", "corrected"):
            raise ValueError(f"mode must be paper or corrected, got {self.mode!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")
        self.packet()  # validates physical parameters

    def packet(self) -> PacketParams:
        return PacketParams(
            hbar=self.hbar, m=self.m, sigma0=self.sigma0, u0=self.u0,
            k=self.k, dispersive=self.dispersive,
        )

    def families(self) -> tuple[int, ...]:
        return {"plus": (1,), "minus": (-1,), "both": (1, -1)}[self.family]

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def updated(self, **changes) -> "RunConfig":
        return replace(self, **changes)


ATTR_PARSERS = {attr: parser for attr, parser in KEYS.values()}


def parse_config_file(path) -> dict:
    """Read ``[section] key = value`` pairs; unknown sections or keys raise."""
    cp = configparser.ConfigParser(interpolation=None)
    with open(path) as fh:
        cp.read_file(fh)
    values: dict = {}
    sweep: dict = {}
    for section in cp.sections():
        for key, raw in cp.items(section):
            if section == "sweep":
                attr = _sweep_attr(key)
                sweep[attr] = _sweep_values(attr, raw)
                continue
            try:
                attr, parser = KEYS[(section, key)]
            except KeyError:
                raise KeyError(f"unknown config key [{section}] {key}") from None
            values[attr] = parser(raw)
    if sweep:
        values["sweep"] = sweep
    return values


def _sweep_attr(key: str) -> str:
    for (section, k), (attr, _) in KEYS.items():
        if section != "run" and key in (k, attr):
            return attr
    raise KeyError(f"unknown sweep key {key!r}")


def _sweep_values(attr: str, raw: str) -> list:
    parser = ATTR_PARSERS[attr]
    if attr in ("launch_x0", "launch_t0"):
        return [parser(item) for item in raw.split("|")]
    return [parser(item.strip()) for item in raw.split(",") if item.strip()]


def parse_sweep_spec(spec: str) -> tuple[str, list]:
    """``key=v1,v2,...`` from the command line."""
    if "=" not in spec:
        raise ValueError(f"--vary expects key=v1,v2,..., got {spec!r}")
    key, raw = spec.split("=", 1)
    attr = _sweep_attr(key.strip())
    return attr, _sweep_values(attr, raw)
