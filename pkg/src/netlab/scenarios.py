"""Declarative experiment scenarios: the seven built-in benchmark profiles
and a plain-text key=value file format for custom ones.

Units in scenario files carry suffixes (``rtt = 110ms``, ``bandwidth =
2.2Mbit``, ``file_size = 250KiB``); see ``parse_scenario`` for the grammar.
File sizes interpret K as KiB (1024 bytes).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from .linknet import DEFAULT_MTU, DEFAULT_QUEUE_CAPACITY, ImpairmentProfile
from .simclock import MS, SimTime, ms
from .transport import DEFAULT_RECV_WINDOW

KIB = 1024
MIB = 1024 * 1024

SWEEP_PARAMS = ("file_size", "rtt", "loss_pct", "bandwidth")
DEFAULT_REPETITIONS = 5
DEFAULT_SEED_BASE = 986


@dataclass(frozen=True)
class ScenarioSpec:
    """One experiment: a base link profile plus a single swept parameter."""

    name: str
    rtt: SimTime                    # microseconds
    loss_pct: float
    bandwidth_down: float           # bits/second
    sweep_param: str
    sweep_values: tuple
    file_size: int = 250 * KIB      # fixed size when the sweep is not file_size
    up_down_ratio: float = 0.7
    queue_capacity: int = DEFAULT_QUEUE_CAPACITY
    mtu: int = DEFAULT_MTU
    cwnd_cap: int = 1 * MIB
    recv_window: int = DEFAULT_RECV_WINDOW
    repetitions: int = DEFAULT_REPETITIONS
    seed_base: int = DEFAULT_SEED_BASE

    def __post_init__(self) -> None:
        if self.sweep_param not in SWEEP_PARAMS:
            raise ValueError(f"unknown sweep parameter {self.sweep_param!r}; "
                             f"expected one of {SWEEP_PARAMS}")
        if not self.sweep_values:
            raise ValueError("sweep_values must be non-empty")
        if any(v <= 0 for v in self.sweep_values) and self.sweep_param != "loss_pct":
            raise ValueError("sweep values must be positive")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")

    def cell(self, sweep_value) -> tuple[ImpairmentProfile, int]:
        """Profile and file size for one point of the sweep."""
        params = {
            "rtt": self.rtt,
            "loss_pct": self.loss_pct,
            "bandwidth_down": self.bandwidth_down,
            "up_down_ratio": self.up_down_ratio,
            "queue_capacity": self.queue_capacity,
            "mtu": self.mtu,
        }
        file_size = self.file_size
        if self.sweep_param == "file_size":
            file_size = int(sweep_value)
        elif self.sweep_param == "rtt":
            params["rtt"] = int(sweep_value)
        elif self.sweep_param == "loss_pct":
            params["loss_pct"] = float(sweep_value)
        elif self.sweep_param == "bandwidth":
            params["bandwidth_down"] = float(sweep_value)
        return ImpairmentProfile(**params), file_size


def _cellular(name, rtt_ms, loss, bps) -> ScenarioSpec:
    return ScenarioSpec(
        name=name,
        rtt=ms(rtt_ms),
        loss_pct=loss,
        bandwidth_down=bps,
        sweep_param="file_size",
        sweep_values=(50 * KIB, 100 * KIB, 250 * KIB, 500 * KIB, 1000 * KIB),
    )


BUILTIN_SCENARIOS: dict[str, ScenarioSpec] = {
    "wifi": _cellular("wifi", 110, 0.5, 2.2e6),
    "lte": _cellular("lte", 250, 0.7, 2.0e6),
    "3g": _cellular("3g", 550, 0.5, 1.0e6),
    "2g": _cellular("2g", 900, 2.5, 0.2e6),
    "rtt": ScenarioSpec(
        name="rtt", rtt=ms(100), loss_pct=0.5, bandwidth_down=2.2e6,
        sweep_param="rtt",
        sweep_values=tuple(ms(v) for v in (10, 50, 100, 250, 500, 750, 1000)),
        file_size=250 * KIB,
    ),
    "loss": ScenarioSpec(
        name="loss", rtt=ms(100), loss_pct=0.5, bandwidth_down=2.2e6,
        sweep_param="loss_pct",
        sweep_values=(0.5, 1.0, 1.5, 2.0, 2.5),
        file_size=250 * KIB,
    ),
    "bandwidth": ScenarioSpec(
        name="bandwidth", rtt=ms(100), loss_pct=0.5, bandwidth_down=2.2e6,
        sweep_param="bandwidth",
        sweep_values=(0.2e6, 0.6e6, 1.0e6, 1.4e6, 1.8e6, 2.2e6),
        file_size=4096 * KIB,
    ),
}


# -- scenario file format -----------------------------------------------------
#
# One `key = value` per line; `#` starts a comment. Units are suffixed:
#   rtt / sweep rtt values:   ms or s       (rtt = 110ms)
#   bandwidth:                Mbit or kbit  (bandwidth = 2.2Mbit)
#   sizes:                    B, KiB, MiB   (file_size = 250KiB)
#   loss:                     % optional    (loss = 0.5%)
# Keys: name, rtt, loss, bandwidth, up_down_ratio, queue, mtu, cwnd_cap,
#       recv_window, file_size, sweep, values, reps, seed.


def _parse_size(text: str) -> int:
    text = text.strip()
    for suffix, mult in (("MiB", MIB), ("KiB", KIB), ("B", 1)):
        if text.endswith(suffix):
            return round(float(text[: -len(suffix)]) * mult)
    return int(text)


def _parse_time_us(text: str) -> int:
    text = text.strip()
    if text.endswith("ms"):
        return ms(float(text[:-2]))
    if text.endswith("s"):
        return round(float(text[:-1]) * 1_000_000)
    return int(text)  # bare microseconds


def _parse_bandwidth(text: str) -> float:
    # Decimal scaling keeps parse(emit(x)) bit-identical (2.2 Mbit stays
    # exactly 2200000.0 instead of drifting one ulp through float multiply).
    text = text.strip()
    if text.endswith("Mbit"):
        return float(Decimal(text[:-4]) * 1_000_000)
    if text.endswith("kbit"):
        return float(Decimal(text[:-4]) * 1_000)
    return float(text)  # bits/second


def _parse_loss(text: str) -> float:
    text = text.strip()
    if text.endswith("%"):
        text = text[:-1]
    return float(text)


def _format_size(value: int) -> str:
    if value % MIB == 0:
        return f"{value // MIB}MiB"
    if value % KIB == 0:
        return f"{value // KIB}KiB"
    return f"{value}B"


def _format_time(value_us: int) -> str:
    if value_us % MS == 0:
        return f"{value_us // MS}ms"
    return f"{value_us}"


def _format_bandwidth(value: float) -> str:
    mbit = value / 1e6
    if mbit == int(mbit):
        return f"{int(mbit)}Mbit"
    return f"{mbit:g}Mbit"


_VALUE_PARSERS = {
    "file_size": _parse_size,
    "rtt": _parse_time_us,
    "loss_pct": _parse_loss,
    "bandwidth": _parse_bandwidth,
}

_VALUE_FORMATTERS = {
    "file_size": _format_size,
    "rtt": _format_time,
    "loss_pct": lambda v: f"{v:g}%",
    "bandwidth": _format_bandwidth,
}


def parse_scenario(text: str) -> ScenarioSpec:
    """Parse the key=value scenario format; raises ValueError on bad input."""
    fields: dict = {}
    sweep_param = None
    raw_values = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "name":
            fields["name"] = value
        elif key == "rtt":
            fields["rtt"] = _parse_time_us(value)
        elif key == "loss":
            fields["loss_pct"] = _parse_loss(value)
        elif key == "bandwidth":
            fields["bandwidth_down"] = _parse_bandwidth(value)
        elif key == "up_down_ratio":
            fields["up_down_ratio"] = float(value)
        elif key == "queue":
            fields["queue_capacity"] = _parse_size(value)
        elif key == "mtu":
            fields["mtu"] = _parse_size(value)
        elif key == "cwnd_cap":
            fields["cwnd_cap"] = _parse_size(value)
        elif key == "recv_window":
            fields["recv_window"] = _parse_size(value)
        elif key == "file_size":
            fields["file_size"] = _parse_size(value)
        elif key == "sweep":
            sweep_param = value
        elif key == "values":
            raw_values = value
        elif key == "reps":
            fields["repetitions"] = int(value)
        elif key == "seed":
            fields["seed_base"] = int(value)
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if "name" not in fields:
        raise ValueError("scenario file must set 'name'")
    if sweep_param is None or raw_values is None:
        raise ValueError("scenario file must set 'sweep' and 'values'")
    if sweep_param not in SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {sweep_param!r}")
    parser = _VALUE_PARSERS[sweep_param]
    values = tuple(parser(v) for v in raw_values.split(","))
    return ScenarioSpec(sweep_param=sweep_param, sweep_values=values, **fields)


def emit_scenario(spec: ScenarioSpec) -> str:
    """Serialize a spec so that parse(emit(spec)) == spec."""
    fmt = _VALUE_FORMATTERS[spec.sweep_param]
    lines = [
        f"name = {spec.name}",
        f"rtt = {_format_time(spec.rtt)}",
        f"loss = {spec.loss_pct:g}%",
        f"bandwidth = {_format_bandwidth(spec.bandwidth_down)}",
        f"up_down_ratio = {spec.up_down_ratio:g}",
        f"queue = {_format_size(spec.queue_capacity)}",
        f"mtu = {spec.mtu}B",
        f"cwnd_cap = {_format_size(spec.cwnd_cap)}",
        f"recv_window = {_format_size(spec.recv_window)}",
        f"file_size = {_format_size(spec.file_size)}",
        f"sweep = {spec.sweep_param}",
        "values = " + ",".join(fmt(v) for v in spec.sweep_values),
        f"reps = {spec.repetitions}",
        f"seed = {spec.seed_base}",
    ]
    return "\n".join(lines) + "\n"
