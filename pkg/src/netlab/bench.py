"""Benchmark runner: executes scenario sweeps over the three protocols,
aggregates repetition means, and emits deterministic CSV.

Per-cell seeds derive from a documented stable hash so any cell can be
reproduced in isolation:

    seed = fnv1a64(f"{seed_base}|{scenario}|{protocol}|{sweep_value:canonical}|{rep}")

where the canonical sweep value is the integer itself for byte/microsecond
values and ``repr(float)`` otherwise.  Including the scenario name keeps
cells of different scenarios statistically independent even when they share
a sweep value.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean
from typing import Iterable, Sequence

from .quic import quic_transfer
from .scenarios import ScenarioSpec
from .simclock import MS, stable_hash64
from .smudp import smudp_transfer
from .tcp import tcp_transfer
from .transport import TransferResult

PROTOCOL_ORDER = ("tcp", "quic", "smudp")

_TRANSFERS = {
    "tcp": tcp_transfer,
    "quic": quic_transfer,
    "smudp": smudp_transfer,
}


def _canonical(value) -> str:
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def cell_seed(seed_base: int, scenario: str, protocol: str, sweep_value,
              rep: int) -> int:
    """Stable 64-bit seed for one benchmark cell."""
    return stable_hash64(
        f"{seed_base}|{scenario}|{protocol}|{_canonical(sweep_value)}|{rep}")


@dataclass
class BenchRecord:
    """Aggregated result of all repetitions of one benchmark cell."""

    scenario: str
    protocol: str
    sweep_param: str
    sweep_value: object
    file_size: int
    rep_times_us: list  # per-rep completion, None where the transfer failed
    retransmits: int
    timeouts: int

    @property
    def successful_ms(self) -> list[float]:
        return [t / MS for t in self.rep_times_us if t is not None]

    @property
    def failures(self) -> int:
        return sum(1 for t in self.rep_times_us if t is None)

    @property
    def mean_ms(self) -> float | None:
        ok = self.successful_ms
        return fmean(ok) if ok else None


def run_cell(spec: ScenarioSpec, protocol: str, sweep_value, *,
             fec: bool = True) -> BenchRecord:
    """Run all repetitions of one (scenario, protocol, sweep value) cell."""
    transfer = _TRANSFERS[protocol]
    profile, file_size = spec.cell(sweep_value)
    times: list = []
    retransmits = 0
    timeouts = 0
    for rep in range(spec.repetitions):
        seed = cell_seed(spec.seed_base, spec.name, protocol, sweep_value, rep)
        kwargs = {"cwnd_cap": spec.cwnd_cap, "recv_window": spec.recv_window,
                  "seed": seed}
        if protocol == "smudp":
            kwargs["fec"] = fec
        result: TransferResult = transfer(profile, file_size, **kwargs)
        times.append(None if result.failed else result.completion)
        retransmits += result.retransmits
        timeouts += result.timeouts
    return BenchRecord(
        scenario=spec.name,
        protocol=protocol,
        sweep_param=spec.sweep_param,
        sweep_value=sweep_value,
        file_size=file_size,
        rep_times_us=times,
        retransmits=retransmits,
        timeouts=timeouts,
    )


def run_scenario(spec: ScenarioSpec, protocols: Sequence[str] = PROTOCOL_ORDER,
                 *, fec: bool = True) -> list[BenchRecord]:
    """All records for a scenario; deterministic given the scenario seed base."""
    for proto in protocols:
        if proto not in _TRANSFERS:
            raise ValueError(f"unknown protocol {proto!r}; "
                             f"choose from {sorted(_TRANSFERS)}")
    records = []
    for sweep_value in spec.sweep_values:
        for proto in protocols:
            records.append(run_cell(spec, proto, sweep_value, fec=fec))
    return records


def _sweep_value_text(record: BenchRecord) -> str:
    value = record.sweep_value
    if record.sweep_param == "rtt":
        return f"{value / MS:g}"       # milliseconds
    if record.sweep_param == "bandwidth":
        return f"{value / 1e6:g}"      # Mbit/s
    if record.sweep_param == "file_size":
        return str(int(value))         # bytes
    return f"{value:g}"                # loss percent


def emit_csv(records: Iterable[BenchRecord]) -> str:
    """Serialize records, sorted by (scenario, sweep_value, protocol).

    Times are milliseconds with fixed 3-decimal formatting (exact at the
    1 us clock resolution); failed repetitions emit empty cells and are
    counted in the ``failures`` column.
    """
    records = sorted(records, key=lambda r: (r.scenario, float(r.sweep_value),
                                             r.protocol))
    reps = max((len(r.rep_times_us) for r in records), default=0)
    header = ["scenario", "protocol", "sweep_param", "sweep_value",
              "file_size_bytes", "mean_ms"]
    header += [f"rep{i + 1}_ms" for i in range(reps)]
    header.append("failures")
    lines = [",".join(header)]
    for rec in records:
        row = [rec.scenario, rec.protocol, rec.sweep_param,
               _sweep_value_text(rec), str(rec.file_size)]
        mean = rec.mean_ms
        row.append(f"{mean:.3f}" if mean is not None else "")
        for i in range(reps):
            t = rec.rep_times_us[i] if i < len(rec.rep_times_us) else None
            row.append(f"{t / MS:.3f}" if t is not None else "")
        row.append(str(rec.failures))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
