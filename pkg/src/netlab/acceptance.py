"""Acceptance suite: the benchmark's exit criteria, each encoded as one
checkable property with its tolerance fixed here.

Every criterion returns (passed, detail); ``run_acceptance`` prints one
PASS/FAIL line per criterion.  The benchmark-trend criteria share one
matrix run at the default seed base.
"""

from __future__ import annotations

from dataclasses import replace
from functools import lru_cache

import numpy as np

from .bench import BenchRecord, emit_csv, run_scenario
from .linknet import (
    TCP_HEADER,
    UDP_HEADER,
    Delivery,
    Direction,
    ImpairmentProfile,
    Link,
    Packet,
    PacketKind,
    serialization_us,
)
from .quic import quic_transfer
from .scenarios import BUILTIN_SCENARIOS, KIB
from .simclock import MS, RngStream
from .smudp import fec_decode, fec_encode, smudp_transfer
from .tcp import tcp_transfer
from .transport import RttEstimator

SEED_BASE = None  # default scenario seed bases are used unless overridden


@lru_cache(maxsize=None)
def _scenario_records(name: str) -> tuple[BenchRecord, ...]:
    return tuple(run_scenario(BUILTIN_SCENARIOS[name]))


def _mean(records, protocol: str, sweep_value) -> float:
    for rec in records:
        if rec.protocol == protocol and rec.sweep_value == sweep_value:
            if rec.mean_ms is None:
                raise AssertionError(
                    f"all repetitions failed for {rec.scenario}/{protocol}"
                    f"/{sweep_value}")
            return rec.mean_ms
    raise KeyError((protocol, sweep_value))


# -- criteria -----------------------------------------------------------------


def check_protocol_ordering() -> tuple[bool, str]:
    """Cellular profiles, sizes >= 250 KiB: mean smUDP < QUIC < TCP, strict."""
    failures = []
    for name in ("wifi", "lte", "3g", "2g"):
        records = _scenario_records(name)
        for size in (250 * KIB, 500 * KIB, 1000 * KIB):
            s = _mean(records, "smudp", size)
            q = _mean(records, "quic", size)
            t = _mean(records, "tcp", size)
            if not (s < q < t):
                failures.append(f"{name}/{size // KIB}KiB "
                                f"({s:.0f}, {q:.0f}, {t:.0f})")
    if failures:
        return False, "ordering violated at " + "; ".join(failures)
    return True, "smUDP < QUIC < TCP at all 12 cells"


def check_loss_sensitivity() -> tuple[bool, str]:
    """Loss sweep 250 KiB: completion(2.5%)/completion(0.5%) per protocol."""
    records = _scenario_records("loss")
    ratios = {}
    for proto in ("tcp", "quic", "smudp"):
        low = _mean(records, proto, 0.5)
        high = _mean(records, proto, 2.5)
        ratios[proto] = high / low
    ok = ratios["tcp"] >= 1.8 and ratios["quic"] <= 1.5 and ratios["smudp"] <= 1.5
    detail = ", ".join(f"{p}={r:.2f}" for p, r in ratios.items())
    return ok, f"ratios: {detail} (need tcp >= 1.8, others <= 1.5)"


def check_zero_rtt_exact() -> tuple[bool, str]:
    """Lossless single-packet file: 2 RTT for TCP, 1 RTT for the 0-RTT pair."""
    rtt = 100 * MS
    bw = 1e6
    ratio = 0.7
    file_size = 1000
    profile = ImpairmentProfile(rtt=rtt, loss_pct=0.0, bandwidth_down=bw,
                                up_down_ratio=ratio)
    up = ratio * bw
    tcp_expected = (2 * rtt
                    + 2 * serialization_us(TCP_HEADER, up)
                    + serialization_us(TCP_HEADER, bw)
                    + serialization_us(TCP_HEADER + file_size, bw))
    udp_expected = (rtt
                    + serialization_us(UDP_HEADER, up)
                    + serialization_us(UDP_HEADER + file_size, bw))
    got = {
        "tcp": tcp_transfer(profile, file_size, seed=7).completion,
        "quic": quic_transfer(profile, file_size, seed=7).completion,
        "smudp": smudp_transfer(profile, file_size, seed=7).completion,
    }
    ok = (got["tcp"] == tcp_expected and got["quic"] == udp_expected
          and got["smudp"] == udp_expected)
    return ok, (f"tcp {got['tcp']} us (want {tcp_expected}), "
                f"quic {got['quic']} / smudp {got['smudp']} us "
                f"(want {udp_expected}); tolerance 0")


def check_rtt_scaling() -> tuple[bool, str]:
    """RTT sweep: linear fit R^2 >= 0.95 per protocol; TCP slope > smUDP's."""
    records = _scenario_records("rtt")
    spec = BUILTIN_SCENARIOS["rtt"]
    xs = np.array([v / MS for v in spec.sweep_values])
    stats = {}
    for proto in ("tcp", "quic", "smudp"):
        ys = np.array([_mean(records, proto, v) for v in spec.sweep_values])
        slope, intercept = np.polyfit(xs, ys, 1)
        fitted = slope * xs + intercept
        ss_res = float(np.sum((ys - fitted) ** 2))
        ss_tot = float(np.sum((ys - ys.mean()) ** 2))
        r2 = 1.0 - ss_res / ss_tot
        stats[proto] = (slope, r2)
    ok = (all(r2 >= 0.95 for _, r2 in stats.values())
          and stats["tcp"][0] > stats["smudp"][0])
    detail = ", ".join(f"{p}: slope={s:.2f} R2={r:.3f}" for p, (s, r) in stats.items())
    return ok, detail


def check_bandwidth_floor() -> tuple[bool, str]:
    """At 0.2 Mbit/s with 4 MiB: all within 10% of one another, none
    faster than the raw serialization bound."""
    records = _scenario_records("bandwidth")
    file_size = BUILTIN_SCENARIOS["bandwidth"].file_size
    floor_ms = file_size * 8 / 0.2e6 * 1000.0
    means = {p: _mean(records, p, 0.2e6) for p in ("tcp", "quic", "smudp")}
    spread = max(means.values()) / min(means.values())
    ok = spread <= 1.10 and all(m >= floor_ms for m in means.values())
    detail = (", ".join(f"{p}={m:.0f}ms" for p, m in means.items())
              + f"; spread x{spread:.3f} (<=1.10), floor {floor_ms:.0f}ms")
    return ok, detail


def check_bandwidth_plateau() -> tuple[bool, str]:
    """1.4 -> 2.2 Mbit/s: TCP changes < 15%, smUDP drops > 20%."""
    records = _scenario_records("bandwidth")
    tcp_low = _mean(records, "tcp", 1.4e6)
    tcp_high = _mean(records, "tcp", 2.2e6)
    sm_low = _mean(records, "smudp", 1.4e6)
    sm_high = _mean(records, "smudp", 2.2e6)
    tcp_change = abs(tcp_high - tcp_low) / tcp_low
    sm_drop = (sm_low - sm_high) / sm_low
    ok = tcp_change < 0.15 and sm_drop > 0.20
    return ok, (f"tcp change {tcp_change:.1%} (<15%), "
                f"smudp drop {sm_drop:.1%} (>20%)")


def check_link_unit() -> tuple[bool, str]:
    """Loss calibration, shaped throughput bound, exact one-way delay."""
    profile = ImpairmentProfile(rtt=100 * MS, loss_pct=2.5,
                                bandwidth_down=1e6, queue_capacity=10 ** 9)
    link = Link(profile, seed=42)
    n = 100_000
    for i in range(n):
        pkt = Packet(id=i, direction=Direction.DOWN, kind=PacketKind.DATA,
                     payload_len=1200, header_len=36)
        link.transmit(pkt, now=i * 11 * MS)
    stats = link.loss_stats(Direction.DOWN)
    empirical = 100.0 * stats["dropped_loss"] / stats["offered"]
    loss_ok = abs(empirical - 2.5) <= 0.2

    rate = 2.2e6
    shaped = Link(ImpairmentProfile(rtt=0, loss_pct=0.0, bandwidth_down=rate,
                                    queue_capacity=10 ** 9), seed=1)
    wire = 1236
    last = 0
    count = 2000
    for i in range(count):
        pkt = Packet(id=i, direction=Direction.DOWN, kind=PacketKind.DATA,
                     payload_len=1200, header_len=36)
        last = shaped.transmit(pkt, now=0).arrives_at
    throughput = count * wire * 8 / (last / 1e6)
    throughput_ok = throughput <= rate * 1.001

    delay_profile = ImpairmentProfile(rtt=37 * MS, loss_pct=0.0,
                                      bandwidth_down=2.2e6)
    delay_link = Link(delay_profile, seed=9)
    pkt = Packet(id=0, direction=Direction.DOWN, kind=PacketKind.DATA,
                 payload_len=741, header_len=36)
    out = delay_link.transmit(pkt, now=5000)
    expected = 5000 + serialization_us(777, 2.2e6) + delay_profile.rtt // 2
    delay_ok = isinstance(out, Delivery) and out.arrives_at == expected

    ok = loss_ok and throughput_ok and delay_ok
    return ok, (f"loss {empirical:.3f}% (2.5 +/- 0.2), throughput "
                f"{throughput / 1e6:.4f} Mbit/s (<= {rate * 1.001 / 1e6:.4f}), "
                f"one-way delay {'exact' if delay_ok else 'WRONG'}")


# Hand-computed: integer-microsecond RFC-6298 recurrence for samples
# 100, 200, 50, 300 ms with min_rto 200 ms (srtt, rttvar, rto in us).
RTO_ORACLE = (
    (100_000, 50_000, 300_000),
    (112_500, 62_500, 362_500),
    (104_687, 62_500, 354_687),
    (129_101, 95_703, 511_913),
)


def check_rto_oracle() -> tuple[bool, str]:
    est = RttEstimator()
    got = []
    for sample in (100 * MS, 200 * MS, 50 * MS, 300 * MS):
        est.update(sample)
        got.append((est.srtt, est.rttvar, est.rto))
    ok = tuple(got) == RTO_ORACLE
    return ok, f"sequence {'matches' if ok else 'differs from'} the committed table"


def check_fec_exhaustive() -> tuple[bool, str]:
    """Every group size 1..10, every single-drop position: byte-exact repair."""
    rng = RngStream(2718, "fec.oracle")
    block = 64
    cases = 0
    for group_size in range(1, 11):
        payloads = []
        for i in range(group_size):
            length = block if i < group_size - 1 else 1 + rng.next_u64() % block
            payloads.append(bytes(rng.next_u64() % 256 for _ in range(length)))
        parity = fec_encode(payloads, block)
        for drop in range(group_size):
            present = [p for i, p in enumerate(payloads) if i != drop]
            rebuilt = fec_decode(parity, present)
            original = payloads[drop]
            if rebuilt[:len(original)] != original:
                return False, f"group {group_size}, drop {drop}: mismatch"
            if any(rebuilt[len(original):]):
                return False, f"group {group_size}, drop {drop}: padding dirty"
            cases += 1
    return True, f"{cases} (group, drop) cases reconstructed byte-exactly"


def check_determinism() -> tuple[bool, str]:
    """`matrix --all --seed 42` twice produces byte-identical CSVs."""
    outputs = []
    for _ in range(2):
        csvs = {}
        for name in sorted(BUILTIN_SCENARIOS):
            spec = replace(BUILTIN_SCENARIOS[name], seed_base=42)
            csvs[name] = emit_csv(run_scenario(spec))
        outputs.append(csvs)
    same = outputs[0] == outputs[1]
    rows = sum(text.count("\n") - 1 for text in outputs[0].values())
    return same, (f"{len(outputs[0])} scenario files, {rows} records, "
                  f"{'byte-identical' if same else 'DIFFER'}")


FAST_CRITERIA = [
    ("zero-rtt-vs-3whs", check_zero_rtt_exact),
    ("link-layer-units", check_link_unit),
    ("rto-oracle", check_rto_oracle),
    ("fec-exhaustive", check_fec_exhaustive),
]

TREND_CRITERIA = [
    ("protocol-ordering", check_protocol_ordering),
    ("loss-sensitivity", check_loss_sensitivity),
    ("rtt-scaling", check_rtt_scaling),
    ("bandwidth-floor", check_bandwidth_floor),
    ("bandwidth-plateau", check_bandwidth_plateau),
    ("determinism", check_determinism),
]


def run_acceptance(quick: bool = False) -> bool:
    criteria = FAST_CRITERIA + ([] if quick else TREND_CRITERIA)
    all_ok = True
    for name, check in criteria:
        ok, detail = check()
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return all_ok
