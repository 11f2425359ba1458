"""Impaired bidirectional link: propagation delay, Bernoulli loss, rate shaping,
bounded FIFO queue, asymmetric up/down rates.

The link is the only source of randomness in a simulation.  Each direction
owns one ``RngStream`` ("loss.down" / "loss.up") and the loss draw is consumed
for every offered packet, even those that end up dropped for a full queue, so
that drop decisions never shift the draw sequence.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from .simclock import EventQueue, RngStream, SimTime

# Wire overhead per packet: IPv4+TCP, and IPv4+UDP plus an 8-byte protocol
# header for the UDP-based transports.
TCP_HEADER = 40
UDP_HEADER = 36

DEFAULT_MTU = 1200
# Bufferbloat-scale bottleneck buffer: at least two bandwidth-delay products
# for every benchmark profile, seconds of backlog at the low rates.
DEFAULT_QUEUE_CAPACITY = 128 * 1024


class Direction(Enum):
    DOWN = "down"  # server -> client
    UP = "up"      # client -> server


class PacketKind(Enum):
    SYN = "syn"
    SYNACK = "synack"
    ACK = "ack"
    DATA = "data"
    NACK = "nack"
    FEC = "fec"
    PROBE = "probe"
    REQUEST = "request"


class DropReason(Enum):
    LOSS = "loss"
    QUEUE_FULL = "queue_full"


@dataclass(frozen=True)
class AckInfo:
    """Acknowledgement payload carried by ACK/NACK packets.

    ``cumulative`` is a byte offset (TCP, smUDP) or largest packet number
    (QUIC).  ``ranges`` holds selective information whose meaning is
    per-protocol: received packet-number ranges for QUIC, missing byte ranges
    for smUDP NACK feedback.  ``echo_seq``/``echo_sent_at`` echo the newest
    data packet seen so the sender can take an RTT sample from aggregate
    feedback (smUDP).
    """

    cumulative: int = 0
    ranges: tuple[tuple[int, int], ...] = ()
    echo_seq: int = -1
    echo_sent_at: SimTime = -1


@dataclass
class Packet:
    id: int
    direction: Direction
    kind: PacketKind
    seq: int = 0                      # byte offset of first payload byte (DATA/FEC)
    ack_info: Optional[AckInfo] = None
    payload_len: int = 0
    header_len: int = UDP_HEADER
    sent_at: SimTime = 0
    pn: int = -1                      # QUIC packet number; never reused
    fec_members: tuple[int, ...] = ()  # seqs covered by an FEC parity packet

    @property
    def wire_size(self) -> int:
        return self.payload_len + self.header_len


@dataclass(frozen=True)
class Delivery:
    arrives_at: SimTime


@dataclass(frozen=True)
class Dropped:
    reason: DropReason


@dataclass(frozen=True)
class ImpairmentProfile:
    """Channel parameters for one simulated connection."""

    rtt: SimTime                      # round-trip propagation, microseconds
    loss_pct: float                   # percentage in [0, 100], per packet, each direction
    bandwidth_down: float             # bits/second, downlink
    up_down_ratio: float = 0.7        # uplink rate = ratio * bandwidth_down
    queue_capacity: int = DEFAULT_QUEUE_CAPACITY  # bytes per direction
    mtu: int = DEFAULT_MTU            # payload bytes per DATA packet

    def __post_init__(self) -> None:
        if self.rtt < 0:
            raise ValueError("rtt must be >= 0")
        if not 0.0 <= self.loss_pct <= 100.0:
            raise ValueError("loss_pct must be in [0, 100]")
        if self.bandwidth_down <= 0:
            raise ValueError("bandwidth_down must be > 0")
        if not 0.0 < self.up_down_ratio <= 1.0:
            raise ValueError("up_down_ratio must be in (0, 1]")
        if self.queue_capacity < self.mtu:
            raise ValueError("queue_capacity must be >= mtu")

    def rate(self, direction: Direction) -> float:
        if direction is Direction.DOWN:
            return self.bandwidth_down
        return self.up_down_ratio * self.bandwidth_down


def serialization_us(wire_bytes: int, rate_bps: float) -> SimTime:
    """Time to clock ``wire_bytes`` onto a ``rate_bps`` link, in microseconds.

    Rounded up to the 1 us clock resolution, so shaped throughput can never
    exceed the configured rate.
    """
    return math.ceil(wire_bytes * 8 * 1_000_000 / rate_bps)


@dataclass
class _DirState:
    busy_until: SimTime = 0
    queued_bytes: int = 0
    backlog: deque = field(default_factory=deque)  # (serialization_done, wire_size)
    offered: int = 0
    delivered: int = 0
    dropped_loss: int = 0
    dropped_queue: int = 0


class Link:
    """One bidirectional impaired link; single-threaded, owned by one simulation."""

    def __init__(self, profile: ImpairmentProfile, seed: int) -> None:
        self.profile = profile
        self._rng = {
            Direction.DOWN: RngStream(seed, "loss.down"),
            Direction.UP: RngStream(seed, "loss.up"),
        }
        self._dirs = {Direction.DOWN: _DirState(), Direction.UP: _DirState()}

    def transmit(self, pkt: Packet, now: SimTime) -> Delivery | Dropped:
        """Offer one packet; returns its delivery time or a drop outcome.

        Draw order is fixed: the loss draw is consumed first, then the queue
        bound is checked, so results are reproducible regardless of queue
        state.  Arrival time is ``max(now, busy_until) + serialization + rtt/2``.
        """
        state = self._dirs[pkt.direction]
        state.offered += 1
        draw = self._rng[pkt.direction].uniform()

        backlog = state.backlog
        while backlog and backlog[0][0] <= now:
            state.queued_bytes -= backlog.popleft()[1]

        if draw < self.profile.loss_pct / 100.0:
            state.dropped_loss += 1
            return Dropped(DropReason.LOSS)

        wire = pkt.wire_size
        if state.queued_bytes + wire > self.profile.queue_capacity:
            state.dropped_queue += 1
            return Dropped(DropReason.QUEUE_FULL)

        start = now if now > state.busy_until else state.busy_until
        done = start + serialization_us(wire, self.profile.rate(pkt.direction))
        state.busy_until = done
        backlog.append((done, wire))
        state.queued_bytes += wire
        state.delivered += 1
        return Delivery(arrives_at=done + self.profile.rtt // 2)

    def queued_bytes(self, direction: Direction, now: SimTime) -> int:
        state = self._dirs[direction]
        while state.backlog and state.backlog[0][0] <= now:
            state.queued_bytes -= state.backlog.popleft()[1]
        return state.queued_bytes

    def loss_stats(self, direction: Direction | None = None) -> dict[str, int]:
        """Offered/delivered/dropped counters; aggregated unless a direction is given."""
        dirs = [self._dirs[direction]] if direction else list(self._dirs.values())
        stats = {
            "offered": sum(d.offered for d in dirs),
            "delivered": sum(d.delivered for d in dirs),
            "dropped_loss": sum(d.dropped_loss for d in dirs),
            "dropped_queue": sum(d.dropped_queue for d in dirs),
        }
        assert stats["offered"] == stats["delivered"] + stats["dropped_loss"] + stats["dropped_queue"]
        return stats


class Channel:
    """Binds a Link to an event queue and delivers packets to endpoint callbacks.

    Endpoints call ``send``; accepted packets fire the receiving side's
    handler at the computed arrival time.  Dropped packets vanish (the drop
    is an outcome, not an error) and are visible only in link statistics.
    """

    def __init__(self, clock: EventQueue, link: Link) -> None:
        self.clock = clock
        self.link = link
        self.on_down: Callable[[Packet], None] | None = None  # client-side handler
        self.on_up: Callable[[Packet], None] | None = None    # server-side handler
        self._next_packet_id = 0

    def make_packet(self, direction: Direction, kind: PacketKind, **kwargs) -> Packet:
        pkt = Packet(id=self._next_packet_id, direction=direction, kind=kind,
                     sent_at=self.clock.now, **kwargs)
        self._next_packet_id += 1
        return pkt

    def send(self, pkt: Packet) -> Delivery | Dropped:
        outcome = self.link.transmit(pkt, self.clock.now)
        if isinstance(outcome, Delivery):
            handler = self.on_down if pkt.direction is Direction.DOWN else self.on_up
            self.clock.schedule(outcome.arrives_at, lambda p=pkt, h=handler: h(p))
        return outcome
