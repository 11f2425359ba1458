"""netlab: deterministic discrete-event simulation of content downloads over
an impaired link, with three transports (TCP, QUIC-like, smUDP) and a
scenario benchmark harness.
"""

from .linknet import (
    TCP_HEADER,
    UDP_HEADER,
    AckInfo,
    Channel,
    Delivery,
    Direction,
    DropReason,
    Dropped,
    ImpairmentProfile,
    Link,
    Packet,
    PacketKind,
    serialization_us,
)
from .quic import quic_transfer
from .simclock import MS, SECOND, US, EventQueue, RngStream, SimTime, ms, stable_hash64
from .smudp import FecGroup, fec_decode, fec_encode, pacing_gap, smudp_transfer
from .tcp import tcp_transfer
from .transport import (
    CongestionController,
    FlowWindow,
    LossKind,
    RttEstimator,
    TransferResult,
    can_send,
)

PROTOCOLS = {
    "tcp": tcp_transfer,
    "quic": quic_transfer,
    "smudp": smudp_transfer,
}

__all__ = [
    "AckInfo",
    "Channel",
    "CongestionController",
    "Delivery",
    "Direction",
    "DropReason",
    "Dropped",
    "EventQueue",
    "FecGroup",
    "FlowWindow",
    "ImpairmentProfile",
    "Link",
    "LossKind",
    "MS",
    "Packet",
    "PacketKind",
    "PROTOCOLS",
    "RngStream",
    "RttEstimator",
    "SECOND",
    "SimTime",
    "TCP_HEADER",
    "TransferResult",
    "UDP_HEADER",
    "US",
    "can_send",
    "fec_decode",
    "fec_encode",
    "ms",
    "pacing_gap",
    "quic_transfer",
    "serialization_us",
    "smudp_transfer",
    "stable_hash64",
    "tcp_transfer",
]
