"""Simplified TCP download: 3-way handshake, ACK-per-packet, cumulative ACKs,
3-dup-ACK fast retransmit, and go-back-N timeout recovery.

There is no selective feedback: a single hole is repaired by fast
retransmit, but any further loss in the same window stalls the sender until
the retransmission timeout, which then resends the whole window from the
hole forward.  Those stalls and duplicated windows are the loss pathology
this model is meant to expose.
"""

from __future__ import annotations

from typing import Optional

from .linknet import (
    TCP_HEADER,
    AckInfo,
    Channel,
    Direction,
    ImpairmentProfile,
    Link,
    Packet,
    PacketKind,
)
from .simclock import SECOND, EventQueue, SimTime
from .transport import (
    DEFAULT_RECV_WINDOW,
    INITIAL_SENDER_RTO,
    MAX_CONSECUTIVE_TIMEOUTS,
    CongestionController,
    FlowWindow,
    LossKind,
    RangeSet,
    RttEstimator,
    TransferResult,
    can_send,
)

DUPACK_THRESHOLD = 3
MAX_HANDSHAKE_ATTEMPTS = 8
# Pre-sample retry timer for the server's SYN-ACK (classic BSD value). It
# must exceed any plausible round trip or the race against the returning
# request destroys the handshake RTT sample.
INITIAL_SYNACK_RTO = 3 * SECOND

Trace = Optional[list]


def _note(trace: Trace, clock: EventQueue, *event) -> None:
    if trace is not None:
        trace.append((clock.now, *event))


class TcpClient:
    """Requests the file, acknowledges every data packet, tracks completion."""

    def __init__(self, clock: EventQueue, chan: Channel, file_size: int,
                 result: TransferResult, trace: Trace = None) -> None:
        self.clock = clock
        self.chan = chan
        self.file_size = file_size
        self.result = result
        self.trace = trace
        self.est = RttEstimator()
        self.established = False
        self.syn_attempts = 0
        self.syn_sent_at: SimTime = 0
        self.syn_timer: Optional[int] = None
        self.received = RangeSet()
        self.done = False

    def start(self) -> None:
        self._send_syn()

    def _send_syn(self) -> None:
        if self.syn_attempts >= MAX_HANDSHAKE_ATTEMPTS:
            self.result.failed = True
            self.result.reason = "handshake retries exhausted"
            return
        self.syn_attempts += 1
        if self.syn_attempts > 1:
            self.result.retransmits += 1
        else:
            self.syn_sent_at = self.clock.now
        pkt = self.chan.make_packet(Direction.UP, PacketKind.SYN, header_len=TCP_HEADER)
        self.chan.send(pkt)
        _note(self.trace, self.clock, "send", "syn", self.syn_attempts)
        self.syn_timer = self.clock.schedule_after(self.est.effective_rto(), self._syn_timeout)

    def _syn_timeout(self) -> None:
        if self.established:
            return
        self.result.timeouts += 1
        self.est.on_timeout()
        self._send_syn()

    def _send_request(self) -> None:
        pkt = self.chan.make_packet(Direction.UP, PacketKind.REQUEST, header_len=TCP_HEADER)
        self.chan.send(pkt)
        _note(self.trace, self.clock, "send", "request")

    def on_packet(self, pkt: Packet) -> None:
        if pkt.kind is PacketKind.SYNACK:
            if not self.established:
                self.established = True
                if self.syn_timer is not None:
                    self.clock.cancel(self.syn_timer)
                if self.syn_attempts == 1:
                    self.est.update(self.clock.now - self.syn_sent_at)
                self.est.on_ack()
            # A duplicate SYN-ACK means the server is still waiting for the
            # request; repeat it either way.
            self._send_request()
        elif pkt.kind is PacketKind.DATA:
            # Out-of-order data is buffered, but the ACK carries only the
            # cumulative prefix; there is no selective feedback.
            self.received.add(pkt.seq, pkt.seq + pkt.payload_len)
            cum = self.received.contiguous_prefix()
            ack = self.chan.make_packet(
                Direction.UP, PacketKind.ACK, header_len=TCP_HEADER,
                ack_info=AckInfo(cumulative=cum),
            )
            self.chan.send(ack)
            if not self.done and self.received.complete(self.file_size):
                self.done = True
                self.result.completion = self.clock.now
                _note(self.trace, self.clock, "complete")


class TcpServer:
    """Sends the file under min(cwnd, rwnd) with cumulative-ACK recovery."""

    def __init__(self, clock: EventQueue, chan: Channel, file_size: int,
                 mtu: int, cwnd_cap: int, recv_window: int,
                 result: TransferResult, trace: Trace = None) -> None:
        self.clock = clock
        self.chan = chan
        self.file_size = file_size
        self.mtu = mtu
        self.result = result
        self.trace = trace
        self.est = RttEstimator(initial_rto=INITIAL_SENDER_RTO)
        self.cc = CongestionController(mtu, cwnd_cap)
        self.fw = FlowWindow(recv_window=recv_window)
        self.send_next = 0
        self.acked_upto = 0
        self.seg_meta: dict[int, list] = {}  # offset -> [len, last_sent_at, retransmitted]
        self.started = False
        self.aborted = False
        self.synack_attempts = 0
        self.synack_timer: Optional[int] = None
        self.synack_sent_at: SimTime = 0
        self.rto_timer: Optional[int] = None
        self.consecutive_timeouts = 0
        self.dupacks = 0
        self.in_recovery = False
        self.recover = 0

    # -- handshake ---------------------------------------------------------

    def on_packet(self, pkt: Packet) -> None:
        if pkt.kind is PacketKind.SYN:
            # Duplicate SYNs (client retries on a path longer than its
            # timeout) are ignored; the server's own timer covers a lost
            # SYN-ACK, which keeps the RTT sample unambiguous.
            if not self.started and self.synack_attempts == 0:
                self._send_synack(first=True)
        elif pkt.kind is PacketKind.REQUEST:
            self._on_request()
        elif pkt.kind is PacketKind.ACK:
            self._on_ack(pkt.ack_info.cumulative)

    def _send_synack(self, first: bool) -> None:
        if self.synack_attempts >= MAX_HANDSHAKE_ATTEMPTS:
            self.aborted = True
            self.result.failed = True
            self.result.reason = "server handshake retries exhausted"
            return
        self.synack_attempts += 1
        if not first:
            self.result.retransmits += 1
        self.synack_sent_at = self.clock.now
        pkt = self.chan.make_packet(Direction.DOWN, PacketKind.SYNACK,
                                    header_len=TCP_HEADER)
        self.chan.send(pkt)
        _note(self.trace, self.clock, "send", "synack", self.synack_attempts)
        if self.synack_timer is not None:
            self.clock.cancel(self.synack_timer)
        delay = (INITIAL_SYNACK_RTO << min(self.synack_attempts - 1, 4)
                 if not self.est.has_sample else self.est.effective_rto())
        self.synack_timer = self.clock.schedule_after(delay, self._synack_timeout)

    def _synack_timeout(self) -> None:
        if self.started or self.aborted:
            return
        self.result.timeouts += 1
        self.est.on_timeout()
        self._send_synack(first=False)

    def _on_request(self) -> None:
        if self.started:
            return
        self.started = True
        if self.synack_timer is not None:
            self.clock.cancel(self.synack_timer)
        if self.synack_attempts == 1:
            self.est.update(self.clock.now - self.synack_sent_at)
        self.est.on_ack()
        self._fill_window()

    # -- data transfer -----------------------------------------------------

    def _in_flight(self) -> int:
        return self.send_next - self.acked_upto

    def _fill_window(self) -> None:
        while self.send_next < self.file_size:
            seg_len = min(self.mtu, self.file_size - self.send_next)
            self.fw.bytes_in_flight = self._in_flight()
            if can_send(self.cc, self.fw) < seg_len:
                break
            self._send_segment(self.send_next, seg_len)
            self.send_next += seg_len

    def _send_segment(self, offset: int, length: int) -> None:
        meta = self.seg_meta.get(offset)
        retransmit = meta is not None
        if retransmit:
            meta[1] = self.clock.now
            meta[2] = True
            self.result.retransmits += 1
        else:
            self.seg_meta[offset] = [length, self.clock.now, False]
        pkt = self.chan.make_packet(
            Direction.DOWN, PacketKind.DATA, seq=offset,
            payload_len=length, header_len=TCP_HEADER,
        )
        self.chan.send(pkt)
        _note(self.trace, self.clock, "send", "data", offset, retransmit)
        if self.rto_timer is None:
            self._arm_rto()

    def _arm_rto(self) -> None:
        if self.rto_timer is not None:
            self.clock.cancel(self.rto_timer)
        self.rto_timer = self.clock.schedule_after(self.est.effective_rto(), self._on_rto)

    def _restart_rto(self) -> None:
        if self.rto_timer is not None:
            self.clock.cancel(self.rto_timer)
            self.rto_timer = None
        if self._in_flight() > 0:
            self._arm_rto()

    def _go_back(self) -> None:
        """Go-back-N: rewind to the earliest unacked byte and resend forward.

        Everything past the hole is sent again even if the receiver already
        buffered it; that duplicated load is TCP's recovery cost here.
        """
        self.send_next = self.acked_upto
        self._fill_window()

    def _retransmit_earliest(self) -> None:
        meta = self.seg_meta.get(self.acked_upto)
        if meta is not None:
            self._send_segment(self.acked_upto, meta[0])

    def _on_rto(self) -> None:
        self.rto_timer = None
        if self.aborted or self._in_flight() == 0:
            return
        self.result.timeouts += 1
        self.consecutive_timeouts += 1
        _note(self.trace, self.clock, "rto", self.acked_upto)
        if self.consecutive_timeouts > MAX_CONSECUTIVE_TIMEOUTS:
            self.aborted = True
            self.result.failed = True
            self.result.reason = "data retransmission timeouts exhausted"
            return
        self.cc.on_loss(LossKind.TIMEOUT)
        self.est.on_timeout()
        self.in_recovery = False
        self.dupacks = 0
        self._go_back()
        self._arm_rto()

    def _on_ack(self, cum: int) -> None:
        if self.aborted or not self.started:
            return
        if cum > self.acked_upto:
            newly = cum - self.acked_upto
            self._sample_rtt(cum)
            # Drop metadata for fully acknowledged segments.
            off = self.acked_upto
            while off < cum:
                meta = self.seg_meta.pop(off, None)
                if meta is None:
                    break
                off += meta[0]
            self.acked_upto = cum
            # The cumulative ACK can overtake a rewound send pointer when
            # the receiver had later segments buffered.
            if self.send_next < cum:
                self.send_next = cum
            self.est.on_ack()
            self.consecutive_timeouts = 0
            self.dupacks = 0
            self.cc.on_ack(newly)
            if self.in_recovery and cum >= self.recover:
                self.in_recovery = False
            self._restart_rto()
            self._fill_window()
            if self.acked_upto >= self.file_size and self.rto_timer is not None:
                self.clock.cancel(self.rto_timer)
                self.rto_timer = None
        elif cum == self.acked_upto and self._in_flight() > 0:
            self.dupacks += 1
            if self.dupacks == DUPACK_THRESHOLD and not self.in_recovery:
                # One window reduction per loss event; only the earliest hole
                # is resent.  Without selective feedback any further hole in
                # the same window waits for the timeout, which then goes back
                # through the whole window.
                self.in_recovery = True
                self.recover = self.send_next
                self.cc.on_loss(LossKind.FAST_RECOVERY)
                _note(self.trace, self.clock, "fast_retransmit", self.acked_upto)
                self._retransmit_earliest()
                self._restart_rto()

    def _sample_rtt(self, cum: int) -> None:
        """Karn's rule: sample only from a never-retransmitted segment."""
        offset = (cum - 1) // self.mtu * self.mtu  # segments are mtu-aligned
        meta = self.seg_meta.get(offset)
        if meta is not None and offset + meta[0] == cum and not meta[2]:
            self.est.update(self.clock.now - meta[1])


def tcp_transfer(profile: ImpairmentProfile, file_size: int, *,
                 cwnd_cap: int = DEFAULT_RECV_WINDOW,
                 recv_window: int = DEFAULT_RECV_WINDOW,
                 seed: int = 0, trace: Trace = None,
                 max_events: int = 100_000_000) -> TransferResult:
    """Simulate one TCP download of ``file_size`` bytes over ``profile``."""
    if file_size <= 0:
        raise ValueError("file_size must be positive")
    clock = EventQueue()
    link = Link(profile, seed)
    chan = Channel(clock, link)
    result = TransferResult(completion=None)
    client = TcpClient(clock, chan, file_size, result, trace)
    server = TcpServer(clock, chan, file_size, profile.mtu, cwnd_cap,
                       recv_window, result, trace)
    chan.on_down = client.on_packet
    chan.on_up = server.on_packet
    client.start()
    clock.run_until_idle(max_events)
    if result.completion is None:
        result.failed = True
        if not result.reason:
            result.reason = "transfer did not complete"
    return result
