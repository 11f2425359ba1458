"""QUIC-like download: 0-RTT request, selective ACK ranges over a
never-reused packet-number space, gap-based loss detection, and two tail
loss probes before falling back to the retransmission timeout.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import deque
from typing import Optional

from .linknet import (
    UDP_HEADER,
    AckInfo,
    Channel,
    Direction,
    ImpairmentProfile,
    Link,
    Packet,
    PacketKind,
)
from .simclock import MS, SECOND, EventQueue, SimTime
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

REORDER_THRESHOLD = 3       # packet-number gap that declares a loss
MAX_TAIL_PROBES = 2         # probes fired before arming the RTO
MIN_PROBE_DELAY = 10 * MS
MAX_REQUEST_ATTEMPTS = 8
# The request has no RTT estimate to lean on; a short retry timer would
# duplicate it spuriously on any long path.
INITIAL_REQUEST_RTO = 2 * SECOND

Trace = Optional[list]


def _note(trace: Trace, clock: EventQueue, *event) -> None:
    if trace is not None:
        trace.append((clock.now, *event))


class QuicClient:
    """Sends the request in the very first datagram and ACKs every arrival."""

    def __init__(self, clock: EventQueue, chan: Channel, file_size: int,
                 result: TransferResult, trace: Trace = None) -> None:
        self.clock = clock
        self.chan = chan
        self.file_size = file_size
        self.result = result
        self.trace = trace
        self.est = RttEstimator(initial_rto=INITIAL_REQUEST_RTO)
        self.request_attempts = 0
        self.request_timer: Optional[int] = None
        self.got_data = False
        self.received_pns = RangeSet()
        self.received_bytes = RangeSet()
        self.done = False

    def start(self) -> None:
        self._send_request()

    def _send_request(self) -> None:
        if self.request_attempts >= MAX_REQUEST_ATTEMPTS:
            self.result.failed = True
            self.result.reason = "request retries exhausted"
            return
        self.request_attempts += 1
        if self.request_attempts > 1:
            self.result.retransmits += 1
        pkt = self.chan.make_packet(Direction.UP, PacketKind.REQUEST, header_len=UDP_HEADER)
        self.chan.send(pkt)
        _note(self.trace, self.clock, "send", "request", self.request_attempts)
        self.request_timer = self.clock.schedule_after(self.est.effective_rto(),
                                                       self._request_timeout)

    def _request_timeout(self) -> None:
        if self.got_data:
            return
        self.result.timeouts += 1
        self.est.on_timeout()
        self._send_request()

    def on_packet(self, pkt: Packet) -> None:
        if pkt.kind is not PacketKind.DATA:
            return
        if not self.got_data:
            self.got_data = True
            if self.request_timer is not None:
                self.clock.cancel(self.request_timer)
        self.received_pns.add(pkt.pn, pkt.pn + 1)
        self.received_bytes.add(pkt.seq, pkt.seq + pkt.payload_len)
        ack = self.chan.make_packet(
            Direction.UP, PacketKind.ACK, header_len=UDP_HEADER,
            ack_info=AckInfo(cumulative=pkt.pn, ranges=self.received_pns.ranges()),
        )
        self.chan.send(ack)
        if not self.done and self.received_bytes.complete(self.file_size):
            self.done = True
            self.result.completion = self.clock.now
            _note(self.trace, self.clock, "complete")


class QuicServer:
    """Streams data under min(cwnd, rwnd); recovers via ACK ranges, TLP, RTO."""

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
        self.started = False
        self.aborted = False
        self.send_next = 0
        self.pn_next = 0
        # pn -> (offset, len, sent_at, counts_toward_in_flight); speculative
        # probe copies do not count, their original transmission already does.
        self.sent: dict[int, tuple[int, int, SimTime, bool]] = {}
        self.in_flight = 0
        self.retx: deque[tuple[int, int]] = deque()  # (offset, len) awaiting resend
        self.largest_acked = -1
        self.recovery_until_pn = 0
        self.tlp_count = 0
        self.loss_timer: Optional[int] = None
        self.consecutive_timeouts = 0

    def on_packet(self, pkt: Packet) -> None:
        if pkt.kind is PacketKind.REQUEST:
            if not self.started:
                self.started = True
                self._fill_window()
        elif pkt.kind is PacketKind.ACK:
            self._on_ack(pkt.ack_info)

    # -- sending -----------------------------------------------------------

    def _probe_delay(self) -> SimTime:
        # Before any sample the timeout stands in for 2x srtt; a short
        # default would fire probes spuriously on long paths.
        base = self.est.srtt if self.est.has_sample else self.est.rto
        return max(2 * base, MIN_PROBE_DELAY)

    def _send_range(self, offset: int, length: int, retransmit: bool,
                    count_in_flight: bool = True) -> None:
        pn = self.pn_next
        self.pn_next += 1
        self.sent[pn] = (offset, length, self.clock.now, count_in_flight)
        if count_in_flight:
            self.in_flight += length
        if retransmit:
            self.result.retransmits += 1
        pkt = self.chan.make_packet(
            Direction.DOWN, PacketKind.DATA, seq=offset,
            payload_len=length, header_len=UDP_HEADER, pn=pn,
        )
        self.chan.send(pkt)
        _note(self.trace, self.clock, "send", "data", pn, offset, retransmit)
        self._rearm_loss_timer()

    def _fill_window(self) -> None:
        while self.retx:
            offset, length = self.retx[0]
            self.fw.bytes_in_flight = self.in_flight
            if can_send(self.cc, self.fw) < length:
                return
            self.retx.popleft()
            self._send_range(offset, length, retransmit=True)
        while self.send_next < self.file_size:
            length = min(self.mtu, self.file_size - self.send_next)
            self.fw.bytes_in_flight = self.in_flight
            if can_send(self.cc, self.fw) < length:
                return
            self._send_range(self.send_next, length, retransmit=False)
            self.send_next += length

    # -- acknowledgement and loss detection ---------------------------------

    def _on_ack(self, info: AckInfo) -> None:
        if self.aborted or not self.started:
            return
        # Unacked packets are few (bounded by the window); scan them against
        # the ACK ranges instead of walking every received number.
        starts = [lo for lo, _ in info.ranges]
        newly_acked: list[int] = []
        for pn in self.sent:
            idx = bisect_right(starts, pn) - 1
            if idx >= 0 and pn < info.ranges[idx][1]:
                newly_acked.append(pn)
        if not newly_acked:
            return
        largest_newly = max(newly_acked)
        self.est.update(self.clock.now - self.sent[largest_newly][2])
        self.est.on_ack()
        self.consecutive_timeouts = 0
        self.tlp_count = 0
        _note(self.trace, self.clock, "ack", largest_newly)
        newly_bytes = 0
        for pn in newly_acked:
            _, length, _, counts = self.sent.pop(pn)
            if counts:
                self.in_flight -= length
            newly_bytes += length
        if info.cumulative > self.largest_acked:
            self.largest_acked = info.cumulative
        self.cc.on_ack(newly_bytes)
        self._detect_losses()
        self._rearm_loss_timer()
        self._fill_window()
        if not self.sent and not self.retx and self.send_next >= self.file_size:
            self._cancel_loss_timer()

    def _detect_losses(self) -> None:
        """Packet numbers trailing the largest ACK by the reorder threshold are lost."""
        threshold = self.largest_acked - REORDER_THRESHOLD
        lost = [pn for pn in self.sent if pn <= threshold]
        if not lost:
            return
        congestion_event = False
        for pn in sorted(lost):
            offset, length, _, counts = self.sent.pop(pn)
            if counts:
                self.in_flight -= length
            self.retx.append((offset, length))
            if pn >= self.recovery_until_pn:
                congestion_event = True
            _note(self.trace, self.clock, "lost", pn, offset)
        if congestion_event:
            # One window reduction per congestion event, not per packet.
            self.cc.on_loss(LossKind.FAST_RECOVERY)
            self.recovery_until_pn = self.pn_next
            _note(self.trace, self.clock, "cc_loss", "fast_recovery")

    # -- tail loss probes and RTO -------------------------------------------

    def _rearm_loss_timer(self) -> None:
        self._cancel_loss_timer()
        if self.in_flight == 0 and not self.retx:
            return
        if self.tlp_count < MAX_TAIL_PROBES:
            self.loss_timer = self.clock.schedule_after(self._probe_delay(), self._on_tlp)
        else:
            self.loss_timer = self.clock.schedule_after(self.est.effective_rto(),
                                                        self._on_rto)

    def _cancel_loss_timer(self) -> None:
        if self.loss_timer is not None:
            self.clock.cancel(self.loss_timer)
            self.loss_timer = None

    def _last_unacked(self) -> Optional[tuple[int, int]]:
        if not self.sent:
            return None
        offset, length, _, _ = self.sent[max(self.sent)]
        return offset, length

    def _on_tlp(self) -> None:
        self.loss_timer = None
        if self.aborted or (self.in_flight == 0 and not self.retx):
            return
        self.tlp_count += 1
        _note(self.trace, self.clock, "tlp", self.tlp_count)
        if self.send_next < self.file_size:
            # Probe with new data when there is some; it bypasses the window.
            length = min(self.mtu, self.file_size - self.send_next)
            self._send_range(self.send_next, length, retransmit=False)
            self.send_next += length
        elif self.retx:
            offset, length = self.retx.popleft()
            self._send_range(offset, length, retransmit=True)
        else:
            last = self._last_unacked()
            if last is not None:
                # Resent speculatively under a new packet number; the stale
                # number stays in flight until acknowledged or declared lost.
                self._send_range(last[0], last[1], retransmit=True,
                                 count_in_flight=False)

    def _on_rto(self) -> None:
        self.loss_timer = None
        if self.aborted or (self.in_flight == 0 and not self.retx):
            return
        self.result.timeouts += 1
        self.consecutive_timeouts += 1
        _note(self.trace, self.clock, "rto")
        if self.consecutive_timeouts > MAX_CONSECUTIVE_TIMEOUTS:
            self.aborted = True
            self.result.failed = True
            self.result.reason = "retransmission timeouts exhausted"
            return
        self.cc.on_loss(LossKind.TIMEOUT)
        self.est.on_timeout()
        if self.retx:
            offset, length = self.retx.popleft()
            self._send_range(offset, length, retransmit=True)
        else:
            earliest = min(self.sent) if self.sent else None
            if earliest is not None:
                offset, length, _, _ = self.sent[earliest]
                self._send_range(offset, length, retransmit=True,
                                 count_in_flight=False)


def quic_transfer(profile: ImpairmentProfile, file_size: int, *,
                  cwnd_cap: int = DEFAULT_RECV_WINDOW,
                  recv_window: int = DEFAULT_RECV_WINDOW,
                  seed: int = 0, trace: Trace = None,
                  max_events: int = 100_000_000) -> TransferResult:
    """Simulate one QUIC-like download of ``file_size`` bytes over ``profile``."""
    if file_size <= 0:
        raise ValueError("file_size must be positive")
    clock = EventQueue()
    link = Link(profile, seed)
    chan = Channel(clock, link)
    result = TransferResult(completion=None)
    client = QuicClient(clock, chan, file_size, result, trace)
    server = QuicServer(clock, chan, file_size, profile.mtu, cwnd_cap,
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
