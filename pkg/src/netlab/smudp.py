"""Reliable-UDP download ("smUDP"): 0-RTT request, paced sending, XOR
forward error correction, aggregate ACK+NACK feedback, shared congestion
and flow control.

Design choices (the mechanisms are named, not specified, by the protocol's
description): XOR parity over groups of 10 data packets, feedback every
max(srtt/4, 5 ms), pacing at 1.25x cwnd/srtt with a 10-packet initial burst,
and no window reduction for losses repaired by parity alone.
"""

from __future__ import annotations

from collections import deque
from typing import Optional, Sequence

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
    segment_sizes,
)

FEC_GROUP_SIZE = 20
PACING_BURST = 10           # packets sent back-to-back at transfer start
MIN_FEEDBACK_GAP = 5 * MS
DEFAULT_SRTT = 100 * MS     # pacing estimate before the first RTT sample
MAX_REQUEST_ATTEMPTS = 8
INITIAL_REQUEST_RTO = 2 * SECOND  # patient pre-sample request retry
RECEIVER_GIVE_UP = 60 * SECOND  # stop feedback after this long without data
# Adaptive parity duty: keep sending parity while an isolated loss (the kind
# parity can repair) was observed within this many data packets; pause on a
# clean stretch, where rare singles fall back to NACK repair.  Burst drops
# are congestion, not noise, and do not count: parity cannot fix a burst.
FEC_CLEAN_WINDOW = 60
FEC_ISOLATED_LIMIT = 2  # NACK reports up to this many segments count as noise

Trace = Optional[list]


def _note(trace: Trace, clock: EventQueue, *event) -> None:
    if trace is not None:
        trace.append((clock.now, *event))


# -- XOR forward error correction -------------------------------------------


def fec_encode(payloads: Sequence[bytes], block_size: int) -> bytes:
    """Parity block: XOR of all payloads zero-padded to ``block_size``.

    Accepts 1..n members; a group of one yields the padded member itself.
    """
    if not payloads:
        raise ValueError("cannot encode an empty group")
    parity = bytearray(block_size)
    for payload in payloads:
        if len(payload) > block_size:
            raise ValueError("payload longer than FEC block size")
        for i, byte in enumerate(payload):
            parity[i] ^= byte
    return bytes(parity)


def fec_decode(parity: bytes, present: Sequence[bytes]) -> bytes:
    """Reconstruct the single missing member, zero-padded to the block size.

    Callers slice the result to the missing packet's known length.  Valid
    only when exactly one member is absent; with two or more missing the
    group is unrecoverable and the caller must fall back to retransmission.
    """
    block = bytearray(parity)
    for payload in present:
        for i, byte in enumerate(payload):
            block[i] ^= byte
    return bytes(block)


class FecGroup:
    """One parity group: consecutive data packets plus their XOR parity."""

    def __init__(self, group_id: int, member_seqs: Sequence[int],
                 payloads: Sequence[bytes], block_size: int) -> None:
        if len(member_seqs) != len(payloads):
            raise ValueError("one payload per member required")
        self.group_id = group_id
        self.member_seqs = tuple(member_seqs)
        self.parity = fec_encode(payloads, block_size)

    def recover(self, received: dict[int, bytes]) -> Optional[tuple[int, bytes]]:
        """(seq, padded payload) of the one missing member, or None if unrecoverable."""
        missing = [seq for seq in self.member_seqs if seq not in received]
        if len(missing) != 1:
            return None
        present = [received[seq] for seq in self.member_seqs if seq in received]
        return missing[0], fec_decode(self.parity, present)


# -- protocol ----------------------------------------------------------------


def pacing_gap(cwnd: int, srtt: SimTime, wire_size: int) -> SimTime:
    """Inter-packet gap so the send rate is 1.25x cwnd/srtt, floored at 1 us.

    gap = wire_bits / (1.25 * cwnd_bits / srtt) = wire * srtt * 4 / (5 * cwnd).
    """
    return max(1, wire_size * srtt * 4 // (5 * cwnd))


class SmudpClient:
    """Receives data, repairs single losses from parity, sends periodic feedback."""

    def __init__(self, clock: EventQueue, chan: Channel, file_size: int, mtu: int,
                 result: TransferResult, trace: Trace = None) -> None:
        self.clock = clock
        self.chan = chan
        self.file_size = file_size
        self.mtu = mtu
        self.result = result
        self.trace = trace
        self.est = RttEstimator(initial_rto=INITIAL_REQUEST_RTO)
        self.request_attempts = 0
        self.request_timer: Optional[int] = None
        self.got_data = False
        self.received = RangeSet()     # delivered or parity-recovered bytes
        self.seg_lens = segment_sizes(file_size, mtu)
        self.n_segments = len(self.seg_lens)
        self.group_members: dict[int, set[int]] = {}  # group -> segment idxs present
        self.group_parity: set[int] = set()
        # Parity coverage actually received, per group: a flushed parity may
        # cover only the members sent before the window closed.
        self.parity_covers: dict[int, list[tuple[int, ...]]] = {}
        self.recovered: set[int] = set()  # segment idxs repaired locally
        self.highest_idx_seen = -1
        self.arrivals = 0
        self.last_member_arrival: dict[int, int] = {}  # group -> arrival counter
        self.last_data_at: SimTime = 0
        self.last_echo: tuple[int, SimTime] = (-1, -1)
        self.feedback_timer: Optional[int] = None
        self.done = False

    # segment/group arithmetic

    def _idx(self, seq: int) -> int:
        return seq // self.mtu

    def _seg_range(self, idx: int) -> tuple[int, int]:
        start = idx * self.mtu
        return start, start + self.seg_lens[idx]

    def _group_of(self, idx: int) -> int:
        return idx // FEC_GROUP_SIZE

    def _group_segments(self, group: int) -> range:
        lo = group * FEC_GROUP_SIZE
        return range(lo, min(lo + FEC_GROUP_SIZE, self.n_segments))

    def _group_closed(self, group: int) -> bool:
        """True once a missing member of this group is provably lost.

        The link is FIFO and the parity rides right behind its group, so any
        of the following settles every first transmission of the group:
        the parity arrived; data of a later group arrived; or the group's
        last member arrived and anything else arrived after it (the parity
        would have come first).
        """
        if group in self.group_parity:
            return True
        if self.highest_idx_seen >= (group + 1) * FEC_GROUP_SIZE:
            return True
        if self.highest_idx_seen == self.n_segments - 1:
            return True
        seen_at = self.last_member_arrival.get(group)
        return seen_at is not None and self.arrivals > seen_at

    # wire events

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
        if pkt.kind is PacketKind.DATA:
            self._on_data(pkt)
        elif pkt.kind is PacketKind.FEC:
            self._on_fec(pkt)

    def _first_data(self, pkt: Packet) -> None:
        self.got_data = True
        if self.request_timer is not None:
            self.clock.cancel(self.request_timer)
        if self.request_attempts == 1:
            self.est.update(self.clock.now)  # request left at t=0
        self._arm_feedback()

    def _on_data(self, pkt: Packet) -> None:
        if not self.got_data:
            self._first_data(pkt)
        self.last_data_at = self.clock.now
        self._arm_feedback()  # revive the cadence if it went stale
        self.arrivals += 1
        idx = self._idx(pkt.seq)
        self.highest_idx_seen = max(self.highest_idx_seen, idx)
        self.last_echo = (pkt.seq, pkt.sent_at)
        self.received.add(pkt.seq, pkt.seq + pkt.payload_len)
        group = self._group_of(idx)
        self.group_members.setdefault(group, set()).add(idx)
        if idx == self._group_segments(group)[-1]:
            self.last_member_arrival.setdefault(group, self.arrivals)
        self._try_recover(group)
        self._check_done()
        if self.done:
            # Reiterate the final state so a sender that missed it can stop.
            self._send_feedback()

    def _on_fec(self, pkt: Packet) -> None:
        if not self.got_data:
            self._first_data(pkt)
        self.last_data_at = self.clock.now
        self._arm_feedback()
        self.arrivals += 1
        group = self._group_of(self._idx(pkt.seq))
        self.group_parity.add(group)
        cover = tuple(self._idx(seq) for seq in pkt.fec_members)
        self.parity_covers.setdefault(group, []).append(cover)
        if cover:
            self.highest_idx_seen = max(self.highest_idx_seen, cover[-1])
        self._try_recover(group)
        self._check_done()
        if self.done:
            self._send_feedback()

    def _try_recover(self, group: int) -> None:
        """Repair missing segments using every parity coverage of the group.

        Runs to a fixpoint: a partial (flushed) parity plus the full one can
        between them pin down two missing members, one each.
        """
        covers = self.parity_covers.get(group)
        if not covers:
            return
        have = self.group_members.get(group, set())
        progress = True
        while progress:
            progress = False
            for cover in covers:
                missing = [i for i in cover
                           if i not in have and i not in self.recovered]
                if len(missing) == 1:
                    idx = missing[0]
                    self.recovered.add(idx)
                    self.received.add(*self._seg_range(idx))
                    _note(self.trace, self.clock, "fec_recover", idx)
                    progress = True

    def _check_done(self) -> None:
        if not self.done and self.received.complete(self.file_size):
            self.done = True
            self.result.completion = self.clock.now
            _note(self.trace, self.clock, "complete")

    # feedback

    def _feedback_interval(self) -> SimTime:
        srtt = self.est.srtt if self.est.has_sample else DEFAULT_SRTT
        return max(srtt // 4, MIN_FEEDBACK_GAP)

    def _arm_feedback(self) -> None:
        if self.feedback_timer is None and not self.done:
            self.feedback_timer = self.clock.schedule_after(self._feedback_interval(),
                                                            self._on_feedback_timer)

    def _on_feedback_timer(self) -> None:
        self.feedback_timer = None
        if self.done:
            return
        if self.clock.now - self.last_data_at > RECEIVER_GIVE_UP:
            return  # sender is gone; stop so the run can drain
        self._send_feedback()
        self._arm_feedback()

    def _missing_ranges(self) -> tuple[tuple[int, int], ...]:
        """Byte ranges of missing segments in closed groups (NACK-eligible).

        Walks the hole list, not every segment; holes stay few because every
        add is a whole segment range.
        """
        if self.highest_idx_seen < 0:
            return ()
        limit = self.highest_idx_seen * self.mtu  # strictly below the newest segment
        gaps: list[tuple[int, int]] = []
        for gap_start, gap_end in self.received.missing_below(limit):
            idx = gap_start // self.mtu
            while idx * self.mtu < gap_end:
                start, end = self._seg_range(idx)
                if self._group_closed(self._group_of(idx)):
                    if gaps and gaps[-1][1] == start:
                        gaps[-1] = (gaps[-1][0], end)
                    else:
                        gaps.append((start, end))
                idx += 1
        return tuple(gaps)

    def _send_feedback(self) -> None:
        missing = self._missing_ranges()
        kind = PacketKind.NACK if missing else PacketKind.ACK
        pkt = self.chan.make_packet(
            Direction.UP, kind, header_len=UDP_HEADER,
            ack_info=AckInfo(
                cumulative=self.received.contiguous_prefix(),
                ranges=missing,
                echo_seq=self.last_echo[0],
                echo_sent_at=self.last_echo[1],
            ),
        )
        self.chan.send(pkt)
        _note(self.trace, self.clock, "feedback", pkt.ack_info.cumulative, missing)


class SmudpServer:
    """Paces data and parity onto the link; retransmits only NACKed ranges."""

    def __init__(self, clock: EventQueue, chan: Channel, file_size: int,
                 mtu: int, cwnd_cap: int, recv_window: int,
                 result: TransferResult, fec: bool = True,
                 trace: Trace = None) -> None:
        self.clock = clock
        self.chan = chan
        self.file_size = file_size
        self.mtu = mtu
        self.result = result
        self.fec = fec
        self.trace = trace
        self.est = RttEstimator(initial_rto=INITIAL_SENDER_RTO)
        self.cc = CongestionController(mtu, cwnd_cap)
        self.fw = FlowWindow(recv_window=recv_window)
        self.seg_lens = segment_sizes(file_size, mtu)
        self.n_segments = len(self.seg_lens)
        self.started = False
        self.aborted = False
        self.done = False
        self.next_idx = 0
        # segment idx -> [last_sent_at, retransmitted]
        self.seg_meta: dict[int, list] = {}
        self.acked_prefix = 0
        self.acked_idx = 0            # segments [0, acked_idx) covered by the prefix
        self.lost: set[int] = set()   # NACKed, not yet resent
        self._in_flight = 0           # outstanding first-class bytes
        self.retx: deque[int] = deque()
        self.retx_pending: set[int] = set()
        self.pending_fec: deque[int] = deque()  # group ids awaiting parity send
        self.flushed_upto = 0  # partial-parity high-water (segment index)
        self.parity_sent_at: dict[int, SimTime] = {}  # group -> last parity send
        self.burst_left = PACING_BURST
        self.next_send_at: SimTime = 0
        self.last_send_at: SimTime = 0
        self.pacer_timer: Optional[int] = None
        self.silent_timer: Optional[int] = None
        self.got_feedback = False
        self.consecutive_timeouts = 0
        self.last_cc_loss: SimTime = -(10 * SECOND)
        self.last_chase: SimTime = -(10 * SECOND)
        self.data_sends = 0
        self.last_loss_evidence = 0  # data_sends count at the last loss signal

    def _srtt_estimate(self) -> SimTime:
        return self.est.srtt if self.est.has_sample else DEFAULT_SRTT

    @property
    def in_flight(self) -> int:
        """Bytes sent, not NACK-declared lost, not yet covered by the prefix.

        NACKed segments leave the count so recovery does not stall new data;
        they re-enter when retransmitted.  Exactly 0 at completion.
        """
        return self._in_flight

    def _seg_range(self, idx: int) -> tuple[int, int]:
        start = idx * self.mtu
        return start, start + self.seg_lens[idx]

    def on_packet(self, pkt: Packet) -> None:
        if pkt.kind is PacketKind.REQUEST:
            if not self.started:
                self.started = True
                self._rearm_silent_timer()
                self._kick_pacer()
        elif pkt.kind in (PacketKind.ACK, PacketKind.NACK):
            self._on_feedback(pkt.ack_info)

    # -- pacing --------------------------------------------------------------

    def _next_unit(self) -> Optional[tuple[str, int]]:
        """What to send next: pending parity, then NACK retransmissions, then
        new data.  Parity goes first so it always directly trails its group
        on the wire, which is what lets the receiver prove a parity loss.

        Unlike the window-limited transports, congestion control acts here
        through the pace rate (cwnd/srtt); new data is bounded only by the
        receiver's flow-control window.
        """
        if self.pending_fec:
            return "fec", self.pending_fec[0]
        while self.retx and self.retx[0] < self.acked_idx:
            stale = self.retx.popleft()  # prefix overtook it (recovered elsewhere)
            self.retx_pending.discard(stale)
        if self.retx:
            return "retx", self.retx[0]
        if self.next_idx < self.n_segments:
            length = self.seg_lens[self.next_idx]
            # The pace shapes timing; outstanding data is bounded by the
            # congestion window plus a small allowance for feedback that is
            # already in flight (reports arrive a quarter round trip apart).
            limit = min(9 * self.cc.cwnd // 8, self.fw.recv_window)
            if self.in_flight + length <= limit:
                return "data", self.next_idx
        # Blocked with a half-finished group: flush a parity over the members
        # sent so far, otherwise a loss inside it could stall the window
        # while the repair waits for a parity the window will never release.
        # Routine blocks clear on the next feedback; only a lingering one
        # (half a round trip) is worth parity bytes.
        if (self._parity_duty() and self.next_idx % FEC_GROUP_SIZE != 0
                and self.next_idx > self.flushed_upto
                and self.next_idx > self.acked_idx
                and self.clock.now - self.last_send_at >= self._srtt_estimate() // 2):
            return "flush", self.next_idx
        return None

    def _kick_pacer(self) -> None:
        if self.pacer_timer is not None or self.done or self.aborted:
            return
        if self._next_unit() is None:
            return
        at = max(self.clock.now, self.next_send_at)
        self.pacer_timer = self.clock.schedule(at, self._pacer_fire)

    def _pacer_fire(self) -> None:
        self.pacer_timer = None
        if self.done or self.aborted:
            return
        unit = self._next_unit()
        if unit is None:
            return
        what, idx = unit
        if what == "retx":
            self.retx.popleft()
            self.retx_pending.discard(idx)
            if idx in self.lost:
                self.lost.discard(idx)
                self._in_flight += self.seg_lens[idx]
            wire = self._send_segment(idx, retransmit=True)
        elif what == "fec":
            # Parity rides attached to its group; only data consumes pace.
            self.pending_fec.popleft()
            self._send_parity(idx)
            self.flushed_upto = max(self.flushed_upto,
                                    min((idx + 1) * FEC_GROUP_SIZE, self.n_segments))
            self._kick_pacer()
            return
        elif what == "flush":
            group = (idx - 1) // FEC_GROUP_SIZE
            first = group * FEC_GROUP_SIZE
            self._send_parity_cover(group, range(first, idx))
            self.flushed_upto = idx
            self._kick_pacer()
            return
        else:
            self.next_idx += 1
            wire = self._send_segment(idx, retransmit=False)
            self._in_flight += self.seg_lens[idx]
            if self._parity_duty() and (idx % FEC_GROUP_SIZE == FEC_GROUP_SIZE - 1
                                        or idx == self.n_segments - 1):
                self.pending_fec.append(idx // FEC_GROUP_SIZE)
        if self.burst_left > 0:
            self.burst_left -= 1
            gap = 0
        else:
            gap = pacing_gap(self.cc.cwnd, self._srtt_estimate(), wire)
        self.next_send_at = self.clock.now + gap
        self._kick_pacer()

    def _parity_duty(self) -> bool:
        """Whether parity currently earns its bandwidth.

        Always during slow start: a loss there would halve a still-growing
        window, which parity repair avoids entirely.  In steady state only
        while isolated losses were seen recently; on a clean saturated link
        NACK repair is as good and the parity bytes are pure overhead.
        """
        if not self.fec:
            return False
        if self.cc.in_slow_start:
            return True
        return self.data_sends - self.last_loss_evidence <= FEC_CLEAN_WINDOW

    def _note_loss_evidence(self) -> None:
        self.last_loss_evidence = self.data_sends

    def _send_segment(self, idx: int, retransmit: bool) -> int:
        start, end = self._seg_range(idx)
        meta = self.seg_meta.get(idx)
        if meta is None:
            self.seg_meta[idx] = [self.clock.now, retransmit]
        else:
            meta[0] = self.clock.now
            meta[1] = meta[1] or retransmit
        self.data_sends += 1
        self.last_send_at = self.clock.now
        if retransmit:
            self.result.retransmits += 1
        pkt = self.chan.make_packet(
            Direction.DOWN, PacketKind.DATA, seq=start,
            payload_len=end - start, header_len=UDP_HEADER,
        )
        self.chan.send(pkt)
        _note(self.trace, self.clock, "send", "data", idx, retransmit)
        return pkt.wire_size

    def _send_parity(self, group: int) -> int:
        first = group * FEC_GROUP_SIZE
        members = range(first, min(first + FEC_GROUP_SIZE, self.n_segments))
        return self._send_parity_cover(group, members)

    def _send_parity_cover(self, group: int, members) -> int:
        pkt = self.chan.make_packet(
            Direction.DOWN, PacketKind.FEC, seq=members[0] * self.mtu,
            payload_len=self.mtu, header_len=UDP_HEADER,
            fec_members=tuple(i * self.mtu for i in members),
        )
        self.chan.send(pkt)
        self.last_send_at = self.clock.now
        self.parity_sent_at[group] = self.clock.now
        _note(self.trace, self.clock, "send", "fec", group)
        return pkt.wire_size

    # -- feedback ------------------------------------------------------------

    def _on_feedback(self, info: AckInfo) -> None:
        if self.aborted or not self.started or self.done:
            return
        self.got_feedback = True
        self.consecutive_timeouts = 0
        if info.echo_sent_at >= 0:
            # The echoed send timestamp identifies the exact transmission, so
            # the sample is unambiguous even for retransmitted segments; srtt
            # must track queue delay or loss repair falls out of step with
            # the real feedback loop.
            self.est.update(self.clock.now - info.echo_sent_at)
        newly_covered = info.cumulative > self.acked_prefix
        if newly_covered:
            newly = info.cumulative - self.acked_prefix
            self.acked_prefix = info.cumulative
            end_idx = (self.n_segments if info.cumulative >= self.file_size
                       else info.cumulative // self.mtu)
            while self.acked_idx < end_idx:
                if self.acked_idx in self.lost:
                    self.lost.discard(self.acked_idx)
                else:
                    self._in_flight -= self.seg_lens[self.acked_idx]
                self.acked_idx += 1
            self.est.on_ack()
            self.cc.on_ack(newly)
        nacked = False
        nack_count = 0
        new_epoch_loss = False
        srtt = self._srtt_estimate()
        for start, end in info.ranges:
            idx = start // self.mtu
            while idx * self.mtu < end and idx < self.n_segments:
                meta = self.seg_meta.get(idx)
                recently_sent = meta is not None and self.clock.now - meta[0] < srtt
                if (idx >= self.acked_idx
                        and idx not in self.retx_pending and not recently_sent):
                    self.retx.append(idx)
                    self.retx_pending.add(idx)
                    if idx not in self.lost:
                        self.lost.add(idx)
                        self._in_flight -= self.seg_lens[idx]
                    if meta is not None and meta[0] > self.last_cc_loss:
                        new_epoch_loss = True
                    nacked = True
                    nack_count += 1
                idx += 1
        if nacked and nack_count <= FEC_ISOLATED_LIMIT:
            self._note_loss_evidence()
        if new_epoch_loss:
            # One reduction per congestion event: straggler reports about
            # packets sent before the previous reaction do not halve again.
            self.cc.on_loss(LossKind.FAST_RECOVERY)
            self.last_cc_loss = self.clock.now
            _note(self.trace, self.clock, "cc_loss", "fast_recovery")
        if self.acked_prefix >= self.file_size:
            self.done = True
            self._cancel_timers()
            return
        if newly_covered or nacked:
            # Only feedback that moves the transfer forward defers the silent
            # timeout; a stream of identical reports is a stall.
            self._rearm_silent_timer()
        self._chase_overdue(srtt)
        self._kick_pacer()

    def _chase_overdue(self, srtt: SimTime) -> None:
        """Queue resends for every overdue unacknowledged segment.

        The receiver cannot name losses at the very tail (nothing arrives
        after them to prove the gap).  Once the segment blocking the prefix
        is older than 1.5x srtt, each segment of that vintage is equally
        suspect, so the whole overdue span is resent in one paced round
        instead of discovering holes one prefix jump at a time.  Parity
        repairs anything the receiver already recovered; duplicates are
        discarded, so the cost is bounded by one window.
        """
        if self.retx or self.pending_fec or self.acked_idx >= self.next_idx:
            return
        if self.clock.now - self.last_chase < srtt:
            return  # one chase round per round trip; resends must get a
                    # chance to be acknowledged before suspecting them again
        overdue = srtt + srtt // 2

        def undecided(idx: int) -> bool:
            # A recent parity may still repair this segment; wait for its
            # verdict before spending a retransmission on it.
            sent = self.parity_sent_at.get(idx // FEC_GROUP_SIZE)
            return sent is not None and self.clock.now - sent < overdue

        front = self.seg_meta.get(self.acked_idx)
        if front is None or self.clock.now - front[0] < overdue:
            return
        if undecided(self.acked_idx):
            return
        if (self._parity_duty() and self.next_idx % FEC_GROUP_SIZE != 0
                and self.next_idx > self.flushed_upto
                and self.acked_idx // FEC_GROUP_SIZE
                == (self.next_idx - 1) // FEC_GROUP_SIZE):
            return  # a parity flush for this very group is due; repair first
        queued = False
        for idx in range(self.acked_idx, self.next_idx):
            if idx in self.retx_pending or undecided(idx):
                continue
            meta = self.seg_meta.get(idx)
            if meta is None or self.clock.now - meta[0] < overdue:
                continue
            self.retx.append(idx)
            self.retx_pending.add(idx)
            queued = True
        if queued:
            self.last_chase = self.clock.now
            self._rearm_silent_timer()

    # -- silent-link timeout ---------------------------------------------------

    def _rearm_silent_timer(self) -> None:
        if self.silent_timer is not None:
            self.clock.cancel(self.silent_timer)
        delay = self.est.effective_rto()
        if not self.got_feedback:
            # The first feedback needs a full round trip plus the receiver's
            # aggregation delay on a path of unknown length; be patient.
            delay *= 2
        self.silent_timer = self.clock.schedule_after(delay, self._on_silent_rto)

    def _on_silent_rto(self) -> None:
        self.silent_timer = None
        if self.done or self.aborted or not self.started:
            return
        if self.next_idx == 0:
            # Nothing sent yet (request just arrived); wait for the pacer.
            self._rearm_silent_timer()
            return
        self.result.timeouts += 1
        self.consecutive_timeouts += 1
        _note(self.trace, self.clock, "rto")
        if self.consecutive_timeouts > MAX_CONSECUTIVE_TIMEOUTS:
            self.aborted = True
            self.result.failed = True
            self.result.reason = "feedback timeouts exhausted"
            self._cancel_timers()
            return
        self.cc.on_loss(LossKind.TIMEOUT)
        self.est.on_timeout()
        # Everything outstanding is suspect after a silent timeout; resend
        # the span paced rather than probing one segment per backoff.
        for idx in range(self.acked_idx, self.next_idx):
            if idx not in self.retx_pending:
                self.retx.append(idx)
                self.retx_pending.add(idx)
                if idx not in self.lost:
                    self.lost.add(idx)
                    self._in_flight -= self.seg_lens[idx]
        self._kick_pacer()
        self._rearm_silent_timer()

    def _cancel_timers(self) -> None:
        if self.silent_timer is not None:
            self.clock.cancel(self.silent_timer)
            self.silent_timer = None
        if self.pacer_timer is not None:
            self.clock.cancel(self.pacer_timer)
            self.pacer_timer = None


def smudp_transfer(profile: ImpairmentProfile, file_size: int, *,
                   cwnd_cap: int = DEFAULT_RECV_WINDOW,
                   recv_window: int = DEFAULT_RECV_WINDOW,
                   seed: int = 0, fec: bool = True, trace: Trace = None,
                   max_events: int = 100_000_000) -> TransferResult:
    """Simulate one smUDP download of ``file_size`` bytes over ``profile``."""
    if file_size <= 0:
        raise ValueError("file_size must be positive")
    clock = EventQueue()
    link = Link(profile, seed)
    chan = Channel(clock, link)
    result = TransferResult(completion=None)
    client = SmudpClient(clock, chan, file_size, profile.mtu, result, trace)
    server = SmudpServer(clock, chan, file_size, profile.mtu, cwnd_cap,
                         recv_window, result, fec=fec, trace=trace)
    chan.on_down = client.on_packet
    chan.on_up = server.on_packet
    client.start()
    clock.run_until_idle(max_events)
    if result.completion is None:
        result.failed = True
        if not result.reason:
            result.reason = "transfer did not complete"
    return result
