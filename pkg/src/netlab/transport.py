"""Shared transport machinery: RTO estimation, congestion control, flow window.

All three protocols reuse these primitives so their differences come from
recovery strategy and send discipline, not from tuning constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .simclock import MS, SECOND, SimTime

MIN_RTO = 200 * MS
MAX_RTO = 60 * SECOND
INITIAL_SENDER_RTO = 1 * SECOND  # pre-sample timeout for data senders
INITIAL_WINDOW_PACKETS = 10
DEFAULT_RECV_WINDOW = 1024 * 1024
MAX_CONSECUTIVE_TIMEOUTS = 8  # give up on a transfer after this many silent backoffs


class RttEstimator:
    """RFC-6298-style smoothed RTT and retransmission timeout, in integer us.

    Before the first sample the timeout is ``initial_rto`` (the ``min_rto``
    floor unless told otherwise; data senders pass 1 s so an unknown long
    path does not trigger spurious timeouts before the first sample).  The
    exponential backoff multiplier is tracked here (doubling per consecutive
    timeout, reset by any new ACK) but does not touch the base ``rto``, which
    after every update satisfies rto = clamp(srtt + 4*rttvar, min_rto, max_rto).
    """

    def __init__(self, min_rto: SimTime = MIN_RTO, max_rto: SimTime = MAX_RTO,
                 initial_rto: SimTime | None = None) -> None:
        self.srtt: SimTime = 0
        self.rttvar: SimTime = 0
        self.min_rto = min_rto
        self.max_rto = max_rto
        self.rto: SimTime = initial_rto if initial_rto is not None else min_rto
        self.has_sample = False
        self.backoff = 0

    def update(self, sample: SimTime) -> None:
        """Fold in one RTT sample (from an unambiguous, never-retransmitted packet)."""
        if sample <= 0:
            raise ValueError(f"RTT sample must be positive, got {sample}")
        if not self.has_sample:
            self.srtt = sample
            self.rttvar = sample // 2
            self.has_sample = True
        else:
            self.rttvar = (3 * self.rttvar + abs(self.srtt - sample)) // 4
            self.srtt = (7 * self.srtt + sample) // 8
        self.rto = min(max(self.srtt + 4 * self.rttvar, self.min_rto), self.max_rto)

    def effective_rto(self) -> SimTime:
        """Current timeout including exponential backoff, clamped to max_rto."""
        return min(self.rto << min(self.backoff, 16), self.max_rto)

    def on_timeout(self) -> None:
        self.backoff += 1

    def on_ack(self) -> None:
        self.backoff = 0


class LossKind(Enum):
    FAST_RECOVERY = "fast_recovery"
    TIMEOUT = "timeout"


class CongestionController:
    """Slow start / additive-increase window with a hard scenario cap.

    The cap realizes the benchmark environment parameter "congestion control
    window"; cwnd never exceeds it for any protocol.
    """

    def __init__(self, mtu: int, cwnd_cap: int) -> None:
        if cwnd_cap < mtu:
            raise ValueError("cwnd_cap must be >= mtu")
        self.mtu = mtu
        self.cwnd_cap = cwnd_cap
        self.cwnd = min(INITIAL_WINDOW_PACKETS * mtu, cwnd_cap)
        self.ssthresh = cwnd_cap

    @property
    def in_slow_start(self) -> bool:
        return self.cwnd < self.ssthresh

    def on_ack(self, newly_acked: int) -> None:
        if newly_acked <= 0:
            raise ValueError("newly_acked must be positive")
        if self.in_slow_start:
            self.cwnd += newly_acked
        else:
            self.cwnd += self.mtu * newly_acked // self.cwnd
        if self.cwnd > self.cwnd_cap:
            self.cwnd = self.cwnd_cap

    def on_loss(self, kind: LossKind) -> None:
        self.ssthresh = max(self.cwnd // 2, 2 * self.mtu)
        if kind is LossKind.FAST_RECOVERY:
            self.cwnd = self.ssthresh
        else:
            self.cwnd = min(INITIAL_WINDOW_PACKETS * self.mtu, self.cwnd_cap)


@dataclass
class FlowWindow:
    recv_window: int = DEFAULT_RECV_WINDOW
    bytes_in_flight: int = 0


def can_send(cc: CongestionController, fw: FlowWindow) -> int:
    """Bytes the sender may put in flight right now (never negative)."""
    return max(0, min(cc.cwnd, fw.recv_window) - fw.bytes_in_flight)


@dataclass
class TransferResult:
    """Outcome of one simulated download."""

    completion: Optional[SimTime]  # virtual time of full receipt, None if failed
    retransmits: int = 0
    timeouts: int = 0
    failed: bool = False
    reason: str = ""

    @property
    def completion_ms(self) -> float:
        if self.completion is None:
            raise ValueError("transfer failed; no completion time")
        return self.completion / MS


class RangeSet:
    """Set of half-open byte ranges with cheap contiguous-prefix queries."""

    def __init__(self) -> None:
        self._ranges: list[list[int]] = []  # sorted, disjoint [start, end)

    def add(self, start: int, end: int) -> int:
        """Insert [start, end); returns the number of newly covered bytes."""
        if end <= start:
            return 0
        ranges = self._ranges
        lo = 0
        hi = len(ranges)
        while lo < hi:
            mid = (lo + hi) // 2
            if ranges[mid][0] < start:
                lo = mid + 1
            else:
                hi = mid
        # Merge with left neighbour if touching.
        if lo > 0 and ranges[lo - 1][1] >= start:
            lo -= 1
        new_start, new_end = start, end
        added = end - start
        idx = lo
        while idx < len(ranges) and ranges[idx][0] <= end:
            r_start, r_end = ranges[idx]
            added -= max(0, min(end, r_end) - max(start, r_start))
            new_start = min(new_start, r_start)
            new_end = max(new_end, r_end)
            idx += 1
        ranges[lo:idx] = [[new_start, new_end]]
        return added

    def __contains__(self, offset: int) -> bool:
        for r_start, r_end in self._ranges:
            if r_start <= offset < r_end:
                return True
            if r_start > offset:
                break
        return False

    def ranges(self) -> tuple[tuple[int, int], ...]:
        """Covered ranges as immutable (start, end) pairs, sorted."""
        return tuple((start, end) for start, end in self._ranges)

    def contiguous_prefix(self) -> int:
        """Length of the covered prefix starting at byte 0."""
        if self._ranges and self._ranges[0][0] == 0:
            return self._ranges[0][1]
        return 0

    def covered(self) -> int:
        return sum(end - start for start, end in self._ranges)

    def complete(self, size: int) -> bool:
        return self.contiguous_prefix() >= size

    def missing_below(self, limit: int) -> list[tuple[int, int]]:
        """Uncovered ranges within [0, limit)."""
        gaps = []
        cursor = 0
        for r_start, r_end in self._ranges:
            if cursor >= limit:
                break
            if r_start > cursor:
                gaps.append((cursor, min(r_start, limit)))
            cursor = max(cursor, r_end)
        if cursor < limit:
            gaps.append((cursor, limit))
        return gaps


def segment_sizes(file_size: int, mtu: int) -> list[int]:
    """Split a file into mtu-sized segments, last one short."""
    if file_size <= 0:
        raise ValueError("file_size must be positive")
    full, rest = divmod(file_size, mtu)
    return [mtu] * full + ([rest] if rest else [])
