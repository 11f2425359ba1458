import pytest

from netlab.linknet import (
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
from netlab.simclock import MS, EventQueue


def make_packet(wire=1250, direction=Direction.DOWN, pkt_id=0):
    return Packet(
        id=pkt_id,
        direction=direction,
        kind=PacketKind.DATA,
        seq=0,
        payload_len=wire - 40,
        header_len=40,
    )


def lossless_profile(**overrides):
    params = dict(rtt=100 * MS, loss_pct=0.0, bandwidth_down=1_000_000.0)
    params.update(overrides)
    return ImpairmentProfile(**params)


def test_transmit_hand_computed_arrival():
    # 1250 bytes at 1.0 Mbit/s -> 10 ms serialization; + rtt/2 = 50 ms.
    link = Link(lossless_profile(), seed=1)
    out = link.transmit(make_packet(), now=0)
    assert out == Delivery(arrives_at=60 * MS)


def test_zero_loss_everything_delivered():
    link = Link(lossless_profile(queue_capacity=10**9), seed=3)
    for i in range(1000):
        out = link.transmit(make_packet(pkt_id=i), now=i * 20 * MS)
        assert isinstance(out, Delivery)
    stats = link.loss_stats()
    assert stats == {"offered": 1000, "delivered": 1000,
                     "dropped_loss": 0, "dropped_queue": 0}


def test_back_to_back_packets_respect_the_shaper():
    link = Link(lossless_profile(), seed=1)
    first = link.transmit(make_packet(pkt_id=0), now=0)
    second = link.transmit(make_packet(pkt_id=1), now=0)
    assert first.arrives_at == 60 * MS
    assert second.arrives_at == 70 * MS


def test_one_way_delay_is_exact_when_queue_empty():
    profile = lossless_profile(rtt=37 * MS, bandwidth_down=2_200_000.0)
    link = Link(profile, seed=5)
    pkt = make_packet(wire=777)
    out = link.transmit(pkt, now=1234)
    expected = 1234 + serialization_us(777, 2_200_000.0) + profile.rtt // 2
    assert out.arrives_at == expected


def test_uplink_rate_is_ratio_of_downlink():
    profile = lossless_profile(bandwidth_down=1_000_000.0, up_down_ratio=0.5)
    link = Link(profile, seed=5)
    down = link.transmit(make_packet(direction=Direction.DOWN), now=0)
    up = link.transmit(make_packet(direction=Direction.UP), now=0)
    # Same wire size, half the rate: serialization doubles (10 ms -> 20 ms).
    assert down.arrives_at == 60 * MS
    assert up.arrives_at == 70 * MS


def test_fresh_link_stats_are_zero():
    link = Link(lossless_profile(), seed=1)
    assert link.loss_stats() == {"offered": 0, "delivered": 0,
                                 "dropped_loss": 0, "dropped_queue": 0}


def test_loss_rate_calibration_100k_packets():
    # Monte-Carlo with a fixed seed: empirical rate within 0.2 absolute
    # percentage points of 2.5% (binomial sigma ~ 0.05 pp).
    profile = lossless_profile(loss_pct=2.5, queue_capacity=10**9)
    link = Link(profile, seed=42)
    n = 100_000
    for i in range(n):
        link.transmit(make_packet(pkt_id=i), now=i * 11 * MS)
    stats = link.loss_stats(Direction.DOWN)
    empirical_pct = 100.0 * stats["dropped_loss"] / stats["offered"]
    assert abs(empirical_pct - 2.5) < 0.2


def test_conservation_of_offered_packets():
    profile = lossless_profile(loss_pct=30.0, queue_capacity=2000)
    link = Link(profile, seed=9)
    for i in range(5000):
        link.transmit(make_packet(pkt_id=i), now=i * 7)
    stats = link.loss_stats()
    assert stats["offered"] == 5000
    assert stats["offered"] == (stats["delivered"] + stats["dropped_loss"]
                                + stats["dropped_queue"])
    assert stats["dropped_queue"] > 0  # the burst overruns a 2 KB queue


def test_queue_full_drops_iff_bound_would_be_violated():
    # Queue of 3000 bytes and 1250-byte packets: exactly two fit on top of
    # nothing; the third offered at t=0 must be a QueueFull drop.
    profile = lossless_profile(queue_capacity=3000)
    link = Link(profile, seed=1)
    assert isinstance(link.transmit(make_packet(pkt_id=0), now=0), Delivery)
    assert isinstance(link.transmit(make_packet(pkt_id=1), now=0), Delivery)
    out = link.transmit(make_packet(pkt_id=2), now=0)
    assert out == Dropped(DropReason.QUEUE_FULL)
    assert link.queued_bytes(Direction.DOWN, now=0) == 2500
    # After the first packet finishes serializing (10 ms) there is room again.
    out = link.transmit(make_packet(pkt_id=3), now=10 * MS)
    assert isinstance(out, Delivery)


def test_queue_never_exceeds_capacity():
    profile = lossless_profile(queue_capacity=5000)
    link = Link(profile, seed=2)
    for i in range(200):
        now = (i // 10) * MS
        link.transmit(make_packet(pkt_id=i), now=now)
        assert link.queued_bytes(Direction.DOWN, now) <= 5000


def test_loss_draw_consumed_even_on_queue_full():
    # Two links, same seed: one with an always-full queue, one with ample
    # space. The loss decisions must line up packet-for-packet.
    ample = Link(lossless_profile(loss_pct=50.0, queue_capacity=10**9), seed=77)
    tiny = Link(lossless_profile(loss_pct=50.0, queue_capacity=1250), seed=77)
    ample_outcomes = []
    tiny_outcomes = []
    for i in range(100):
        ample_outcomes.append(ample.transmit(make_packet(pkt_id=i), now=0))
        tiny_outcomes.append(tiny.transmit(make_packet(pkt_id=i), now=0))
    for a, t in zip(ample_outcomes, tiny_outcomes):
        if isinstance(a, Dropped):
            assert t == Dropped(DropReason.LOSS)
        else:
            assert isinstance(t, (Delivery, Dropped))
    losses = sum(isinstance(a, Dropped) for a in ample_outcomes)
    tiny_losses = sum(t == Dropped(DropReason.LOSS) for t in tiny_outcomes)
    assert losses == tiny_losses


def test_fifo_delivery_per_direction():
    profile = lossless_profile(loss_pct=10.0, queue_capacity=10**9)
    link = Link(profile, seed=11)
    arrivals = []
    for i in range(2000):
        out = link.transmit(make_packet(pkt_id=i), now=i * 137)
        if isinstance(out, Delivery):
            arrivals.append(out.arrives_at)
    assert arrivals == sorted(arrivals)


def test_shaped_throughput_never_exceeds_rate():
    rate = 2_200_000.0
    profile = lossless_profile(bandwidth_down=rate, queue_capacity=10**9)
    link = Link(profile, seed=4)
    wire = 1236
    n = 2000
    last_arrival = 0
    for i in range(n):
        out = link.transmit(make_packet(wire=wire, pkt_id=i), now=0)
        last_arrival = out.arrives_at
    span_s = (last_arrival - profile.rtt // 2) / 1e6
    throughput = n * wire * 8 / span_s
    assert throughput <= rate * 1.001


def test_determinism_identical_seeds_identical_outcomes():
    def run(seed):
        link = Link(lossless_profile(loss_pct=5.0, queue_capacity=4000), seed=seed)
        return [link.transmit(make_packet(pkt_id=i), now=i * 500) for i in range(500)]

    assert run(123) == run(123)
    assert run(123) != run(124)


def test_profile_validation():
    with pytest.raises(ValueError):
        ImpairmentProfile(rtt=-1, loss_pct=0, bandwidth_down=1e6)
    with pytest.raises(ValueError):
        ImpairmentProfile(rtt=0, loss_pct=101, bandwidth_down=1e6)
    with pytest.raises(ValueError):
        ImpairmentProfile(rtt=0, loss_pct=0, bandwidth_down=0)
    with pytest.raises(ValueError):
        ImpairmentProfile(rtt=0, loss_pct=0, bandwidth_down=1e6, up_down_ratio=1.5)
    with pytest.raises(ValueError):
        ImpairmentProfile(rtt=0, loss_pct=0, bandwidth_down=1e6,
                          queue_capacity=100, mtu=1200)


def test_channel_delivers_to_direction_handler():
    clock = EventQueue()
    link = Link(lossless_profile(), seed=1)
    chan = Channel(clock, link)
    got_down, got_up = [], []
    chan.on_down = lambda p: got_down.append((clock.now, p.id))
    chan.on_up = lambda p: got_up.append((clock.now, p.id))

    down = chan.make_packet(Direction.DOWN, PacketKind.DATA, payload_len=1210, header_len=40)
    up = chan.make_packet(Direction.UP, PacketKind.ACK, header_len=40)
    chan.send(down)
    chan.send(up)
    clock.run_until_idle()
    assert got_down == [(60 * MS, down.id)]
    # 40 bytes up at 0.7 Mbit/s -> ceil(320 / 0.7) us = 458 us serialization.
    assert got_up == [(50 * MS + 458, up.id)]
    assert down.id != up.id
