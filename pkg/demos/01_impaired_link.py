"""A first look at the impaired link: delay, shaping, loss.

The link model is the foundation everything else stands on: packets take
serialization time (wire bits / rate) plus half the round trip to arrive,
share a bounded FIFO queue, and die to an independent Bernoulli coin per
direction.
"""

from netlab import Direction, ImpairmentProfile, Link, Packet, PacketKind, MS

# A 1 Mbit/s link with a 100 ms round trip and no loss.
profile = ImpairmentProfile(rtt=100 * MS, loss_pct=0.0, bandwidth_down=1e6)
link = Link(profile, seed=1)

pkt = Packet(id=0, direction=Direction.DOWN, kind=PacketKind.DATA,
             payload_len=1210, header_len=40)
out = link.transmit(pkt, now=0)
print(f"1250-byte packet, 1 Mbit/s, rtt 100 ms -> arrives at {out.arrives_at / 1000:.1f} ms")
print("   (10 ms serialization + 50 ms one-way propagation)")

# Two packets offered back to back share the shaper: the second waits.
link = Link(profile, seed=1)
first = link.transmit(Packet(id=0, direction=Direction.DOWN, kind=PacketKind.DATA,
                             payload_len=1210, header_len=40), now=0)
second = link.transmit(Packet(id=1, direction=Direction.DOWN, kind=PacketKind.DATA,
                              payload_len=1210, header_len=40), now=0)
print(f"back-to-back pair -> {first.arrives_at / 1000:.0f} ms and {second.arrives_at / 1000:.0f} ms")

# Loss is a seeded coin: 100k packets at 2.5% stay within a whisker of 2.5%.
lossy = ImpairmentProfile(rtt=100 * MS, loss_pct=2.5, bandwidth_down=1e6,
                          queue_capacity=10**9)
link = Link(lossy, seed=2024)
for i in range(100_000):
    link.transmit(Packet(id=i, direction=Direction.DOWN, kind=PacketKind.DATA,
                         payload_len=1200, header_len=36), now=i * 100 * MS)
stats = link.loss_stats(Direction.DOWN)
print(f"100k packets at 2.5% loss -> {100 * stats['dropped_loss'] / stats['offered']:.3f}% dropped "
      f"({stats['dropped_loss']} of {stats['offered']})")

# A small queue turns a burst into QueueFull drops.
tiny = ImpairmentProfile(rtt=100 * MS, loss_pct=0.0, bandwidth_down=1e6,
                         queue_capacity=5000, mtu=1200)
link = Link(tiny, seed=3)
outcomes = [link.transmit(Packet(id=i, direction=Direction.DOWN, kind=PacketKind.DATA,
                                 payload_len=1200, header_len=36), now=0)
            for i in range(8)]
accepted = sum(1 for o in outcomes if hasattr(o, "arrives_at"))
print(f"8-packet burst into a 5 KB queue -> {accepted} accepted, {8 - accepted} dropped")
