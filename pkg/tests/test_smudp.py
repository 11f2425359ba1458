import pytest

from netlab.linknet import UDP_HEADER, ImpairmentProfile, serialization_us
from netlab.simclock import MS, RngStream
from netlab.smudp import (
    FEC_GROUP_SIZE,
    FecGroup,
    fec_decode,
    fec_encode,
    pacing_gap,
    smudp_transfer,
)


def profile(rtt_ms=100, loss=0.0, bw=1e6, **kw):
    return ImpairmentProfile(rtt=rtt_ms * MS, loss_pct=loss, bandwidth_down=bw, **kw)


def rand_payload(rng, length):
    return bytes(rng.next_u64() % 256 for _ in range(length))


# -- FEC codec ----------------------------------------------------------------


def test_group_of_one_parity_equals_padded_member():
    payload = b"\x07\xffhello"
    parity = fec_encode([payload], 16)
    assert parity == payload + bytes(16 - len(payload))


def test_decode_reconstructs_each_drop_position():
    rng = RngStream(99, "fec.test")
    block = 32
    payloads = [rand_payload(rng, block) for _ in range(9)]
    payloads.append(rand_payload(rng, 11))  # short tail member
    parity = fec_encode(payloads, block)
    for drop in range(10):
        present = [p for i, p in enumerate(payloads) if i != drop]
        rebuilt = fec_decode(parity, present)
        assert rebuilt[:len(payloads[drop])] == payloads[drop]


def test_fec_group_recover_api():
    rng = RngStream(5, "fec.group")
    payloads = [rand_payload(rng, 24) for _ in range(4)]
    seqs = [0, 24, 48, 72]
    group = FecGroup(0, seqs, payloads, block_size=24)

    # Nothing missing: nothing to do.
    assert group.recover(dict(zip(seqs, payloads))) is None

    # One missing member comes back byte-exact.
    received = {s: p for s, p in zip(seqs, payloads) if s != 48}
    seq, rebuilt = group.recover(received)
    assert seq == 48
    assert rebuilt[:24] == payloads[2]

    # Two and more missing are unrecoverable.
    received.pop(0)
    assert group.recover(received) is None


def test_encode_rejects_empty_and_oversized():
    with pytest.raises(ValueError):
        fec_encode([], 8)
    with pytest.raises(ValueError):
        fec_encode([b"123456789"], 8)


# -- pacing -------------------------------------------------------------------


def test_pacing_gap_formula():
    # 1250-byte packet at 1.25 x (125000 B / 100 ms) -> 0.8 ms.
    assert pacing_gap(125_000, 100 * MS, 1250) == 800


def test_pacing_gap_floors_at_clock_resolution():
    assert pacing_gap(10**9, 10, 100) == 1


def test_initial_burst_goes_back_to_back():
    trace = []
    smudp_transfer(profile(bw=2.2e6), 50 * 1024, seed=6, trace=trace)
    sends = [t for t in trace if t[1] == "send" and t[2] == "data"][:10]
    assert len({t[0] for t in sends}) == 1  # all at the same instant


def test_paced_send_rate_respects_the_window_rate():
    cap = 30_000
    trace = []
    smudp_transfer(profile(rtt_ms=200, bw=4e6), 200 * 1024, seed=6,
                   cwnd_cap=cap, trace=trace)
    sends = [t[0] for t in trace if t[1] == "send" and t[2] == "data"]
    base_rtt = 200 * MS  # srtt can only be larger; this bounds the rate
    limit = 1.25 * cap * 8 / (base_rtt / 1e6)
    window = 20
    for i in range(10, len(sends) - window):
        span = sends[i + window] - sends[i]
        if span == 0:
            continue
        rate = (window + 1) * 1236 * 8 / (span / 1e6)
        assert rate <= limit * (1 + 1.0 / window)


# -- transfers ----------------------------------------------------------------


def test_single_packet_lossless_matches_quic_bound():
    result = smudp_transfer(profile(), 1000, seed=3)
    expected = (100 * MS
                + serialization_us(UDP_HEADER, 0.7e6)
                + serialization_us(UDP_HEADER + 1000, 1e6))
    assert result.completion == expected


def test_identical_seed_identical_result():
    prof = profile(loss=2.0, bw=2e6)
    a = smudp_transfer(prof, 200 * 1024, seed=17)
    b = smudp_transfer(prof, 200 * 1024, seed=17)
    assert (a.completion, a.retransmits, a.timeouts) == \
           (b.completion, b.retransmits, b.timeouts)


def test_single_loss_in_group_recovered_without_retransmission():
    # Drop exactly one data packet of the first group; the parity that trails
    # the group must repair it locally.
    threshold = 0.05
    seed = None
    for cand in range(200_000):
        rng = RngStream(cand, "loss.down")
        draws = [rng.uniform() for _ in range(40)]
        drops = [d < threshold for d in draws]
        if drops[3] and sum(drops) == 1:
            up = RngStream(cand, "loss.up")
            if not any(up.uniform() < threshold for _ in range(60)):
                seed = cand
                break
    assert seed is not None
    trace = []
    result = smudp_transfer(profile(loss=5.0, bw=2e6), FEC_GROUP_SIZE * 1200,
                            seed=seed, trace=trace)
    assert not result.failed
    assert result.retransmits == 0
    assert [t for t in trace if t[1] == "fec_recover"]


def test_lossless_run_never_retransmits():
    result = smudp_transfer(profile(bw=2.2e6, rtt_ms=110), 250 * 1024, seed=8)
    assert result.retransmits == 0
    assert result.timeouts == 0


def test_fec_off_still_completes_under_loss():
    trace = []
    result = smudp_transfer(profile(loss=2.0, bw=2e6), 100 * 1024, seed=9,
                            fec=False, trace=trace)
    assert not result.failed
    assert not [t for t in trace if t[1] == "send" and t[2] == "fec"]


def test_zero_file_size_rejected():
    with pytest.raises(ValueError):
        smudp_transfer(profile(), 0, seed=1)


def test_total_loss_aborts():
    result = smudp_transfer(profile(loss=100.0), 1000, seed=1)
    assert result.failed
