"""Race the three transports over the cellular profiles.

Each transfer is one deterministic discrete-event simulation; identical
seeds give identical results. smUDP's 0-RTT start, pacing and parity repair
keep it ahead; TCP pays for its handshake and timeout-driven recovery.
"""

from statistics import fmean

from netlab import ImpairmentProfile, MS, PROTOCOLS

PROFILES = {
    "wifi": ImpairmentProfile(rtt=110 * MS, loss_pct=0.5, bandwidth_down=2.2e6),
    "lte": ImpairmentProfile(rtt=250 * MS, loss_pct=0.7, bandwidth_down=2.0e6),
    "3g": ImpairmentProfile(rtt=550 * MS, loss_pct=0.5, bandwidth_down=1.0e6),
    "2g": ImpairmentProfile(rtt=900 * MS, loss_pct=2.5, bandwidth_down=0.2e6),
}

FILE_SIZE = 250 * 1024
REPS = 5

print(f"mean completion of a {FILE_SIZE // 1024} KiB download, {REPS} runs each\n")
print(f"{'profile':8s} {'smudp':>10s} {'quic':>10s} {'tcp':>10s}")
for name, profile in PROFILES.items():
    row = []
    for proto in ("smudp", "quic", "tcp"):
        transfer = PROTOCOLS[proto]
        times = []
        for rep in range(REPS):
            result = transfer(profile, FILE_SIZE, seed=1000 + rep)
            if not result.failed:
                times.append(result.completion_ms)
        row.append(fmean(times))
    print(f"{name:8s} {row[0]:9.0f}ms {row[1]:9.0f}ms {row[2]:9.0f}ms")

print("\nSingle-packet file on a clean 100 ms link (connection setup cost):")
clean = ImpairmentProfile(rtt=100 * MS, loss_pct=0.0, bandwidth_down=1e6)
for proto in ("smudp", "quic", "tcp"):
    result = PROTOCOLS[proto](clean, 1000, seed=1)
    rtts = result.completion / (100 * MS)
    print(f"  {proto:6s} {result.completion / 1000:7.1f} ms  (~{rtts:.1f} round trips)")
