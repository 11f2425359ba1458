"""Drive the benchmark harness from Python and read its CSV.

The same machinery backs the `netlab` command line:

    netlab run --scenario wifi --protocols smudp --seed 42 --reps 5 --out w.csv
    netlab matrix --all --out results/
    netlab check

Custom scenarios are plain key=value files; this script builds one, runs
it, and prints the resulting CSV.
"""

from netlab.bench import emit_csv, run_scenario
from netlab.scenarios import BUILTIN_SCENARIOS, parse_scenario

custom = parse_scenario("""
name = balcony-wifi
rtt = 80ms
loss = 1%
bandwidth = 1.5Mbit
file_size = 100KiB
sweep = loss_pct
values = 0.5%,1%,2%
reps = 3
seed = 11
""")

records = run_scenario(custom)
print(emit_csv(records))

# Built-ins carry the benchmark's published parameters verbatim.
wifi = BUILTIN_SCENARIOS["wifi"]
print(f"built-in 'wifi': rtt={wifi.rtt // 1000} ms, loss={wifi.loss_pct}%, "
      f"bandwidth={wifi.bandwidth_down / 1e6} Mbit/s, "
      f"sizes={[v // 1024 for v in wifi.sweep_values]} KiB")
