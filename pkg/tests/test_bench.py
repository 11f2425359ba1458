from netlab.bench import BenchRecord, cell_seed, emit_csv, run_cell, run_scenario
from netlab.scenarios import BUILTIN_SCENARIOS, KIB, ScenarioSpec
from netlab.simclock import MS, stable_hash64


def small_spec(**overrides):
    params = dict(
        name="mini", rtt=50 * MS, loss_pct=1.0, bandwidth_down=4e6,
        sweep_param="file_size", sweep_values=(20 * KIB, 40 * KIB),
        repetitions=2, seed_base=5,
    )
    params.update(overrides)
    return ScenarioSpec(**params)


def fake_record(scenario="s", protocol="tcp", sweep_value=1, times=(1000, 2000)):
    return BenchRecord(
        scenario=scenario, protocol=protocol, sweep_param="file_size",
        sweep_value=sweep_value, file_size=1000,
        rep_times_us=list(times), retransmits=0, timeouts=0,
    )


def test_cell_seed_is_documented_hash():
    assert cell_seed(42, "wifi", "tcp", 256000, 3) == \
        stable_hash64("42|wifi|tcp|256000|3")
    assert cell_seed(42, "loss", "quic", 2.5, 0) == \
        stable_hash64("42|loss|quic|2.5|0")


def test_run_scenario_produces_one_record_per_cell():
    records = run_scenario(small_spec())
    assert len(records) == 2 * 3  # two sweep values x three protocols
    for rec in records:
        assert len(rec.rep_times_us) == 2
        assert rec.failures == 0
        assert rec.mean_ms == sum(rec.successful_ms) / 2


def test_single_repetition_mean_equals_the_rep():
    rec = run_cell(small_spec(repetitions=1), "quic", 20 * KIB)
    assert rec.mean_ms == rec.rep_times_us[0] / MS


def test_records_deterministic_in_seed_base():
    a = emit_csv(run_scenario(small_spec()))
    b = emit_csv(run_scenario(small_spec()))
    c = emit_csv(run_scenario(small_spec(seed_base=6)))
    assert a == b
    assert a != c


def test_emit_csv_header_only_for_empty_input():
    text = emit_csv([])
    assert text.splitlines() == [
        "scenario,protocol,sweep_param,sweep_value,file_size_bytes,mean_ms,failures"
    ]


def test_emit_csv_one_record_two_lines():
    text = emit_csv([fake_record()])
    lines = text.splitlines()
    assert len(lines) == 2
    assert lines[0] == ("scenario,protocol,sweep_param,sweep_value,"
                        "file_size_bytes,mean_ms,rep1_ms,rep2_ms,failures")
    assert lines[1] == "s,tcp,file_size,1,1000,1.500,1.000,2.000,0"


def test_emit_csv_sorted_and_failure_cells_empty():
    records = [
        fake_record(scenario="b", protocol="tcp", sweep_value=2),
        fake_record(scenario="a", protocol="smudp", sweep_value=2,
                    times=(1000, None)),
        fake_record(scenario="a", protocol="quic", sweep_value=1),
    ]
    lines = emit_csv(records).splitlines()
    assert [l.split(",")[0:2] for l in lines[1:]] == [
        ["a", "quic"], ["a", "smudp"], ["b", "tcp"]]
    smudp_row = lines[2].split(",")
    assert smudp_row[-1] == "1"      # one failure
    assert smudp_row[-2] == ""       # failed rep cell is empty
    assert smudp_row[5] == "1.000"   # mean over the surviving rep


def test_full_matrix_row_count_is_sweep_lengths_times_protocols():
    # 4 cellular sweeps of 5 sizes + 7 RTTs + 5 losses + 6 bandwidths = 38
    # cells; three protocols each.
    total = sum(len(spec.sweep_values) for spec in BUILTIN_SCENARIOS.values())
    assert total == 38
    synthetic = [fake_record(scenario=name, protocol=proto, sweep_value=i)
                 for name, spec in BUILTIN_SCENARIOS.items()
                 for i, _ in enumerate(spec.sweep_values)
                 for proto in ("tcp", "quic", "smudp")]
    lines = emit_csv(synthetic).splitlines()
    assert len(lines) == 1 + total * 3 == 1 + 114


def test_unknown_protocol_rejected():
    import pytest
    with pytest.raises(ValueError):
        run_scenario(small_spec(), ["tcp", "warp"])
