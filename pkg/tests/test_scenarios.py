import pytest

from netlab.scenarios import (
    BUILTIN_SCENARIOS,
    KIB,
    MIB,
    ScenarioSpec,
    emit_scenario,
    parse_scenario,
)
from netlab.simclock import MS


def test_seven_builtins_exist():
    assert sorted(BUILTIN_SCENARIOS) == ["2g", "3g", "bandwidth", "loss",
                                         "lte", "rtt", "wifi"]


def test_cellular_profiles_match_published_parameters():
    wifi = BUILTIN_SCENARIOS["wifi"]
    assert (wifi.rtt, wifi.loss_pct, wifi.bandwidth_down) == (110 * MS, 0.5, 2.2e6)
    lte = BUILTIN_SCENARIOS["lte"]
    assert (lte.rtt, lte.loss_pct, lte.bandwidth_down) == (250 * MS, 0.7, 2.0e6)
    g3 = BUILTIN_SCENARIOS["3g"]
    assert (g3.rtt, g3.loss_pct, g3.bandwidth_down) == (550 * MS, 0.5, 1.0e6)
    g2 = BUILTIN_SCENARIOS["2g"]
    assert (g2.rtt, g2.loss_pct, g2.bandwidth_down) == (900 * MS, 2.5, 0.2e6)
    for name in ("wifi", "lte", "3g", "2g"):
        spec = BUILTIN_SCENARIOS[name]
        assert spec.sweep_param == "file_size"
        assert spec.sweep_values == (50 * KIB, 100 * KIB, 250 * KIB,
                                     500 * KIB, 1000 * KIB)
        assert spec.up_down_ratio == 0.7
        assert spec.cwnd_cap == 1 * MIB
        assert spec.repetitions == 5


def test_sweep_scenarios_match_published_parameters():
    rtt = BUILTIN_SCENARIOS["rtt"]
    assert rtt.sweep_values == tuple(v * MS for v in (10, 50, 100, 250, 500, 750, 1000))
    assert rtt.file_size == 250 * KIB
    loss = BUILTIN_SCENARIOS["loss"]
    assert loss.sweep_values == (0.5, 1.0, 1.5, 2.0, 2.5)
    assert loss.rtt == 100 * MS
    bw = BUILTIN_SCENARIOS["bandwidth"]
    assert bw.sweep_values == (0.2e6, 0.6e6, 1.0e6, 1.4e6, 1.8e6, 2.2e6)
    assert bw.file_size == 4096 * KIB


def test_cell_applies_sweep_value():
    spec = BUILTIN_SCENARIOS["rtt"]
    profile, size = spec.cell(500 * MS)
    assert profile.rtt == 500 * MS
    assert size == 250 * KIB
    bw_profile, bw_size = BUILTIN_SCENARIOS["bandwidth"].cell(0.6e6)
    assert bw_profile.bandwidth_down == 0.6e6
    assert bw_size == 4096 * KIB


def test_builtin_round_trip_through_file_format():
    for name, spec in BUILTIN_SCENARIOS.items():
        assert parse_scenario(emit_scenario(spec)) == spec, name


def test_custom_scenario_parsing():
    text = """
    # a lossy satellite-ish link
    name = sat
    rtt = 600ms
    loss = 1.5%
    bandwidth = 0.5Mbit
    up_down_ratio = 0.5
    queue = 32KiB
    file_size = 100KiB
    sweep = loss_pct
    values = 0.5%,1%,2%
    reps = 3
    seed = 7
    """
    spec = parse_scenario(text)
    assert spec.name == "sat"
    assert spec.rtt == 600 * MS
    assert spec.loss_pct == 1.5
    assert spec.bandwidth_down == 0.5e6
    assert spec.queue_capacity == 32 * KIB
    assert spec.sweep_values == (0.5, 1.0, 2.0)
    assert spec.repetitions == 3
    assert spec.seed_base == 7
    assert parse_scenario(emit_scenario(spec)) == spec


@pytest.mark.parametrize("bad", [
    "rtt = 100ms\nsweep = rtt\nvalues = 10ms",       # missing name
    "name = x\nsweep = speed\nvalues = 1",            # unknown sweep param
    "name = x\nrtt = 100ms",                          # missing sweep
    "name = x\nwarp = 9\nsweep = rtt\nvalues = 1ms",  # unknown key
    "name = x\nthis is not a key value line",         # bad syntax
])
def test_bad_scenario_files_are_rejected(bad):
    with pytest.raises(ValueError):
        parse_scenario(bad)


def test_scenario_validation():
    with pytest.raises(ValueError):
        ScenarioSpec(name="x", rtt=100, loss_pct=0.5, bandwidth_down=1e6,
                     sweep_param="nope", sweep_values=(1,))
    with pytest.raises(ValueError):
        ScenarioSpec(name="x", rtt=100, loss_pct=0.5, bandwidth_down=1e6,
                     sweep_param="rtt", sweep_values=())
    with pytest.raises(ValueError):
        ScenarioSpec(name="x", rtt=100, loss_pct=0.5, bandwidth_down=1e6,
                     sweep_param="rtt", sweep_values=(100,), repetitions=0)
