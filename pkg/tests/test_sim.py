"""Simulator: scenario validation, signal model, faults, determinism."""

import math
import struct

import pytest

from conftest import ORDER
from ebbkit.core import (
    DECISION_CHANNELS,
    EMG_CHANNELS,
    POSITION_CHANNELS,
    ChannelId,
    validate_record,
)
from ebbkit.sim import (
    FaultInjection,
    FaultKind,
    Phase,
    PhaseKind,
    Scenario,
    SimParams,
    builtin_mock_accident,
    elbow_angle,
    elbow_torque,
    generate,
    scenario_from_dict,
    scenario_to_dict,
    session_meta_for,
    simulate_session,
    with_overrides,
)
from ebbkit.store import to_csv_bytes
from ebbkit.wire import FrameKind, FrameOk, decode_stream, encode_frame
from oracles import elbow_torque_direct


def two_phase(session_len=60, fault=None):
    return Scenario(
        name="toy",
        session_len=session_len,
        phases=(
            Phase(PhaseKind.LIFTING, 0, session_len // 2, payload_kg=6.0),
            Phase(PhaseKind.IDLE, session_len // 2, session_len),
        ),
        faults=(fault,) if fault else (),
        seed=1,
    )


# -- Scenario validation -------------------------------------------------------


def test_phases_must_tile_exactly():
    with pytest.raises(ValueError, match="tile"):
        Scenario("x", 10, (Phase(PhaseKind.IDLE, 0, 4),
                           Phase(PhaseKind.IDLE, 5, 10))).check()
    with pytest.raises(ValueError, match="tile"):
        Scenario("x", 10, (Phase(PhaseKind.IDLE, 0, 6),
                           Phase(PhaseKind.IDLE, 5, 10))).check()
    with pytest.raises(ValueError, match="end at t=9"):
        Scenario("x", 10, (Phase(PhaseKind.IDLE, 0, 9),)).check()
    with pytest.raises(ValueError, match="empty phase"):
        Scenario("x", 10, (Phase(PhaseKind.IDLE, 0, 0),
                           Phase(PhaseKind.IDLE, 0, 10))).check()


def test_payload_limited_to_device_rating():
    with pytest.raises(ValueError, match="payload"):
        Scenario("x", 4, (Phase(PhaseKind.LIFTING, 0, 4, payload_kg=7.0),)
                 ).check()


def test_fault_must_fall_inside_session():
    s = two_phase(fault=FaultInjection(FaultKind.POWER_LOSS, 60))
    with pytest.raises(ValueError, match="outside"):
        s.check()


def test_builtin_variants_are_valid_and_distinct():
    names = set()
    for v in ("baseline", "emg-dropout", "logger-fault", "idle-power-loss"):
        s = builtin_mock_accident(v)
        s.check()
        assert s.session_len == 7200
        names.add(s.name)
    assert len(names) == 4
    with pytest.raises(ValueError, match="unknown variant"):
        builtin_mock_accident("nope")


# -- Signal model ---------------------------------------------------------------


def test_elbow_angle_sweeps_the_configured_arc():
    p = SimParams()
    lift = Phase(PhaseKind.LIFTING, 0, 100, payload_kg=6.0)
    angles = [elbow_angle(p, lift, t) for t in range(p.lift_period)]
    assert min(angles) == p.theta_min
    assert max(angles) == p.theta_max
    rest = Phase(PhaseKind.IDLE, 0, 100)
    assert elbow_angle(p, rest, 17) == p.theta_min


def test_torque_matches_direct_lever_formula():
    p = SimParams()
    for theta in (10.0, 26.125, 45.0, 90.0, 120.0):
        for payload in (0.0, 3.0, 6.0):
            got = elbow_torque(p, payload, theta)
            want = elbow_torque_direct(theta, payload)
            assert abs(got - want) <= 1 / 128  # quantization half-step
    # worked example: full payload at the top of the arc, about 19.87
    assert abs(elbow_torque(p, 6.0, 90.0) - 19.86525) <= 1 / 128


def test_torque_stays_within_channel_range():
    p = SimParams()
    peak = elbow_torque(p, 6.0, 90.0)
    assert peak <= 40.0


def test_noise_free_signals_are_exact():
    log, _ = simulate_session(
        with_overrides(builtin_mock_accident("baseline"), noise=0)
    )
    p = SimParams()
    lift = Phase(PhaseKind.LIFTING, 0, 7200, payload_kg=6.0)
    for t in (0, 1, 5, 3000, 3599):
        r = log.records[t]
        lifting = t < 2700 or t >= 3000
        theta = r.values[ChannelId.POS_LEFT]
        assert theta == (elbow_angle(p, lift, t) if lifting else p.theta_min)
        assert r.values[ChannelId.EMG_LEFT_BICEP] == (200.0 if lifting else 0.0)
        assert r.values[ChannelId.EMG_LEFT_TRICEP] == 0.0
        assert r.values[ChannelId.DECISION_LEFT] == (1.0 if lifting else 0.0)
        assert r.values[ChannelId.TEMP_LEFT] == 20.0
        assert r.values[ChannelId.TORQUE_LEFT] == elbow_torque(
            p, 6.0 if lifting else 0.0, theta)


def test_every_simulated_value_is_exact_in_f32(baseline_session):
    log, _ = baseline_session
    for r in log.records[::37]:
        for v in r.values.values():
            assert struct.unpack("<f", struct.pack("<f", v))[0] == v


def test_simulated_records_pass_schema_validation(baseline_session):
    log, _ = baseline_session
    for r in log.records[::101]:
        assert validate_record(r).ok


# -- Determinism -----------------------------------------------------------------


def test_same_seed_same_bytes():
    a, _ = simulate_session(builtin_mock_accident("baseline", seed=7))
    b, _ = simulate_session(builtin_mock_accident("baseline", seed=7))
    assert to_csv_bytes(a) == to_csv_bytes(b)


def test_different_seed_different_noise():
    a, _ = simulate_session(builtin_mock_accident("baseline", seed=7))
    b, _ = simulate_session(builtin_mock_accident("baseline", seed=8))
    assert to_csv_bytes(a) != to_csv_bytes(b)


# -- Faults ----------------------------------------------------------------------


def test_power_loss_stops_all_frames(baseline_session):
    scenario = builtin_mock_accident("baseline")
    frames, truth = generate(scenario)
    assert truth.power_loss_at == 3600
    assert max(f.t for f in frames) == 3599
    log, _ = baseline_session
    for r in log.records[3600:]:
        assert r.is_all_zero() and r.synthesized and not r.hb
    assert not log.records[3599].synthesized


def test_power_loss_at_zero_kills_meta_too():
    s = two_phase(fault=FaultInjection(FaultKind.POWER_LOSS, 0))
    frames, truth = generate(s)
    assert frames == []
    assert truth.power_loss_at == 0


def test_emg_dropout_zeroes_muscle_channels_only(emg_dropout_session):
    log, truth = emg_dropout_session
    assert truth.emg_dropout == (0, 3600)
    for r in log.records[:3600:97]:
        for ch in EMG_CHANNELS + DECISION_CHANNELS:
            assert r.values[ch] == 0.0
    # mechanics keep reporting: the arm visibly moves
    pos = [r.values[ChannelId.POS_LEFT] for r in log.records[:2700]]
    assert max(pos) - min(pos) > 100


def test_logger_fault_keeps_heartbeat(logger_fault_session):
    log, truth = logger_fault_session
    assert truth.logger_fault == (3600, 7200)
    assert truth.power_loss_at is None
    for r in log.records[3600::211]:
        assert r.is_all_zero()
        assert r.hb and not r.synthesized
    assert not log.records[3599].is_all_zero()


def test_heartbeats_present_every_live_second():
    frames, _ = generate(builtin_mock_accident("baseline"))
    hb_t = {f.t for f in frames if f.kind is FrameKind.HEARTBEAT}
    assert hb_t == set(range(3600))


def test_meta_frame_emitted_first():
    frames, _ = generate(builtin_mock_accident("baseline"))
    assert frames[0].kind is FrameKind.META
    meta = frames[0].session_meta()
    assert meta.session_id == "mock-accident-seed42"


# -- Scenario serialization -------------------------------------------------------


def test_scenario_dict_round_trip():
    s = builtin_mock_accident("emg-dropout", seed=9)
    assert scenario_from_dict(scenario_to_dict(s)) == s


def test_scenario_from_dict_validates():
    d = scenario_to_dict(two_phase())
    d["session_len"] = 61  # phases no longer tile
    with pytest.raises(ValueError):
        scenario_from_dict(d)


def test_with_overrides_replaces_seed_and_noise():
    s = builtin_mock_accident("baseline", seed=1)
    s2 = with_overrides(s, seed=5, noise=0)
    assert s2.seed == 5 and s2.params.emg_noise_max == 0
    assert s.seed == 1 and s.params.emg_noise_max == 30  # original untouched
    assert with_overrides(s) == s


def test_session_meta_reflects_scenario():
    meta = session_meta_for(builtin_mock_accident("logger-fault", seed=3))
    assert meta.session_id == "mock-accident-logger-fault-seed3"
    assert meta.rate_hz == 1


def test_simulate_session_is_the_full_wire_pipeline():
    s = two_phase()
    frames, _ = generate(s)
    blob = b"".join(encode_frame(f) for f in frames)
    events = decode_stream(blob)
    assert all(not isinstance(e, FrameOk) or e.frame.kind in FrameKind
               for e in events)
    log, _ = simulate_session(s)
    assert len(log.records) == 60
    data_frames = [e.frame for e in events
                   if isinstance(e, FrameOk) and e.frame.kind is FrameKind.DATA]
    assert log.records[10].values == data_frames[10].channel_values()
