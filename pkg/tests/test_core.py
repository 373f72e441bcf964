"""Record schema, validation, and zero-classification behavior."""

from conftest import ORDER, make_record
from ebbkit.core import (
    CHANNEL_RANGES,
    DECISION_CHANNELS,
    EMG_CHANNELS,
    POSITION_CHANNELS,
    TEMP_CHANNELS,
    TORQUE_CHANNELS,
    ChannelId,
    EbbRecord,
    SessionMeta,
    ZeroClassification,
    classify_zero,
    validate_record,
)


def test_canonical_order_is_the_csv_column_order():
    assert [ch.value for ch in ORDER] == [
        "emg_lb", "emg_lt", "emg_rb", "emg_rt",
        "dec_l", "dec_r", "pos_l", "pos_r",
        "torque_l", "torque_r", "temp_l", "temp_r",
    ]


def test_channel_groups_partition_the_order():
    assert EMG_CHANNELS + DECISION_CHANNELS + POSITION_CHANNELS \
        + TORQUE_CHANNELS + TEMP_CHANNELS == ORDER
    assert set(CHANNEL_RANGES) == set(ORDER)


def test_ranges_match_hardware_limits():
    assert CHANNEL_RANGES[ChannelId.EMG_LEFT_BICEP] == (0.0, 1023.0)
    assert CHANNEL_RANGES[ChannelId.DECISION_LEFT] == (0.0, 1.0)
    assert CHANNEL_RANGES[ChannelId.POS_RIGHT] == (0.0, 150.0)
    assert CHANNEL_RANGES[ChannelId.TORQUE_LEFT] == (-40.0, 40.0)
    assert CHANNEL_RANGES[ChannelId.TEMP_RIGHT] == (-20.0, 100.0)


def test_valid_record_passes():
    r = make_record(3, {ChannelId.EMG_LEFT_BICEP: 512.0,
                        ChannelId.POS_LEFT: 90.0,
                        ChannelId.DECISION_LEFT: 1.0})
    result = validate_record(r)
    assert result.ok
    assert result.violations == ()


def test_all_zero_record_is_legal_despite_out_of_band_meaning():
    # Power loss is recorded as zeros, so zeros must not be a schema error.
    r = make_record(9, hb=False, synthesized=True)
    assert validate_record(r).ok


def test_missing_channel_is_a_violation():
    vals = {ch: 0.0 for ch in ORDER if ch is not ChannelId.TEMP_RIGHT}
    r = EbbRecord(seq=0, t=0, values=vals, hb=False)
    result = validate_record(r)
    assert not result.ok
    assert any("temp_r" in str(v) for v in result.violations)


def test_decision_must_be_binary():
    r = make_record(0, {ChannelId.DECISION_LEFT: 0.5,
                        ChannelId.EMG_LEFT_BICEP: 1.0})
    result = validate_record(r)
    assert any("dec_l" in str(v) for v in result.violations)


def test_out_of_range_emg_flagged():
    r = make_record(0, {ChannelId.EMG_RIGHT_TRICEP: 2000.0})
    assert not validate_record(r).ok


def test_heartbeat_on_synthesized_record_is_contradictory():
    r = make_record(0, {ChannelId.EMG_LEFT_BICEP: 7.0},
                    hb=True, synthesized=True)
    result = validate_record(r)
    assert any("heartbeat" in v.message for v in result.violations)


def test_negative_time_rejected():
    vals = {ch: 0.0 for ch in ORDER}
    vals[ChannelId.EMG_LEFT_BICEP] = 1.0
    bad = EbbRecord(seq=-1, t=-1, values=vals, hb=True)
    result = validate_record(bad)
    assert not result.ok
    assert sum("negative" in v.message for v in result.violations) == 2


def test_classify_zero_three_way():
    live = make_record(0, {ChannelId.POS_LEFT: 42.0})
    assert classify_zero(live) is ZeroClassification.NORMAL
    dead = make_record(1, hb=False)
    assert classify_zero(dead) is ZeroClassification.POWER_LOSS
    faulty = make_record(2, hb=True)
    assert classify_zero(faulty) is ZeroClassification.LOGGER_OR_SENSOR_FAULT


def test_session_meta_round_trips_through_dict():
    meta = SessionMeta(session_id="s1", device_id="exo-9",
                       start_utc="2024-06-01T12:00:00Z")
    assert SessionMeta.from_dict(meta.to_dict()) == meta


def test_record_getitem_by_channel():
    r = make_record(0, {ChannelId.TORQUE_RIGHT: -12.5})
    assert r[ChannelId.TORQUE_RIGHT] == -12.5
