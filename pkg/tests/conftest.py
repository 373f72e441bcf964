"""Shared fixtures: simulated variant logs and record builders."""

from __future__ import annotations

import random

import pytest

from ebbkit.core import DEFAULT_META, ChannelId, EbbRecord, canonical_channel_order
from ebbkit.sim import builtin_mock_accident, simulate_session
from ebbkit.store import EbbLog

ORDER = canonical_channel_order()


def make_record(t: int, values: dict[ChannelId, float] | None = None,
                hb: bool = True, synthesized: bool = False,
                seq: int | None = None) -> EbbRecord:
    vals = {ch: 0.0 for ch in ORDER}
    if values:
        vals.update(values)
    return EbbRecord(seq=t if seq is None else seq, t=t, values=vals,
                     hb=hb, synthesized=synthesized)


def make_log(records: list[EbbRecord]) -> EbbLog:
    return EbbLog(meta=DEFAULT_META, records=tuple(records))


def random_valid_values(rng: random.Random) -> dict[ChannelId, float]:
    """In-range values for every channel, mixing integral and fractional."""
    def pick(lo: float, hi: float) -> float:
        if rng.random() < 0.5:
            return float(rng.randint(int(lo), int(hi)))
        return rng.uniform(lo, hi)

    vals: dict[ChannelId, float] = {}
    for ch in ORDER:
        name = ch.value
        if name.startswith("emg"):
            vals[ch] = pick(0, 1023)
        elif name.startswith("dec"):
            vals[ch] = float(rng.randint(0, 1))
        elif name.startswith("pos"):
            vals[ch] = pick(0, 150)
        elif name.startswith("torque"):
            vals[ch] = pick(-40, 40)
        else:
            vals[ch] = pick(-20, 100)
    return vals


def make_regime_records(rng: random.Random, n: int) -> list[EbbRecord]:
    """Random log with regime-switching EMG silence and arm movement.

    Dwell times and levels are drawn so that flat-at-zero EMG stretches,
    near-threshold values, still arms, and moving arms all occur, which
    is what the dropout detector and its oracle disagree about if either
    is wrong.
    """
    records = []
    emg_until, emg_silent = 0, False
    pos_until, pos_moving, pos_level = 0, False, 40.0
    for t in range(n):
        if t >= emg_until:
            emg_silent = rng.random() < 0.5
            emg_until = t + rng.randint(5, 120)
        if t >= pos_until:
            pos_moving = rng.random() < 0.5
            pos_until = t + rng.randint(10, 150)
            pos_level = rng.uniform(10, 140)

        if emg_silent:
            # mostly true zeros, with excursions around the flatness gate
            emg = [float(rng.choice((0, 0, 0, 1, 3, 4, 5, 6)))
                   for _ in range(4)]
        else:
            emg = [float(rng.randint(150, 400)) for _ in range(4)]
        if pos_moving:
            pos = [pos_level + 30.0 * ((t % 8) / 7.0), pos_level]
        else:
            pos = [pos_level, pos_level]

        vals = {ch: 0.0 for ch in ORDER}
        for ch, v in zip(ORDER[0:4], emg):
            vals[ch] = v
        vals[ORDER[6]], vals[ORDER[7]] = pos
        vals[ORDER[10]] = vals[ORDER[11]] = 20.0
        records.append(EbbRecord(seq=t, t=t, values=vals, hb=True))
    return records


@pytest.fixture(scope="session")
def baseline_session():
    return simulate_session(builtin_mock_accident("baseline", seed=42))


@pytest.fixture(scope="session")
def emg_dropout_session():
    return simulate_session(builtin_mock_accident("emg-dropout", seed=42))


@pytest.fixture(scope="session")
def logger_fault_session():
    return simulate_session(builtin_mock_accident("logger-fault", seed=42))


@pytest.fixture(scope="session")
def idle_power_loss_session():
    return simulate_session(builtin_mock_accident("idle-power-loss", seed=42))
