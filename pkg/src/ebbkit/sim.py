"""Scenario-driven telemetry generator with injectable faults.

Produces the frame stream a real capture session would have put on the
wire, together with the ground truth (phase labels and exact fault
intervals) that detector tests check against.  Signal models are simple
and analytically checkable: a sinusoidal elbow trajectory while lifting,
lever-arm gravity torque, EMG as a base activation plus uniform integer
jitter, and a threshold rule for the actuation decisions.

Sensor outputs are quantized to steps that are exactly representable in
the 32-bit wire floats (integer ADC counts, 1/8-degree positions,
1/64 N·m torques), so encode/decode round-trips are lossless and runs
are byte-reproducible for a fixed seed.
"""

from __future__ import annotations

import enum
import json
import math
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .core import (
    ChannelId,
    EbbRecord,
    SessionMeta,
    canonical_channel_order,
)
from .store import EbbLog
from .wire import (
    Frame,
    data_frame,
    decode_stream,
    encode_frame,
    extract_session_meta,
    collect,
    heartbeat_frame,
    meta_frame,
)


class PhaseKind(enum.Enum):
    LIFTING = "lifting"
    IDLE = "idle"
    SCUFFLE = "scuffle"


class FaultKind(enum.Enum):
    POWER_LOSS = "power_loss"      # no frames of any kind from t onward
    EMG_DROPOUT = "emg_dropout"    # EMG channels read 0, decisions forced 0
    LOGGER_FAULT = "logger_fault"  # DATA payload all zero, heartbeat alive


MAX_PAYLOAD_KG = 6.0  # device lift limit


@dataclass(frozen=True)
class Phase:
    kind: PhaseKind
    t0: int
    t1: int
    payload_kg: float = 0.0


@dataclass(frozen=True)
class FaultInjection:
    """One injected fault; ``t`` is the onset second (inclusive)."""

    kind: FaultKind
    t: int


@dataclass(frozen=True)
class SimParams:
    m_arm_eff: float = 1.5        # kg, effective forearm mass
    r_arm: float = 0.15           # m, arm centre-of-mass lever
    r_load: float = 0.30          # m, payload lever
    g: float = 9.81               # m/s^2
    lift_period: int = 8          # s per lift cycle
    theta_min: float = 10.0       # degrees
    theta_max: float = 120.0      # degrees
    emg_noise_max: int = 30       # ADC counts, uniform jitter ceiling
    emg_active_base: int = 200    # ADC counts while a muscle drives
    decision_threshold: int = 150 # ADC counts: bicep above this actuates
    ambient_temp: float = 20.0    # degrees C

    def check(self) -> None:
        positive = {
            "m_arm_eff": self.m_arm_eff, "r_arm": self.r_arm,
            "r_load": self.r_load, "g": self.g,
            "lift_period": self.lift_period,
            "emg_active_base": self.emg_active_base,
            "decision_threshold": self.decision_threshold,
        }
        for name, v in positive.items():
            if v <= 0:
                raise ValueError(f"{name} must be strictly positive, got {v}")
        if self.emg_noise_max < 0:
            raise ValueError(f"emg_noise_max must be >= 0, got {self.emg_noise_max}")
        if not self.theta_min < self.theta_max:
            raise ValueError(
                f"theta_min must be < theta_max "
                f"({self.theta_min} vs {self.theta_max})"
            )


@dataclass(frozen=True)
class Scenario:
    name: str
    session_len: int
    phases: tuple[Phase, ...]
    faults: tuple[FaultInjection, ...] = ()
    params: SimParams = field(default_factory=SimParams)
    seed: int = 0
    notes: str = ""

    def check(self) -> None:
        if self.session_len <= 0:
            raise ValueError(f"session_len must be positive, got {self.session_len}")
        self.params.check()
        t = 0
        for p in self.phases:
            if p.t0 != t:
                raise ValueError(
                    f"phases must tile the session: expected t0={t}, "
                    f"got {p.t0} ({p.kind.value})"
                )
            if p.t1 <= p.t0:
                raise ValueError(f"empty phase at t={p.t0}")
            if not 0 <= p.payload_kg <= MAX_PAYLOAD_KG:
                raise ValueError(
                    f"payload {p.payload_kg} kg outside [0, {MAX_PAYLOAD_KG}]"
                )
            t = p.t1
        if t != self.session_len:
            raise ValueError(
                f"phases end at t={t}, session_len is {self.session_len}"
            )
        for f in self.faults:
            if not 0 <= f.t < self.session_len:
                raise ValueError(
                    f"fault {f.kind.value} at t={f.t} outside "
                    f"[0, {self.session_len})"
                )


@dataclass(frozen=True)
class GroundTruth:
    """What actually happened, for detector verification and sidecars."""

    scenario_name: str
    seed: int
    session_len: int
    phases: tuple[Phase, ...]
    power_loss_at: Optional[int] = None
    emg_dropout: Optional[tuple[int, int]] = None   # effective [from, to)
    logger_fault: Optional[tuple[int, int]] = None  # effective [from, to)

    def phase_active(self, p: Phase) -> bool:
        return p.kind is PhaseKind.LIFTING

    def powered_until(self) -> int:
        return self.power_loss_at if self.power_loss_at is not None else self.session_len

    def to_dict(self) -> dict:
        return {
            "scenario_name": self.scenario_name,
            "seed": self.seed,
            "session_len": self.session_len,
            "phases": [
                {
                    "kind": p.kind.value,
                    "t0": p.t0,
                    "t1": p.t1,
                    "payload_kg": p.payload_kg,
                    "active": self.phase_active(p),
                }
                for p in self.phases
            ],
            "power_loss_at": self.power_loss_at,
            "emg_dropout": list(self.emg_dropout) if self.emg_dropout else None,
            "logger_fault": list(self.logger_fault) if self.logger_fault else None,
        }


# -- Signal models -----------------------------------------------------------


def _q(v: float, steps_per_unit: int) -> float:
    return round(v * steps_per_unit) / steps_per_unit


def elbow_angle(params: SimParams, phase: Phase, t: int) -> float:
    """Elbow angle in degrees at second t (1/8-degree resolution)."""
    if phase.kind is PhaseKind.LIFTING:
        mid = (params.theta_min + params.theta_max) / 2.0
        amp = (params.theta_max - params.theta_min) / 2.0
        theta = mid + amp * math.sin(2.0 * math.pi * t / params.lift_period)
    else:
        theta = params.theta_min  # arm at rest
    return _q(theta, 8)


def elbow_torque(params: SimParams, payload_kg: float, theta_deg: float) -> float:
    """Gravity torque on one elbow, N·m (1/64 N·m resolution)."""
    lever = payload_kg * params.r_load + params.m_arm_eff * params.r_arm
    return _q(lever * params.g * math.sin(math.radians(theta_deg)), 64)


def _second_values(
    params: SimParams,
    phase: Phase,
    t: int,
    rng: random.Random,
    emg_dead: bool,
) -> dict[ChannelId, float]:
    lifting = phase.kind is PhaseKind.LIFTING
    theta = elbow_angle(params, phase, t)
    payload = phase.payload_kg if lifting else 0.0
    torque = elbow_torque(params, payload, theta)

    if emg_dead:
        emg = [0, 0, 0, 0]
        decisions = [0.0, 0.0]
    else:
        noise = lambda: rng.randint(0, params.emg_noise_max)
        active = params.emg_active_base
        # biceps drive the lift; triceps stay near the noise floor
        emg = [
            (active if lifting else 0) + noise(),  # left bicep
            noise(),                               # left tricep
            (active if lifting else 0) + noise(),  # right bicep
            noise(),                               # right tricep
        ]
        decisions = [
            1.0 if emg[0] > params.decision_threshold else 0.0,
            1.0 if emg[2] > params.decision_threshold else 0.0,
        ]

    order = canonical_channel_order()
    vals = emg + decisions + [theta, theta, torque, torque,
                              params.ambient_temp, params.ambient_temp]
    return {ch: float(v) for ch, v in zip(order, vals)}


# -- Generation --------------------------------------------------------------


def generate(scenario: Scenario) -> tuple[list[Frame], GroundTruth]:
    """Emit the session's frames (one DATA + one HEARTBEAT per powered
    second, META first) and the matching ground truth."""
    scenario.check()
    params = scenario.params
    rng = random.Random(scenario.seed)

    power_at: Optional[int] = None
    emg_from: Optional[int] = None
    logger_from: Optional[int] = None
    for f in scenario.faults:
        if f.kind is FaultKind.POWER_LOSS:
            power_at = f.t if power_at is None else min(power_at, f.t)
        elif f.kind is FaultKind.EMG_DROPOUT:
            emg_from = f.t if emg_from is None else min(emg_from, f.t)
        elif f.kind is FaultKind.LOGGER_FAULT:
            logger_from = f.t if logger_from is None else min(logger_from, f.t)

    end = scenario.session_len if power_at is None else power_at
    meta = session_meta_for(scenario)

    frames: list[Frame] = []
    if end > 0:
        frames.append(meta_frame(0, 0, meta))

    phase_idx = 0
    zeros = {ch: 0.0 for ch in canonical_channel_order()}
    for t in range(end):
        while scenario.phases[phase_idx].t1 <= t:
            phase_idx += 1
        phase = scenario.phases[phase_idx]
        emg_dead = emg_from is not None and t >= emg_from
        values = _second_values(params, phase, t, rng, emg_dead)
        if logger_from is not None and t >= logger_from:
            values = zeros  # device runs on; the logger writes zeros
        frames.append(data_frame(t, t, values))
        frames.append(heartbeat_frame(t, t))

    truth = GroundTruth(
        scenario_name=scenario.name,
        seed=scenario.seed,
        session_len=scenario.session_len,
        phases=scenario.phases,
        power_loss_at=power_at,
        emg_dropout=(emg_from, end) if emg_from is not None and emg_from < end else None,
        logger_fault=(logger_from, end) if logger_from is not None and logger_from < end else None,
    )
    return frames, truth


def session_meta_for(scenario: Scenario) -> SessionMeta:
    return SessionMeta(
        session_id=f"{scenario.name}-seed{scenario.seed}",
        device_id="exo-upper-01",
        start_utc="2024-01-01T08:00:00Z",
    )


def simulate_session(scenario: Scenario) -> tuple[EbbLog, GroundTruth]:
    """Full capture pipeline: frames -> wire bytes -> decode -> collect."""
    frames, truth = generate(scenario)
    stream = b"".join(encode_frame(f) for f in frames)
    events = decode_stream(stream)
    records = collect(events, scenario.session_len)
    meta = extract_session_meta(events)
    return EbbLog(meta=meta, records=tuple(records)), truth


# -- Built-in scenario -------------------------------------------------------

MOCK_ACCIDENT_VARIANTS = ("baseline", "emg-dropout", "logger-fault",
                          "idle-power-loss")

_MOCK_NOTES = (
    "Built-in warehouse-shift timeline; phase boundaries are illustrative, "
    "not calibrated to any real shift."
)


def builtin_mock_accident(variant: str = "baseline", seed: int = 42,
                          params: SimParams | None = None) -> Scenario:
    """The canonical two-hour warehouse session.

    A long supervised lift run, a one-minute scuffle with a co-worker,
    a short break, then an unsupervised resumption during which the
    power is cut mid-lift.  Variants move or swap the injected fault:

    - ``baseline``:        power loss at t=3600
    - ``emg-dropout``:     power loss at t=3600 plus EMG capture dead from t=0
    - ``logger-fault``:    logger writes zeros from t=3600, device stays up
    - ``idle-power-loss``: power loss at t=2900, inside the idle phase
    """
    if variant not in MOCK_ACCIDENT_VARIANTS:
        raise ValueError(
            f"unknown variant {variant!r}; expected one of "
            f"{', '.join(MOCK_ACCIDENT_VARIANTS)}"
        )
    phases = (
        Phase(PhaseKind.LIFTING, 0, 2700, payload_kg=6.0),
        Phase(PhaseKind.SCUFFLE, 2700, 2760),
        Phase(PhaseKind.IDLE, 2760, 3000),
        Phase(PhaseKind.LIFTING, 3000, 7200, payload_kg=6.0),
    )
    faults: tuple[FaultInjection, ...]
    if variant == "baseline":
        faults = (FaultInjection(FaultKind.POWER_LOSS, 3600),)
        name = "mock-accident"
    elif variant == "emg-dropout":
        faults = (
            FaultInjection(FaultKind.POWER_LOSS, 3600),
            FaultInjection(FaultKind.EMG_DROPOUT, 0),
        )
        name = "mock-accident-emg-dropout"
    elif variant == "logger-fault":
        faults = (FaultInjection(FaultKind.LOGGER_FAULT, 3600),)
        name = "mock-accident-logger-fault"
    else:  # idle-power-loss
        faults = (FaultInjection(FaultKind.POWER_LOSS, 2900),)
        name = "mock-accident-idle-power-loss"
    return Scenario(
        name=name,
        session_len=7200,
        phases=phases,
        faults=faults,
        params=params or SimParams(),
        seed=seed,
        notes=_MOCK_NOTES,
    )


# -- Scenario files ----------------------------------------------------------


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "name": s.name,
        "session_len": s.session_len,
        "seed": s.seed,
        "phases": [
            {"kind": p.kind.value, "t0": p.t0, "t1": p.t1,
             "payload_kg": p.payload_kg}
            for p in s.phases
        ],
        "faults": [{"kind": f.kind.value, "t": f.t} for f in s.faults],
        "params": {
            "m_arm_eff": s.params.m_arm_eff,
            "r_arm": s.params.r_arm,
            "r_load": s.params.r_load,
            "g": s.params.g,
            "lift_period": s.params.lift_period,
            "theta_min": s.params.theta_min,
            "theta_max": s.params.theta_max,
            "emg_noise_max": s.params.emg_noise_max,
            "emg_active_base": s.params.emg_active_base,
            "decision_threshold": s.params.decision_threshold,
            "ambient_temp": s.params.ambient_temp,
        },
        "notes": s.notes,
    }


def scenario_from_dict(d: dict) -> Scenario:
    # missing keys and wrong shapes must surface as ValueError so callers
    # can treat every malformed scenario the same way
    try:
        params_d = d.get("params", {})
        params = SimParams(**{
            k: (int(v) if k in ("lift_period", "emg_noise_max",
                                "emg_active_base", "decision_threshold")
                else float(v))
            for k, v in params_d.items()
        })
        scenario = Scenario(
            name=str(d["name"]),
            session_len=int(d["session_len"]),
            seed=int(d.get("seed", 0)),
            phases=tuple(
                Phase(PhaseKind(p["kind"]), int(p["t0"]), int(p["t1"]),
                      float(p.get("payload_kg", 0.0)))
                for p in d["phases"]
            ),
            faults=tuple(
                FaultInjection(FaultKind(f["kind"]), int(f["t"]))
                for f in d.get("faults", ())
            ),
            params=params,
            notes=str(d.get("notes", "")),
        )
    except KeyError as e:
        raise ValueError(f"scenario missing key: {e.args[0]}") from e
    except TypeError as e:
        raise ValueError(f"scenario malformed: {e}") from e
    scenario.check()
    return scenario


def load_scenario_file(path: str | Path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))


def with_overrides(scenario: Scenario, seed: int | None = None,
                   noise: int | None = None) -> Scenario:
    s = scenario
    if seed is not None:
        s = replace(s, seed=seed)
    if noise is not None:
        s = replace(s, params=replace(s.params, emg_noise_max=noise),
                    name=s.name)
    return s
