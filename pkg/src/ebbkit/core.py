"""Record schema and channel semantics for the exoskeleton black-box logger.

The logger samples 12 channels once per second, in two groups of six:
muscle activity (EMG counts for left/right bicep/tricep plus the two
actuation decision signals) and mechanics (left/right elbow position,
torque and temperature).  A record that reads zero on every channel is
special: it is the signature of a power or link loss, and the heartbeat
flag is what disambiguates "robot dead" from "logger dead".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping


class ChannelId(enum.Enum):
    """The 12 logged channels, in canonical column order.

    Enum values double as CSV column names.
    """

    EMG_LEFT_BICEP = "emg_lb"
    EMG_LEFT_TRICEP = "emg_lt"
    EMG_RIGHT_BICEP = "emg_rb"
    EMG_RIGHT_TRICEP = "emg_rt"
    DECISION_LEFT = "dec_l"
    DECISION_RIGHT = "dec_r"
    POS_LEFT = "pos_l"
    POS_RIGHT = "pos_r"
    TORQUE_LEFT = "torque_l"
    TORQUE_RIGHT = "torque_r"
    TEMP_LEFT = "temp_l"
    TEMP_RIGHT = "temp_r"


# Declaration order above is the canonical order; freeze it as a tuple so
# the wire payload layout and CSV column layout can never drift apart.
_CANONICAL_ORDER: tuple[ChannelId, ...] = tuple(ChannelId)

EMG_CHANNELS: tuple[ChannelId, ...] = _CANONICAL_ORDER[0:4]
DECISION_CHANNELS: tuple[ChannelId, ...] = _CANONICAL_ORDER[4:6]
POSITION_CHANNELS: tuple[ChannelId, ...] = _CANONICAL_ORDER[6:8]
TORQUE_CHANNELS: tuple[ChannelId, ...] = _CANONICAL_ORDER[8:10]
TEMP_CHANNELS: tuple[ChannelId, ...] = _CANONICAL_ORDER[10:12]

# Value bounds per channel family.  Decision channels are additionally
# restricted to exactly {0.0, 1.0}.
CHANNEL_RANGES: dict[ChannelId, tuple[float, float]] = {
    **{ch: (0.0, 1023.0) for ch in EMG_CHANNELS},      # ADC counts
    **{ch: (0.0, 1.0) for ch in DECISION_CHANNELS},    # binary
    **{ch: (0.0, 150.0) for ch in POSITION_CHANNELS},  # degrees
    **{ch: (-40.0, 40.0) for ch in TORQUE_CHANNELS},   # newton-metres
    **{ch: (-20.0, 100.0) for ch in TEMP_CHANNELS},    # degrees Celsius
}


def canonical_channel_order() -> tuple[ChannelId, ...]:
    """Return the 12 channels in canonical order (stable across versions)."""
    return _CANONICAL_ORDER


@dataclass(frozen=True)
class SessionMeta:
    """Identity and capture parameters of one logging session."""

    session_id: str
    device_id: str
    start_utc: str  # ISO-8601
    rate_hz: int = 1
    schema_version: int = 1

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "device_id": self.device_id,
            "start_utc": self.start_utc,
            "rate_hz": self.rate_hz,
            "schema_version": self.schema_version,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "SessionMeta":
        return cls(
            session_id=str(d["session_id"]),
            device_id=str(d["device_id"]),
            start_utc=str(d["start_utc"]),
            rate_hz=int(d["rate_hz"]),
            schema_version=int(d["schema_version"]),
        )


DEFAULT_META = SessionMeta(
    session_id="unknown",
    device_id="unknown",
    start_utc="1970-01-01T00:00:00Z",
)


@dataclass(frozen=True)
class EbbRecord:
    """One 1 Hz telemetry sample.

    ``synthesized`` marks records the collector zero-filled because no
    telemetry arrived that second; it is bookkeeping, not one of the 12
    captured values.  ``hb`` is true only when a heartbeat was received
    alongside actual telemetry, so ``hb`` implies ``not synthesized``.
    """

    seq: int
    t: int
    values: Mapping[ChannelId, float]
    hb: bool
    synthesized: bool = False

    def __getitem__(self, ch: ChannelId) -> float:
        return self.values[ch]

    def is_all_zero(self) -> bool:
        return all(v == 0.0 for v in self.values.values())


class ZeroClassification(enum.Enum):
    """What an all-zero reading means, given the heartbeat flag."""

    NORMAL = "normal"
    POWER_LOSS = "power_loss"
    LOGGER_OR_SENSOR_FAULT = "logger_or_sensor_fault"


@dataclass(frozen=True)
class Violation:
    """A single schema violation: which channel, what value, which bound."""

    channel: ChannelId | None
    value: float | None
    message: str

    def __str__(self) -> str:
        if self.channel is not None:
            return f"{self.channel.value}={self.value}: {self.message}"
        return self.message


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[Violation, ...] = field(default_factory=tuple)


def validate_record(r: EbbRecord) -> ValidationResult:
    """Check one record against the schema.

    Violations are data, not exceptions.  An all-zero record is accepted
    even where zero falls outside a channel's physical range, because
    all-zero is the recorded shape of a power loss.
    """
    violations: list[Violation] = []

    present = set(r.values.keys())
    expected = set(_CANONICAL_ORDER)
    for ch in sorted(expected - present, key=lambda c: c.value):
        violations.append(Violation(ch, None, "channel missing"))
    for ch in sorted(present - expected, key=lambda c: str(c)):
        violations.append(Violation(None, None, f"unknown channel {ch!r}"))
    if violations:
        return ValidationResult(False, tuple(violations))

    all_zero = r.is_all_zero()
    if not all_zero:
        for ch in _CANONICAL_ORDER:
            v = r.values[ch]
            lo, hi = CHANNEL_RANGES[ch]
            if ch in DECISION_CHANNELS:
                if v not in (0.0, 1.0):
                    violations.append(Violation(ch, v, "decision not in {0,1}"))
            elif not (lo <= v <= hi):
                violations.append(
                    Violation(ch, v, f"outside range [{lo}, {hi}]")
                )

    if r.hb and r.synthesized:
        violations.append(
            Violation(None, None, "heartbeat set on a zero-filled record")
        )
    if r.seq < 0:
        violations.append(Violation(None, None, f"negative seq {r.seq}"))
    if r.t < 0:
        violations.append(Violation(None, None, f"negative t {r.t}"))

    return ValidationResult(not violations, tuple(violations))


def classify_zero(r: EbbRecord) -> ZeroClassification:
    """Classify a record by the all-zero/heartbeat signature.

    Total over valid records: any live channel means NORMAL; an all-zero
    record is POWER_LOSS when the heartbeat is silent too, and a logger
    or sensor fault when the heartbeat says the robot is still up.
    """
    if not r.is_all_zero():
        return ZeroClassification.NORMAL
    if r.hb:
        return ZeroClassification.LOGGER_OR_SENSOR_FAULT
    return ZeroClassification.POWER_LOSS
