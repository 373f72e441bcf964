"""Detectors and report assembly for post-incident log analysis.

Each detector is a pure function of (log, config) producing findings:
evidentiary claims over half-open time intervals.  The report composes
them into the investigator's three questions: what happened, why did it
happen, and what would prevent it happening again.

Interval conventions: half-open [t0, t1), merged maximally, earliest
start wins ties.  The EMG-dropout scan marks windows in which every EMG
channel is flat (max - min below ``flat_eps_emg``; a dead capture path
reads zero, a stuck one reads any constant), merges consecutive
qualifying windows, and keeps an interval only if some position channel
actually moved within it (flat muscles on a moving arm).  Position
activity is judged over the merged interval as a whole, so a sustained
capture failure is reported as one finding even when it spans rest
periods.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import (
    DECISION_CHANNELS,
    EMG_CHANNELS,
    POSITION_CHANNELS,
    TORQUE_CHANNELS,
    ChannelId,
    ZeroClassification,
    canonical_channel_order,
    classify_zero,
)
from .store import EbbLog, read_range


class FindingKind(enum.Enum):
    POWER_LOSS = "power_loss"
    LOGGER_OR_SENSOR_FAULT = "logger_or_sensor_fault"
    EMG_DROPOUT = "emg_dropout"
    ACTUATION_ACTIVE = "actuation_active"
    ACTUATION_INACTIVE = "actuation_inactive"
    UNDER_LOAD_AT_FAILURE = "under_load_at_failure"


class Confidence(enum.Enum):
    HIGH = "high"
    LOW = "low"


@dataclass(frozen=True)
class Finding:
    kind: FindingKind
    t0: int
    t1: int
    evidence: tuple[ChannelId, ...]
    confidence: Confidence
    note: str

    def __post_init__(self) -> None:
        if not self.t0 < self.t1:
            raise ValueError(f"finding interval empty: [{self.t0}, {self.t1})")

    def overlaps(self, t0: int, t1: int) -> bool:
        return max(self.t0, t0) < min(self.t1, t1)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "t0": self.t0,
            "t1": self.t1,
            "evidence": [ch.value for ch in self.evidence],
            "confidence": self.confidence.value,
            "note": self.note,
        }

    def summary(self) -> str:
        return (
            f"{self.kind.value} [{self.t0}, {self.t1}) "
            f"confidence={self.confidence.value}: {self.note}"
        )


@dataclass(frozen=True)
class DetectorConfig:
    min_powerloss_run: int = 3     # records: shorter zero runs are ignored
    flat_eps_emg: float = 5.0      # ADC counts: EMG "silent" ceiling
    pos_activity_delta: float = 5.0  # degrees: movement threshold
    window: int = 30               # records per sliding window
    load_torque_min: float = 5.0   # N·m: "under load" threshold

    def check(self) -> None:
        for name in ("min_powerloss_run", "flat_eps_emg",
                     "pos_activity_delta", "window", "load_torque_min"):
            v = getattr(self, name)
            if v <= 0:
                raise ValueError(f"{name} must be strictly positive, got {v}")

    def to_dict(self) -> dict:
        return {
            "min_powerloss_run": self.min_powerloss_run,
            "flat_eps_emg": self.flat_eps_emg,
            "pos_activity_delta": self.pos_activity_delta,
            "window": self.window,
            "load_torque_min": self.load_torque_min,
        }


@dataclass(frozen=True)
class Timeline:
    findings: tuple[Finding, ...]
    session_id: str
    config: DetectorConfig

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "config": self.config.to_dict(),
            "findings": [f.to_dict() for f in self.findings],
        }


def sort_findings(findings: Iterable[Finding]) -> tuple[Finding, ...]:
    return tuple(sorted(findings, key=lambda f: (f.t0, f.kind.value)))


# -- Zero-run detection ------------------------------------------------------


def detect_power_loss(log: EbbLog, cfg: DetectorConfig = DetectorConfig()) -> list[Finding]:
    """Maximal runs of all-zero records, split by heartbeat meaning.

    Silent-heartbeat runs are power losses; runs with the heartbeat
    alive are logger or sensor faults.  Runs shorter than
    ``min_powerloss_run`` are ignored.
    """
    cfg.check()
    recs = log.records
    classes = [classify_zero(r) for r in recs]
    findings: list[Finding] = []
    all_channels = canonical_channel_order()

    i = 0
    n = len(recs)
    while i < n:
        cls = classes[i]
        j = i
        while j < n and classes[j] == cls:
            j += 1
        run_len = j - i
        if cls is not ZeroClassification.NORMAL and run_len >= cfg.min_powerloss_run:
            t0, t1 = recs[i].t, recs[j - 1].t + 1
            if cls is ZeroClassification.POWER_LOSS:
                findings.append(Finding(
                    kind=FindingKind.POWER_LOSS,
                    t0=t0, t1=t1,
                    evidence=all_channels,
                    confidence=Confidence.HIGH,
                    note=(f"all 12 channels at zero for {run_len} s "
                          f"with no heartbeat"),
                ))
            else:
                findings.append(Finding(
                    kind=FindingKind.LOGGER_OR_SENSOR_FAULT,
                    t0=t0, t1=t1,
                    evidence=all_channels,
                    confidence=Confidence.HIGH,
                    note=(f"all 12 channels at zero for {run_len} s while "
                          f"the heartbeat stayed alive"),
                ))
        i = j
    return findings


# -- EMG dropout detection ---------------------------------------------------


def _sliding_max(xs: Sequence[float], w: int) -> list[float]:
    """Max over each length-w window (monotonic deque, O(n))."""
    out: list[float] = []
    dq: deque[int] = deque()
    for i, v in enumerate(xs):
        while dq and xs[dq[-1]] <= v:
            dq.pop()
        dq.append(i)
        if dq[0] <= i - w:
            dq.popleft()
        if i >= w - 1:
            out.append(xs[dq[0]])
    return out


def _sliding_min(xs: Sequence[float], w: int) -> list[float]:
    """Min over each length-w window; mirror of :func:`_sliding_max`."""
    out: list[float] = []
    dq: deque[int] = deque()
    for i, v in enumerate(xs):
        while dq and xs[dq[-1]] >= v:
            dq.pop()
        dq.append(i)
        if dq[0] <= i - w:
            dq.popleft()
        if i >= w - 1:
            out.append(xs[dq[0]])
    return out


def _channel_series(log: EbbLog, ch: ChannelId) -> list[float]:
    return [r.values[ch] for r in log.records]


def _value_range(log: EbbLog, ch: ChannelId, i0: int, i1: int) -> float:
    vals = [r.values[ch] for r in log.records[i0:i1]]
    return max(vals) - min(vals) if vals else 0.0


def detect_emg_dropout(log: EbbLog, cfg: DetectorConfig = DetectorConfig()) -> list[Finding]:
    """Sustained flat EMG while the arm was demonstrably moving.

    Flat means the per-window range of every EMG channel stays below
    ``flat_eps_emg``: zero for a dead capture path, any constant for a
    stuck one.  See the module docstring for the window/merge
    convention.  Reported with low confidence: the very channels that
    would confirm muscle intent are the ones in doubt.
    """
    cfg.check()
    n = len(log.records)
    w = cfg.window
    if n < w:
        return []

    emg = [_channel_series(log, ch) for ch in EMG_CHANNELS]
    maxes = [_sliding_max(series, w) for series in emg]
    mins = [_sliding_min(series, w) for series in emg]
    starts = len(maxes[0])
    quiet = [
        all(maxes[c][a] - mins[c][a] < cfg.flat_eps_emg for c in range(4))
        for a in range(starts)
    ]

    findings: list[Finding] = []
    base_t = log.t_start
    a = 0
    while a < starts:
        if not quiet[a]:
            a += 1
            continue
        b = a
        while b + 1 < starts and quiet[b + 1]:
            b += 1
        i0, i1 = a, b + w  # record indices of the merged interval
        moving = tuple(
            ch for ch in POSITION_CHANNELS
            if _value_range(log, ch, i0, i1) > cfg.pos_activity_delta
        )
        if moving:
            findings.append(Finding(
                kind=FindingKind.EMG_DROPOUT,
                t0=base_t + i0, t1=base_t + i1,
                evidence=EMG_CHANNELS + moving,
                confidence=Confidence.LOW,
                note=(f"EMG channels flat (range < {cfg.flat_eps_emg:g} "
                      f"counts) for {i1 - i0} s while the elbow moved"),
            ))
        a = b + 1
    return findings


# -- Actuation queries -------------------------------------------------------


def detect_actuation(
    log: EbbLog,
    t0: int,
    t1: int,
    cfg: DetectorConfig = DetectorConfig(),
    emg_dropouts: Optional[Sequence[Finding]] = None,
) -> Finding:
    """Did the exoskeleton actuate within [t0, t1)?

    Active means a decision signal asserted or an elbow position range
    above ``pos_activity_delta``.  Confidence drops to low when the
    interval overlaps an EMG dropout: without activation data the
    actuation picture is incomplete.
    """
    cfg.check()
    if t0 < log.t_start or t1 > log.t_end or t0 >= t1:
        raise ValueError(
            f"query [{t0}, {t1}) empty or outside log "
            f"[{log.t_start}, {log.t_end})"
        )
    recs = read_range(log, t0, t1)

    decided = tuple(
        ch for ch in DECISION_CHANNELS if any(r.values[ch] == 1.0 for r in recs)
    )
    pos_ranges = {
        ch: (max(r.values[ch] for r in recs) - min(r.values[ch] for r in recs))
        for ch in POSITION_CHANNELS
    }
    moved = tuple(
        ch for ch in POSITION_CHANNELS
        if pos_ranges[ch] > cfg.pos_activity_delta
    )

    if emg_dropouts is None:
        emg_dropouts = detect_emg_dropout(log, cfg)
    blind = any(d.overlaps(t0, t1) for d in emg_dropouts)
    confidence = Confidence.LOW if blind else Confidence.HIGH
    caveat = "; EMG capture was down here, so muscle intent is unverifiable" \
        if blind else ""

    max_range = max(pos_ranges.values())
    if decided or moved:
        return Finding(
            kind=FindingKind.ACTUATION_ACTIVE,
            t0=t0, t1=t1,
            evidence=decided + moved,
            confidence=confidence,
            note=(f"actuation observed: decisions asserted on "
                  f"{len(decided)} channel(s), elbow range "
                  f"{max_range:.1f} deg{caveat}"),
        )
    return Finding(
        kind=FindingKind.ACTUATION_INACTIVE,
        t0=t0, t1=t1,
        evidence=DECISION_CHANNELS + POSITION_CHANNELS,
        confidence=confidence,
        note=(f"no actuation: decisions never asserted, elbow range "
              f"{max_range:.1f} deg within {cfg.pos_activity_delta:g} deg"
              f"{caveat}"),
    )


# -- Under-load classification -----------------------------------------------


def classify_under_load(
    log: EbbLog,
    power_loss: Finding,
    cfg: DetectorConfig = DetectorConfig(),
) -> Optional[Finding]:
    """Was the suit bearing load in the last live record before an outage?"""
    cfg.check()
    if power_loss.kind is not FindingKind.POWER_LOSS:
        raise ValueError(
            f"expected a power_loss finding, got {power_loss.kind.value}"
        )
    last = None
    for r in reversed(read_range(log, log.t_start, power_loss.t0)):
        if not r.synthesized:
            last = r
            break
    if last is None:
        return None
    tl, tr = (abs(last.values[ch]) for ch in TORQUE_CHANNELS)
    torque = max(tl, tr)
    if torque < cfg.load_torque_min:
        return None
    return Finding(
        kind=FindingKind.UNDER_LOAD_AT_FAILURE,
        t0=last.t, t1=last.t + 1,
        evidence=TORQUE_CHANNELS,
        confidence=Confidence.HIGH,
        note=(f"elbow torque {torque:.2f} N·m in the last live record "
              f"(t={last.t}) before the outage; under-load threshold "
              f"{cfg.load_torque_min:g} N·m"),
    )


# -- Report ------------------------------------------------------------------

RECOMMENDATION_EMG_ALARM = (
    "Fit an alarm that alerts the wearer and supervisor the moment the EMG "
    "sensors stop reporting, so a session never continues without "
    "muscle-activation telemetry."
)
RECOMMENDATION_FAILSAFE = (
    "Fit a mechanical fail-safe so that a power failure cannot leave the "
    "exoskeleton frozen while it is bearing load."
)

NO_FINDINGS_TEXT = "No anomalous findings."


@dataclass(frozen=True)
class Report:
    timeline: Timeline
    what_happened: tuple[str, ...]
    why: tuple[str, ...]
    prevention: tuple[str, ...]
    record_count: int = 0
    t_span: tuple[int, int] = (0, 0)

    def to_dict(self) -> dict:
        return {
            "session": {
                "session_id": self.timeline.session_id,
                "records": self.record_count,
                "t0": self.t_span[0],
                "t1": self.t_span[1],
            },
            "config": self.timeline.config.to_dict(),
            "findings": [f.to_dict() for f in self.timeline.findings],
            "what_happened": list(self.what_happened),
            "why": list(self.why),
            "prevention": list(self.prevention),
        }

    def to_markdown(self) -> str:
        lines = [
            f"# Investigation report: session {self.timeline.session_id}",
            "",
            f"{self.record_count} records, t = [{self.t_span[0]}, "
            f"{self.t_span[1]}) s.",
            "",
            "## What happened?",
            "",
        ]
        lines.extend(f"- {s}" for s in self.what_happened)
        lines += ["", "## Why did it happen?", ""]
        lines.extend(f"- {s}" for s in self.why)
        lines += ["", "## How do we prevent it happening again?", ""]
        if self.prevention:
            lines.extend(f"- {s}" for s in self.prevention)
        else:
            lines.append("- No preventive actions triggered by the findings.")
        lines.append("")
        return "\n".join(lines)


def _narrate(f: Finding) -> str:
    span = f"t = [{f.t0}, {f.t1}) s"
    if f.kind == FindingKind.POWER_LOSS:
        return (f"{span}: complete loss of power; every channel fell to "
                f"zero and the heartbeat went silent.")
    if f.kind == FindingKind.LOGGER_OR_SENSOR_FAULT:
        return (f"{span}: all channels read zero while the heartbeat kept "
                f"running; the robot was powered up and working.")
    if f.kind == FindingKind.EMG_DROPOUT:
        return (f"{span}: no EMG signal was captured although the elbow "
                f"was moving.")
    if f.kind == FindingKind.ACTUATION_ACTIVE:
        return f"{span}: the exoskeleton actuated ({f.note})."
    if f.kind == FindingKind.ACTUATION_INACTIVE:
        return f"{span}: the exoskeleton did not actuate ({f.note})."
    if f.kind == FindingKind.UNDER_LOAD_AT_FAILURE:
        return f"{span}: the suit was bearing load at the moment of failure ({f.note})."
    return f"{span}: {f.note}"


def build_report(
    log: EbbLog,
    queries: Sequence[tuple[int, int]] = (),
    cfg: DetectorConfig = DetectorConfig(),
) -> Report:
    """Run every detector plus the requested actuation queries.

    Deterministic for fixed inputs; findings are results, not errors.
    """
    cfg.check()
    zero_findings = detect_power_loss(log, cfg)
    dropouts = detect_emg_dropout(log, cfg)

    under: list[Finding] = []
    for f in zero_findings:
        if f.kind == FindingKind.POWER_LOSS:
            u = classify_under_load(log, f, cfg)
            if u is not None:
                under.append(u)

    queries_f = [
        detect_actuation(log, q0, q1, cfg, emg_dropouts=dropouts)
        for q0, q1 in queries
    ]

    findings = sort_findings(zero_findings + dropouts + under + queries_f)
    timeline = Timeline(findings=findings, session_id=log.meta.session_id,
                        config=cfg)

    kinds = {f.kind for f in findings}
    what = tuple(_narrate(f) for f in findings) or (NO_FINDINGS_TEXT,)

    why: list[str] = []
    power = [f for f in findings if f.kind == FindingKind.POWER_LOSS]
    if power and under:
        why.append(
            f"The power supply failed at t = {power[0].t0} s during a "
            f"powered lift: the suit froze while bearing load, taking the "
            f"wearer's support away mid-motion."
        )
    elif power:
        why.append(
            f"The power supply failed at t = {power[0].t0} s; the all-zero "
            f"log with a silent heartbeat is direct evidence of the outage."
        )
    if FindingKind.LOGGER_OR_SENSOR_FAULT in kinds:
        why.append(
            "All channels fell to zero while the heartbeat stayed alive, "
            "so the robot had power and the fault lies in the logging or "
            "sensor chain."
        )
    if dropouts:
        why.append(
            "EMG capture failed, so muscle-activation intent cannot be "
            "established for the affected period; conclusions that rest on "
            "EMG evidence carry low confidence."
        )
    if not why:
        why.append(NO_FINDINGS_TEXT)

    prevention: list[str] = []
    if FindingKind.EMG_DROPOUT in kinds:
        prevention.append(RECOMMENDATION_EMG_ALARM)
    if FindingKind.POWER_LOSS in kinds and FindingKind.UNDER_LOAD_AT_FAILURE in kinds:
        prevention.append(RECOMMENDATION_FAILSAFE)

    return Report(
        timeline=timeline,
        what_happened=what,
        why=tuple(why),
        prevention=tuple(prevention),
        record_count=len(log.records),
        t_span=(log.t_start, log.t_end),
    )
