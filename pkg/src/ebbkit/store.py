"""Append-only CSV persistence for telemetry logs, plus the JSON export.

One session is one ``.ebb.csv`` file.  The layout is fixed so files are
byte-identical across platforms: LF line endings, UTF-8, the exact
header below, reals in their shortest round-trip decimal form, and
hb/synth as 0/1.  Session metadata travels in a ``.meta.json`` sidecar
so the CSV itself stays pure sample data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .core import (
    DEFAULT_META,
    ChannelId,
    EbbRecord,
    SessionMeta,
    canonical_channel_order,
)

CSV_HEADER = (
    "seq,t,emg_lb,emg_lt,emg_rb,emg_rt,dec_l,dec_r,"
    "pos_l,pos_r,torque_l,torque_r,temp_l,temp_r,hb,synth"
)
_COLUMNS = CSV_HEADER.split(",")
LOG_SUFFIX = ".ebb.csv"


class ParseError(Exception):
    """Malformed file: bad header, bad field, wrong column count."""


class InvariantError(Exception):
    """Structurally valid file whose content breaks log ordering rules."""


@dataclass(frozen=True)
class EbbLog:
    """One session: metadata plus the ordered 1 Hz record list."""

    meta: SessionMeta
    records: tuple[EbbRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    @property
    def t_start(self) -> int:
        return self.records[0].t if self.records else 0

    @property
    def t_end(self) -> int:
        """One past the last record's t (half-open session bound)."""
        return self.records[-1].t + 1 if self.records else 0


def check_log(log: EbbLog) -> None:
    """Raise InvariantError unless t steps by exactly 1 and seq increases."""
    prev: EbbRecord | None = None
    for r in log.records:
        if prev is not None:
            if r.t == prev.t + 1:
                pass
            elif r.t > prev.t + 1:
                raise InvariantError(f"gap at t={prev.t + 1}")
            else:
                raise InvariantError(f"non-monotone t: {prev.t} then {r.t}")
            if r.seq <= prev.seq:
                raise InvariantError(
                    f"seq not strictly increasing: {prev.seq} then {r.seq}"
                )
        prev = r


def _fmt(v: float) -> str:
    # shortest decimal that round-trips; integral values drop the ".0"
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def to_csv_bytes(log: EbbLog) -> bytes:
    check_log(log)
    order = canonical_channel_order()
    lines = [CSV_HEADER]
    for r in log.records:
        fields = [str(r.seq), str(r.t)]
        fields.extend(_fmt(r.values[ch]) for ch in order)
        fields.append("1" if r.hb else "0")
        fields.append("1" if r.synthesized else "0")
        lines.append(",".join(fields))
    return ("\n".join(lines) + "\n").encode("utf-8")


def meta_sidecar_path(csv_path: str | Path) -> Path:
    p = Path(csv_path)
    if p.name.endswith(".csv"):
        return p.with_name(p.name[: -len(".csv")] + ".meta.json")
    return p.with_name(p.name + ".meta.json")


def write_csv(log: EbbLog, destination: str | Path) -> int:
    """Write the log (and its metadata sidecar); returns CSV byte count."""
    data = to_csv_bytes(log)
    dest = Path(destination)
    try:
        dest.write_bytes(data)
        meta_sidecar_path(dest).write_text(
            json.dumps(log.meta.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
    except OSError as e:
        raise OSError(f"writing {dest}: {e}") from e
    return len(data)


def parse_csv_bytes(data: bytes, meta: SessionMeta = DEFAULT_META) -> EbbLog:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"not UTF-8: {e}") from e
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty file: missing header")

    header_cols = lines[0].split(",")
    if header_cols != _COLUMNS:
        missing = [c for c in _COLUMNS if c not in header_cols]
        extra = [c for c in header_cols if c not in _COLUMNS]
        detail = []
        if missing:
            detail.append(f"missing column(s) {', '.join(missing)}")
        if extra:
            detail.append(f"unknown column(s) {', '.join(extra)}")
        if not detail:
            detail.append("columns out of order")
        raise ParseError(f"line 1: bad header: {'; '.join(detail)}")

    order = canonical_channel_order()
    records: list[EbbRecord] = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(_COLUMNS):
            raise ParseError(
                f"line {lineno}: expected {len(_COLUMNS)} columns, "
                f"got {len(fields)}"
            )
        records.append(_parse_row(fields, lineno, order))

    log = EbbLog(meta=meta, records=tuple(records))
    check_log(log)
    return log


def _parse_row(
    fields: list[str], lineno: int, order: tuple[ChannelId, ...]
) -> EbbRecord:
    def fail(col: str, value: str, why: str) -> ParseError:
        return ParseError(f"line {lineno}: column {col}: {why} {value!r}")

    try:
        seq = int(fields[0])
    except ValueError:
        raise fail("seq", fields[0], "invalid integer") from None
    try:
        t = int(fields[1])
    except ValueError:
        raise fail("t", fields[1], "invalid integer") from None

    values: dict[ChannelId, float] = {}
    for ch, raw in zip(order, fields[2:14]):
        try:
            values[ch] = float(raw)
        except ValueError:
            raise fail(ch.value, raw, "invalid number") from None

    flags = []
    for col, raw in (("hb", fields[14]), ("synth", fields[15])):
        if raw not in ("0", "1"):
            raise fail(col, raw, "flag must be 0 or 1, got")
        flags.append(raw == "1")

    return EbbRecord(seq=seq, t=t, values=values, hb=flags[0],
                     synthesized=flags[1])


def read_csv(source: str | Path) -> EbbLog:
    """Load a log file; metadata comes from the sidecar when present."""
    src = Path(source)
    try:
        data = src.read_bytes()
    except OSError as e:
        raise OSError(f"reading {src}: {e}") from e

    meta = DEFAULT_META
    sidecar = meta_sidecar_path(src)
    if sidecar.exists():
        try:
            meta = SessionMeta.from_dict(
                json.loads(sidecar.read_text(encoding="utf-8"))
            )
        except (ValueError, KeyError) as e:
            raise ParseError(f"{sidecar}: bad metadata sidecar: {e}") from e
    return parse_csv_bytes(data, meta=meta)


def read_range(log: EbbLog, t0: int, t1: int) -> tuple[EbbRecord, ...]:
    """Records with t in the half-open interval [t0, t1)."""
    if t0 < 0 or t0 > t1:
        raise ValueError(f"bad range: [{t0}, {t1})")
    if not log.records or t1 <= log.t_start or t0 >= log.t_end:
        return ()
    # t steps by exactly 1, so the slice is pure index arithmetic
    first = log.t_start
    i0 = max(0, t0 - first)
    i1 = min(len(log.records), t1 - first)
    return log.records[i0:i1]


def record_row(r: EbbRecord) -> list:
    """One record as a JSON-ready array in CSV column order (hb/synth 0/1)."""
    row: list = [r.seq, r.t]
    row.extend(r.values[ch] for ch in canonical_channel_order())
    row.append(1 if r.hb else 0)
    row.append(1 if r.synthesized else 0)
    return row


def export_json(log: EbbLog, findings: Sequence[Any] = ()) -> dict:
    """Single UI-facing document: meta, channel names, rows, findings.

    Rows are arrays in CSV column order (hb/synth as 0/1).  Findings may
    be forensics Finding objects or equivalent dicts; their intervals
    must lie within the log.
    """
    order = canonical_channel_order()
    finding_dicts = []
    for f in findings:
        d = f.to_dict() if hasattr(f, "to_dict") else dict(f)
        if d["t0"] < log.t_start or d["t1"] > log.t_end:
            raise ValueError(
                f"finding interval [{d['t0']}, {d['t1']}) outside log "
                f"[{log.t_start}, {log.t_end})"
            )
        finding_dicts.append(d)

    rows = [record_row(r) for r in log.records]

    return {
        "meta": log.meta.to_dict(),
        "channels": [ch.value for ch in order],
        "records": rows,
        "findings": finding_dicts,
    }
