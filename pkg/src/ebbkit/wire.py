"""Framed wire protocol for the telemetry link, and the 1 Hz collector.

Frame layout (all multi-byte integers little-endian except the CRC):

    0xEB 0xB0 | kind (1) | seq (4) | t (4) | len (2) | payload | crc (2, BE)

The CRC is CRC-16/CCITT-FALSE (poly 0x1021, init 0xFFFF, no reflection,
no final XOR) over kind..payload.  DATA payloads are 48 bytes: the 12
channel values as 32-bit LE IEEE-754 floats in canonical order.
HEARTBEAT payloads are empty; META payloads carry session metadata as
UTF-8 JSON.

The decoder tolerates arbitrary input: corruption surfaces as events
(CrcError, SyncLoss, SeqGap), never as exceptions, and a frame is only
ever emitted after its CRC verifies.  The collector turns the accepted
frames into exactly one record per second, zero-filling seconds in
which no telemetry arrived.
"""

from __future__ import annotations

import enum
import json
import logging
import struct
from dataclasses import dataclass
from typing import Iterable, Union

from .core import (
    DEFAULT_META,
    ChannelId,
    EbbRecord,
    SessionMeta,
    canonical_channel_order,
)

logger = logging.getLogger(__name__)

SYNC = b"\xeb\xb0"
DATA_PAYLOAD_LEN = 48  # 12 channels x 4-byte float
_HEADER = struct.Struct("<BII H")  # kind, seq, t, len
_PAYLOAD_F32 = struct.Struct("<12f")


class FrameKind(enum.IntEnum):
    DATA = 0x01
    HEARTBEAT = 0x02
    META = 0x03


_CRC_POLY = 0x1021
_CRC_TABLE = []
for _byte in range(256):
    _c = _byte << 8
    for _ in range(8):
        _c = ((_c << 1) ^ _CRC_POLY if _c & 0x8000 else _c << 1) & 0xFFFF
    _CRC_TABLE.append(_c)


def crc16(data: bytes, init: int = 0xFFFF) -> int:
    """CRC-16/CCITT-FALSE, table-driven.  crc16(b"123456789") == 0x29B1."""
    crc = init
    for b in data:
        crc = ((crc << 8) & 0xFFFF) ^ _CRC_TABLE[(crc >> 8) ^ b]
    return crc


@dataclass(frozen=True)
class Frame:
    kind: FrameKind
    seq: int
    t: int
    payload: bytes = b""

    def channel_values(self) -> dict[ChannelId, float]:
        """Unpack a DATA payload into the channel map."""
        if self.kind is not FrameKind.DATA:
            raise ValueError(f"not a DATA frame: {self.kind!r}")
        floats = _PAYLOAD_F32.unpack(self.payload)
        return dict(zip(canonical_channel_order(), floats))

    def session_meta(self) -> SessionMeta:
        if self.kind is not FrameKind.META:
            raise ValueError(f"not a META frame: {self.kind!r}")
        return SessionMeta.from_dict(json.loads(self.payload.decode("utf-8")))


def data_frame(seq: int, t: int, values: dict[ChannelId, float]) -> Frame:
    payload = _PAYLOAD_F32.pack(*(values[ch] for ch in canonical_channel_order()))
    return Frame(FrameKind.DATA, seq, t, payload)


def heartbeat_frame(seq: int, t: int) -> Frame:
    return Frame(FrameKind.HEARTBEAT, seq, t)


def meta_frame(seq: int, t: int, meta: SessionMeta) -> Frame:
    payload = json.dumps(meta.to_dict(), separators=(",", ":")).encode("utf-8")
    return Frame(FrameKind.META, seq, t, payload)


def _expected_payload_len(kind: FrameKind, n: int) -> bool:
    if kind is FrameKind.DATA:
        return n == DATA_PAYLOAD_LEN
    if kind is FrameKind.HEARTBEAT:
        return n == 0
    return True  # META carries variable-length JSON


def encode_frame(f: Frame) -> bytes:
    """Serialize a frame; deterministic byte-for-byte."""
    if not (0 <= f.seq <= 0xFFFFFFFF and 0 <= f.t <= 0xFFFFFFFF):
        raise ValueError(f"seq/t out of u32 range: seq={f.seq} t={f.t}")
    if len(f.payload) > 0xFFFF:
        raise ValueError(f"payload too long: {len(f.payload)}")
    if not _expected_payload_len(f.kind, len(f.payload)):
        raise ValueError(
            f"payload length {len(f.payload)} inconsistent with {f.kind.name}"
        )
    body = _HEADER.pack(int(f.kind), f.seq, f.t, len(f.payload)) + f.payload
    return SYNC + body + struct.pack(">H", crc16(body))


# -- Decode events -----------------------------------------------------------


@dataclass(frozen=True)
class FrameOk:
    frame: Frame


@dataclass(frozen=True)
class CrcError:
    offset: int  # stream offset of the sync word of the rejected frame


@dataclass(frozen=True)
class SyncLoss:
    skipped: int  # bytes discarded while hunting for a sync word


@dataclass(frozen=True)
class SeqGap:
    expected: int
    got: int


DecodeEvent = Union[FrameOk, CrcError, SyncLoss, SeqGap]

_MIN_FRAME = len(SYNC) + _HEADER.size + 2  # sync + header + crc (empty payload)


class StreamDecoder:
    """Incremental frame decoder.

    Single-owner and stateful: feed byte chunks in arrival order, collect
    events, call ``finish()`` when the stream closes to flush trailing
    garbage as a SyncLoss.  After a CRC failure the decoder resumes
    scanning just past the failed sync word, so the discarded frame body
    is itself searched for the next sync.  Sequence gaps are tracked per
    frame kind and reported only in the forward direction.
    """

    def __init__(self) -> None:
        self._buf = bytearray()
        self._offset = 0  # stream offset of _buf[0]
        self._skipped = 0  # garbage bytes since the last event
        self._last_seq: dict[FrameKind, int] = {}

    def feed(self, data: bytes) -> list[DecodeEvent]:
        self._buf.extend(data)
        events: list[DecodeEvent] = []
        while True:
            progressed = self._step(events, final=False)
            if not progressed:
                return events

    def finish(self) -> list[DecodeEvent]:
        """Flush: anything still buffered can no longer become a frame."""
        events: list[DecodeEvent] = []
        while self._step(events, final=True):
            pass
        self._skipped += len(self._buf)
        self._drop(len(self._buf))
        self._flush_skipped(events)
        return events

    # one parse attempt; returns False when more input is needed
    def _step(self, events: list[DecodeEvent], final: bool) -> bool:
        i = self._buf.find(SYNC)
        if i < 0:
            # keep a trailing first sync byte: it may complete later
            keep = 1 if (not final and self._buf.endswith(SYNC[:1])) else 0
            n = len(self._buf) - keep
            self._skipped += n
            self._drop(n)
            return False
        if i > 0:
            self._skipped += i
            self._drop(i)

        if len(self._buf) < len(SYNC) + _HEADER.size:
            if final:
                return self._reject_sync()
            return False
        kind_b, seq, t, plen = _HEADER.unpack_from(self._buf, len(SYNC))
        total = _MIN_FRAME + plen
        if len(self._buf) < total:
            if final:
                return self._reject_sync()
            return False

        body = bytes(self._buf[len(SYNC):len(SYNC) + _HEADER.size + plen])
        (crc_got,) = struct.unpack_from(">H", self._buf, total - 2)
        frame_ok = crc_got == crc16(body)
        if frame_ok:
            try:
                kind = FrameKind(kind_b)
            except ValueError:
                frame_ok = False
            else:
                frame_ok = _expected_payload_len(kind, plen)
        if not frame_ok:
            # report at the sync word, then rescan from just past it
            self._flush_skipped(events)
            events.append(CrcError(self._offset))
            self._skipped += len(SYNC)
            self._drop(len(SYNC))
            return True

        self._flush_skipped(events)
        last = self._last_seq.get(kind)
        if last is not None and seq > last + 1:
            events.append(SeqGap(expected=last + 1, got=seq))
        if last is None or seq > last:
            self._last_seq[kind] = seq
        events.append(FrameOk(Frame(kind, seq, t, body[_HEADER.size:])))
        self._drop(total)
        return True

    def _reject_sync(self) -> bool:
        # final flush hit a sync word with a truncated frame behind it
        self._skipped += len(SYNC)
        self._drop(len(SYNC))
        return True

    def _drop(self, n: int) -> None:
        del self._buf[:n]
        self._offset += n

    def _flush_skipped(self, events: list[DecodeEvent]) -> None:
        if self._skipped:
            events.append(SyncLoss(self._skipped))
            self._skipped = 0


def decode_stream(data: bytes) -> list[DecodeEvent]:
    """Decode a complete byte stream in one call."""
    dec = StreamDecoder()
    events = dec.feed(data)
    events.extend(dec.finish())
    return events


# -- Collector ---------------------------------------------------------------

_ZERO_VALUES = {ch: 0.0 for ch in canonical_channel_order()}


def collect(events: Iterable[DecodeEvent], session_len: int) -> list[EbbRecord]:
    """Assemble accepted frames into exactly one record per second.

    Seconds with a DATA frame carry its values; silent seconds become
    all-zero records flagged ``synthesized``.  The heartbeat flag is set
    only when both a heartbeat and telemetry arrived for that second, so
    zero-filled records always read hb=False.  Duplicate DATA frames for
    one second keep the first and log a warning.  Record seq is the 1 Hz
    record counter, independent of wire-level frame sequence numbers.
    """
    data_by_t: dict[int, Frame] = {}
    hb_seconds: set[int] = set()
    for ev in events:
        if not isinstance(ev, FrameOk):
            continue
        f = ev.frame
        if f.kind is FrameKind.DATA and 0 <= f.t < session_len:
            if f.t in data_by_t:
                logger.warning(
                    "duplicate DATA frame for t=%d (seq=%d); keeping the first",
                    f.t, f.seq,
                )
            else:
                data_by_t[f.t] = f
        elif f.kind is FrameKind.HEARTBEAT and 0 <= f.t < session_len:
            hb_seconds.add(f.t)

    records = []
    for t in range(session_len):
        f = data_by_t.get(t)
        if f is None:
            records.append(
                EbbRecord(seq=t, t=t, values=_ZERO_VALUES, hb=False,
                          synthesized=True)
            )
        else:
            records.append(
                EbbRecord(seq=t, t=t, values=f.channel_values(),
                          hb=t in hb_seconds, synthesized=False)
            )
    return records


def extract_session_meta(events: Iterable[DecodeEvent]) -> SessionMeta:
    """Session metadata from the first META frame, or defaults."""
    for ev in events:
        if isinstance(ev, FrameOk) and ev.frame.kind is FrameKind.META:
            try:
                return ev.frame.session_meta()
            except (ValueError, KeyError, json.JSONDecodeError):
                logger.warning("unreadable META payload; using defaults")
                return DEFAULT_META
    return DEFAULT_META
