"""HTTP service exposing one recorded log to investigation tooling.

The service is read-mostly: it loads the log once at startup, runs the
detectors once, and serves slices of both.  The single mutable resource
is the annotation list, persisted as JSON lines next to the log so the
log file itself stays append-only and untouched.

Error mapping: malformed or out-of-bounds query parameters are 400,
unknown paths are 404, and a structurally valid annotation that fails
semantic checks (empty interval, outside the log, unknown channel) is
422.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .core import (
    CHANNEL_RANGES,
    DECISION_CHANNELS,
    EMG_CHANNELS,
    POSITION_CHANNELS,
    TEMP_CHANNELS,
    TORQUE_CHANNELS,
    canonical_channel_order,
)
from .forensics import DetectorConfig, build_report
from .store import CSV_HEADER, EbbLog, read_csv, read_range, record_row

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8790

_GROUPS = [
    (EMG_CHANNELS, "emg", "counts"),
    (DECISION_CHANNELS, "decision", "flag"),
    (POSITION_CHANNELS, "position", "deg"),
    (TORQUE_CHANNELS, "torque", "N·m"),
    (TEMP_CHANNELS, "temperature", "degC"),
]


class ChannelInfo(BaseModel):
    id: str
    group: str
    unit: str
    lo: float
    hi: float


class AnnotationIn(BaseModel):
    t0: int
    t1: int
    text: str
    channel: Optional[str] = None


class Annotation(AnnotationIn):
    id: int


def annotations_sidecar_path(csv_path: str | Path) -> Path:
    """x.ebb.csv -> x.ebb.annotations.jsonl (suffix swap, not append)."""
    p = Path(csv_path)
    name = p.name
    if name.endswith(".ebb.csv"):
        name = name[: -len(".csv")] + ".annotations.jsonl"
    else:
        name = name + ".annotations.jsonl"
    return p.with_name(name)


class AnnotationStore:
    """Append-only JSON-lines store with serialized writes."""

    def __init__(self, path: Path):
        self._path = path
        self._lock = threading.Lock()
        self._items: list[Annotation] = []
        if path.exists():
            for lineno, line in enumerate(
                path.read_text(encoding="utf-8").splitlines(), start=1
            ):
                if not line.strip():
                    continue
                try:
                    self._items.append(Annotation(**json.loads(line)))
                except (json.JSONDecodeError, TypeError, ValueError) as e:
                    raise ValueError(f"{path}:{lineno}: bad annotation: {e}")

    def list(self) -> list[Annotation]:
        with self._lock:
            return list(self._items)

    def add(self, item: AnnotationIn) -> Annotation:
        with self._lock:
            next_id = max((a.id for a in self._items), default=0) + 1
            ann = Annotation(id=next_id, **item.model_dump())
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(ann.model_dump(), sort_keys=True) + "\n")
            self._items.append(ann)
            return ann


def _channel_infos() -> list[ChannelInfo]:
    infos = []
    for channels, group, unit in _GROUPS:
        for ch in channels:
            lo, hi = CHANNEL_RANGES[ch]
            infos.append(ChannelInfo(id=ch.value, group=group, unit=unit,
                                     lo=lo, hi=hi))
    order = {ch.value: i for i, ch in enumerate(canonical_channel_order())}
    infos.sort(key=lambda c: order[c.id])
    return infos


def create_app(
    log_path: str | Path,
    cfg: DetectorConfig = DetectorConfig(),
) -> FastAPI:
    """Build the app around one log file; loads and analyzes it eagerly."""
    log: EbbLog = read_csv(log_path)
    report = build_report(log, cfg=cfg)
    annotations = AnnotationStore(annotations_sidecar_path(log_path))
    channel_names = [ch.value for ch in canonical_channel_order()]

    app = FastAPI(title="ebbkit log service", docs_url=None, redoc_url=None)
    # Loopback-only service for a local viewer; origin list stays open.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: RequestValidationError):
        errs = exc.errors()
        # Query-string problems are the client's URL, not its payload.
        status = 400 if errs and all(
            e.get("loc", ("",))[0] == "query" for e in errs
        ) else 422
        return JSONResponse(status_code=status,
                            content={"detail": jsonable_encoder(errs)})

    @app.get("/api/meta")
    def get_meta() -> dict:
        return {
            "session": log.meta.to_dict(),
            "t0": log.t_start,
            "t1": log.t_end,
            "records": len(log.records),
            "columns": CSV_HEADER.split(","),
            "channels": [c.model_dump() for c in _channel_infos()],
        }

    @app.get("/api/log")
    def get_log(
        from_t: Optional[int] = Query(default=None, alias="from"),
        to_t: Optional[int] = Query(default=None, alias="to"),
    ) -> dict:
        t0 = log.t_start if from_t is None else from_t
        t1 = log.t_end if to_t is None else to_t
        if t0 > t1 or t0 < log.t_start or t1 > log.t_end:
            raise HTTPException(
                status_code=400,
                detail=f"range [{t0}, {t1}) outside log "
                       f"[{log.t_start}, {log.t_end})",
            )
        rows = [record_row(r) for r in read_range(log, t0, t1)]
        return {
            "from": t0,
            "to": t1,
            "columns": CSV_HEADER.split(","),
            "rows": rows,
        }

    @app.get("/api/findings")
    def get_findings() -> dict:
        return {
            "config": cfg.to_dict(),
            "findings": [f.to_dict() for f in report.timeline.findings],
            "report": report.to_dict(),
        }

    @app.get("/api/annotations")
    def get_annotations() -> list[Annotation]:
        return annotations.list()

    @app.post("/api/annotations", status_code=201)
    def post_annotation(item: AnnotationIn) -> Annotation:
        if item.t0 >= item.t1:
            raise HTTPException(422, detail=f"empty interval [{item.t0}, {item.t1})")
        if item.t0 < log.t_start or item.t1 > log.t_end:
            raise HTTPException(
                422,
                detail=f"interval [{item.t0}, {item.t1}) outside log "
                       f"[{log.t_start}, {log.t_end})",
            )
        if item.channel is not None and item.channel not in channel_names:
            raise HTTPException(422, detail=f"unknown channel {item.channel!r}")
        if not item.text.strip():
            raise HTTPException(422, detail="annotation text is empty")
        return annotations.add(item)

    return app


def serve(
    log_path: str | Path,
    host: str = DEFAULT_HOST,
    port: int = DEFAULT_PORT,
    cfg: DetectorConfig = DetectorConfig(),
) -> None:
    """Blocking: run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(log_path, cfg), host=host, port=port,
                log_level="warning")
