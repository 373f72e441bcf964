"""ebbkit: a flight-recorder toolkit for powered exoskeletons.

Capture 1 Hz telemetry over a framed wire protocol into append-only CSV
logs, simulate accident scenarios with injectable faults, and run the
forensic detectors an investigator needs to answer what happened, why,
and how to prevent it.
"""

from .core import (
    CHANNEL_RANGES,
    DECISION_CHANNELS,
    EMG_CHANNELS,
    POSITION_CHANNELS,
    TEMP_CHANNELS,
    TORQUE_CHANNELS,
    ChannelId,
    EbbRecord,
    SessionMeta,
    ValidationResult,
    Violation,
    ZeroClassification,
    canonical_channel_order,
    classify_zero,
    validate_record,
)
from .forensics import (
    Confidence,
    DetectorConfig,
    Finding,
    FindingKind,
    Report,
    Timeline,
    build_report,
    classify_under_load,
    detect_actuation,
    detect_emg_dropout,
    detect_power_loss,
)
from .sim import (
    FaultInjection,
    FaultKind,
    GroundTruth,
    Phase,
    PhaseKind,
    Scenario,
    SimParams,
    builtin_mock_accident,
    generate,
    load_scenario_file,
    simulate_session,
)
from .store import (
    CSV_HEADER,
    EbbLog,
    InvariantError,
    ParseError,
    check_log,
    export_json,
    parse_csv_bytes,
    read_csv,
    read_range,
    to_csv_bytes,
    write_csv,
)
from .wire import (
    CrcError,
    Frame,
    FrameKind,
    FrameOk,
    SeqGap,
    StreamDecoder,
    SyncLoss,
    collect,
    crc16,
    data_frame,
    decode_stream,
    encode_frame,
    extract_session_meta,
    heartbeat_frame,
    meta_frame,
)

__version__ = "0.1.0"
