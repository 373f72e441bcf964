"""Independent reference implementations used to cross-check the package.

These are deliberately written with different techniques than the code
under test (bit-serial CRC vs table-driven, numpy window scan vs
monotonic deques, direct formula vs simulator pipeline) so agreement
between the two routes is meaningful.  Keep them dumb and obvious.
"""

from __future__ import annotations

import math

import numpy as np


def crc16_bitwise(data: bytes) -> int:
    """CRC-16/CCITT-FALSE one bit at a time: poly 0x1021, init 0xFFFF,
    no reflection, no final xor."""
    crc = 0xFFFF
    for byte in data:
        crc ^= byte << 8
        for _ in range(8):
            if crc & 0x8000:
                crc = ((crc << 1) ^ 0x1021) & 0xFFFF
            else:
                crc = (crc << 1) & 0xFFFF
    return crc


def elbow_torque_direct(theta_deg: float, payload_kg: float,
                        forearm_kg: float = 1.5,
                        load_lever_m: float = 0.30,
                        forearm_lever_m: float = 0.15,
                        g: float = 9.81) -> float:
    """Gravity torque about the elbow, straight from the lever model."""
    moment = payload_kg * load_lever_m + forearm_kg * forearm_lever_m
    return moment * g * math.sin(math.radians(theta_deg))


def flat_emg_intervals_bruteforce(
    emg: np.ndarray,
    pos: np.ndarray,
    window: int,
    flat_eps: float,
    pos_delta: float,
) -> list[tuple[int, int]]:
    """All-channel flat windows (range < eps), merged, gated on position.

    emg: (n, k) array of EMG samples; pos: (n, m) positions.  Returns
    half-open index intervals.  Quadratic-ish and vectorized: every
    window is materialized, no incremental tricks.
    """
    n = emg.shape[0]
    if n < window:
        return []
    views = np.lib.stride_tricks.sliding_window_view(emg, window, axis=0)
    quiet = (views.max(axis=2) - views.min(axis=2) < flat_eps).all(axis=1)

    intervals: list[tuple[int, int]] = []
    a = 0
    starts = quiet.shape[0]
    while a < starts:
        if not quiet[a]:
            a += 1
            continue
        b = a
        while b + 1 < starts and quiet[b + 1]:
            b += 1
        i0, i1 = a, b + window
        seg = pos[i0:i1]
        if (seg.max(axis=0) - seg.min(axis=0) > pos_delta).any():
            intervals.append((i0, i1))
        a = b + 1
    return intervals
