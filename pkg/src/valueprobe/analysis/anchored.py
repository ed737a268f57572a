"""Anchored score curve and its single-harmonic sine fit."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import CIRCLE, N_VALUES, ValueId
from ..errors import NoAnchoredSessions


@dataclass(frozen=True)
class AnchoredCurve:
    y: np.ndarray  # length 19, index = circular offset from the anchor
    counts: np.ndarray  # samples per offset
    n_sessions: int

    def argmax(self) -> int:
        return int(np.argmax(self.y))

    def argmin(self) -> int:
        return int(np.argmin(self.y))


def anchored_curve(profiles, anchors: Sequence[str | ValueId | None]) -> AnchoredCurve:
    """Average centered profiles after rotating each so its anchor sits at offset 0.

    ``profiles`` is (N, 19) in circle order; sessions whose anchor is None
    or not one of the 19 values are skipped.
    """
    P = np.asarray(profiles, dtype=float)
    total = np.zeros(N_VALUES)
    counts = np.zeros(N_VALUES, dtype=int)
    used = 0
    for row, anchor in zip(P, anchors):
        if anchor is None:
            continue
        try:
            a = ValueId.parse(anchor)
        except ValueError:
            continue
        shift = CIRCLE.position(a)
        # offset o holds the value at circle position (anchor + o) mod 19
        total += np.roll(row, -shift)
        counts += 1
        used += 1
    if used == 0:
        raise NoAnchoredSessions("no session carries a value anchor")
    return AnchoredCurve(total / counts, counts, used)


@dataclass(frozen=True)
class SineFit:
    amplitude: float
    phase: float
    offset: float
    r_squared: float

    def __call__(self, o) -> np.ndarray:
        o = np.asarray(o, dtype=float)
        return self.offset + self.amplitude * np.cos(2 * math.pi * o / N_VALUES - self.phase)


def fit_sine(curve: AnchoredCurve | Sequence[float]) -> SineFit:
    """Least squares fit of offset + amplitude * cos(2*pi*o/19 - phase).

    Solved linearly on the constant/cos/sin basis, then folded so the
    amplitude is non-negative and the phase lies in (-pi, pi].
    """
    y = np.asarray(curve.y if isinstance(curve, AnchoredCurve) else curve, dtype=float)
    if y.shape != (N_VALUES,) or not np.all(np.isfinite(y)):
        raise ValueError(f"need {N_VALUES} finite values")
    o = np.arange(N_VALUES)
    w = 2 * math.pi * o / N_VALUES
    basis = np.column_stack([np.ones(N_VALUES), np.cos(w), np.sin(w)])
    (c, a, b), *_ = np.linalg.lstsq(basis, y, rcond=None)
    amplitude = math.hypot(a, b)
    phase = math.atan2(b, a) if amplitude > 1e-15 else 0.0
    if phase <= -math.pi:
        phase += 2 * math.pi
    resid = y - basis @ np.array([c, a, b])
    sst = float(((y - y.mean()) ** 2).sum())
    r2 = 0.0 if sst == 0 else 1.0 - float((resid ** 2).sum()) / sst
    return SineFit(float(amplitude), float(phase), float(c), r2)
