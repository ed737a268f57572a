"""Orthogonal Procrustes alignment of two labelled planar configurations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateConfiguration


@dataclass(frozen=True)
class ProcrustesResult:
    aligned: np.ndarray  # source mapped into the target frame
    target: np.ndarray  # target after centering (and scaling)
    rotation: np.ndarray  # orthogonal 2x2, reflection allowed
    translation: np.ndarray  # subtracted from source before scaling/rotation
    scale: float  # applied to the centered source
    ssd: float


def _rms_radius(X: np.ndarray) -> float:
    return float(np.sqrt((X ** 2).sum(axis=1).mean()))


def procrustes_align(source, target, prescale: bool = True) -> ProcrustesResult:
    """Align ``source`` onto ``target`` and report the sum of squared differences.

    Rows must correspond. Both configurations are mean-centered; with
    ``prescale`` each is also scaled to unit root-mean-square radius so the
    SSD does not depend on the arbitrary scale of an MDS solution.
    """
    A = np.asarray(source, dtype=float)
    B = np.asarray(target, dtype=float)
    if A.shape != B.shape or A.ndim != 2:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    mu = A.mean(axis=0)
    A0 = A - mu
    B0 = B - B.mean(axis=0)
    ra, rb = _rms_radius(A0), _rms_radius(B0)
    if ra == 0 or rb == 0:
        raise DegenerateConfiguration("configuration collapses to a single point")
    s = 1.0
    if prescale:
        s = 1.0 / ra
        A0 = A0 * s
        B0 = B0 / rb
    U, _, Vt = np.linalg.svd(A0.T @ B0)
    R = U @ Vt
    aligned = A0 @ R
    ssd = float(((aligned - B0) ** 2).sum())
    return ProcrustesResult(aligned, B0, R, -mu, s, ssd)


def align_labelled(source, source_labels, target, target_labels, prescale: bool = True) -> tuple[ProcrustesResult, tuple[str, ...]]:
    """Procrustes on the labels both configurations share, in source order."""
    tindex = {lab: i for i, lab in enumerate(target_labels)}
    common = [lab for lab in source_labels if lab in tindex]
    sindex = {lab: i for i, lab in enumerate(source_labels)}
    S = np.asarray(source)[[sindex[lab] for lab in common]]
    T = np.asarray(target)[[tindex[lab] for lab in common]]
    return procrustes_align(S, T, prescale), tuple(common)
