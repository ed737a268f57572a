"""Centered value profiles and the between-value correlation matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import CODES, N_ITEMS, Questionnaire
from ..errors import TooFewSessions, ZeroVariance
from ..parser import ResponseMatrix
from .ranks import cronbach_alpha


def center_session(scores, questionnaire: Questionnaire) -> np.ndarray:
    """Per-value item mean minus the session's grand mean, in circle order."""
    s = np.asarray(scores, dtype=float)
    if s.shape != (N_ITEMS,):
        raise ValueError(f"expected {N_ITEMS} scores, got shape {s.shape}")
    idx = np.array(questionnaire.value_index_matrix())
    return s[idx].mean(axis=1) - s.mean()


def centered_profiles(dataset: ResponseMatrix) -> np.ndarray:
    """Shape (N, 19): one centered profile per session."""
    s = dataset.scores.astype(float)
    idx = np.array(dataset.questionnaire.value_index_matrix())
    return s[:, idx].mean(axis=2) - s.mean(axis=1, keepdims=True)


def mean_profile(dataset: ResponseMatrix) -> np.ndarray:
    return centered_profiles(dataset).mean(axis=0)


def item_alphas(dataset: ResponseMatrix) -> dict[str, float | None]:
    """Cronbach's alpha over the three items of each value; None when undefined."""
    X = dataset.X.astype(float)
    out: dict[str, float | None] = {}
    for code, series in zip(CODES, X):
        try:
            out[code] = cronbach_alpha(series) if dataset.n_sessions >= 2 else None
        except ZeroVariance:
            out[code] = None
    return out


@dataclass(frozen=True)
class CorrelationMatrix:
    C: np.ndarray  # 19 x 19, NaN wherever a zero-variance value is involved
    valid: np.ndarray  # bool mask per value
    labels: tuple[str, ...] = CODES

    def submatrix(self) -> tuple[np.ndarray, tuple[str, ...]]:
        keep = np.flatnonzero(self.valid)
        return self.C[np.ix_(keep, keep)], tuple(self.labels[i] for i in keep)


def correlation_from_profiles(profiles, labels=CODES) -> CorrelationMatrix:
    v = np.asarray(profiles, dtype=float)
    if v.shape[0] < 3:
        raise TooFewSessions(f"need at least 3 sessions, got {v.shape[0]}")
    centered = v - v.mean(axis=0)
    ss = (centered ** 2).sum(axis=0)
    valid = ss > 1e-12 * max(1.0, float(ss.max()))
    m = len(labels)
    C = np.full((m, m), np.nan)
    keep = np.flatnonzero(valid)
    if len(keep):
        z = centered[:, keep] / np.sqrt(ss[keep])
        sub = np.clip(z.T @ z, -1.0, 1.0)
        np.fill_diagonal(sub, 1.0)
        C[np.ix_(keep, keep)] = sub
    return CorrelationMatrix(C, valid, tuple(labels))


def correlation_matrix(dataset: ResponseMatrix) -> CorrelationMatrix:
    """Pearson correlations across sessions of the centered value scores."""
    return correlation_from_profiles(centered_profiles(dataset))
