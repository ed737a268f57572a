"""Metric MDS by SMACOF majorization with classical-scaling initialization."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateDissimilarity
from .profiles import CorrelationMatrix

MAX_ITER = 512
TOL = 1e-9


def dissimilarity(C: np.ndarray, transform: str = "sqrt_two_one_minus_r") -> np.ndarray:
    if transform == "one_minus_r":
        D = 1.0 - C
    elif transform == "sqrt_two_one_minus_r":
        D = np.sqrt(np.maximum(2.0 * (1.0 - C), 0.0))
    else:
        raise ValueError(f"unknown dissimilarity transform {transform!r}")
    D = np.maximum(D, 0.0)
    D = (D + D.T) / 2.0
    np.fill_diagonal(D, 0.0)
    return D


def pairwise_distances(X: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - X[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))


def raw_stress(D: np.ndarray, X: np.ndarray) -> float:
    iu = np.triu_indices(len(D), 1)
    return float(((D[iu] - pairwise_distances(X)[iu]) ** 2).sum())


def stress1(D: np.ndarray, X: np.ndarray) -> float:
    """sqrt(sum (delta - d)^2 / sum d^2) over pairs i < j."""
    iu = np.triu_indices(len(D), 1)
    d = pairwise_distances(X)[iu]
    denom = float((d ** 2).sum())
    if denom == 0.0:
        return 0.0 if not D[iu].any() else math.inf
    return math.sqrt(float(((D[iu] - d) ** 2).sum()) / denom)


def classical_scaling(D: np.ndarray, dim: int = 2) -> np.ndarray:
    """Torgerson scaling: top eigenvectors of the double-centered -D^2/2."""
    n = len(D)
    J = np.eye(n) - np.ones((n, n)) / n
    B = -0.5 * J @ (D ** 2) @ J
    w, V = np.linalg.eigh(B)
    top = np.argsort(w)[::-1][:dim]
    X = V[:, top] * np.sqrt(np.maximum(w[top], 0.0))
    # fix eigenvector sign so the result is reproducible across LAPACK builds
    for k in range(dim):
        j = np.argmax(np.abs(X[:, k]))
        if X[j, k] < 0:
            X[:, k] = -X[:, k]
    return X


def guttman_transform(D: np.ndarray, X: np.ndarray) -> np.ndarray:
    n = len(D)
    d = pairwise_distances(X)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(d > 0, D / d, 0.0)
    B = -ratio
    np.fill_diagonal(B, 0.0)
    np.fill_diagonal(B, -B.sum(axis=1))
    return B @ X / n


def smacof(D: np.ndarray, init: np.ndarray, max_iter: int = MAX_ITER, tol: float = TOL):
    """Iterate Guttman transforms until raw stress improves by less than ``tol``.

    Returns (X, raw stress history); the history starts at the initial
    configuration and is non-increasing.
    """
    X = np.array(init, dtype=float)
    history = [raw_stress(D, X)]
    for _ in range(max_iter):
        X = guttman_transform(D, X)
        history.append(raw_stress(D, X))
        if history[-2] - history[-1] < tol:
            break
    return X, history


@dataclass(frozen=True)
class Embedding2D:
    P: np.ndarray  # m x 2
    stress1: float
    labels: tuple[str, ...]
    restart: int = 0
    history: tuple[float, ...] = field(default=(), repr=False)


def mds_embed(C: CorrelationMatrix | np.ndarray, seed: int = 0, restarts: int = 8,
              transform: str = "sqrt_two_one_minus_r", labels=None) -> Embedding2D:
    """Embed the valid values of ``C`` into the plane.

    Restart 0 starts from classical scaling, the rest from seeded random
    configurations; the lowest stress-1 wins, ties going to the lower
    restart index.
    """
    if isinstance(C, CorrelationMatrix):
        mat, labels = C.submatrix()
    else:
        mat = np.asarray(C, dtype=float)
        labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(mat)))
    if len(mat) < 3:
        raise DegenerateDissimilarity(f"need at least 3 valid values, got {len(mat)}")
    D = dissimilarity(mat, transform)
    n = len(D)
    if not D.any():
        return Embedding2D(np.zeros((n, 2)), 0.0, labels, 0, (0.0,))

    rng = np.random.default_rng(seed)
    scale = float(D[np.triu_indices(n, 1)].mean())
    best = None
    for r in range(max(1, restarts)):
        init = classical_scaling(D) if r == 0 else rng.standard_normal((n, 2)) * scale
        X, hist = smacof(D, init)
        s1 = stress1(D, X)
        if best is None or s1 < best.stress1:
            best = Embedding2D(X, s1, labels, r, tuple(hist))
    return best
