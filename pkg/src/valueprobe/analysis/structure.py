"""Reference structures: the ideal circumplex and its planar embedding."""

from __future__ import annotations

import csv
import functools
import json
from pathlib import Path

import numpy as np

from ..core import CIRCLE, CODES, ValueId
from ..errors import SchemaViolation
from .mds import Embedding2D, mds_embed
from .profiles import CorrelationMatrix

REFERENCE_SEED = 0


def ideal_circumplex_correlation() -> CorrelationMatrix:
    """C[i, j] = cos(angle_i - angle_j) over the 19 circle positions."""
    ang = np.array([CIRCLE.angle(v) for v in CIRCLE])
    C = np.cos(ang[:, None] - ang[None, :])
    return CorrelationMatrix(C, np.ones(len(ang), dtype=bool), CODES)


@functools.lru_cache(maxsize=4)
def _ideal_reference(restarts: int) -> Embedding2D:
    return mds_embed(ideal_circumplex_correlation(), seed=REFERENCE_SEED, restarts=restarts)


def human_reference_embedding(path: str | Path | None = None, restarts: int = 8) -> Embedding2D:
    """Human comparison configuration.

    Without a path this is the MDS of the ideal circumplex correlation
    matrix. A path may point to a CSV with columns value,x,y or a JSON
    object mapping value codes to [x, y].
    """
    if path is None:
        return _ideal_reference(restarts)
    path = Path(path)
    if path.suffix.lower() == ".json":
        doc = json.loads(path.read_text("utf-8"))
        pairs = [(ValueId.parse(k).name, v) for k, v in doc.items()]
    else:
        with open(path, newline="", encoding="utf-8") as fh:
            pairs = [(ValueId.parse(r["value"]).name, (r["x"], r["y"])) for r in csv.DictReader(fh)]
    coords = {k: (float(x), float(y)) for k, (x, y) in pairs}
    missing = [c for c in CODES if c not in coords]
    if missing:
        raise SchemaViolation(f"human configuration lacks {', '.join(missing)}")
    return Embedding2D(np.array([coords[c] for c in CODES]), float("nan"), CODES)


def circular_order_agreement(P, labels) -> int:
    """Count values whose two angular neighbours in ``P`` are their circle neighbours.

    Angles are measured about the centroid, so the count is unchanged by
    rotation, reflection, translation and scaling of the configuration.
    """
    P = np.asarray(P, dtype=float)
    labels = list(labels)
    present = [v.name for v in CIRCLE if v.name in labels]
    m = len(present)
    circ_pos = {code: i for i, code in enumerate(present)}
    c = P - P.mean(axis=0)
    order = np.argsort(np.arctan2(c[:, 1], c[:, 0]), kind="mergesort")
    emb = [labels[i] for i in order]
    hits = 0
    for k, code in enumerate(emb):
        got = {emb[(k - 1) % m], emb[(k + 1) % m]}
        p = circ_pos[code]
        want = {present[(p - 1) % m], present[(p + 1) % m]}
        hits += got == want
    return hits
