import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from valueprobe.analysis import (
    CorrelationMatrix,
    align_labelled,
    anchored_curve,
    center_session,
    centered_profiles,
    circular_order_agreement,
    classical_scaling,
    correlation_from_profiles,
    dissimilarity,
    fit_sine,
    human_reference_embedding,
    ideal_circumplex_correlation,
    item_alphas,
    mds_embed,
    procrustes_align,
    smacof,
    stress1,
)
from valueprobe.core import CIRCLE, CODES, ValueId, load_questionnaire
from valueprobe.errors import (
    DegenerateConfiguration,
    DegenerateDissimilarity,
    NoAnchoredSessions,
    SchemaViolation,
    TooFewSessions,
)
from valueprobe.parser import ResponseMatrix

Q = load_questionnaire()
ANGLES = np.array([CIRCLE.angle(v) for v in CIRCLE])


# -- profiles -------------------------------------------------------------------


@given(st.lists(st.integers(1, 5), min_size=57, max_size=57))
@settings(max_examples=50)
def test_centered_profile_sums_to_zero(scores):
    prof = center_session(scores, Q)
    assert prof.shape == (19,)
    assert abs(prof.sum()) < 1e-9
    assert np.allclose(prof, center_session([s + 1 for s in scores], Q))


def test_centering_removes_scale_use(questionnaire):
    rng = np.random.default_rng(0)
    base = rng.integers(1, 5, 57)
    ds = ResponseMatrix(np.vstack([base, base + 1, base + 2]), questionnaire)
    P = centered_profiles(ds)
    assert np.allclose(P[0], P[1]) and np.allclose(P[1], P[2])


def test_correlation_matrix_properties():
    rng = np.random.default_rng(1)
    P = rng.standard_normal((40, 19))
    P[:, 4] = 0.25  # zero-variance value
    C = correlation_from_profiles(P)
    assert not C.valid[4] and C.valid.sum() == 18
    assert np.isnan(C.C[4]).all() and np.isnan(C.C[:, 4]).all()
    sub, labels = C.submatrix()
    assert "AC" not in labels and sub.shape == (18, 18)
    assert np.allclose(sub, sub.T) and np.allclose(np.diag(sub), 1.0)
    assert np.all(np.abs(sub) <= 1.0)
    ref = np.corrcoef(np.delete(P, 4, axis=1), rowvar=False)
    assert np.allclose(sub, ref)


def test_correlation_needs_three_sessions():
    with pytest.raises(TooFewSessions):
        correlation_from_profiles(np.zeros((2, 19)))


def test_item_alphas_handle_constant_items(questionnaire):
    ds = ResponseMatrix(np.full((5, 57), 3), questionnaire)
    assert set(item_alphas(ds).values()) == {None}


# -- MDS ----------------------------------------------------------------------


def test_ideal_circumplex_embeds_exactly():
    emb = mds_embed(ideal_circumplex_correlation(), seed=0)
    assert emb.stress1 <= 0.05
    assert circular_order_agreement(emb.P, emb.labels) == 19


def test_one_minus_r_transform_still_available():
    emb = mds_embed(ideal_circumplex_correlation(), transform="one_minus_r", restarts=2)
    assert emb.stress1 > 0.1  # the concave transform cannot be embedded in the plane
    with pytest.raises(ValueError):
        dissimilarity(np.eye(3), "bogus")


@given(st.integers(0, 10**6))
@settings(max_examples=15, deadline=None)
def test_smacof_stress_non_increasing(seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((12, 4))
    D = np.sqrt(((X[:, None] - X[None]) ** 2).sum(-1))
    _, hist = smacof(D, rng.standard_normal((12, 2)))
    assert all(b <= a + 1e-9 for a, b in zip(hist, hist[1:]))


def test_mds_deterministic_and_seed_controlled():
    rng = np.random.default_rng(3)
    C = np.corrcoef(rng.standard_normal((30, 19)), rowvar=False)
    a, b = mds_embed(C, seed=5), mds_embed(C, seed=5)
    assert np.array_equal(a.P, b.P) and a.stress1 == b.stress1


def test_classical_scaling_recovers_planar_points():
    rng = np.random.default_rng(4)
    X = rng.standard_normal((10, 2))
    D = np.sqrt(((X[:, None] - X[None]) ** 2).sum(-1))
    assert stress1(D, classical_scaling(D)) < 1e-9


def test_mds_degenerate_inputs():
    with pytest.raises(DegenerateDissimilarity):
        mds_embed(np.eye(2))
    flat = mds_embed(np.ones((4, 4)))
    assert flat.stress1 == 0.0 and not flat.P.any()
    C = CorrelationMatrix(np.full((19, 19), np.nan), np.zeros(19, dtype=bool))
    with pytest.raises(DegenerateDissimilarity):
        mds_embed(C)


# -- Procrustes ---------------------------------------------------------------


@given(st.integers(0, 10**6), st.booleans())
@settings(max_examples=50)
def test_procrustes_properties(seed, reflect):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((19, 2))
    B = rng.standard_normal((19, 2))
    r = procrustes_align(A, B)
    assert r.ssd >= 0
    assert np.allclose(r.rotation @ r.rotation.T, np.eye(2))
    # unit RMS prescaling bounds the SSD by 4 * 19
    assert r.ssd <= 4 * 19 + 1e-9
    assert procrustes_align(A, A).ssd < 1e-12
    M = np.diag([1.0, -1.0]) if reflect else np.eye(2)
    assert procrustes_align(A @ M * 3.0 + 1.0, B).ssd == pytest.approx(r.ssd, abs=1e-9)


def test_procrustes_without_prescale_keeps_scale():
    A = np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]])
    r = procrustes_align(A, A / 2, prescale=False)
    assert r.ssd > 0 and r.scale == 1.0


def test_procrustes_degenerate():
    with pytest.raises(DegenerateConfiguration):
        procrustes_align(np.ones((5, 2)), np.random.default_rng(0).standard_normal((5, 2)))


def test_align_labelled_uses_common_labels():
    ref = human_reference_embedding()
    keep = [i for i, c in enumerate(ref.labels) if c != "HUM"]
    src_labels = tuple(ref.labels[i] for i in keep)
    res, common = align_labelled(ref.P[keep], src_labels, ref.P, ref.labels)
    assert common == src_labels and res.ssd < 1e-9


# -- structure ----------------------------------------------------------------


@given(st.floats(0, 2 * math.pi), st.booleans(), st.floats(0.1, 10))
def test_circular_order_invariant(rot, reflect, scale):
    P = np.column_stack([np.cos(ANGLES), np.sin(ANGLES)])
    R = np.array([[math.cos(rot), -math.sin(rot)], [math.sin(rot), math.cos(rot)]])
    if reflect:
        R = R @ np.diag([1.0, -1.0])
    assert circular_order_agreement(P @ R * scale + 3.0, CODES) == 19


def test_circular_order_detects_swap():
    P = np.column_stack([np.cos(ANGLES), np.sin(ANGLES)])
    P[[0, 5]] = P[[5, 0]]
    assert circular_order_agreement(P, CODES) < 19


def test_reference_from_files(tmp_path):
    P = np.column_stack([np.cos(ANGLES), np.sin(ANGLES)])
    j = tmp_path / "ref.json"
    j.write_text(json.dumps({c: list(p) for c, p in zip(CODES, P)}))
    assert np.allclose(human_reference_embedding(j).P, P)
    c = tmp_path / "ref.csv"
    c.write_text("value,x,y\n" + "".join(f"{code},{x},{y}\n" for code, (x, y) in zip(CODES, P)))
    assert np.allclose(human_reference_embedding(c).P, P)
    c.write_text("value,x,y\nBEC,0,1\n")
    with pytest.raises(SchemaViolation):
        human_reference_embedding(c)


# -- anchored curve -----------------------------------------------------------


def test_anchored_curve_rotation():
    profiles = np.array([np.cos(ANGLES - CIRCLE.angle(v)) for v in CIRCLE])
    anchors = [v.name for v in CIRCLE]
    curve = anchored_curve(profiles, anchors)
    assert np.allclose(curve.y, np.cos(ANGLES))
    assert curve.argmax() == 0 and curve.argmin() in (9, 10)
    assert curve.counts.tolist() == [19] * 19


def test_anchored_curve_skips_unanchored():
    P = np.zeros((3, 19))
    curve = anchored_curve(P, [None, "ANW", ValueId.BEC])
    assert curve.n_sessions == 1
    with pytest.raises(NoAnchoredSessions):
        anchored_curve(P, [None, None, "ANW"])


@given(st.floats(0.01, 3), st.floats(-math.pi + 1e-6, math.pi), st.floats(-2, 2))
def test_sine_fit_recovers_parameters(amp, phase, offset):
    y = offset + amp * np.cos(ANGLES - phase)
    fit = fit_sine(y)
    assert fit.amplitude == pytest.approx(amp, abs=1e-9)
    assert math.cos(fit.phase - phase) == pytest.approx(1.0, abs=1e-9)
    assert fit.offset == pytest.approx(offset, abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(fit(np.arange(19)), y)


def test_sine_fit_flat_curve():
    fit = fit_sine(np.full(19, 0.3))
    assert fit.amplitude == pytest.approx(0.0, abs=1e-12) and fit.r_squared == 0.0
    with pytest.raises(ValueError):
        fit_sine([1.0] * 18)
