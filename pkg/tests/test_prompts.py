from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from valueprobe.core import CIRCLE, ValueId
from valueprobe.errors import EmptyList, UnfilledPlaceholder
from valueprobe.prompts import (
    ANCHOR_PHRASES,
    BASIC_PROMPT,
    RATE_PROMPT,
    Basic,
    Demographic,
    DemographicProfile,
    GeneratedPersona,
    ListData,
    Names,
    STRATEGY_KINDS,
    ValueAnchor,
    anchor_for,
    anchor_items,
    load_list,
    plan_run_set,
    render_prompt,
    sample_demographic_profile,
    session_id,
    session_number,
    strategy_from_dict,
)


def test_basic_prompt_text():
    assert render_prompt(Basic()) == (
        "For each of the following descriptions, please answer how much the person described "
        "is like you from 1 (Not like me at all) to 6 (Very much like me), without elaborating "
        "on your reasoning."
    )


def test_value_anchor_prompt():
    text = render_prompt(ValueAnchor(anchor_for("SDA")))
    assert text == BASIC_PROMPT + " Answer as a person that is being free to act independently"


def test_demographic_prompt():
    p = DemographicProfile(34, "female", "nursing", "hiking")
    assert render_prompt(Demographic(p)) == (
        RATE_PROMPT + " Answer as a 34-year-old who identifies as female, working in the field "
        "of nursing, and enjoys hiking.")


def test_persona_and_names_prompts():
    assert render_prompt(GeneratedPersona("A retired teacher.")).endswith("Answer as: A retired teacher.")
    assert render_prompt(Names("Ms.", "Okafor", "black")) == RATE_PROMPT + " Answer as Ms. Okafor"


@pytest.mark.parametrize("strategy", [
    Names("", "Smith", "white"),
    Names("Mr.", " ", "white"),
    GeneratedPersona(""),
    Demographic(DemographicProfile(30, "male", "", "chess")),
])
def test_unfilled_slots_raise(strategy):
    with pytest.raises(UnfilledPlaceholder):
        render_prompt(strategy)


def test_demographic_age_bounds():
    with pytest.raises(ValueError):
        DemographicProfile(17, "male", "x", "y")


def test_anchor_items():
    items = anchor_items()
    assert [a.value for a in items] == list(CIRCLE)
    assert len(anchor_items(include_animal_welfare=True)) == 20
    assert anchor_for("ANW").value is None
    assert set(ANCHOR_PHRASES) == set(ValueId)


def test_session_ids_round_trip():
    assert session_id(7) == "s00007"
    assert session_number(session_id(12345)) == 12345


@given(st.integers(0, 400), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_value_anchor_plan_balanced(n, seed):
    plan = plan_run_set("value_anchor", n, seed)
    assert len(plan) == n
    counts = Counter(s.strategy.anchor.value for s in plan)
    if n:
        assert max(counts.values()) - min(counts.get(v, 0) for v in ValueId) <= 1
    genders = Counter(s.gender_version for s in plan)
    assert abs(genders["male"] - genders["female"]) <= 1
    assert [s.session_id for s in plan] == [session_id(k) for k in range(1, n + 1)]


@given(st.integers(1, 120), st.integers(0, 1000))
@settings(max_examples=30, deadline=None)
def test_names_plan_quota_and_uniqueness(n, seed):
    plan = plan_run_set("names", n, seed)
    combos = [(s.strategy.title, s.strategy.surname) for s in plan]
    assert len(set(combos)) == n
    per = Counter(s.strategy.ethnicity_tag for s in plan)
    assert max(per.values()) - min(per.get(g, 0) for g in ("white", "black", "hispanic", "asian", "aian")) <= 1


@pytest.mark.parametrize("kind", STRATEGY_KINDS)
def test_plans_are_seed_deterministic(kind):
    personas = [f"Persona {i}." for i in range(10)]
    a = plan_run_set(kind, 10, 3, personas=personas)
    b = plan_run_set(kind, 10, 3, personas=personas)
    assert a == b
    for s in a:
        assert strategy_from_dict(s.strategy.to_dict()) == s.strategy
        render_prompt(s.strategy)


def test_demographic_plan_uses_lists():
    lists = ListData(occupations=["welding"], hobbies=["chess"], names=[("", "Lee", "asian")])
    plan = plan_run_set("demographic", 5, 0, lists=lists)
    assert all(s.strategy.profile.occupation == "welding" for s in plan)


def test_names_plan_exhausts_pool():
    lists = ListData(occupations=["a"], hobbies=["b"], names=[("Mr.", "Lee", "asian")])
    with pytest.raises(EmptyList):
        plan_run_set("names", 2, 0, lists=lists)


def test_persona_plan_needs_texts():
    with pytest.raises(ValueError):
        plan_run_set("persona", 3, 0, personas=["one"])


def test_empty_list_file(tmp_path):
    p = tmp_path / "hobbies.txt"
    p.write_text("# nothing here\n\n")
    with pytest.raises(EmptyList):
        load_list("hobbies.txt", p)


def test_sampling_reproducible():
    a = sample_demographic_profile(np.random.default_rng(1))
    b = sample_demographic_profile(np.random.default_rng(1))
    assert a == b and 18 <= a.age <= 75
