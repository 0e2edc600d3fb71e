import csv
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catfield.algebra import add, element, flatten, indeterminate, random_element, scalar_left, to_matrix, unit
from catfield.category import cyclic_group, indiscrete, reversal_involution
from catfield.dynamics import (
    HADAMARD,
    WalkConfig,
    algebra_inverse,
    coined_walk,
    dense_walk_unitary,
    inner_automorphism,
    is_unitary,
    pullback_state,
    rotation_action,
    validate_action,
    walk_evolve,
    walk_from_json,
    with_horizon,
)
from catfield.errors import (
    CocycleViolation,
    CoinNotUnitary,
    NotAFunctor,
    NotInvertible,
    NotInvertibleComponent,
    NotUnitary,
    StateInvalid,
)
from catfield.rig import COMPLEX
from catfield.states import unchecked_state, vector_state
from conftest import chain
from oracles import dense_walk, hadamard


# ------------------------------------------------------------ unitarity
def test_unit_is_unitary():
    cat = indiscrete(3)
    assert is_unitary(unit(cat, COMPLEX), reversal_involution(cat))


def test_cyclic_shift_is_unitary():
    cat = indiscrete(3)
    shift = element(cat, COMPLEX, {"1->2": 1, "2->3": 1, "3->1": 1})
    assert is_unitary(shift, reversal_involution(cat))


def test_scaled_unit_is_not_unitary():
    cat = indiscrete(2)
    assert not is_unitary(scalar_left(2, unit(cat, COMPLEX)), reversal_involution(cat))
    assert is_unitary(scalar_left(1j, unit(cat, COMPLEX)), reversal_involution(cat))


# ------------------------------------------------------------ covariance
def test_rotation_action_is_valid():
    for n in (2, 3, 4):
        act = rotation_action(n)
        assert len(act.functors) == n
        for g in act.group.arrows:
            u, ui = act.element(g), act.inverse_element(g)
            assert is_unitary(u, reversal_involution(act.category))
            assert to_matrix(u) @ to_matrix(ui) == pytest.approx(np.eye(n))


def _rotation_data(n):
    cat, grp = indiscrete(n), cyclic_group(n)
    action, u = {}, {}
    for k, g in enumerate(grp.arrows):
        for i, o in enumerate(cat.objects):
            t = cat.objects[(i + k) % n]
            action[(g, o)] = t
            u[(g, o)] = cat.hom(o, t)[0]
    return cat, grp, action, u


def test_action_errors():
    cat, grp, action, u = _rotation_data(3)
    broken = dict(action)
    broken[("g1", "1")] = "1"
    with pytest.raises((CocycleViolation, NotAFunctor)):
        validate_action(cat, grp, broken, u)
    missing = dict(u)
    del missing[("g1", "1")]
    with pytest.raises(NotAFunctor):
        validate_action(cat, grp, action, missing)
    # a unit that does not act trivially
    shifted_action = {(g, o): action[(grp.table[("g1", g)], o)] for g in grp.arrows for o in cat.objects}
    shifted_u = {(g, o): cat.hom(o, shifted_action[(g, o)])[0] for g in grp.arrows for o in cat.objects}
    with pytest.raises(CocycleViolation):
        validate_action(cat, grp, shifted_action, shifted_u)


def test_non_invertible_component():
    cat, grp = chain(2), cyclic_group(2)
    action = {(g, o): o for g in grp.arrows for o in cat.objects}
    u = {(g, o): cat.identity[o] for g in grp.arrows for o in cat.objects}
    u[("g1", "v0")] = "e0"
    action[("g1", "v0")] = "v1"
    with pytest.raises(NotInvertibleComponent):
        validate_action(cat, grp, action, u)


def test_unit_condition_on_components():
    grp = cyclic_group(2)
    action = {(g, "*"): "*" for g in grp.arrows}
    u = {("g0", "*"): "g0", ("g1", "*"): "g1"}
    assert validate_action(grp, grp, action, u)
    # the unit must carry identity components
    swapped = {("g0", "*"): "g1", ("g1", "*"): "g0"}
    with pytest.raises(CocycleViolation):
        validate_action(grp, grp, action, swapped)


def test_inner_automorphism_is_permutation_conjugation():
    act = rotation_action(4)
    rng = np.random.default_rng(0)
    for g in act.group.arrows:
        u = act.element(g)
        p = to_matrix(u)
        for _ in range(10):
            a = random_element(act.category, COMPLEX, rng)
            b = inner_automorphism(u, a, act.inverse_element(g))
            assert np.abs(to_matrix(b) - p @ to_matrix(a) @ p.T).max() <= 1e-12
            assert inner_automorphism(u, a) == b


def test_algebra_inverse():
    cat = indiscrete(2)
    a = add(unit(cat, COMPLEX), indeterminate(cat, COMPLEX, "1->2"))
    b = algebra_inverse(a)
    assert np.allclose(to_matrix(b), np.linalg.inv(to_matrix(a)))
    with pytest.raises(NotInvertible):
        algebra_inverse(indeterminate(cat, COMPLEX, "1->2"))


def test_pullback_state_permutes_vector_states():
    act = rotation_action(3)
    inv = reversal_involution(act.category)
    psi = np.array([1.0, 2.0, 3.0j])
    s = vector_state(inv, psi)
    g = "g1"
    pulled = pullback_state(s, act.element(g), act.inverse_element(g))
    p = to_matrix(act.element(g))
    expect = vector_state(inv, p.T @ psi)
    for c in act.category.arrows:
        assert pulled.weight(c) == pytest.approx(expect.weight(c), abs=1e-12)


# ------------------------------------------------------------ walks
def test_hadamard_walk_first_step():
    tr = walk_evolve(coined_walk(4, HADAMARD, horizon=1))
    assert tr.expectation(1, "site:1") == pytest.approx(0.5)
    assert tr.expectation(1, "site:3") == pytest.approx(0.5)
    assert tr.expectation(1, "site:0") == pytest.approx(0)


@pytest.mark.parametrize("n, steps", [(4, 12), (5, 8), (8, 6)])
def test_walk_matches_dense_oracle(n, steps):
    coin_state = np.array([1, 1j]) / np.sqrt(2)
    tr = walk_evolve(coined_walk(n, hadamard(), site=1, coin_state=coin_state, horizon=steps))
    ref = dense_walk(n, hadamard(), 1, coin_state, steps)
    for t, row in enumerate(ref):
        for name, v in row.items():
            assert abs(tr.expectation(t, name) - v) <= 1e-9
    assert max(abs(u - 1) for u in tr.unit_values) <= 1e-9


def test_identity_coin_moves_a_point_mass():
    n = 5
    tr = walk_evolve(coined_walk(n, np.eye(2), horizon=7))
    for t in range(8):
        for i in range(n):
            assert tr.expectation(t, f"site:{i}") == pytest.approx(1.0 if i == t % n else 0.0, abs=1e-12)
    tr = walk_evolve(coined_walk(n, np.eye(2), coin_state=(0, 1), horizon=3))
    assert tr.expectation(3, "site:2") == pytest.approx(1.0)


def test_walk_errors():
    with pytest.raises(CoinNotUnitary):
        coined_walk(4, np.array([[1, 1], [0, 1]]))
    cfg = coined_walk(3, HADAMARD)
    bad_omega = scalar_left(np.eye(2) * 2, unit(cfg.omega.category, cfg.omega.rig))
    with pytest.raises(NotUnitary):
        walk_evolve(WalkConfig(bad_omega, cfg.involution, cfg.initial, 1, cfg.observables))
    s = cfg.initial
    bad_state = unchecked_state(s.involution, {c: 2 * v for c, v in s.weights.items()})
    with pytest.raises(StateInvalid):
        walk_evolve(WalkConfig(cfg.omega, cfg.involution, bad_state, 1, cfg.observables))


def test_dense_unitary_is_unitary():
    u = dense_walk_unitary(6, HADAMARD)
    assert np.allclose(u.conj().T @ u, np.eye(12))


def test_fixture_csv_matches(data_dir):
    raw = json.loads((data_dir / "hadamard4.json").read_text())
    tr = walk_evolve(walk_from_json(raw))
    rows = list(csv.DictReader((data_dir / "hadamard4_oracle.csv").read_text().splitlines()))
    assert len(rows) == len(tr.rows) == 4 * 6
    for r in rows:
        got = tr.expectation(int(r["t"]), r["observable"])
        assert abs(got - complex(float(r["re"]), float(r["im"]))) <= 1e-9
    again = walk_evolve(with_horizon(walk_from_json(raw), 3))
    assert again.to_csv() == tr.to_csv()


def test_csv_header_and_row_count():
    tr = walk_evolve(coined_walk(3, HADAMARD, horizon=2))
    lines = tr.to_csv().splitlines()
    assert lines[0] == "t,observable,re,im"
    assert len(lines) == 1 + 3 * (3 + 2)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=15, deadline=None)
def test_random_coin_walks_match_oracle(seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    coin, _ = np.linalg.qr(z)
    n = int(rng.integers(2, 6))
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    site = int(rng.integers(0, n))
    tr = walk_evolve(coined_walk(n, coin, site=site, coin_state=v, horizon=4))
    ref = dense_walk(n, coin, site, v, 4)
    for t, row in enumerate(ref):
        for name, val in row.items():
            assert abs(tr.expectation(t, name) - val) <= 1e-9


def test_flattened_observables_are_projections():
    cfg = coined_walk(3, HADAMARD)
    for name, obs in cfg.observables.items():
        assert obs.category == cfg.initial.category
    assert flatten(cfg.omega).category == cfg.initial.category
