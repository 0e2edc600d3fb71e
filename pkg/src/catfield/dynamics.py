"""Covariance under group actions and discrete-time quantum walks."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .algebra import (
    AlgElement,
    convolve,
    element,
    flatten,
    flatten_involution,
    from_dense,
    indeterminate,
    involute_element,
    left_mult_matrix,
    matrix_units_category,
    unit,
)
from .category import (
    FinCategory,
    FunctorMap,
    InvolutionStructure,
    compose_functors,
    cyclic_group,
    indiscrete,
    inverse_of,
    reversal_involution,
    validate_functor,
)
from .errors import (
    CocycleViolation,
    CoinNotUnitary,
    EvolvedStateInvalid,
    NotAFunctor,
    NotInvertible,
    NotInvertibleComponent,
    NotUnitary,
    StateError,
    StateInvalid,
    UnsupportedRig,
)
from .rig import COMPLEX, ComplexRig, MatrixRig
from .states import DEFAULT_TOL, State, evaluate, state_from_weights, vector_state

UNITARY_TOL = 1e-9


# ------------------------------------------------------------------ covariance
@dataclass(frozen=True, eq=False)
class CovariantAction:
    category: FinCategory
    group: FinCategory
    object_action: Mapping[tuple[str, str], str]
    u: Mapping[tuple[str, str], str]
    functors: Mapping[str, FunctorMap] = field(default_factory=dict)

    def act(self, g: str, obj: str) -> str:
        return self.object_action[(g, obj)]

    def component(self, g: str, obj: str) -> str:
        return self.u[(g, obj)]

    def element(self, g: str, rig=COMPLEX) -> AlgElement:
        """ι^u for the natural equivalence u^g, weight 1 on each component."""
        return natural_equivalence_element(self.category, {o: self.u[(g, o)] for o in self.category.objects}, rig)

    def inverse_element(self, g: str, rig=COMPLEX) -> AlgElement:
        comps = {}
        for o in self.category.objects:
            comps[self.act(g, o)] = inverse_of(self.category, self.u[(g, o)])
        return natural_equivalence_element(self.category, comps, rig)


def _group_unit(group: FinCategory) -> str:
    if len(group.objects) != 1:
        raise NotAFunctor("a group must be a one-object category")
    e = group.identity[group.objects[0]]
    for g in group.arrows:
        if inverse_of(group, g) is None:
            raise NotAFunctor(f"group element {g!r} has no inverse")
    return e


def validate_action(
    cat: FinCategory,
    group: FinCategory,
    object_action: Mapping[tuple[str, str], str],
    u: Mapping[tuple[str, str], str],
) -> CovariantAction:
    e = _group_unit(group)
    for g in group.arrows:
        for o in cat.objects:
            if object_action.get((g, o)) not in cat.object_index:
                raise NotAFunctor(f"object action undefined at ({g}, {o})")
            c = u.get((g, o))
            if c not in cat.index:
                raise NotAFunctor(f"component u({g}, {o}) is missing")
            if (cat.dom[c], cat.cod[c]) != (o, object_action[(g, o)]):
                raise NotAFunctor(f"component u({g}, {o}) = {c!r} has the wrong endpoints")
            if inverse_of(cat, c) is None:
                raise NotInvertibleComponent(f"component u({g}, {o}) = {c!r} is not invertible")
    for o in cat.objects:
        if object_action[(e, o)] != o or u[(e, o)] != cat.identity[o]:
            raise CocycleViolation(f"the unit does not act trivially at {o!r}")
    for (g2, g1), g21 in group.table.items():
        for o in cat.objects:
            mid = object_action[(g1, o)]
            if object_action[(g21, o)] != object_action[(g2, mid)]:
                raise CocycleViolation(f"object action is not a group action at ({g2}, {g1}, {o})")
            if u[(g21, o)] != cat.compose(u[(g2, mid)], u[(g1, o)]):
                raise CocycleViolation(f"cocycle law fails at ({g2}, {g1}, {o})")
    functors = {}
    for g in group.arrows:
        amap = {}
        for c in cat.arrows:
            back = inverse_of(cat, u[(g, cat.dom[c])])
            amap[c] = cat.compose(u[(g, cat.cod[c])], cat.compose(c, back))
        omap = {o: object_action[(g, o)] for o in cat.objects}
        f = validate_functor(cat, cat, omap, amap)
        if len(set(amap.values())) != len(cat.arrows):
            raise NotAFunctor(f"functor induced by {g!r} is not invertible")
        functors[g] = f
    for (g2, g1), g21 in group.table.items():
        if compose_functors(functors[g2], functors[g1]).arrow_map != functors[g21].arrow_map:
            raise NotAFunctor(f"induced functors do not compose at ({g2}, {g1})")
    return CovariantAction(cat, group, dict(object_action), dict(u), functors)


def rotation_action(n: int) -> CovariantAction:
    """Z/n rotating the objects of indiscrete n, with the unique connecting arrows."""
    cat, grp = indiscrete(n), cyclic_group(n)
    objs = cat.objects
    action, u = {}, {}
    for k, g in enumerate(grp.arrows):
        for i, o in enumerate(objs):
            target = objs[(i + k) % n]
            action[(g, o)] = target
            u[(g, o)] = cat.hom(o, target)[0]
    return validate_action(cat, grp, action, u)


def natural_equivalence_element(cat: FinCategory, components: Mapping[str, str], rig=COMPLEX) -> AlgElement:
    """Σ_C ι^{u_C}."""
    return element(cat, rig, {components[o]: rig.one for o in cat.objects})


def left_mult_operator(a: AlgElement) -> np.ndarray:
    """Matrix of x ↦ a·x on complex weight vectors."""
    n = len(a.category.arrows)
    out = np.zeros((n, n), dtype=complex)
    for c, v in a.weights.items():
        out += complex(v) * left_mult_matrix(a.category, c)
    return out


def algebra_inverse(a: AlgElement, tol: float = UNITARY_TOL) -> AlgElement:
    """Two-sided inverse by a linear solve (complex rig)."""
    if not isinstance(a.rig, ComplexRig):
        raise UnsupportedRig("inverses are solved over the complex rig only")
    cat = a.category
    eps = unit(cat, COMPLEX)
    lm = left_mult_operator(a)
    sol, *_ = np.linalg.lstsq(lm, eps.dense(), rcond=None)
    b = from_dense(cat, COMPLEX, sol)
    if _deviation(convolve(a, b), eps) > tol or _deviation(convolve(b, a), eps) > tol:
        raise NotInvertible("element has no two-sided inverse")
    return b


def inner_automorphism(u: AlgElement, a: AlgElement, u_inverse: AlgElement | None = None) -> AlgElement:
    """ι^u · a · (ι^u)⁻¹."""
    if u_inverse is None:
        u_inverse = algebra_inverse(u)
    else:
        eps = unit(u.category, u.rig)
        if _deviation(convolve(u, u_inverse), eps) > UNITARY_TOL or _deviation(convolve(u_inverse, u), eps) > UNITARY_TOL:
            raise NotInvertible("supplied inverse is not a two-sided inverse")
    return convolve(convolve(u, a), u_inverse)


def pullback_state(s: State, u: AlgElement, u_inverse: AlgElement | None = None) -> State:
    """The weight function c ↦ φ(ι^u ι^c (ι^u)⁻¹), revalidated."""
    cat = s.category
    u_inverse = algebra_inverse(u) if u_inverse is None else u_inverse
    weights = {c: evaluate(s, inner_automorphism(u, indeterminate(cat, COMPLEX, c), u_inverse)) for c in s.involution.carrier}
    return state_from_weights(s.involution, weights, tol=s.tolerance)


# ------------------------------------------------------------------- unitarity
def _deviation(a: AlgElement, b: AlgElement) -> float:
    worst = 0.0
    for c in a.support | b.support:
        worst = max(worst, float(np.max(np.abs(np.asarray(a[c]) - np.asarray(b[c])))))
    return worst


def is_unitary(omega: AlgElement, inv: InvolutionStructure, tol: float = UNITARY_TOL) -> bool:
    """ω*ω = ωω* = ε within tol."""
    star = involute_element(omega, inv)
    eps = unit(omega.category, omega.rig)
    return _deviation(convolve(star, omega), eps) <= tol and _deviation(convolve(omega, star), eps) <= tol


# ------------------------------------------------------------------- walks
@dataclass(frozen=True, eq=False)
class WalkConfig:
    omega: AlgElement
    involution: InvolutionStructure
    initial: State
    horizon: int
    observables: Mapping[str, AlgElement]
    name: str = "walk"


@dataclass(frozen=True, eq=False)
class Trajectory:
    config: WalkConfig
    states: tuple[State, ...]
    rows: tuple[tuple[int, str, float, float], ...]
    unit_values: tuple[complex, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "observable", "re", "im"])
        for t, name, re, im in self.rows:
            w.writerow([t, name, repr(re), repr(im)])
        return buf.getvalue()

    def expectation(self, t: int, name: str) -> complex:
        for tt, nn, re, im in self.rows:
            if tt == t and nn == name:
                return complex(re, im)
        raise KeyError((t, name))


def _complex_form(a: AlgElement) -> AlgElement:
    return flatten(a) if isinstance(a.rig, MatrixRig) else a


def _step_weights(prev: State, omega: AlgElement, star: AlgElement) -> dict[str, complex]:
    """φ^t(ι^c) = φ^{t-1}(ω* ι^c ω) for each carrier arrow c."""
    cat = prev.category
    out = {}
    for c in sorted(prev.involution.carrier, key=cat.index.__getitem__):
        x = convolve(star, convolve(indeterminate(cat, COMPLEX, c), omega))
        v = evaluate(prev, x)
        if v != 0:
            out[c] = v
    return out


def walk_evolve(cfg: WalkConfig, tol: float = DEFAULT_TOL) -> Trajectory:
    if not is_unitary(cfg.omega, cfg.involution):
        raise NotUnitary("the walk element is not unitary")
    s0 = cfg.initial
    try:
        s0 = state_from_weights(s0.involution, s0.weights, tol=tol)
    except StateError as exc:
        raise StateInvalid(f"initial state: {exc.code()}: {exc}") from exc
    omega = _complex_form(cfg.omega)
    if omega.category != s0.category:
        raise StateInvalid("initial state does not live on the walk's category")
    star = involute_element(omega, s0.involution)
    eps = unit(s0.category, COMPLEX)
    states, rows, units = [s0], [], []
    for t in range(cfg.horizon + 1):
        if t > 0:
            weights = _step_weights(states[-1], omega, star)
            try:
                states.append(state_from_weights(s0.involution, weights, tol=tol))
            except StateError as exc:
                raise EvolvedStateInvalid(f"step {t}: {exc.code()}: {exc}") from exc
        s = states[-1]
        units.append(evaluate(s, eps))
        for name, obs in cfg.observables.items():
            v = evaluate(s, obs)
            rows.append((t, name, float(v.real), float(v.imag)))
    return Trajectory(cfg, tuple(states), tuple(rows), tuple(units))


# -------------------------------------------------------------- coined walks
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
P_PROJ = np.array([[1, 0], [0, 0]], dtype=complex)
Q_PROJ = np.array([[0, 0], [0, 1]], dtype=complex)


def cycle_category(n: int) -> FinCategory:
    return indiscrete([str(i) for i in range(n)], name=f"cycle{n}")


def coined_walk(
    n: int,
    coin: np.ndarray,
    site: int = 0,
    coin_state: Sequence[complex] = (1, 0),
    horizon: int = 1,
    chirality: tuple[np.ndarray, np.ndarray] = (P_PROJ, Q_PROJ),
) -> WalkConfig:
    """Coined walk on an n-cycle: P·coin moves i → i+1, Q·coin moves i → i−1."""
    if n < 2:
        raise ValueError("a coined walk needs n >= 2")
    coin = np.asarray(coin, dtype=complex)
    if coin.shape != (2, 2) or np.abs(coin.conj().T @ coin - np.eye(2)).max() > UNITARY_TOL:
        raise CoinNotUnitary("coin must be a 2x2 unitary matrix")
    p, q = chirality
    rig = MatrixRig(2)
    cat = cycle_category(n)
    inv = reversal_involution(cat)
    weights: dict[str, np.ndarray] = {}
    for i in range(n):
        for j, m in (((i + 1) % n, p @ coin), ((i - 1) % n, q @ coin)):
            arrow = cat.hom(str(i), str(j))[0]
            weights[arrow] = weights.get(arrow, np.zeros((2, 2), complex)) + m
    omega = element(cat, rig, weights)
    if not is_unitary(omega, inv):
        raise NotUnitary("coined walk element is not unitary")
    flat_inv = flatten_involution(inv, 2)
    initial = vector_state(flat_inv, walk_vector(n, site, coin_state))
    obs = {}
    for i in range(n):
        obs[f"site:{i}"] = flatten(indeterminate(cat, rig, cat.identity[str(i)], np.eye(2)))
    ident = {cat.identity[o]: None for o in cat.objects}
    obs["chirality:P"] = flatten(element(cat, rig, {a: p for a in ident}))
    obs["chirality:Q"] = flatten(element(cat, rig, {a: q for a in ident}))
    return WalkConfig(omega, inv, initial, horizon, obs, name=f"coined{n}")


def walk_vector(n: int, site: int, coin_state: Sequence[complex]) -> np.ndarray:
    """Vector on the objects of cycle n × I_2 (object order of the flattened category)."""
    big = matrix_units_category(cycle_category(n), 2)
    psi = np.zeros(len(big.objects), dtype=complex)
    for k, amp in enumerate(coin_state):
        psi[big.object_index[f"{site}|{k + 1}"]] = amp
    return psi


def with_horizon(cfg: WalkConfig, horizon: int) -> WalkConfig:
    return WalkConfig(cfg.omega, cfg.involution, cfg.initial, horizon, cfg.observables, cfg.name)


def walk_from_json(raw: Mapping) -> WalkConfig:
    """{"n": 4, "coin": [[[re, im], ...], ...] | "hadamard", "site": 0, "coin_state": [[re, im], ...], "horizon": T}."""
    coin = raw.get("coin", "hadamard")
    if isinstance(coin, str):
        if coin.lower() != "hadamard":
            raise ValueError(f"unknown named coin {coin!r}")
        coin = HADAMARD
    else:
        coin = MatrixRig(2).coerce(coin)
    cs = [COMPLEX.coerce(z) for z in raw.get("coin_state", [1, 0])]
    return coined_walk(int(raw["n"]), coin, int(raw.get("site", 0)), cs, int(raw.get("horizon", 1)))


def dense_walk_unitary(n: int, coin: np.ndarray, chirality: tuple[np.ndarray, np.ndarray] = (P_PROJ, Q_PROJ)) -> np.ndarray:
    """The 2n × 2n step operator, index 2·site + chirality."""
    p, q = chirality
    u = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        for j, m in (((i + 1) % n, p @ coin), ((i - 1) % n, q @ coin)):
            u[2 * j : 2 * j + 2, 2 * i : 2 * i + 2] += m
    return u
