"""States on categories: normalized positive-semidefinite weight functions on arrows."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .algebra import AlgElement, convolve, element, flatten, indeterminate, involute_element
from .category import FinCategory, InvolutionStructure
from .causal import CausalCategory, is_region, relevant_involutive_category
from .errors import (
    CarrierRestrictionInvalid,
    HermitianViolation,
    MismatchedCategory,
    NotARegion,
    NotDaggerStructure,
    NotNormalized,
    NotPSD,
    StateError,
    SupportOffCarrier,
    UnsupportedRig,
)
from .rig import ABS_FLOOR, COMPLEX, ComplexRig, MatrixRig, RigSpec, close

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class State:
    category: FinCategory
    involution: InvolutionStructure
    weights: Mapping[str, complex]
    rig: RigSpec = COMPLEX
    psd_certificate: dict[str, float] = field(default_factory=dict)
    normalization_value: complex = 0j
    borderline: bool = False
    validated: bool = False
    tolerance: float = DEFAULT_TOL

    def weight(self, arrow: str) -> complex:
        return self.weights.get(arrow, 0j)

    def __call__(self, a: AlgElement) -> complex:
        return evaluate(self, a)

    def to_json(self) -> dict:
        return {
            "category": self.category.name,
            "weights": {a: [v.real, v.imag] for a, v in self.weights.items()},
            "tolerance": self.tolerance,
        }

    def report(self) -> dict:
        return {
            "valid": self.validated,
            "normalization": [self.normalization_value.real, self.normalization_value.imag],
            "min_eigenvalues": dict(self.psd_certificate),
            "borderline": self.borderline,
        }


def unchecked_state(inv: InvolutionStructure, weights: Mapping[str, complex]) -> State:
    """A weight function wrapped as a State without any validation (for probing)."""
    w = {a: complex(v) for a, v in weights.items() if abs(complex(v)) > 0}
    return State(inv.category, inv, w)


def gram_blocks(inv: InvolutionStructure, weights: Mapping[str, complex]) -> dict[str, tuple[tuple[str, ...], np.ndarray]]:
    """Per codomain object Y, the matrix M[c', c] = φ̂(dagger(c')∘c) over carrier arrows into Y."""
    cat = inv.category
    blocks = {}
    for y in cat.objects:
        arrows = tuple(a for a in cat.arrows_into(y) if a in inv.carrier)
        m = np.zeros((len(arrows), len(arrows)), dtype=complex)
        for i, cp in enumerate(arrows):
            d = inv.dagger[cp]
            for j, c in enumerate(arrows):
                m[i, j] = weights.get(cat.table[(d, c)], 0j)
        blocks[y] = (arrows, m)
    return blocks


def psd_tolerance(m: np.ndarray, tol: float) -> float:
    norm = np.linalg.norm(m, 2) if m.size else 0.0
    return tol * (1.0 + norm)


def state_from_weights(inv: InvolutionStructure, weights: Mapping[str, complex], rig: RigSpec = COMPLEX, tol: float = DEFAULT_TOL) -> State:
    """Validate a weight function as a state on the involution carrier."""
    if not isinstance(rig, ComplexRig):
        raise UnsupportedRig(f"states are implemented for the complex rig only, not {rig!r}")
    if not inv.is_dagger_structure:
        raise NotDaggerStructure("state validation needs a contravariant identity-on-objects involution")
    cat = inv.category
    w = {}
    for a, v in weights.items():
        cat.check_arrow(a)
        v = COMPLEX.coerce(v)
        if abs(v) == 0:
            continue
        if a not in inv.carrier:
            raise SupportOffCarrier(f"weight on {a!r}, which is outside the involution carrier")
        w[a] = v
    total = sum((w.get(i, 0j) for i in cat.identities), 0j)
    if not close(total, 1.0, rel=tol, floor=tol):
        raise NotNormalized(f"weights on identities sum to {total}, not 1")
    for a in inv.carrier:
        lhs, rhs = w.get(inv.dagger[a], 0j), w.get(a, 0j).conjugate()
        if not close(lhs, rhs, rel=tol, floor=max(ABS_FLOOR, tol)):
            raise HermitianViolation(f"weight of dagger({a}) = {lhs} differs from conj(weight({a})) = {rhs}")
    cert, borderline = {}, False
    for y, (arrows, m) in gram_blocks(inv, w).items():
        if not arrows:
            continue
        lo = float(np.linalg.eigvalsh((m + m.conj().T) / 2).min())
        cert[y] = lo
        if lo < -psd_tolerance(m, tol):
            raise NotPSD(f"Gram block at object {y!r} has eigenvalue {lo:.3e}")
        borderline = borderline or lo < 0
    return State(cat, inv, w, COMPLEX, cert, total, borderline, True, tol)


def _as_complex(s: State, a: AlgElement) -> AlgElement:
    if isinstance(a.rig, MatrixRig):
        a = flatten(a)
    if a.category is not s.category and a.category != s.category:
        raise MismatchedCategory(f"element lives on {a.category!r}, state on {s.category!r}")
    return a


def evaluate(s: State, a: AlgElement) -> complex:
    """φ(a) = Σ a(c)·φ̂(c)."""
    a = _as_complex(s, a)
    return complex(sum((complex(v) * s.weights.get(c, 0j) for c, v in a.weights.items()), 0j))


# ---------------------------------------------------------------- probing
@dataclass(frozen=True)
class ProbeReport:
    trials: int
    min_real: float
    max_imag: float
    witness: AlgElement
    witness_value: complex
    threshold: float

    @property
    def violated(self) -> bool:
        return self.min_real < -self.threshold or self.max_imag > self.threshold


def sesquilinear_matrix(s: State) -> tuple[list[str], np.ndarray]:
    """H[i, j] = φ((ι^{c_i})* ι^{c_j}) over carrier arrows, built from algebra operations."""
    cat, inv = s.category, s.involution
    arrows = [a for a in cat.arrows if a in inv.carrier]
    gens = [indeterminate(cat, COMPLEX, a) for a in arrows]
    stars = [involute_element(g, inv) for g in gens]
    h = np.array([[evaluate(s, convolve(x, g)) for g in gens] for x in stars], dtype=complex)
    return arrows, h


def positivity_probe(s: State, trials: int = 500, seed: int = 0, refine: int = 4, tol: float = DEFAULT_TOL) -> ProbeReport:
    """Search for a with φ(a*a) outside the nonnegative reals.

    Each trial draws a random carrier-supported a and improves it by a few
    steepest-descent steps on φ(a*a)/‖a‖²; the worst a is re-evaluated
    through the algebra as the witness.
    """
    rng = np.random.default_rng(seed)
    arrows, h = sesquilinear_matrix(s)
    n = len(arrows)
    herm = (h + h.conj().T) / 2
    threshold = tol * (1.0 + (np.linalg.norm(h, 2) if n else 0.0))
    best_val, best_x, max_imag = np.inf, np.zeros(n, dtype=complex), 0.0
    for _ in range(trials):
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
        x *= rng.random(n) < rng.uniform(0.3, 1.0)
        if not np.any(x):
            x[rng.integers(n)] = 1.0
        x /= np.linalg.norm(x)
        for _ in range(refine):
            g = herm @ x - np.vdot(x, herm @ x).real * x
            if np.linalg.norm(g) < 1e-14:
                break
            q, _ = np.linalg.qr(np.column_stack([x, g]))
            w, v = np.linalg.eigh(q.conj().T @ herm @ q)
            x = q @ v[:, 0]
            x /= np.linalg.norm(x)
        val = np.vdot(x, h @ x)
        max_imag = max(max_imag, abs(val.imag))
        if val.real < best_val:
            best_val, best_x = val.real, x
    witness = element(s.category, COMPLEX, {a: best_x[i] for i, a in enumerate(arrows)})
    wval = evaluate(s, convolve(involute_element(witness, s.involution), witness)) if n else 0j
    return ProbeReport(trials, float(min(best_val, wval.real)), float(max_imag), witness, wval, threshold)


# --------------------------------------------------------------- field states
@dataclass(frozen=True, eq=False)
class FieldState:
    causal: CausalCategory
    weights: Mapping[str, complex]
    carrier_state: State

    @property
    def category(self) -> FinCategory:
        return self.causal.ambient

    def __call__(self, a: AlgElement) -> complex:
        return self.evaluate(a)

    def evaluate(self, a: AlgElement) -> complex:
        if isinstance(a.rig, MatrixRig):
            a = flatten(a)
        if a.category is not self.category and a.category != self.category:
            raise MismatchedCategory("element lives on another category")
        return complex(sum((complex(v) * self.weights.get(c, 0j) for c, v in a.weights.items()), 0j))


def field_state(cc: CausalCategory, weights: Mapping[str, complex], tol: float = DEFAULT_TOL) -> FieldState:
    """A unital functional on R[C] that restricts to a state on the involution carrier."""
    from .errors import NoPartialInvolution

    inv = cc.partial_involution
    if inv is None:
        raise NoPartialInvolution("field states need a partial involution")
    w = {}
    for a, v in weights.items():
        cc.ambient.check_arrow(a)
        v = COMPLEX.coerce(v)
        if v != 0:
            w[a] = v
    try:
        carrier = state_from_weights(inv, {a: v for a, v in w.items() if a in inv.carrier}, tol=tol)
    except StateError as exc:
        raise CarrierRestrictionInvalid(f"{exc.code()}: {exc}") from exc
    return FieldState(cc, w, carrier)


def local_state(cc: CausalCategory, O: Iterable[str], weights: Mapping[str, complex], tol: float = DEFAULT_TOL, reading: str = "convex") -> State:
    """A state on the involutive relevant category of the region O."""
    O = frozenset(O)
    if not is_region(cc, O, reading):
        raise NotARegion(f"{sorted(O)} is not a region")
    sub, inv = relevant_involutive_category(cc, O)
    for a in weights:
        if a not in sub.index:
            raise SupportOffCarrier(f"weight on {a!r}, outside the involutive relevant category")
    return state_from_weights(inv, weights, tol=tol)


def support_subcategory(s: State) -> FinCategory:
    """Smallest subcategory containing the support of the weight function."""
    cat = s.category
    support = [a for a, v in s.weights.items() if abs(v) > ABS_FLOOR]
    objs = {cat.dom[a] for a in support} | {cat.cod[a] for a in support}
    arrows = cat.closure(set(support) | {cat.identity[o] for o in objs})
    return cat.subcategory(arrows, objects=objs, name=f"support({cat.name})")


def state_from_json(inv: InvolutionStructure, raw: Mapping, tol: float | None = None) -> State:
    tol = float(raw.get("tolerance", DEFAULT_TOL)) if tol is None else tol
    return state_from_weights(inv, {str(a): COMPLEX.decode(v) for a, v in raw["weights"].items()}, tol=tol)


def vector_state(inv: InvolutionStructure, psi: np.ndarray, tol: float = DEFAULT_TOL) -> State:
    """φ(a) = ψ^H·to_matrix(a)·ψ on an indiscrete category."""
    cat = inv.category
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    weights = {}
    for a in cat.arrows:
        i, j = cat.object_index[cat.cod[a]], cat.object_index[cat.dom[a]]
        v = np.conj(psi[i]) * psi[j]
        if v != 0:
            weights[a] = complex(v)
    return state_from_weights(inv, weights, tol=tol)
