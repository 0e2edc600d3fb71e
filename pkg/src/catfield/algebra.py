"""Category algebras R[C]: finitely supported rig-valued functions on arrows
multiplied by convolution over factorizations."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Iterable, Mapping

import numpy as np

from .category import FinCategory, InvolutionStructure, indiscrete, product
from .errors import (
    MismatchedCategory,
    MismatchedRig,
    NotASubcategory,
    NotIndiscrete,
    SupportOutsideCarrier,
    TooLarge,
    UnsupportedRig,
    VarianceViolation,
)
from .rig import COMPLEX, ComplexRig, MatrixRig, RigSpec

# Below this many support pairs the pure-Python loop beats array setup.
_SPARSE_PAIRS = 256
CENTER_MAX_ARROWS = 400


@dataclass(frozen=True, eq=False)
class AlgElement:
    category: FinCategory
    rig: RigSpec
    weights: Mapping[str, Any]
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        clean = {}
        for a, v in self.weights.items():
            self.category.check_arrow(a)
            v = self.rig.coerce(v)
            if not self.rig.is_zero(v):
                if isinstance(v, np.ndarray):
                    v = v.copy()
                    v.flags.writeable = False
                clean[a] = v
        ordered = {a: clean[a] for a in sorted(clean, key=self.category.index.__getitem__)}
        object.__setattr__(self, "weights", MappingProxyType(ordered))

    def __getitem__(self, arrow: str):
        return self.weights.get(arrow, self.rig.zero)

    def __repr__(self) -> str:
        return f"AlgElement({dict(self.weights)!r})"

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self.weights)

    def dense(self) -> np.ndarray:
        if "dense" not in self._cache:
            arr = self.rig.zeros(len(self.category.arrows))
            for a, v in self.weights.items():
                arr[self.category.index[a]] = v
            arr.flags.writeable = False
            self._cache["dense"] = arr
        return self._cache["dense"]

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgElement):
            return NotImplemented
        if other.category is not self.category and other.category != self.category:
            return False
        if other.rig != self.rig:
            return False
        return all(self.rig.eq(self[a], other[a]) for a in self.support | other.support)

    __hash__ = None

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return convolve(self, other)
        return scalar_right(self, other)

    def __rmul__(self, r):
        return scalar_left(r, self)

    def __neg__(self):
        return AlgElement(self.category, self.rig, {a: self.rig.neg(v) for a, v in self.weights.items()})

    def __sub__(self, other):
        return add(self, -other)

    def to_json(self) -> dict:
        return {
            "category": self.category.name,
            "rig": self.rig.name,
            "weights": {a: self.rig.encode(v) for a, v in self.weights.items()},
        }


def element(cat: FinCategory, rig: RigSpec, weights: Mapping[str, Any] | None = None) -> AlgElement:
    return AlgElement(cat, rig, dict(weights or {}))


def from_dense(cat: FinCategory, rig: RigSpec, arr: np.ndarray) -> AlgElement:
    mask = rig.nonzero_mask(arr)
    return AlgElement(cat, rig, {cat.arrows[i]: rig.unpack(arr, i) for i in np.flatnonzero(mask)})


def element_from_json(cat: FinCategory, rig: RigSpec, raw: Mapping) -> AlgElement:
    return element(cat, rig, {str(a): rig.decode(v) for a, v in raw["weights"].items()})


def _same_space(a: AlgElement, b: AlgElement) -> None:
    if a.category is not b.category and a.category != b.category:
        raise MismatchedCategory(f"{a.category!r} vs {b.category!r}")
    if a.rig != b.rig:
        raise MismatchedRig(f"{a.rig!r} vs {b.rig!r}")


def convolve(a: AlgElement, b: AlgElement) -> AlgElement:
    """The product a·b: weight at h is the sum of a(g)·b(f) over h = g∘f."""
    _same_space(a, b)
    cat, rig = a.category, a.rig
    if len(a.weights) * len(b.weights) <= _SPARSE_PAIRS:
        out: dict[str, Any] = {}
        table = cat.table
        for g, x in a.weights.items():
            for f, y in b.weights.items():
                h = table.get((g, f))
                if h is not None:
                    xy = rig.mul(x, y)
                    out[h] = rig.add(out[h], xy) if h in out else xy
        return AlgElement(cat, rig, out)
    G, F, H = cat.composition_arrays
    da, db = a.dense(), b.dense()
    keep = rig.nonzero_mask(da)[G] & rig.nonzero_mask(db)[F]
    G, F, H = G[keep], F[keep], H[keep]
    acc = rig.zeros(len(cat.arrows))
    rig.add_at(acc, H, rig.vmul(da[G], db[F]))
    return from_dense(cat, rig, acc)


def unit(cat: FinCategory, rig: RigSpec) -> AlgElement:
    """The unit: 1 on every identity arrow."""
    return AlgElement(cat, rig, {i: rig.one for i in cat.identities})


def zero(cat: FinCategory, rig: RigSpec) -> AlgElement:
    return AlgElement(cat, rig, {})


def indeterminate(cat: FinCategory, rig: RigSpec, c: str, value=None) -> AlgElement:
    cat.check_arrow(c)
    return AlgElement(cat, rig, {c: rig.one if value is None else value})


def add(a: AlgElement, b: AlgElement) -> AlgElement:
    _same_space(a, b)
    rig = a.rig
    out = dict(a.weights)
    for c, v in b.weights.items():
        out[c] = rig.add(out[c], v) if c in out else v
    return AlgElement(a.category, rig, out)


def sum_elements(elements: Iterable[AlgElement], cat: FinCategory, rig: RigSpec) -> AlgElement:
    acc = zero(cat, rig)
    for e in elements:
        acc = add(acc, e)
    return acc


def scalar_left(r, a: AlgElement) -> AlgElement:
    r = a.rig.coerce(r)
    return AlgElement(a.category, a.rig, {c: a.rig.mul(r, v) for c, v in a.weights.items()})


def scalar_right(a: AlgElement, r) -> AlgElement:
    r = a.rig.coerce(r)
    return AlgElement(a.category, a.rig, {c: a.rig.mul(v, r) for c, v in a.weights.items()})


def involute_element(a: AlgElement, inv: InvolutionStructure) -> AlgElement:
    """Weight a(c) moves to dagger(c) and is conjugated by the rig involution."""
    if inv.category is not a.category and inv.category != a.category:
        raise MismatchedCategory("involution lives on a different category")
    outside = sorted(a.support - inv.carrier)
    if outside:
        raise SupportOutsideCarrier(f"arrows {outside} are outside the involution carrier")
    rig = a.rig
    if rig.involution_variance is None:
        rig.involute(rig.zero)  # raises NoRigInvolution
    if rig.involution_variance != inv.variance and not rig.commutative:
        raise VarianceViolation(f"{inv.variance} category involution needs a {inv.variance} rig involution")
    return AlgElement(a.category, rig, {inv.dagger[c]: rig.involute(v) for c, v in a.weights.items()})


# ------------------------------------------------------------------ the center
def left_mult_matrix(cat: FinCategory, c: str) -> np.ndarray:
    """Matrix of α ↦ ι^c·α on weight vectors (real 0/1 entries)."""
    n = len(cat.arrows)
    m = np.zeros((n, n))
    for f in cat.arrows_into(cat.dom[c]):
        m[cat.index[cat.table[(c, f)]], cat.index[f]] = 1.0
    return m


def right_mult_matrix(cat: FinCategory, c: str) -> np.ndarray:
    """Matrix of α ↦ α·ι^c."""
    n = len(cat.arrows)
    m = np.zeros((n, n))
    for g in cat.arrows_from(cat.cod[c]):
        m[cat.index[cat.table[(g, c)]], cat.index[g]] = 1.0
    return m


def null_space(a: np.ndarray, rel: float = 1e-9) -> np.ndarray:
    """Orthonormal null-space basis; singular values below rel·σ_max count as zero."""
    if a.size == 0:
        return np.eye(a.shape[1])
    _, s, vh = np.linalg.svd(a, full_matrices=a.shape[0] < a.shape[1])
    smax = s.max(initial=0.0)
    rank = int(np.sum(s > rel * smax)) if smax > 0 else 0
    return vh[rank:].conj().T


def center_matrix(cat: FinCategory) -> np.ndarray:
    """Columns span the center of C[C] (dense weight vectors)."""
    if "center" not in cat._cache:
        n = len(cat.arrows)
        if n > CENTER_MAX_ARROWS:
            raise TooLarge(f"center computation is limited to {CENTER_MAX_ARROWS} arrows, got {n}")
        rows = []
        for c in cat.arrows:
            block = left_mult_matrix(cat, c) - right_mult_matrix(cat, c)
            block = block[np.any(block != 0, axis=1)]
            if len(block):
                rows.append(block)
        a = np.vstack(rows) if rows else np.zeros((0, n))
        basis = null_space(a)
        # structure constants are integers, so a basis in reduced form is cleaner
        basis[np.abs(basis) < 1e-12] = 0.0
        basis.flags.writeable = False
        cat._cache["center"] = basis
    return cat._cache["center"]


def center_basis(cat: FinCategory, rig: RigSpec = COMPLEX) -> list[AlgElement]:
    """Basis of the center of the complex category algebra, via a commutator null space."""
    if not isinstance(rig, ComplexRig):
        raise UnsupportedRig("center_basis needs the complex rig")
    z = center_matrix(cat)
    return [from_dense(cat, rig, z[:, k].astype(complex)) for k in range(z.shape[1])]


# ------------------------------------------------------------ matrix algebras
def to_matrix(a: AlgElement) -> np.ndarray:
    """Entry (i, j) is the weight of the unique arrow from object j to object i."""
    cat = a.category
    if not cat.is_indiscrete():
        raise NotIndiscrete(f"{cat!r} is not indiscrete")
    n = len(cat.objects)
    m = np.zeros((n, n), dtype=complex)
    for c, v in a.weights.items():
        m[cat.object_index[cat.cod[c]], cat.object_index[cat.dom[c]]] = v
    return m


def from_matrix(cat: FinCategory, m: np.ndarray, rig: RigSpec = COMPLEX) -> AlgElement:
    if not cat.is_indiscrete():
        raise NotIndiscrete(f"{cat!r} is not indiscrete")
    m = np.asarray(m)
    n = len(cat.objects)
    if m.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix")
    weights = {}
    for i, y in enumerate(cat.objects):
        for j, x in enumerate(cat.objects):
            weights[cat.hom(x, y)[0]] = m[i, j]
    return AlgElement(cat, rig, weights)


def check_subcategory(sub: FinCategory, cat: FinCategory) -> None:
    if set(sub.objects) != set(cat.objects):
        raise NotASubcategory("inclusion is not bijective on objects")
    for a in sub.arrows:
        if a not in cat.index or sub.dom[a] != cat.dom[a] or sub.cod[a] != cat.cod[a]:
            raise NotASubcategory(f"arrow {a!r} is not an arrow of the ambient category")
    for o in sub.objects:
        if sub.identity[o] != cat.identity[o]:
            raise NotASubcategory(f"identity of {o!r} differs")
    for (g, f), gf in sub.table.items():
        if cat.table.get((g, f)) != gf:
            raise NotASubcategory(f"composite of ({g}, {f}) differs")
    arrows = set(sub.arrows)
    for (g, f), gf in cat.table.items():
        if g in arrows and f in arrows and (g, f) not in sub.table:
            raise NotASubcategory(f"composite of ({g}, {f}) missing from the subcategory")


def subalgebra_embed(sub: FinCategory, cat: FinCategory, a: AlgElement) -> AlgElement:
    """Carry an element of R[sub] into R[cat] along the inclusion."""
    if a.category is not sub and a.category != sub:
        raise MismatchedCategory("element does not live on the given subcategory")
    check_subcategory(sub, cat)
    return AlgElement(cat, a.rig, dict(a.weights))


# --------------------------------------------------- matrix-valued coefficients
def matrix_units_category(cat: FinCategory, k: int) -> FinCategory:
    """C × I_k, whose complex algebra is isomorphic to M_k[C]."""
    key = ("matrix_units", k)
    if key not in cat._cache:
        cat._cache[key] = product(cat, indiscrete(k), name=f"{cat.name}xM{k}")
    return cat._cache[key]


def flatten(a: AlgElement) -> AlgElement:
    """M_k-valued element ↦ complex element on C × I_k.

    Entry (i, j) of the weight at c becomes the weight at (c, j->i).
    """
    if not isinstance(a.rig, MatrixRig):
        raise UnsupportedRig("flatten expects a matrix rig")
    k = a.rig.n
    big = matrix_units_category(a.category, k)
    weights = {}
    for c, m in a.weights.items():
        for i in range(k):
            for j in range(k):
                if m[i, j] != 0:
                    weights[f"{c}|{j + 1}->{i + 1}"] = m[i, j]
    return AlgElement(big, COMPLEX, weights)


def flatten_involution(inv: InvolutionStructure, k: int) -> InvolutionStructure:
    """dagger(c, j->i) = (dagger c, i->j) on C × I_k."""
    from .category import validate_involution

    big = matrix_units_category(inv.category, k)
    dagger, carrier = {}, []
    for c in inv.carrier:
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                carrier.append(f"{c}|{j}->{i}")
                dagger[f"{c}|{j}->{i}"] = f"{inv.dagger[c]}|{i}->{j}"
    return validate_involution(big, carrier, dagger, inv.variance)


# ------------------------------------------------------------------- sampling
def random_element(cat: FinCategory, rig: RigSpec, rng: np.random.Generator, support: Iterable[str] | None = None, density: float = 0.5) -> AlgElement:
    arrows = list(cat.arrows if support is None else support)
    weights = {}
    for a in arrows:
        if rng.random() < density:
            weights[a] = rig.sample(rng)
    return AlgElement(cat, rig, weights)
