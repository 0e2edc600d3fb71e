"""Causal categories, relevant categories and local algebras."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np

from .algebra import AlgElement, center_matrix, from_dense, null_space, unit
from .category import (
    FinCategory,
    InvolutionStructure,
    indiscrete,
    preorder,
    reversal_involution,
    trivial_involution,
    validate_involution,
)
from .errors import (
    LatticeTooLarge,
    NoPartialInvolution,
    NotARegion,
    NotClosed,
    NotWide,
    UnknownObject,
    UnsupportedRig,
)
from .rig import ComplexRig, MatrixRig, RigSpec

Reading = Literal["convex", "cycle"]

INNER = "inner"
OUT = "out∘c"
IN = "c∘in"
OUT_IN = "out∘c∘in"
OUTSIDE_ID = "outside identity"


@dataclass(frozen=True, eq=False)
class CausalCategory:
    ambient: FinCategory
    causal_arrows: frozenset[str]
    partial_involution: InvolutionStructure | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def objects(self) -> tuple[str, ...]:
        return self.ambient.objects

    def is_causal(self, arrow: str) -> bool:
        return arrow in self.causal_arrows

    @property
    def precedes(self) -> frozenset[tuple[str, str]]:
        """The object relation p ⤳ q: some causal arrow p -> q exists."""
        if "precedes" not in self._cache:
            cat = self.ambient
            self._cache["precedes"] = frozenset((cat.dom[a], cat.cod[a]) for a in self.causal_arrows)
        return self._cache["precedes"]

    def causal_between(self, sources: Iterable[str], targets: Iterable[str]) -> list[str]:
        s, t = set(sources), set(targets)
        cat = self.ambient
        return [a for a in self.causal_arrows if cat.dom[a] in s and cat.cod[a] in t]


def make_causal(cat: FinCategory, causal: Iterable[str] | None = None, partial_involution: InvolutionStructure | None = None) -> CausalCategory:
    """``causal=None`` declares every arrow causal."""
    causal = frozenset(cat.arrows if causal is None else causal)
    for a in causal:
        cat.check_arrow(a)
    missing = [o for o in cat.objects if cat.identity[o] not in causal]
    if missing:
        raise NotWide(f"causal arrows lack identities of {missing}")
    for (g, f), gf in cat.table.items():
        if g in causal and f in causal and gf not in causal:
            raise NotClosed(f"causal {g}∘{f} = {gf} is not causal")
    if partial_involution is not None and partial_involution.category != cat:
        raise NoPartialInvolution("partial involution lives on another category")
    cc = CausalCategory(cat, causal, partial_involution)
    rel = cc.precedes
    succ: dict[str, set[str]] = {o: set() for o in cat.objects}
    for p, q in rel:
        succ[p].add(q)
    for p, q in rel:
        if not succ[q] <= succ[p]:
            raise NotClosed("induced object relation is not transitive")
    return cc


def lattice_point(t: int, x: int) -> str:
    return f"{t},{x}"


def minkowski_lattice(time_extent: int, space_extent: int, flavor: Literal["thin", "indiscrete"] = "indiscrete") -> CausalCategory:
    """Lattice points (t, x) with (t,x) ⤳ (t',x') iff t' - t >= |x' - x|.

    ``thin``: the poset category of that order, all arrows causal, trivial
    involution. ``indiscrete``: one arrow between every ordered pair, causal
    arrows those respecting the order, dagger = arrow reversal.
    """
    T, X = time_extent, space_extent
    if T < 1 or X < 1:
        raise LatticeTooLarge(f"lattice extents must be >= 1, got {T}x{X}")
    if T * X > 64:
        raise LatticeTooLarge(f"lattice has {T * X} points; the limit is 64")
    pts = [(t, x) for t in range(T) for x in range(X)]
    names = [lattice_point(*p) for p in pts]
    order = [
        (lattice_point(*p), lattice_point(*q)) for p in pts for q in pts if q[0] - p[0] >= abs(q[1] - p[1])
    ]
    if flavor == "thin":
        cat = preorder(names, order, name=f"minkowski{T}x{X}-thin")
        return make_causal(cat, None, trivial_involution(cat))
    if flavor == "indiscrete":
        cat = indiscrete(names, name=f"minkowski{T}x{X}")
        causal = [f"{p}->{q}" for p, q in order]
        return make_causal(cat, causal, reversal_involution(cat))
    raise ValueError(f"unknown lattice flavor {flavor!r}")


# ------------------------------------------------------------ relevant category
@dataclass(frozen=True, eq=False)
class RegionSelection:
    causal: CausalCategory
    objects: frozenset[str]
    relevant_arrows: frozenset[str]
    classification: dict[str, tuple[str, tuple[str, ...]]]

    @property
    def outside_identities(self) -> frozenset[str]:
        cat = self.causal.ambient
        return frozenset(cat.identity[o] for o in cat.objects if o not in self.objects)

    @property
    def main_arrows(self) -> frozenset[str]:
        """Relevant arrows other than identities of outside objects."""
        return self.relevant_arrows - self.outside_identities

    def category(self) -> FinCategory:
        if "cat" not in self.__dict__:
            object.__setattr__(self, "cat", self.causal.ambient.subcategory(self.relevant_arrows, name="rel"))
        return self.__dict__["cat"]


def _check_objects(cc: CausalCategory, objs: Iterable[str]) -> frozenset[str]:
    objs = frozenset(objs)
    for o in objs:
        if o not in cc.ambient.object_index:
            raise UnknownObject(f"{o!r} is not an object")
    return objs


def relevant_generators(cc: CausalCategory, O: frozenset[str]) -> set[str]:
    cat = cc.ambient
    gens = set()
    for a in cat.arrows:
        d_in, c_in = cat.dom[a] in O, cat.cod[a] in O
        if d_in and c_in:
            gens.add(a)
        elif (d_in or c_in) and a in cc.causal_arrows:
            gens.add(a)
    gens |= {cat.identity[o] for o in cat.objects if o not in O}
    return gens


def classify(cc: CausalCategory, O: frozenset[str], arrow: str) -> tuple[str, tuple[str, ...]] | None:
    """Form tag plus a witnessing decomposition, or None if no form fits."""
    cat = cc.ambient
    d, c = cat.dom[arrow], cat.cod[arrow]
    t = cat.table
    causal = cc.causal_arrows
    if d in O and c in O:
        return INNER, (arrow,)
    if d not in O and c not in O and cat.is_identity(arrow):
        return OUTSIDE_ID, (arrow,)
    if d in O:  # c outside
        for out in cat.arrows_into(c):
            if out in causal and cat.dom[out] in O:
                for inner in cat.hom(d, cat.dom[out]):
                    if t[(out, inner)] == arrow:
                        return OUT, (out, inner)
        return None
    if c in O:  # d outside
        for cin in cat.arrows_from(d):
            if cin in causal and cat.cod[cin] in O:
                for inner in cat.hom(cat.cod[cin], c):
                    if t[(inner, cin)] == arrow:
                        return IN, (inner, cin)
        return None
    for cin in cat.arrows_from(d):
        if cin not in causal or cat.cod[cin] not in O:
            continue
        for out in cat.arrows_into(c):
            if out not in causal or cat.dom[out] not in O:
                continue
            for inner in cat.hom(cat.cod[cin], cat.dom[out]):
                if t[(t[(out, inner)], cin)] == arrow:
                    return OUT_IN, (out, inner, cin)
    return None


def relevant_category(cc: CausalCategory, O: Iterable[str]) -> RegionSelection:
    O = _check_objects(cc, O)
    key = ("rel", O)
    if key not in cc._cache:
        arrows = cc.ambient.closure(relevant_generators(cc, O))
        classification = {a: classify(cc, O, a) for a in sorted(arrows, key=cc.ambient.index.__getitem__)}
        cc._cache[key] = RegionSelection(cc, O, arrows, classification)
    return cc._cache[key]


def spacelike_separated(cc: CausalCategory, O: Iterable[str], O2: Iterable[str]) -> bool:
    A, B = set(O), set(O2)
    return not any((p in A and q in B) or (p in B and q in A) for p, q in cc.precedes)


def is_region(cc: CausalCategory, O: Iterable[str], reading: Reading = "convex") -> bool:
    """``convex``: no outside object receives a causal arrow from O and sends one
    back into O. ``cycle``: no identity of an outside object factors as a
    composite of two non-identity relevant arrows."""
    O = _check_objects(cc, O)
    cat = cc.ambient
    if reading == "convex":
        rel = cc.precedes
        for C in cat.objects:
            if C in O:
                continue
            if any((A, C) in rel for A in O) and any((C, B) in rel for B in O):
                return False
        return True
    if reading == "cycle":
        sel = relevant_category(cc, O)
        arrows = sel.relevant_arrows
        for C in cat.objects:
            if C in O:
                continue
            one = cat.identity[C]
            for g, f in cat.factorizations[one]:
                if g in arrows and f in arrows and not cat.is_identity(g) and not cat.is_identity(f):
                    return False
        return True
    raise ValueError(f"unknown region reading {reading!r}")


def relevant_involutive_arrows(cc: CausalCategory, sel: RegionSelection) -> frozenset[str]:
    """Arrows of O^rel in the involution carrier whose dagger also lies in O^rel.

    This set is already closed under composition and dagger, so it is the
    largest involution-closed subcategory of the carrier inside O^rel.
    """
    inv = cc.partial_involution
    if inv is None:
        raise NoPartialInvolution("causal category has no partial involution")
    rel = sel.relevant_arrows
    return frozenset(a for a in rel if a in inv.carrier and inv.dagger[a] in rel)


def relevant_involutive_category(cc: CausalCategory, O: Iterable[str]) -> tuple[FinCategory, InvolutionStructure]:
    sel = relevant_category(cc, O)
    arrows = relevant_involutive_arrows(cc, sel)
    sub = cc.ambient.subcategory(arrows, name="rel~")
    inv = cc.partial_involution
    return sub, validate_involution(sub, arrows, {a: inv.dagger[a] for a in arrows}, inv.variance)


# ---------------------------------------------------------------- local algebra
@dataclass(frozen=True, eq=False)
class LocalAlgebraBasis:
    region: RegionSelection
    rig: RigSpec
    span_main: tuple[str, ...]
    allowed: frozenset[str]
    central: np.ndarray | None  # complex rig: columns are dense central vectors
    with_involution: bool

    @property
    def span_central(self) -> list[AlgElement]:
        cat = self.region.causal.ambient
        if self.central is None:
            return [unit(cat, self.rig)]
        return [from_dense(cat, self.rig, self.central[:, k].astype(complex)) for k in range(self.central.shape[1])]

    @property
    def dimension(self) -> int:
        extra = 1 if self.central is None else self.central.shape[1]
        return len(self.span_main) + extra

    def sample(self, rng: np.random.Generator, density: float = 0.7) -> AlgElement:
        cat = self.region.causal.ambient
        rig = self.rig
        if isinstance(rig, ComplexRig):
            vec = np.zeros(len(cat.arrows), dtype=complex)
            for a in self.span_main:
                if rng.random() < density:
                    vec[cat.index[a]] = complex(rng.normal(), rng.normal())
            k = self.central.shape[1]
            coeff = rng.normal(size=k) + 1j * rng.normal(size=k)
            vec = vec + self.central @ coeff
            return from_dense(cat, rig, vec)
        weights = {a: rig.sample(rng) for a in self.span_main if rng.random() < density}
        r = rig.sample(rng)
        if isinstance(rig, MatrixRig):
            r = complex(rng.normal(), rng.normal()) * np.eye(rig.n)
        delta = {i: r for i in cat.identities}
        out = dict(delta)
        for a, v in weights.items():
            out[a] = rig.add(out[a], v) if a in out else v
        return AlgElement(cat, rig, out)

    def contains(self, x: AlgElement, tol: float = 1e-9) -> bool:
        if not x.support <= self.allowed:
            return False
        outside = sorted(self.region.outside_identities, key=x.category.index.__getitem__)
        if not outside:
            return True
        vals = [x[i] for i in outside]
        if self.central is None:
            return all(self.rig.eq(v, vals[0]) for v in vals)
        rows = [x.category.index[i] for i in outside]
        z = self.central[rows, :]
        target = np.array(vals, dtype=complex)
        if z.shape[1] == 0:
            return bool(np.all(np.abs(target) <= tol))
        y, *_ = np.linalg.lstsq(z, target, rcond=None)
        return bool(np.linalg.norm(z @ y - target) <= tol * max(1.0, np.linalg.norm(target)))


def local_algebra(cc: CausalCategory, O: Iterable[str], rig: RigSpec, with_involution: bool = False, reading: Reading = "convex", check: bool = True) -> LocalAlgebraBasis:
    O = _check_objects(cc, O)
    if not is_region(cc, O, reading):
        raise NotARegion(f"{sorted(O)} is not a region ({reading} reading)")
    sel = relevant_category(cc, O)
    allowed = relevant_involutive_arrows(cc, sel) if with_involution else sel.relevant_arrows
    cat = cc.ambient
    main = tuple(a for a in cat.arrows if a in allowed and a in sel.main_arrows)
    central = None
    if isinstance(rig, ComplexRig):
        z = center_matrix(cat)
        out_rows = [cat.index[a] for a in cat.arrows if a not in allowed]
        if out_rows:
            y = null_space(z[out_rows, :])
            central = z @ y
        else:
            central = np.array(z)
        central[np.abs(central) < 1e-12] = 0.0
    elif rig.commutative is False and not isinstance(rig, MatrixRig):
        raise UnsupportedRig(f"no central part available for {rig!r}")
    basis = LocalAlgebraBasis(sel, rig, main, allowed, central, with_involution)
    if check:
        _check_closed(basis)
    return basis


def _check_closed(basis: LocalAlgebraBasis) -> None:
    cat = basis.region.causal.ambient
    main = set(basis.span_main)
    outside = basis.region.outside_identities
    for g in basis.span_main:
        for f in cat.arrows_into(cat.dom[g]):
            if f in main:
                h = cat.table[(g, f)]
                if h not in basis.allowed or h in outside:
                    raise NotARegion(f"{g}∘{f} = {h} leaves the local algebra")
    if isinstance(basis.rig, ComplexRig):
        rng = np.random.default_rng(0)
        for _ in range(3):
            a, b = basis.sample(rng), basis.sample(rng)
            if not basis.contains(a * b, tol=1e-8):
                raise NotARegion("local algebra span is not closed under convolution")


# ----------------------------------------------------------- subset sampling
def all_regions(cc: CausalCategory, max_size: int, reading: Reading = "convex") -> list[frozenset[str]]:
    out = []
    for k in range(1, max_size + 1):
        for combo in itertools.combinations(cc.objects, k):
            if is_region(cc, combo, reading):
                out.append(frozenset(combo))
    return out


def causal_from_json(cat: FinCategory, raw: dict) -> CausalCategory:
    from .category import involution_from_json

    inv = involution_from_json(cat, raw["involution"]) if "involution" in raw else None
    causal = raw.get("causal")
    return make_causal(cat, None if causal is None else [str(a) for a in causal], inv)
