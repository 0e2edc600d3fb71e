"""Direct computational checks of the structural results on category algebras.

Each check returns a ``CheckResult`` carrying a pass flag, the number of
cases examined and the first counterexample found (if any).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np

from .algebra import convolve, indeterminate, zero
from .category import FinCategory
from .causal import (
    IN,
    INNER,
    OUT,
    OUT_IN,
    OUTSIDE_ID,
    CausalCategory,
    Reading,
    all_regions,
    local_algebra,
    relevant_category,
    spacelike_separated,
)
from .rig import COMPLEX, RigSpec


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    cases: int
    counterexample: tuple | None = None
    detail: dict = field(default_factory=dict)

    def row(self) -> dict:
        out = {"check": self.name, "result": "PASS" if self.passed else "FAIL", "cases": self.cases}
        if self.counterexample is not None:
            out["counterexample"] = [str(x) for x in self.counterexample]
        out.update(self.detail)
        return out


# ------------------------------------------------------------- calculus
def check_calculus(cat: FinCategory, rig: RigSpec = COMPLEX) -> CheckResult:
    """ι^{c'}·ι^c = ι^{c'∘c} when composable and 0 otherwise, for every pair."""
    gens = {c: indeterminate(cat, rig, c) for c in cat.arrows}
    nothing = zero(cat, rig)
    cases = 0
    for g in cat.arrows:
        for f in cat.arrows:
            cases += 1
            gf = cat.compose(g, f)
            expect = gens[gf] if gf is not None else nothing
            if convolve(gens[g], gens[f]) != expect:
                return CheckResult("calculus", False, cases, (g, f))
    return CheckResult("calculus", True, cases)


# ------------------------------------------------------------- structure
def _structure_ok(cc: CausalCategory, O: frozenset[str], arrow: str, tag_witness) -> bool:
    cat, causal = cc.ambient, cc.causal_arrows
    if tag_witness is None:
        return False
    tag, w = tag_witness
    d_in, c_in = cat.dom[arrow] in O, cat.cod[arrow] in O
    if tag == INNER:
        return d_in and c_in
    if tag == OUTSIDE_ID:
        return not d_in and not c_in and cat.is_identity(arrow)
    if tag == OUT:
        out, inner = w
        return (
            d_in and not c_in and out in causal and cat.dom[out] in O
            and cat.dom[inner] in O and cat.cod[inner] in O and cat.compose(out, inner) == arrow
        )
    if tag == IN:
        inner, cin = w
        return (
            c_in and not d_in and cin in causal and cat.cod[cin] in O
            and cat.dom[inner] in O and cat.cod[inner] in O and cat.compose(inner, cin) == arrow
        )
    if tag == OUT_IN:
        out, inner, cin = w
        ok = out in causal and cin in causal and cat.dom[out] in O and cat.cod[cin] in O
        ok = ok and cat.dom[inner] in O and cat.cod[inner] in O
        mid = cat.compose(inner, cin)
        return ok and not d_in and not c_in and mid is not None and cat.compose(out, mid) == arrow
    return False


def check_structure(cc: CausalCategory, O: Iterable[str]) -> CheckResult:
    """Every relevant arrow has a form tag whose witness recomposes to it."""
    sel = relevant_category(cc, O)
    cases = 0
    for a in sorted(sel.relevant_arrows, key=cc.ambient.index.__getitem__):
        cases += 1
        if not _structure_ok(cc, sel.objects, a, sel.classification.get(a)):
            return CheckResult("structure", False, cases, (a,))
    return CheckResult("structure", True, cases)


# ---------------------------------------------------------- nonexistence
Mode = Literal["main", "literal"]


def check_nonexistence(cc: CausalCategory, O: Iterable[str], O2: Iterable[str], mode: Mode = "main") -> CheckResult:
    """No composable cross pair between the two relevant categories.

    ``main`` excludes the identities of outside objects, which only enter the
    local algebras through the central part; ``literal`` keeps them and only
    skips pairs of two identities.
    """
    cat = cc.ambient
    s1, s2 = relevant_category(cc, O), relevant_category(cc, O2)
    a1 = s1.main_arrows if mode == "main" else s1.relevant_arrows
    a2 = s2.main_arrows if mode == "main" else s2.relevant_arrows
    cases = 0
    for c in sorted(a1, key=cat.index.__getitem__):
        for c2 in sorted(a2, key=cat.index.__getitem__):
            if cat.is_identity(c) and cat.is_identity(c2):
                continue
            cases += 1
            if cat.cod[c] == cat.dom[c2] or cat.cod[c2] == cat.dom[c]:
                return CheckResult(f"nonexistence[{mode}]", False, cases, (c, c2))
    return CheckResult(f"nonexistence[{mode}]", True, cases)


# --------------------------------------------------------- commutativity
def check_commutativity(
    cc: CausalCategory,
    O: Iterable[str],
    O2: Iterable[str],
    rng: np.random.Generator,
    pairs: int = 100,
    with_involution: bool = False,
    rig: RigSpec = COMPLEX,
    tol: float = 1e-9,
    reading: Reading = "convex",
) -> CheckResult:
    """Random local elements a, b on the two regions satisfy a·b = b·a."""
    la = local_algebra(cc, O, rig, with_involution, reading)
    lb = local_algebra(cc, O2, rig, with_involution, reading)
    name = "commutativity~" if with_involution else "commutativity"
    worst = 0.0
    for k in range(pairs):
        a, b = la.sample(rng), lb.sample(rng)
        ab, ba = convolve(a, b), convolve(b, a)
        scale = 1.0
        dev = 0.0
        for c in ab.support | ba.support:
            x, y = np.asarray(ab[c]), np.asarray(ba[c])
            if x.dtype == object or y.dtype == object or rig.exact:
                if not rig.eq(ab[c], ba[c]):
                    return CheckResult(name, False, k + 1, (sorted(O), sorted(O2)))
                continue
            dev = max(dev, float(np.max(np.abs(x - y))))
            scale = max(scale, float(np.max(np.abs(x))))
        worst = max(worst, dev / scale)
        if dev > tol * scale:
            return CheckResult(name, False, k + 1, (sorted(O), sorted(O2)), {"max_deviation": worst})
    return CheckResult(name, True, pairs, None, {"max_deviation": worst})


# ------------------------------------------------------------- sampling
def sample_subsets(cc: CausalCategory, rng: np.random.Generator, count: int = 20) -> list[frozenset[str]]:
    """All object subsets if there are at most ``count``, else a seeded sample (always including ∅ and |C|)."""
    objs = cc.objects
    n = len(objs)
    if 2**n <= count:
        return [frozenset(c) for k in range(n + 1) for c in itertools.combinations(objs, k)]
    out = {frozenset(), frozenset(objs)}
    while len(out) < count:
        mask = rng.random(n) < rng.uniform(0.1, 0.9)
        out.add(frozenset(o for o, m in zip(objs, mask) if m))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def spacelike_region_pairs(
    cc: CausalCategory,
    rng: np.random.Generator | None = None,
    count: int | None = None,
    max_size: int = 3,
    reading: Reading = "convex",
) -> list[tuple[frozenset[str], frozenset[str]]]:
    """Unordered pairs of nonempty spacelike separated regions; a seeded sample of ``count`` if given."""
    regions = all_regions(cc, max_size, reading)
    pairs = [(a, b) for a, b in itertools.combinations(regions, 2) if spacelike_separated(cc, a, b)]
    pairs.sort(key=lambda p: (sorted(p[0]), sorted(p[1])))
    if count is not None and len(pairs) > count:
        rng = np.random.default_rng(0) if rng is None else rng
        idx = sorted(rng.choice(len(pairs), size=count, replace=False))
        pairs = [pairs[i] for i in idx]
    return pairs


# ----------------------------------------------------------------- suite
def run_suite(
    cc: CausalCategory,
    rng: np.random.Generator,
    region_pairs: int = 5,
    element_pairs: int = 20,
    subsets: int = 20,
    reading: Reading = "convex",
) -> list[CheckResult]:
    """Structure over sampled subsets, then Nonexistence and Commutativity over spacelike region pairs."""
    results = []
    cases, bad = 0, None
    for O in sample_subsets(cc, rng, subsets):
        r = check_structure(cc, O)
        cases += r.cases
        if not r.passed and bad is None:
            bad = (sorted(O),) + r.counterexample
    results.append(CheckResult("Structure", bad is None, cases, bad))
    pairs = spacelike_region_pairs(cc, rng, region_pairs, reading=reading)
    cases, bad = 0, None
    for O, O2 in pairs:
        r = check_nonexistence(cc, O, O2)
        cases += r.cases
        if not r.passed and bad is None:
            bad = r.counterexample
    results.append(CheckResult("Nonexistence", bad is None, cases, bad, {"region_pairs": len(pairs)}))
    variants = [False] + ([True] if cc.partial_involution is not None else [])
    for flag in variants:
        cases, bad, worst = 0, None, 0.0
        for O, O2 in pairs:
            r = check_commutativity(cc, O, O2, rng, element_pairs, flag, reading=reading)
            cases += r.cases
            worst = max(worst, r.detail.get("max_deviation", 0.0))
            if not r.passed and bad is None:
                bad = r.counterexample
        name = "Commutativity (involution)" if flag else "Commutativity"
        results.append(CheckResult(name, bad is None, cases, bad, {"region_pairs": len(pairs), "max_deviation": worst}))
    return results
