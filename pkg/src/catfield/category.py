"""Finite categories stored as explicit composition tables.

Objects and arrows are opaque string identifiers. Declaration order is kept
and used wherever a matrix index is needed.
"""
from __future__ import annotations

import graphlib
import itertools
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .errors import (
    AssociativityViolation,
    BadComposite,
    DanglingEndpoint,
    GraphHasCycle,
    IdentityViolation,
    MissingComposite,
    NoInverse,
    NotAFunctor,
    NotAPreorder,
    NotAssociativeTable,
    NotClosedUnderComposition,
    NotInvolutive,
    NoUnit,
    ObjectsNotCovered,
    UnknownArrow,
    UnknownObject,
    VarianceViolation,
)

Variance = Literal["covariant", "contravariant"]


@dataclass(frozen=True, eq=False)
class FinCategory:
    objects: tuple[str, ...]
    arrows: tuple[str, ...]
    dom: Mapping[str, str]
    cod: Mapping[str, str]
    identity: Mapping[str, str]
    table: Mapping[tuple[str, str], str]
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)
        set_("objects", tuple(self.objects))
        set_("arrows", tuple(self.arrows))
        set_("dom", MappingProxyType(dict(self.dom)))
        set_("cod", MappingProxyType(dict(self.cod)))
        set_("identity", MappingProxyType(dict(self.identity)))
        set_("table", MappingProxyType(dict(self.table)))
        set_("index", {a: i for i, a in enumerate(self.arrows)})
        set_("object_index", {o: i for i, o in enumerate(self.objects)})
        set_("identities", frozenset(self.identity.values()))
        into: dict[str, list[str]] = {o: [] for o in self.objects}
        out: dict[str, list[str]] = {o: [] for o in self.objects}
        hom: dict[tuple[str, str], list[str]] = {}
        for a in self.arrows:
            into.setdefault(self.cod[a], []).append(a)
            out.setdefault(self.dom[a], []).append(a)
            hom.setdefault((self.dom[a], self.cod[a]), []).append(a)
        set_("_into", {k: tuple(v) for k, v in into.items()})
        set_("_out", {k: tuple(v) for k, v in out.items()})
        set_("_hom", {k: tuple(v) for k, v in hom.items()})

    # ----------------------------------------------------------------- queries
    def __len__(self) -> int:
        return len(self.arrows)

    def __contains__(self, arrow: str) -> bool:
        return arrow in self.index

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.arrows == other.arrows
            and dict(self.dom) == dict(other.dom)
            and dict(self.cod) == dict(other.cod)
            and dict(self.identity) == dict(other.identity)
            and dict(self.table) == dict(other.table)
        )

    def __hash__(self) -> int:
        return hash((self.objects, self.arrows))

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return f"FinCategory({label}{len(self.objects)} objects, {len(self.arrows)} arrows)"

    def compose(self, g: str, f: str) -> str | None:
        """``g∘f``, or None when ``dom(g) != cod(f)``."""
        return self.table.get((g, f))

    def is_identity(self, arrow: str) -> bool:
        return arrow in self.identities

    def hom(self, source: str, target: str) -> tuple[str, ...]:
        return self._hom.get((source, target), ())

    def arrows_into(self, obj: str) -> tuple[str, ...]:
        return self._into.get(obj, ())

    def arrows_from(self, obj: str) -> tuple[str, ...]:
        return self._out.get(obj, ())

    def check_arrow(self, arrow: str) -> str:
        if arrow not in self.index:
            raise UnknownArrow(f"{arrow!r} is not an arrow of {self!r}")
        return arrow

    def check_object(self, obj: str) -> str:
        if obj not in self.object_index:
            raise UnknownObject(f"{obj!r} is not an object of {self!r}")
        return obj

    @property
    def composition_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Index arrays (g, f, g∘f) over every composable pair, in table order."""
        if "arrays" not in self._cache:
            idx = self.index
            triples = np.array(
                [(idx[g], idx[f], idx[gf]) for (g, f), gf in self.table.items()],
                dtype=np.intp,
            ).reshape(-1, 3)
            self._cache["arrays"] = (triples[:, 0].copy(), triples[:, 1].copy(), triples[:, 2].copy())
        return self._cache["arrays"]

    @property
    def factorizations(self) -> Mapping[str, tuple[tuple[str, str], ...]]:
        """For each arrow h, every pair (g, f) with h = g∘f."""
        if "factorizations" not in self._cache:
            fac: dict[str, list[tuple[str, str]]] = {a: [] for a in self.arrows}
            for (g, f), gf in self.table.items():
                fac[gf].append((g, f))
            self._cache["factorizations"] = {k: tuple(v) for k, v in fac.items()}
        return self._cache["factorizations"]

    def is_indiscrete(self) -> bool:
        n = len(self.objects)
        return len(self.arrows) == n * n and all(
            len(self.hom(x, y)) == 1 for x in self.objects for y in self.objects
        )

    def closure(self, arrows: Iterable[str]) -> frozenset[str]:
        """Smallest composition-closed arrow set containing ``arrows``."""
        result = set(arrows)
        frontier = set(result)
        while frontier:
            new = set()
            for g in frontier:
                for f in list(result):
                    for x, y in ((g, f), (f, g)):
                        h = self.table.get((x, y))
                        if h is not None and h not in result:
                            new.add(h)
            result |= new
            frontier = new
        return frozenset(result)

    def subcategory(self, arrows: Iterable[str], objects: Iterable[str] | None = None, name: str = "") -> FinCategory:
        """Restrict to ``arrows`` (plus identities of ``objects``; default: all objects).

        The arrow set must already be closed under composition.
        """
        objs = tuple(self.objects) if objects is None else tuple(o for o in self.objects if o in set(objects))
        keep = set(arrows) | {self.identity[o] for o in objs}
        for a in keep:
            self.check_arrow(a)
            if self.dom[a] not in objs or self.cod[a] not in objs:
                raise NotClosedUnderComposition(f"arrow {a!r} leaves the object set")
        table = {}
        for (g, f), gf in self.table.items():
            if g in keep and f in keep:
                if gf not in keep:
                    raise NotClosedUnderComposition(f"{g}∘{f} = {gf} is missing from the arrow set")
                table[(g, f)] = gf
        ordered = tuple(a for a in self.arrows if a in keep)
        return FinCategory(
            objs,
            ordered,
            {a: self.dom[a] for a in ordered},
            {a: self.cod[a] for a in ordered},
            {o: self.identity[o] for o in objs},
            table,
            name=name or self.name,
        )

    def to_json(self) -> dict:
        return {
            "id": self.name,
            "objects": list(self.objects),
            "arrows": [{"id": a, "dom": self.dom[a], "cod": self.cod[a]} for a in self.arrows],
            "identities": dict(self.identity),
            "compose": [[g, f, gf] for (g, f), gf in self.table.items()],
        }


# --------------------------------------------------------------------- checks
def check_axioms(cat: FinCategory) -> None:
    """Exhaustive scan of the four category conditions."""
    obj = set(cat.objects)
    for a in cat.arrows:
        if cat.dom[a] not in obj or cat.cod[a] not in obj:
            raise DanglingEndpoint(f"arrow {a!r} has undeclared endpoint ({cat.dom[a]!r} -> {cat.cod[a]!r})")
    for o in cat.objects:
        if o not in cat.identity:
            raise IdentityViolation(f"object {o!r} has no identity arrow")
        i = cat.identity[o]
        if i not in cat.index:
            raise DanglingEndpoint(f"identity of {o!r} is undeclared arrow {i!r}")
        if cat.dom[i] != o or cat.cod[i] != o:
            raise IdentityViolation(f"identity {i!r} of {o!r} is not an endomorphism of {o!r}")
    if len(set(cat.identity.values())) != len(cat.identity):
        raise IdentityViolation("identity map is not injective")
    for (g, f), gf in cat.table.items():
        for a in (g, f, gf):
            if a not in cat.index:
                raise DanglingEndpoint(f"composition entry ({g}, {f}) -> {gf} mentions undeclared arrow {a!r}")
        if cat.dom[g] != cat.cod[f]:
            raise BadComposite(f"{g}∘{f} declared but dom({g}) != cod({f})")
        if cat.dom[gf] != cat.dom[f] or cat.cod[gf] != cat.cod[g]:
            raise BadComposite(f"{g}∘{f} = {gf} has wrong endpoints")
    for f in cat.arrows:
        for g in cat.arrows_from(cat.cod[f]):
            if (g, f) not in cat.table:
                raise MissingComposite(f"composable pair ({g}, {f}) has no declared composite")
    for f in cat.arrows:
        if cat.table[(f, cat.identity[cat.dom[f]])] != f or cat.table[(cat.identity[cat.cod[f]], f)] != f:
            raise IdentityViolation(f"identity law fails for {f!r}")
    t = cat.table
    for f in cat.arrows:
        for g in cat.arrows_from(cat.cod[f]):
            gf = t[(g, f)]
            for h in cat.arrows_from(cat.cod[g]):
                if t[(t[(h, g)], f)] != t[(h, gf)]:
                    raise AssociativityViolation(f"(h∘g)∘f != h∘(g∘f) for h={h!r}, g={g!r}, f={f!r}")


def validate_category(raw: Mapping) -> FinCategory:
    """Build a category from its JSON description, checking every axiom."""
    objects = [str(o) for o in raw["objects"]]
    arrows, dom, cod = [], {}, {}
    for entry in raw["arrows"]:
        a = str(entry["id"])
        if a in dom:
            raise BadComposite(f"arrow {a!r} declared twice")
        arrows.append(a)
        dom[a], cod[a] = str(entry["dom"]), str(entry["cod"])
    obj = set(objects)
    for a in arrows:
        if dom[a] not in obj or cod[a] not in obj:
            raise DanglingEndpoint(f"arrow {a!r} has undeclared endpoint ({dom[a]!r} -> {cod[a]!r})")
    table: dict[tuple[str, str], str] = {}
    for g, f, gf in raw.get("compose", []):
        key = (str(g), str(f))
        if key in table and table[key] != str(gf):
            raise BadComposite(f"conflicting composites for {key}")
        table[key] = str(gf)
    identity = {str(k): str(v) for k, v in raw.get("identities", {}).items()}
    cat = FinCategory(objects, arrows, dom, cod, identity, table, name=str(raw.get("id", "")))
    check_axioms(cat)
    return cat


# ----------------------------------------------------------------- generators
def _objects(n_or_objects: int | Sequence[str]) -> list[str]:
    if isinstance(n_or_objects, int):
        return [str(i) for i in range(1, n_or_objects + 1)]
    return [str(o) for o in n_or_objects]


def thin_arrow(p: str, q: str) -> str:
    return f"{p}->{q}"


def discrete(n_or_objects: int | Sequence[str], name: str = "") -> FinCategory:
    objs = _objects(n_or_objects)
    return preorder(objs, [(o, o) for o in objs], name=name or f"discrete{len(objs)}")


def indiscrete(n_or_objects: int | Sequence[str], name: str = "") -> FinCategory:
    objs = _objects(n_or_objects)
    return preorder(objs, itertools.product(objs, objs), name=name or f"indiscrete{len(objs)}")


def preorder(objects: Sequence[str], relation: Iterable[tuple[str, str]], name: str = "") -> FinCategory:
    """Thin category with one arrow ``p->q`` per related pair (p, q)."""
    objs = [str(o) for o in objects]
    rel = {(str(p), str(q)) for p, q in relation}
    obj = set(objs)
    for p, q in rel:
        if p not in obj or q not in obj:
            raise NotAPreorder(f"relation mentions unknown object in ({p!r}, {q!r})")
    for o in objs:
        if (o, o) not in rel:
            raise NotAPreorder(f"relation is not reflexive at {o!r}")
    succ: dict[str, list[str]] = {o: [] for o in objs}
    for p, q in rel:
        succ[p].append(q)
    for p, q in rel:
        for r in succ[q]:
            if (p, r) not in rel:
                raise NotAPreorder(f"relation is not transitive: {p!r}~>{q!r}~>{r!r}")
    order = {o: i for i, o in enumerate(objs)}
    pairs = sorted(rel, key=lambda pq: (order[pq[0]], order[pq[1]]))
    arrows = [thin_arrow(p, q) for p, q in pairs]
    dom = {thin_arrow(p, q): p for p, q in pairs}
    cod = {thin_arrow(p, q): q for p, q in pairs}
    table = {}
    for p, q in pairs:
        for r in succ[q]:
            table[(thin_arrow(q, r), thin_arrow(p, q))] = thin_arrow(p, r)
    identity = {o: thin_arrow(o, o) for o in objs}
    return FinCategory(objs, arrows, dom, cod, identity, table, name=name or "preorder")


def monoid(elements: Sequence[str], table: Mapping | Sequence[Sequence[str]], name: str = "", obj: str = "*") -> FinCategory:
    """One-object category; ``table[g][f]`` is the product g∘f."""
    elems = [str(e) for e in elements]
    if not isinstance(table, Mapping):
        table = {g: dict(zip(elems, row)) for g, row in zip(elems, table)}
    prod = {(str(g), str(f)): str(table[g][f]) for g in elems for f in elems}
    es = set(elems)
    for (g, f), gf in prod.items():
        if gf not in es:
            raise NotAssociativeTable(f"{g}∘{f} = {gf!r} is not an element")
    for a, b, c in itertools.product(elems, repeat=3):
        if prod[(prod[(a, b)], c)] != prod[(a, prod[(b, c)])]:
            raise NotAssociativeTable(f"table is not associative at ({a}, {b}, {c})")
    units = [u for u in elems if all(prod[(u, x)] == x and prod[(x, u)] == x for x in elems)]
    if not units:
        raise NoUnit("table has no two-sided unit")
    unit = units[0]
    return FinCategory(
        [obj], elems, {e: obj for e in elems}, {e: obj for e in elems}, {obj: unit}, prod, name=name or "monoid"
    )


def group(elements: Sequence[str], table: Mapping | Sequence[Sequence[str]], name: str = "") -> FinCategory:
    cat = monoid(elements, table, name=name or "group")
    unit = cat.identity[cat.objects[0]]
    for g in cat.arrows:
        if not any(cat.compose(g, h) == unit and cat.compose(h, g) == unit for h in cat.arrows):
            raise NoInverse(f"element {g!r} has no inverse")
    return cat


def cyclic_group(n: int, name: str = "") -> FinCategory:
    elems = [f"g{k}" for k in range(n)]
    table = [[f"g{(i + j) % n}" for j in range(n)] for i in range(n)]
    return group(elems, table, name=name or f"Z{n}")


def symmetric_group(n: int, name: str = "") -> FinCategory:
    perms = list(itertools.permutations(range(n)))
    label = {p: "p" + "".join(map(str, p)) for p in perms}
    # (g∘f)(i) = g(f(i))
    table = [[label[tuple(g[f[i]] for i in range(n))] for f in perms] for g in perms]
    return group([label[p] for p in perms], table, name=name or f"S{n}")


def free_acyclic(vertices: Sequence[str], edges: Sequence[tuple[str, str, str]], name: str = "") -> FinCategory:
    """Free category on a finite acyclic graph; ``edges`` are (id, source, target).

    A path e1 then e2 then ... ek is named ``"ek.….e1"`` (composition order).
    """
    verts = [str(v) for v in vertices]
    ts = graphlib.TopologicalSorter({v: set() for v in verts})
    for eid, s, t in edges:
        if s not in verts or t not in verts:
            raise UnknownObject(f"edge {eid!r} has unknown endpoint")
        ts.add(str(t), str(s))
    try:
        tuple(ts.static_order())
    except graphlib.CycleError as exc:
        raise GraphHasCycle(f"graph has a cycle through {exc.args[1]}") from None
    out: dict[str, list[tuple[str, str]]] = {v: [] for v in verts}
    for eid, s, t in edges:
        out[str(s)].append((str(eid), str(t)))

    paths: list[tuple[str, str, tuple[str, ...]]] = []

    def extend(start: str, here: str, path: tuple[str, ...]):
        for eid, t in out[here]:
            p = path + (eid,)
            paths.append((start, t, p))
            extend(start, t, p)

    for v in verts:
        extend(v, v, ())
    ident = {v: f"1_{v}" for v in verts}
    pname = lambda p: ".".join(reversed(p))
    arrows = [ident[v] for v in verts] + [pname(p) for _, _, p in paths]
    dom = {ident[v]: v for v in verts} | {pname(p): s for s, _, p in paths}
    cod = {ident[v]: v for v in verts} | {pname(p): t for _, t, p in paths}
    word = {ident[v]: () for v in verts} | {pname(p): p for _, _, p in paths}
    by_word = {w: a for a, w in word.items() if w}
    table = {}
    for f in arrows:
        for g in arrows:
            if dom[g] != cod[f]:
                continue
            w = word[f] + word[g]
            table[(g, f)] = by_word[w] if w else ident[dom[f]]
    return FinCategory(verts, arrows, dom, cod, ident, table, name=name or "free")


def opposite(cat: FinCategory) -> FinCategory:
    table = {(f, g): gf for (g, f), gf in cat.table.items()}
    return FinCategory(cat.objects, cat.arrows, cat.cod, cat.dom, cat.identity, table, name=f"{cat.name}^op")


def product(a: FinCategory, b: FinCategory, name: str = "") -> FinCategory:
    """Product category; arrow (c, d) is named ``"c|d"``."""
    objects = [f"{x}|{y}" for x in a.objects for y in b.objects]
    arrows = [f"{c}|{d}" for c in a.arrows for d in b.arrows]
    dom = {f"{c}|{d}": f"{a.dom[c]}|{b.dom[d]}" for c in a.arrows for d in b.arrows}
    cod = {f"{c}|{d}": f"{a.cod[c]}|{b.cod[d]}" for c in a.arrows for d in b.arrows}
    identity = {f"{x}|{y}": f"{a.identity[x]}|{b.identity[y]}" for x in a.objects for y in b.objects}
    table = {
        (f"{g1}|{g2}", f"{f1}|{f2}"): f"{h1}|{h2}"
        for (g1, f1), h1 in a.table.items()
        for (g2, f2), h2 in b.table.items()
    }
    return FinCategory(objects, arrows, dom, cod, identity, table, name=name or f"{a.name}x{b.name}")


def make_standard(kind: str, *args, **kwargs) -> FinCategory:
    """Dispatch by name: discrete, indiscrete, preorder, monoid, group,
    free_acyclic, opposite, cyclic, symmetric."""
    builders = {
        "discrete": discrete,
        "indiscrete": indiscrete,
        "preorder": preorder,
        "monoid": monoid,
        "group": group,
        "free_acyclic": free_acyclic,
        "opposite": opposite,
        "cyclic": cyclic_group,
        "symmetric": symmetric_group,
    }
    if kind not in builders:
        raise ValueError(f"unknown standard category kind {kind!r}")
    return builders[kind](*args, **kwargs)


def inverse_of(cat: FinCategory, f: str) -> str | None:
    """A two-sided inverse of ``f``, if one exists."""
    one_dom, one_cod = cat.identity[cat.dom[f]], cat.identity[cat.cod[f]]
    for g in cat.hom(cat.cod[f], cat.dom[f]):
        if cat.compose(g, f) == one_dom and cat.compose(f, g) == one_cod:
            return g
    return None


def core_groupoid(cat: FinCategory) -> FinCategory:
    """Wide subcategory of invertible arrows."""
    inv = [a for a in cat.arrows if inverse_of(cat, a) is not None]
    return cat.subcategory(inv, name=f"core({cat.name})")


# -------------------------------------------------------------------- functors
@dataclass(frozen=True)
class FunctorMap:
    source: FinCategory
    target: FinCategory
    object_map: Mapping[str, str]
    arrow_map: Mapping[str, str]
    variance: Variance = "covariant"

    def __call__(self, arrow: str) -> str:
        return self.arrow_map[arrow]


def validate_functor(source, target, object_map, arrow_map, variance: Variance = "covariant") -> FunctorMap:
    for o in source.objects:
        if object_map.get(o) not in target.object_index:
            raise NotAFunctor(f"object {o!r} is not mapped into the target")
    for a in source.arrows:
        b = arrow_map.get(a)
        if b not in target.index:
            raise NotAFunctor(f"arrow {a!r} is not mapped into the target")
        ends = (object_map[source.dom[a]], object_map[source.cod[a]])
        if variance == "contravariant":
            ends = ends[::-1]
        if (target.dom[b], target.cod[b]) != ends:
            raise NotAFunctor(f"arrow {a!r} maps to {b!r} with mismatched endpoints")
    for o in source.objects:
        if arrow_map[source.identity[o]] != target.identity[object_map[o]]:
            raise NotAFunctor(f"identity of {o!r} is not preserved")
    for (g, f), gf in source.table.items():
        expect = (
            target.compose(arrow_map[g], arrow_map[f])
            if variance == "covariant"
            else target.compose(arrow_map[f], arrow_map[g])
        )
        if expect != arrow_map[gf]:
            raise NotAFunctor(f"composition not preserved at ({g}, {f})")
    return FunctorMap(source, target, dict(object_map), dict(arrow_map), variance)


def identity_functor(cat: FinCategory) -> FunctorMap:
    return FunctorMap(cat, cat, {o: o for o in cat.objects}, {a: a for a in cat.arrows})


def compose_functors(G: FunctorMap, F: FunctorMap) -> FunctorMap:
    """G∘F; variances multiply."""
    variance = "covariant" if F.variance == G.variance else "contravariant"
    return FunctorMap(
        F.source,
        G.target,
        {o: G.object_map[F.object_map[o]] for o in F.source.objects},
        {a: G.arrow_map[F.arrow_map[a]] for a in F.source.arrows},
        variance,
    )


# ------------------------------------------------------------------ involution
@dataclass(frozen=True)
class InvolutionStructure:
    category: FinCategory
    carrier: frozenset[str]
    dagger: Mapping[str, str]
    variance: Variance
    is_dagger_structure: bool

    def __call__(self, arrow: str) -> str:
        return self.dagger[arrow]

    @property
    def is_whole(self) -> bool:
        return len(self.carrier) == len(self.category.arrows)

    def carrier_category(self) -> FinCategory:
        return self.category.subcategory(self.carrier)

    def restrict(self, sub: FinCategory) -> InvolutionStructure:
        """The same dagger on a wide subcategory whose arrows lie in the carrier."""
        arrows = frozenset(sub.arrows)
        if not arrows <= self.carrier:
            raise NotClosedUnderComposition("subcategory leaves the involution carrier")
        return validate_involution(sub, arrows, {a: self.dagger[a] for a in arrows}, self.variance)


def validate_involution(cat: FinCategory, carrier: Iterable[str], dagger: Mapping[str, str], variance: Variance = "contravariant") -> InvolutionStructure:
    carrier = frozenset(carrier)
    for a in carrier:
        cat.check_arrow(a)
    missing = [o for o in cat.objects if cat.identity[o] not in carrier]
    if missing:
        raise ObjectsNotCovered(f"carrier lacks identities of {missing}")
    for (g, f), gf in cat.table.items():
        if g in carrier and f in carrier and gf not in carrier:
            raise NotClosedUnderComposition(f"{g}∘{f} = {gf} is outside the carrier")
    for a in carrier:
        b = dagger.get(a)
        if b not in carrier:
            raise NotInvolutive(f"dagger({a!r}) = {b!r} is not in the carrier")
        if dagger.get(b) != a:
            raise NotInvolutive(f"dagger(dagger({a!r})) = {dagger.get(b)!r}")
    objmap = {}
    for o in cat.objects:
        img = dagger[cat.identity[o]]
        if not cat.is_identity(img):
            raise VarianceViolation(f"dagger sends identity of {o!r} to non-identity {img!r}")
        objmap[o] = cat.dom[img]
    for a in carrier:
        b = dagger[a]
        ends = (objmap[cat.dom[a]], objmap[cat.cod[a]])
        if variance == "contravariant":
            ends = ends[::-1]
        if (cat.dom[b], cat.cod[b]) != ends:
            raise VarianceViolation(f"dagger({a!r}) = {b!r} has endpoints incompatible with a {variance} involution")
    for (g, f), gf in cat.table.items():
        if g in carrier and f in carrier:
            expect = (
                cat.compose(dagger[g], dagger[f]) if variance == "covariant" else cat.compose(dagger[f], dagger[g])
            )
            if expect != dagger[gf]:
                raise VarianceViolation(f"dagger does not respect composition at ({g}, {f})")
    is_dagger = variance == "contravariant" and all(objmap[o] == o for o in cat.objects)
    return InvolutionStructure(cat, carrier, MappingProxyType({a: dagger[a] for a in carrier}), variance, is_dagger)


def trivial_involution(cat: FinCategory) -> InvolutionStructure:
    ids = cat.identities
    return validate_involution(cat, ids, {i: i for i in ids}, "contravariant")


def reversal_involution(cat: FinCategory) -> InvolutionStructure:
    """Dagger sending the unique arrow p->q to the unique arrow q->p (symmetric thin categories)."""
    dagger = {}
    for a in cat.arrows:
        back = cat.hom(cat.cod[a], cat.dom[a])
        if len(back) != 1 or len(cat.hom(cat.dom[a], cat.cod[a])) != 1:
            raise NotInvolutive(f"arrow {a!r} has no unique reverse")
        dagger[a] = back[0]
    return validate_involution(cat, cat.arrows, dagger, "contravariant")


def inverse_involution(cat: FinCategory) -> InvolutionStructure:
    """Dagger = inverse, on the core groupoid of ``cat``."""
    dagger = {}
    for a in cat.arrows:
        inv = inverse_of(cat, a)
        if inv is not None:
            dagger[a] = inv
    return validate_involution(cat, dagger.keys(), dagger, "contravariant")


def involution_from_json(cat: FinCategory, raw: Mapping) -> InvolutionStructure:
    kind = raw.get("kind")
    if kind == "reversal":
        return reversal_involution(cat)
    if kind == "inverse":
        return inverse_involution(cat)
    if kind == "trivial":
        return trivial_involution(cat)
    return validate_involution(
        cat, [str(a) for a in raw["carrier"]], {str(k): str(v) for k, v in raw["dagger"].items()},
        raw.get("variance", "contravariant"),
    )
