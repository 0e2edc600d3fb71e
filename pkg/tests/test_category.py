import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catfield.category import (
    FinCategory,
    check_axioms,
    compose_functors,
    core_groupoid,
    cyclic_group,
    discrete,
    free_acyclic,
    group,
    identity_functor,
    indiscrete,
    inverse_involution,
    involution_from_json,
    make_standard,
    monoid,
    opposite,
    preorder,
    product,
    reversal_involution,
    symmetric_group,
    trivial_involution,
    validate_category,
    validate_functor,
    validate_involution,
)
from catfield.errors import (
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
    ObjectsNotCovered,
    UnknownArrow,
    VarianceViolation,
)
from conftest import chain, corpus_categories, diamond
from oracles import path_count


def raw_interval():
    return {
        "objects": ["X", "Y"],
        "arrows": [{"id": "1X", "dom": "X", "cod": "X"}, {"id": "1Y", "dom": "Y", "cod": "Y"}, {"id": "f", "dom": "X", "cod": "Y"}],
        "identities": {"X": "1X", "Y": "1Y"},
        "compose": [["1X", "1X", "1X"], ["1Y", "1Y", "1Y"], ["f", "1X", "f"], ["1Y", "f", "f"]],
    }


# ---------------------------------------------------------------- validation
def test_terminal_category_is_valid():
    raw = {"objects": ["*"], "arrows": [{"id": "1", "dom": "*", "cod": "*"}], "identities": {"*": "1"}, "compose": [["1", "1", "1"]]}
    cat = validate_category(raw)
    assert len(cat.objects) == 1 and len(cat.arrows) == 1


def test_interval_category_is_valid():
    cat = validate_category(raw_interval())
    assert cat.compose("f", "1X") == "f"
    assert cat.compose("1X", "f") is None


def test_missing_composite_is_reported():
    raw = raw_interval()
    raw["compose"].pop()
    with pytest.raises(MissingComposite, match="1Y"):
        validate_category(raw)


def test_dangling_endpoint():
    raw = raw_interval()
    raw["arrows"].append({"id": "g", "dom": "Y", "cod": "Z"})
    with pytest.raises(DanglingEndpoint):
        validate_category(raw)


def test_identity_violation():
    arrows = [{"id": x, "dom": "*", "cod": "*"} for x in ("1", "a")]
    compose = [["1", "1", "1"], ["1", "a", "a"], ["a", "1", "1"], ["a", "a", "a"]]
    raw = {"objects": ["*"], "arrows": arrows, "identities": {"*": "1"}, "compose": compose}
    with pytest.raises(IdentityViolation, match="'a'"):
        validate_category(raw)


def test_wrong_endpoints_in_table():
    raw = raw_interval()
    raw["compose"] = [c if c[:2] != ["f", "1X"] else ["f", "1X", "1Y"] for c in raw["compose"]]
    with pytest.raises(BadComposite):
        validate_category(raw)


def test_associativity_violation_names_the_triple():
    # unital table on {1, a, b} with every product of non-units equal to 1:
    # (a∘a)∘b = b but a∘(a∘b) = a
    arrows = [{"id": x, "dom": "*", "cod": "*"} for x in ("1", "a", "b")]
    compose = [["1", x, x] for x in ("1", "a", "b")] + [[x, "1", x] for x in ("a", "b")]
    compose += [[g, f, "1"] for g in ("a", "b") for f in ("a", "b")]
    raw = {"objects": ["*"], "arrows": arrows, "identities": {"*": "1"}, "compose": compose}
    with pytest.raises(AssociativityViolation, match="h="):
        validate_category(raw)


def test_unknown_arrow_lookup():
    with pytest.raises(UnknownArrow):
        indiscrete(2).check_arrow("nope")


def test_json_roundtrip():
    cat = symmetric_group(3)
    again = validate_category(json.loads(json.dumps(cat.to_json())))
    assert again == cat


# ---------------------------------------------------------------- generators
def test_discrete_and_indiscrete_counts():
    for n in range(1, 7):
        assert len(discrete(n).arrows) == n
        ind = indiscrete(n)
        assert len(ind.arrows) == n * n
        assert all(len(ind.hom(x, y)) == 1 for x in ind.objects for y in ind.objects)


def test_free_acyclic_counts_paths():
    cat = free_acyclic(["X", "Y", "Z"], [("f", "X", "Y"), ("g", "Y", "Z")])
    assert len(cat.arrows) == 6 == path_count(["X", "Y", "Z"], [("f", "X", "Y"), ("g", "Y", "Z")])
    assert cat.compose("g", "f") == "g.f"
    assert len(diamond().arrows) == 10


def test_free_acyclic_rejects_cycles():
    with pytest.raises(GraphHasCycle):
        free_acyclic(["X", "Y"], [("f", "X", "Y"), ("g", "Y", "X")])


def test_preorder_requires_reflexive_transitive():
    with pytest.raises(NotAPreorder):
        preorder(["p", "q"], [("p", "q")])
    with pytest.raises(NotAPreorder):
        preorder(["p", "q", "r"], [(o, o) for o in "pqr"] + [("p", "q"), ("q", "r")])


def test_monoid_and_group_tables():
    bad = {"e": {"e": "e", "a": "a", "b": "b"}, "a": {"e": "a", "a": "e", "b": "e"}, "b": {"e": "b", "a": "e", "b": "e"}}
    with pytest.raises(NotAssociativeTable):
        monoid(["e", "a", "b"], bad)
    with pytest.raises(NoInverse):
        group(["e", "z"], {"e": {"e": "e", "z": "z"}, "z": {"e": "z", "z": "z"}})
    z3 = cyclic_group(3)
    assert z3.compose("g1", "g2") == "g0"


def test_make_standard_dispatch():
    assert make_standard("indiscrete", 2) == indiscrete(2)
    with pytest.raises(ValueError):
        make_standard("nonsense")


@pytest.mark.parametrize("cat", corpus_categories(), ids=lambda c: c.name)
def test_corpus_satisfies_axioms(cat):
    check_axioms(cat)


@pytest.mark.parametrize("cat", [chain(3), diamond(), symmetric_group(3), indiscrete(3)], ids=lambda c: c.name)
def test_opposite_is_involutive(cat):
    op = opposite(cat)
    check_axioms(op)
    back = opposite(op)
    assert back.arrows == cat.arrows and back.table == cat.table


def test_product_category():
    p = product(cyclic_group(2), indiscrete(2))
    check_axioms(p)
    assert len(p.arrows) == 8


# ---------------------------------------------------------------- groupoids
def test_core_groupoid_examples():
    assert set(core_groupoid(indiscrete(2)).arrows) == set(indiscrete(2).arrows)
    interval = free_acyclic(["X", "Y"], [("f", "X", "Y")])
    assert set(core_groupoid(interval).arrows) == {"1_X", "1_Y"}
    assert set(core_groupoid(cyclic_group(2)).arrows) == {"g0", "g1"}


# ---------------------------------------------------------------- functors
def test_functor_validation_and_composition():
    cat = indiscrete(3)
    swap = {"1": "2", "2": "1", "3": "3"}
    amap = {a: cat.hom(swap[cat.dom[a]], swap[cat.cod[a]])[0] for a in cat.arrows}
    F = validate_functor(cat, cat, swap, amap)
    FF = compose_functors(F, F)
    assert FF.arrow_map == identity_functor(cat).arrow_map
    bad = dict(amap)
    bad["1->2"] = "1->1"
    with pytest.raises(NotAFunctor):
        validate_functor(cat, cat, swap, bad)


def test_contravariant_functor_reverses_composition():
    cat = chain(3)
    op = opposite(cat)
    F = validate_functor(cat, op, {o: o for o in cat.objects}, {a: a for a in cat.arrows}, "contravariant")
    assert F.variance == "contravariant"


# ---------------------------------------------------------------- involutions
def test_trivial_structure_is_valid_everywhere():
    for cat in (chain(3), diamond(), cyclic_group(3)):
        inv = trivial_involution(cat)
        assert inv.carrier == frozenset(cat.identities)


def test_reversal_is_a_dagger_structure():
    inv = reversal_involution(indiscrete(4))
    assert inv.is_dagger_structure and inv.is_whole
    assert all(inv.dagger[inv.dagger[a]] == a for a in inv.carrier)


def test_inverse_involution_on_groups():
    inv = inverse_involution(symmetric_group(3))
    assert inv.is_whole
    assert all(inv.dagger[inv.dagger[a]] == a for a in inv.carrier)


def test_involution_errors():
    cat = indiscrete(2)
    with pytest.raises(VarianceViolation):
        validate_involution(cat, cat.arrows, {a: a for a in cat.arrows}, "contravariant")
    with pytest.raises(ObjectsNotCovered):
        validate_involution(cat, ["1->1"], {"1->1": "1->1"})
    c3 = chain(3)
    with pytest.raises(NotClosedUnderComposition):
        validate_involution(c3, ["1_v0", "1_v1", "1_v2", "e0", "e1"], {a: a for a in ("1_v0", "1_v1", "1_v2", "e0", "e1")})
    z3 = cyclic_group(3)
    with pytest.raises(NotInvolutive):
        validate_involution(z3, z3.arrows, {"g0": "g0", "g1": "g2", "g2": "g0"})


def test_involution_from_json_kinds():
    cat = indiscrete(2)
    assert involution_from_json(cat, {"kind": "reversal"}).is_whole
    assert involution_from_json(cat, {"kind": "trivial"}).carrier == frozenset(cat.identities)


# ---------------------------------------------------------------- properties
@st.composite
def random_preorders(draw):
    n = draw(st.integers(1, 5))
    objs = [f"o{i}" for i in range(n)]
    rel = {(a, a) for a in objs}
    for a in objs:
        for b in objs:
            if draw(st.booleans()):
                rel.add((a, b))
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return objs, sorted(rel)


@given(random_preorders())
@settings(max_examples=40, deadline=None)
def test_random_preorders_are_categories(data):
    objs, rel = data
    cat = preorder(objs, rel)
    check_axioms(cat)
    assert len(cat.arrows) == len(rel)
    assert isinstance(cat, FinCategory)
    op = opposite(opposite(cat))
    assert op.table == cat.table


@given(st.integers(1, 6))
@settings(max_examples=10, deadline=None)
def test_core_groupoid_is_a_groupoid(n):
    core = core_groupoid(cyclic_group(n))
    for a in core.arrows:
        assert any(core.compose(b, a) == core.identity[core.dom[a]] for b in core.arrows)
