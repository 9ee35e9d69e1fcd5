import pytest
from hypothesis import given, settings, strategies as st

import oracles
from starsheaf.generate import SplitMix64, random_profile, random_site
from starsheaf.gset import cyclic_group, meet, subgroup_generated, symmetric_group
from starsheaf.site import (
    CycleDetected,
    DuplicatePoint,
    FiniteSite,
    GenericInertiaNontrivial,
    GenericNotMinimal,
    InertiaIncompatible,
    InertiaNotMonotone,
    InertiaProfile,
    NotMonotone,
    NotNormal,
    GenericNotPreserved,
    UnknownPoint,
    chain_site,
    generic_point_inclusion,
    inertia_of_open,
    minimal_open,
    opens,
    punctual_site,
    trivial_profile,
    validate_site,
    validate_site_map,
)


def v_site():
    return validate_site(["eta", "a", "b"], [("eta", "a"), ("eta", "b")], "eta")


def test_validate_site_examples():
    assert punctual_site().points == ("eta",)
    c = validate_site(["eta", "s"], [("eta", "s")], "eta")
    assert c.le("eta", "s") and not c.le("s", "eta")
    V = v_site()
    assert not V.le("a", "b") and not V.le("b", "a")
    assert set(V.hasse) == {("eta", "a"), ("eta", "b")}


def test_validate_site_errors():
    with pytest.raises(CycleDetected):
        validate_site(["eta", "a", "b"], [("eta", "a"), ("a", "b"), ("b", "a")], "eta")
    with pytest.raises(GenericNotMinimal):
        validate_site(["eta", "a"], [], "eta")
    with pytest.raises(DuplicatePoint):
        validate_site(["eta", "eta"], [], "eta")
    with pytest.raises(UnknownPoint):
        validate_site(["eta"], [("eta", "q")], "eta")


def test_chain_site():
    assert chain_site(1).points == ("eta",)
    assert chain_site(2).points == ("eta", "s1")
    c4 = chain_site(4)
    assert len(opens(c4)) == 5
    with pytest.raises(ValueError):
        chain_site(0)


def test_transitive_closure_reduces_to_hasse():
    s = FiniteSite(["eta", "a", "b"], [("eta", "a"), ("a", "b"), ("eta", "b")], "eta")
    assert set(s.hasse) == {("eta", "a"), ("a", "b")}


def test_opens_examples():
    assert opens(punctual_site()) == [frozenset(), frozenset({"eta"})]
    assert opens(chain_site(2)) == [frozenset(), frozenset({"eta"}), frozenset({"eta", "s1"})]
    V = v_site()
    assert opens(V) == [frozenset(), {"eta"}, {"eta", "a"}, {"eta", "b"}, {"eta", "a", "b"}]


def test_minimal_open_examples():
    V = v_site()
    assert minimal_open(V, "eta") == {"eta"}
    assert minimal_open(chain_site(3), "s2") == chain_site(3).whole()
    assert minimal_open(V, "a") == {"eta", "a"}


def test_inertia_of_open_examples():
    C2 = cyclic_group(2)
    ctx = InertiaProfile(chain_site(2), C2, {"s1": subgroup_generated(C2, [1])})
    assert inertia_of_open(ctx, {"eta"}).is_trivial()
    assert inertia_of_open(ctx, {"eta", "s1"}).elements == (0, 1)
    assert inertia_of_open(ctx, set()).is_trivial()


def test_inertia_errors():
    S3 = symmetric_group(3)
    t = next(g for g in S3.elements if g and S3.mul(g, g) == 0)
    with pytest.raises(NotNormal):
        InertiaProfile(chain_site(2), S3, {"s1": subgroup_generated(S3, [t])})
    C2 = cyclic_group(2)
    with pytest.raises(GenericInertiaNontrivial):
        InertiaProfile(chain_site(2), C2, {"eta": subgroup_generated(C2, [1])})
    with pytest.raises(InertiaNotMonotone):
        InertiaProfile(chain_site(3), C2, {"s1": subgroup_generated(C2, [1])})


def test_site_map_examples():
    C2 = cyclic_group(2)
    chain = chain_site(2)
    triv = trivial_profile(chain, C2)
    validate_site_map({"eta": "eta", "s1": "s1"}, triv, triv)
    iota = generic_point_inclusion(triv)
    assert iota.preimage({"eta", "s1"}) == {"eta"}
    pt = trivial_profile(punctual_site(), C2)
    # collapsing onto the punctual site is fine with trivial inertia ...
    validate_site_map({"eta": "eta", "s1": "eta"}, triv, pt)
    # ... and fails exactly when the closed point has inertia
    ram = InertiaProfile(chain, C2, {"s1": subgroup_generated(C2, [1])})
    with pytest.raises(InertiaIncompatible):
        validate_site_map({"eta": "eta", "s1": "eta"}, ram, pt)
    with pytest.raises(GenericNotPreserved):
        validate_site_map({"eta": "s1", "s1": "s1"}, triv, triv)
    with pytest.raises(NotMonotone):
        validate_site_map({"eta": "eta", "a": "a", "b": "eta"},
                          trivial_profile(FiniteSite(["eta", "a", "b"], [("eta", "a"), ("a", "b")], "eta"), C2),
                          trivial_profile(v_site(), C2))


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=2**64 - 1), st.integers(min_value=1, max_value=6))
def test_opens_match_down_set_oracle(seed, n):
    site = random_site(SplitMix64(seed), n)
    assert sorted(map(sorted, site.opens())) == sorted(map(sorted, oracles.down_sets(site)))
    for s in site.points:
        assert site.minimal_open(s) in site.opens()
        assert site.le(site.generic, s)


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=2**64 - 1))
def test_inertia_is_intersection_over_neighbourhoods(seed):
    from starsheaf.generate import random_group

    rng = SplitMix64(seed)
    G = random_group(rng, 8)
    site = random_site(rng, 4)
    ctx = random_profile(rng, site, G)
    for s in site.points:
        cap = meet(G, [inertia_of_open(ctx, U) for U in site.opens() if s in U])
        assert cap.elements == ctx[s].elements
