import pytest
from hypothesis import given, settings, strategies as st

import oracles
from starsheaf.fixtures import double_origin, free_generic, two_components
from starsheaf.generate import SplitMix64, random_instance, random_sheaf
from starsheaf.gset import cyclic_group, regular_action, trivial_action
from starsheaf.gsheaf import (
    GSheaf,
    NotEquivariant,
    PathIncoherent,
    SheafMorphism,
    SiteMismatch,
    TooLarge,
    are_isomorphic,
    disjoint_union,
    identity_morphism,
    image,
    inclusion,
    initial_sheaf,
    is_epi,
    is_isomorphism,
    is_mono,
    morphisms,
    pairing,
    product,
    projections,
    sheaf_condition_holds,
    subsheaf,
    subsheaf_subsets,
    subsheaves,
    terminal_sheaf,
)
from starsheaf.site import chain_site, punctual_site, validate_site


def v_site():
    return validate_site(["eta", "a", "b"], [("eta", "a"), ("eta", "b")], "eta")


def constant_on(site, X):
    return GSheaf(site, X.group, {p: X for p in site.points}, {(b, a): {x: x for x in X.points} for a, b in site.hasse})


def tiny(seed):
    return random_instance(seed, points=3, group_order=4, max_stalk=3)[1]


def tiny_pair(seed):
    """Two random sheaves over one random context."""
    ctx, D = random_instance(seed, points=3, group_order=4, max_stalk=3)
    return D, random_sheaf(SplitMix64(seed + 10**9), ctx, 3)


def test_validate_sheaf_examples():
    C2 = cyclic_group(2)
    initial_sheaf(chain_site(2), C2)
    R = regular_action(C2)
    GSheaf(chain_site(2), C2, {"eta": R, "s1": R}, {("s1", "eta"): {0: 0, 1: 1}})
    with pytest.raises(NotEquivariant):
        GSheaf(chain_site(2), C2, {"eta": R, "s1": trivial_action(C2, ["a"])}, {("s1", "eta"): {"a": 0}})


def test_path_incoherent_on_diamond():
    G = cyclic_group(1)
    site = validate_site(["eta", "a", "b", "c"], [("eta", "a"), ("eta", "b"), ("a", "c"), ("b", "c")], "eta")
    X = trivial_action(G, ["x", "y"])
    loc = {("a", "eta"): {"x": "x", "y": "y"}, ("b", "eta"): {"x": "y", "y": "x"},
           ("c", "a"): {"x": "x", "y": "y"}, ("c", "b"): {"x": "x", "y": "y"}}
    with pytest.raises(PathIncoherent):
        GSheaf(site, G, {p: X for p in site.points}, loc)


def test_sections_examples():
    _, D = double_origin()
    assert D.sections({"eta"}).points == (("x",),)
    assert D.germ_map({"eta"}, "eta").is_bijective()
    G = cyclic_group(1)
    V = v_site()
    E = GSheaf(V, G, {"eta": trivial_action(G, ["x", "y"]), "a": trivial_action(G, ["x"]), "b": trivial_action(G, ["y"])},
               {("a", "eta"): {"x": "x"}, ("b", "eta"): {"y": "y"}})
    assert len(E.sections(V.whole())) == 0
    X = regular_action(cyclic_group(3))
    C = constant_on(chain_site(3), X)
    assert len(C.sections(chain_site(3).whole())) == len(X)
    assert D.sections(set()).points == ((),)


@pytest.mark.parametrize("seed", range(40))
def test_sections_match_oracle(seed):
    _, D = random_instance(seed, points=4, group_order=8, max_stalk=6)
    for U in D.site.opens():
        got = sorted(D.sections(U).points)
        assert got == sorted(oracles.sections(D, U))


@pytest.mark.parametrize("seed", range(30))
def test_sheaf_condition_and_stalk_formula(seed):
    _, D = random_instance(seed, points=4, group_order=8, max_stalk=6)
    assert sheaf_condition_holds(D)
    for s in D.site.points:
        assert len(D.sections(D.site.minimal_open(s))) == len(D.stalks[s])


def test_mono_epi_examples():
    _, D = double_origin()
    idD = identity_morphism(D)
    assert is_mono(idD) and is_epi(idD) and is_isomorphism(idD)
    X = D.stalks["eta"]
    C = constant_on(D.site, X)
    collapse = SheafMorphism(D, C, {"eta": {"x": "x"}, "s1": {"a": "x", "b": "x"}})
    assert not is_mono(collapse) and is_epi(collapse)
    a_branch = subsheaf(D, {"eta": {"x"}, "s1": {"a"}})
    inc = inclusion(a_branch, D)
    assert is_mono(inc) and not is_epi(inc) and not is_isomorphism(inc)


def test_image_examples():
    _, D = double_origin()
    im, mono, epi = image(identity_morphism(D))
    assert im == D
    T = terminal_sheaf(D.site, D.group)
    to_T = SheafMorphism(D, T, {p: {x: "*" for x in D.stalks[p].points} for p in D.site.points})
    assert image(to_T)[0] == T
    C = constant_on(D.site, D.stalks["eta"])
    im, mono, epi = image(SheafMorphism(D, C, {"eta": {"x": "x"}, "s1": {"a": "x", "b": "x"}}))
    assert all(im.stalks[p].points == ("x",) for p in D.site.points)


def test_image_factorization_random():
    for seed in range(30):
        D, E = tiny_pair(seed)
        for phi in list(morphisms(D, E))[:5]:
            im, mono, epi = image(phi)
            assert is_mono(mono) and is_epi(epi) and mono.compose(epi) == phi


def test_product_examples():
    _, D = double_origin()
    T = terminal_sheaf(D.site, D.group)
    assert are_isomorphic(product(D, T), D)
    assert are_isomorphic(product(T, T), T)
    G = cyclic_group(1)
    A = constant_on(punctual_site(), trivial_action(G, [1, 2]))
    B = constant_on(punctual_site(), trivial_action(G, [1, 2, 3]))
    assert len(product(A, B).stalks["eta"]) == 6
    with pytest.raises(SiteMismatch):
        product(A, D)


def test_product_universal_property():
    for seed in range(40):
        C, D = tiny_pair(seed)
        E = disjoint_union([D, terminal_sheaf(D.site, D.group)])
        p1, p2 = projections(D, E)
        into_P = list(morphisms(C, product(D, E)))
        pairs = [(f, g) for f in morphisms(C, D) for g in morphisms(C, E)]
        assert len(into_P) == len(pairs)
        for f, g in pairs:
            h = pairing(f, g)
            assert p1.compose(h) == f and p2.compose(h) == g


def test_disjoint_union_examples():
    _, D = double_origin()
    I = disjoint_union([], site=D.site, group=D.group)
    assert I == initial_sheaf(D.site, D.group)
    assert are_isomorphic(disjoint_union([D, I]), D)
    _, U = two_components()
    assert len(U.stalks["s1"]) == 3


def test_subsheaves_examples():
    G = cyclic_group(1)
    T = terminal_sheaf(punctual_site(), G)
    assert len(subsheaves(T)) == 2
    C2 = cyclic_group(2)
    R = constant_on(punctual_site(), regular_action(C2))
    assert len(subsheaves(R)) == 2
    _, D = double_origin()
    # empty, eta only, a-branch, b-branch, everything
    assert len(subsheaves(D)) == 5


def test_subsheaves_guard():
    X = trivial_action(cyclic_group(1), list(range(17)))
    with pytest.raises(TooLarge):
        subsheaf_subsets(constant_on(punctual_site(), X))


@pytest.mark.parametrize("seed", range(30))
def test_subsheaves_match_oracle(seed):
    D = tiny(seed)
    got = sorted(sorted((p, tuple(sorted(map(str, S)))) for p, S in fam.items()) for fam in subsheaf_subsets(D))
    want = sorted(sorted((p, tuple(sorted(map(str, S)))) for p, S in fam.items()) for fam in oracles.subsheaf_families(D))
    assert got == want


@pytest.mark.parametrize("seed", range(30))
def test_morphism_counts_match_oracle(seed):
    D, E = tiny_pair(seed)
    ms = list(morphisms(D, E))
    assert len(ms) == oracles.morphism_count(D, E)
    assert len(set(ms)) == len(ms)
    inj = list(morphisms(D, E, injective=True))
    assert len(inj) == sum(1 for m in ms if is_mono(m))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**64 - 1))
def test_mono_iff_injective_on_all_sections(seed):
    D = tiny(seed % 10**6)
    E = disjoint_union([D, D])
    for phi in list(morphisms(D, E))[:4]:
        sectionwise = all(phi.on_sections(U).is_injective() for U in D.site.opens())
        assert is_mono(phi) == sectionwise


def test_free_generic_fixture():
    _, D = free_generic(3)
    assert D.is_trivial_action() is False
    assert len(D.sections(D.site.whole())) == 3
