import pytest

from starsheaf import star as S
from starsheaf.fixtures import (
    collapsed_orbit,
    double_origin,
    free_generic,
    ramified_chain,
    ramified_fixed_point,
    two_components,
)
from starsheaf.generate import random_instance
from starsheaf.gset import GAction, cyclic_group, regular_action, trivial_action
from starsheaf.gsheaf import (
    GSheaf,
    are_isomorphic,
    disjoint_union,
    initial_sheaf,
    is_epi,
    is_isomorphism,
    is_mono,
    terminal_sheaf,
)
from starsheaf.site import SiteMap, chain_site, generic_point_inclusion, punctual_site, trivial_profile


def swap_stalk(G):
    return GAction(G, ["x", "y", "z"], lambda g, p: {"x": "y", "y": "x"}.get(p, p) if g else p)


# ---------------------------------------------------------------- star condition


def test_is_star_examples():
    ctx, D = double_origin()
    assert S.is_star(ctx, D)
    ram = ramified_chain()
    G = ram.group
    R = regular_action(G)
    free = GSheaf(ram.site, G, {"eta": R, "s1": R}, {("s1", "eta"): {0: 0, 1: 1}})
    assert not S.is_star(ram, free)
    with pytest.raises(S.NotStar):
        S.require_star(ram, free)
    ctx, D = ramified_fixed_point()
    assert S.is_star(ctx, D)


def test_star_part_examples():
    ctx, D = double_origin()
    assert S.star_part(ctx, D) == D
    ram = ramified_chain()
    XS = S.constant_sheaf(ram, regular_action(ram.group))
    P = S.star_part(ram, XS)
    assert len(P.stalks["s1"]) == 0 and len(P.stalks["eta"]) == 2
    ctx, D = ramified_fixed_point()
    assert S.star_part(ctx, D) == D


def test_smI_part_examples():
    ctx, D = double_origin()
    assert S.smI_part(ctx, D) == D
    ram = ramified_chain()
    R = regular_action(ram.group)
    free = GSheaf(ram.site, ram.group, {"eta": R, "s1": R}, {("s1", "eta"): {0: 0, 1: 1}})
    assert len(S.smI_part(ram, free).stalks["s1"]) == 0
    ctx, D = ramified_fixed_point()
    assert S.smI_part(ctx, D) == D


def test_fixed_subsheaf_examples():
    ctx, D = double_origin()
    assert S.fixed_subsheaf(D) == D
    _, F = free_generic(2)
    assert all(len(X) == 0 for X in S.fixed_subsheaf(F).stalks.values())
    G = cyclic_group(2)
    X = S.constant_sheaf(punctual_site(), swap_stalk(G))
    assert S.fixed_subsheaf(X).stalks["eta"].points == ("z",)
    assert is_mono(S.fixed_counit(X))


def test_quotient_examples():
    ctx, D = double_origin()
    DG, q = S.quotient_sheaf(D)
    assert are_isomorphic(DG, D) and is_epi(q)
    _, F = free_generic(3)
    FG, q = S.quotient_sheaf(F)
    assert are_isomorphic(FG, terminal_sheaf(F.site, F.group)) and is_epi(q)
    X = S.constant_sheaf(punctual_site(), swap_stalk(cyclic_group(2)))
    XG, _ = S.quotient_sheaf(X)
    assert XG.stalks["eta"].points == ("x", "z")


def test_constant_and_star_constant_examples():
    site = chain_site(2)
    G = cyclic_group(2)
    empty = trivial_action(G, [])
    assert S.constant_sheaf(site, empty) == initial_sheaf(site, G)
    triv = trivial_profile(site, G)
    R = regular_action(G)
    assert S.star_constant(triv, R) == S.constant_sheaf(triv, R)
    ram = ramified_chain()
    C = S.star_constant(ram, R)
    assert len(C.stalks["eta"]) == 2 and len(C.stalks["s1"]) == 0


def test_generic_stalk_examples():
    ctx, D = double_origin()
    assert S.generic_stalk(D).points == ("x",)
    R = regular_action(cyclic_group(2))
    assert S.generic_stalk(S.constant_sheaf(chain_site(3), R)) == R
    assert len(S.generic_stalk(initial_sheaf(chain_site(2), R.group))) == 0
    ram = ramified_chain()
    assert S.star_constant_counit(ram, R).is_bijective()


def test_set_and_et_parts_double_origin():
    ctx, D = double_origin()
    Dset, u = S.set_part(ctx, D)
    assert all(Dset.stalks[p].points == ("x",) for p in D.site.points)
    assert is_epi(u)
    Det, v = S.et_part(ctx, D)
    assert is_isomorphism(v)
    assert len(Det.stalks["s1"]) == 2


def test_set_part_idempotent_on_set_sheaf():
    ram = ramified_chain()
    C = S.star_constant(ram, swap_stalk(ram.group))
    Cset, u = S.set_part(ram, C)
    assert is_isomorphism(u)


def test_set_et_require_star():
    ram = ramified_chain()
    R = regular_action(ram.group)
    free = GSheaf(ram.site, ram.group, {"eta": R, "s1": R}, {("s1", "eta"): {0: 0, 1: 1}})
    with pytest.raises(S.NotStar):
        S.set_part(ram, free)
    with pytest.raises(S.NotStar):
        S.et_part(ram, free)


# ---------------------------------------------------------------- components


def test_support_examples():
    site = chain_site(3)
    G = cyclic_group(1)
    assert S.support(initial_sheaf(site, G)) == frozenset()
    assert S.support(terminal_sheaf(site, G)) == site.whole()
    U = frozenset({"eta", "s1"})
    E = terminal_sheaf(site.subsite(U), G)
    assert S.support(S.j_shriek(site, U, E)) == U


def test_pi0_examples():
    R = regular_action(cyclic_group(2))
    assert len(S.pi0(S.constant_sheaf(chain_site(2), R))) == 1
    assert S.pi0(initial_sheaf(chain_site(2), R.group)) == []
    ctx, D = double_origin()
    assert len(S.pi0(D)) == 1
    assert S.component(D, S.pi0(D)[0]) == D
    with pytest.raises(S.UnknownComponent):
        S.component(D, "nope")


def test_decompose_round_trip():
    ctx, D = two_components()
    parts = S.decompose(D)
    assert len(parts) == 2
    assert are_isomorphic(disjoint_union(parts), D)


def test_orbit_sections_examples():
    G = cyclic_group(1)
    T = terminal_sheaf(punctual_site(), G)
    assert len(S.orbit_sections(T)) == 1 and len(S.maximal_orbit_sections(T)) == 1
    ctx, D = double_origin()
    assert len(S.orbit_sections(D)) == 3
    maxi = S.maximal_orbit_sections(D)
    assert len(maxi) == 2 and all(m.open == D.site.whole() for m in maxi)
    ram = ramified_chain()
    C = S.star_constant(ram, regular_action(ram.group))
    assert [m.open for m in S.maximal_orbit_sections(C)] == [frozenset({"eta"})]


def test_orbit_section_morphisms():
    G = cyclic_group(1)
    T = terminal_sheaf(punctual_site(), G)
    assert is_isomorphism(S.orbit_section_morphism(T, S.maximal_orbit_sections(T)[0]))
    ctx, D = double_origin()
    for m in S.maximal_orbit_sections(D):
        phi = S.orbit_section_morphism(D, m)
        assert is_mono(phi) and not is_epi(phi)
    assert is_epi(S.covering_morphism(D))


def test_j_shriek_and_restrict():
    ctx, D = double_origin()
    W = D.site.whole()
    assert S.j_shriek(ctx, W, D) == D
    E = S.j_restrict(D, {"eta"})
    J = S.j_shriek(ctx, {"eta"}, E)
    assert len(J.stalks["s1"]) == 0 and len(J.stalks["eta"]) == 1
    assert is_isomorphism(S.j_unit(ctx, frozenset({"eta"}), E))
    # over the empty open only the group of the argument matters
    assert S.j_shriek(ctx, frozenset(), D) == initial_sheaf(D.site, D.group)


# ---------------------------------------------------------------- ladders and classify


def test_ladder_examples():
    ram = ramified_chain()
    C = S.star_constant(ram, swap_stalk(ram.group))
    assert all(S.ladder4(ram, C).values()) and all(S.ladder3(ram, C).values())
    ctx, D = double_origin()
    assert all(S.ladder3(ctx, D).values())
    assert not any(S.ladder4(ctx, D).values())
    ctx, D = collapsed_orbit()
    assert not any(S.ladder3(ctx, D).values())
    assert set(S.ladder3(ctx, D)) == {"3a", "3c", "3e", "3g", "3i"}
    assert set(S.ladder4(ctx, D)) == {"4a", "4c", "4e", "4f", "4g", "4i"}


def test_classify_examples():
    ram = ramified_chain()
    r = S.classify(ram, S.star_constant(ram, swap_stalk(ram.group)))
    assert r.is_star and r.is_et and r.is_set
    ctx, D = double_origin()
    r = S.classify(ctx, D)
    assert r.is_et and not r.is_set and r.is_loc and r.pi0_size == 1
    r = S.classify(ctx, initial_sheaf(ctx.site, ctx.group))
    assert r.is_star and r.is_et and r.is_set and r.pi0_size == 0 and r.supp == frozenset()


def test_classify_non_star_reports_false():
    ram = ramified_chain()
    R = regular_action(ram.group)
    free = GSheaf(ram.site, ram.group, {"eta": R, "s1": R}, {("s1", "eta"): {0: 0, 1: 1}})
    r = S.classify(ram, free)
    assert not r.is_star and not r.is_et and not r.is_set
    assert all(r.ladder3.values())


def test_properties_of_et():
    ctx, D = double_origin()
    assert S.properties_of_et(ctx, D)
    ctx, D = ramified_fixed_point()
    assert S.classify(ctx, D).is_et
    assert S.properties_of_et(ctx, D)
    ctx, D = collapsed_orbit()
    with pytest.raises(S.NotEt):
        S.properties_of_et(ctx, D)


@pytest.mark.parametrize("seed", range(60))
def test_ladders_agree_on_random(seed):
    for star in (True, False):
        ctx, D = random_instance(seed, star=star)
        r = S.classify(ctx, D)
        assert len(set(r.ladder3.values())) == 1
        assert len(set(r.ladder4.values())) == 1
        assert not all(r.ladder4.values()) or all(r.ladder3.values())
        assert not r.is_set or r.is_et
        assert not r.is_et or r.is_star


# ---------------------------------------------------------------- base change and espace etale


def test_pullback_pushforward_examples():
    ctx, D = double_origin()
    ident = SiteMap(ctx, ctx, {p: p for p in ctx.site.points})
    assert S.pullback(ident, D) == D
    assert are_isomorphic(S.pushforward_et(ident, D), D)
    ram = ramified_chain()
    X = swap_stalk(ram.group)
    assert are_isomorphic(S.star_constant_via_pushforward(ram, X), S.star_constant(ram, X))
    iota = generic_point_inclusion(ram)
    C = S.star_constant(ram, X)
    assert are_isomorphic(S.pullback(iota, C), S.j_restrict(C, {"eta"}))


def test_espace_etale_examples():
    G = cyclic_group(1)
    site = chain_site(3)
    E = S.espace_etale(terminal_sheaf(site, G))
    assert len(E.points) == 3 and E.is_local_isomorphism()
    U = frozenset({"eta", "s1"})
    J = S.j_shriek(site, U, terminal_sheaf(site.subsite(U), G))
    assert len(S.espace_etale(J).points) == 2
    ctx, D = double_origin()
    E = S.espace_etale(D)
    assert len(E.points) == 3 and E.is_local_isomorphism()
    assert len(E.minimal_points()) == 1
    _, F = free_generic(2)
    with pytest.raises(S.NontrivialAction):
        S.espace_etale(F)


def test_espace_etale_sections_recover_sheaf():
    for seed in range(30):
        ctx, D = random_instance(seed, group_order=1)
        E = S.espace_etale(D)
        for U in D.site.opens():
            assert len(E.sections_over(U)) == len(D.sections(U))


def test_pi0_bruteforce_examples():
    G = cyclic_group(1)
    T = terminal_sheaf(chain_site(2), G)
    assert len(S.pi0_bruteforce(T)) == 1
    ctx, D = two_components()
    comps = S.pi0_bruteforce(D)
    assert len(comps) == 2
    ctx, D = double_origin()
    assert S.pi0_bruteforce(D) == [D]


@pytest.mark.parametrize("seed", range(30))
def test_pi0_matches_bruteforce(seed):
    ctx, D = random_instance(seed, points=3, group_order=4, max_stalk=3)
    assert len(S.pi0(D)) == len(S.pi0_bruteforce(D))
    assert sorted(x.key() for x in S.decompose(D)) == sorted(x.key() for x in S.pi0_bruteforce(D))
