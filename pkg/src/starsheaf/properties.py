"""Randomized invariants, one function per law, shared by the tests and ``selftest``.

Every property takes a 64-bit case seed, builds its own instance and returns
True when the law holds. Laws that involve exhaustive enumeration use tiny
instances so that a few hundred cases run in seconds.
"""

from __future__ import annotations

from typing import Callable

from . import io
from .generate import SplitMix64, random_chain, random_instance, random_sheaf, random_site_map
from .gset import EquivariantMap, fixed_points, group_violations, meet, small_groups
from .gsheaf import (
    SUBSHEAF_GUARD,
    are_isomorphic,
    disjoint_union,
    is_epi,
    is_isomorphism,
    is_mono,
    sheaf_condition_holds,
    stalk_sets,
)
from .site import inertia_of_open
from . import star as S
from .valuation import DVRDatum, chain_to_sheaf, dvr_classify, dvr_to_chain, summary_functors

TINY = dict(points=3, group_order=4, max_stalk=3)


# ---------------------------------------------------------------- gset / site / gsheaf


def prop_orbit_stabilizer(seed) -> bool:
    ctx, D = random_instance(seed)
    G = D.group
    return all(len(X.orbit(x)) * len(X.stabilizer(x)) == G.order for X in D.stalks.values() for x in X.points)


def prop_groups_valid(seed) -> bool:
    return all(not group_violations(G.table) for _, G in small_groups())


def prop_inertia_of_point(seed) -> bool:
    """I(s) is the intersection of I(U) over the opens containing s."""
    ctx, _ = random_instance(seed)
    G = ctx.group
    for s in ctx.site.points:
        caps = meet(G, [inertia_of_open(ctx, U) for U in ctx.site.opens() if s in U])
        if caps.elements != ctx[s].elements:
            return False
    return True


def prop_opens_down_closed(seed) -> bool:
    ctx, _ = random_instance(seed)
    site = ctx.site
    ops = site.opens()
    closed = all(site.minimal_open(s) <= U for U in ops for s in U)
    return closed and len(set(ops)) == len(ops) and frozenset() in ops and site.whole() in ops


def prop_sheaf_condition(seed) -> bool:
    ctx, D = random_instance(seed, **TINY)
    return sheaf_condition_holds(D)


# ---------------------------------------------------------------- star


def prop_generator_star(seed) -> bool:
    ctx, D = random_instance(seed)
    return S.is_star(ctx, D)


def prop_ladders(seed) -> bool:
    """Both ladders internally agree, on star and on non-star input."""
    for star in (True, False):
        ctx, D = random_instance(seed, star=star)
        try:
            S.classify(ctx, D)
        except S.LadderDisagreement:
            return False
    return True


def prop_covering(seed) -> bool:
    ctx, D = random_instance(seed)
    if not is_epi(S.covering_morphism(D)):
        return False
    pm = S.pi0_map(D)
    if set(pm.values()) != set(S.pi0(D)):
        return False
    if all(S.ladder4(ctx, D).values()):
        vals = list(pm.values())
        return len(set(vals)) == len(vals) and is_isomorphism(S.covering_morphism(D))
    return True


def prop_star_fixed_points(seed) -> bool:
    ctx, D = random_instance(seed, star=False)
    A = S.star_part(ctx, D)
    return all(set(A.stalks[s].points) == set(fixed_points(D.stalks[s], ctx[s].elements)) for s in ctx.site.points)


def prop_idempotence(seed) -> bool:
    ctx, D = random_instance(seed, star=False)
    A = S.star_part(ctx, D)
    if S.star_part(ctx, A) != A:
        return False
    E, _ = S.et_part(ctx, A)
    T, _ = S.set_part(ctx, A)
    if not are_isomorphic(S.et_part(ctx, E)[0], E) or not are_isomorphic(S.set_part(ctx, T)[0], T):
        return False
    return S.classify(ctx, E).is_et and S.classify(ctx, T).is_set


def star_constant_predicates(ctx, D) -> tuple[bool, bool, bool]:
    """Three independent tests of D being the star-constant sheaf on its generic stalk:
    stalkwise, on sections over every open, and via the unit morphism."""
    eta = D.site.generic
    X = D.stalks[eta]
    stalkwise = all(
        EquivariantMap(D.stalks[s], X, D.restriction(s, eta), _check=False).is_injective()
        and set(D.restriction(s, eta).values()) == set(fixed_points(X, ctx[s].elements))
        for s in ctx.site.points
    )
    on_opens = True
    for U in ctx.site.nonempty_opens():
        f = D.restriction_map(U, frozenset([eta]))
        target = set((y,) for y in fixed_points(X, inertia_of_open(ctx, U).elements))
        if not (f.is_injective() and set(f.mapping.values()) == target):
            on_opens = False
    iso = is_isomorphism(S.star_constant_unit(ctx, D))
    return stalkwise, on_opens, iso


def prop_star_constant_lemma(seed) -> bool:
    """The three predicates agree on a random sheaf and all hold on its star-constant model."""
    ctx, D = random_instance(seed)
    C = S.star_constant(ctx, D.stalks[D.site.generic])
    return len(set(star_constant_predicates(ctx, D))) == 1 and all(star_constant_predicates(ctx, C))


def prop_et_sections_fixed(seed) -> bool:
    ctx, D = random_instance(seed)
    if not S.is_et(ctx, D):
        E, _ = S.et_part(ctx, D)
        return S.properties_of_et(ctx, E)
    return S.properties_of_et(ctx, D)


def prop_pi0_oracle(seed) -> bool:
    ctx, D = random_instance(seed)
    if D.total_size() > SUBSHEAF_GUARD:
        return True
    comps = S.decompose(D)
    brute = S.pi0_bruteforce(D)
    if sorted(map(_stalk_key, comps)) != sorted(map(_stalk_key, brute)):
        return False
    union = disjoint_union(comps, site=D.site, group=D.group)
    return are_isomorphic(union, D)


def _stalk_key(D):
    return tuple(sorted((p, tuple(sorted(map(str, s)))) for p, s in stalk_sets(D).items()))


def prop_star_image(seed) -> bool:
    """is_star iff the smI counit is an isomorphism; smI part has the star stalks."""
    ctx, D = random_instance(seed, star=False, **TINY)
    c = S.smI_counit(ctx, D)
    if S.is_star(ctx, D) != is_isomorphism(c) or not is_mono(c):
        return False
    return stalk_sets(S.smI_part(ctx, D)) == stalk_sets(S.star_part(ctx, D))


def prop_counits(seed) -> bool:
    ctx, D = random_instance(seed)
    X = D.stalks[D.site.generic]
    if len(S.generic_stalk(S.star_constant(ctx, X))) != len(X):
        return False
    rng = SplitMix64(seed)
    U = rng.choice(ctx.site.nonempty_opens())
    E = S.j_restrict(D, U)
    return is_isomorphism(S.j_unit(ctx, U, E)) and S.support(S.j_shriek(ctx, U, E)) <= U


def prop_pushforward_generic(seed) -> bool:
    """Pushing a G-set forward from the generic point gives the star-constant sheaf."""
    ctx, D = random_instance(seed)
    X = D.stalks[D.site.generic]
    P = S.star_constant_via_pushforward(ctx, X)
    Q = S.star_constant(ctx, X)
    return all(len(P.stalks[s]) == len(Q.stalks[s]) for s in ctx.site.points) and are_isomorphic(P, Q)


def prop_espace_etale(seed) -> bool:
    ctx, D = random_instance(seed, **TINY)
    Q, _ = S.quotient_sheaf(D)
    E = S.espace_etale(Q)
    if not E.is_local_isomorphism():
        return False
    return all(sorted(map(str, E.sections_over(U))) == sorted(map(str, Q.sections(U).points)) for U in ctx.site.opens())


def prop_adjunctions(seed) -> bool:
    return all(c.ok for c in adjunction_suite(seed))


def adjunction_suite(seed) -> list:
    """Every brute-force adjunction check on one tiny instance."""
    rng = SplitMix64(seed)
    ctx, D = random_instance(rng, **TINY)
    E = random_sheaf(rng, ctx, TINY["max_stalk"])
    N = random_sheaf(rng, ctx, TINY["max_stalk"], star=False)
    out = []
    C = S.smI_presheaf(ctx, random_sheaf(rng, ctx, TINY["max_stalk"], star=False))
    out.append(S.smI_adjunction(ctx, C, N))
    T, _ = S.quotient_sheaf(E)
    out.append(S.fixed_adjunction(T, N))
    out.append(S.quotient_adjunction(N, T))
    out.append(S.constant_adjunction(ctx, D, E.stalks[ctx.site.generic]))
    out.append(S.et_adjunction(ctx, D, S.et_part(ctx, E)[0]))
    out.append(S.set_adjunction(ctx, D, S.set_part(ctx, E)[0]))
    f = random_site_map(rng, ctx, TINY["points"])
    ES = random_sheaf(rng, f.source, TINY["max_stalk"])
    out.append(S.base_change_adjunction(f, D, ES))
    U = rng.choice(ctx.site.nonempty_opens())
    EU = random_sheaf(rng, ctx.restrict(U), TINY["max_stalk"])
    out.append(S.extension_adjunction(ctx, U, EU, E))
    return out


# ---------------------------------------------------------------- valuation


def prop_summary_functors(seed) -> bool:
    cp = random_chain(seed)
    ctx, D = chain_to_sheaf(cp)
    st, lo, et = summary_functors(cp)
    checks = [(st, S.set_part(ctx, D)[0]), (lo, S.quotient_sheaf(D)[0]), (et, S.et_part(ctx, D)[0])]
    for chain, general in checks:
        _, H = chain_to_sheaf(chain)
        if H != general:
            return False
    return sheaf_condition_holds(D)


def prop_dvr_classify(seed) -> bool:
    cp = random_chain(seed)
    if cp.model.n < 2:
        return True
    pts = cp.model.points
    d = DVRDatum(cp.model.group, cp.model.inertia_chain[1], cp.value[pts[1]], cp.value[pts[0]], cp.loc[pts[1]])
    ctx, D = chain_to_sheaf(dvr_to_chain(d))
    r = S.classify(ctx, D)
    got = dvr_classify(d)
    return got == {"representable": r.is_et, "separated": r.is_set}


# ---------------------------------------------------------------- cli-io


def prop_round_trip(seed) -> bool:
    ctx, D = random_instance(seed)
    b = io.emit((ctx, D))
    inst = io.parse_text(b.decode())
    return io.emit(inst) == b


def prop_generation_deterministic(seed) -> bool:
    return io.emit(random_instance(seed)) == io.emit(random_instance(seed))


def prop_digest_stable(seed) -> bool:
    ctx, D = random_instance(seed)
    return io.digest(S.et_part(ctx, D)[0]) == io.digest(S.et_part(ctx, D)[0])


PROPERTIES: dict[str, tuple[str, Callable[[int], bool]]] = {
    "orbit_stabilizer": ("gset", prop_orbit_stabilizer),
    "small_groups_valid": ("gset", prop_groups_valid),
    "opens_down_closed": ("site", prop_opens_down_closed),
    "inertia_of_point": ("site", prop_inertia_of_point),
    "sheaf_condition": ("gsheaf", prop_sheaf_condition),
    "generator_star": ("star", prop_generator_star),
    "ladders_agree": ("star", prop_ladders),
    "covering_and_pi0": ("star", prop_covering),
    "star_fixed_points": ("star", prop_star_fixed_points),
    "idempotence": ("star", prop_idempotence),
    "star_constant_lemma": ("star", prop_star_constant_lemma),
    "et_sections_fixed": ("star", prop_et_sections_fixed),
    "pi0_oracle": ("star", prop_pi0_oracle),
    "star_essential_image": ("star", prop_star_image),
    "counits": ("star", prop_counits),
    "pushforward_generic": ("star", prop_pushforward_generic),
    "espace_etale": ("star", prop_espace_etale),
    "adjunctions": ("star", prop_adjunctions),
    "summary_functors": ("valuation", prop_summary_functors),
    "dvr_classify": ("valuation", prop_dvr_classify),
    "round_trip": ("cli-io", prop_round_trip),
    "generation_deterministic": ("cli-io", prop_generation_deterministic),
    "digest_stable": ("cli-io", prop_digest_stable),
}
