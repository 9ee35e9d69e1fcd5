"""Functors on sheaves of G-sets with inertia: the star condition and its
right adjoint, fixed points and quotients, constant sheaves, et/set images,
extension by empty, and base change along site maps.

Every object-level construction has a companion ``*_map`` acting on
morphisms, and the units/counits are exposed so that adjunctions can be
checked by brute force (see :mod:`starsheaf.star.adjunctions`).
"""

from __future__ import annotations

from typing import Iterator, Mapping

from ..gset import (
    EquivariantMap,
    GAction,
    equivariant_maps,
    fixed_points,
    identity_map,
    quotient,
)
from ..gsheaf import (
    GSheaf,
    SheafError,
    SheafMorphism,
    image,
    initial_sheaf,
    pairing,
    restrict_sheaf,
    subsheaf,
)
from ..site import FiniteSite, InertiaProfile, SiteMap, inertia_of_open

# the ambient data (site, group, inertia) of a category of star sheaves
StarContext = InertiaProfile


class NotStar(SheafError):
    pass


def _ctx_site(ctx_or_site) -> FiniteSite:
    return ctx_or_site.site if isinstance(ctx_or_site, InertiaProfile) else ctx_or_site


def is_star(ctx: StarContext, D: GSheaf) -> bool:
    """Every I(s) fixes the stalk at s pointwise (smoothness is automatic for finite G)."""
    return all(len(fixed_points(D.stalks[s], ctx[s].elements)) == len(D.stalks[s]) for s in ctx.site.points)


def require_star(ctx: StarContext, D: GSheaf):
    if not is_star(ctx, D):
        bad = [s for s in ctx.site.points if len(fixed_points(D.stalks[s], ctx[s].elements)) != len(D.stalks[s])]
        raise NotStar(f"inertia acts nontrivially on the stalks at {bad}")


# ---------------------------------------------------------------- star part


def star_part(ctx: StarContext, D: GSheaf) -> GSheaf:
    """Subsheaf with stalks D_s^{I(s)}."""
    return subsheaf(D, {s: fixed_points(D.stalks[s], ctx[s].elements) for s in D.site.points})


def star_part_map(ctx: StarContext, phi: SheafMorphism) -> SheafMorphism:
    A, B = star_part(ctx, phi.source), star_part(ctx, phi.target)
    return SheafMorphism(A, B, {p: {x: phi.comp[p](x) for x in A.stalks[p].points} for p in A.site.points}, _check=False)


def star_counit(ctx: StarContext, D: GSheaf) -> SheafMorphism:
    A = star_part(ctx, D)
    return SheafMorphism(A, D, {p: {x: x for x in X.points} for p, X in A.stalks.items()}, _check=False)


# ---------------------------------------------------------------- the smI presheaf


class OpenPresheaf:
    """A presheaf of G-sets given by its value on every open of a finite site."""

    def __init__(self, site: FiniteSite, group, values: Mapping[frozenset, GAction], res: Mapping):
        self.site, self.group = site, group
        self.values = dict(values)
        self.res = dict(res)  # (U, V) -> dict, for V inside U

    def restrict(self, U, V, x):
        return self.res[(frozenset(U), frozenset(V))][x]


class PresheafMorphism:
    def __init__(self, source: OpenPresheaf, target: OpenPresheaf, comp: Mapping[frozenset, EquivariantMap]):
        self.source, self.target = source, target
        self.comp = dict(comp)

    def key(self):
        ops = self.source.site.opens()
        return tuple(self.comp[U].key() for U in ops)

    def __eq__(self, other):
        return isinstance(other, PresheafMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def compose(self, other: "PresheafMorphism") -> "PresheafMorphism":
        return PresheafMorphism(other.source, self.target, {U: self.comp[U].compose(other.comp[U]) for U in self.comp})


def _open_pairs(site: FiniteSite):
    ops = site.opens()
    return [(U, V) for U in ops for V in ops if V <= U]


def smI_presheaf(ctx: StarContext, D: GSheaf) -> OpenPresheaf:
    """U -> D(U)^{I(U)}, a subpresheaf of D (not a sheaf of G-sets in general)."""
    vals = {}
    for U in ctx.site.opens():
        S = D.sections(U)
        vals[U] = S.restrict(fixed_points(S, inertia_of_open(ctx, U).elements))
    res = {(U, V): {x: D.restrict_section(U, V, x) for x in vals[U].points} for U, V in _open_pairs(ctx.site)}
    return OpenPresheaf(ctx.site, D.group, vals, res)


def presheaf_identity(P: OpenPresheaf) -> PresheafMorphism:
    return PresheafMorphism(P, P, {U: identity_map(X) for U, X in P.values.items()})


def presheaf_morphisms(P: OpenPresheaf, Q: OpenPresheaf) -> Iterator[PresheafMorphism]:
    """All families of G-maps P(U) -> Q(U) commuting with every restriction."""
    ops = P.site.opens()
    below = {U: [V for V in ops if V < U] for U in ops}

    def rec(k, chosen):
        if k == len(ops):
            yield PresheafMorphism(P, Q, {U: EquivariantMap(P.values[U], Q.values[U], m, _check=False) for U, m in chosen.items()})
            return
        U = ops[k]
        for f in equivariant_maps(P.values[U], Q.values[U]):
            if all(Q.restrict(U, V, f(x)) == chosen[V][P.restrict(U, V, x)] for V in below[U] for x in P.values[U].points):
                chosen[U] = f.mapping
                yield from rec(k + 1, chosen)
                del chosen[U]

    yield from rec(0, {})


def sheafify(P: OpenPresheaf) -> GSheaf:
    """On a finite site the stalk at s is the value on the minimal open U_s."""
    site = P.site
    stalks = {s: P.values[site.minimal_open(s)] for s in site.points}
    loc = {
        (s, t): P.res[(site.minimal_open(s), site.minimal_open(t))]
        for t, s in site.hasse
    }
    return GSheaf(site, P.group, stalks, loc, _check=False)


def sheafify_map(psi: PresheafMorphism) -> SheafMorphism:
    site = psi.source.site
    A, B = sheafify(psi.source), sheafify(psi.target)
    return SheafMorphism(A, B, {s: psi.comp[site.minimal_open(s)].mapping for s in site.points}, _check=False)


def smI_map(ctx: StarContext, phi: SheafMorphism) -> PresheafMorphism:
    P, Q = smI_presheaf(ctx, phi.source), smI_presheaf(ctx, phi.target)
    comp = {}
    for U in ctx.site.opens():
        f = phi.on_sections(U)
        comp[U] = EquivariantMap(P.values[U], Q.values[U], {x: f(x) for x in P.values[U].points})
    return PresheafMorphism(P, Q, comp)


def smI_unit(ctx: StarContext, P: OpenPresheaf) -> PresheafMorphism:
    """P -> (sheafification of P)^{sm,I}, sending c in P(U) to its germs (c|U_s)_s."""
    site = ctx.site
    A = sheafify(P)
    Q = smI_presheaf(ctx, A)
    comp = {}
    for U in site.opens():
        pts = site.ordered(U)
        mp = {c: tuple(P.restrict(U, site.minimal_open(s), c) for s in pts) for c in P.values[U].points}
        comp[U] = EquivariantMap(P.values[U], Q.values[U], mp)
    return PresheafMorphism(P, Q, comp)


def smI_counit(ctx: StarContext, D: GSheaf) -> SheafMorphism:
    """Sheafification of D^{sm,I} back into D: take the germ at s."""
    site = ctx.site
    A = sheafify(smI_presheaf(ctx, D))
    comp = {s: {c: D.value_at(site.minimal_open(s), c, s) for c in A.stalks[s].points} for s in site.points}
    return SheafMorphism(A, D, comp, _check=False)


def smI_part(ctx: StarContext, D: GSheaf) -> GSheaf:
    """Re-sheafified D^{sm,I}, relabelled by germs so it sits inside D."""
    site = ctx.site
    subsets = {}
    for s in site.points:
        U = site.minimal_open(s)
        S = D.sections(U)
        fixed = fixed_points(S, inertia_of_open(ctx, U).elements)
        subsets[s] = [D.value_at(U, c, s) for c in fixed]
    return subsheaf(D, subsets)


# ---------------------------------------------------------------- trivial action


def fixed_subsheaf(D: GSheaf) -> GSheaf:
    """D^G"""
    return subsheaf(D, {s: fixed_points(X, D.group.elements) for s, X in D.stalks.items()})


def fixed_map(phi: SheafMorphism) -> SheafMorphism:
    A, B = fixed_subsheaf(phi.source), fixed_subsheaf(phi.target)
    return SheafMorphism(A, B, {p: {x: phi.comp[p](x) for x in A.stalks[p].points} for p in A.site.points}, _check=False)


def fixed_counit(D: GSheaf) -> SheafMorphism:
    A = fixed_subsheaf(D)
    return SheafMorphism(A, D, {p: {x: x for x in X.points} for p, X in A.stalks.items()}, _check=False)


def quotient_sheaf(D: GSheaf) -> tuple[GSheaf, SheafMorphism]:
    """D_G with stalks G\\D_s (orbits labelled by their minimal element) and the unit D -> D_G."""
    stalks, proj = {}, {}
    for s, X in D.stalks.items():
        Q, q = quotient(X)
        stalks[s], proj[s] = Q, q.mapping
    loc = {(s, t): {proj[s][x]: proj[t][m(x)] for x in D.stalks[s].points} for (s, t), m in D.loc.items()}
    DG = GSheaf(D.site, D.group, stalks, loc, _check=False)
    return DG, SheafMorphism(D, DG, proj, _check=False)


def quotient_map(phi: SheafMorphism) -> SheafMorphism:
    A, _ = quotient_sheaf(phi.source)
    B, _ = quotient_sheaf(phi.target)
    comp = {p: {o: phi.target.stalks[p].orbit_label(phi.comp[p](o)) for o in A.stalks[p].points} for p in A.site.points}
    return SheafMorphism(A, B, comp, _check=False)


def quotient_counit(E: GSheaf) -> SheafMorphism:
    """E_G -> E for E with trivial action (orbits are singletons)."""
    A, _ = quotient_sheaf(E)
    return SheafMorphism(A, E, {p: {o: o for o in X.points} for p, X in A.stalks.items()})


# ---------------------------------------------------------------- constant sheaves


def constant_sheaf(ctx, X: GAction) -> GSheaf:
    """X_S: stalk X everywhere, identity localizations. ``ctx`` may be a bare site."""
    site = _ctx_site(ctx)
    return GSheaf(site, X.group, {p: X for p in site.points}, {(b, a): {x: x for x in X.points} for a, b in site.hasse}, _check=False)


def star_constant(ctx: StarContext, X: GAction) -> GSheaf:
    """X_S^star: stalks X^{I(s)} with inclusions (monotone inertia makes these nest)."""
    return star_part(ctx, constant_sheaf(ctx, X))


def constant_map(ctx, f: EquivariantMap) -> SheafMorphism:
    site = _ctx_site(ctx)
    return SheafMorphism(constant_sheaf(site, f.source), constant_sheaf(site, f.target), {p: f.mapping for p in site.points}, _check=False)


def star_constant_map(ctx: StarContext, f: EquivariantMap) -> SheafMorphism:
    return star_part_map(ctx, constant_map(ctx, f))


def generic_stalk(D: GSheaf) -> GAction:
    return D.stalks[D.site.generic]


def generic_map(phi: SheafMorphism) -> EquivariantMap:
    return phi.comp[phi.source.site.generic]


def unit_to_generic(D: GSheaf) -> SheafMorphism:
    """D -> (D_eta)_S"""
    eta = D.site.generic
    C = constant_sheaf(D.site, generic_stalk(D))
    return SheafMorphism(D, C, {s: D.restriction(s, eta) for s in D.site.points}, _check=False)


def star_constant_unit(ctx: StarContext, D: GSheaf) -> SheafMorphism:
    """D -> (D_eta)_S^star for a star sheaf D."""
    require_star(ctx, D)
    eta = D.site.generic
    C = star_constant(ctx, generic_stalk(D))
    return SheafMorphism(D, C, {s: D.restriction(s, eta) for s in D.site.points})


def star_constant_counit(ctx: StarContext, X: GAction) -> EquivariantMap:
    """(X_S^star)_eta = X^{I(eta)} = X -> X"""
    return identity_map(generic_stalk(star_constant(ctx, X)))


# ---------------------------------------------------------------- et / set


def _set_unit(D: GSheaf) -> tuple[GSheaf, SheafMorphism]:
    im, _, epi = image(unit_to_generic(D))
    return im, epi


def _et_unit(D: GSheaf) -> tuple[GSheaf, SheafMorphism]:
    _, q = quotient_sheaf(D)
    im, _, epi = image(pairing(unit_to_generic(D), q))
    return im, epi


def set_part(ctx: StarContext, D: GSheaf) -> tuple[GSheaf, SheafMorphism]:
    """D_set = Im(D -> (D_eta)_S) with its epimorphic unit; stalk elements are points of D_eta."""
    require_star(ctx, D)
    return _set_unit(D)


def et_part(ctx: StarContext, D: GSheaf) -> tuple[GSheaf, SheafMorphism]:
    """D_et = Im(D -> (D_eta)_S x D_G); stalk elements are pairs (generic germ, orbit label)."""
    require_star(ctx, D)
    return _et_unit(D)


def set_map(ctx: StarContext, phi: SheafMorphism) -> SheafMorphism:
    A, _ = set_part(ctx, phi.source)
    B, _ = set_part(ctx, phi.target)
    f = generic_map(phi)
    return SheafMorphism(A, B, {p: {y: f(y) for y in A.stalks[p].points} for p in A.site.points}, _check=False)


def et_map(ctx: StarContext, phi: SheafMorphism) -> SheafMorphism:
    A, _ = et_part(ctx, phi.source)
    B, _ = et_part(ctx, phi.target)
    f = generic_map(phi)
    comp = {}
    for p in A.site.points:
        Y = phi.target.stalks[p]
        comp[p] = {(y, o): (f(y), Y.orbit_label(phi.comp[p](o))) for y, o in A.stalks[p].points}
    return SheafMorphism(A, B, comp, _check=False)


# ---------------------------------------------------------------- opens


def j_shriek(ctx, U, E: GSheaf | None) -> GSheaf:
    """Extension by empty of a sheaf E on the open U (``E`` is ignored when U is empty)."""
    site = _ctx_site(ctx)
    U = frozenset(U)
    if not U:
        if E is None:
            raise SheafError("extension from the empty open needs the group: pass the initial sheaf instead")
        return initial_sheaf(site, E.group)
    empty = GAction._raw(E.group, (), tuple(() for _ in E.group.elements))
    stalks = {p: (E.stalks[p] if p in U else empty) for p in site.points}
    loc = {}
    for a, b in site.hasse:
        loc[(b, a)] = E.loc[(b, a)].mapping if b in U else {}
    return GSheaf(site, E.group, stalks, loc, _check=False)


def j_restrict(D: GSheaf, U) -> GSheaf:
    return restrict_sheaf(D, U)


def j_shriek_map(ctx, U, psi: SheafMorphism) -> SheafMorphism:
    A, B = j_shriek(ctx, U, psi.source), j_shriek(ctx, U, psi.target)
    return SheafMorphism(A, B, {p: (psi.comp[p].mapping if p in U else {}) for p in A.site.points}, _check=False)


def j_restrict_map(phi: SheafMorphism, U) -> SheafMorphism:
    A, B = j_restrict(phi.source, U), j_restrict(phi.target, U)
    return SheafMorphism(A, B, {p: phi.comp[p].mapping for p in A.site.points}, _check=False)


def j_counit(ctx, U, D: GSheaf) -> SheafMorphism:
    """j_U! j_U^* D -> D"""
    A = j_shriek(ctx, U, j_restrict(D, U))
    return SheafMorphism(A, D, {p: {x: x for x in X.points} for p, X in A.stalks.items()}, _check=False)


def j_unit(ctx, U, E: GSheaf) -> SheafMorphism:
    """E -> j_U^* j_U! E (the identity of stalk diagrams)"""
    B = j_restrict(j_shriek(ctx, U, E), U)
    return SheafMorphism(E, B, {p: {x: x for x in X.points} for p, X in E.stalks.items()})


# ---------------------------------------------------------------- base change


def pullback(f: SiteMap, D: GSheaf) -> GSheaf:
    """(f^*D)_{s'} = D_{f(s')}"""
    S = f.source.site
    stalks = {p: D.stalks[f(p)] for p in S.points}
    loc = {(b, a): D.restriction(f(b), f(a)) for a, b in S.hasse}
    return GSheaf(S, D.group, stalks, loc, _check=False)


def pullback_map(f: SiteMap, phi: SheafMorphism) -> SheafMorphism:
    A, B = pullback(f, phi.source), pullback(f, phi.target)
    return SheafMorphism(A, B, {p: phi.comp[f(p)].mapping for p in A.site.points}, _check=False)


def _pushforward_raw(f: SiteMap, E: GSheaf) -> GSheaf:
    T = f.target.site
    pre = {s: f.preimage(T.minimal_open(s)) for s in T.points}
    stalks = {s: E.sections(pre[s]) for s in T.points}
    loc = {(b, a): {x: E.restrict_section(pre[b], pre[a], x) for x in stalks[b].points} for a, b in T.hasse}
    return GSheaf(T, E.group, stalks, loc, _check=False)


def pushforward_et(f: SiteMap, E: GSheaf) -> GSheaf:
    """Star part of f_*E, whose stalk at s is E(f^-1(U_s)) (so elements are families)."""
    return star_part(f.target, _pushforward_raw(f, E))


def pushforward_map(f: SiteMap, psi: SheafMorphism) -> SheafMorphism:
    A, B = pushforward_et(f, psi.source), pushforward_et(f, psi.target)
    S = f.source.site
    comp = {}
    for s in A.site.points:
        pts = S.ordered(f.preimage(A.site.minimal_open(s)))
        comp[s] = {x: tuple(psi.comp[p](v) for p, v in zip(pts, x)) for x in A.stalks[s].points}
    return SheafMorphism(A, B, comp, _check=False)


def base_change_unit(f: SiteMap, D: GSheaf) -> SheafMorphism:
    """D -> f_*^et f^* D: x at s goes to the family of its localizations."""
    B = pushforward_et(f, pullback(f, D))
    S = f.source.site
    comp = {}
    for s in B.site.points:
        pts = S.ordered(f.preimage(B.site.minimal_open(s)))
        comp[s] = {x: tuple(D.restriction(s, f(p))[x] for p in pts) for x in D.stalks[s].points}
    return SheafMorphism(D, B, comp)


def base_change_counit(f: SiteMap, E: GSheaf) -> SheafMorphism:
    """f^* f_*^et E -> E: evaluate a family at the point itself."""
    A = pullback(f, pushforward_et(f, E))
    S, T = f.source.site, f.target.site
    comp = {}
    for p in S.points:
        U = f.preimage(T.minimal_open(f(p)))
        comp[p] = {x: E.value_at(U, x, p) for x in A.stalks[p].points}
    return SheafMorphism(A, E, comp)


def star_constant_via_pushforward(ctx: StarContext, X: GAction) -> GSheaf:
    """Push a G-set forward from the generic point (defines the same sheaf as star_constant)."""
    from ..site import generic_point_inclusion

    iota = generic_point_inclusion(ctx)
    E = constant_sheaf(iota.source.site, X)
    return pushforward_et(iota, E)
