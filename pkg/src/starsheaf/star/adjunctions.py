"""Brute-force verification of adjunctions on small instances.

For an adjunction L -| R with unit u and counit e, the maps
``Phi(f) = R(f) . u_X`` and ``Psi(g) = e_Y . L(g)`` must be mutually inverse
between the enumerated sets Hom(LX, Y) and Hom(X, RY). The triangle
identities are checked separately on the objects involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from ..gset import GAction, equivariant_maps, identity_map
from ..gsheaf import GSheaf, SheafMorphism, identity_morphism, inverse, morphisms
from ..site import SiteMap
from . import functors as F


@dataclass
class AdjunctionCheck:
    name: str
    left_count: int
    right_count: int
    bijective: bool
    triangles: bool

    @property
    def ok(self) -> bool:
        return self.bijective and self.triangles and self.left_count == self.right_count


def check_adjunction(name: str, left: Iterable, right: Iterable, phi: Callable, psi: Callable, triangles: bool) -> AdjunctionCheck:
    """``left`` enumerates Hom(LX, Y), ``right`` enumerates Hom(X, RY)."""
    left, right = list(left), list(right)
    rset = set(right)
    ok = len(set(left)) == len(left) and len(rset) == len(right)
    for f in left:
        g = phi(f)
        if g not in rset or psi(g) != f:
            ok = False
            break
    if ok:
        lset = set(left)
        for g in right:
            f = psi(g)
            if f not in lset or phi(f) != g:
                ok = False
                break
    return AdjunctionCheck(name, len(left), len(right), ok, bool(triangles))


def _same(a, b) -> bool:
    return a.key() == b.key()


def smI_adjunction(ctx: F.StarContext, C: F.OpenPresheaf, D: GSheaf) -> AdjunctionCheck:
    """Sheafification of inertia-fixed presheaves against (-)^{sm,I}."""
    uC = F.smI_unit(ctx, C)
    eD = F.smI_counit(ctx, D)
    LC = F.sheafify(C)
    RD = F.smI_presheaf(ctx, D)

    def phi(f):
        return F.smI_map(ctx, f).compose(uC)

    def psi(g):
        return eD.compose(F.sheafify_map(g))

    tri1 = _same(F.smI_counit(ctx, LC).compose(F.sheafify_map(uC)), identity_morphism(LC))
    tri2 = _same(F.smI_map(ctx, eD).compose(F.smI_unit(ctx, RD)), F.presheaf_identity(RD))
    return check_adjunction("sheafify-smI", morphisms(LC, D), F.presheaf_morphisms(C, RD), phi, psi, tri1 and tri2)


def fixed_adjunction(E: GSheaf, D: GSheaf) -> AdjunctionCheck:
    """Inclusion of trivial-action sheaves against (-)^G; E must have trivial action."""
    eD = F.fixed_counit(D)
    DG = F.fixed_subsheaf(D)

    def phi(f):
        return SheafMorphism(E, DG, {p: f.comp[p].mapping for p in E.site.points}, _check=False)

    def psi(g):
        return eD.compose(g)

    # the unit E -> E^G is the identity, so the triangles reduce to these
    tri1 = _same(F.fixed_counit(E), identity_morphism(E))
    tri2 = _same(SheafMorphism(DG, DG, {p: m.mapping for p, m in eD.comp.items()}), identity_morphism(DG))
    tri = tri1 and tri2
    return check_adjunction("inc-fixed", morphisms(E, D), morphisms(E, DG), phi, psi, tri)


def quotient_adjunction(D: GSheaf, E: GSheaf) -> AdjunctionCheck:
    """(-)_G against the inclusion of trivial-action sheaves; E must have trivial action."""
    DG, q = F.quotient_sheaf(D)
    eE = F.quotient_counit(E)

    def phi(f):
        return f.compose(q)

    def psi(g):
        return eE.compose(F.quotient_map(g))

    tri1 = _same(F.quotient_counit(DG).compose(F.quotient_map(q)), identity_morphism(DG))
    _, qE = F.quotient_sheaf(E)
    tri2 = _same(eE.compose(qE), identity_morphism(E))
    return check_adjunction("quotient-inc", morphisms(DG, E), morphisms(D, E), phi, psi, tri1 and tri2)


def constant_adjunction(ctx: F.StarContext, D: GSheaf, X: GAction) -> AdjunctionCheck:
    """Generic stalk against the star-constant sheaf; D must be star."""
    u = F.star_constant_unit(ctx, D)
    XS = F.star_constant(ctx, X)

    def phi(f):
        return F.star_constant_map(ctx, f).compose(u)

    def psi(g):
        return F.star_constant_counit(ctx, X).compose(F.generic_map(g))

    Deta = F.generic_stalk(D)
    tri1 = F.star_constant_counit(ctx, Deta).compose(F.generic_map(u)) == identity_map(Deta)
    tri2 = _same(F.star_constant_map(ctx, F.star_constant_counit(ctx, X)).compose(F.star_constant_unit(ctx, XS)), identity_morphism(XS))
    return check_adjunction("generic-starconst", equivariant_maps(Deta, X), morphisms(D, XS), phi, psi, tri1 and tri2)


def _image_adjunction(name, part, part_map, ctx, D: GSheaf, E: GSheaf) -> AdjunctionCheck:
    Dp, u = part(ctx, D)
    _, uE = part(ctx, E)
    eE = inverse(uE)

    def phi(f):
        return f.compose(u)

    def psi(g):
        return eE.compose(part_map(ctx, g))

    _, uDp = part(ctx, Dp)
    tri1 = _same(inverse(uDp).compose(part_map(ctx, u)), identity_morphism(Dp))
    tri2 = _same(eE.compose(uE), identity_morphism(E))
    return check_adjunction(name, morphisms(Dp, E), morphisms(D, E), phi, psi, tri1 and tri2)


def et_adjunction(ctx: F.StarContext, D: GSheaf, E: GSheaf) -> AdjunctionCheck:
    """(-)_et against the inclusion of et sheaves; D star, E et."""
    return _image_adjunction("et-inc", F.et_part, F.et_map, ctx, D, E)


def set_adjunction(ctx: F.StarContext, D: GSheaf, E: GSheaf) -> AdjunctionCheck:
    """(-)_set against the inclusion of set sheaves; D star, E set."""
    return _image_adjunction("set-inc", F.set_part, F.set_map, ctx, D, E)


def base_change_adjunction(f: SiteMap, D: GSheaf, E: GSheaf) -> AdjunctionCheck:
    """Pullback against star pushforward; D star on the target, E star on the source."""
    u = F.base_change_unit(f, D)
    e = F.base_change_counit(f, E)

    def phi(a):
        return F.pushforward_map(f, a).compose(u)

    def psi(b):
        return e.compose(F.pullback_map(f, b))

    fD = F.pullback(f, D)
    PE = F.pushforward_et(f, E)
    tri1 = _same(F.base_change_counit(f, fD).compose(F.pullback_map(f, u)), identity_morphism(fD))
    tri2 = _same(F.pushforward_map(f, e).compose(F.base_change_unit(f, PE)), identity_morphism(PE))
    return check_adjunction("pullback-pushforward", morphisms(fD, E), morphisms(D, PE), phi, psi, tri1 and tri2)


def extension_adjunction(ctx, U, E: GSheaf, D: GSheaf) -> AdjunctionCheck:
    """Extension by empty against restriction to the nonempty open U; E lives on U."""
    jE = F.j_shriek(ctx, U, E)
    rD = F.j_restrict(D, U)
    uE = F.j_unit(ctx, U, E)
    eD = F.j_counit(ctx, U, D)

    def phi(a):
        return F.j_restrict_map(a, U).compose(uE)

    def psi(b):
        return eD.compose(F.j_shriek_map(ctx, U, b))

    tri1 = _same(F.j_counit(ctx, U, jE).compose(F.j_shriek_map(ctx, U, uE)), identity_morphism(jE))
    tri2 = _same(F.j_restrict_map(eD, U).compose(F.j_unit(ctx, U, rD)), identity_morphism(rD))
    return check_adjunction("extension-restriction", morphisms(jE, D), morphisms(E, rD), phi, psi, tri1 and tri2)
