"""Chain sites of valuation rings and the two-point datum of a discrete valuation ring.

A chain model has points ``eta < s1 < ... < s{n-1}``; a chain presheaf
gives a G-set at each point and a localization from each point to the one
just before it. On a finite chain the value at the generic point plays the
role of the colimit over special points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .gset import (
    EquivariantMap,
    FiniteGroup,
    GAction,
    Subgroup,
    fixed_points,
    injective_on_orbits,
    product_action,
    quotient,
    trivial_subgroup,
)
from .gsheaf import GSheaf, SheafError
from .site import InertiaProfile, chain_site


@dataclass(frozen=True, eq=False)
class ChainModel:
    """``inertia_chain[i]`` is the inertia at the i-th point, the generic one first."""

    n: int
    group: FiniteGroup
    inertia_chain: Sequence[Subgroup] = ()

    def __post_init__(self):
        chain = list(self.inertia_chain) or [trivial_subgroup(self.group)] * self.n
        if len(chain) != self.n:
            raise SheafError(f"need {self.n} inertia groups, got {len(chain)}")
        object.__setattr__(self, "inertia_chain", tuple(chain))
        self.context()  # validates normality, monotonicity, trivial generic inertia

    @property
    def points(self) -> tuple:
        return chain_site(self.n).points

    def context(self) -> InertiaProfile:
        site = chain_site(self.n)
        return InertiaProfile(site, self.group, dict(zip(site.points, self.inertia_chain)))


@dataclass(eq=False)
class ChainPresheaf:
    """``loc[s]`` maps ``value[s]`` to the value at the previous point."""

    model: ChainModel
    value: Mapping[str, GAction]
    loc: Mapping[str, EquivariantMap] = field(default_factory=dict)

    def __post_init__(self):
        pts = self.model.points
        self.value = {p: self.value[p] for p in pts}
        maps = {}
        for p, I in zip(pts, self.model.inertia_chain):
            X = self.value[p]
            if len(fixed_points(X, I.elements)) != len(X):
                raise SheafError(f"inertia at {p} moves points of its value")
        for prev, p in zip(pts, pts[1:]):
            m = self.loc[p]
            mapping = m.mapping if isinstance(m, EquivariantMap) else m
            maps[p] = EquivariantMap(self.value[p], self.value[prev], mapping)
        self.loc = maps

    def to_generic(self, s: str) -> dict:
        """Composite localization value[s] -> value[eta]."""
        pts = self.model.points
        k = pts.index(s)
        out = {x: x for x in self.value[s].points}
        for i in range(k, 0, -1):
            step = self.loc[pts[i]].mapping
            out = {x: step[y] for x, y in out.items()}
        return out


@dataclass(eq=False)
class DVRDatum:
    """A G-map from the closed stalk to the generic stalk, inertia fixing the closed one."""

    group: FiniteGroup
    inertia: Subgroup
    special_stalk: GAction
    generic_stalk: GAction
    ell: EquivariantMap

    def __post_init__(self):
        if len(fixed_points(self.special_stalk, self.inertia.elements)) != len(self.special_stalk):
            raise SheafError("inertia must fix the closed stalk pointwise")
        if not isinstance(self.ell, EquivariantMap):
            self.ell = EquivariantMap(self.special_stalk, self.generic_stalk, self.ell)


def chain_to_sheaf(cp: ChainPresheaf) -> tuple[InertiaProfile, GSheaf]:
    ctx = cp.model.context()
    pts = ctx.site.points
    loc = {(p, prev): cp.loc[p].mapping for prev, p in zip(pts, pts[1:])}
    return ctx, GSheaf(ctx.site, ctx.group, dict(cp.value), loc)


def dvr_to_chain(d: DVRDatum) -> ChainPresheaf:
    model = ChainModel(2, d.group, (trivial_subgroup(d.group), d.inertia))
    return ChainPresheaf(model, {"eta": d.generic_stalk, "s1": d.special_stalk}, {"s1": d.ell})


def _images(cp: ChainPresheaf, maps: Mapping[str, dict], target: Mapping[str, GAction], induced) -> ChainPresheaf:
    pts = cp.model.points
    vals = {p: target[p].restrict(set(maps[p].values())) for p in pts}
    loc = {p: {y: induced(p, y) for y in vals[p].points} for p in pts[1:]}
    return ChainPresheaf(cp.model, vals, loc)


def summary_functors(cp: ChainPresheaf) -> tuple[ChainPresheaf, ChainPresheaf, ChainPresheaf]:
    """The set, loc and et transforms: images in the generic value, orbit sets,
    and images in (generic value) x (orbit set)."""
    pts = cp.model.points
    eta = pts[0]
    Deta = cp.value[eta]
    prev = dict(zip(pts[1:], pts))

    to_eta = {p: cp.to_generic(p) for p in pts}
    set_p = _images(cp, to_eta, {p: Deta for p in pts}, lambda p, y: y)

    quots = {p: quotient(cp.value[p]) for p in pts}
    loc_vals = {p: quots[p][0] for p in pts}
    loc_maps = {p: {o: cp.value[prev[p]].orbit_label(cp.loc[p](o)) for o in loc_vals[p].points} for p in pts[1:]}
    loc_p = ChainPresheaf(cp.model, loc_vals, loc_maps)

    pairs = {p: {x: (to_eta[p][x], quots[p][1](x)) for x in cp.value[p].points} for p in pts}
    prods = {p: product_action(Deta, loc_vals[p]) for p in pts}
    et_p = _images(cp, pairs, prods, lambda p, y: (y[0], loc_maps[p][y[1]]))
    return set_p, loc_p, et_p


def dvr_classify(d: DVRDatum) -> dict:
    """Representable by an etale scheme iff ell is injective on orbits; separated iff injective."""
    rep = injective_on_orbits(d.ell)
    return {"representable": rep, "separated": rep and d.ell.is_injective()}
