"""Small hand-checkable instances used by the tests, demos and the CLI."""

from __future__ import annotations

from .gset import GAction, cyclic_group, regular_action, subgroup_generated, trivial_action
from .gsheaf import GSheaf, disjoint_union
from .site import InertiaProfile, chain_site, trivial_profile


def double_origin() -> tuple[InertiaProfile, GSheaf]:
    """Two closed points glued along the generic one: stalk {a, b} over {x}."""
    G = cyclic_group(1)
    site = chain_site(2)
    Ds = trivial_action(G, ["a", "b"])
    De = trivial_action(G, ["x"])
    D = GSheaf(site, G, {"eta": De, "s1": Ds}, {("s1", "eta"): {"a": "x", "b": "x"}})
    return trivial_profile(site, G), D


def collapsed_orbit() -> tuple[InertiaProfile, GSheaf]:
    """C2 acting freely on the closed stalk, localization constant onto a fixed point."""
    G = cyclic_group(2)
    site = chain_site(2)
    Ds = regular_action(G)
    De = trivial_action(G, ["z"])
    D = GSheaf(site, G, {"eta": De, "s1": Ds}, {("s1", "eta"): {0: "z", 1: "z"}})
    return trivial_profile(site, G), D


def ramified_chain() -> InertiaProfile:
    """Two-point chain with full C2 inertia at the closed point."""
    G = cyclic_group(2)
    site = chain_site(2)
    return InertiaProfile(site, G, {"s1": subgroup_generated(G, [1])})


def ramified_fixed_point() -> tuple[InertiaProfile, GSheaf]:
    """Closed stalk one point, generic stalk a free orbit plus a fixed point it maps to."""
    ctx = ramified_chain()
    G = ctx.group
    De = GAction(G, ["x", "g0", "g1"], lambda g, p: p if p == "x" else f"g{(int(p[1]) + g) % 2}")
    Ds = trivial_action(G, ["a"])
    D = GSheaf(ctx.site, G, {"eta": De, "s1": Ds}, {("s1", "eta"): {"a": "x"}})
    return ctx, D


def two_components() -> tuple[InertiaProfile, GSheaf]:
    """Disjoint union of the double origin with a constant point."""
    ctx, D = double_origin()
    G = ctx.group
    T = trivial_action(G, ["*"])
    C = GSheaf(ctx.site, G, {"eta": T, "s1": T}, {("s1", "eta"): {"*": "*"}})
    return ctx, disjoint_union([D, C])


def free_generic(n: int = 2) -> tuple[InertiaProfile, GSheaf]:
    """Chain with a regular C_n stalk everywhere and identity localizations."""
    G = cyclic_group(n)
    site = chain_site(2)
    R = regular_action(G)
    D = GSheaf(site, G, {"eta": R, "s1": R}, {("s1", "eta"): {g: g for g in G.elements}})
    return trivial_profile(site, G), D

