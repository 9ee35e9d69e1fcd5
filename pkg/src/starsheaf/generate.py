"""Deterministic random instances.

The stream is SplitMix64: state advances by 0x9E3779B97F4A7C15 mod 2**64
and each output is the state passed through the standard xor-shift-multiply
finalizer (constants 0xBF58476D1CE4E5B9, 0x94D049BB133111EB; shifts 30, 27,
31). ``below(n)`` is ``next_u64() % n``. Every random choice in this module
goes through ``below``, in the order documented by the code, so any
implementation of the same recipe reproduces the same instances.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .gset import FiniteGroup, GAction, coset_space, join, normal_subgroups, small_groups, subgroups, trivial_subgroup
from .gsheaf import GSheaf
from .site import FiniteSite, InertiaProfile, SiteMap, chain_site
from .valuation import ChainModel, ChainPresheaf

MASK = (1 << 64) - 1
MAX_GROUP_ORDER = 8
MAX_POINTS = 4
MAX_STALK = 6


class BoundsExceeded(ValueError):
    pass


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return self.next_u64() % n

    def choice(self, seq: Sequence):
        return seq[self.below(len(seq))]

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num


def _rng(seed) -> SplitMix64:
    return seed if isinstance(seed, SplitMix64) else SplitMix64(int(seed))


def case_seed(master: int, index: int) -> int:
    """Per-case seed: the first output of a stream seeded with master + index."""
    return SplitMix64((master + index) & MASK).next_u64()


def check_bounds(points: int, group_order: int, max_stalk: int):
    if not 1 <= points <= MAX_POINTS:
        raise BoundsExceeded(f"points must be in 1..{MAX_POINTS}, got {points}")
    if not 1 <= group_order <= MAX_GROUP_ORDER:
        raise BoundsExceeded(f"group order must be in 1..{MAX_GROUP_ORDER}, got {group_order}")
    if not 1 <= max_stalk <= MAX_STALK:
        raise BoundsExceeded(f"stalk size must be in 1..{MAX_STALK}, got {max_stalk}")


_GROUPS = None


def random_group(rng: SplitMix64, max_order: int) -> FiniteGroup:
    global _GROUPS
    if _GROUPS is None:
        _GROUPS = small_groups(MAX_GROUP_ORDER)
    cands = [G for _, G in _GROUPS if G.order <= max_order]
    return rng.choice(cands)


def random_site(rng: SplitMix64, max_points: int) -> FiniteSite:
    """Point i > 0 gets a parent among earlier points, and a second one with odds 1/4."""
    n = 1 + rng.below(max_points)
    pts = ["eta"] + [f"p{i}" for i in range(1, n)]
    edges = []
    for i in range(1, n):
        a = rng.below(i)
        edges.append((pts[a], pts[i]))
        if i >= 2 and rng.chance(1, 4):
            b = rng.below(i)
            if b != a:
                edges.append((pts[b], pts[i]))
    return FiniteSite(pts, edges, "eta")


def random_profile(rng: SplitMix64, site: FiniteSite, G: FiniteGroup, bound=None) -> InertiaProfile:
    """Monotone normal inertia; ``bound`` optionally caps I(s) from above (a point -> Subgroup map)."""
    normals = normal_subgroups(G)
    inertia = {}
    for s in site.topo_order:
        if s == site.generic:
            inertia[s] = trivial_subgroup(G)
            continue
        low = join(G, [inertia[t] for t in site.lower_covers(s)])
        cap = bound[s] if bound is not None else None
        cands = [N for N in normals if low <= N and (cap is None or N <= cap)]
        inertia[s] = rng.choice(cands)
    return InertiaProfile(site, G, inertia)


def random_sheaf(rng: SplitMix64, ctx: InertiaProfile, max_stalk: int, star: bool = True) -> GSheaf:
    """Stalks are unions of coset spaces G/H; with ``star`` every H contains I(s).

    Localizations are chosen orbit by orbit among the images compatible with
    everything built so far, so the result is always a valid sheaf.
    """
    site, G = ctx.site, ctx.group
    subs = subgroups(G)
    stalks: dict[str, GAction] = {}
    loc: dict[tuple, dict] = {}
    res: dict[tuple, dict] = {}
    for s in site.topo_order:
        lows = site.lower_covers(s)
        if s == site.generic:
            budget = 1 + rng.below(max_stalk)
        else:
            budget = rng.below(max_stalk + 1)
        allowed = [H for H in subs if (not star) or ctx[s] <= H]
        orbit_sets, orbit_maps = [], []
        size = 0
        for _ in range(3):
            fits = [H for H in allowed if G.order // len(H) <= budget - size]
            if not fits:
                break
            H = rng.choice(fits)
            opts = []
            for ys in itertools.product(*(stalks[t].fixed_points(H.elements) for t in lows)):
                if _coherent(site, res, lows, ys):
                    opts.append(ys)
            if not opts:
                continue
            ys = rng.choice(opts)
            tag = "abcdefgh"[len(orbit_sets)]
            X = coset_space(G, H, prefix=tag)
            x0 = f"{tag}0"  # the coset of the identity
            orbit_sets.append(X)
            orbit_maps.append({t: {X.act(g, x0): stalks[t].act(g, y) for g in G.elements} for t, y in zip(lows, ys)})
            size += len(X)
        if orbit_sets:
            pts = [x for X in orbit_sets for x in X.points]
            owner = {x: X for X in orbit_sets for x in X.points}
            stalk = GAction(G, pts, lambda g, x: owner[x].act(g, x), _check=False)
        else:
            stalk = GAction._raw(G, (), tuple(() for _ in G.elements))
        stalks[s] = stalk
        for t in lows:
            loc[(s, t)] = {x: y for m in orbit_maps for x, y in m[t].items()}
        res[(s, s)] = {x: x for x in stalk.points}
        for t in lows:
            for (a, r), m in list(res.items()):
                if a == t:
                    res[(s, r)] = {x: m[loc[(s, t)][x]] for x in stalk.points}
    return GSheaf(site, G, stalks, loc)


def _coherent(site: FiniteSite, res: dict, lows: Sequence[str], ys: Sequence) -> bool:
    for (t1, y1), (t2, y2) in itertools.combinations(zip(lows, ys), 2):
        for r in site.points:
            if (t1, r) in res and (t2, r) in res and res[(t1, r)][y1] != res[(t2, r)][y2]:
                return False
    return True


def random_instance(seed, points: int = MAX_POINTS, group_order: int = MAX_GROUP_ORDER, max_stalk: int = MAX_STALK, star: bool = True):
    """(profile, sheaf) with at most ``points`` points, |G| <= group_order, stalks <= max_stalk."""
    check_bounds(points, group_order, max_stalk)
    rng = _rng(seed)
    G = random_group(rng, group_order)
    site = random_site(rng, points)
    ctx = random_profile(rng, site, G)
    return ctx, random_sheaf(rng, ctx, max_stalk, star=star)


def random_site_map(rng: SplitMix64, target: InertiaProfile, max_points: int) -> SiteMap:
    """A random monotone generic-preserving map into ``target`` with compatible inertia."""
    rng = _rng(rng)
    T = target.site
    S = random_site(rng, max_points)
    f = {}
    for s in S.topo_order:
        if s == S.generic:
            f[s] = T.generic
            continue
        lows = [f[t] for t in S.lower_covers(s)]
        cands = [p for p in T.points if all(T.le(q, p) for q in lows)]
        f[s] = rng.choice(cands)
    src = random_profile(rng, S, target.group, bound={s: target[f[s]] for s in S.points})
    return SiteMap(src, target, f)


def random_chain(seed, points: int = MAX_POINTS, group_order: int = MAX_GROUP_ORDER, max_stalk: int = MAX_STALK) -> ChainPresheaf:
    check_bounds(points, group_order, max_stalk)
    rng = _rng(seed)
    G = random_group(rng, group_order)
    n = 1 + rng.below(points)
    site = chain_site(n)
    ctx = random_profile(rng, site, G)
    D = random_sheaf(rng, ctx, max_stalk)
    model = ChainModel(n, G, tuple(ctx[p] for p in site.points))
    pts = site.points
    return ChainPresheaf(model, dict(D.stalks), {p: D.loc[(p, prev)] for prev, p in zip(pts, pts[1:])})
