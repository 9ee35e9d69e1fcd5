"""Sheaves of G-sets on a finite site, stored as stalk diagrams.

A sheaf is a G-set per point together with equivariant localization maps
``D_s -> D_t`` along each Hasse edge (``t`` an immediate generization of
``s``). Composite localizations along longer chains are derived and must not
depend on the path. Sections over an open ``U`` are recomputed as compatible
families ``(x_r)_{r in U}``, stored as tuples in the site's point order.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, Sequence

from .gset import (
    ActionError,
    EquivariantMap,
    FiniteGroup,
    GAction,
    NotEquivariant as _MapNotEquivariant,
    disjoint_union_actions,
    empty_action,
    identity_map,
    label_str,
    product_action,
    trivial_action,
)
from .site import FiniteSite, UnknownPoint


class SheafError(ValueError):
    pass


class NotEquivariant(SheafError):
    def __init__(self, message, edge=None, g=None, x=None):
        super().__init__(message)
        self.edge, self.g, self.x = edge, g, x


class PathIncoherent(SheafError):
    def __init__(self, message, pair=None, composites=()):
        super().__init__(message)
        self.pair, self.composites = pair, tuple(composites)


class NotNatural(SheafError):
    pass


class SiteMismatch(SheafError):
    pass


class TooLarge(SheafError):
    pass


SUBSHEAF_GUARD = 16


class GSheaf:
    """Stalk diagram of a sheaf of G-sets.

    ``loc`` is keyed by ``(s, t)`` for every Hasse edge, ``t`` an immediate
    generization of ``s``; values are EquivariantMaps ``D_s -> D_t`` or plain
    dicts. Construction validates equivariance and path coherence.
    """

    def __init__(self, site: FiniteSite, group: FiniteGroup, stalks: Mapping[str, GAction], loc: Mapping, _check=True):
        for p in stalks:
            if p not in site._index:
                raise UnknownPoint(f"stalk given at unknown point {p!r}")
        missing = [p for p in site.points if p not in stalks]
        if missing:
            raise SheafError(f"no stalk at {missing}")
        self.site = site
        self.group = group
        self.stalks = {p: stalks[p] for p in site.points}
        for p, X in self.stalks.items():
            if X.group != group:
                raise SheafError(f"stalk at {p!r} is acted on by another group")
        edges = {(b, a) for a, b in site.hasse}
        for key in loc:
            if tuple(key) not in edges:
                raise UnknownPoint(f"localization {key} is not along a Hasse edge")
        self.loc: dict[tuple[str, str], EquivariantMap] = {}
        for s, t in sorted(edges, key=lambda e: (site.index(e[0]), site.index(e[1]))):
            if (s, t) not in loc:
                raise SheafError(f"missing localization map {s} -> {t}")
            m = loc[(s, t)]
            mapping = m.mapping if isinstance(m, EquivariantMap) else m
            try:
                self.loc[(s, t)] = EquivariantMap(self.stalks[s], self.stalks[t], mapping, _check=_check)
            except _MapNotEquivariant as exc:
                raise NotEquivariant(f"localization {s} -> {t}: {exc}", (s, t), exc.g, exc.x) from None
            except ActionError as exc:
                raise SheafError(f"localization {s} -> {t}: {exc}") from None
        self._res = self._composites()
        self._sections: dict[frozenset, GAction] = {}

    def _composites(self):
        res: dict[tuple[str, str], dict] = {}
        for s in self.site.topo_order:
            res[(s, s)] = {x: x for x in self.stalks[s].points}
            for t in self.site.lower_covers(s):
                step = self.loc[(s, t)].mapping
                for r in self.site.points:
                    if (t, r) not in res:
                        continue
                    cand = {x: res[(t, r)][y] for x, y in step.items()}
                    if (s, r) in res and res[(s, r)] != cand:
                        raise PathIncoherent(
                            f"composite localizations {s} -> {r} depend on the path",
                            (s, r),
                            (res[(s, r)], cand),
                        )
                    res[(s, r)] = cand
        return res

    # access

    def stalk(self, s: str) -> GAction:
        return self.stalks[s]

    def restriction(self, s: str, t: str) -> dict:
        """Composite localization D_s -> D_t for t generizing s."""
        try:
            return self._res[(s, t)]
        except KeyError:
            raise SheafError(f"{t!r} does not generize {s!r}") from None

    def total_size(self) -> int:
        return sum(len(X) for X in self.stalks.values())

    def is_trivial_action(self) -> bool:
        return all(X.is_trivial() for X in self.stalks.values())

    def sections(self, U: Iterable[str]) -> GAction:
        U = frozenset(U)
        if U not in self._sections:
            self._sections[U] = self._compute_sections(U)
        return self._sections[U]

    def _compute_sections(self, U: frozenset) -> GAction:
        site = self.site
        pts = site.ordered(U)
        if not pts:
            return trivial_action(self.group, [()])
        if not site.is_open(U):
            raise SheafError(f"{set(U)} is not open")
        maxs = site.maximal(U)
        below = {m: [r for r in pts if site.le(r, m)] for m in maxs}
        fams = []
        for choice in itertools.product(*(self.stalks[m].points for m in maxs)):
            val = {}
            ok = True
            for m, x in zip(maxs, choice):
                for r in below[m]:
                    y = self._res[(m, r)][x]
                    if val.setdefault(r, y) != y:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                fams.append(tuple(val[r] for r in pts))
        stalks = [self.stalks[r] for r in pts]
        return GAction(
            self.group, fams, lambda g, f: tuple(X.act(g, x) for X, x in zip(stalks, f)), _check=False
        )

    def restrict_section(self, U, V, sec: tuple) -> tuple:
        """Restriction D(U) -> D(V) for V inside U."""
        pts = self.site.ordered(U)
        pos = {p: i for i, p in enumerate(pts)}
        return tuple(sec[pos[p]] for p in self.site.ordered(V))

    def value_at(self, U, sec: tuple, s: str):
        return sec[self.site.ordered(U).index(s)]

    def restriction_map(self, U, V) -> EquivariantMap:
        A, B = self.sections(U), self.sections(V)
        return EquivariantMap(A, B, {x: self.restrict_section(U, V, x) for x in A.points}, _check=False)

    def germ_map(self, U, s: str) -> EquivariantMap:
        """D(U) -> D_s"""
        A = self.sections(U)
        return EquivariantMap(A, self.stalks[s], {x: self.value_at(U, x, s) for x in A.points}, _check=False)

    def key(self) -> tuple:
        return (
            tuple((p, self.stalks[p].points, self.stalks[p]._img) for p in self.site.points),
            tuple((e, m.key()) for e, m in self.loc.items()),
        )

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, GSheaf)
            and self.site == other.site
            and self.group == other.group
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        sizes = {p: len(X) for p, X in self.stalks.items()}
        return f"GSheaf(stalk sizes {sizes})"


def validate_sheaf(site: FiniteSite, group: FiniteGroup, stalks: Mapping[str, GAction], loc: Mapping) -> GSheaf:
    return GSheaf(site, group, stalks, loc)


def initial_sheaf(site: FiniteSite, group: FiniteGroup) -> GSheaf:
    E = empty_action(group)
    return GSheaf(site, group, {p: E for p in site.points}, {(b, a): {} for a, b in site.hasse}, _check=False)


def terminal_sheaf(site: FiniteSite, group: FiniteGroup) -> GSheaf:
    T = trivial_action(group, ["*"])
    return GSheaf(site, group, {p: T for p in site.points}, {(b, a): {"*": "*"} for a, b in site.hasse}, _check=False)


def sections(D: GSheaf, U) -> GAction:
    return D.sections(U)


def subsheaf(D: GSheaf, subsets: Mapping[str, Iterable]) -> GSheaf:
    """Subsheaf on G-stable, localization-stable stalk subsets."""
    stalks = {p: D.stalks[p].restrict(subsets[p]) for p in D.site.points}
    loc = {}
    for (s, t), m in D.loc.items():
        loc[(s, t)] = {x: m.mapping[x] for x in stalks[s].points}
        for x, y in loc[(s, t)].items():
            if y not in stalks[t]:
                raise SheafError(f"subset at {s} not carried into subset at {t} by localization")
    return GSheaf(D.site, D.group, stalks, loc, _check=False)


# ---------------------------------------------------------------- morphisms


class SheafMorphism:
    """Pointwise equivariant maps commuting with localization."""

    def __init__(self, source: GSheaf, target: GSheaf, comp: Mapping, _check=True):
        if source.site != target.site or source.group != target.group:
            raise SiteMismatch("morphism between sheaves on different sites or groups")
        self.source, self.target = source, target
        self.comp: dict[str, EquivariantMap] = {}
        for p in source.site.points:
            m = comp[p]
            mapping = m.mapping if isinstance(m, EquivariantMap) else m
            self.comp[p] = EquivariantMap(source.stalks[p], target.stalks[p], mapping, _check=_check)
        if _check:
            for (s, t), ls in source.loc.items():
                lt = target.loc[(s, t)]
                for x in source.stalks[s].points:
                    if lt(self.comp[s](x)) != self.comp[t](ls(x)):
                        raise NotNatural(f"naturality fails on edge {s} -> {t} at {x!r}")

    def __getitem__(self, s: str) -> EquivariantMap:
        return self.comp[s]

    def on_sections(self, U) -> EquivariantMap:
        U = frozenset(U)
        pts = self.source.site.ordered(U)
        A, B = self.source.sections(U), self.target.sections(U)
        mp = {x: tuple(self.comp[p](v) for p, v in zip(pts, x)) for x in A.points}
        return EquivariantMap(A, B, mp, _check=False)

    def key(self) -> tuple:
        return tuple((p, self.comp[p].key()) for p in self.source.site.points)

    def __eq__(self, other):
        return isinstance(other, SheafMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SheafMorphism({ {p: m.mapping for p, m in self.comp.items()} })"

    def compose(self, other: "SheafMorphism") -> "SheafMorphism":
        """self after other"""
        if not (other.target is self.source or other.target == self.source):
            raise SheafError("composing morphisms whose ends do not match")
        return SheafMorphism(
            other.source, self.target, {p: self.comp[p].compose(other.comp[p]) for p in self.comp}, _check=False
        )


def identity_morphism(D: GSheaf) -> SheafMorphism:
    return SheafMorphism(D, D, {p: identity_map(X) for p, X in D.stalks.items()}, _check=False)


def inclusion(sub: GSheaf, D: GSheaf) -> SheafMorphism:
    return SheafMorphism(sub, D, {p: {x: x for x in X.points} for p, X in sub.stalks.items()})


def is_mono(phi: SheafMorphism) -> bool:
    return all(m.is_injective() for m in phi.comp.values())


def is_epi(phi: SheafMorphism) -> bool:
    return all(m.is_surjective() for m in phi.comp.values())


def is_isomorphism(phi: SheafMorphism) -> bool:
    return is_mono(phi) and is_epi(phi)


def inverse(phi: SheafMorphism) -> SheafMorphism:
    if not is_isomorphism(phi):
        raise SheafError("only isomorphisms have inverses")
    return SheafMorphism(
        phi.target, phi.source, {p: {y: x for x, y in m.mapping.items()} for p, m in phi.comp.items()}, _check=False
    )


def image(phi: SheafMorphism) -> tuple[GSheaf, SheafMorphism, SheafMorphism]:
    """Stalkwise image with its factorization ``phi = mono . epi``."""
    E = phi.target
    im = subsheaf(E, {p: m.image() for p, m in phi.comp.items()})
    epi = SheafMorphism(phi.source, im, {p: m.mapping for p, m in phi.comp.items()}, _check=False)
    return im, inclusion(im, E), epi


def _check_same(sheaves: Sequence[GSheaf]):
    for E in sheaves[1:]:
        if E.site != sheaves[0].site or E.group != sheaves[0].group:
            raise SiteMismatch("sheaves live on different sites or groups")


def product(D: GSheaf, E: GSheaf) -> GSheaf:
    """Stalkwise product, stalk elements labelled by pairs."""
    _check_same([D, E])
    stalks = {p: product_action(D.stalks[p], E.stalks[p]) for p in D.site.points}
    loc = {
        (s, t): {(x, y): (D.loc[(s, t)](x), E.loc[(s, t)](y)) for x, y in stalks[s].points}
        for (s, t) in D.loc
    }
    return GSheaf(D.site, D.group, stalks, loc, _check=False)


def pairing(f: SheafMorphism, g: SheafMorphism) -> SheafMorphism:
    """The morphism (f, g): C -> D x E."""
    P = product(f.target, g.target)
    return SheafMorphism(
        f.source, P, {p: {x: (f.comp[p](x), g.comp[p](x)) for x in f.source.stalks[p].points} for p in P.site.points}, _check=False
    )


def projections(D: GSheaf, E: GSheaf) -> tuple[SheafMorphism, SheafMorphism]:
    P = product(D, E)
    p1 = SheafMorphism(P, D, {p: {z: z[0] for z in X.points} for p, X in P.stalks.items()}, _check=False)
    p2 = SheafMorphism(P, E, {p: {z: z[1] for z in X.points} for p, X in P.stalks.items()}, _check=False)
    return p1, p2


def disjoint_union(sheaves: Sequence[GSheaf], site: FiniteSite | None = None, group: FiniteGroup | None = None) -> GSheaf:
    """Stalkwise coproduct, element x of the i-th summand labelled (i, x)."""
    sheaves = list(sheaves)
    if not sheaves:
        if site is None or group is None:
            raise SheafError("the empty union needs an explicit site and group")
        return initial_sheaf(site, group)
    _check_same(sheaves)
    site, group = sheaves[0].site, sheaves[0].group
    stalks = {p: disjoint_union_actions([D.stalks[p] for D in sheaves], group) for p in site.points}
    loc = {
        (s, t): {(i, x): (i, D.loc[(s, t)](x)) for i, D in enumerate(sheaves) for x in D.stalks[s].points}
        for (s, t) in sheaves[0].loc
    }
    return GSheaf(site, group, stalks, loc, _check=False)


def coproduct_morphism(maps: Sequence[SheafMorphism], target: GSheaf) -> SheafMorphism:
    """The morphism from the disjoint union of the sources induced by ``maps``."""
    src = disjoint_union([m.source for m in maps], site=target.site, group=target.group)
    comp = {p: {(i, x): m.comp[p](x) for i, m in enumerate(maps) for x in m.source.stalks[p].points} for p in target.site.points}
    return SheafMorphism(src, target, comp, _check=False)


# ---------------------------------------------------------------- enumeration


def morphisms(D: GSheaf, E: GSheaf, injective: bool = False) -> Iterator[SheafMorphism]:
    """Every sheaf morphism D -> E (brute force, generic point outwards)."""
    _check_same([D, E])
    site = D.site
    order = site.topo_order
    G = D.group
    plan = []
    for s in order:
        X = D.stalks[s]
        orbs = X.orbits()
        stabs = [X.stabilizer(o[0]).elements for o in orbs]
        plan.append((s, X, orbs, stabs))

    def rec(k, chosen):
        if k == len(plan):
            yield SheafMorphism(D, E, dict(chosen), _check=False)
            return
        s, X, orbs, stabs = plan[k]
        Y = E.stalks[s]
        lows = site.lower_covers(s)
        options = []
        for o, H in zip(orbs, stabs):
            x0 = o[0]
            opts = []
            for y in Y.points:
                if any(Y.act(h, y) != y for h in H):
                    continue
                if any(E.loc[(s, t)](y) != chosen[t][D.loc[(s, t)](x0)] for t in lows):
                    continue
                opts.append(y)
            if not opts:
                return
            options.append(opts)
        for pick in itertools.product(*options):
            mp = {}
            for o, y in zip(orbs, pick):
                for g in G.elements:
                    mp[X.act(g, o[0])] = Y.act(g, y)
            if injective and len(set(mp.values())) != len(mp):
                continue
            chosen[s] = mp
            yield from rec(k + 1, chosen)
            del chosen[s]

    yield from rec(0, {})


def isomorphisms(D: GSheaf, E: GSheaf) -> Iterator[SheafMorphism]:
    if any(len(D.stalks[p]) != len(E.stalks[p]) for p in D.site.points):
        return iter(())
    return (m for m in morphisms(D, E, injective=True))


def are_isomorphic(D: GSheaf, E: GSheaf) -> bool:
    return next(iter(isomorphisms(D, E)), None) is not None


def subsheaf_subsets(D: GSheaf) -> list[dict[str, frozenset]]:
    """All G-stable, localization-stable families of stalk subsets."""
    if D.total_size() > SUBSHEAF_GUARD:
        raise TooLarge(f"{D.total_size()} stalk elements exceeds the guard of {SUBSHEAF_GUARD}")
    site = D.site
    out = []
    order = site.topo_order

    def rec(k, chosen):
        if k == len(order):
            out.append(dict(chosen))
            return
        s = order[k]
        lows = site.lower_covers(s)
        allowed = [
            o for o in D.stalks[s].orbits()
            if all(D.loc[(s, t)](x) in chosen[t] for t in lows for x in o)
        ]
        for r in range(len(allowed) + 1):
            for combo in itertools.combinations(allowed, r):
                chosen[s] = frozenset(x for o in combo for x in o)
                rec(k + 1, chosen)
        chosen.pop(s, None)

    rec(0, {})
    return out


def subsheaves(D: GSheaf) -> list[GSheaf]:
    return [subsheaf(D, S) for S in subsheaf_subsets(D)]


def sheaf_condition_holds(D: GSheaf) -> bool:
    """D(V1 u V2) is the equalizer of D(V1), D(V2) over D(V1 n V2), for all pairs of opens."""
    ops = D.site.opens()
    for V1, V2 in itertools.combinations_with_replacement(ops, 2):
        U, W = V1 | V2, V1 & V2
        glued = {}
        for a in D.sections(V1).points:
            for b in D.sections(V2).points:
                if D.restrict_section(V1, W, a) == D.restrict_section(V2, W, b):
                    glued[(a, b)] = True
        pairs = [(D.restrict_section(U, V1, x), D.restrict_section(U, V2, x)) for x in D.sections(U).points]
        if len(set(pairs)) != len(pairs) or set(pairs) != set(glued):
            return False
    return True


def restrict_sheaf(D: GSheaf, U) -> GSheaf:
    """The stalk diagram over the nonempty open U, as a sheaf on the subsite."""
    sub = D.site.subsite(U)
    loc = {(s, t): m for (s, t), m in D.loc.items() if s in U and t in U}
    # Hasse edges of the subsite are Hasse edges of the site: opens are down-closed
    return GSheaf(sub, D.group, {p: D.stalks[p] for p in sub.points}, loc, _check=False)


def stalk_sets(D: GSheaf) -> dict[str, frozenset]:
    return {p: frozenset(X.points) for p, X in D.stalks.items()}


def describe(D: GSheaf) -> str:
    lines = []
    for p in D.site.points:
        X = D.stalks[p]
        lines.append(f"  {p}: {[label_str(x) for x in X.points]}")
    for (s, t), m in D.loc.items():
        lines.append(f"  {s}->{t}: " + ", ".join(f"{label_str(x)}->{label_str(y)}" for x, y in m.mapping.items()))
    return "\n".join(lines)

