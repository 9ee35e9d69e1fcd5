"""Finite irreducible Alexandrov spaces with a generic point, and inertia profiles.

A point ``a`` *generizes* ``b`` (written ``a <= b``) when ``b`` lies in the
closure of ``a``. Opens are the generization-closed subsets; they are
represented as plain ``frozenset`` objects of point labels. The generic
point generizes everything, so every nonempty open contains it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .gset import FiniteGroup, Subgroup, is_normal, join, subgroup_generated, trivial_subgroup


class SiteError(ValueError):
    pass


class CycleDetected(SiteError):
    pass


class GenericNotMinimal(SiteError):
    pass


class DuplicatePoint(SiteError):
    pass


class UnknownPoint(SiteError):
    pass


class InertiaError(ValueError):
    pass


class NotNormal(InertiaError):
    pass


class GenericInertiaNontrivial(InertiaError):
    pass


class InertiaNotMonotone(InertiaError):
    pass


class SiteMapError(ValueError):
    pass


class NotMonotone(SiteMapError):
    pass


class GenericNotPreserved(SiteMapError):
    pass


class InertiaIncompatible(SiteMapError):
    pass


class FiniteSite:
    """Finite poset of points under generization, with a least (generic) point."""

    def __init__(self, points: Sequence[str], edges: Iterable[tuple[str, str]], generic: str):
        points = list(points)
        seen = set()
        for p in points:
            if p in seen:
                raise DuplicatePoint(f"point {p!r} listed twice")
            seen.add(p)
        self.points = tuple(points)
        self._index = {p: i for i, p in enumerate(points)}
        if generic not in self._index:
            raise UnknownPoint(f"generic point {generic!r} is not a point")
        n = len(points)
        leq = np.eye(n, dtype=bool)
        for a, b in edges:
            for p in (a, b):
                if p not in self._index:
                    raise UnknownPoint(f"edge ({a!r}, {b!r}) names unknown point {p!r}")
            leq[self._index[a], self._index[b]] = True
        for k in range(n):  # Warshall
            leq |= leq[:, [k]] & leq[[k], :]
        both = leq & leq.T & ~np.eye(n, dtype=bool)
        if both.any():
            i, j = map(int, np.argwhere(both)[0])
            raise CycleDetected(f"{points[i]!r} and {points[j]!r} generize each other")
        g = self._index[generic]
        if not leq[g].all():
            j = int(np.flatnonzero(~leq[g])[0])
            raise GenericNotMinimal(f"{generic!r} does not generize {points[j]!r}")
        leq.setflags(write=False)
        self.leq = leq
        self.generic = generic
        strict = leq & ~np.eye(n, dtype=bool)
        # a covers-below b iff a < b with nothing strictly between
        cover = strict & ~(strict.astype(int) @ strict.astype(int)).astype(bool)
        self.hasse = tuple((points[i], points[j]) for i, j in map(tuple, np.argwhere(cover)))
        self._height = {p: int(strict[:, self._index[p]].sum()) for p in points}
        self.topo_order = tuple(sorted(points, key=lambda p: (self._height[p], self._index[p])))
        self._opens = None

    # relations

    def index(self, p: str) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise UnknownPoint(f"unknown point {p!r}") from None

    def le(self, a: str, b: str) -> bool:
        """a generizes b"""
        return bool(self.leq[self.index(a), self.index(b)])

    def lower_covers(self, s: str) -> tuple[str, ...]:
        """Immediate generizations of s."""
        return tuple(a for a, b in self.hasse if b == s)

    def upper_covers(self, s: str) -> tuple[str, ...]:
        return tuple(b for a, b in self.hasse if a == s)

    def minimal_open(self, s: str) -> frozenset:
        j = self.index(s)
        return frozenset(p for i, p in enumerate(self.points) if self.leq[i, j])

    def is_open(self, U: Iterable[str]) -> bool:
        U = set(U)
        return all(self.minimal_open(s) <= U for s in U)

    def ordered(self, U: Iterable[str]) -> tuple[str, ...]:
        U = set(U)
        return tuple(p for p in self.points if p in U)

    def maximal(self, U: Iterable[str]) -> tuple[str, ...]:
        U = self.ordered(U)
        return tuple(s for s in U if not any(t != s and self.le(s, t) for t in U))

    def open_key(self, U) -> tuple:
        return (len(U), tuple(sorted(self.index(p) for p in U)))

    def opens(self) -> list[frozenset]:
        """Every open, including the empty one, ordered by size then lexicographically."""
        if self._opens is None:
            out = []
            order = self.topo_order

            def rec(k, chosen):
                if k == len(order):
                    out.append(frozenset(chosen))
                    return
                p = order[k]
                rec(k + 1, chosen)
                if all(q in chosen for q in self.lower_covers(p)):
                    chosen.add(p)
                    rec(k + 1, chosen)
                    chosen.remove(p)

            rec(0, set())
            self._opens = sorted(out, key=self.open_key)
        return list(self._opens)

    def nonempty_opens(self) -> list[frozenset]:
        return [U for U in self.opens() if U]

    def whole(self) -> frozenset:
        return frozenset(self.points)

    def subsite(self, U: Iterable[str]) -> "FiniteSite":
        U = self.ordered(U)
        if not U or not self.is_open(U):
            raise SiteError(f"{set(U)} is not a nonempty open")
        edges = [(a, b) for a, b in self.hasse if a in U and b in U]
        return FiniteSite(U, edges, self.generic)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, FiniteSite)
            and self.points == other.points
            and self.generic == other.generic
            and np.array_equal(self.leq, other.leq)
        )

    def __hash__(self):
        return hash((self.points, self.generic, self.leq.tobytes()))

    def __repr__(self):
        return f"FiniteSite({list(self.points)}, hasse={list(self.hasse)})"


def validate_site(points: Sequence[str], hasse_edges: Iterable[Sequence[str]], generic: str) -> FiniteSite:
    """Edges are (generization, specialization) pairs; any generating set of the order works."""
    return FiniteSite(points, [tuple(e) for e in hasse_edges], generic)


def chain_site(n: int) -> FiniteSite:
    """Totally ordered site ``eta < s1 < ... < s{n-1}``."""
    if n < 1:
        raise SiteError("a chain needs at least one point")
    pts = ["eta"] + [f"s{i}" for i in range(1, n)]
    return FiniteSite(pts, list(zip(pts, pts[1:])), "eta")


def punctual_site() -> FiniteSite:
    return chain_site(1)


def opens(site: FiniteSite) -> list[frozenset]:
    return site.opens()


def minimal_open(site: FiniteSite, s: str) -> frozenset:
    return site.minimal_open(s)


# ---------------------------------------------------------------- inertia


@dataclass(frozen=True, eq=False)
class InertiaProfile:
    """A normal subgroup I(s) per point, trivial at the generic point and
    growing under specialization."""

    site: FiniteSite
    group: FiniteGroup
    inertia: Mapping[str, Subgroup] = field(default_factory=dict)

    def __post_init__(self):
        full = {}
        for s in self.site.points:
            full[s] = self.inertia.get(s, trivial_subgroup(self.group))
        for s in self.inertia:
            self.site.index(s)
        object.__setattr__(self, "inertia", full)
        for s, H in full.items():
            if not is_normal(self.group, H):
                raise NotNormal(f"I({s}) = {set(H.elements)} is not normal")
        if not full[self.site.generic].is_trivial():
            raise GenericInertiaNontrivial("inertia at the generic point must be trivial")
        for a, b in self.site.hasse:
            if not full[a] <= full[b]:
                raise InertiaNotMonotone(f"I({a}) is not contained in I({b}) although {a} generizes {b}")

    def __getitem__(self, s: str) -> Subgroup:
        return self.inertia[s]

    def of_open(self, U) -> Subgroup:
        return inertia_of_open(self, U)

    def restrict(self, U) -> "InertiaProfile":
        sub = self.site.subsite(U)
        return InertiaProfile(sub, self.group, {s: self.inertia[s] for s in sub.points})

    def is_trivial(self) -> bool:
        return all(H.is_trivial() for H in self.inertia.values())

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, InertiaProfile)
            and self.site == other.site
            and self.group == other.group
            and all(self.inertia[s].elements == other.inertia[s].elements for s in self.site.points)
        )

    def __hash__(self):
        return hash((self.site, tuple(self.inertia[s].elements for s in self.site.points)))


def trivial_profile(site: FiniteSite, group: FiniteGroup) -> InertiaProfile:
    return InertiaProfile(site, group, {})


def profile_from_generators(site: FiniteSite, group: FiniteGroup, gens: Mapping[str, Iterable[int]]) -> InertiaProfile:
    return InertiaProfile(site, group, {s: subgroup_generated(group, g) for s, g in gens.items()})


def inertia_of_open(profile: InertiaProfile, U) -> Subgroup:
    """Subgroup generated by the I(s), s in U. The empty open gets the trivial group."""
    return join(profile.group, [profile.inertia[s] for s in U])


# ---------------------------------------------------------------- site maps


@dataclass(frozen=True, eq=False)
class SiteMap:
    """Continuous map of sites sending generic point to generic point, with
    I_source(s') contained in I_target(f(s'))."""

    source: InertiaProfile
    target: InertiaProfile
    f: Mapping[str, str]

    def __post_init__(self):
        S, T = self.source.site, self.target.site
        if self.source.group != self.target.group:
            raise SiteMapError("source and target profiles use different groups")
        for s in S.points:
            if s not in self.f:
                raise SiteMapError(f"map undefined at {s!r}")
            T.index(self.f[s])
        for a, b in S.hasse:
            if not T.le(self.f[a], self.f[b]):
                raise NotMonotone(f"{a} <= {b} but f({a})={self.f[a]} does not generize f({b})={self.f[b]}")
        if self.f[S.generic] != T.generic:
            raise GenericNotPreserved(f"generic point goes to {self.f[S.generic]!r}")
        for s in S.points:
            if not self.source[s] <= self.target[self.f[s]]:
                raise InertiaIncompatible(f"I({s}) is not contained in I(f({s}))")

    def __call__(self, s):
        return self.f[s]

    def preimage(self, U) -> frozenset:
        U = set(U)
        return frozenset(s for s in self.source.site.points if self.f[s] in U)


def validate_site_map(f: Mapping[str, str], source: InertiaProfile, target: InertiaProfile) -> SiteMap:
    return SiteMap(source, target, dict(f))


def open_inclusion(profile: InertiaProfile, U) -> SiteMap:
    sub = profile.restrict(U)
    return SiteMap(sub, profile, {s: s for s in sub.site.points})


def generic_point_inclusion(profile: InertiaProfile) -> SiteMap:
    return open_inclusion(profile, {profile.site.generic})
