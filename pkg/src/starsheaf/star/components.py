"""Connected components, orbit sections and the espace etale."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..gset import label_str, sort_labels
from ..gsheaf import (
    GSheaf,
    SheafError,
    SheafMorphism,
    coproduct_morphism,
    subsheaf,
    subsheaf_subsets,
)
from ..site import FiniteSite
from .functors import constant_sheaf, j_shriek


class UnknownComponent(SheafError):
    pass


class NontrivialAction(SheafError):
    pass


def support(D: GSheaf) -> frozenset:
    return frozenset(p for p, X in D.stalks.items() if len(X))


def pi0(D: GSheaf) -> list:
    """Orbit labels of the generic stalk, listed in label order."""
    return [o[0] for o in D.stalks[D.site.generic].orbits()]


def component(D: GSheaf, c) -> GSheaf:
    """Elements whose generic germ lies in the orbit labelled ``c``."""
    eta = D.site.generic
    X = D.stalks[eta]
    if c not in X or X.orbit_label(c) != c:
        raise UnknownComponent(f"{c!r} does not label an orbit of the generic stalk")
    orb = set(X.orbit(c))
    return subsheaf(D, {s: [d for d in D.stalks[s].points if D.restriction(s, eta)[d] in orb] for s in D.site.points})


def decompose(D: GSheaf) -> list[GSheaf]:
    return [component(D, c) for c in pi0(D)]


# ---------------------------------------------------------------- orbit sections


@dataclass(frozen=True)
class OrbitSection:
    open: frozenset
    orbit: tuple

    @property
    def label(self):
        return self.orbit[0]

    def __repr__(self):
        return f"OrbitSection({sorted(self.open)}, {label_str(self.label)})"


def orbit_sections(D: GSheaf) -> list[OrbitSection]:
    return [OrbitSection(U, o) for U in D.site.nonempty_opens() for o in D.sections(U).orbits()]


def orbit_section_le(D: GSheaf, a: OrbitSection, b: OrbitSection) -> bool:
    """(U, g) <= (U', g') iff U is inside U' and g is the restriction of g'."""
    if not a.open <= b.open:
        return False
    return {D.restrict_section(b.open, a.open, x) for x in b.orbit} == set(a.orbit)


def _open_sort_key(site: FiniteSite, sec: OrbitSection):
    return (-len(sec.open), tuple(sorted(site.index(p) for p in sec.open)), label_str(sec.label))


def maximal_orbit_sections(D: GSheaf) -> list[OrbitSection]:
    """Largest pairs, ordered by open size descending, then open, then orbit label."""
    allsec = orbit_sections(D)
    out = [a for a in allsec if not any(b != a and orbit_section_le(D, a, b) for b in allsec)]
    return sorted(out, key=lambda a: _open_sort_key(D.site, a))


def orbit_section_morphism(D: GSheaf, sec: OrbitSection) -> SheafMorphism:
    """j_U!(orbit) -> D, sending the constant orbit to its germs."""
    U = sec.open
    orb = D.sections(U).restrict(sec.orbit)
    src = j_shriek(D.site, U, constant_sheaf(D.site.subsite(U), orb))
    comp = {p: ({c: D.value_at(U, c, p) for c in sec.orbit} if p in U else {}) for p in D.site.points}
    return SheafMorphism(src, D, comp, _check=False)


def covering_morphism(D: GSheaf) -> SheafMorphism:
    """Coproduct over the maximal orbit sections, mapped into D."""
    return coproduct_morphism([orbit_section_morphism(D, a) for a in maximal_orbit_sections(D)], D)


def pi0_map(D: GSheaf) -> dict:
    """Maximal orbit section -> the component containing its generic germ."""
    eta = D.site.generic
    X = D.stalks[eta]
    return {a: X.orbit_label(D.value_at(a.open, a.label, eta)) for a in maximal_orbit_sections(D)}


def pi0_bruteforce(D: GSheaf) -> list[GSheaf]:
    """Minimal nonempty complemented subsheaves, by exhaustive scan."""
    subs = subsheaf_subsets(D)

    def key(S):
        return tuple(sorted((p, tuple(sort_labels(S[p]))) for p in S))

    keys = {key(S) for S in subs}

    def complemented(S):
        comp = {p: frozenset(D.stalks[p].points) - S[p] for p in S}
        return key(comp) in keys

    nonempty = [S for S in subs if any(S.values()) and complemented(S)]

    def inside(A, B):
        return all(A[p] <= B[p] for p in A)

    minimal = [A for A in nonempty if not any(B != A and inside(B, A) for B in nonempty)]
    return [subsheaf(D, S) for S in minimal]


# ---------------------------------------------------------------- espace etale


class EspaceEtale:
    """Total space of a sheaf of sets over a finite site, with its projection.

    Points are pairs ``(s, d)`` with ``d`` in the stalk at ``s``; ``(t, e)``
    generizes ``(s, d)`` when ``t`` generizes ``s`` and ``d`` localizes to
    ``e``. The total space need not have a generic point.
    """

    def __init__(self, D: GSheaf):
        if not D.is_trivial_action():
            raise NontrivialAction("the espace etale needs a sheaf with trivial action")
        self.sheaf = D
        self.base = D.site
        self.points = tuple((s, d) for s in D.site.points for d in D.stalks[s].points)
        self.projection = {pt: pt[0] for pt in self.points}
        idx = {pt: i for i, pt in enumerate(self.points)}
        n = len(self.points)
        leq = np.zeros((n, n), dtype=bool)
        for s, d in self.points:
            for t in D.site.points:
                if D.site.le(t, s):
                    leq[idx[(t, D.restriction(s, t)[d])], idx[(s, d)]] = True
        self.leq = leq
        self._index = idx

    def le(self, a, b) -> bool:
        return bool(self.leq[self._index[a], self._index[b]])

    def minimal_open(self, pt) -> frozenset:
        j = self._index[pt]
        return frozenset(p for i, p in enumerate(self.points) if self.leq[i, j])

    def minimal_points(self) -> list:
        return [p for p in self.points if not any(q != p and self.le(q, p) for q in self.points)]

    def is_local_isomorphism(self) -> bool:
        """The projection maps each minimal open bijectively onto a minimal open."""
        for pt in self.points:
            V = self.minimal_open(pt)
            img = [self.projection[q] for q in V]
            if len(set(img)) != len(img) or set(img) != self.base.minimal_open(pt[0]):
                return False
        return True

    def sections_over(self, U: Iterable[str]) -> list[tuple]:
        """Continuous sections of the projection over U, as tuples in base order."""
        pts = self.base.ordered(U)
        if not pts:
            return [()]
        out = []
        # generizations are chosen before the points they generize
        pts_sorted = sorted(pts, key=self.base.topo_order.index)

        def rec_sorted(k, chosen):
            if k == len(pts_sorted):
                out.append(tuple(chosen[p][1] for p in pts))
                return
            s = pts_sorted[k]
            for d in self.sheaf.stalks[s].points:
                if all(self.le(chosen[t], (s, d)) for t in pts_sorted[:k] if self.base.le(t, s)):
                    chosen[s] = (s, d)
                    rec_sorted(k + 1, chosen)
                    del chosen[s]

        rec_sorted(0, {})
        return out

    def as_site(self) -> FiniteSite:
        """The total space as a site, when it has a single generic point."""
        mins = self.minimal_points()
        if len(mins) != 1:
            raise SheafError(f"total space has {len(mins)} minimal points")
        labels = [f"{s}:{label_str(d)}" for s, d in self.points]
        edges = [(labels[i], labels[j]) for i, j in map(tuple, np.argwhere(self.leq)) if i != j]
        return FiniteSite(labels, edges, labels[self._index[mins[0]]])


def espace_etale(D: GSheaf) -> EspaceEtale:
    return EspaceEtale(D)
