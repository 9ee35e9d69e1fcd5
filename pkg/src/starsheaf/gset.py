"""Finite groups given by Cayley tables, their subgroups, and finite G-sets.

Group elements are dense integer ids ``0..n-1`` with ``0`` the identity.
Points of a G-set are arbitrary hashable labels (strings, ints, or nested
tuples of those); every ordering in this package is by :func:`label_str`,
so that derived objects come out in a deterministic canonical order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np


def label_str(x) -> str:
    """Canonical string form of a point label; also the sort key."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(label_str(y) for y in x) + ")"
    return str(x)


def sort_labels(xs: Iterable) -> list:
    return sorted(xs, key=label_str)


# ---------------------------------------------------------------- errors


class GroupError(ValueError):
    """Raised when a Cayley table violates a group axiom."""

    def __init__(self, message, witness=()):
        super().__init__(message)
        self.witness = tuple(witness)


class NotLatinSquare(GroupError):
    pass


class NotAssociative(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class NoInverse(GroupError):
    pass


class IdOutOfRange(GroupError):
    pass


class ActionError(ValueError):
    pass


class NotEquivariant(ActionError):
    def __init__(self, message, g=None, x=None):
        super().__init__(message)
        self.g, self.x = g, x


# ---------------------------------------------------------------- groups


class FiniteGroup:
    """A finite group stored as its multiplication table.

    Construct through :func:`validate_group` unless the table is known good.
    """

    def __init__(self, table, _check=True):
        table = np.array(table, dtype=np.int64)
        if _check:
            problems = group_violations(table)
            if problems:
                raise problems[0]
        table.setflags(write=False)
        self.table = table
        self.order = int(table.shape[0])
        self._inv = tuple(int(np.flatnonzero(table[g] == 0)[0]) for g in range(self.order))

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, g: int, h: int) -> int:
        """g h g^-1"""
        return int(self.table[self.table[g, h], self._inv[g]])

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def group_violations(table) -> list[GroupError]:
    """All axiom violations of a candidate Cayley table, first witness of each kind."""
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        return [GroupError(f"table must be a non-empty square array, got shape {t.shape}")]
    n = t.shape[0]
    if not np.issubdtype(t.dtype, np.integer):
        return [GroupError("table entries must be integers")]
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        i, j = map(int, bad[0])
        return [IdOutOfRange(f"entry ({i},{j})={int(t[i, j])} outside 0..{n - 1}", (i, j))]
    out: list[GroupError] = []
    target = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(t[i]), target):
            j = _first_repeat(t[i])
            out.append(NotLatinSquare(f"row {i} repeats element {int(t[i, j])}", (i, j)))
            break
    else:
        for j in range(n):
            if not np.array_equal(np.sort(t[:, j]), target):
                i = _first_repeat(t[:, j])
                out.append(NotLatinSquare(f"column {j} repeats element {int(t[i, j])}", (i, j)))
                break
    if not (np.array_equal(t[0], target) and np.array_equal(t[:, 0], target)):
        k = int(np.flatnonzero((t[0] != target) | (t[:, 0] != target))[0])
        out.append(NoIdentity(f"0 is not a two-sided identity (fails at {k})", (0, k)))
    for a in range(n):
        left = np.flatnonzero(t[a] == 0)
        if not any(t[b, a] == 0 for b in left):
            out.append(NoInverse(f"element {a} has no two-sided inverse", (a,)))
            break
    # (ab)c vs a(bc), all triples at once
    lhs = t[t, :]  # lhs[a, b, c] = t[t[a, b], c]
    rhs = t[:, t]  # rhs[a, b, c] = t[a, t[b, c]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        a, b, c = map(int, bad[0])
        out.append(NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})", (a, b, c)))
    return out


def _first_repeat(row) -> int:
    seen = set()
    for j, v in enumerate(row):
        if int(v) in seen:
            return j
        seen.add(int(v))
    return 0


def validate_group(table) -> FiniteGroup:
    """Check the group axioms and return the group.

    Raises the first violated axiom (NotLatinSquare, NoIdentity, NoInverse,
    NotAssociative) with its witness; use :func:`group_violations` for all.
    """
    return FiniteGroup(table)


def group_from_elements(elements: Sequence, mul: Callable) -> FiniteGroup:
    """Build a table from concrete elements; ``elements[0]`` must be the identity."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return FiniteGroup(np.array(table).reshape(n, n))


def cyclic_group(n: int) -> FiniteGroup:
    return group_from_elements(list(range(n)), lambda a, b: (a + b) % n)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    els = [(a, b) for a in G.elements for b in H.elements]
    return group_from_elements(els, lambda x, y: (G.mul(x[0], y[0]), H.mul(x[1], y[1])))


def permutation_group(gens: Iterable[Sequence[int]], degree: int) -> FiniteGroup:
    """Closure of permutation generators; elements ordered by discovery (identity first)."""
    ident = tuple(range(degree))
    gens = [tuple(g) for g in gens]
    els, seen, frontier = [ident], {ident}, [ident]
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(degree))
                if q not in seen:
                    seen.add(q)
                    els.append(q)
                    new.append(q)
        frontier = new
    return group_from_elements(els, lambda p, q: tuple(p[q[i]] for i in range(degree)))


def symmetric_group(n: int) -> FiniteGroup:
    if n == 1:
        return cyclic_group(1)
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return permutation_group(gens, n)


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return permutation_group([rot, ref], n)


def quaternion_group() -> FiniteGroup:
    # elements as (sign, unit) with unit in 1,i,j,k
    prod = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def mul(a, b):
        s, u = prod[a[1], b[1]]
        return (a[0] * b[0] * s, u)

    els = [(s, u) for s in (1, -1) for u in "1ijk"]
    return group_from_elements(els, mul)


def small_groups(max_order: int = 8) -> list[tuple[str, FiniteGroup]]:
    """Every group of order <= ``max_order`` (up to 8) once, up to isomorphism."""
    if max_order > 8:
        raise ValueError("catalogue only covers orders up to 8")
    C = cyclic_group
    cat = [
        ("C1", lambda: C(1)), ("C2", lambda: C(2)), ("C3", lambda: C(3)),
        ("C4", lambda: C(4)), ("C2xC2", lambda: direct_product(C(2), C(2))),
        ("C5", lambda: C(5)), ("C6", lambda: C(6)), ("S3", lambda: symmetric_group(3)),
        ("C7", lambda: C(7)), ("C8", lambda: C(8)), ("C2xC4", lambda: direct_product(C(2), C(4))),
        ("C2xC2xC2", lambda: direct_product(C(2), direct_product(C(2), C(2)))),
        ("D4", lambda: dihedral_group(4)), ("Q8", quaternion_group),
    ]
    out = [(name, make()) for name, make in cat]
    return [(name, G) for name, G in out if G.order <= max_order]


# ---------------------------------------------------------------- subgroups


@dataclass(frozen=True)
class Subgroup:
    group: FiniteGroup
    elements: tuple[int, ...]

    def __contains__(self, g) -> bool:
        return g in self._set

    @property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __le__(self, other: "Subgroup") -> bool:
        return set(self.elements) <= set(other.elements)

    def __lt__(self, other: "Subgroup") -> bool:
        return self <= other and len(self) < len(other)

    def is_trivial(self) -> bool:
        return self.elements == (0,)

    def __repr__(self):
        return f"Subgroup{set(self.elements)}"


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``gens`` (closure under products suffices: G is finite)."""
    gens = list(gens)
    for g in gens:
        if not (isinstance(g, (int, np.integer)) and 0 <= g < G.order):
            raise IdOutOfRange(f"generator {g!r} is not an element id of a group of order {G.order}", (g,))
    elems = {0}
    frontier = [0]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = G.mul(a, int(g))
                if b not in elems:
                    elems.add(b)
                    new.append(b)
        frontier = new
    return Subgroup(G, tuple(sorted(elems)))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (0,))


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(G.elements))


def join(G: FiniteGroup, subgroups: Iterable[Subgroup]) -> Subgroup:
    gens = set()
    for H in subgroups:
        gens.update(H.elements)
    return subgroup_generated(G, gens)


def meet(G: FiniteGroup, subgroups: Iterable[Subgroup]) -> Subgroup:
    common = set(G.elements)
    for H in subgroups:
        common &= set(H.elements)
    return Subgroup(G, tuple(sorted(common)))


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    hs = set(H.elements)
    return all(G.conj(g, h) in hs for g in G.elements for h in H.elements)


def subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All subgroups, ordered by (size, elements)."""
    found = {(0,): trivial_subgroup(G)}
    frontier = list(found.values())
    while frontier:
        new = []
        for H in frontier:
            for g in G.elements:
                if g in H:
                    continue
                K = subgroup_generated(G, H.elements + (g,))
                if K.elements not in found:
                    found[K.elements] = K
                    new.append(K)
        frontier = new
    return sorted(found.values(), key=lambda H: (len(H), H.elements))


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    return [H for H in subgroups(G) if is_normal(G, H)]


# ---------------------------------------------------------------- G-sets


class GAction:
    """A finite set with a left action of a finite group.

    ``act`` is either a callable ``(g, x) -> y`` or a mapping
    ``g -> {x: y}`` covering every group element. Points are stored in
    canonical order (by :func:`label_str`).
    """

    def __init__(self, group: FiniteGroup, points: Iterable[Hashable], act, _check=True):
        pts = tuple(sort_labels(set(points)))
        index = {x: i for i, x in enumerate(pts)}
        if len(index) != len(pts):
            raise ActionError("duplicate point labels")
        get = act if callable(act) else (lambda g, x: act[g][x])
        try:
            images = tuple(tuple(index[get(g, x)] for x in pts) for g in group.elements)
        except KeyError as exc:
            raise ActionError(f"action leaves the point set or is incomplete: {exc}") from None
        self.group = group
        self.points = pts
        self._index = index
        self._img = images
        if _check:
            self._check_axioms()

    @classmethod
    def _raw(cls, group, points, images):
        self = cls.__new__(cls)
        self.group = group
        self.points = tuple(points)
        self._index = {x: i for i, x in enumerate(self.points)}
        self._img = images
        return self

    def _check_axioms(self):
        n = len(self.points)
        if self._img[0] != tuple(range(n)):
            raise ActionError("identity does not act trivially")
        for g in self.group.elements:
            if sorted(self._img[g]) != list(range(n)):
                raise ActionError(f"element {g} does not act bijectively")
        G = self.group
        for g in G.elements:
            for h in G.elements:
                gh = self._img[G.mul(g, h)]
                ig, ih = self._img[g], self._img[h]
                for i in range(n):
                    if ig[ih[i]] != gh[i]:
                        raise ActionError(
                            f"act({g}, act({h}, {self.points[i]!r})) != act({g}*{h}, ...)"
                        )

    @classmethod
    def from_images(cls, group: FiniteGroup, points: Sequence, images: Mapping[int, Sequence]):
        """Build from images of some group elements (aligned with ``points``).

        The elements given must generate the group; the rest are filled in by
        multiplying, and any inconsistency with the table is an ActionError.
        """
        pts = list(points)
        if len(set(pts)) != len(pts):
            raise ActionError("duplicate point labels")
        index = {x: i for i, x in enumerate(pts)}
        perms: dict[int, tuple[int, ...]] = {0: tuple(range(len(pts)))}
        for g, imgs in images.items():
            g = int(g)
            if not 0 <= g < group.order:
                raise ActionError(f"unknown group element {g}")
            try:
                p = tuple(index[y] for y in imgs)
            except KeyError as exc:
                raise ActionError(f"image {exc} of element {g} is not a point") from None
            if len(p) != len(pts):
                raise ActionError(f"element {g}: expected {len(pts)} images")
            if g in perms and perms[g] != p:
                raise ActionError(f"element {g} given inconsistent images")
            perms[g] = p
        given = dict(perms)
        changed = True
        while changed:
            changed = False
            for a, b in itertools.product(list(perms), repeat=2):
                c = group.mul(a, b)
                pc = tuple(perms[a][perms[b][i]] for i in range(len(pts)))
                if c in perms:
                    if perms[c] != pc:
                        raise ActionError(f"images for {c} disagree with {a}*{b}")
                else:
                    perms[c] = pc
                    changed = True
        if len(perms) != group.order:
            raise ActionError(f"elements {sorted(given)} do not generate the group")
        return cls(group, pts, lambda g, x: pts[perms[g][index[x]]])

    # basic access

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, x):
        return x in self._index

    def act(self, g: int, x):
        return self.points[self._img[g][self._index[x]]]

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, GAction)
            and self.points == other.points
            and self._img == other._img
            and self.group == other.group
        )

    def __hash__(self):
        return hash((self.points, self._img))

    def __repr__(self):
        return f"GAction({list(self.points)!r}, |G|={self.group.order})"

    # orbit toolkit

    def orbit(self, x) -> tuple:
        i = self._index[x]
        return tuple(sort_labels({self.points[img[i]] for img in self._img}))

    def orbits(self) -> list[tuple]:
        """G-orbits, each a sorted tuple, listed by their minimal point."""
        seen, out = set(), []
        for x in self.points:
            if x not in seen:
                orb = self.orbit(x)
                seen.update(orb)
                out.append(orb)
        return out

    def orbit_label(self, x):
        return self.orbit(x)[0]

    def stabilizer(self, x) -> Subgroup:
        i = self._index[x]
        return Subgroup(self.group, tuple(g for g in self.group.elements if self._img[g][i] == i))

    def fixed_points(self, H: Iterable[int]) -> tuple:
        H = list(H)
        return tuple(x for i, x in enumerate(self.points) if all(self._img[h][i] == i for h in H))

    def is_trivial(self) -> bool:
        return all(img == self._img[0] for img in self._img)

    def restrict(self, subset: Iterable) -> "GAction":
        """Sub-G-set on a G-stable subset."""
        sub = set(subset)
        for x in sub:
            if x not in self._index:
                raise ActionError(f"{x!r} is not a point")
            for g in self.group.elements:
                if self.act(g, x) not in sub:
                    raise ActionError(f"subset not G-stable at {x!r}")
        pts = tuple(x for x in self.points if x in sub)
        idx = {x: i for i, x in enumerate(pts)}
        images = tuple(tuple(idx[self.points[img[self._index[x]]]] for x in pts) for img in self._img)
        return GAction._raw(self.group, pts, images)


def trivial_action(G: FiniteGroup, points: Iterable) -> GAction:
    return GAction(G, points, lambda g, x: x, _check=False)


def regular_action(G: FiniteGroup) -> GAction:
    return GAction(G, G.elements, G.mul, _check=False)


def coset_space(G: FiniteGroup, H: Subgroup, prefix="") -> GAction:
    """G/H with left multiplication; the coset gH is labelled ``prefix`` + min id of gH."""
    cosets = {}
    for g in G.elements:
        c = frozenset(G.mul(g, h) for h in H.elements)
        cosets[g] = min(c)
    labels = {g: (f"{prefix}{cosets[g]}" if prefix else cosets[g]) for g in G.elements}
    rep = {labels[g]: g for g in G.elements}
    return GAction(G, set(labels.values()), lambda g, x: labels[G.mul(g, rep[x])], _check=False)


def empty_action(G: FiniteGroup) -> GAction:
    return GAction._raw(G, (), tuple(() for _ in G.elements))


def product_action(X: GAction, Y: GAction) -> GAction:
    pts = [(x, y) for x in X.points for y in Y.points]
    return GAction(X.group, pts, lambda g, p: (X.act(g, p[0]), Y.act(g, p[1])), _check=False)


def disjoint_union_actions(actions: Sequence[GAction], group: FiniteGroup) -> GAction:
    pts = [(i, x) for i, X in enumerate(actions) for x in X.points]
    return GAction(group, pts, lambda g, p: (p[0], actions[p[0]].act(g, p[1])), _check=False)


def orbits(Y: GAction) -> list[tuple]:
    return Y.orbits()


def fixed_points(Y: GAction, H: Iterable[int]) -> tuple:
    """Y^H, the points fixed by every element of H."""
    return Y.fixed_points(H)


def quotient(Y: GAction) -> tuple[GAction, "EquivariantMap"]:
    """G\\Y with trivial action, each orbit labelled by its minimal point, plus the projection."""
    labels = {x: Y.orbit_label(x) for x in Y.points}
    Q = trivial_action(Y.group, set(labels.values()))
    return Q, EquivariantMap(Y, Q, labels, _check=False)


# ---------------------------------------------------------------- maps


class EquivariantMap:
    """A G-map between two G-sets over the same group."""

    def __init__(self, source: GAction, target: GAction, mapping: Mapping, _check=True):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        if _check:
            self._check()

    def _check(self):
        if self.source.group != self.target.group:
            raise ActionError("source and target are acted on by different groups")
        for x in self.source.points:
            if x not in self.mapping:
                raise ActionError(f"map undefined at {x!r}")
            if self.mapping[x] not in self.target:
                raise ActionError(f"image {self.mapping[x]!r} of {x!r} is not in the target")
        for g in self.source.group.elements:
            for x in self.source.points:
                if self.mapping[self.source.act(g, x)] != self.target.act(g, self.mapping[x]):
                    raise NotEquivariant(f"f({g}.{x!r}) != {g}.f({x!r})", g, x)

    def __call__(self, x):
        return self.mapping[x]

    def key(self) -> tuple:
        return tuple((label_str(x), label_str(self.mapping[x])) for x in self.source.points)

    def __eq__(self, other):
        return isinstance(other, EquivariantMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"EquivariantMap({self.mapping!r})"

    def compose(self, other: "EquivariantMap") -> "EquivariantMap":
        """self after other"""
        return EquivariantMap(other.source, self.target, {x: self.mapping[y] for x, y in other.mapping.items()}, _check=False)

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.source)

    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.target.points)

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def image(self) -> tuple:
        return tuple(sort_labels(set(self.mapping.values())))


def identity_map(X: GAction) -> EquivariantMap:
    return EquivariantMap(X, X, {x: x for x in X.points}, _check=False)


def injective_on_orbits(f: EquivariantMap) -> bool:
    """True iff f(g.x) = f(x) forces g.x = x, i.e. f is injective on each orbit.

    Not the same as injectivity of the induced map between orbit sets.
    """
    X = f.source
    for x in X.points:
        fx = f.mapping[x]
        for g in X.group.elements:
            gx = X.act(g, x)
            if gx != x and f.mapping[gx] == fx:
                return False
    return True


def equivariant_maps(X: GAction, Y: GAction, injective: bool = False) -> Iterator[EquivariantMap]:
    """Every G-map X -> Y, orbit by orbit: a representative may go to any y whose
    stabilizer contains its own."""
    orbs = X.orbits()
    stabs = [X.stabilizer(o[0]) for o in orbs]
    choices = []
    for o, H in zip(orbs, stabs):
        choices.append([y for y in Y.points if all(Y.act(h, y) == y for h in H.elements)])
    for pick in itertools.product(*choices):
        mapping = {}
        for o, y in zip(orbs, pick):
            x0 = o[0]
            for g in X.group.elements:
                mapping[X.act(g, x0)] = Y.act(g, y)
        if injective and len(set(mapping.values())) != len(mapping):
            continue
        yield EquivariantMap(X, Y, mapping, _check=False)
