"""The two ladders of equivalent conditions and the representability report.

Each rung is computed independently of the others, so a disagreement inside
a ladder points at an implementation bug rather than at the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..gset import EquivariantMap, fixed_points, injective_on_orbits
from ..gsheaf import GSheaf, SheafError, is_isomorphism, is_mono
from ..site import inertia_of_open
from .components import (
    covering_morphism,
    maximal_orbit_sections,
    orbit_section_morphism,
    pi0,
    pi0_map,
    support,
)
from .functors import StarContext, _et_unit, _set_unit, is_star


class LadderDisagreement(AssertionError):
    """Conditions that must be equivalent came out different."""


class NotEt(SheafError):
    pass


def _open_pairs(D: GSheaf):
    ops = D.site.nonempty_opens()
    return [(U, V) for U in ops for V in ops if V <= U and V != U]


def _restrictions(D: GSheaf):
    return [D.restriction_map(U, V) for U, V in _open_pairs(D)]


def _to_generic(D: GSheaf):
    eta = frozenset([D.site.generic])
    return [D.restriction_map(U, eta) for U in D.site.nonempty_opens()]


def _stalk_maps(D: GSheaf):
    eta = D.site.generic
    return [EquivariantMap(D.stalks[s], D.stalks[eta], D.restriction(s, eta), _check=False) for s in D.site.points]


def ladder3(ctx: StarContext, D: GSheaf) -> dict:
    """Conditions for being etale-representable (injectivity on orbits)."""
    return {
        "3a": all(injective_on_orbits(f) for f in _restrictions(D)),
        "3c": all(injective_on_orbits(f) for f in _to_generic(D)),
        "3e": all(injective_on_orbits(f) for f in _stalk_maps(D)),
        "3g": all(is_mono(orbit_section_morphism(D, a)) for a in maximal_orbit_sections(D)),
        "3i": is_isomorphism(_et_unit(D)[1]),
    }


def ladder4(ctx: StarContext, D: GSheaf, l3: dict | None = None) -> dict:
    """Conditions for being separated-etale-representable (plain injectivity).

    The bijectivity rung only counts together with the orbit ladder: a free
    orbit collapsed onto a fixed point has one maximal orbit section per
    component without being injective.
    """
    if l3 is None:
        l3 = ladder3(ctx, D)
    labels = list(pi0_map(D).values())
    return {
        "4a": all(f.is_injective() for f in _restrictions(D)),
        "4c": all(f.is_injective() for f in _to_generic(D)),
        "4e": all(f.is_injective() for f in _stalk_maps(D)),
        "4f": all(l3.values()) and len(set(labels)) == len(labels) and set(labels) == set(pi0(D)),
        "4g": is_isomorphism(covering_morphism(D)),
        "4i": is_isomorphism(_set_unit(D)[1]),
    }


@dataclass
class ClassificationReport:
    is_star: bool
    is_et: bool
    is_set: bool
    is_loc: bool
    ladder3: dict = field(default_factory=dict)
    ladder4: dict = field(default_factory=dict)
    pi0_size: int = 0
    supp: frozenset = frozenset()


def check_ladders(l3: dict, l4: dict):
    if len(set(l3.values())) > 1:
        raise LadderDisagreement(f"orbit-injectivity conditions disagree: {l3}")
    if len(set(l4.values())) > 1:
        raise LadderDisagreement(f"injectivity conditions disagree: {l4}")
    if all(l4.values()) and not all(l3.values()):
        raise LadderDisagreement("injective but not injective on orbits")


def classify(ctx: StarContext, D: GSheaf) -> ClassificationReport:
    star = is_star(ctx, D)
    l3 = ladder3(ctx, D)
    l4 = ladder4(ctx, D, l3)
    check_ladders(l3, l4)
    return ClassificationReport(
        is_star=star,
        is_et=star and l3["3e"],
        is_set=star and l4["4e"],
        is_loc=D.is_trivial_action(),
        ladder3=l3,
        ladder4=l4,
        pi0_size=len(pi0(D)),
        supp=support(D),
    )


def is_et(ctx: StarContext, D: GSheaf) -> bool:
    return is_star(ctx, D) and all(injective_on_orbits(f) for f in _stalk_maps(D))


def is_set(ctx: StarContext, D: GSheaf) -> bool:
    return is_star(ctx, D) and all(f.is_injective() for f in _stalk_maps(D))


def properties_of_et(ctx: StarContext, D: GSheaf) -> bool:
    """For an et sheaf, I(U) fixes every section over U."""
    if not is_et(ctx, D):
        raise NotEt("sections are only claimed to be inertia-fixed for et sheaves")
    for U in ctx.site.opens():
        S = D.sections(U)
        if len(fixed_points(S, inertia_of_open(ctx, U).elements)) != len(S):
            return False
    return True
