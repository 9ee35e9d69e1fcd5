"""JSON interchange for instances (group, site, inertia, sheaf) and reports.

Instance layout::

    {"group":   {"table": [[...], ...]},
     "site":    {"points": [...], "hasse": [[generization, specialization], ...], "generic": "eta"},
     "inertia": {"point": [generators], ...},
     "sheaf":   {"stalks": {"point": {"elements": [...], "action": {"g": [images]}}},
                 "loc": [{"from": s, "to": t, "map": {"x": "y"}}]}}

``action`` lists, for some group elements, the images of ``elements`` in
order; the listed elements must generate the group. Two sugar blocks lower
to this form: ``chain`` (values along eta < s1 < ...) and ``dvr`` (a map from
the closed stalk to the generic one). Everything is emitted sorted, with
point labels in canonical string form, so equal objects give equal bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .gset import ActionError, FiniteGroup, GAction, GroupError, label_str, subgroup_generated, validate_group
from .gsheaf import GSheaf, SheafError
from .site import FiniteSite, InertiaError, InertiaProfile, SiteError, chain_site


class ParseError(ValueError):
    def __init__(self, message, line=None, col=None, path=None):
        super().__init__(f"{path}:{line}:{col}: {message}" if path else message)
        self.line, self.col, self.path = line, col, path


class SchemaError(ValueError):
    def __init__(self, message, field=None, path=None):
        where = f"{path}: " if path else ""
        super().__init__(f"{where}{field}: {message}" if field else f"{where}{message}")
        self.field, self.path = field, path


@dataclass
class InstanceFile:
    ctx: InertiaProfile
    sheaf: GSheaf
    path: str | None = None

    @property
    def group(self) -> FiniteGroup:
        return self.ctx.group

    @property
    def site(self) -> FiniteSite:
        return self.ctx.site


def _need(d: dict, key: str, field: str, path):
    if not isinstance(d, dict) or key not in d:
        raise SchemaError(f"missing {key!r}", field, path)
    return d[key]


def _gaction(G: FiniteGroup, block: dict, field: str, path) -> GAction:
    elements = _need(block, "elements", field, path)
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise SchemaError("elements must be a list of strings", f"{field}.elements", path)
    action = block.get("action", {})
    try:
        images = {int(g): imgs for g, imgs in action.items()}
    except (ValueError, AttributeError):
        raise SchemaError("action keys must be group element ids", f"{field}.action", path) from None
    nontriv = [g for g in G.elements if g != 0]
    if not elements:
        return GAction(G, [], lambda g, x: x)
    if not images and nontriv:
        # no images given: the trivial action
        images = {g: list(elements) for g in nontriv}
    try:
        return GAction.from_images(G, elements, images)
    except ActionError as exc:
        raise SchemaError(str(exc), f"{field}.action", path) from None


def lower(doc: dict, path=None) -> dict:
    """Rewrite a chain or dvr sugar block into the generic layout (identity otherwise)."""
    if "chain" in doc:
        c = doc["chain"]
        values = _need(c, "values", "chain", path)
        n = len(values)
        site = chain_site(n)
        pts = list(site.points)
        locs = c.get("loc", [])
        if len(locs) != n - 1:
            raise SchemaError(f"need {n - 1} localization maps", "chain.loc", path)
        inertia = {p: g for p, g in zip(pts, c.get("inertia_chain", [[]] * n)) if g}
        return {
            "group": _need(doc, "group", "group", path),
            "site": {"points": pts, "hasse": [[a, b] for a, b in zip(pts, pts[1:])], "generic": "eta"},
            "inertia": inertia,
            "sheaf": {
                "stalks": dict(zip(pts, values)),
                "loc": [{"from": b, "to": a, "map": m} for a, b, m in zip(pts, pts[1:], locs)],
            },
        }
    if "dvr" in doc:
        d = doc["dvr"]
        inert = d.get("inertia", [])
        return {
            "group": _need(doc, "group", "group", path),
            "site": {"points": ["eta", "s1"], "hasse": [["eta", "s1"]], "generic": "eta"},
            "inertia": {"s1": inert} if inert else {},
            "sheaf": {
                "stalks": {"eta": _need(d, "generic", "dvr", path), "s1": _need(d, "special", "dvr", path)},
                "loc": [{"from": "s1", "to": "eta", "map": _need(d, "ell", "dvr", path)}],
            },
        }
    return doc


def load_instance(doc: Any, path=None) -> InstanceFile:
    doc = lower(doc, path)
    table = _need(_need(doc, "group", "group", path), "table", "group", path)
    try:
        G = validate_group(table)
    except GroupError as exc:
        raise SchemaError(str(exc), "group.table", path) from None
    s = _need(doc, "site", "site", path)
    try:
        site = FiniteSite(_need(s, "points", "site", path), [tuple(e) for e in s.get("hasse", [])], _need(s, "generic", "site", path))
    except (SiteError, TypeError, ValueError) as exc:
        raise SchemaError(str(exc), "site", path) from None
    try:
        inertia = {p: subgroup_generated(G, [int(g) for g in gens]) for p, gens in doc.get("inertia", {}).items()}
        ctx = InertiaProfile(site, G, inertia)
    except (InertiaError, GroupError, SiteError, ValueError) as exc:
        raise SchemaError(str(exc), "inertia", path) from None
    sh = _need(doc, "sheaf", "sheaf", path)
    st = _need(sh, "stalks", "sheaf", path)
    stalks = {p: _gaction(G, block, f"sheaf.stalks.{p}", path) for p, block in st.items()}
    loc = {}
    for i, e in enumerate(sh.get("loc", [])):
        key = (_need(e, "from", f"sheaf.loc[{i}]", path), _need(e, "to", f"sheaf.loc[{i}]", path))
        loc[key] = dict(_need(e, "map", f"sheaf.loc[{i}]", path))
    try:
        D = GSheaf(site, G, stalks, loc)
    except (SheafError, SiteError, ActionError) as exc:
        raise SchemaError(str(exc), "sheaf", path) from None
    return InstanceFile(ctx, D, path)


def parse_text(text: str, path=None) -> InstanceFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, path) from None
    return load_instance(doc, path)


def parse(path) -> InstanceFile:
    p = Path(path)
    try:
        text = p.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8: {exc.reason}", 1, exc.start + 1, str(p)) from None
    return parse_text(text, str(p))


# ---------------------------------------------------------------- emission


def _gaction_doc(X: GAction) -> dict:
    pts = [label_str(x) for x in X.points]
    act = {str(g): [label_str(X.act(g, x)) for x in X.points] for g in X.group.elements if g != 0}
    return {"elements": pts, "action": act}


def sheaf_doc(D: GSheaf) -> dict:
    return {
        "stalks": {p: _gaction_doc(X) for p, X in D.stalks.items()},
        "loc": sorted(
            (
                {"from": s, "to": t, "map": {label_str(x): label_str(y) for x, y in m.mapping.items()}}
                for (s, t), m in D.loc.items()
            ),
            key=lambda e: (e["from"], e["to"]),
        ),
    }


def instance_doc(ctx: InertiaProfile, D: GSheaf) -> dict:
    site = ctx.site
    return {
        "group": {"table": ctx.group.table.tolist()},
        "site": {"points": list(site.points), "hasse": sorted([a, b] for a, b in site.hasse), "generic": site.generic},
        "inertia": {p: list(ctx[p].elements) for p in site.points if not ctx[p].is_trivial()},
        "sheaf": sheaf_doc(D),
    }


def canonical_bytes(doc: Any) -> bytes:
    return (json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n").encode("utf-8")


def emit(value) -> bytes:
    """Canonical bytes of an InstanceFile, a (profile, sheaf) pair, or any JSON-ready value."""
    if isinstance(value, InstanceFile):
        value = instance_doc(value.ctx, value.sheaf)
    elif isinstance(value, tuple) and len(value) == 2 and isinstance(value[1], GSheaf):
        value = instance_doc(*value)
    return canonical_bytes(value)


def digest(D: GSheaf) -> str:
    """Stable hash of the canonical form of a sheaf (site and group included)."""
    doc = {"site": {"points": list(D.site.points), "hasse": sorted([a, b] for a, b in D.site.hasse)},
           "group": D.group.table.tolist(), "sheaf": sheaf_doc(D)}
    return hashlib.sha256(canonical_bytes(doc)).hexdigest()
