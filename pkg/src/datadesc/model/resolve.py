"""Name lookup shared by the rule engine, analysis, and the editor server."""

from __future__ import annotations

from . import types as m


class NotFound(LookupError):
    pass


class Ambiguous(LookupError):
    pass


def resolve(model: m.DatasetDescription, qualified_name: str):
    """Find the element addressed by `instance`, `instance.attribute`,
    or a process/issue name.

    Raises NotFound for absent names and Ambiguous when a bare name is
    declared in more than one category (possible because symbol scopes
    are per-category).
    """
    name = qualified_name.strip()
    if not name:
        raise NotFound("empty name")
    if "." in name:
        inst_name, attr_name = name.split(".", 1)
        inst = model.instance(inst_name)
        if inst is None:
            raise NotFound(f"no data instance named '{inst_name}'")
        attr = inst.attribute(attr_name)
        if attr is None:
            raise NotFound(f"instance '{inst_name}' has no attribute "
                           f"'{attr_name}'")
        return attr

    hits: list[object] = []
    inst = model.instance(name)
    if inst is not None:
        hits.append(inst)
    if model.provenance is not None:
        for proc in model.provenance.gathering:
            if proc.name == name:
                hits.append(proc)
        for proc in model.provenance.labeling:
            if proc.name == name:
                hits.append(proc)
    if model.social_concerns is not None:
        for issue in model.social_concerns.issues:
            if issue.name == name:
                hits.append(issue)
    if not hits:
        raise NotFound(f"no element named '{name}'")
    if len(hits) > 1:
        raise Ambiguous(f"'{name}' is declared in {len(hits)} categories")
    return hits[0]
