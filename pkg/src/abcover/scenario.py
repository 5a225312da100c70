"""Reading scenario files.

A scenario is a JSON object.  Groups are given either in invariant form
``{"invariants": [...], "free_rank": r}`` or by a presentation
``{"generators": n, "relations": [[...], ...]}``; every element and matrix in
the file is written in the generators of the group as given, and converted
to canonical coordinates here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .abgrp import FgAbGroup, Homomorphism, Subquotient, subgroup_quotient
from .cover import (
    BuildingData,
    PicardModel,
    ValidationReport,
    building_data,
    check_characteristic_relations,
    validate_building_data,
)
from .extclass import CohomologyModel
from .topology import RhoImage

TOP_LEVEL_KEYS = {
    "name", "description", "group", "branch", "char_generators", "picard",
    "h2", "c1", "rho_image", "pi1", "restriction",
}
REQUIRED_KEYS = ("group", "branch", "char_generators", "picard", "h2", "c1")


class ScenarioError(Exception):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


class SchemaError(ScenarioError):
    pass


class SemanticError(ScenarioError):
    pass


@dataclass
class GivenGroup:
    """A group as written in the file, with the passage to canonical coordinates."""

    ngiven: int
    relations: list[list[int]]
    sq: Subquotient

    @property
    def group(self) -> FgAbGroup:
        return self.sq.group

    def canon(self, v: list[int]) -> tuple[int, ...]:
        return self.sq.coords(v)

    def lift(self, u: int) -> tuple[int, ...]:
        return self.sq.lifts[u]


@dataclass
class Scenario:
    name: str
    bd: BuildingData
    pic: PicardModel
    rho: RhoImage
    coh: CohomologyModel
    pi1_cyclic: int | None
    report: ValidationReport


def _apply(mat: list[list[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in mat]


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


class _Reader:
    def __init__(self) -> None:
        self.errors: list[str] = []

    def err(self, path: str, msg: str) -> None:
        self.errors.append(f"{path}: {msg}")

    def int_list(self, obj: Any, path: str, length: int | None = None) -> list[int] | None:
        if not isinstance(obj, list) or not all(_is_int(x) for x in obj):
            self.err(path, "expected a list of integers")
            return None
        if length is not None and len(obj) != length:
            self.err(path, f"expected {length} entries, got {len(obj)}")
            return None
        return list(obj)

    def matrix(self, obj: Any, path: str, rows: int | None = None, cols: int | None = None) -> list[list[int]] | None:
        if not isinstance(obj, list):
            self.err(path, "expected a list of rows")
            return None
        if rows is not None and len(obj) != rows:
            self.err(path, f"expected {rows} rows, got {len(obj)}")
            return None
        out = []
        for i, row in enumerate(obj):
            r = self.int_list(row, f"{path}[{i}]", cols)
            if r is None:
                return None
            out.append(r)
        return out

    def group(self, obj: Any, path: str) -> GivenGroup | None:
        if not isinstance(obj, dict):
            self.err(path, "expected an object")
            return None
        if "invariants" in obj:
            extra = set(obj) - {"invariants", "free_rank"}
            if extra:
                self.err(path, f"unexpected keys {sorted(extra)}")
                return None
            invs = self.int_list(obj["invariants"], f"{path}.invariants")
            free = obj.get("free_rank", 0)
            if not _is_int(free) or free < 0:
                self.err(f"{path}.free_rank", "expected a non-negative integer")
                return None
            if invs is None:
                return None
            if any(d < 1 for d in invs):
                self.err(f"{path}.invariants", "entries must be positive")
                return None
            n = len(invs) + free
            rels = [[d if i == j else 0 for i in range(n)] for j, d in enumerate(invs)]
        elif "generators" in obj:
            extra = set(obj) - {"generators", "relations"}
            if extra:
                self.err(path, f"unexpected keys {sorted(extra)}")
                return None
            n = obj["generators"]
            if not _is_int(n) or n < 0:
                self.err(f"{path}.generators", "expected a non-negative integer")
                return None
            rels = self.matrix(obj.get("relations", []), f"{path}.relations", cols=n)
            if rels is None:
                return None
        else:
            self.err(path, 'expected "invariants" or "generators"')
            return None
        identity = [[int(i == j) for i in range(n)] for j in range(n)]
        return GivenGroup(n, rels, Subquotient(identity, rels, n))


def load(path: str | Path) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError([f"$: invalid JSON ({exc})"]) from exc
    return parse_input(doc, default_name=Path(path).stem)


def parse_input(doc: Any, default_name: str = "scenario") -> Scenario:
    r = _Reader()
    if not isinstance(doc, dict):
        raise SchemaError(["$: expected a JSON object"])
    for key in sorted(set(doc) - TOP_LEVEL_KEYS):
        r.err(key, "unknown key")
    for key in REQUIRED_KEYS:
        if key not in doc:
            r.err(key, "missing")
    if r.errors:
        raise SchemaError(r.errors)

    G = r.group(doc["group"], "group")
    branch = doc["branch"]
    m: list[int] = []
    g: list[list[int]] = []
    if not isinstance(branch, list):
        r.err("branch", "expected a list")
    elif G is not None:
        for j, b in enumerate(branch):
            if not isinstance(b, dict) or set(b) != {"m", "g"}:
                r.err(f"branch[{j}]", 'expected an object with keys "m" and "g"')
                continue
            if not _is_int(b["m"]) or b["m"] < 1:
                r.err(f"branch[{j}].m", "expected a positive integer")
            gv = r.int_list(b["g"], f"branch[{j}].g", G.ngiven)
            if gv is not None and _is_int(b["m"]):
                m.append(b["m"])
                g.append(gv)
    k = len(branch) if isinstance(branch, list) else 0

    comps: list[list[int]] = []
    chars = doc["char_generators"]
    if not isinstance(chars, list):
        r.err("char_generators", "expected a list")
    else:
        for i, c in enumerate(chars):
            if not isinstance(c, dict) or set(c) != {"a"}:
                r.err(f"char_generators[{i}]", 'expected an object with key "a"')
                continue
            a = r.int_list(c["a"], f"char_generators[{i}].a", k)
            if a is not None:
                comps.append(a)

    picard = doc["picard"]
    A = D = L = None
    if not isinstance(picard, dict) or set(picard) != {"group", "D", "L"}:
        r.err("picard", 'expected an object with keys "group", "D", "L"')
    else:
        A = r.group(picard["group"], "picard.group")
        if A is not None:
            D = r.matrix(picard["D"], "picard.D", rows=k, cols=A.ngiven)
            L = r.matrix(picard["L"], "picard.L", rows=len(comps), cols=A.ngiven)

    h2 = doc["h2"]
    H2 = None
    if not isinstance(h2, dict) or set(h2) != {"group"}:
        r.err("h2", 'expected an object with key "group"')
    else:
        H2 = r.group(h2["group"], "h2.group")
    c1 = None
    if H2 is not None and A is not None:
        c1 = r.matrix(doc["c1"], "c1", rows=H2.ngiven, cols=A.ngiven)

    rho_doc = doc.get("rho_image", [])
    rho = RhoImage()
    if isinstance(rho_doc, dict):
        if set(rho_doc) != {"divisible"}:
            r.err("rho_image", 'expected a list of vectors or {"divisible": [...]}')
        else:
            deltas = r.int_list(rho_doc["divisible"], "rho_image.divisible", k)
            if deltas is not None:
                rho = RhoImage.from_divisibility(deltas)
    else:
        gens = r.matrix(rho_doc, "rho_image", cols=k)
        if gens is not None:
            rho = RhoImage(tuple(tuple(v) for v in gens))

    n = None
    if "pi1" in doc:
        pi1 = doc["pi1"]
        if not isinstance(pi1, dict) or set(pi1) != {"cyclic"} or not _is_int(pi1["cyclic"]) or pi1["cyclic"] < 1:
            r.err("pi1", 'expected {"cyclic": n} with n >= 1')
        else:
            n = pi1["cyclic"]
    restriction_row = None
    if "restriction" in doc:
        if n is None:
            r.err("restriction", 'requires "pi1"')
        elif H2 is not None:
            raw = doc["restriction"]
            if isinstance(raw, list) and raw and isinstance(raw[0], list):
                rows = r.matrix(raw, "restriction", rows=1, cols=H2.ngiven)
                restriction_row = rows[0] if rows else None
            else:
                restriction_row = r.int_list(raw, "restriction", H2.ngiven)

    if r.errors:
        raise SchemaError(r.errors)
    assert G is not None and A is not None and H2 is not None and D is not None and L is not None and c1 is not None

    # semantic layer
    sem: list[str] = []
    Gc = G.group
    gc = [G.canon(x) for x in g]
    for j, (x, mj) in enumerate(zip(gc, m)):
        if Gc.element_order(x) != mj:
            sem.append(f"branch[{j}]: inertia order mismatch (g has order {Gc.element_order(x)}, m = {mj})")
    if not subgroup_quotient(Gc, gc)[0].is_trivial:
        sem.append("branch: not totally ramified (the g_j do not generate G)")
    if not Gc.is_finite:
        sem.append("group: G must be finite")
    if sem:
        raise SemanticError(sem)
    try:
        bd = building_data(Gc, m, gc, comps)
    except ValueError as exc:
        raise SemanticError([f"char_generators: {exc}"]) from exc
    rep = validate_building_data(bd)
    sem += [f"building data: {f}" for f in rep.failures]
    pic = PicardModel(A.group, tuple(A.canon(x) for x in D), tuple(A.canon(x) for x in L))
    sem += [f"picard: {f}" for f in pic.validate().failures]
    c1_hom = None
    if any(any(H2.canon(_apply(c1, rel))) for rel in A.relations):
        sem.append("c1: does not vanish on the relations of A")
    else:
        images = [H2.canon(_apply(c1, A.lift(u))) for u in range(A.group.ngens)]
        c1_hom = Homomorphism.from_images(A.group, H2.group, images)
    restriction = None
    if restriction_row is not None and n is not None:
        Zn = FgAbGroup.cyclic(n)
        row = [restriction_row]
        if any(_apply(row, rel)[0] % n for rel in H2.relations):
            sem.append(f"restriction: does not vanish mod {n} on the relations of H2")
        else:
            images = [Zn.reduce(_apply(row, H2.lift(u))[: Zn.ngens]) for u in range(H2.group.ngens)]
            restriction = Homomorphism.from_images(H2.group, Zn, images)
    if sem:
        raise SemanticError(sem)
    rel = check_characteristic_relations(bd, pic)
    if not rel.ok:
        raise SemanticError([f"characteristic relations: {f}" for f in rel.failures])
    assert c1_hom is not None
    coh = CohomologyModel(H2.group, c1_hom, restriction)
    name = doc.get("name", default_name)
    return Scenario(str(name), bd, pic, rho, coh, n, rep)
