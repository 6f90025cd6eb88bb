"""File formats (ogposet/1, dcomplex/1, ssset/1) and DOT export.

JSON documents are written canonically: sorted keys, compact separators,
one trailing newline.  Parsing followed by dumping is therefore
byte-stable after one normalisation pass.
"""
from __future__ import annotations

import json

from .dcomplex import Cell, CellId, DirectedComplex, SemiSimplicialSet
from .errors import DcxError
from .flow import FlowGraph
from .molecule import Molecule, globe, oriental, replay
from .ogposet import El, OgPoset, validate


def dumps_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _el_name(el: El) -> str:
    return f"{el[0]}.{el[1]}"


def _parse_el(name: str) -> El:
    d, i = name.split(".")
    return (int(d), int(i))


# -- ogposet/1 -------------------------------------------------------------


def ogposet_to_data(P: OgPoset) -> dict:
    faces: list = [[{} for _ in range(P.counts[0])]] if P.counts else []
    for d in range(1, len(P.counts)):
        faces.append(
            [
                {"-": sorted(mn), "+": sorted(pl)}
                for mn, pl in P.faces[d]
            ]
        )
    return {"format": "ogposet/1", "faces": faces}


def ogposet_from_data(data: dict, *, regular=False) -> OgPoset:
    if data.get("format") != "ogposet/1":
        raise DcxError("expected an ogposet/1 document")
    return validate(data["faces"], regular=regular)


def dumps_ogposet(P: OgPoset) -> str:
    return dumps_json(ogposet_to_data(P))


def loads_ogposet(text: str, *, regular=False) -> OgPoset:
    return ogposet_from_data(json.loads(text), regular=regular)


# -- certificates ------------------------------------------------------------


def cert_to_data(cert) -> list:
    if cert[0] == "point":
        return ["point"]
    if cert[0] == "atom":
        return ["atom", cert_to_data(cert[1]), cert_to_data(cert[2])]
    return ["paste", cert[1], cert_to_data(cert[2]), cert_to_data(cert[3])]


def cert_from_data(data) -> tuple:
    head = data[0]
    if head == "point":
        return ("point",)
    if head == "atom":
        return ("atom", cert_from_data(data[1]), cert_from_data(data[2]))
    if head == "paste":
        return ("paste", int(data[1]), cert_from_data(data[2]), cert_from_data(data[3]))
    raise DcxError(f"unknown certificate head {head!r}")


# -- dcomplex/1 -----------------------------------------------------------------


def _shape_from_data(spec) -> Molecule:
    if isinstance(spec, str):
        kind, _, arg = spec.partition(":")
        if kind == "oriental":
            return oriental(int(arg))
        if kind == "globe":
            return globe(int(arg))
        raise DcxError(f"unknown shape spec {spec!r}")
    return replay(cert_from_data(spec))


def dcomplex_to_data(X: DirectedComplex) -> dict:
    cells = []
    for level in X.cells:
        row = []
        for cell in level:
            row.append(
                {
                    "shape": cert_to_data(cell.shape.cert),
                    "attach": {
                        _el_name(el): _el_name(cid)
                        for el, cid in sorted(cell.attach.items())
                    },
                }
            )
        cells.append(row)
    return {"format": "dcomplex/1", "cells": cells}


def dcomplex_from_data(data: dict) -> DirectedComplex:
    if data.get("format") != "dcomplex/1":
        raise DcxError("expected a dcomplex/1 document")
    cells: list[list[Cell]] = []
    for level in data["cells"]:
        row = []
        for entry in level:
            shape = _shape_from_data(entry["shape"])
            attach = {
                _parse_el(k): _parse_el(v) for k, v in entry["attach"].items()
            }
            row.append(Cell(shape, attach))
        cells.append(row)
    return DirectedComplex(cells).validate()


def dumps_dcomplex(X: DirectedComplex) -> str:
    return dumps_json(dcomplex_to_data(X))


def loads_dcomplex(text: str) -> DirectedComplex:
    return dcomplex_from_data(json.loads(text))


# -- ssset/1 -----------------------------------------------------------------------


def ssset_to_data(S: SemiSimplicialSet) -> dict:
    faces: list = [S.n_vertices]
    for level in S.faces:
        faces.append([list(row) for row in level])
    return {"format": "ssset/1", "faces": faces}


def ssset_from_data(data: dict) -> SemiSimplicialSet:
    if data.get("format") != "ssset/1":
        raise DcxError("expected an ssset/1 document")
    return SemiSimplicialSet(data["faces"]).validate()


def dumps_ssset(S: SemiSimplicialSet) -> str:
    return dumps_json(ssset_to_data(S))


def loads_ssset(text: str) -> SemiSimplicialSet:
    return ssset_from_data(json.loads(text))


# -- DOT export ----------------------------------------------------------------------


def dot_hasse(P: OgPoset) -> str:
    lines = ["digraph hasse {"]
    for el in P.elements():
        lines.append(f'  "{_el_name(el)}";')
    for a, b in P.hasse_edges():
        lines.append(f'  "{_el_name(a)}" -> "{_el_name(b)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_flow(fg: FlowGraph) -> str:
    lines = ["digraph flow {"]
    for v in fg.vertices:
        lines.append(f'  "{_el_name(v)}";')
    for a, b in sorted(fg.edges):
        lines.append(f'  "{_el_name(a)}" -> "{_el_name(b)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_sd(sdp) -> str:
    """Hasse diagram of the initial subdivision poset."""
    lines = ["digraph sd {"]
    for i, sub in enumerate(sdp.elements):
        label = f"sd{i}" + ("*" if i == sdp.bottom else "")
        shape = "x".join(str(c) for c in sub.theta.counts)
        lines.append(f'  "sd{i}" [label="{label} [{shape}]"];')
    for i, j in sdp.poset.covers():
        lines.append(f'  "sd{i}" -> "sd{j}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
