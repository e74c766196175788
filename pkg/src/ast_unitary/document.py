"""Serialised form of a built scheme: JSON document and flat CSV table."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .closed_form import ClosedFormReport
from .scheme import IntersectionTensor, Scheme

TOOL = "ast-unitary"
CSV_COLUMNS = ["l", "i", "j", "k", "p"]

Cell = tuple[int, int, int, int, int]


@dataclass
class RelationEntry:
    index: int
    b: str
    c: str
    representative: list[str]


@dataclass
class SchemeDocument:
    q: int
    p: int
    e: int
    modulus: list[int]
    a: str
    relations: list[RelationEntry]
    valencies: list[int]
    tensor: list[Cell]
    provenance: dict[str, str] = field(default_factory=dict)
    tool: str = TOOL
    version: str = __version__

    @classmethod
    def from_scheme(cls, scheme: Scheme, report: ClosedFormReport) -> SchemeDocument:
        ctx = scheme.ctx
        fmt = ctx.fmt
        rels = []
        for l, triple in enumerate(scheme.rel_triples):
            rep = ["[" + ":".join(fmt(c) for c in L) + "]" for L in triple]
            if l >= 5:
                rels.append(RelationEntry(l, fmt(scheme.b(l)), fmt(scheme.c(l)), rep))
            else:
                rels.append(RelationEntry(l, "", "", rep))
        cells = report.tensor.nonzero_cells()
        prov = {_key(c[:4]): report.provenance[c[:4]] for c in cells}
        return cls(
            q=scheme.q,
            p=ctx.p,
            e=ctx.e,
            modulus=list(ctx.modulus),
            a=fmt(scheme.a),
            relations=rels,
            valencies=[int(n) for n in scheme.valencies],
            tensor=cells,
            provenance=prov,
        )

    def to_json(self) -> str:
        d = asdict(self)
        d["tensor"] = [list(c) for c in self.tensor]
        return json.dumps(d, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> SchemeDocument:
        d = json.loads(text)
        d["relations"] = [RelationEntry(**r) for r in d["relations"]]
        d["tensor"] = [tuple(c) for c in d["tensor"]]
        return cls(**d)

    def to_csv(self) -> str:
        return tensor_csv(self.q, self.modulus, self.tensor)

    def to_tensor(self) -> IntersectionTensor:
        return cells_to_tensor(self.q, self.tensor)


def _key(cell) -> str:
    return ",".join(str(t) for t in cell)


def tensor_csv(q: int, modulus: list[int], cells: list[Cell]) -> str:
    buf = io.StringIO()
    buf.write(f"# {TOOL} q={q} modulus={','.join(str(c) for c in modulus)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(cells)
    return buf.getvalue()


def parse_csv(text: str) -> tuple[int, list[int], list[Cell]]:
    """Returns (q, modulus, cells) from a table written by :func:`tensor_csv`."""
    lines = text.splitlines()
    header = [s for s in lines if s.startswith("#")]
    if not header:
        raise ValueError("missing header comment")
    meta = dict(tok.split("=", 1) for tok in header[0].lstrip("# ").split()[1:])
    q = int(meta["q"])
    modulus = [int(c) for c in meta["modulus"].split(",")]
    rows = csv.reader(s for s in lines if not s.startswith("#"))
    if next(rows) != CSV_COLUMNS:
        raise ValueError("unexpected column header")
    cells = [tuple(int(t) for t in row) for row in rows if row]
    return q, modulus, cells


def cells_to_tensor(q: int, cells: list[Cell]) -> IntersectionTensor:
    t = IntersectionTensor.zeros(q)
    if cells:
        arr = np.array(cells, dtype=np.int64)
        t.entries[arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]] = arr[:, 4]
    return t
