"""Open graphs of Z/X spiders with plain/Hadamard/star edges and an exact scalar.

Edges form a multiset (parallel edges and self-loops are legal); graph-likeness
is a predicate checked elsewhere, not an invariant of this container. Triangle
vertices are degree-2 generators with an explicit input/output orientation and
an `inverse` flag; `graphlike.replace_triangles` eliminates them.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .scalar import ScalarExact, normalize_phase

# vertex kinds
Z = 0
X = 1
TRIANGLE = 2
BOUNDARY = 3

# edge kinds
PLAIN = 0
HADAMARD = 1
STAR = 2

_VKIND_NAMES = {Z: "Z", X: "X", TRIANGLE: "triangle", BOUNDARY: "boundary"}
_VKIND_IDS = {v: k for k, v in _VKIND_NAMES.items()}
_EKIND_NAMES = {PLAIN: "plain", HADAMARD: "hadamard", STAR: "star"}
_EKIND_IDS = {v: k for k, v in _EKIND_NAMES.items()}


class Diagram:
    def __init__(self):
        self._next_id = 0
        self.kind: dict[int, int] = {}
        self.phases: dict[int, Fraction] = {}
        # triangle id -> (in_neighbor, out_neighbor, inverse)
        self.tri: dict[int, tuple[int, int, bool]] = {}
        # adjacency: v -> w -> [n_plain, n_hadamard, n_star]
        self.nbrs: dict[int, dict[int, list[int]]] = {}
        self.boundaries: list[int] = []
        self.scalar: ScalarExact = ScalarExact.one()

    # -- vertices --------------------------------------------------------

    def add_vertex(self, kind: int, phase: Fraction | int = 0) -> int:
        v = self._next_id
        self._next_id += 1
        self.kind[v] = kind
        self.phases[v] = normalize_phase(Fraction(phase))
        self.nbrs[v] = {}
        return v

    def add_boundary(self, v_attach: int | None = None, etype: int = PLAIN) -> int:
        b = self.add_vertex(BOUNDARY)
        self.boundaries.append(b)
        if v_attach is not None:
            self.add_edge(b, v_attach, etype)
        return b

    def set_triangle(self, v: int, in_nbr: int, out_nbr: int, inverse: bool = False) -> None:
        if self.kind[v] != TRIANGLE:
            raise ValueError(f"vertex {v} is not a triangle")
        self.tri[v] = (in_nbr, out_nbr, inverse)

    def remove_vertex(self, v: int) -> None:
        for w in list(self.nbrs[v]):
            if w != v:
                del self.nbrs[w][v]
        del self.nbrs[v]
        del self.kind[v]
        del self.phases[v]
        self.tri.pop(v, None)
        if v in self.boundaries:
            self.boundaries.remove(v)

    def vertices(self) -> list[int]:
        return list(self.kind)

    def phase(self, v: int) -> Fraction:
        return self.phases[v]

    def set_phase(self, v: int, p: Fraction | int) -> None:
        self.phases[v] = normalize_phase(Fraction(p))

    def add_to_phase(self, v: int, p: Fraction | int) -> None:
        self.phases[v] = normalize_phase(self.phases[v] + Fraction(p))

    # -- edges -------------------------------------------------------------

    def add_edge(self, v: int, w: int, etype: int = PLAIN) -> None:
        """Record an edge; no rewriting happens here (multi-edges are kept)."""
        if v not in self.kind or w not in self.kind:
            raise KeyError(f"unknown vertex in edge ({v},{w})")
        self.nbrs[v].setdefault(w, [0, 0, 0])[etype] += 1
        if v != w:
            self.nbrs[w].setdefault(v, [0, 0, 0])[etype] += 1

    def remove_edge(self, v: int, w: int, etype: int) -> None:
        counts = self.nbrs[v][w]
        if counts[etype] <= 0:
            raise KeyError(f"no {_EKIND_NAMES[etype]} edge ({v},{w})")
        counts[etype] -= 1
        if counts == [0, 0, 0]:
            del self.nbrs[v][w]
            if v != w:
                del self.nbrs[w][v]
        elif v != w:
            self.nbrs[w][v][etype] -= 1

    def edges(self) -> list[tuple[int, int, int]]:
        """All edges with multiplicity, canonical (u <= w)."""
        out = []
        for v in sorted(self.nbrs):
            for w, counts in sorted(self.nbrs[v].items()):
                if w < v:
                    continue
                for etype, n in enumerate(counts):
                    out.extend([(v, w, etype)] * n)
        return out

    def edge_counts(self, v: int, w: int) -> list[int]:
        return list(self.nbrs[v].get(w, (0, 0, 0)))

    def degree(self, v: int) -> int:
        total = 0
        for w, counts in self.nbrs[v].items():
            n = sum(counts)
            total += 2 * n if w == v else n
        return total

    def neighbors(self, v: int) -> list[int]:
        return list(self.nbrs[v])

    # -- global ---------------------------------------------------------

    def counts(self) -> tuple[int, int]:
        """(t_count, star_count): odd-pi/4 Z-spiders and star-edge multiplicity."""
        t = sum(
            1
            for v, k in self.kind.items()
            if k == Z and self.phases[v].denominator == 4
        )
        stars = 0
        for v, ws in self.nbrs.items():
            for w, counts in ws.items():
                if w >= v:
                    stars += counts[STAR]
        return t, stars

    def clone(self) -> "Diagram":
        d = Diagram()
        d._next_id = self._next_id
        d.kind = dict(self.kind)
        d.phases = dict(self.phases)
        d.tri = dict(self.tri)
        d.nbrs = {v: {w: list(c) for w, c in ws.items()} for v, ws in self.nbrs.items()}
        d.boundaries = list(self.boundaries)
        d.scalar = self.scalar
        return d

    def mul_scalar(self, s: ScalarExact) -> None:
        self.scalar = self.scalar * s

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        verts = []
        for v in sorted(self.kind):
            p = self.phases[v]
            entry = {
                "id": v,
                "kind": _VKIND_NAMES[self.kind[v]],
                "phase": f"{p.numerator}/{p.denominator}",
            }
            if self.kind[v] == TRIANGLE:
                i, o, inv = self.tri[v]
                entry["in"] = i
                entry["out"] = o
                entry["inverse"] = inv
            verts.append(entry)
        edges = [
            {"src": u, "dst": w, "kind": _EKIND_NAMES[k]} for (u, w, k) in self.edges()
        ]
        a, b, c, d, pow2 = self.scalar.to_tuple()
        doc = {
            "vertices": verts,
            "edges": edges,
            "boundaries": list(self.boundaries),
            "scalar": {"a": a, "b": b, "c": c, "d": d, "pow2": pow2},
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "Diagram":
        doc = json.loads(text)
        d = cls()
        for entry in doc["vertices"]:
            v = int(entry["id"])
            num, den = entry["phase"].split("/")
            d.kind[v] = _VKIND_IDS[entry["kind"]]
            d.phases[v] = normalize_phase(Fraction(int(num), int(den)))
            d.nbrs[v] = {}
            d._next_id = max(d._next_id, v + 1)
            if entry["kind"] == "triangle":
                d.tri[v] = (int(entry["in"]), int(entry["out"]), bool(entry["inverse"]))
        for e in doc["edges"]:
            d.add_edge(int(e["src"]), int(e["dst"]), _EKIND_IDS[e["kind"]])
        d.boundaries = [int(b) for b in doc["boundaries"]]
        s = doc["scalar"]
        d.scalar = ScalarExact.from_tuple((s["a"], s["b"], s["c"], s["d"], s["pow2"]))
        return d

    def structurally_equal(self, other: "Diagram") -> bool:
        return (
            self.kind == other.kind
            and self.phases == other.phases
            and self.tri == other.tri
            and {v: {w: tuple(c) for w, c in ws.items()} for v, ws in self.nbrs.items()}
            == {v: {w: tuple(c) for w, c in ws.items()} for v, ws in other.nbrs.items()}
            and self.boundaries == other.boundaries
            and self.scalar == other.scalar
        )

    def __repr__(self) -> str:
        t, m = self.counts()
        return (
            f"Diagram({len(self.kind)} vertices, {len(self.edges())} edges, "
            f"{len(self.boundaries)} boundaries, t={t}, stars={m})"
        )
