"""Diagram-level simplification API on graph-like diagrams.

Thin wrappers that run the kernel rules on a flat SimpGraph copy and convert
back. The contraction engine skips the conversion and drives SimpGraph
directly; these entry points exist for library use and for testing each rule
in isolation.

The two star-reducing patterns beyond Eq.-8/9 style rules that only occur
rarely are validated in the test suite but intentionally not wired into
full_simp (searching for them during contraction costs more than it saves).
"""

from __future__ import annotations

from .diagram import BOUNDARY, HADAMARD, PLAIN, STAR, Z, Diagram
from ._backend import SimpGraph
from .graphlike import is_graph_like

_EDGE_TO_KERNEL = {PLAIN: 0, HADAMARD: 1, STAR: 2}
_EDGE_FROM_KERNEL = {0: PLAIN, 1: HADAMARD, 2: STAR}


def to_simp_graph(d: Diagram) -> tuple[SimpGraph, dict[int, int]]:
    """Flatten a graph-like Diagram; returns (graph, diagram-id -> kernel-id)."""
    if not is_graph_like(d):
        raise ValueError("diagram is not graph-like")
    g = SimpGraph()
    idmap: dict[int, int] = {}
    for v in sorted(d.kind):
        idmap[v] = g.add_vertex(d.phases[v], boundary=d.kind[v] == BOUNDARY)
    for u, w, kind in d.edges():
        g.add_edge(idmap[u], idmap[w], _EDGE_TO_KERNEL[kind])
    g.scalar = d.scalar
    return g, idmap


def from_simp_graph(g: SimpGraph, boundary_order: list[int] | None = None) -> Diagram:
    d = Diagram()
    idmap: dict[int, int] = {}
    for v in sorted(g.phase):
        kind = BOUNDARY if v in g.boundary else Z
        idmap[v] = d.add_vertex(kind, g.phase[v])
    for v in sorted(g.adj):
        for w in sorted(g.adj[v]):
            if w > v:
                d.add_edge(idmap[v], idmap[w], _EDGE_FROM_KERNEL[g.adj[v][w]])
    if boundary_order is not None:
        d.boundaries = [idmap[b] for b in boundary_order]
    else:
        d.boundaries = [idmap[v] for v in sorted(g.boundary)]
    d.scalar = g.scalar
    return d


def _run_rule(d: Diagram, rule_name: str) -> tuple[Diagram, bool]:
    g, idmap = to_simp_graph(d)
    order = [idmap[b] for b in d.boundaries]
    n = getattr(g, rule_name)()
    return from_simp_graph(g, order), n > 0


def local_complement_simp(d: Diagram) -> tuple[Diagram, bool]:
    return _run_rule(d, "lcomp_simp")


def pivot_simp(d: Diagram) -> tuple[Diagram, bool]:
    return _run_rule(d, "pivot_simp")


def copy_simp(d: Diagram) -> tuple[Diagram, bool]:
    return _run_rule(d, "copy_simp")


def star_state_simp(d: Diagram) -> tuple[Diagram, bool]:
    return _run_rule(d, "star_state_simp")


def star_pi_star_simp(d: Diagram) -> tuple[Diagram, bool]:
    return _run_rule(d, "star_pi_star_simp")


def id_simp(d: Diagram) -> tuple[Diagram, bool]:
    return _run_rule(d, "id_simp")


def reduce_tcount(d: Diagram) -> Diagram:
    g, idmap = to_simp_graph(d)
    order = [idmap[b] for b in d.boundaries]
    while g.pivot_gadget_simp() + g.gadget_fuse_simp():
        pass
    return from_simp_graph(g, order)


def full_simp(d: Diagram) -> Diagram:
    g, idmap = to_simp_graph(d)
    order = [idmap[b] for b in d.boundaries if idmap[b] in g.boundary]
    g.full_simp()
    kept = [b for b in order if b in g.boundary]
    return from_simp_graph(g, kept)
