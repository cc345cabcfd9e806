"""Conversion of Clifford+T+Triangle diagrams into graph-like form.

Graph-like: every non-boundary vertex is a Z-spider, internal edges are
Hadamard or star edges, the graph is simple (no parallel edges, no
self-loops), and boundary wires attach through plain edges.

In this edge-atomic model a "Hadamard next to a star on one wire" arises when
a star edge would need conjugation (star incident to an X-spider or crossing a
boundary); buffer Z(0)-spiders are inserted exactly there.
"""

from __future__ import annotations

from fractions import Fraction

from .diagram import BOUNDARY, HADAMARD, PLAIN, STAR, TRIANGLE, X, Z, Diagram
from .scalar import ScalarExact

PI = Fraction(1)


def replace_triangles(d: Diagram) -> Diagram:
    """Rewrite every triangle vertex into a star edge with Clifford dressing.

    A triangle (in=a, out=b) is S.X from a to b, i.e. the chain
    a -H- p(pi) -H- q(0) -star- b.  The inverse triangle is Z.S.X.Z, adding a
    pi Z-spider on each attachment wire.
    """
    d = d.clone()
    for v in [u for u, k in d.kind.items() if k == TRIANGLE]:
        a, b, inverse = d.tri[v]
        d.remove_vertex(v)
        left, right = a, b
        if inverse:
            z1 = d.add_vertex(Z, PI)
            z2 = d.add_vertex(Z, PI)
            d.add_edge(a, z1, PLAIN)
            d.add_edge(z2, b, PLAIN)
            left, right = z1, z2
        p = d.add_vertex(Z, PI)
        q = d.add_vertex(Z, 0)
        d.add_edge(left, p, HADAMARD)
        d.add_edge(p, q, HADAMARD)
        d.add_edge(q, right, STAR)
    return d


def insert_buffer_spiders(d: Diagram) -> Diagram:
    """Buffer star edges so they only touch Z-spiders.

    star-to-X gets a Hadamard-linked Z(0) buffer (the colour change will
    conjugate that leg); star-to-boundary gets a plain-linked buffer.
    """
    d = d.clone()
    while True:
        site = None
        for u, w, kind in d.edges():
            if kind != STAR or u == w:
                continue  # star self-loops are handled downstream
            if d.kind[u] in (X, BOUNDARY):
                site = (u, w)
                break
            if d.kind[w] in (X, BOUNDARY):
                site = (w, u)
                break
        if site is None:
            return d
        end, other = site
        buf = d.add_vertex(Z, 0)
        d.remove_edge(end, other, STAR)
        # plain buffer link; for an X endpoint the colour change conjugates it
        # into the Hadamard that buffers H-next-to-star.
        d.add_edge(end, buf, PLAIN)
        d.add_edge(buf, other, STAR)


def color_change(d: Diagram) -> Diagram:
    """Turn every X-spider into a Z-spider by conjugating its legs with H."""
    d = d.clone()
    for v in [u for u, k in d.kind.items() if k == X]:
        d.kind[v] = Z
        loops = d.edge_counts(v, v)
        others = [(w, k, n) for w in d.neighbors(v) if w != v
                  for k, n in enumerate(d.edge_counts(v, w)) if n]
        # self-loops: plain and H loops are fixed points of double H-conjugation
        for _ in range(loops[STAR]):
            d.remove_edge(v, v, STAR)
            b1 = d.add_vertex(Z, 0)
            b2 = d.add_vertex(Z, 0)
            d.add_edge(v, b1, HADAMARD)
            d.add_edge(b1, b2, STAR)
            d.add_edge(b2, v, HADAMARD)
        for w, kind, n in others:
            for _ in range(n):
                if kind == PLAIN:
                    d.remove_edge(v, w, PLAIN)
                    d.add_edge(v, w, HADAMARD)
                elif kind == HADAMARD:
                    d.remove_edge(v, w, HADAMARD)
                    d.add_edge(v, w, PLAIN)
                else:
                    d.remove_edge(v, w, STAR)
                    buf = d.add_vertex(Z, 0)
                    d.add_edge(v, buf, HADAMARD)
                    d.add_edge(buf, w, STAR)
    return d


def _shatter_star_loop(d: Diagram, v: int) -> None:
    """Spider with a star self-loop pins to |0...0>: delete it and cap the
    former neighbours with the |0> pushed through each leg."""
    edges = [(w, k, n) for w in d.neighbors(v) if w != v
             for k, n in enumerate(d.edge_counts(v, w)) if n]
    d.remove_vertex(v)
    for w, kind, n in edges:
        for _ in range(n):
            if kind == PLAIN:
                leaf = d.add_vertex(Z, 0)
                d.add_edge(leaf, w, HADAMARD)
                d.mul_scalar(ScalarExact.sqrt2_power(-1))
            elif kind == HADAMARD:
                leaf = d.add_vertex(Z, 0)
                d.add_edge(leaf, w, PLAIN)
                d.mul_scalar(ScalarExact.sqrt2_power(-1))
            else:  # STAR: S|0> = |0>+|1>, a free leg deletion
                pass


def _cleanup_pass(d: Diagram) -> bool:
    """One pass of self-loop removal, plain-edge fusion and Hopf resolution.
    Returns True if anything changed."""
    changed = False

    for v in list(d.kind):
        if v not in d.kind:
            continue
        loops = d.edge_counts(v, v)
        if loops == [0, 0, 0]:
            continue
        changed = True
        for _ in range(loops[PLAIN]):
            d.remove_edge(v, v, PLAIN)
        for _ in range(loops[HADAMARD]):
            d.remove_edge(v, v, HADAMARD)
            d.add_to_phase(v, PI)
            d.mul_scalar(ScalarExact.sqrt2_power(-1))
        if d.edge_counts(v, v)[STAR]:
            _shatter_star_loop(d, v)

    # fuse plain edges between Z-spiders
    for v in list(d.kind):
        if d.kind.get(v) != Z:
            continue
        while True:
            target = None
            for w in d.neighbors(v):
                if w != v and d.kind[w] == Z and d.edge_counts(v, w)[PLAIN]:
                    target = w
                    break
            if target is None:
                break
            changed = True
            w = target
            d.remove_edge(v, w, PLAIN)
            d.add_to_phase(v, d.phases[w])
            for x in list(d.nbrs[w]):
                counts = d.edge_counts(w, x)
                for kind, n in enumerate(counts):
                    for _ in range(n):
                        d.remove_edge(w, x, kind)
                        d.add_edge(v, v if x == w else x, kind)
            d.remove_vertex(w)

    # Hopf resolution of parallel edges between distinct vertices
    for v in list(d.kind):
        if v not in d.kind:
            continue
        for w in list(d.neighbors(v)):
            if w <= v or w not in d.kind:
                continue
            if d.kind[v] != Z or d.kind[w] != Z:
                continue
            counts = d.edge_counts(v, w)
            nh, ns = counts[HADAMARD], counts[STAR]
            if counts[PLAIN] or nh + ns <= 1:
                continue
            changed = True
            # parallel star pair: S . S = S
            while ns >= 2:
                d.remove_edge(v, w, STAR)
                ns -= 1
            # star + H: S . H = S / sqrt(2)
            if ns and nh:
                for _ in range(nh):
                    d.remove_edge(v, w, HADAMARD)
                    d.mul_scalar(ScalarExact.sqrt2_power(-1))
                nh = 0
            # H pairs annihilate with 1/2
            while nh >= 2:
                d.remove_edge(v, w, HADAMARD)
                d.remove_edge(v, w, HADAMARD)
                d.mul_scalar(ScalarExact.sqrt2_power(-2))
                nh -= 2
    return changed


def _buffer_boundaries(d: Diagram) -> bool:
    changed = False
    for b in list(d.boundaries):
        for w in list(d.neighbors(b)):
            counts = d.edge_counts(b, w)
            for kind in (HADAMARD, STAR):
                for _ in range(counts[kind]):
                    buf = d.add_vertex(Z, 0)
                    d.remove_edge(b, w, kind)
                    d.add_edge(b, buf, PLAIN)
                    d.add_edge(buf, w, kind)
                    changed = True
    return changed


def to_graph_like(d: Diagram) -> Diagram:
    d = replace_triangles(d)
    d = insert_buffer_spiders(d)
    d = color_change(d)
    while True:
        while _cleanup_pass(d):
            pass
        if not _buffer_boundaries(d):
            break
    return d


def is_graph_like(d: Diagram) -> bool:
    for v, k in d.kind.items():
        if k in (X, TRIANGLE):
            return False
        if k == BOUNDARY and d.degree(v) != 1:
            return False
    for v in d.kind:
        if d.edge_counts(v, v) != [0, 0, 0]:
            return False
        for w in d.neighbors(v):
            if w == v:
                continue
            counts = d.edge_counts(v, w)
            if sum(counts) > 1:
                return False
            boundary_edge = BOUNDARY in (d.kind[v], d.kind[w])
            if boundary_edge and not counts[PLAIN]:
                return False
            if not boundary_edge and counts[PLAIN]:
                return False
    return True
