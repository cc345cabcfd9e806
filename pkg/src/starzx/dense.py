"""Brute-force dense interpretation of small diagrams.

This is the ground-truth oracle: every rewrite, decomposition and end-to-end
contraction is validated against it. Not a performance path.

Generator semantics (value x in {0,1} on each spider leg):
  Z-spider(alpha), k legs: entry 1 at (0..0), e^{i alpha} at (1..1), else 0.
  X-spider(alpha): Hadamard-conjugated Z-spider: 2^{-k/2} (1 + e^{i a} (-1)^{|x|}).
  Hadamard edge: [[1,1],[1,-1]]/sqrt(2).   Star edge: [[1,1],[1,0]].
  Triangle (in -> out): [[1,1],[0,1]]; inverse: [[1,-1],[0,1]].
"""

from __future__ import annotations

import math

import numpy as np

from .diagram import BOUNDARY, HADAMARD, PLAIN, STAR, TRIANGLE, X, Z, Diagram

HAD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
STAR_MAT = np.array([[1, 1], [1, 0]], dtype=complex)
TRI_MAT = np.array([[1, 1], [0, 1]], dtype=complex)
TRI_INV_MAT = np.array([[1, -1], [0, 1]], dtype=complex)

DEFAULT_VERTEX_LIMIT = 24


class SizeLimitExceeded(Exception):
    pass


def _spider_tensor(kind: int, phase, degree: int) -> np.ndarray:
    ph = np.exp(1j * math.pi * float(phase))
    t = np.zeros((2,) * degree, dtype=complex) if degree else np.zeros((), dtype=complex)
    if kind == Z:
        if degree == 0:
            return np.array(1 + ph, dtype=complex)
        t[(0,) * degree] = 1
        t[(1,) * degree] = ph
        return t
    # X spider: conjugate every leg of the Z tensor by H
    if degree == 0:
        return np.array(1 + ph, dtype=complex)
    idx = np.indices((2,) * degree).sum(axis=0)
    return (1 + ph * (-1.0) ** idx) / math.sqrt(2) ** degree


def interpret(d: Diagram, limit: int = DEFAULT_VERTEX_LIMIT) -> np.ndarray:
    """Dense tensor of the diagram, axes ordered by the boundary list.

    A scalar diagram yields a 0-d array holding one complex number.
    """
    if len(d.kind) > limit:
        raise SizeLimitExceeded(f"{len(d.kind)} vertices > limit {limit}")

    # assign a unique axis id to every edge endpoint
    next_axis = 0
    vertex_axes: dict[int, list[int]] = {v: [] for v in d.kind}
    # per-vertex, per-neighbor list of axis ids in edge-instance order, so
    # triangles can find which axis faces their in/out neighbour
    axes_by_nbr: dict[int, dict[int, list[int]]] = {v: {} for v in d.kind}
    nodes: list[tuple[np.ndarray, list[int]]] = []

    for u, w, kind in d.edges():
        if u == w:
            a1, a2 = next_axis, next_axis + 1
            next_axis += 2
            vertex_axes[u] += [a1, a2]
            axes_by_nbr[u].setdefault(u, []).extend([a1, a2])
            if kind == PLAIN:
                nodes.append((np.eye(2, dtype=complex), [a1, a2]))
            elif kind == HADAMARD:
                nodes.append((HAD, [a1, a2]))
            else:
                nodes.append((STAR_MAT, [a1, a2]))
        else:
            au, aw = next_axis, next_axis + 1
            next_axis += 2
            vertex_axes[u].append(au)
            vertex_axes[w].append(aw)
            axes_by_nbr[u].setdefault(w, []).append(au)
            axes_by_nbr[w].setdefault(u, []).append(aw)
            if kind == PLAIN:
                nodes.append((np.eye(2, dtype=complex), [au, aw]))
            elif kind == HADAMARD:
                nodes.append((HAD, [au, aw]))
            else:
                nodes.append((STAR_MAT, [au, aw]))

    open_axes: list[int] = []
    for v in d.kind:
        deg = len(vertex_axes[v])
        k = d.kind[v]
        if k == BOUNDARY:
            if deg != 1:
                raise ValueError(f"boundary vertex {v} has degree {deg}")
            open_axes.append(vertex_axes[v][0])
            continue
        if k == TRIANGLE:
            if deg != 2:
                raise ValueError(f"triangle vertex {v} has degree {deg}")
            i_nbr, o_nbr, inverse = d.tri[v]
            if i_nbr == o_nbr:
                raise ValueError(f"triangle {v} has ambiguous orientation")
            ax_in = axes_by_nbr[v][i_nbr][0]
            ax_out = axes_by_nbr[v][o_nbr][0]
            mat = TRI_INV_MAT if inverse else TRI_MAT
            # mat[out, in]
            nodes.append((mat, [ax_out, ax_in]))
            continue
        nodes.append((_spider_tensor(k, d.phases[v], deg), vertex_axes[v]))

    result, raxes = _contract_network(nodes)
    # order open axes by the boundary list
    order = []
    for b in d.boundaries:
        order.append(raxes.index(vertex_axes[b][0]))
    leftover = [i for i in range(len(raxes)) if i not in order]
    if leftover:
        raise AssertionError("dangling axes after contraction")
    if order:
        result = np.transpose(result, order)
    return result * d.scalar.to_complex()


def _contract_network(nodes):
    """Greedy pairwise contraction over shared axes."""
    nodes = [(np.asarray(t, dtype=complex), list(ax)) for t, ax in nodes]
    if not nodes:
        return np.array(1, dtype=complex), []
    while len(nodes) > 1:
        # find the cheapest pair sharing axes; fall back to outer product
        best = None
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                shared = set(nodes[i][1]) & set(nodes[j][1])
                if not shared:
                    continue
                cost = nodes[i][0].size * nodes[j][0].size // (4 ** len(shared))
                if best is None or cost < best[0]:
                    best = (cost, i, j, shared)
        if best is None:
            t2, ax2 = nodes.pop()
            t1, ax1 = nodes.pop()
            nodes.append((np.multiply.outer(t1, t2), ax1 + ax2))
            continue
        _, i, j, shared = best
        t2, ax2 = nodes.pop(j)
        t1, ax1 = nodes.pop(i)
        idx1 = [ax1.index(a) for a in shared]
        idx2 = [ax2.index(a) for a in shared]
        out = np.tensordot(t1, t2, axes=(idx1, idx2))
        rem1 = [a for a in ax1 if a not in shared]
        rem2 = [a for a in ax2 if a not in shared]
        nodes.append((out, rem1 + rem2))
    return nodes[0]


def as_matrix(tensor: np.ndarray, n_in: int) -> np.ndarray:
    """Reshape an interpret() tensor (axes = inputs then outputs) to a matrix
    mapping inputs to outputs: M[out_bits, in_bits]."""
    nd = tensor.ndim
    perm = list(range(n_in, nd)) + list(range(n_in))
    return np.transpose(tensor, perm).reshape(2 ** (nd - n_in), 2**n_in)


def tensors_equal(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return bool(np.max(np.abs(a - b)) <= tol) if a.size else True


def scalar_value(d: Diagram, limit: int = DEFAULT_VERTEX_LIMIT) -> complex:
    """Dense value of a scalar diagram (no boundaries)."""
    if d.boundaries:
        raise ValueError("not a scalar diagram")
    return complex(interpret(d, limit=limit))
