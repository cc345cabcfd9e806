"""Pure-Python simplification kernel.

Operates on SimpGraph, a flat adjacency representation of a *graph-like*
diagram (Z-spiders only, simple graph, internal edges Hadamard/star, boundary
wires plain). The compiled twin in `_kernel.pyx` implements the same API and
the same deterministic scan order (ascending vertex ids); `starzx._backend`
picks one at import time.

Rule set and exact scalar bookkeeping:
  copy:        deg-1 0/pi state on a Hadamard edge copies through (cascading)
  star_state:  deg-1 pi state on a star edge -> Hadamard edge, x 1/sqrt2
  star_pi_star: internal deg-2 pi spider between two stars -> one X-dressed star
  id:          deg-2 phase-0 all-H spider removed, endpoints fused
  lcomp:       +-pi/2 all-H spider removed by local complementation
  pivot:       Hadamard-connected 0/pi pair removed, biclique toggled
  pivot_gadget/gadget fusion: T-count reduction via phase gadgets
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import ScalarExact

H = 1
STAR = 2
PLAIN = 0

PI = Fraction(1)
HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)

_MAX_ROUNDS = 100000


class KernelError(Exception):
    pass


class EndgameTooBig(Exception):
    pass


class SimpGraph:
    """Scalar-or-open graph-like diagram in flat form."""

    __slots__ = ("phase", "adj", "boundary", "scalar", "_next")

    def __init__(self):
        self.phase: dict[int, Fraction] = {}
        self.adj: dict[int, dict[int, int]] = {}
        self.boundary: set[int] = set()
        self.scalar: ScalarExact = ScalarExact.one()
        self._next = 0

    # -- construction / io -------------------------------------------------

    def add_vertex(self, phase=0, boundary: bool = False) -> int:
        v = self._next
        self._next += 1
        self.phase[v] = Fraction(phase) % 2
        self.adj[v] = {}
        if boundary:
            self.boundary.add(v)
        return v

    def add_edge(self, u: int, w: int, etype: int) -> None:
        if u == w or w in self.adj[u]:
            raise KernelError(f"edge ({u},{w}) breaks simplicity")
        self.adj[u][w] = etype
        self.adj[w][u] = etype

    def remove_edge(self, u: int, w: int) -> None:
        del self.adj[u][w]
        del self.adj[w][u]

    def remove_vertex(self, v: int) -> None:
        for w in list(self.adj[v]):
            del self.adj[w][v]
        del self.adj[v]
        del self.phase[v]
        self.boundary.discard(v)

    def edge_type(self, u: int, w: int) -> int | None:
        return self.adj[u].get(w)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def clone(self) -> "SimpGraph":
        g = SimpGraph()
        g.phase = dict(self.phase)
        g.adj = {v: dict(ws) for v, ws in self.adj.items()}
        g.boundary = set(self.boundary)
        g.scalar = self.scalar
        g._next = self._next
        return g

    def mul_scalar(self, s: ScalarExact) -> None:
        self.scalar = self.scalar * s

    def num_vertices(self) -> int:
        return len(self.phase)

    def counts(self) -> tuple[int, int]:
        t = sum(1 for v, p in self.phase.items()
                if v not in self.boundary and p.denominator == 4)
        stars = sum(1 for v, ws in self.adj.items() for w, e in ws.items()
                    if w > v and e == STAR)
        return t, stars

    def star_degree(self, v: int) -> int:
        return sum(1 for e in self.adj[v].values() if e == STAR)

    def set_zero(self) -> None:
        self.scalar = ScalarExact.zero()
        for v in list(self.adj):
            self.remove_vertex(v)

    # -- scalar helpers ------------------------------------------------------

    def _mul_phase_scalar(self, p: Fraction) -> bool:
        """Multiply by e^{i pi p}; False if p is off the pi/4 grid."""
        q = (p % 2) * 4
        if q.denominator != 1:
            return False
        self.mul_scalar(ScalarExact.omega_power(int(q)))
        return True

    def _fold_vertex_value(self, p: Fraction) -> bool:
        """Multiply by (1 + e^{i pi p}), the value of an isolated spider."""
        q = (p % 2) * 4
        if q.denominator != 1:
            return False
        self.mul_scalar(ScalarExact.one() + ScalarExact.omega_power(int(q)))
        return True

    # -- edge toggling with Hopf resolution ----------------------------------

    def toggle_h(self, u: int, w: int) -> None:
        """Add a Hadamard edge modulo parallel-edge resolution.

        no edge -> H edge, x sqrt2 (the edge's intrinsic 1/sqrt2 is repaid so
        the caller's identity factor (-1)^{uw} has modulus one);
        H edge -> removed, x 1/sqrt2;  star edge -> unchanged, no scalar
        (the star's zero entry absorbs the toggle's sign).
        """
        e = self.adj[u].get(w)
        if e is None:
            self.adj[u][w] = H
            self.adj[w][u] = H
            self.mul_scalar(ScalarExact.sqrt2_power(1))
        elif e == H:
            self.remove_edge(u, w)
            self.mul_scalar(ScalarExact.sqrt2_power(-1))
        # star: leave as is

    def smart_add_edge(self, u: int, w: int, etype: int) -> None:
        """Add an edge resolving a parallel conflict by the Hopf rules."""
        e = self.adj[u].get(w)
        if e is None:
            self.adj[u][w] = etype
            self.adj[w][u] = etype
            return
        if etype == H and e == H:
            self.remove_edge(u, w)
            self.mul_scalar(ScalarExact.sqrt2_power(-2))
        elif etype == STAR and e == STAR:
            pass  # S . S = S
        else:  # one star, one H: S . H = S / sqrt2
            self.adj[u][w] = STAR
            self.adj[w][u] = STAR
            self.mul_scalar(ScalarExact.sqrt2_power(-1))

    def _shatter(self, v: int) -> None:
        """Spider pinned to |0...0>: delete it, H-legs cost 1/sqrt2 each."""
        for w, e in list(self.adj[v].items()):
            if e == H:
                self.mul_scalar(ScalarExact.sqrt2_power(-1))
            elif e == PLAIN:
                raise KernelError("cannot pin a boundary wire to |0>")
        self.remove_vertex(v)

    def _is_internal(self, v: int) -> bool:
        if v in self.boundary:
            return False
        return all(w not in self.boundary for w in self.adj[v])

    def _has_gadget_tip_neighbor(self, v: int) -> bool:
        for w in self.adj[v]:
            if len(self.adj[w]) == 1 and self.phase[w].denominator > 2:
                return True
        return False

    # -- rules -------------------------------------------------------------

    def fold_simp(self) -> int:
        """Fold isolated vertices and isolated deg-1--deg-1 pairs into the scalar."""
        n = 0
        for v in sorted(self.adj):
            if v not in self.adj or v in self.boundary:
                continue
            if self.degree(v) == 0:
                if self._fold_vertex_value(self.phase[v]):
                    self.remove_vertex(v)
                    n += 1
                    if self.scalar.is_zero:
                        self.set_zero()
                        return n + 1
                continue
            if self.degree(v) != 1:
                continue
            (w, e), = self.adj[v].items()
            if w < v or self.degree(w) != 1 or w in self.boundary:
                continue
            pv, pw = (self.phase[v] % 2) * 4, (self.phase[w] % 2) * 4
            if pv.denominator != 1 or pw.denominator != 1:
                continue
            a = ScalarExact.omega_power(int(pv))
            b = ScalarExact.omega_power(int(pw))
            one = ScalarExact.one()
            if e == H:
                val = (one + a + b - a * b) * ScalarExact.sqrt2_power(-1)
            elif e == STAR:
                val = one + a + b
            else:  # plain: only boundary wires are plain, excluded above
                val = one + a * b
            self.mul_scalar(val)
            self.remove_vertex(v)
            self.remove_vertex(w)
            n += 1
            if self.scalar.is_zero:
                self.set_zero()
                return n + 1
        return n

    def copy_simp(self) -> int:
        """Lemma-3 state copy, applied to cascade exhaustion."""
        n = 0
        stack = sorted(self.adj)
        while stack:
            v = stack.pop()
            if v not in self.adj or v in self.boundary:
                continue
            if self.degree(v) != 1 or self.phase[v].denominator != 1:
                continue
            (w, e), = self.adj[v].items()
            if e != H or w in self.boundary or self.degree(w) == 1:
                continue
            if not self._is_internal(w):
                continue
            pin_one = self.phase[v] == PI
            if pin_one:
                if not self._mul_phase_scalar(self.phase[w]):
                    continue
            self.mul_scalar(ScalarExact.sqrt2_power(1))
            nbrs = [(x, ex) for x, ex in self.adj[w].items() if x != v]
            self.remove_vertex(v)
            self.remove_vertex(w)
            for x, ex in nbrs:
                if ex == H:
                    self.mul_scalar(ScalarExact.sqrt2_power(-1))
                    if pin_one:
                        self.phase[x] = (self.phase[x] + PI) % 2
                    stack.append(x)
                else:  # star partner
                    if pin_one:
                        leaf = self.add_vertex(0)
                        self.adj[leaf][x] = H
                        self.adj[x][leaf] = H
                        self.mul_scalar(ScalarExact.sqrt2_power(-1))
                        stack.append(leaf)
                    # pin to zero: S|0> leg deletes freely
                    stack.append(x)
            n += 1
        return n

    def star_state_simp(self) -> int:
        n = 0
        for v in sorted(self.adj):
            if v not in self.adj or v in self.boundary:
                continue
            if self.degree(v) != 1 or self.phase[v] != PI:
                continue
            (w, e), = self.adj[v].items()
            if e != STAR or w in self.boundary:
                continue
            self.adj[v][w] = H
            self.adj[w][v] = H
            self.mul_scalar(ScalarExact.sqrt2_power(-1))
            n += 1
        return n

    def star_pi_star_simp(self) -> int:
        n = 0
        for v in sorted(self.adj):
            if v not in self.adj or v in self.boundary:
                continue
            if self.degree(v) != 2 or self.phase[v] != PI:
                continue
            (u, eu), (w, ew) = sorted(self.adj[v].items())
            if eu != STAR or ew != STAR:
                continue
            if not self._is_internal(v):
                continue
            self.remove_vertex(v)
            p1 = self.add_vertex(PI)
            q1 = self.add_vertex(0)
            q2 = self.add_vertex(0)
            p2 = self.add_vertex(PI)
            self.smart_add_edge(u, p1, H)
            self.add_edge(p1, q1, H)
            self.add_edge(q1, q2, STAR)
            self.add_edge(q2, p2, H)
            self.smart_add_edge(p2, w, H)
            n += 1
        return n

    def _fuse(self, v: int, w: int) -> None:
        """Fuse w into v (phases add, edges move with Hopf resolution).
        A direct v-w edge becomes a self-loop: H-loops cost 1/sqrt2 and a pi
        phase, a star loop pins the fused spider to |0...0>."""
        direct = self.adj[v].get(w)
        self.phase[v] = (self.phase[v] + self.phase[w]) % 2
        nbrs = [(x, e) for x, e in sorted(self.adj[w].items()) if x != v]
        self.remove_vertex(w)
        for x, e in nbrs:
            self.smart_add_edge(v, x, e)
        if direct == H:
            self.phase[v] = (self.phase[v] + PI) % 2
            self.mul_scalar(ScalarExact.sqrt2_power(-1))
        elif direct == STAR:
            self._shatter(v)

    def id_simp(self) -> int:
        n = 0
        for v in sorted(self.adj):
            if v not in self.adj or v in self.boundary:
                continue
            if self.degree(v) != 2 or self.phase[v] != 0:
                continue
            (u, eu), (w, ew) = sorted(self.adj[v].items())
            if eu != H or ew != H:
                continue
            if u in self.boundary or w in self.boundary:
                continue
            self.remove_vertex(v)
            # H.H composes to a plain wire: fuse the endpoints
            self._fuse(u, w)
            n += 1
        return n

    def lcomp_simp(self) -> int:
        n = 0
        for v in sorted(self.adj):
            if v not in self.adj or v in self.boundary:
                continue
            if self.phase[v].denominator != 2:
                continue
            if not self._is_internal(v):
                continue
            if any(e != H for e in self.adj[v].values()):
                continue
            if self._has_gadget_tip_neighbor(v) and self.degree(v) > 1:
                continue
            sign = 1 if self.phase[v] == HALF else -1
            nbrs = sorted(self.adj[v])
            k = len(nbrs)
            self.remove_vertex(v)
            self.mul_scalar(ScalarExact.omega_power(sign % 8))
            self.mul_scalar(ScalarExact.sqrt2_power(1 - k))
            delta = -sign * HALF
            for x in nbrs:
                self.phase[x] = (self.phase[x] + delta) % 2
            for i in range(k):
                for j in range(i + 1, k):
                    self.toggle_h(nbrs[i], nbrs[j])
            n += 1
        return n

    def pivot_simp(self) -> int:
        n = 0
        for v in sorted(self.adj):
            if v not in self.adj or v in self.boundary:
                continue
            if self.phase[v].denominator != 1:
                continue
            if not self._is_internal(v) or self._has_gadget_tip_neighbor(v):
                continue
            if any(e != H for e in self.adj[v].values()):
                continue
            partner = None
            for w in sorted(self.adj[v]):
                if self.phase[w].denominator != 1:
                    continue
                if not self._is_internal(w) or self._has_gadget_tip_neighbor(w):
                    continue
                if any(e != H for e in self.adj[w].values()):
                    continue
                partner = w
                break
            if partner is None:
                continue
            self._pivot(v, partner)
            n += 1
        return n

    def _pivot(self, u: int, w: int) -> None:
        a_pi = self.phase[u] == PI
        b_pi = self.phase[w] == PI
        nu = set(self.adj[u]) - {w}
        nw = set(self.adj[w]) - {u}
        common = nu & nw
        only_u = sorted(nu - common)
        only_w = sorted(nw - common)
        common = sorted(common)
        self.remove_vertex(u)
        self.remove_vertex(w)
        ka, kb, kc = len(only_u), len(only_w), len(common)
        self.mul_scalar(ScalarExact.sqrt2_power(1 - ka - kb - 2 * kc))
        if a_pi and b_pi:
            self.mul_scalar(ScalarExact.from_int(-1))
        for x in common:
            self.phase[x] = (self.phase[x] + PI) % 2
        if a_pi:
            for x in only_w + common:
                self.phase[x] = (self.phase[x] + PI) % 2
        if b_pi:
            for x in only_u + common:
                self.phase[x] = (self.phase[x] + PI) % 2
        for x in only_u:
            for y in only_w:
                self.toggle_h(x, y)
        for x in only_u:
            for y in common:
                self.toggle_h(x, y)
        for x in only_w:
            for y in common:
                self.toggle_h(x, y)

    def pivot_gadget_simp(self) -> int:
        """Gadgetize an interior non-Clifford spider next to an interior Pauli
        spider, then pivot the pair (the T-count reduction driver)."""
        n = 0
        for v in sorted(self.adj):
            if v not in self.adj or v in self.boundary:
                continue
            if self.phase[v].denominator != 1:
                continue
            if not self._is_internal(v) or self._has_gadget_tip_neighbor(v):
                continue
            if any(e != H for e in self.adj[v].values()):
                continue
            target = None
            for w in sorted(self.adj[v]):
                if self.phase[w].denominator <= 2:
                    continue
                if not self._is_internal(w) or self.degree(w) == 1:
                    continue
                if self._has_gadget_tip_neighbor(w):
                    continue
                if any(e != H for e in self.adj[w].values()):
                    continue
                target = w
                break
            if target is None:
                continue
            w = target
            tip = self.add_vertex(self.phase[w])
            hub = self.add_vertex(0)
            self.phase[w] = Fraction(0)
            self.add_edge(hub, tip, H)
            self.add_edge(hub, w, H)
            self._pivot(v, w)
            n += 1
        return n

    def _gadgets(self):
        """Yield (hub, tip, support frozenset) for every phase gadget."""
        for tip in sorted(self.adj):
            if len(self.adj[tip]) != 1 or tip in self.boundary:
                continue
            (hub, e), = self.adj[tip].items()
            if e != H or hub in self.boundary:
                continue
            if self.phase[hub].denominator != 1 or self.degree(hub) < 2:
                continue
            if any(ex != H for ex in self.adj[hub].values()):
                continue
            support = frozenset(x for x in self.adj[hub] if x != tip)
            yield hub, tip, support

    def gadget_fuse_simp(self) -> int:
        n = 0
        while True:
            seen: dict[frozenset, tuple[int, int]] = {}
            fused = False
            for hub, tip, support in self._gadgets():
                # normalize pi hubs: flip tip phase, pay e^{i phase}
                if self.phase[hub] == PI:
                    if not self._mul_phase_scalar(self.phase[tip]):
                        continue
                    self.phase[tip] = (-self.phase[tip]) % 2
                    self.phase[hub] = Fraction(0)
                if support in seen:
                    hub0, tip0 = seen[support]
                    self.phase[tip0] = (self.phase[tip0] + self.phase[tip]) % 2
                    self.remove_vertex(tip)
                    self.remove_vertex(hub)
                    self.mul_scalar(ScalarExact.sqrt2_power(1 - len(support)))
                    n += 1
                    fused = True
                    break
                seen[support] = (hub, tip)
            if not fused:
                return n

    # -- driver ---------------------------------------------------------------

    def full_simp(self) -> int:
        """Round-robin all rules to a global fixpoint. Returns rewrite count."""
        total = 0
        for _ in range(_MAX_ROUNDS):
            if self.scalar.is_zero:
                return total
            n = 0
            n += self.fold_simp()
            n += self.copy_simp()
            n += self.star_state_simp()
            n += self.star_pi_star_simp()
            n += self.id_simp()
            n += self.lcomp_simp()
            n += self.pivot_simp()
            n += self.pivot_gadget_simp()
            n += self.gadget_fuse_simp()
            if n == 0:
                return total
            total += n
        raise KernelError("full_simp failed to reach a fixpoint")

    # -- exact endgame ---------------------------------------------------------

    def exact_eval(self, max_rank: int = 14) -> ScalarExact:
        """Value of a small scalar diagram by exact variable elimination.

        Raises EndgameTooBig if an intermediate factor would exceed max_rank
        variables, and KernelError if a phase is off the pi/4 grid or the
        diagram has boundaries.
        """
        if self.boundary:
            raise KernelError("exact_eval needs a scalar diagram")
        omega = [ScalarExact.omega_power(k) for k in range(8)]
        one = ScalarExact.one()
        rhalf = ScalarExact.sqrt2_power(-1)
        zero = ScalarExact.zero()
        factors: list[tuple[tuple[int, ...], list[ScalarExact]]] = []
        for v in sorted(self.adj):
            q = (self.phase[v] % 2) * 4
            if q.denominator != 1:
                raise KernelError("off-grid phase in exact_eval")
            factors.append(((v,), [one, omega[int(q) % 8]]))
            for w, e in self.adj[v].items():
                if w < v:
                    continue
                if e == H:
                    vals = [rhalf, rhalf, rhalf, ScalarExact(-1, 0, 0, 0, -1)]
                elif e == STAR:
                    vals = [one, one, one, zero]
                else:
                    raise KernelError("plain edge in exact_eval")
                factors.append(((v, w), vals))

        adj = {v: set(ws) for v, ws in self.adj.items()}
        order = []
        live = set(adj)
        while live:
            v = min(live, key=lambda x: (len(adj[x] & live), x))
            order.append(v)
            live.discard(v)

        result = self.scalar
        for v in order:
            bucket = [f for f in factors if v in f[0]]
            factors = [f for f in factors if v not in f[0]]
            out_vars = tuple(sorted({x for vars_, _ in bucket for x in vars_} - {v}))
            if len(out_vars) + 1 > max_rank:
                raise EndgameTooBig(len(out_vars) + 1)
            new_vals = []
            for bits in range(1 << len(out_vars)):
                assign = {x: (bits >> i) & 1 for i, x in enumerate(out_vars)}
                total = zero
                for vbit in (0, 1):
                    assign[v] = vbit
                    term = one
                    for vars_, vals in bucket:
                        idx = 0
                        for i, x in enumerate(vars_):
                            idx |= assign[x] << i
                        term = term * vals[idx]
                        if term.is_zero:
                            break
                    total = total + term
                new_vals.append(total)
            if out_vars:
                factors.append((out_vars, new_vals))
            else:
                result = result * new_vals[0]
                if result.is_zero:
                    return ScalarExact.zero()
        for vars_, vals in factors:
            raise KernelError("disconnected factor left behind")
        return result


KERNEL_NAME = "python"
