"""Gate-level IR, parsing, ZX synthesis and benchmark circuit generators.

The triangle-mode CCZ uses a two-triangle gadget: a pi-hub star-linked to two
of the wires, a triangle tap from the third wire, and a triangle cap, with
X-corrections on the star-linked wires. The seven-T mode uses parity phase
gadgets (carrying the 4*sqrt2 compensation). Multi-controlled X gates are
synthesized as an AND-ladder of triangle taps closed by an inverse triangle
onto a pi-effect.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .diagram import HADAMARD, PLAIN, STAR, TRIANGLE, X, Z, Diagram
from .scalar import ScalarExact

GATES_1Q = {"h", "s", "sdg", "t", "tdg", "z", "x"}
GATES_2Q = {"cx", "cz"}
GATES_3Q = {"ccz", "cswap"}

PHASE_GATES = {
    "z": Fraction(1),
    "s": Fraction(1, 2),
    "sdg": Fraction(3, 2),
    "t": Fraction(1, 4),
    "tdg": Fraction(7, 4),
}


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    phase: Fraction | None = None  # for rz


@dataclass
class GateIR:
    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def add(self, name: str, *qubits: int, phase: Fraction | None = None) -> "GateIR":
        qubits = tuple(qubits)
        if any(q < 0 or q >= self.num_qubits for q in qubits):
            raise ValueError(f"qubit index out of range in {name} {qubits}")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"repeated qubit in {name} {qubits}")
        self.gates.append(Gate(name, qubits, phase))
        return self


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 0):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


def _parse_fraction(tok: str) -> Fraction:
    if "/" in tok:
        num, den = tok.split("/")
        return Fraction(int(num), int(den))
    return Fraction(tok)


def parse_simple(text: str) -> GateIR:
    """One gate per line: lowercase mnemonic + space-separated qubit indices.
    First non-comment line must be `qubits <n>`. `rz <num/den> <q>` takes the
    phase as a rational multiple of pi; `mcx <k> c1 .. ck t` is a
    multi-controlled X."""
    ir: GateIR | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#")[0].strip()
        if not line:
            continue
        parts = line.split()
        name = parts[0].lower()
        try:
            if name == "qubits":
                ir = GateIR(int(parts[1]))
                continue
            if ir is None:
                raise ParseError("missing `qubits <n>` header", lineno)
            if name == "rz":
                ir.add("rz", int(parts[2]), phase=_parse_fraction(parts[1]))
            elif name == "mcx":
                k = int(parts[1])
                qs = [int(p) for p in parts[2:]]
                if len(qs) != k + 1:
                    raise ParseError(f"mcx {k} needs {k + 1} qubits", lineno)
                ir.add("mcx", *qs)
            elif name in GATES_1Q | GATES_2Q | GATES_3Q:
                ir.add(name, *[int(p) for p in parts[1:]])
            else:
                raise ParseError(f"unsupported gate '{name}'", lineno)
        except ParseError:
            raise
        except (ValueError, IndexError) as exc:
            raise ParseError(str(exc), lineno) from exc
    if ir is None:
        raise ParseError("empty circuit (no `qubits` line)", 1)
    return ir


def parse_qasm(text: str) -> GateIR:
    """A small OpenQASM-2 subset: one qreg, gates h/x/z/s/sdg/t/tdg/cx/cz/
    ccz/cswap. ccx is intentionally unsupported (use h+ccz or the simple
    format's mcx)."""
    ir: GateIR | None = None
    reg = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//")[0].strip()
        if not line:
            continue
        for col, stmt in _split_statements(line):
            parts = stmt.replace(",", " ").split()
            head = parts[0].lower()
            if head in ("openqasm", "include", "creg", "barrier"):
                continue
            if head == "qreg":
                name, size = _parse_qreg(parts[1], lineno, col)
                if reg is not None:
                    raise ParseError("multiple qregs unsupported", lineno, col)
                reg = name
                ir = GateIR(size)
                continue
            if ir is None:
                raise ParseError("gate before qreg", lineno, col)
            if head == "ccx":
                raise ParseError(
                    "ccx unsupported: use h+ccz or the simple format's mcx", lineno, col
                )
            if head not in GATES_1Q | GATES_2Q | GATES_3Q:
                raise ParseError(f"unsupported gate '{head}'", lineno, col)
            qubits = []
            for tok in parts[1:]:
                qubits.append(_parse_qubit(tok, reg, ir.num_qubits, lineno, col))
            try:
                ir.add(head, *qubits)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, col) from exc
    if ir is None:
        raise ParseError("no qreg declared", 1)
    return ir


def _split_statements(line: str):
    col = 0
    for stmt in line.split(";"):
        s = stmt.strip()
        if s:
            yield line.index(stmt, col), s
        col += len(stmt) + 1


def _parse_qreg(tok: str, lineno: int, col: int):
    if "[" not in tok or not tok.endswith("]"):
        raise ParseError(f"bad qreg '{tok}'", lineno, col)
    name, size = tok[:-1].split("[")
    return name, int(size)


def _parse_qubit(tok: str, reg: str, n: int, lineno: int, col: int) -> int:
    tok = tok.strip()
    if not tok.startswith(f"{reg}[") or not tok.endswith("]"):
        raise ParseError(f"bad qubit '{tok}'", lineno, col)
    idx = int(tok[len(reg) + 1 : -1])
    if idx >= n:
        raise ParseError(f"qubit index {idx} out of range", lineno, col)
    return idx


def parse(text: str, fmt: str = "simple") -> GateIR:
    if fmt == "simple":
        return parse_simple(text)
    if fmt in ("qasm", "qasm2-subset"):
        return parse_qasm(text)
    raise ValueError(f"unknown format {fmt}")


def write_simple(ir: GateIR) -> str:
    lines = [f"qubits {ir.num_qubits}"]
    for g in ir.gates:
        if g.name == "rz":
            lines.append(f"rz {g.phase.numerator}/{g.phase.denominator} {g.qubits[0]}")
        elif g.name == "mcx":
            lines.append(f"mcx {len(g.qubits) - 1} " + " ".join(map(str, g.qubits)))
        else:
            lines.append(g.name + " " + " ".join(map(str, g.qubits)))
    return "\n".join(lines) + "\n"


def write_qasm(ir: GateIR) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{ir.num_qubits}];"]
    for g in ir.gates:
        if g.name in ("rz", "mcx"):
            raise ValueError(f"{g.name} not expressible in the qasm2 subset")
        lines.append(g.name + " " + ", ".join(f"q[{q}]" for q in g.qubits) + ";")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- synthesis

class _Builder:
    def __init__(self, n: int):
        self.d = Diagram()
        self.ends: list[int] = []
        self.inputs: list[int] = []
        for _ in range(n):
            v = self.d.add_vertex(Z, 0)
            b = self.d.add_boundary(v)
            self.inputs.append(b)
            self.ends.append(v)

    def fresh_after(self, q: int, etype: int = PLAIN) -> int:
        v = self.d.add_vertex(Z, 0)
        self.d.add_edge(self.ends[q], v, etype)
        self.ends[q] = v
        return v

    def phase(self, q: int, p: Fraction) -> None:
        self.d.add_to_phase(self.ends[q], p)

    def h(self, q: int) -> None:
        self.fresh_after(q, HADAMARD)

    def x(self, q: int) -> None:
        xv = self.d.add_vertex(X, Fraction(1))
        self.d.add_edge(self.ends[q], xv, PLAIN)
        self.ends[q] = xv
        self.fresh_after(q, PLAIN)

    def cx(self, c: int, t: int) -> None:
        zc = self.fresh_after(c)
        xt = self.d.add_vertex(X, 0)
        self.d.add_edge(self.ends[t], xt, PLAIN)
        self.ends[t] = xt
        self.d.add_edge(zc, xt, PLAIN)
        self.fresh_after(t, PLAIN)
        self.d.mul_scalar(ScalarExact.sqrt2_power(1))

    def cz(self, a: int, b: int) -> None:
        za = self.fresh_after(a)
        zb = self.fresh_after(b)
        self.d.add_edge(za, zb, HADAMARD)
        self.d.mul_scalar(ScalarExact.sqrt2_power(1))

    def gadget(self, qubits: list[int], tip_phase: Fraction) -> None:
        """Parity phase gadget exp(i pi tip_phase (xor of qubits)), including
        its normalization (the hub/tip pair is worth 2/sqrt2^(|S|+1))."""
        hub = self.d.add_vertex(Z, 0)
        tip = self.d.add_vertex(Z, tip_phase)
        self.d.add_edge(hub, tip, HADAMARD)
        for q in qubits:
            self.d.add_edge(self.ends[q], hub, HADAMARD)
        self.d.mul_scalar(ScalarExact.sqrt2_power(len(qubits) + 1 - 2))

    def ccz_seven_t(self, a: int, b: int, c: int) -> None:
        for q in (a, b, c):
            self.phase(q, Fraction(1, 4))
        for pair in ((a, b), (a, c), (b, c)):
            self.gadget(list(pair), Fraction(7, 4))
        self.gadget([a, b, c], Fraction(1, 4))

    def ccz_triangles(self, a: int, b: int, c: int) -> None:
        self.x(a)
        self.x(b)
        hub = self.d.add_vertex(Z, Fraction(1))
        self.d.add_edge(self.fresh_after(a), hub, STAR)
        self.d.add_edge(self.fresh_after(b), hub, STAR)
        ctap = self.fresh_after(c)
        tri = self.d.add_vertex(TRIANGLE)
        self.d.add_edge(ctap, tri, PLAIN)
        self.d.add_edge(tri, hub, PLAIN)
        self.d.set_triangle(tri, ctap, hub)
        leaf = self.d.add_vertex(Z, 0)
        cap = self.d.add_vertex(TRIANGLE)
        self.d.add_edge(hub, cap, PLAIN)
        self.d.add_edge(cap, leaf, PLAIN)
        self.d.set_triangle(cap, hub, leaf)
        self.x(a)
        self.x(b)

    def mcz_ladder(self, qubits: list[int]) -> None:
        """Phase (-1)^(x1 ... xk) via triangle taps into an AND ladder closed
        by an inverse triangle onto a pi effect."""
        taps = [self.fresh_after(q) for q in qubits]
        merge = self.d.add_vertex(Z, 0)
        for tap in taps[:2]:
            tri = self.d.add_vertex(TRIANGLE)
            self.d.add_edge(tap, tri, PLAIN)
            self.d.add_edge(tri, merge, PLAIN)
            self.d.set_triangle(tri, tap, merge)
        for tap in taps[2:]:
            y = self.d.add_vertex(Z, 0)
            inv = self.d.add_vertex(TRIANGLE)
            self.d.add_edge(merge, inv, PLAIN)
            self.d.add_edge(inv, y, PLAIN)
            self.d.set_triangle(inv, merge, y, inverse=True)
            merge = self.d.add_vertex(Z, 0)
            for src in (y, tap):
                tri = self.d.add_vertex(TRIANGLE)
                self.d.add_edge(src, tri, PLAIN)
                self.d.add_edge(tri, merge, PLAIN)
                self.d.set_triangle(tri, src, merge)
        cap = self.d.add_vertex(Z, Fraction(1))
        inv = self.d.add_vertex(TRIANGLE)
        self.d.add_edge(merge, inv, PLAIN)
        self.d.add_edge(inv, cap, PLAIN)
        self.d.set_triangle(inv, merge, cap, inverse=True)

    def finish(self) -> Diagram:
        outs = []
        for q, end in enumerate(self.ends):
            outs.append(self.d.add_boundary(end))
        self.d.boundaries = self.inputs + outs
        return self.d


def to_zx(ir: GateIR, ccz_mode: str = "triangles") -> Diagram:
    """Open diagram with 2n boundaries (inputs then outputs)."""
    if ccz_mode not in ("triangles", "seven_t"):
        raise ValueError(f"unknown ccz_mode {ccz_mode}")
    b = _Builder(ir.num_qubits)
    for g in ir.gates:
        if g.name in PHASE_GATES:
            b.phase(g.qubits[0], PHASE_GATES[g.name])
        elif g.name == "rz":
            b.phase(g.qubits[0], g.phase)
        elif g.name == "h":
            b.h(g.qubits[0])
        elif g.name == "x":
            b.x(g.qubits[0])
        elif g.name == "cx":
            b.cx(*g.qubits)
        elif g.name == "cz":
            b.cz(*g.qubits)
        elif g.name == "ccz":
            if ccz_mode == "triangles":
                b.ccz_triangles(*g.qubits)
            else:
                b.ccz_seven_t(*g.qubits)
        elif g.name == "cswap":
            c, x1, x2 = g.qubits
            b.cx(x2, x1)
            b.h(x2)
            if ccz_mode == "triangles":
                b.ccz_triangles(c, x1, x2)
            else:
                b.ccz_seven_t(c, x1, x2)
            b.h(x2)
            b.cx(x2, x1)
        elif g.name == "mcx":
            *controls, target = g.qubits
            b.h(target)
            b.mcz_ladder(list(controls) + [target])
            b.h(target)
        else:
            raise ValueError(f"unknown gate {g.name}")
    return b.finish()


def mcx_ladder(controls: int) -> Diagram:
    """Open diagram of the (controls)-controlled X on controls+1 wires."""
    ir = GateIR(controls + 1)
    ir.add("mcx", *range(controls + 1))
    return to_zx(ir)


def plug_plus_amplitude(d: Diagram) -> Diagram:
    """Cap every boundary with a normalized |+> state: <+...+|C|+...+>."""
    d = d.clone()
    for b in list(d.boundaries):
        d.kind[b] = Z
        d.phases[b] = Fraction(0)
        d.mul_scalar(ScalarExact.sqrt2_power(-1))
    d.boundaries = []
    return d


# ----------------------------------------------------------------- generators

def gen_random(
    n: int,
    gate_count_range: tuple[int, int],
    p_t: float,
    p_ccz: float,
    seed: int,
) -> GateIR:
    if p_t + p_ccz > 1:
        raise ValueError("probabilities sum above 1")
    if p_ccz > 0 and n < 3:
        raise ValueError("ccz needs at least 3 qubits")
    rng = random.Random(seed)
    count = rng.randint(*gate_count_range)
    ir = GateIR(n)
    for _ in range(count):
        r = rng.random()
        if r < p_t:
            ir.add("t", rng.randrange(n))
        elif r < p_t + p_ccz:
            ir.add("ccz", *rng.sample(range(n), 3))
        else:
            g = rng.choice(("cx", "cz", "h", "s"))
            if g in ("h", "s"):
                ir.add(g, rng.randrange(n))
            else:
                ir.add(g, *rng.sample(range(n), 2))
    return ir


def gen_hidden_shift(n: int, num_cswap_pairs: int, seed: int) -> tuple[GateIR, str]:
    """Maiorana-McFarland-style hidden shift circuit with Fredkin pairs.

    f(x, y) = x.y + g(y) with random quadratic g; the dual oracle applies g on
    the x half. The shift enters by X-conjugating the first oracle. Controlled
    swap pairs are placed on uniformly random wire triples of the x half at
    random positions inside both oracles; for zero pairs <s|C|0> = 1 exactly.
    """
    if n % 2:
        raise ValueError("hidden shift needs an even number of qubits")
    m = n // 2
    if num_cswap_pairs > 0 and m < 3:
        raise ValueError("cswap pairs need at least 6 qubits")
    rng = random.Random(seed)
    shift = [rng.randrange(2) for _ in range(n)]
    g_lin = [j for j in range(m) if rng.random() < 0.5]
    g_quad = [(j, k) for j in range(m) for k in range(j + 1, m) if rng.random() < 0.5]

    def oracle(ir: GateIR, g_on_x: bool) -> list[Gate]:
        gates = []
        for i in range(m):
            gates.append(Gate("cz", (i, m + i)))
        off = 0 if g_on_x else m
        for j in g_lin:
            gates.append(Gate("z", (off + j,)))
        for j, k in g_quad:
            gates.append(Gate("cz", (off + j, off + k)))
        return gates

    ir = GateIR(n)
    o1 = oracle(ir, g_on_x=False)  # f: x.y + g(y)
    o2 = oracle(ir, g_on_x=True)   # dual: x.y + g(x)
    for _ in range(num_cswap_pairs):
        wires = tuple(rng.sample(range(m), 3))
        # a pair is one Fredkin in each oracle, on mirrored wire triples
        for gates in (o1, o2):
            pos = rng.randrange(len(gates) + 1)
            gates.insert(pos, Gate("cswap", wires))

    for q in range(n):
        ir.add("h", q)
    for q in range(n):
        if shift[q]:
            ir.add("x", q)
    ir.gates.extend(o1)
    for q in range(n):
        if shift[q]:
            ir.add("x", q)
    for q in range(n):
        ir.add("h", q)
    ir.gates.extend(o2)
    for q in range(n):
        ir.add("h", q)
    return ir, "".join(str(b) for b in shift)


# ----------------------------------------------------------------- oracle sim

_GATE_MATS = {
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "z": np.diag([1, -1]).astype(complex),
    "s": np.diag([1, 1j]).astype(complex),
    "sdg": np.diag([1, -1j]).astype(complex),
    "t": np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
    "tdg": np.diag([1, np.exp(-1j * np.pi / 4)]).astype(complex),
}


def statevector(ir: GateIR, initial: np.ndarray | None = None) -> np.ndarray:
    """Dense statevector simulation; qubit 0 is the most significant axis."""
    n = ir.num_qubits
    psi = np.zeros((2,) * n, dtype=complex) if initial is None else initial.reshape((2,) * n).astype(complex)
    if initial is None:
        psi[(0,) * n] = 1.0
    for g in ir.gates:
        psi = _apply_gate(psi, g)
    return psi.reshape(-1)


def _apply_gate(psi: np.ndarray, g: Gate) -> np.ndarray:
    n = psi.ndim
    if g.name in _GATE_MATS:
        mat = _GATE_MATS[g.name]
        return np.moveaxis(
            np.tensordot(mat, psi, axes=([1], [g.qubits[0]])), 0, g.qubits[0]
        )
    if g.name == "rz":
        mat = np.diag([1, np.exp(1j * np.pi * float(g.phase))])
        return np.moveaxis(np.tensordot(mat, psi, axes=([1], [g.qubits[0]])), 0, g.qubits[0])
    if g.name == "cx":
        c, t = g.qubits
        out = psi.copy()
        sl1 = [slice(None)] * n
        sl1[c] = 1
        out[tuple(sl1)] = np.flip(psi[tuple(sl1)], axis=t - (t > c))
        return out
    if g.name in ("cz", "ccz"):
        out = psi.copy()
        sl = [slice(None)] * n
        for q in g.qubits:
            sl[q] = 1
        out[tuple(sl)] *= -1
        return out
    if g.name == "cswap":
        c, a, b = g.qubits
        out = psi.copy()
        sl = [slice(None)] * n
        sl[c] = 1
        sub = psi[tuple(sl)]
        a2 = a - (a > c)
        b2 = b - (b > c)
        out[tuple(sl)] = np.swapaxes(sub, a2, b2)
        return out
    if g.name == "mcx":
        *controls, t = g.qubits
        out = psi.copy()
        sl = [slice(None)] * n
        for q in controls:
            sl[q] = 1
        t2 = t - sum(1 for q in controls if q < t)
        out[tuple(sl)] = np.flip(psi[tuple(sl)], axis=t2)
        return out
    raise ValueError(f"unknown gate {g.name}")


def unitary(ir: GateIR) -> np.ndarray:
    n = ir.num_qubits
    cols = []
    for b in range(2**n):
        init = np.zeros(2**n, dtype=complex)
        init[b] = 1.0
        cols.append(statevector(ir, initial=init))
    return np.stack(cols, axis=1)


def plus_amplitude_reference(ir: GateIR) -> complex:
    """<+..+| C |+..+> by dense simulation."""
    n = ir.num_qubits
    plus = np.full(2**n, 2 ** (-n / 2), dtype=complex)
    out = statevector(ir, initial=plus)
    return complex(plus.conj() @ out)
