"""Gradient-variance diagrams for parametrised ansaetze, plus the Monte-Carlo
parameter-shift oracle they are validated against.

For uniform parameters each non-differentiated parameter contributes the
integration tensor [a+d = b+c] over its four phase-copies, which factors as

    [a xor b xor c xor d = 0] * [(a xor b) <= (b xor c)]

i.e. a parity constraint times a single triangle between two parity wires.
The differentiated parameter contributes [a != b] delta_{ac} delta_{bd}
(wire fusions plus an odd-parity cap). The result is a parameter-free
Clifford+Triangle scalar diagram with one triangle per remaining parameter.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .circuits import PHASE_GATES, Gate, GateIR, statevector
from .diagram import HADAMARD, PLAIN, TRIANGLE, X, Z, Diagram
from .scalar import ScalarExact


@dataclass(frozen=True)
class ParamGate:
    name: str  # "rz" | "rx"
    qubit: int
    param: int


@dataclass
class AnsatzIR:
    num_qubits: int
    items: list = field(default_factory=list)  # Gate | ParamGate
    num_params: int = 0

    def gate(self, name: str, *qubits: int, phase: Fraction | None = None) -> "AnsatzIR":
        if phase is not None and Fraction(phase).denominator not in (1, 2):
            raise ValueError("fixed phases must be multiples of pi/2")
        self.items.append(Gate(name, tuple(qubits), phase))
        return self

    def param_gate(self, name: str, qubit: int) -> "AnsatzIR":
        if name not in ("rz", "rx"):
            raise ValueError("parametrised gates are rz/rx")
        self.items.append(ParamGate(name, qubit, self.num_params))
        self.num_params += 1
        return self

    def validate(self) -> None:
        seen = set()
        for it in self.items:
            if isinstance(it, ParamGate):
                if it.param in seen:
                    raise ValueError(f"parameter {it.param} occurs twice")
                seen.add(it.param)
        if seen != set(range(self.num_params)):
            raise ValueError("parameter ids must be 0..p-1, each exactly once")

    def bind(self, thetas) -> GateIR:
        """Concrete GateIR with parameter k set to thetas[k] (radians/pi units
        as Fractions are not required here; rz takes a float multiple of pi)."""
        ir = GateIR(self.num_qubits)
        for it in self.items:
            if isinstance(it, ParamGate):
                th = thetas[it.param]
                if it.name == "rz":
                    ir.gates.append(Gate("rz", (it.qubit,), th))
                else:
                    ir.add("h", it.qubit)
                    ir.gates.append(Gate("rz", (it.qubit,), th))
                    ir.add("h", it.qubit)
            else:
                ir.gates.append(it)
        return ir


@dataclass(frozen=True)
class PauliObservable:
    paulis: str  # characters I/Z only

    def __post_init__(self):
        if set(self.paulis) - {"I", "Z"}:
            raise ValueError("stored observable must be over {I, Z}")


def observable_with_basis_change(s: str) -> tuple[PauliObservable, list[Gate]]:
    """General I/X/Y/Z string -> (I/Z observable, gates appended after U)."""
    out = []
    gates: list[Gate] = []
    for q, ch in enumerate(s):
        if ch in ("I", "Z"):
            out.append(ch)
        elif ch == "X":
            gates.append(Gate("h", (q,)))
            out.append("Z")
        elif ch == "Y":
            gates.append(Gate("sdg", (q,)))
            gates.append(Gate("h", (q,)))
            out.append("Z")
        else:
            raise ValueError(f"bad Pauli {ch}")
    return PauliObservable("".join(out)), gates


# -------------------------------------------------------------- ZX builders

class _WireBuilder:
    """U sandwich builder on n wires with |0> caps on both sides."""

    def __init__(self, d: Diagram, n: int, conjugate: bool):
        self.d = d
        self.conj = conjugate
        self.ends: list[int] = []
        for _ in range(n):
            cap = d.add_vertex(X, 0)  # |0> ~ X-spider state / sqrt2
            v = d.add_vertex(Z, 0)
            d.add_edge(cap, v, PLAIN)
            d.mul_scalar(ScalarExact.sqrt2_power(-1))
            self.ends.append(v)

    def _p(self, p: Fraction) -> Fraction:
        return -p if self.conj else Fraction(p)

    def fresh(self, q: int, etype: int = PLAIN) -> int:
        v = self.d.add_vertex(Z, 0)
        self.d.add_edge(self.ends[q], v, etype)
        self.ends[q] = v
        return v

    def apply(self, items, param_slots: dict[int, int], dagger: bool):
        seq = list(reversed(items)) if dagger else list(items)
        for it in seq:
            if isinstance(it, ParamGate):
                sign = -1 if dagger else 1
                if it.name == "rx":
                    self.fresh(it.qubit, HADAMARD)
                spider = self.fresh(it.qubit, PLAIN)
                param_slots[it.param] = spider
                # phase stays 0; the integration gadget replaces it
                if it.name == "rx":
                    self.fresh(it.qubit, HADAMARD)
                continue
            g = it
            if g.name in ("z", "s", "sdg", "t", "tdg"):
                p = PHASE_GATES[g.name]
                if dagger:
                    p = -p
                self.d.add_to_phase(self.ends[g.qubits[0]], self._p(p))
            elif g.name == "rz":
                p = -g.phase if dagger else g.phase
                self.d.add_to_phase(self.ends[g.qubits[0]], self._p(p))
            elif g.name == "h":
                self.fresh(g.qubits[0], HADAMARD)
            elif g.name == "x":
                xv = self.d.add_vertex(X, Fraction(1))
                self.d.add_edge(self.ends[g.qubits[0]], xv, PLAIN)
                self.ends[g.qubits[0]] = xv
                self.fresh(g.qubits[0], PLAIN)
            elif g.name == "cx":
                zc = self.fresh(g.qubits[0])
                xt = self.d.add_vertex(X, 0)
                self.d.add_edge(self.ends[g.qubits[1]], xt, PLAIN)
                self.ends[g.qubits[1]] = xt
                self.d.add_edge(zc, xt, PLAIN)
                self.fresh(g.qubits[1], PLAIN)
                self.d.mul_scalar(ScalarExact.sqrt2_power(1))
            elif g.name == "cz":
                za = self.fresh(g.qubits[0])
                zb = self.fresh(g.qubits[1])
                self.d.add_edge(za, zb, HADAMARD)
                self.d.mul_scalar(ScalarExact.sqrt2_power(1))
            else:
                raise ValueError(f"gate {g.name} unsupported in ansatz")

    def observe(self, h: PauliObservable):
        for q, ch in enumerate(h.paulis):
            if ch == "Z":
                self.d.add_to_phase(self.ends[q], self._p(Fraction(1)))

    def close(self):
        for q in range(len(self.ends)):
            cap = self.d.add_vertex(X, 0)
            self.d.add_edge(self.ends[q], cap, PLAIN)
            self.d.mul_scalar(ScalarExact.sqrt2_power(-1))


def _build_sandwich(d: Diagram, a: AnsatzIR, h: PauliObservable, conjugate: bool):
    wb = _WireBuilder(d, a.num_qubits, conjugate)
    slots: dict[int, int] = {}
    u_slots: dict[int, int] = {}
    wb.apply(a.items, u_slots, dagger=False)
    wb.observe(h)
    ud_slots: dict[int, int] = {}
    wb.apply(a.items, ud_slots, dagger=True)
    wb.close()
    return u_slots, ud_slots


def build_expectation_diagram(a: AnsatzIR, h: PauliObservable):
    """<0| U(theta)^dag H U(theta) |0> with parametrised spiders left at
    phase 0; returns (diagram, per-parameter spider pairs (u_spider, udag_spider))."""
    a.validate()
    if len(h.paulis) != a.num_qubits:
        raise ValueError("observable length mismatch")
    d = Diagram()
    u, ud = _build_sandwich(d, a, h, conjugate=False)
    return d, {k: (u[k], ud[k]) for k in u}


def build_variance_diagram(a: AnsatzIR, h: PauliObservable, j: int) -> Diagram:
    """Scalar Clifford+Triangle diagram equal to Var(d<H>/d theta_j) under
    uniform parameters."""
    a.validate()
    if not (0 <= j < a.num_params):
        raise ValueError(f"invalid parameter {j}")
    if len(h.paulis) != a.num_qubits:
        raise ValueError("observable length mismatch")
    d = Diagram()
    u1, ud1 = _build_sandwich(d, a, h, conjugate=False)
    u2, ud2 = _build_sandwich(d, a, h, conjugate=True)

    for k in range(a.num_params):
        va, vb, vc, vd = u1[k], ud1[k], u2[k], ud2[k]
        if k == j:
            # [a != b] delta_ac delta_bd
            d.add_edge(va, vc, PLAIN)
            d.add_edge(vb, vd, PLAIN)
            leaf = d.add_vertex(Z, Fraction(1))
            d.add_edge(leaf, va, HADAMARD)
            d.add_edge(leaf, vb, HADAMARD)
        else:
            # [a^b^c^d = 0] * [(a^b) <= (b^c)]
            par = d.add_vertex(X, 0)
            for v in (va, vb, vc, vd):
                d.add_edge(par, v, PLAIN)
            d.mul_scalar(ScalarExact.sqrt2_power(2))  # undo 2^{1-4/2}
            p1 = d.add_vertex(X, 0)
            w1 = d.add_vertex(Z, 0)
            d.add_edge(p1, va, PLAIN)
            d.add_edge(p1, vb, PLAIN)
            d.add_edge(p1, w1, PLAIN)
            p2 = d.add_vertex(X, 0)
            w2 = d.add_vertex(Z, 0)
            d.add_edge(p2, vb, PLAIN)
            d.add_edge(p2, vc, PLAIN)
            d.add_edge(p2, w2, PLAIN)
            d.mul_scalar(ScalarExact.sqrt2_power(2))  # two 3-leg parity spiders
            tri = d.add_vertex(TRIANGLE)
            d.add_edge(w2, tri, PLAIN)
            d.add_edge(tri, w1, PLAIN)
            d.set_triangle(tri, w2, w1)
    return d


# -------------------------------------------------------------- ansatz library

def sim_circuit_1(n: int, layers: int = 1) -> AnsatzIR:
    """Hardware-efficient layered ansatz: RX rotations with a CZ ring."""
    a = AnsatzIR(n)
    for _ in range(layers):
        for q in range(n):
            a.param_gate("rx", q)
        for q in range(n):
            a.gate("cz", q, (q + 1) % n)
        for q in range(n):
            a.param_gate("rz", q)
    return a


def sim_circuit_2(n: int, layers: int = 1) -> AnsatzIR:
    """RX+RZ per qubit with a CX chain."""
    a = AnsatzIR(n)
    for _ in range(layers):
        for q in range(n):
            a.param_gate("rx", q)
        for q in range(n):
            a.param_gate("rz", q)
        for q in range(n - 1):
            a.gate("cx", q, q + 1)
    return a


def sim_circuit_3(n: int, layers: int = 1) -> AnsatzIR:
    """RX layer, staggered CZ pairs, RX layer."""
    a = AnsatzIR(n)
    for _ in range(layers):
        for q in range(n):
            a.param_gate("rx", q)
        for q in range(0, n - 1, 2):
            a.gate("cz", q, q + 1)
        for q in range(1, n - 1, 2):
            a.gate("cz", q, q + 1)
        for q in range(n):
            a.param_gate("rz", q)
    return a


def sim_circuit_4(n: int, layers: int = 1) -> AnsatzIR:
    """RZ+RX with all-to-neighbour CX entangling, Hadamard frame."""
    a = AnsatzIR(n)
    for q in range(n):
        a.gate("h", q)
    for _ in range(layers):
        for q in range(n):
            a.param_gate("rz", q)
        for q in range(n - 1):
            a.gate("cx", q + 1, q)
        for q in range(n):
            a.param_gate("rx", q)
    return a


def tree_ansatz(n: int, layers: int = 1) -> AnsatzIR:
    """Discriminative tree tensor network: pairwise blocks halving towards the
    last qubit; local observables on it do not flatten with n."""
    if n & (n - 1):
        raise ValueError("tree ansatz needs a power-of-two qubit count")
    a = AnsatzIR(n)
    for q in range(n):
        a.param_gate("rx", q)
    stride = 1
    while stride < n:
        for q in range(0, n, 2 * stride):
            lo, hi = q + stride - 1, q + 2 * stride - 1
            a.gate("cx", lo, hi)
            a.param_gate("rx", hi)
        stride *= 2
    return a


ANSATZE = {
    "sim-circuit-1": sim_circuit_1,
    "sim-circuit-2": sim_circuit_2,
    "sim-circuit-3": sim_circuit_3,
    "sim-circuit-4": sim_circuit_4,
    "tree": tree_ansatz,
}


# -------------------------------------------------------------- MC oracle

def expectation(a: AnsatzIR, h: PauliObservable, thetas) -> float:
    ir = _bind_float(a, thetas)
    psi = statevector(ir)
    n = a.num_qubits
    signs = np.ones(2**n)
    for q, ch in enumerate(h.paulis):
        if ch == "Z":
            bit = (np.arange(2**n) >> (n - 1 - q)) & 1
            signs = signs * (1 - 2 * bit)
    return float(np.real(np.sum(signs * np.abs(psi) ** 2)))


def _bind_float(a: AnsatzIR, thetas) -> GateIR:
    ir = GateIR(a.num_qubits)
    for it in a.items:
        if isinstance(it, ParamGate):
            th = thetas[it.param] / np.pi  # rz takes multiples of pi
            if it.name == "rx":
                ir.add("h", it.qubit)
                ir.gates.append(Gate("rz", (it.qubit,), th))
                ir.add("h", it.qubit)
            else:
                ir.gates.append(Gate("rz", (it.qubit,), th))
        else:
            ir.gates.append(it)
    return ir


def _batch_expectations(a: AnsatzIR, h: PauliObservable, thetas: np.ndarray) -> np.ndarray:
    """<H> for a (B, p) batch of parameter points, vectorized over the batch."""
    n = a.num_qubits
    B = thetas.shape[0]
    psi = np.zeros((B,) + (2,) * n, dtype=complex)
    psi[(slice(None),) + (0,) * n] = 1.0

    def mat_gate(mat, q):
        nonlocal psi
        psi = np.moveaxis(np.tensordot(mat, psi, axes=([1], [q + 1])), 0, q + 1)

    Hm = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    for it in a.items:
        if isinstance(it, ParamGate):
            q = it.qubit
            if it.name == "rx":
                mat_gate(Hm, q)
            sl = [slice(None)] * (n + 1)
            sl[q + 1] = 1
            phase = np.exp(1j * thetas[:, it.param]).reshape((B,) + (1,) * (n - 1))
            psi[tuple(sl)] = psi[tuple(sl)] * phase
            if it.name == "rx":
                mat_gate(Hm, q)
            continue
        g = it
        if g.name == "h":
            mat_gate(Hm, g.qubits[0])
        elif g.name == "x":
            psi = np.flip(psi, axis=g.qubits[0] + 1)
        elif g.name in ("z", "s", "sdg", "t", "tdg"):
            ph = np.exp(1j * np.pi * float(PHASE_GATES[g.name]))
            sl = [slice(None)] * (n + 1)
            sl[g.qubits[0] + 1] = 1
            psi[tuple(sl)] *= ph
        elif g.name == "rz":
            sl = [slice(None)] * (n + 1)
            sl[g.qubits[0] + 1] = 1
            psi[tuple(sl)] *= np.exp(1j * np.pi * float(g.phase))
        elif g.name == "cx":
            c, t = g.qubits
            sl = [slice(None)] * (n + 1)
            sl[c + 1] = 1
            sub = psi[tuple(sl)]
            psi[tuple(sl)] = np.flip(sub, axis=t + 1 - (1 if t > c else 0))
        elif g.name in ("cz", "ccz"):
            sl = [slice(None)] * (n + 1)
            for q in g.qubits:
                sl[q + 1] = 1
            psi[tuple(sl)] *= -1
        else:
            raise ValueError(f"gate {g.name} unsupported in ansatz")
    probs = np.abs(psi.reshape(B, -1)) ** 2
    signs = np.ones(2**n)
    for q, ch in enumerate(h.paulis):
        if ch == "Z":
            bit = (np.arange(2**n) >> (n - 1 - q)) & 1
            signs = signs * (1 - 2 * bit)
    return probs @ signs


def mc_variance_oracle(
    a: AnsatzIR,
    h: PauliObservable,
    j: int,
    samples: int = 100000,
    seed: int = 0,
    batch: int = 4096,
) -> tuple[float, float, float]:
    """(gradient mean, gradient variance, stderr of the variance estimate)
    by parameter-shift at uniform random parameter points."""
    if a.num_qubits > 12:
        raise ValueError("MC oracle is desk-scale (n <= 12)")
    rng = np.random.default_rng(seed)
    grads = np.empty(samples)
    done = 0
    while done < samples:
        b = min(batch, samples - done)
        thetas = rng.uniform(-np.pi, np.pi, size=(b, a.num_params))
        tplus = thetas.copy()
        tplus[:, j] += np.pi / 2
        tminus = thetas.copy()
        tminus[:, j] -= np.pi / 2
        grads[done : done + b] = 0.5 * (
            _batch_expectations(a, h, tplus) - _batch_expectations(a, h, tminus)
        )
        done += b
    mean = float(grads.mean())
    var = float(grads.var())
    m2 = grads - grads.mean()
    m4 = float(np.mean(m2**4))
    var_of_var = (m4 - (var**2) * (samples - 3) / (samples - 1)) / samples
    stderr = float(np.sqrt(max(var_of_var, 0.0)))
    return mean, var, stderr
