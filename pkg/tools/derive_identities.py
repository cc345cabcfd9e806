"""Offline search for the frozen decomposition constants.

Finds, by exact/numerical search over stabilizer structures:
  * a 3-term decomposition of two disjoint star edges (D2 shape)
  * a 5-term decomposition of three disjoint star edges (D3 shape)
  * a 7-term stabilizer decomposition of six T-phases (BSS shape)
  * a 4-T-spider representation of the star operator (triangle via Eq.1 shape)
  * rarely-occurring star-reducing local patterns

Prints Python literals to freeze into starzx/_decomp_data.py and the tests.
Run:  python tools/derive_identities.py [d2|d3|bss|star4t|rare]
"""

import itertools
import math
import sys
import random

import numpy as np

sys.path.insert(0, "src")

OMEGA = np.exp(1j * math.pi / 4)
SQRT2 = math.sqrt(2)


def rationalize(z: complex, max_coeff=9, pow_range=(-8, 5)):
    """Express z as (a,b,c,d,pow2) in Z[omega,1/2], or None."""
    for p in range(pow_range[0], pow_range[1]):
        scaled = z / SQRT2**p
        # solve scaled = a + b w + c w^2 + d w^3 with w = e^{i pi/4}
        # real: a + (b - d)/sqrt2 ; imag: c + (b + d)/sqrt2
        for b in range(-max_coeff, max_coeff + 1):
            for d in range(-max_coeff, max_coeff + 1):
                re = scaled.real - (b - d) / SQRT2
                im = scaled.imag - (b + d) / SQRT2
                a, c = round(re), round(im)
                if abs(re - a) < 1e-7 and abs(im - c) < 1e-7 and abs(a) <= max_coeff and abs(c) <= max_coeff:
                    back = (a + b * OMEGA + c * OMEGA**2 + d * OMEGA**3) * SQRT2**p
                    if abs(back - z) < 1e-7:
                        return (a, b, c, d, p)
    return None


# ---------------------------------------------------------------- D2 / D3

# per-star-edge replacement structures: value vector over (u,w) in {00,01,10,11}
EDGE_STRUCTS = {
    "delete": np.array([1, 1, 1, 1], dtype=complex),
    "hadamard": np.array([1, 1, 1, -1], dtype=complex) / SQRT2,
    "pi_caps": np.array([0, 0, 0, 2], dtype=complex),      # pi-leaf H-cap both ends
    "zero_caps": np.array([2, 0, 0, 0], dtype=complex),    # 0-leaf H-cap both ends
    "parity_leaf0": np.array([1, 0, 0, 1], dtype=complex),  # fresh 0-leaf H to both
    "parity_leafpi": np.array([0, 1, 1, 0], dtype=complex),  # fresh pi-leaf H to both
    "parity_leaf_p2": np.array([(1 + 1j) / 2, (1 - 1j) / 2, (1 - 1j) / 2, (1 + 1j) / 2]),
    "parity_leaf_m2": np.array([(1 - 1j) / 2, (1 + 1j) / 2, (1 + 1j) / 2, (1 - 1j) / 2]),
    "zero_cap_u": np.array([SQRT2, SQRT2, 0, 0], dtype=complex),
    "zero_cap_w": np.array([SQRT2, 0, SQRT2, 0], dtype=complex),
    "pi_cap_u": np.array([0, 0, SQRT2, SQRT2], dtype=complex),
    "pi_cap_w": np.array([0, SQRT2, 0, SQRT2], dtype=complex),
}

# per-leg phase dressings (multiplied on top of a structure)
LEG_PHASES = {
    "": (1, 1),
    "pi": (1, -1),
    "p2": (1, 1j),
    "m2": (1, -1j),
}


def leg_dress(vec4, du, dw):
    out = vec4.copy()
    fu, fw = LEG_PHASES[du], LEG_PHASES[dw]
    for idx, (u, w) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        out[idx] *= fu[u] * fw[w]
    return out


def d2_target():
    t = np.zeros(16, dtype=complex)
    for i, (u1, w1) in enumerate(itertools.product((0, 1), repeat=2)):
        for j, (u2, w2) in enumerate(itertools.product((0, 1), repeat=2)):
            t[i * 4 + j] = (1 - u1 * w1) * (1 - u2 * w2)
    return t


def pair_pool():
    pool = {}
    names = list(EDGE_STRUCTS)
    for n1 in names:
        for du in LEG_PHASES:
            for dw in LEG_PHASES:
                if du != dw:
                    continue  # keep u<->w symmetry within a pair
                v = leg_dress(EDGE_STRUCTS[n1], du, dw)
                pool[(n1, du)] = v
    return pool


def search_d2():
    target = d2_target()
    pool = pair_pool()
    keys = list(pool)
    print(f"D2 pool: {len(keys)} per-edge structures")
    best = None
    for k1, k2 in itertools.product(keys, repeat=2):
        # mirror pair T = A(x)B, swap(T) = B(x)A, plus symmetric U = C(x)C
        T1 = np.kron(pool[k1], pool[k2])
        T2 = np.kron(pool[k2], pool[k1])
        for k3 in keys:
            U = np.kron(pool[k3], pool[k3])
            M = np.stack([T1, T2, U], axis=1)
            coef, res, rank, _ = np.linalg.lstsq(M, target, rcond=None)
            r = np.linalg.norm(M @ coef - target)
            if r < 1e-9:
                rats = [rationalize(c) for c in coef]
                if all(rats):
                    print("D2 FOUND:", k1, k2, k3, [complex(np.round(c, 6)) for c in coef], rats)
                    return (k1, k2, k3, rats)
    print("D2: nothing in mirror ansatz")
    return None


def d3_target():
    t = np.zeros(64, dtype=complex)
    for idx in range(64):
        val = 1
        for s in range(3):
            u = (idx >> (2 * s + 1)) & 1
            w = (idx >> (2 * s)) & 1
            val *= 1 - u * w
        t[idx] = val
    return t


def kron3(a, b, c):
    return np.kron(a, np.kron(b, c))


def search_d3():
    target = d3_target()
    pool = pair_pool()
    keys = list(pool)
    print(f"D3 pool: {len(keys)}")
    # ansatz: lam * (ABB + BAB + BBA) + mu * CCC + nu * DDD
    for kA, kB in itertools.product(keys, repeat=2):
        A, B = pool[kA], pool[kB]
        S3 = kron3(A, B, B) + kron3(B, A, B) + kron3(B, B, A)
        for kC, kD in itertools.combinations(keys, 2):
            C, D = pool[kC], pool[kD]
            M = np.stack([S3, kron3(C, C, C), kron3(D, D, D)], axis=1)
            coef, *_ = np.linalg.lstsq(M, target, rcond=None)
            if np.linalg.norm(M @ coef - target) < 1e-9:
                rats = [rationalize(c) for c in coef]
                if all(rats):
                    print("D3 FOUND:", kA, kB, kC, kD, [complex(np.round(c, 6)) for c in coef], rats)
                    return (kA, kB, kC, kD, rats)
    print("D3: nothing in sym ansatz")
    return None


# ---------------------------------------------------------------- BSS

def stab_value_vector(n, constraints, quad, lin):
    """Value vector of c * sum_{x in A} i^{lin.x} (-1)^{x^T quad x} |x>.

    constraints: list of (mask, bit) parity constraints; quad: list of (i, j)
    CZ pairs; lin: tuple of exponents mod 4 per site.
    """
    N = 1 << n
    vec = np.zeros(N, dtype=complex)
    for x in range(N):
        ok = all(bin(x & mask).count("1") % 2 == bit for mask, bit in constraints)
        if not ok:
            continue
        ph = sum(lin[i] for i in range(n) if (x >> i) & 1) % 4
        q = sum(1 for (i, j) in quad if ((x >> i) & 1) and ((x >> j) & 1)) % 2
        vec[x] = (1j) ** ph * (-1) ** q
    return vec


def bss_target():
    vec = np.zeros(64, dtype=complex)
    for x in range(64):
        vec[x] = OMEGA ** bin(x).count("1")
    return vec


def random_state(rng):
    n = 6
    ncons = rng.choice([0, 0, 1, 1, 2])
    constraints = []
    for _ in range(ncons):
        mask = rng.randrange(1, 64)
        constraints.append((mask, rng.randrange(2)))
    pairs = list(itertools.combinations(range(6), 2))
    quad = [p for p in pairs if rng.random() < 0.3]
    lin = tuple(rng.randrange(4) for _ in range(6))
    return (tuple(constraints), tuple(quad), lin)


def mutate(state, rng):
    constraints, quad, lin = list(state[0]), list(state[1]), list(state[2])
    move = rng.randrange(4)
    if move == 0:
        lin[rng.randrange(6)] = rng.randrange(4)
    elif move == 1:
        p = tuple(sorted(rng.sample(range(6), 2)))
        if p in quad:
            quad.remove(p)
        else:
            quad.append(p)
    elif move == 2 and constraints:
        constraints.pop(rng.randrange(len(constraints)))
    else:
        mask = rng.randrange(1, 64)
        constraints.append((mask, rng.randrange(2)))
        if len(constraints) > 2:
            constraints.pop(0)
    return (tuple(constraints), tuple(sorted(set(map(tuple, quad)))), tuple(lin))


def residual(states, target):
    M = np.stack([stab_value_vector(6, *s) for s in states], axis=1)
    norms = np.linalg.norm(M, axis=0)
    if np.any(norms < 1e-12):
        return 1e9, None
    coef, *_ = np.linalg.lstsq(M, target, rcond=None)
    return np.linalg.norm(M @ coef - target), coef


def search_bss(seed=0, iters=200000):
    rng = random.Random(seed)
    target = bss_target()
    states = [random_state(rng) for _ in range(7)]
    best, coef = residual(states, target)
    for it in range(iters):
        i = rng.randrange(7)
        cand = states.copy()
        if rng.random() < 0.15:
            cand[i] = random_state(rng)
        else:
            cand[i] = mutate(cand[i], rng)
        r, c = residual(cand, target)
        if r <= best + 1e-13 or rng.random() < 0.002 * math.exp(-(r - best) * 20):
            states, best, coef = cand, r, c
        if best < 1e-9:
            print(f"BSS FOUND at iter {it}: residual {best:.2e}")
            for s, cc in zip(states, coef):
                print("  state:", s, "coef:", complex(np.round(cc, 8)), rationalize(cc))
            return states, coef
        if it % 10000 == 0:
            print(f"  iter {it}: residual {best:.4f}")
    print("BSS: best residual", best)
    return None


# ---------------------------------------------------------------- star as 4 T

def search_star_4t():
    """2-boundary diagrams: hosts u,w; ancillas z1,z2; H-edges among the 4;
    phases on all four vertices; want value ∝ (1 - uw) with exactly 4 T's."""
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]  # u=0,w=1,z1=2,z2=3
    sols = []
    for edges_mask in range(64):
        edges = [pairs[i] for i in range(6) if (edges_mask >> i) & 1]
        for phases in itertools.product(range(8), repeat=4):
            if sum(p % 2 for p in phases) != 4:
                continue
            vals = {}
            ok = True
            for u, w in itertools.product((0, 1), repeat=2):
                total = 0
                for z1, z2 in itertools.product((0, 1), repeat=2):
                    x = (u, w, z1, z2)
                    ph = sum(phases[i] * x[i] for i in range(4)) % 8
                    sgn = sum(x[i] * x[j] for (i, j) in edges) % 2
                    total += OMEGA**ph * (-1) ** sgn
                vals[(u, w)] = total
            z = vals[(1, 1)]
            if abs(z) > 1e-9:
                continue
            ref = vals[(0, 0)]
            if abs(ref) < 1e-9:
                continue
            if abs(vals[(0, 1)] - ref) < 1e-9 and abs(vals[(1, 0)] - ref) < 1e-9:
                sols.append((edges, phases, rationalize(ref)))
                if len(sols) < 8:
                    print("star-as-4T:", edges, phases, "scale", rationalize(ref))
    print(f"{len(sols)} solutions")
    return sols


if __name__ == "__main__":
    what = sys.argv[1] if len(sys.argv) > 1 else "all"
    if what in ("d2", "all"):
        search_d2()
    if what in ("d3", "all"):
        search_d3()
    if what in ("star4t", "all"):
        search_star_4t()
    if what in ("bss", "all"):
        seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
        search_bss(seed)
