"""Matching-pursuit search for a 7-term stabilizer decomposition of six
T-phases, run in the H-state frame where the target is real positive:
target(x) = (sqrt2 - 1)^{|x|}.

States are CH-form stabilizers: c * sum_{x in A} i^{l.x} (-1)^{x Q x} |x>
with A an affine subspace given by parity constraints.
"""

import itertools
import math
import random
import sys

import numpy as np

N = 6
DIM = 64
TAN = math.sqrt(2) - 1

TARGET = np.array([TAN ** bin(x).count("1") for x in range(DIM)])
PAIRS = list(itertools.combinations(range(N), 2))


def value_vector(constraints, quad, lin):
    vec = np.zeros(DIM, dtype=complex)
    for x in range(DIM):
        if any(bin(x & mask).count("1") % 2 != bit for mask, bit in constraints):
            continue
        ph = sum(lin[i] for i in range(N) if (x >> i) & 1) % 4
        q = sum(1 for (i, j) in quad if ((x >> i) & 1) and ((x >> j) & 1)) % 2
        vec[x] = (1j) ** ph * (-1) ** q
    return vec


def random_state(rng, real_bias=0.8):
    ncons = rng.choice([0, 0, 1, 1, 1, 2, 2])
    constraints = tuple(
        (rng.randrange(1, DIM), rng.randrange(2)) for _ in range(ncons)
    )
    quad = tuple(p for p in PAIRS if rng.random() < 0.25)
    if rng.random() < real_bias:
        lin = tuple(rng.choice((0, 2)) for _ in range(N))
    else:
        lin = tuple(rng.randrange(4) for _ in range(N))
    return (constraints, quad, lin)


def mutate(state, rng):
    constraints, quad, lin = list(state[0]), list(state[1]), list(state[2])
    move = rng.randrange(5)
    if move == 0:
        i = rng.randrange(N)
        lin[i] = rng.choice((0, 2)) if rng.random() < 0.7 else rng.randrange(4)
    elif move == 1:
        p = PAIRS[rng.randrange(len(PAIRS))]
        if p in quad:
            quad.remove(p)
        else:
            quad.append(p)
    elif move == 2 and constraints:
        constraints.pop(rng.randrange(len(constraints)))
    elif move == 3 and len(constraints) < 3:
        constraints.append((rng.randrange(1, DIM), rng.randrange(2)))
    else:
        if constraints:
            i = rng.randrange(len(constraints))
            mask, bit = constraints[i]
            mask ^= 1 << rng.randrange(N)
            if mask:
                constraints[i] = (mask, bit)
    return (tuple(constraints), tuple(sorted(set(map(tuple, quad)))), tuple(lin))


def solve(states):
    M = np.stack([value_vector(*s) for s in states], axis=1)
    norms = np.linalg.norm(M, axis=0)
    if np.any(norms < 1e-9):
        return 1e9, None, M
    coef, *_ = np.linalg.lstsq(M, TARGET, rcond=None)
    return float(np.linalg.norm(M @ coef - TARGET)), coef, M


def run(seed=0, iters=60000, pool_size=400, log=True):
    rng = random.Random(seed)
    states = [random_state(rng) for _ in range(7)]
    best, coef, M = solve(states)
    stall = 0
    for it in range(iters):
        improved = False
        # try a pool of mutations/replacements of each slot, pick the best
        order = list(range(7))
        rng.shuffle(order)
        for slot in order:
            base_states = states.copy()
            candidates = []
            for _ in range(24):
                candidates.append(mutate(states[slot], rng))
            for _ in range(8):
                candidates.append(random_state(rng))
            best_local = best
            best_state = None
            for cand in candidates:
                base_states[slot] = cand
                r, c, _ = solve(base_states)
                if r < best_local - 1e-12:
                    best_local = r
                    best_state = cand
            if best_state is not None:
                states[slot] = best_state
                best = best_local
                improved = True
        if not improved:
            stall += 1
            # kick: replace the weakest slot
            r0, c0, M0 = solve(states)
            weak = int(np.argmin(np.abs(c0) * np.linalg.norm(M0, axis=0)))
            states[weak] = random_state(rng)
            best, coef, M = solve(states)
        else:
            stall = 0
        if best < 1e-9:
            print(f"seed {seed}: FOUND at iter {it} residual {best:.2e}")
            r, c, _ = solve(states)
            for s, cc in zip(states, c):
                print("   ", s, complex(np.round(cc, 8)))
            return states
        if log and it % 200 == 0:
            print(f"seed {seed} iter {it}: residual {best:.6f}", flush=True)
    print(f"seed {seed}: best residual {best:.6f}")
    return None


if __name__ == "__main__":
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    run(seed)
