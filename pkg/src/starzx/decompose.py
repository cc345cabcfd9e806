"""Stabiliser decompositions of star edges and T-spiders.

Every rule rewrites a matched site into a weighted sum of diagrams that are
Clifford at the site; the weighted sum of interpretations equals the input
exactly (ring arithmetic, verified against the dense oracle in the tests).

Site shapes:
  D1   one star edge                            -> 2 terms
  D2   two disjoint star edges                  -> 3 terms
  D3   three pairwise-disjoint star edges       -> 5 terms
  D4   three deg-1 phase-0 star-state spiders   -> 4 terms
  D5   same with phase +-pi/2                   -> 4 terms
  D6   spider carrying m >= 2 star edges        -> 2 terms  (beta = 1/m)
  T1   one T-spider                             -> 2 terms
  BSS  six T-spiders                            -> 7 terms  (alpha = log2(7)/6)

D6 and T1 share one implementation: branching the spider over its two basis
values (term weights 1/sqrt2^n and e^{i a}/sqrt2^{n+m}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._backend import SimpGraph
from .scalar import ScalarExact, phase_to_qpi4
from ._decomp_data import BSS_TERMS

H = 1
STAR = 2

PI = Fraction(1)
HALF = Fraction(1, 2)

LOG2_3 = math.log2(3.0)
LOG2_5 = math.log2(5.0)
LOG2_7 = math.log2(7.0)


@dataclass(frozen=True)
class DecompositionRule:
    name: str
    terms_produced: int
    consumed_t: int
    consumed_stars: int

    @property
    def exponent(self) -> float:
        units = self.consumed_t + self.consumed_stars
        return math.log2(self.terms_produced) / units


RULES = {
    "D1": DecompositionRule("D1", 2, 0, 1),
    "D2": DecompositionRule("D2", 3, 0, 2),
    "D3": DecompositionRule("D3", 5, 0, 3),
    "D4": DecompositionRule("D4", 4, 0, 3),
    "D5": DecompositionRule("D5", 4, 0, 3),
    "T1": DecompositionRule("T1", 2, 1, 0),
    "BSS": DecompositionRule("BSS", 7, 6, 0),
}


def d6_rule(m: int) -> DecompositionRule:
    return DecompositionRule("D6", 2, 0, m)


@dataclass(frozen=True)
class Candidate:
    rule: DecompositionRule
    site: tuple
    exponent: float


def _star_edges(g: SimpGraph) -> list[tuple[int, int]]:
    out = []
    for v in sorted(g.adj):
        for w, e in g.adj[v].items():
            if e == STAR and w > v:
                out.append((v, w))
    return out


def _star_state_units(g: SimpGraph) -> dict[Fraction, list[tuple[int, int]]]:
    """Deg-1 spiders with a single star edge, grouped by phase (0, pi/2, 3pi/2)."""
    units: dict[Fraction, list[tuple[int, int]]] = {}
    for v in sorted(g.adj):
        if v in g.boundary or len(g.adj[v]) != 1:
            continue
        (w, e), = g.adj[v].items()
        if e != STAR or w in g.boundary:
            continue
        p = g.phase[v]
        if p == 0 or p.denominator == 2:
            units.setdefault(p, []).append((v, w))
    return units


def _t_spiders(g: SimpGraph) -> list[int]:
    return [v for v in sorted(g.phase)
            if v not in g.boundary and g.phase[v].denominator == 4]


def find_candidates(g: SimpGraph, max_sets: int = 2000) -> list[Candidate]:
    """All decomposition sites of the current diagram (bounded enumeration of
    the combinatorial D2/D3/D4/D5/BSS site families)."""
    cands: list[Candidate] = []

    for v in sorted(g.adj):
        if v in g.boundary:
            continue
        m = g.star_degree(v)
        if m >= 2:
            cands.append(Candidate(d6_rule(m), (v,), 1.0 / m))

    units = _star_state_units(g)
    for phase, us in units.items():
        name = "D4" if phase == 0 else "D5"
        rule = RULES[name]
        n = 0
        for i in range(len(us)):
            for j in range(i + 1, len(us)):
                for k in range(j + 1, len(us)):
                    cands.append(Candidate(rule, (us[i], us[j], us[k]), rule.exponent))
                    n += 1
                    if n >= max_sets:
                        break
                if n >= max_sets:
                    break
            if n >= max_sets:
                break

    stars = _star_edges(g)
    n2 = n3 = 0
    for i in range(len(stars)):
        for j in range(i + 1, len(stars)):
            if set(stars[i]) & set(stars[j]):
                continue
            if n2 < max_sets:
                cands.append(Candidate(RULES["D2"], (stars[i], stars[j]), RULES["D2"].exponent))
                n2 += 1
            for k in range(j + 1, len(stars)):
                if set(stars[k]) & (set(stars[i]) | set(stars[j])):
                    continue
                if n3 < max_sets:
                    cands.append(Candidate(RULES["D3"], (stars[i], stars[j], stars[k]), RULES["D3"].exponent))
                    n3 += 1

    for u, w in stars:
        cands.append(Candidate(RULES["D1"], ((u, w),), RULES["D1"].exponent))

    ts = _t_spiders(g)
    if len(ts) >= 6:
        cands.append(Candidate(RULES["BSS"], tuple(ts[:6]), RULES["BSS"].exponent))
    for t in ts:
        cands.append(Candidate(RULES["T1"], (t,), RULES["T1"].exponent))

    return cands


def select_best(cands: list[Candidate]) -> Candidate:
    """Lowest exponent; ties broken by more units consumed, then lowest site id."""
    if not cands:
        raise ValueError("no decomposition candidates on a non-terminal diagram")

    def key(c: Candidate):
        units = c.rule.consumed_t + (
            c.site.__len__() if c.rule.name == "D6" else c.rule.consumed_stars
        )
        consumed = c.rule.consumed_t + c.rule.consumed_stars
        if c.rule.name == "D6":
            consumed = round(1.0 / c.exponent)
        return (c.exponent, -consumed, c.site)

    return min(cands, key=key)


def select_best_site(g: SimpGraph) -> Candidate | None:
    """Fast path for the engine: construct only the winning candidate.

    Preference order mirrors exponents: D6 with the largest m wins once
    m >= 2 beats everything except BSS when m is small; ties resolved exactly
    as in select_best.
    """
    best: Candidate | None = None

    def consider(c: Candidate):
        nonlocal best
        if best is None:
            best = c
            return
        bu = round(1.0 / best.exponent) if best.rule.name == "D6" else (
            best.rule.consumed_t + best.rule.consumed_stars)
        cu = round(1.0 / c.exponent) if c.rule.name == "D6" else (
            c.rule.consumed_t + c.rule.consumed_stars)
        if (c.exponent, -cu, c.site) < (best.exponent, -bu, best.site):
            best = c

    best_m = 0
    best_m_site = None
    for v in sorted(g.adj):
        if v in g.boundary:
            continue
        m = g.star_degree(v)
        if m >= 2 and m > best_m:
            best_m, best_m_site = m, v
    if best_m_site is not None:
        consider(Candidate(d6_rule(best_m), (best_m_site,), 1.0 / best_m))

    units = _star_state_units(g)
    for phase in sorted(units, key=lambda p: (p.denominator, p.numerator)):
        us = units[phase]
        if len(us) >= 3:
            rule = RULES["D4" if phase == 0 else "D5"]
            consider(Candidate(rule, tuple(us[:3]), rule.exponent))

    stars = _star_edges(g)
    disjoint: list[tuple[int, int]] = []
    used: set[int] = set()
    for e in stars:
        if e[0] in used or e[1] in used:
            continue
        disjoint.append(e)
        used.update(e)
        if len(disjoint) == 3:
            break
    if len(disjoint) >= 3:
        consider(Candidate(RULES["D3"], tuple(disjoint[:3]), RULES["D3"].exponent))
    elif len(disjoint) == 2:
        consider(Candidate(RULES["D2"], tuple(disjoint), RULES["D2"].exponent))
    elif stars:
        consider(Candidate(RULES["D1"], (stars[0],), RULES["D1"].exponent))

    ts = _t_spiders(g)
    if len(ts) >= 6:
        consider(Candidate(RULES["BSS"], tuple(ts[:6]), RULES["BSS"].exponent))
    elif ts:
        consider(Candidate(RULES["T1"], (ts[0],), RULES["T1"].exponent))

    return best


# -------------------------------------------------------------- application

def _attach_leaf(g: SimpGraph, w: int, phase) -> int:
    leaf = g.add_vertex(phase)
    g.adj[leaf][w] = H
    g.adj[w][leaf] = H
    return leaf


def _vertex_branch(g: SimpGraph, v: int) -> list[SimpGraph]:
    """Branch spider v over its basis values (T1 and D6)."""
    k = phase_to_qpi4(g.phase[v])
    if k is None:
        raise ValueError("vertex phase off the pi/4 grid")
    h_nbrs = sorted(w for w, e in g.adj[v].items() if e == H)
    s_nbrs = sorted(w for w, e in g.adj[v].items() if e == STAR)
    n, m = len(h_nbrs), len(s_nbrs)

    g0 = g.clone()
    g0.remove_vertex(v)
    g0.mul_scalar(ScalarExact.sqrt2_power(-n))

    g1 = g.clone()
    g1.remove_vertex(v)
    for w in h_nbrs:
        g1.phase[w] = (g1.phase[w] + PI) % 2
    for w in s_nbrs:
        _attach_leaf(g1, w, 0)
    g1.mul_scalar(ScalarExact.omega_power(k) * ScalarExact.sqrt2_power(-(n + m)))
    return [g0, g1]


def _remove_star(g: SimpGraph, e: tuple[int, int]) -> None:
    g.remove_edge(*e)


def _star_to_h(g: SimpGraph, e: tuple[int, int]) -> None:
    u, w = e
    g.adj[u][w] = H
    g.adj[w][u] = H


def _apply_d1(g: SimpGraph, site) -> list[SimpGraph]:
    (e,) = site
    g0 = g.clone()
    _remove_star(g0, e)
    g1 = g.clone()
    _remove_star(g1, e)
    for host in e:
        _attach_leaf(g1, host, PI)
    g1.mul_scalar(ScalarExact(-1, 0, 0, 0, -2))  # -1/2
    return [g0, g1]


def _apply_d2(g: SimpGraph, site) -> list[SimpGraph]:
    e1, e2 = site
    half_r2 = ScalarExact.sqrt2_power(-1)
    terms = []
    for kept, killed in ((e1, e2), (e2, e1)):
        t = g.clone()
        _remove_star(t, killed)
        _star_to_h(t, kept)
        t.mul_scalar(half_r2)
        terms.append(t)
    t = g.clone()
    for e in (e1, e2):
        _remove_star(t, e)
        for host in e:
            _attach_leaf(t, host, PI)
    t.mul_scalar(ScalarExact.sqrt2_power(-4))  # 1/4
    terms.append(t)
    return terms


def _apply_d3(g: SimpGraph, site) -> list[SimpGraph]:
    e1, e2, e3 = site
    terms = []
    for deleted in (e1, e2, e3):
        t = g.clone()
        for e in (e1, e2, e3):
            if e == deleted:
                _remove_star(t, e)
            else:
                _star_to_h(t, e)
        t.mul_scalar(ScalarExact.sqrt2_power(-2))  # 1/2
        terms.append(t)
    t = g.clone()
    for e in (e1, e2, e3):
        _remove_star(t, e)
    t.mul_scalar(ScalarExact.sqrt2_power(-4))  # 1/4
    terms.append(t)
    t = g.clone()
    for e in (e1, e2, e3):
        _remove_star(t, e)
        for host in e:
            _attach_leaf(t, host, PI)
    t.mul_scalar(ScalarExact(-1, 0, 0, 0, -6))  # -1/8
    terms.append(t)
    return terms


def _apply_d45(g: SimpGraph, site, plus: bool | None) -> list[SimpGraph]:
    """D4 (plus=None) and D5 (plus = sign of the pi/2 unit phase)."""
    units = [u for (u, _w) in site]
    hosts = [w for (_u, w) in site]
    if plus is None:
        weights = [
            ScalarExact.from_int(3),
            ScalarExact.from_int(-1),
            ScalarExact(3, 0, 0, 0, -1),    # 3/sqrt2
            ScalarExact(-3, 0, 0, 0, -3),   # -3/(2 sqrt2)
        ]
    else:
        s = 1 if plus else -1
        weights = [
            ScalarExact(1, 0, 3 * s, 0, -2),    # (1 +- 3i)/2
            ScalarExact(1, 0, -s, 0, -2),        # (1 -+ i)/2
            ScalarExact(-3, 0, s, 0, -3),        # (-3 +- i)/(2 sqrt2)
            ScalarExact(1, 0, -2 * s, 0, -3),    # (1 -+ 2i)/(2 sqrt2)
        ]
    terms = []
    for style, weight in zip(("delete", "pi", "cap0", "cappi"), weights):
        t = g.clone()
        for u in units:
            t.remove_vertex(u)
        if style == "pi":
            for w in hosts:
                t.phase[w] = (t.phase[w] + PI) % 2
        elif style == "cap0":
            for w in hosts:
                _attach_leaf(t, w, 0)
        elif style == "cappi":
            for w in hosts:
                _attach_leaf(t, w, PI)
        t.mul_scalar(weight)
        terms.append(t)
    return terms


def _apply_bss(g: SimpGraph, site) -> list[SimpGraph]:
    """Replace six T-phases by the frozen 7-term stabilizer decomposition.

    Each term specification carries: weight, per-spider phase shift (in pi/4
    units, replacing the pi/4 of the magic phase), pairwise Hadamard-edge
    toggles between the six spiders, parity-leaf attachments, and fusions.
    """
    spiders = list(site)
    base = g.clone()
    # strip one T from each spider: v(alpha) = v(alpha - pi/4) with the pi/4
    # magic handled by the decomposition below
    for v in spiders:
        base.phase[v] = (base.phase[v] - Fraction(1, 4)) % 2
    terms = []
    for spec in BSS_TERMS:
        t = base.clone()
        for v, dk in zip(spiders, spec["phases"]):
            if dk:
                t.phase[v] = (t.phase[v] + Fraction(dk, 4)) % 2
        for i, j in spec["edges"]:
            t.toggle_h(spiders[i], spiders[j])
        for subset, leaf_phase in spec["leaves"]:
            leaf = t.add_vertex(Fraction(leaf_phase, 4))
            for i in subset:
                t.toggle_h(leaf, spiders[i])
        t.mul_scalar(ScalarExact.from_tuple(spec["weight"]))
        terms.append(t)
    return terms


def apply_rule(g: SimpGraph, cand: Candidate) -> list[SimpGraph]:
    name = cand.rule.name
    if name == "D6":
        return _vertex_branch(g, cand.site[0])
    if name == "T1":
        return _vertex_branch(g, cand.site[0])
    if name == "D1":
        return _apply_d1(g, cand.site)
    if name == "D2":
        return _apply_d2(g, cand.site)
    if name == "D3":
        return _apply_d3(g, cand.site)
    if name == "D4":
        return _apply_d45(g, cand.site, None)
    if name == "D5":
        u0 = cand.site[0][0]
        return _apply_d45(g, cand.site, g.phase[u0] == HALF)
    if name == "BSS":
        return _apply_bss(g, cand.site)
    raise ValueError(f"unknown rule {name}")
