"""Recursive contraction: simplify, decompose greedily, recurse, sum exactly.

Terminal handling:
  * a fully-reduced Clifford diagram folds to the empty diagram (its scalar);
  * small leftovers with T-spiders or stars remaining are evaluated by the
    kernel's exact ring-valued contraction (one terminal term), which keeps
    the term-count bound intact for the sub-linear tails where no listed
    decomposition achieves the bulk rate;
  * anything else is decomposed by the lowest-exponent applicable rule.

Exact commutative scalar addition makes the result independent of worker
count and traversal order.
"""

from __future__ import annotations

import json
import os
import time
from collections import Counter
from dataclasses import dataclass, field

from ._backend import EndgameTooBig, SimpGraph
from .decompose import apply_rule, select_best_site
from .diagram import Diagram
from .scalar import ScalarExact
from .simplify import to_simp_graph

DEFAULT_ENDGAME_VERTICES = 16
DEFAULT_ENDGAME_RANK = 14
DENSE_FALLBACK_VERTICES = 20


class ContractTimeout(Exception):
    pass


class RuleSetError(Exception):
    pass


@dataclass
class ContractConfig:
    timeout: float | None = None
    workers: int = 1
    star_rules: bool = True
    t_rules: bool = True
    endgame_max_vertices: int = DEFAULT_ENDGAME_VERTICES
    endgame_max_rank: int = DEFAULT_ENDGAME_RANK


@dataclass
class ContractionStats:
    terminal_terms: int = 0
    decomposition_trace: Counter = field(default_factory=Counter)
    max_depth: int = 0
    wall_time: float = 0.0
    t_count_initial: int = 0
    star_count_initial: int = 0
    dense_fallbacks: int = 0
    endgame_terms: int = 0

    def merge(self, other: "ContractionStats") -> None:
        self.terminal_terms += other.terminal_terms
        self.decomposition_trace.update(other.decomposition_trace)
        self.max_depth = max(self.max_depth, other.max_depth)
        self.dense_fallbacks += other.dense_fallbacks
        self.endgame_terms += other.endgame_terms

    def to_json(self) -> str:
        return json.dumps(
            {
                "terminal_terms": self.terminal_terms,
                "decomposition_trace": dict(self.decomposition_trace),
                "max_depth": self.max_depth,
                "wall_time": self.wall_time,
                "t_count_initial": self.t_count_initial,
                "star_count_initial": self.star_count_initial,
                "dense_fallbacks": self.dense_fallbacks,
                "endgame_terms": self.endgame_terms,
            }
        )


class _Run:
    def __init__(self, cfg: ContractConfig, deadline: float | None):
        self.cfg = cfg
        self.deadline = deadline
        self.stats = ContractionStats()

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ContractTimeout()

    def contract(self, g: SimpGraph, depth: int) -> ScalarExact:
        self.check_time()
        self.stats.max_depth = max(self.stats.max_depth, depth)
        g.full_simp()
        if g.scalar.is_zero:
            self.stats.terminal_terms += 1
            return ScalarExact.zero()
        t, m = g.counts()
        if t == 0 and m == 0:
            self.stats.terminal_terms += 1
            if g.num_vertices() == 0:
                return g.scalar
            # A complete rule set empties Clifford diagrams; reaching here
            # signals a gap in the simplifier, not a user error.
            self.stats.dense_fallbacks += 1
            if g.num_vertices() <= DENSE_FALLBACK_VERTICES:
                return g.exact_eval(max_rank=self.cfg.endgame_max_rank)
            raise RuleSetError(
                f"Clifford residue with {g.num_vertices()} vertices survived full_simp"
            )
        if m > 0 and not self.cfg.star_rules:
            raise RuleSetError("star edges present but star rules are disabled")
        if t > 0 and m == 0 and not self.cfg.t_rules:
            raise RuleSetError("T-spiders present but T rules are disabled")
        if g.num_vertices() <= self.cfg.endgame_max_vertices:
            try:
                val = g.exact_eval(max_rank=self.cfg.endgame_max_rank)
                self.stats.terminal_terms += 1
                self.stats.endgame_terms += 1
                return val
            except EndgameTooBig:
                pass
        cand = select_best_site(g)
        if cand is None:
            raise RuleSetError(f"no candidate found with t={t}, stars={m}")
        self.stats.decomposition_trace[cand.rule.name] += 1
        total = ScalarExact.zero()
        for term in apply_rule(g, cand):
            total = total + self.contract(term, depth + 1)
        return total


def _prepare(d: Diagram, cfg: ContractConfig) -> tuple[SimpGraph, ContractionStats]:
    if d.boundaries:
        raise ValueError("contract expects a scalar diagram (no boundaries)")
    g, _ = to_simp_graph(d)
    g.full_simp()
    stats = ContractionStats()
    stats.t_count_initial, stats.star_count_initial = g.counts()
    return g, stats


def contract(d: Diagram, config: ContractConfig | None = None) -> tuple[ScalarExact, ContractionStats]:
    cfg = config or ContractConfig()
    start = time.monotonic()
    deadline = start + cfg.timeout if cfg.timeout else None
    g, stats = _prepare(d, cfg)
    run = _Run(cfg, deadline)
    value = run.contract(g, 0)
    stats.merge(run.stats)
    stats.max_depth = run.stats.max_depth
    stats.wall_time = time.monotonic() - start
    return value, stats


def evaluate_terminal(g: SimpGraph, max_rank: int = DEFAULT_ENDGAME_RANK) -> ScalarExact:
    """Value of a diagram with no T-spiders and no star edges."""
    t, m = g.counts()
    if t or m:
        raise ValueError("evaluate_terminal requires t_count = star_count = 0")
    g = g.clone()
    g.full_simp()
    if g.num_vertices() == 0 or g.scalar.is_zero:
        return g.scalar
    return g.exact_eval(max_rank=max_rank)


# ------------------------------------------------------------- parallelism

def _expand_frontier(g: SimpGraph, cfg: ContractConfig, target: int):
    """Deterministically expand the decomposition tree breadth-first until at
    least `target` open branches exist (or everything is terminal)."""
    trace: Counter = Counter()
    frontier = [(g, 0)]
    while len(frontier) < target:
        new_frontier = []
        expanded = False
        for graph, depth in frontier:
            if expanded:
                new_frontier.append((graph, depth))
                continue
            graph.full_simp()
            t, m = graph.counts()
            small = graph.num_vertices() <= cfg.endgame_max_vertices
            if graph.scalar.is_zero or (t == 0 and m == 0) or small:
                new_frontier.append((graph, depth))
                continue
            cand = select_best_site(graph)
            trace[cand.rule.name] += 1
            for term in apply_rule(graph, cand):
                new_frontier.append((term, depth + 1))
            expanded = True
        frontier = new_frontier
        if not expanded:
            break
    return frontier, trace


def _contract_branch(args):
    graph_state, depth, cfg_tuple, deadline_offset = args
    cfg = ContractConfig(*cfg_tuple)
    g = _unfreeze(graph_state)
    deadline = None
    if deadline_offset is not None:
        deadline = time.monotonic() + deadline_offset
    run = _Run(cfg, deadline)
    value = run.contract(g, depth)
    return value.to_tuple(), _stats_tuple(run.stats)


def _freeze(g: SimpGraph):
    return (
        {v: (p.numerator, p.denominator) for v, p in g.phase.items()},
        {v: dict(ws) for v, ws in g.adj.items()},
        frozenset(g.boundary),
        g.scalar.to_tuple(),
        g._next,
    )


def _unfreeze(state) -> SimpGraph:
    from fractions import Fraction

    g = SimpGraph()
    phases, adj, boundary, scal, nxt = state
    for v, (num, den) in phases.items():
        g.phase[v] = Fraction(num, den)
    g.adj = {v: dict(ws) for v, ws in adj.items()}
    g.boundary = set(boundary)
    g.scalar = ScalarExact.from_tuple(scal)
    g._next = nxt
    return g


def _stats_tuple(s: ContractionStats):
    return (s.terminal_terms, dict(s.decomposition_trace), s.max_depth,
            s.dense_fallbacks, s.endgame_terms)


def contract_parallel(d: Diagram, config: ContractConfig | None = None):
    cfg = config or ContractConfig()
    if cfg.workers <= 1:
        return contract(d, cfg)
    import multiprocessing as mp

    start = time.monotonic()
    g, stats = _prepare(d, cfg)
    frontier, front_trace = _expand_frontier(g, cfg, target=4 * cfg.workers)
    stats.decomposition_trace.update(front_trace)
    remaining = None
    if cfg.timeout is not None:
        remaining = cfg.timeout - (time.monotonic() - start)
        if remaining <= 0:
            raise ContractTimeout()
    cfg_tuple = (
        None,  # per-branch deadline passed separately
        1,
        cfg.star_rules,
        cfg.t_rules,
        cfg.endgame_max_vertices,
        cfg.endgame_max_rank,
    )
    jobs = [(_freeze(b), depth, cfg_tuple, remaining) for b, depth in frontier]
    total = ScalarExact.zero()
    ctx = mp.get_context("fork")
    with ctx.Pool(cfg.workers) as pool:
        for val_t, st in pool.map(_contract_branch, jobs):
            total = total + ScalarExact.from_tuple(val_t)
            stats.terminal_terms += st[0]
            stats.decomposition_trace.update(st[1])
            stats.max_depth = max(stats.max_depth, st[2])
            stats.dense_fallbacks += st[3]
            stats.endgame_terms += st[4]
    stats.wall_time = time.monotonic() - start
    return total, stats


def default_workers() -> int:
    env = os.environ.get("STARZX_WORKERS")
    if env:
        return max(1, int(env))
    return 1
