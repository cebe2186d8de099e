"""Branch-and-bound solver for delay-range constrained routing.

The search is a depth-first stack walk over partial paths.  A branch is cut
when it can no longer beat the incumbent (optimality cut) or can no longer
reach the destination within the delay upper bound (feasibility cut).  No
dominance pruning is performed: with a delay lower bound a dominated prefix
can still complete into the only feasible path.  Visited nodes are tracked
per branch as an integer bitmask so only elementary paths are produced.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .graph import (
    INF,
    Network,
    Path,
    ShortestTree,
    build_reverse_tree,
)
from .costfn import CostFunction, compute_cost_functions


class DrcrCase(Enum):
    INFEASIBLE = 1
    DEGENERATED = 2
    TRIVIAL_MIN_COST = 3
    NON_TRIVIAL_4 = 4
    TRIVIAL_MIN_COST_5 = 5
    NON_TRIVIAL_6 = 6


@dataclass(frozen=True)
class DrcrQuery:
    src: int
    dst: int
    L: int
    U: int

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("src and dst must differ")
        if self.L > self.U:
            raise ValueError(f"empty delay range [{self.L}, {self.U}]")


@dataclass
class PulseOptions:
    ldf: bool = True
    joint_pruning: bool = False
    time_limit: Optional[float] = None  # seconds


@dataclass
class SearchStats:
    status: str = "infeasible"  # optimal | infeasible | timeout
    iterations: int = 0
    searched_fraction: float = 0.0
    best_cost_trace: list[tuple[int, int]] = field(default_factory=list)
    elapsed_us: int = 0
    cf_build_us: int = 0


def classify_case(net: Network, q: DrcrQuery,
                  delay_tree: Optional[ShortestTree] = None,
                  cost_tree: Optional[ShortestTree] = None,
                  ) -> tuple[DrcrCase, Optional[Path]]:
    """Map a query onto the six-way case split.

    Returns the min-cost path as the ready-made optimum for the two trivial
    cases where it already satisfies the delay range.
    """
    if not (0 <= q.src < net.num_nodes and 0 <= q.dst < net.num_nodes):
        raise ValueError("query endpoint out of range")
    if delay_tree is None:
        delay_tree = build_reverse_tree(net, q.dst, "delay")
    if cost_tree is None:
        cost_tree = build_reverse_tree(net, q.dst, "cost")
    d_min_delay = delay_tree.dist[q.src]
    if d_min_delay == INF or q.U < d_min_delay:
        return DrcrCase.INFEASIBLE, None
    min_cost_path = cost_tree.path_from(net, q.src)
    assert min_cost_path is not None
    d_min_cost = min_cost_path.delay
    if q.L <= d_min_delay:
        # Every path meets the lower bound.
        if d_min_cost <= q.U:
            return DrcrCase.TRIVIAL_MIN_COST, min_cost_path
        return DrcrCase.DEGENERATED, None
    if d_min_cost < q.L:
        return DrcrCase.NON_TRIVIAL_6, None
    if d_min_cost <= q.U:
        return DrcrCase.TRIVIAL_MIN_COST_5, min_cost_path
    return DrcrCase.NON_TRIVIAL_4, None


def ldf_order(net: Network, tree: ShortestTree,
              disabled: Optional[set[int]] = None) -> list[list[tuple[int, int, int, int]]]:
    """Per-node egress lists ``(dst, delay, cost, link_id)`` for LDF search.

    Lists ascend in ``w(e) = d(e) + d_min_delay(To(e) -> t)`` (ties by link
    id, unreachable heads last); pushing in this order onto a LIFO stack
    makes the largest-delay branch pop first.
    """
    dist = tree.dist
    order: list[list[tuple[int, int, int, int]]] = []
    for u in range(net.num_nodes):
        entries = []
        for lid in net.out_adj[u]:
            if disabled is not None and lid in disabled:
                continue
            link = net.links[lid]
            entries.append((link.delay + dist[link.dst], lid, link))
        entries.sort(key=lambda item: (item[0], item[1]))
        order.append([(link.dst, link.delay, link.cost, lid)
                      for _, lid, link in entries])
    return order


def natural_order(net: Network,
                  disabled: Optional[set[int]] = None) -> list[list[tuple[int, int, int, int]]]:
    """Egress lists in link-id order (the non-LDF baseline)."""
    order: list[list[tuple[int, int, int, int]]] = []
    for u in range(net.num_nodes):
        entries = []
        for lid in net.out_adj[u]:
            if disabled is not None and lid in disabled:
                continue
            link = net.links[lid]
            entries.append((link.dst, link.delay, link.cost, lid))
        order.append(entries)
    return order


def _rebuild_path(net: Network, entry) -> Path:
    ids: list[int] = []
    while entry is not None:
        node, dly, cst, vis, parent, lid = entry[:6]
        if lid >= 0:
            ids.append(lid)
        entry = parent
    ids.reverse()
    return Path.from_links(net, ids)


def run_pulse_search(net: Network, s: int, t: int, L: int, U: int,
                     delay_dist: list[float], cost_dist: list[float],
                     egress: list[list[tuple[int, int, int, int]]],
                     *,
                     tmp_min: float = INF,
                     first_feasible: bool = False,
                     cf: Optional[CostFunction] = None,
                     time_limit: Optional[float] = None,
                     stats: Optional[SearchStats] = None,
                     ) -> tuple[Optional[Path], SearchStats]:
    """Core stack search shared by the DRCR solver and the backup search.

    ``first_feasible`` pins the incumbent so the optimality cut stays off
    and the first validated path is returned (used for backup searches where
    cost is irrelevant).  ``cf`` switches the optimality cut to the joint
    delay-cost rule.
    """
    if stats is None:
        stats = SearchStats()
    t0 = time.monotonic()
    deadline = None if time_limit is None else t0 + time_limit
    best_entry = None
    searched = 0.0
    iterations = 0
    trace = stats.best_cost_trace
    # entry: (node, delay, cost, visited_mask, parent, link_id, s3)
    stack = [(s, 0, 0, 1 << s, None, -1, 1.0)]
    pop = stack.pop
    push = stack.append
    if cf is not None:
        cf_delays = cf.delays
        cf_costs = cf.costs
        from bisect import bisect_right
    timed_out = False
    while stack:
        iterations += 1
        if deadline is not None and iterations & 1023 == 0 \
                and time.monotonic() > deadline:
            timed_out = True
            break
        entry = pop()
        node, dly, cst, vis, _parent, _lid, s3 = entry
        if node == t:
            searched += s3
            if L <= dly <= U:
                if first_feasible:
                    best_entry = entry
                    break
                if cst < tmp_min:
                    tmp_min = cst
                    best_entry = entry
                    trace.append((iterations, cst))
            continue
        if dly + delay_dist[node] > U:
            searched += s3
            continue
        if cf is not None:
            budget = U - dly
            darr = cf_delays[node]
            idx = bisect_right(darr, budget)
            bound = INF if idx == 0 else cf_costs[node][idx - 1]
            if cst + bound >= tmp_min:
                searched += s3
                continue
        elif cst + cost_dist[node] >= tmp_min:
            searched += s3
            continue
        kids = []
        for to, d_e, c_e, lid in egress[node]:
            if not vis >> to & 1:
                kids.append((to, dly + d_e, cst + c_e, vis | (1 << to), entry, lid))
        k = len(kids)
        if k == 0:
            searched += s3
            continue
        child_s3 = s3 / k
        for kid in kids:
            push(kid + (child_s3,))
    stats.iterations += iterations
    stats.searched_fraction = min(searched, 1.0 + 1e-9)
    stats.elapsed_us += int((time.monotonic() - t0) * 1e6)
    if timed_out:
        stats.status = "timeout"
        path = _rebuild_path(net, best_entry) if best_entry is not None else None
        return path, stats
    if best_entry is None:
        stats.status = "infeasible"
        return None, stats
    stats.status = "optimal"
    return _rebuild_path(net, best_entry), stats


def pulse_plus(net: Network, q: DrcrQuery,
               opts: Optional[PulseOptions] = None,
               *,
               delay_tree: Optional[ShortestTree] = None,
               cost_tree: Optional[ShortestTree] = None,
               egress_order: Optional[list[list[tuple[int, int, int, int]]]] = None,
               ) -> tuple[Optional[Path], SearchStats]:
    """Solve a DRCR query to optimality (or prove infeasibility).

    Precomputed destination-rooted trees and egress orderings may be passed
    in so that batch runs against one destination amortise the Dijkstra and
    sort work.
    """
    if opts is None:
        opts = PulseOptions()
    if not (0 <= q.src < net.num_nodes and 0 <= q.dst < net.num_nodes):
        raise ValueError("query endpoint out of range")
    stats = SearchStats()
    t0 = time.monotonic()
    if delay_tree is None:
        delay_tree = build_reverse_tree(net, q.dst, "delay")
    if cost_tree is None:
        cost_tree = build_reverse_tree(net, q.dst, "cost")
    cf = None
    if opts.joint_pruning:
        cf_t0 = time.monotonic()
        cf = compute_cost_functions(net, q.src, q.dst, q.U)
        stats.cf_build_us = int((time.monotonic() - cf_t0) * 1e6)
    if egress_order is None:
        if opts.ldf:
            egress_order = ldf_order(net, delay_tree)
        else:
            egress_order = natural_order(net)
    remaining = None
    if opts.time_limit is not None:
        remaining = max(0.0, opts.time_limit - (time.monotonic() - t0))
    path, stats = run_pulse_search(
        net, q.src, q.dst, q.L, q.U, delay_tree.dist, cost_tree.dist,
        egress_order, cf=cf, time_limit=remaining, stats=stats)
    stats.elapsed_us = int((time.monotonic() - t0) * 1e6)
    return path, stats


def solve_drcr(net: Network, q: DrcrQuery,
               opts: Optional[PulseOptions] = None,
               *,
               delay_tree: Optional[ShortestTree] = None,
               cost_tree: Optional[ShortestTree] = None,
               egress_order=None) -> tuple[Optional[Path], SearchStats]:
    """Case-classify then dispatch: trivial cases bypass the search."""
    if delay_tree is None:
        delay_tree = build_reverse_tree(net, q.dst, "delay")
    if cost_tree is None:
        cost_tree = build_reverse_tree(net, q.dst, "cost")
    t0 = time.monotonic()
    case, ready = classify_case(net, q, delay_tree, cost_tree)
    if case is DrcrCase.INFEASIBLE:
        stats = SearchStats(status="infeasible",
                            elapsed_us=int((time.monotonic() - t0) * 1e6))
        return None, stats
    if ready is not None:
        stats = SearchStats(status="optimal", searched_fraction=1.0,
                            elapsed_us=int((time.monotonic() - t0) * 1e6))
        stats.best_cost_trace.append((0, ready.cost))
        return ready, stats
    return pulse_plus(net, q, opts, delay_tree=delay_tree, cost_tree=cost_tree,
                      egress_order=egress_order)
