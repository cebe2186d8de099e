"""Per-node delay-to-cost functions backing the joint pruning rule.

For each node ``u`` we keep a Pareto list of (delay-to-destination,
cost-to-destination) pairs over *walks* (node repetition allowed; the
relaxation is what makes the list cheap to compute and it still lower-bounds
every elementary completion).  Evaluating the list at a residual delay
budget gives the cheapest way to finish within that budget, which combined
with the accumulated cost yields a cut strictly at least as strong as the
plain min-cost-tree optimality cut.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass

from .graph import INF, Network, build_forward_tree


@dataclass(frozen=True)
class CostFunction:
    """Frozen Pareto lists: ``delays[u]`` ascending, ``costs[u]`` descending."""

    delays: list[list[int]]
    costs: list[list[int]]


def compute_cost_functions(net: Network, s: int, t: int, U: int) -> CostFunction:
    """Smallest-cost-first reverse search from ``t``.

    Branches are cut when dominated by an already-kept pair or when even the
    forward min-delay path from ``s`` cannot complete them within ``U``.
    Because pairs pop in non-decreasing cost order, dominance reduces to a
    single comparison against the most recent (smallest-delay) kept pair.
    """
    fwd = build_forward_tree(net, s, "delay")
    fwd_dist = fwd.dist
    n = net.num_nodes
    delays: list[list[int]] = [[] for _ in range(n)]
    costs: list[list[int]] = [[] for _ in range(n)]
    heap: list[tuple[int, int, int]] = [(0, 0, t)]
    # per-node ingress as flat (src, slack, delay, cost) rows, where slack
    # is the feasibility headroom U - min-delay(s -> src)
    ingress: list[list[tuple[int, float, int, int]]] = [[] for _ in range(n)]
    for link in net.links:
        ingress[link.dst].append(
            (link.src, U - fwd_dist[link.src], link.delay, link.cost))
    pop = heapq.heappop
    push = heapq.heappush
    while heap:
        cost, delay, u = pop(heap)
        dlist = delays[u]
        if dlist and dlist[-1] <= delay:
            continue
        dlist.append(delay)
        costs[u].append(cost)
        for v, slack, d_e, c_e in ingress[u]:
            new_delay = delay + d_e
            if new_delay <= slack:
                push(heap, (cost + c_e, new_delay, v))
    for u in range(n):
        delays[u].reverse()
        costs[u].reverse()
    return CostFunction(delays, costs)


def eval_cost_function(cf: CostFunction, u: int, budget: float) -> float:
    """Min cost over kept pairs with delay <= budget; INF if none qualify."""
    darr = cf.delays[u]
    idx = bisect_right(darr, budget)
    if idx == 0:
        return INF
    return cf.costs[u][idx - 1]


def joint_prune(delay: int, cost: int, cf: CostFunction, u: int, U: int,
                tmp_min: float) -> bool:
    """True iff the branch ending at ``u`` cannot beat the incumbent."""
    if delay > U:
        return True
    return cost + eval_cost_function(cf, u, U - delay) >= tmp_min
