"""K-shortest-paths baselines for DRCR and the Srlg-disjoint pair problem.

All five solvers enumerate loopless paths in non-decreasing weight with
Yen's algorithm and differ only in the weight function and the stopping
rule.  The Lagrangian variants combine cost and delay into
``w(e) = c(e) + lambda * d(e)`` with a dual-optimal multiplier chosen by
bisection, which typically terminates the enumeration far earlier than a
single-metric ordering.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from typing import Iterator, Optional

from .graph import INF, Network, Path
from .pulse import DrcrCase, DrcrQuery, classify_case
from .srlg import PathPair, SrlgDrcrQuery, backup_search


@dataclass(frozen=True)
class WeightFn:
    """Link weight selector: pure cost, pure delay, or cost + lambda * delay."""

    kind: str  # "cost" | "delay" | "lagrangian"
    lam: float = 0.0

    @classmethod
    def cost(cls) -> "WeightFn":
        return cls("cost")

    @classmethod
    def delay(cls) -> "WeightFn":
        return cls("delay")

    @classmethod
    def lagrangian(cls, lam: float) -> "WeightFn":
        return cls("lagrangian", lam)

    def link_weights(self, net: Network) -> list[float]:
        if self.kind == "cost":
            return [link.cost for link in net.links]
        if self.kind == "delay":
            return [link.delay for link in net.links]
        if self.kind == "lagrangian":
            return [link.cost + self.lam * link.delay for link in net.links]
        raise ValueError(f"unknown weight kind {self.kind!r}")

    def path_weight(self, p: Path) -> float:
        if self.kind == "cost":
            return p.cost
        if self.kind == "delay":
            return p.delay
        return p.cost + self.lam * p.delay


@dataclass
class KspStats:
    status: str = "infeasible"  # optimal | infeasible | timeout
    iterations: int = 0
    lambda_value: Optional[float] = None
    elapsed_us: int = 0


def _dijkstra_masked(net: Network, s: int, t: int, weights: list[float],
                     banned_nodes: frozenset[int],
                     banned_links: frozenset[int],
                     ) -> Optional[tuple[list[int], float]]:
    """Min-weight s->t path avoiding the banned nodes and links."""
    n = net.num_nodes
    dist = [INF] * n
    via = [-1] * n
    dist[s] = 0.0
    heap: list[tuple[float, int]] = [(0.0, s)]
    done = [False] * n
    links = net.links
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        if u == t:
            break
        done[u] = True
        for lid in net.out_adj[u]:
            if lid in banned_links:
                continue
            link = links[lid]
            v = link.dst
            if v in banned_nodes:
                continue
            nd = d + weights[lid]
            if nd < dist[v]:
                dist[v] = nd
                via[v] = lid
                heapq.heappush(heap, (nd, v))
    if dist[t] == INF:
        return None
    ids: list[int] = []
    node = t
    while node != s:
        lid = via[node]
        ids.append(lid)
        node = links[lid].src
    ids.reverse()
    return ids, dist[t]


def yen_ksp(net: Network, s: int, t: int, w: WeightFn) -> Iterator[Path]:
    """Loopless s->t paths in non-decreasing weight, lazily.

    Multigraph-aware: spur bans remove the specific deviating links, not the
    whole node pair, so parallel links yield distinct paths.
    """
    weights = w.link_weights(net)
    if weights and min(weights) < -1e-12:
        raise ValueError("negative link weight")
    first = _dijkstra_masked(net, s, t, weights, frozenset(), frozenset())
    if first is None:
        return
    emitted: list[tuple[int, ...]] = []
    candidates: list[tuple[float, tuple[int, ...]]] = []
    seen: set[tuple[int, ...]] = {tuple(first[0])}
    links = net.links
    current: Optional[tuple[list[int], float]] = first
    while current is not None:
        cur_links, _cur_w = current
        emitted.append(tuple(cur_links))
        yield Path.from_links(net, cur_links)
        nodes = [s] + [links[lid].dst for lid in cur_links]
        root_w = 0.0
        for i in range(len(cur_links)):
            spur = nodes[i]
            root = cur_links[:i]
            banned_links = set()
            for p in emitted:
                if len(p) > i and list(p[:i]) == root:
                    banned_links.add(p[i])
            banned_nodes = frozenset(nodes[:i])
            res = _dijkstra_masked(net, spur, t, weights, banned_nodes,
                                   frozenset(banned_links))
            if res is not None:
                cand = tuple(root + res[0])
                if cand not in seen:
                    seen.add(cand)
                    heapq.heappush(candidates, (root_w + res[1], cand))
            root_w += weights[cur_links[i]]
        if candidates:
            wt, cand = heapq.heappop(candidates)
            current = (list(cand), wt)
        else:
            current = None


def _finish(stats: KspStats, t0: float, status: str) -> KspStats:
    stats.status = status
    stats.elapsed_us = int((time.monotonic() - t0) * 1e6)
    return stats


def cost_ksp_drcr(net: Network, q: DrcrQuery,
                  time_limit: Optional[float] = None,
                  ) -> tuple[Optional[Path], KspStats]:
    """First delay-range-feasible path in cost order is optimal."""
    stats = KspStats()
    t0 = time.monotonic()
    deadline = None if time_limit is None else t0 + time_limit
    for path in yen_ksp(net, q.src, q.dst, WeightFn.cost()):
        stats.iterations += 1
        if deadline is not None and time.monotonic() > deadline:
            return None, _finish(stats, t0, "timeout")
        if q.L <= path.delay <= q.U:
            return path, _finish(stats, t0, "optimal")
    return None, _finish(stats, t0, "infeasible")


def delay_ksp_drcr(net: Network, q: DrcrQuery,
                   time_limit: Optional[float] = None,
                   ) -> tuple[Optional[Path], KspStats]:
    """Enumerate in delay order up to U, keep the cheapest in-range path."""
    stats = KspStats()
    t0 = time.monotonic()
    deadline = None if time_limit is None else t0 + time_limit
    best: Optional[Path] = None
    for path in yen_ksp(net, q.src, q.dst, WeightFn.delay()):
        stats.iterations += 1
        if deadline is not None and time.monotonic() > deadline:
            return best, _finish(stats, t0, "timeout")
        if path.delay > q.U:
            break
        if path.delay >= q.L and (best is None or path.cost < best.cost):
            best = path
    return best, _finish(stats, t0, "optimal" if best else "infeasible")


@dataclass(frozen=True)
class LambdaResult:
    """Dual multiplier selection outcome.

    ``subcase`` records which bound was binding: "upper" when only the delay
    ceiling binds (lambda >= 0), "lower-interior" / "lower-boundary" when
    the floor binds (lambda < 0, interior maximum vs the -mu endpoint).
    ``degenerate`` flags mu = 0 at the boundary, where the dual bound
    collapses and lambda falls back to 0.
    """

    lambda_star: float
    g_value: float
    subcase: str
    mu: float
    degenerate: bool = False


# Bisection control: stop on relative bracket width or after this many steps.
_BISECT_STEPS = 64
_BISECT_TOL = 1e-6


def _min_weight_delay(net: Network, s: int, t: int, lam: float,
                      ) -> tuple[float, int]:
    """Weight and delay of a min-(c + lam*d)-weight s->t path."""
    weights = [link.cost + lam * link.delay for link in net.links]
    res = _dijkstra_masked(net, s, t, weights, frozenset(), frozenset())
    if res is None:
        return INF, 0
    path = Path.from_links(net, res[0])
    return path.cost + lam * path.delay, path.delay


def _dual_value(w: float, lam: float, L: int, U: int) -> float:
    return w - max(lam * L, lam * U)


def _bisect_lambda(net: Network, s: int, t: int, L: int, U: int,
                   lo: float, hi: float, threshold: int,
                   ) -> tuple[float, float]:
    """Maximize the dual over [lo, hi] given d(lo-opt) > threshold >= d(hi-opt).

    The dual is concave with subgradient d(min-weight path) - threshold, so
    bisection on the subgradient sign brackets the maximizer.
    """
    best_g = -INF
    best_lam = lo
    for lam in (lo, hi):
        w, _d = _min_weight_delay(net, s, t, lam)
        g = _dual_value(w, lam, L, U)
        if g > best_g:
            best_g, best_lam = g, lam
    for _ in range(_BISECT_STEPS):
        if hi - lo < _BISECT_TOL * (1.0 + abs(lo) + abs(hi)):
            break
        mid = (lo + hi) / 2.0
        w, d = _min_weight_delay(net, s, t, mid)
        g = _dual_value(w, mid, L, U)
        if g > best_g:
            best_g, best_lam = g, mid
        if d > threshold:
            lo = mid
        else:
            hi = mid
    return best_lam, best_g


def choose_lambda(net: Network, q: DrcrQuery) -> LambdaResult:
    """Pick the multiplier maximizing the concave dual bound.

    When the ceiling binds, lambda lives in [0, total_cost + 1]: at the top
    of that bracket any unit of delay outweighs any cost difference, so the
    min-delay path is min-weight.  When the floor binds, lambda is negative
    but bounded below by -mu (mu the minimum cost/delay ratio) to keep every
    link weight non-negative.
    """
    case, _ = classify_case(net, q)
    if case in (DrcrCase.DEGENERATED, DrcrCase.NON_TRIVIAL_4):
        big = sum(link.cost for link in net.links) + 1.0
        lam, g = _bisect_lambda(net, q.src, q.dst, q.L, q.U, 0.0, big, q.U)
        return LambdaResult(lam, g, "upper", 0.0)
    if case is not DrcrCase.NON_TRIVIAL_6:
        raise ValueError(f"no binding delay bound to relax ({case.name})")
    ratios = [link.cost / link.delay for link in net.links if link.delay > 0]
    if not ratios:
        raise ValueError("all links have zero delay")
    mu = min(ratios)
    w, d = _min_weight_delay(net, q.src, q.dst, -mu)
    if d > q.L:
        lam, g = _bisect_lambda(net, q.src, q.dst, q.L, q.U, -mu, 0.0, q.L)
        return LambdaResult(lam, g, "lower-interior", mu)
    if mu == 0.0:
        return LambdaResult(0.0, _dual_value(w, 0.0, q.L, q.U),
                            "lower-boundary", mu, degenerate=True)
    return LambdaResult(-mu, _dual_value(w, -mu, q.L, q.U), "lower-boundary", mu)


# Float weights can undershoot the exact stopping bound; an extra emission
# or two is harmless, skipping the optimum is not.
_STOP_SLACK = 1e-9


def lagrangian_ksp_drcr(net: Network, q: DrcrQuery,
                        time_limit: Optional[float] = None,
                        ) -> tuple[Optional[Path], KspStats]:
    """Enumerate in dual-weight order, stop once no cheaper path can follow.

    A path of weight w costs at least w - max{lambda*L, lambda*U} if its
    delay is in range, so the enumeration halts as soon as the next weight
    reaches incumbent_cost + max{lambda*L, lambda*U}.
    """
    stats = KspStats()
    t0 = time.monotonic()
    deadline = None if time_limit is None else t0 + time_limit
    case, ready = classify_case(net, q)
    if case is DrcrCase.INFEASIBLE:
        return None, _finish(stats, t0, "infeasible")
    if ready is not None:
        stats.lambda_value = 0.0
        return ready, _finish(stats, t0, "optimal")
    sel = choose_lambda(net, q)
    lam = sel.lambda_star
    stats.lambda_value = lam
    w = WeightFn.lagrangian(lam)
    offset = max(lam * q.L, lam * q.U)
    best: Optional[Path] = None
    for path in yen_ksp(net, q.src, q.dst, w):
        stats.iterations += 1
        if deadline is not None and time.monotonic() > deadline:
            return best, _finish(stats, t0, "timeout")
        if best is not None and w.path_weight(path) >= best.cost + offset + _STOP_SLACK:
            break
        if q.L <= path.delay <= q.U and (best is None or path.cost < best.cost):
            best = path
    return best, _finish(stats, t0, "optimal" if best else "infeasible")


def srlg_ksp_drcr(net: Network, q: SrlgDrcrQuery, order: str = "cost",
                  time_limit: Optional[float] = None,
                  ) -> tuple[Optional[PathPair], KspStats]:
    """Try actives in cost (or delay) order until one admits a backup."""
    if order not in ("cost", "delay"):
        raise ValueError(f"unknown enumeration order {order!r}")
    stats = KspStats()
    t0 = time.monotonic()
    deadline = None if time_limit is None else t0 + time_limit
    w = WeightFn.cost() if order == "cost" else WeightFn.delay()
    for active in yen_ksp(net, q.src, q.dst, w):
        stats.iterations += 1
        if deadline is not None and time.monotonic() > deadline:
            return None, _finish(stats, t0, "timeout")
        if active.delay > q.U:
            if order == "delay":
                break
            continue
        remaining = None if deadline is None else deadline - time.monotonic()
        backup = backup_search(net, active, q.U, q.delta, remaining)
        if backup is not None:
            return PathPair(active, backup), _finish(stats, t0, "optimal")
    return None, _finish(stats, t0, "infeasible")


def srlg_lagrangian_ksp(net: Network, q: SrlgDrcrQuery,
                        time_limit: Optional[float] = None,
                        ) -> tuple[Optional[PathPair], KspStats]:
    """Dual-ordered active enumeration with deferred backup checks.

    Delay-feasible actives are parked in a cost-keyed heap; a backup search
    runs only once the heap minimum is provably the cheapest active still
    outstanding (its cost plus lambda*U is at most the next dual weight).
    """
    stats = KspStats()
    t0 = time.monotonic()
    deadline = None if time_limit is None else t0 + time_limit
    big = sum(link.cost for link in net.links) + 1.0
    w0, d0 = _min_weight_delay(net, q.src, q.dst, 0.0)
    if w0 == INF:
        return None, _finish(stats, t0, "infeasible")
    if d0 <= q.U:
        lam = 0.0
    else:
        lam, _g = _bisect_lambda(net, q.src, q.dst, 0, q.U, 0.0, big, q.U)
    stats.lambda_value = lam
    w = WeightFn.lagrangian(lam)
    gen = yen_ksp(net, q.src, q.dst, w)
    heap: list[tuple[int, int, Path]] = []
    counter = 0
    nxt: Optional[Path] = next(gen, None)
    while True:
        if deadline is not None and time.monotonic() > deadline:
            return None, _finish(stats, t0, "timeout")
        nxt_w = None if nxt is None else w.path_weight(nxt)
        while heap and (nxt_w is None
                        or heap[0][0] + lam * q.U <= nxt_w + _STOP_SLACK):
            _cost, _n, active = heapq.heappop(heap)
            remaining = None if deadline is None else deadline - time.monotonic()
            backup = backup_search(net, active, q.U, q.delta, remaining)
            if backup is not None:
                return PathPair(active, backup), _finish(stats, t0, "optimal")
            if deadline is not None and time.monotonic() > deadline:
                return None, _finish(stats, t0, "timeout")
        if nxt is None:
            return None, _finish(stats, t0, "infeasible")
        stats.iterations += 1
        if nxt.delay <= q.U:
            counter += 1
            heapq.heappush(heap, (nxt.cost, counter, nxt))
        nxt = next(gen, None)
