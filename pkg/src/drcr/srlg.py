"""Srlg-disjoint DRCR: conflict-set discovery and divide-and-conquer solver.

The solver maintains a FIFO queue of sub-instances ``(include, exclude)``
over an extended Srlg universe: non-negative ids are the network's real
Srlgs, while ``-(link_id + 1)`` denotes the synthetic single-link group used
when no informative conflict set exists.  Excluding a synthetic group simply
disables its link; including one forces the link onto the active path.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .graph import (
    INF,
    Network,
    Path,
    build_reverse_tree,
    is_elementary,
    srlgs_of_path,
)
from .pulse import SearchStats, ldf_order, run_pulse_search


@dataclass(frozen=True)
class SrlgDrcrQuery:
    src: int
    dst: int
    U: int
    delta: int

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("src and dst must differ")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")


@dataclass(frozen=True)
class SubInstance:
    include: frozenset[int]
    exclude: frozenset[int]

    def __post_init__(self):
        if self.include & self.exclude:
            raise ValueError("include and exclude overlap")


@dataclass(frozen=True)
class ConflictSet:
    srlgs: frozenset[int]


@dataclass(frozen=True)
class PathPair:
    active: Path
    backup: Path

    def is_valid(self, net: Network, U: int, delta: int) -> bool:
        """Recompute every invariant from raw links."""
        a, b = self.active, self.backup
        if not (is_elementary(a) and is_elementary(b)):
            return False
        if srlgs_of_path(net, a) & srlgs_of_path(net, b):
            return False
        if a.delay > U:
            return False
        return a.delay - delta <= b.delay <= min(U, a.delay + delta)


@dataclass
class CoseStats:
    status: str = "infeasible"
    subinstances: int = 0
    conflict_sets_found: int = 0
    iterations: int = 0
    elapsed_us: int = 0
    conflict_sets: list["ConflictSet"] = field(default_factory=list)


def _links_of_srlgs(net: Network, srlg_ids) -> set[int]:
    """Resolve extended Srlg ids to their member links."""
    out: set[int] = set()
    for r in srlg_ids:
        if r < 0:
            out.add(-r - 1)
        else:
            out |= net.srlgs[r].links
    return out


def backup_search(net: Network, active: Path, U: int, delta: int,
                  time_limit: Optional[float] = None) -> Optional[Path]:
    """First feasible Srlg-disjoint companion for ``active``, or None.

    Runs on the subgraph with every link of the active path's Srlgs removed,
    over the delay window ``[max(0, d_a - delta), min(U, d_a + delta)]``.
    Cost is irrelevant here so the search stops at the first hit.
    """
    if active.delay > U:
        raise ValueError("active path already violates the delay bound")
    omega = srlgs_of_path(net, active)
    disabled = _links_of_srlgs(net, omega)
    s, t = active.nodes[0], active.nodes[-1]
    lo = max(0, active.delay - delta)
    hi = min(U, active.delay + delta)
    delay_tree = build_reverse_tree(net, t, "delay", disabled=disabled)
    if delay_tree.dist[s] > hi:
        return None
    egress = ldf_order(net, delay_tree, disabled=disabled)
    path, stats = run_pulse_search(
        net, s, t, lo, hi, delay_tree.dist, [0] * net.num_nodes, egress,
        first_feasible=True, time_limit=time_limit)
    return path


def find_conflict_set(net: Network, active: Path, U: int,
                      pick: str = "largest",
                      time_limit: Optional[float] = None,
                      stats: Optional[CoseStats] = None) -> Optional[ConflictSet]:
    """DFS over U-feasible paths, knocking out one shared Srlg per hit.

    Returns None as soon as an Srlg-disjoint U-feasible path shows up (no
    conflict set exists for ``active`` under the U-only relaxation).  If the
    search drains, the collected Srlgs are a certified conflict set: any
    path carrying all of them has no disjoint U-feasible companion.

    ``pick`` selects the shared Srlg per hit: ``largest`` takes the group
    with the most links (ties to the lowest id); ``first-link`` scans the
    active path and takes the largest group on its first conflicted link.
    """
    active_omega = srlgs_of_path(net, active)
    s, t = active.nodes[0], active.nodes[-1]
    delay_tree = build_reverse_tree(net, t, "delay")
    ddist = delay_tree.dist
    links = net.links
    egress = ldf_order(net, delay_tree)
    disabled: set[int] = set()
    found: list[int] = []
    deadline = None if time_limit is None else time.monotonic() + time_limit
    # entry: (node, delay, visited_mask, parent, link_id)
    stack = [(s, 0, 1 << s, None, -1)]
    iterations = 0
    while stack:
        iterations += 1
        if deadline is not None and iterations & 1023 == 0 \
                and time.monotonic() > deadline:
            raise SolverTimeout("conflict-set search timed out")
        entry = stack.pop()
        node, dly, vis, parent, lid = entry
        if disabled:
            e = entry
            hit = False
            while e is not None:
                if e[4] in disabled:
                    hit = True
                    break
                e = e[3]
            if hit:
                continue
        if node == t:
            if dly <= U:
                path_omega: set[int] = set()
                e = entry
                while e is not None:
                    if e[4] >= 0:
                        path_omega |= links[e[4]].srlgs
                    e = e[3]
                inter = path_omega & active_omega
                if not inter:
                    if stats is not None:
                        stats.iterations += iterations
                    return None
                r = _pick_srlg(net, active, inter, pick)
                disabled |= net.srlgs[r].links
                found.append(r)
            continue
        if dly + ddist[node] > U:
            continue
        for to, d_e, _c_e, elid in egress[node]:
            if elid not in disabled and not vis >> to & 1:
                stack.append((to, dly + d_e, vis | (1 << to), entry, elid))
    if stats is not None:
        stats.iterations += iterations
    return ConflictSet(frozenset(found))


def _pick_srlg(net: Network, active: Path, candidates: set[int], pick: str) -> int:
    if pick == "first-link":
        for lid in active.links:
            shared = net.links[lid].srlgs & candidates
            if shared:
                candidates = shared
                break
    elif pick != "largest":
        raise ValueError(f"unknown Srlg pick strategy {pick!r}")
    return max(candidates, key=lambda r: (len(net.srlgs[r].links), -r))


class SolverTimeout(Exception):
    pass


def ap_pulse_plus(net: Network, src: int, dst: int, U: int,
                  instance: SubInstance,
                  conflicts: list[ConflictSet],
                  tmp_min: float = INF,
                  time_limit: Optional[float] = None,
                  stats: Optional[CoseStats] = None) -> Optional[Path]:
    """Min-cost active-path search under include/exclude/conflict constraints.

    Exclusions are applied up front by disabling their links.  Inclusion and
    conflict-avoidance are enforced at validation; conflict containment is
    additionally used as a cut on partial paths.  Only paths costing less
    than ``tmp_min`` are returned.
    """
    disabled = _links_of_srlgs(net, instance.exclude)
    delay_tree = build_reverse_tree(net, dst, "delay", disabled=disabled)
    if delay_tree.dist[src] > U:
        return None
    cost_tree = build_reverse_tree(net, dst, "cost", disabled=disabled)
    egress = ldf_order(net, delay_tree, disabled=disabled)

    # Only Srlgs named by the inclusion set or some conflict set need to be
    # tracked on partial paths; everything else cannot change a verdict.
    universe: set[int] = set(instance.include)
    for cs in conflicts:
        universe |= cs.srlgs
    bit_of = {r: i for i, r in enumerate(sorted(universe))}
    link_masks = [0] * len(net.links)
    for link in net.links:
        m = 0
        for r in link.srlgs:
            if r in bit_of:
                m |= 1 << bit_of[r]
        syn = -(link.id + 1)
        if syn in bit_of:
            m |= 1 << bit_of[syn]
        link_masks[link.id] = m
    include_mask = 0
    for r in instance.include:
        include_mask |= 1 << bit_of[r]
    conflict_masks = []
    for cs in conflicts:
        m = 0
        for r in cs.srlgs:
            m |= 1 << bit_of[r]
        conflict_masks.append(m)

    ddist = delay_tree.dist
    cdist = cost_tree.dist
    deadline = None if time_limit is None else time.monotonic() + time_limit
    best_entry = None
    iterations = 0
    # entry: (node, delay, cost, visited, parent, link_id, omega_mask)
    stack = [(src, 0, 0, 1 << src, None, -1, 0)]
    while stack:
        iterations += 1
        if deadline is not None and iterations & 1023 == 0 \
                and time.monotonic() > deadline:
            raise SolverTimeout("active-path search timed out")
        entry = stack.pop()
        node, dly, cst, vis, _parent, _lid, omega = entry
        if node == dst:
            if dly <= U and cst < tmp_min and omega & include_mask == include_mask \
                    and not any(omega & m == m for m in conflict_masks):
                tmp_min = cst
                best_entry = entry
            continue
        if dly + ddist[node] > U or cst + cdist[node] >= tmp_min:
            continue
        if any(omega & m == m for m in conflict_masks):
            continue
        for to, d_e, c_e, elid in egress[node]:
            if elid not in disabled and not vis >> to & 1:
                stack.append((to, dly + d_e, cst + c_e, vis | (1 << to),
                              entry, elid, omega | link_masks[elid]))
    if stats is not None:
        stats.iterations += iterations
    if best_entry is None:
        return None
    ids: list[int] = []
    e = best_entry
    while e is not None:
        if e[5] >= 0:
            ids.append(e[5])
        e = e[4]
    ids.reverse()
    return Path.from_links(net, ids)


def cose_pulse_plus(net: Network, q: SrlgDrcrQuery,
                    time_limit: Optional[float] = None,
                    first_pair: bool = False,
                    pick: str = "largest",
                    ) -> tuple[Optional[PathPair], CoseStats]:
    """Conflict-Srlg-exclusion divide-and-conquer over sub-instances.

    ``first_pair`` stops at the first feasible pair (feasibility testing,
    e.g. trap classification) instead of driving the active cost to the
    proven minimum.
    """
    stats = CoseStats()
    t0 = time.monotonic()
    deadline = None if time_limit is None else t0 + time_limit

    def remaining() -> Optional[float]:
        if deadline is None:
            return None
        return deadline - time.monotonic()

    queue: deque[SubInstance] = deque([SubInstance(frozenset(), frozenset())])
    seen = {(frozenset(), frozenset())}
    conflicts: list[ConflictSet] = []
    tmp_min: float = INF
    best: Optional[PathPair] = None
    try:
        while queue:
            if deadline is not None and time.monotonic() > deadline:
                raise SolverTimeout("instance queue not drained")
            inst = queue.popleft()
            stats.subinstances += 1
            active = ap_pulse_plus(net, q.src, q.dst, q.U, inst, conflicts,
                                   tmp_min, remaining(), stats)
            if active is None:
                continue
            backup = backup_search(net, active, q.U, q.delta, remaining())
            if backup is not None:
                tmp_min = active.cost
                best = PathPair(active, backup)
                if first_pair:
                    break
                continue
            cs = find_conflict_set(net, active, q.U, pick, remaining(), stats)
            if cs is not None:
                conflicts.append(cs)
                stats.conflict_sets_found += 1
                stats.conflict_sets.append(cs)
                branch = sorted(r for r in cs.srlgs if r not in inst.include)
            else:
                branch = [-(lid + 1) for lid in active.links
                          if -(lid + 1) not in inst.include]
            for i, r in enumerate(branch):
                child = SubInstance(inst.include | frozenset(branch[:i]),
                                    inst.exclude | {r})
                key = (child.include, child.exclude)
                if key not in seen:
                    seen.add(key)
                    queue.append(child)
    except SolverTimeout:
        stats.status = "timeout"
        stats.elapsed_us = int((time.monotonic() - t0) * 1e6)
        return best, stats
    stats.status = "optimal" if best is not None else "infeasible"
    stats.elapsed_us = int((time.monotonic() - t0) * 1e6)
    return best, stats
