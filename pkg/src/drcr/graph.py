"""Directed-graph model shared by every solver.

Links carry integer delay/cost values plus Srlg memberships.  Delays and
costs are unsigned integers so that pruning comparisons are exact; only the
Lagrangian machinery in :mod:`drcr.ksp` ever touches floating point.

Graph files are UTF-8 edge lists, one link per line::

    link_id,src,dst,cost,delay,srlg_ids

where ``srlg_ids`` is a ``;``-separated (possibly empty) list of integers.
Lines starting with ``#`` are comments.  Node names may be arbitrary strings
and are densified to ``0..n-1`` in order of first appearance.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Optional

INF = float("inf")

# Sum of delays (or costs) over every link must stay below this so that no
# simple-path accumulation can overflow 64-bit arithmetic downstream.
_SUM_LIMIT = 1 << 62


class GraphFormatError(ValueError):
    """Raised when a graph file or link table violates the format contract."""


@dataclass(frozen=True)
class Link:
    id: int
    src: int
    dst: int
    delay: int
    cost: int
    srlgs: frozenset[int] = frozenset()


@dataclass(frozen=True)
class Srlg:
    id: int
    links: frozenset[int]


@dataclass
class Network:
    """Immutable-after-construction directed multigraph.

    ``out_adj[u]`` / ``in_adj[u]`` hold link ids leaving / entering ``u``.
    ``srlgs`` maps Srlg id to the set of member links; membership is stored
    per-link and the table here is the inverted index.
    """

    num_nodes: int
    node_names: list[str]
    links: list[Link]
    out_adj: list[list[int]]
    in_adj: list[list[int]]
    srlgs: dict[int, Srlg]

    @classmethod
    def build(cls, num_nodes: int, links: Iterable[Link],
              node_names: Optional[list[str]] = None) -> "Network":
        links = list(links)
        if node_names is None:
            node_names = [str(i) for i in range(num_nodes)]
        out_adj: list[list[int]] = [[] for _ in range(num_nodes)]
        in_adj: list[list[int]] = [[] for _ in range(num_nodes)]
        total_delay = 0
        total_cost = 0
        for idx, link in enumerate(links):
            if link.id != idx:
                raise GraphFormatError(
                    f"link ids must be dense and ordered; got {link.id} at {idx}")
            if not (0 <= link.src < num_nodes and 0 <= link.dst < num_nodes):
                raise GraphFormatError(f"link {link.id}: endpoint out of range")
            if link.src == link.dst:
                raise GraphFormatError(
                    f"link {link.id}: self-loop {link.src}->{link.dst} rejected")
            if link.delay < 0 or link.cost < 0:
                raise GraphFormatError(f"link {link.id}: negative delay or cost")
            total_delay += link.delay
            total_cost += link.cost
            out_adj[link.src].append(link.id)
            in_adj[link.dst].append(link.id)
        if total_delay >= _SUM_LIMIT or total_cost >= _SUM_LIMIT:
            raise GraphFormatError("delay/cost totals risk 64-bit overflow")
        srlg_members: dict[int, set[int]] = {}
        for link in links:
            for r in link.srlgs:
                if r < 0:
                    raise GraphFormatError(f"link {link.id}: negative Srlg id")
                srlg_members.setdefault(r, set()).add(link.id)
        srlgs = {r: Srlg(r, frozenset(m)) for r, m in sorted(srlg_members.items())}
        return cls(num_nodes, node_names, links, out_adj, in_adj, srlgs)

    def node_id(self, name: str) -> int:
        return self.node_names.index(name)


@dataclass(frozen=True)
class Path:
    """An ordered link sequence with cached delay/cost sums."""

    links: tuple[int, ...]
    nodes: tuple[int, ...]
    delay: int
    cost: int

    @classmethod
    def from_links(cls, net: Network, link_ids: Iterable[int]) -> "Path":
        link_ids = tuple(link_ids)
        delay = 0
        cost = 0
        nodes: list[int] = []
        prev_dst: Optional[int] = None
        for lid in link_ids:
            if not 0 <= lid < len(net.links):
                raise GraphFormatError(f"unknown link id {lid}")
            link = net.links[lid]
            if prev_dst is not None and link.src != prev_dst:
                raise GraphFormatError(
                    f"links do not chain: ...->{prev_dst} then {link.src}->{link.dst}")
            if prev_dst is None:
                nodes.append(link.src)
            nodes.append(link.dst)
            prev_dst = link.dst
            delay += link.delay
            cost += link.cost
        return cls(link_ids, tuple(nodes), delay, cost)

    def __len__(self) -> int:
        return len(self.links)


def is_elementary(p: Path) -> bool:
    """True iff no node repeats along the path.  The empty path qualifies."""
    return len(set(p.nodes)) == len(p.nodes)


def srlgs_of_path(net: Network, p: Path) -> frozenset[int]:
    out: set[int] = set()
    for lid in p.links:
        if not 0 <= lid < len(net.links):
            raise GraphFormatError(f"unknown link id {lid}")
        out |= net.links[lid].srlgs
    return frozenset(out)


@dataclass
class ShortestTree:
    """Single-metric shortest-path tree.

    For a destination-rooted (reverse) tree, ``dist[u]`` is the least metric
    over all u->root paths and ``next_hop[u]`` the first link of one such
    path.  For a source-rooted (forward) tree, ``next_hop[u]`` is the link
    entering ``u`` on a shortest root->u path.
    """

    root: int
    metric: str  # "delay" | "cost"
    reverse: bool
    dist: list[float]
    next_hop: list[int]  # link id, -1 where unreachable / at root

    def path_from(self, net: Network, u: int) -> Optional[Path]:
        """Reconstruct the tree path between ``u`` and the root."""
        if self.dist[u] == INF:
            return None
        ids: list[int] = []
        node = u
        while node != self.root:
            lid = self.next_hop[node]
            ids.append(lid)
            link = net.links[lid]
            node = link.dst if self.reverse else link.src
        if not self.reverse:
            ids.reverse()
        return Path.from_links(net, ids)


def _metric_value(link: Link, metric: str) -> int:
    return link.delay if metric == "delay" else link.cost


def _dijkstra_tree(net: Network, root: int, metric: str, reverse: bool,
                   disabled: Optional[set[int]] = None) -> ShortestTree:
    if not 0 <= root < net.num_nodes:
        raise ValueError(f"node {root} out of range")
    n = net.num_nodes
    dist: list[float] = [INF] * n
    next_hop = [-1] * n
    dist[root] = 0
    heap: list[tuple[int, int]] = [(0, root)]
    done = [False] * n
    adj = net.in_adj if reverse else net.out_adj
    links = net.links
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for lid in adj[u]:
            if disabled is not None and lid in disabled:
                continue
            link = links[lid]
            v = link.src if reverse else link.dst
            nd = d + _metric_value(link, metric)
            if nd < dist[v]:
                dist[v] = nd
                next_hop[v] = lid
                heapq.heappush(heap, (nd, v))
    return ShortestTree(root, metric, reverse, dist, next_hop)


def build_reverse_tree(net: Network, t: int, metric: str,
                       disabled: Optional[set[int]] = None) -> ShortestTree:
    """Destination-rooted shortest tree: dist[u] = min metric over u->t paths."""
    return _dijkstra_tree(net, t, metric, reverse=True, disabled=disabled)


def build_forward_tree(net: Network, s: int, metric: str,
                       disabled: Optional[set[int]] = None) -> ShortestTree:
    """Source-rooted shortest tree: dist[u] = min metric over s->u paths."""
    return _dijkstra_tree(net, s, metric, reverse=False, disabled=disabled)


def load_network(text: str) -> Network:
    """Parse the edge-list format described in the module docstring."""
    name_to_id: dict[str, int] = {}
    links: list[Link] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 6:
            raise GraphFormatError(
                f"line {lineno}: expected 6 comma-separated fields, got {len(parts)}")
        try:
            link_id = int(parts[0])
            cost = int(parts[3])
            delay = int(parts[4])
        except ValueError as exc:
            raise GraphFormatError(f"line {lineno}: {exc}") from None
        if link_id != len(links):
            raise GraphFormatError(
                f"line {lineno}: link ids must run 0,1,2,... (got {link_id})")
        src_name, dst_name = parts[1], parts[2]
        for name in (src_name, dst_name):
            if name not in name_to_id:
                name_to_id[name] = len(name_to_id)
        srlg_field = parts[5].strip()
        srlgs: frozenset[int] = frozenset()
        if srlg_field:
            try:
                srlgs = frozenset(int(tok) for tok in srlg_field.split(";") if tok != "")
            except ValueError:
                raise GraphFormatError(
                    f"line {lineno}: bad Srlg list {srlg_field!r}") from None
        links.append(Link(link_id, name_to_id[src_name], name_to_id[dst_name],
                          delay, cost, srlgs))
    names = [""] * len(name_to_id)
    for name, idx in name_to_id.items():
        names[idx] = name
    try:
        return Network.build(len(names), links, names)
    except GraphFormatError:
        raise


def dump_network(net: Network) -> str:
    """Inverse of :func:`load_network` (modulo comments)."""
    lines = []
    for link in net.links:
        srlgs = ";".join(str(r) for r in sorted(link.srlgs))
        lines.append(f"{link.id},{net.node_names[link.src]},{net.node_names[link.dst]},"
                     f"{link.cost},{link.delay},{srlgs}")
    return "\n".join(lines) + "\n"
