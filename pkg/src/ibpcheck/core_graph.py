"""Undirected multigraph core: paths, blocks, and minor operations.

Networks are undirected connected multigraphs with named parallel edges,
no loops, and a list of origin-destination (OD) terminal pairs.  All values
are immutable; every operation returns fresh objects, so everything here is
safe to call from multiple threads.

Path enumeration is exhaustive by design: the networks this package targets
are desk-scale, and a configurable cap (default 10,000 paths) converts the
worst-case exponential blowup into an explicit error.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import (
    EdgeNotFound,
    GraphOperationError,
    InvalidNetwork,
    NoPath,
    PathCapExceeded,
    TerminalMergeForbidden,
)

DEFAULT_PATH_CAP = 10_000

Path = tuple[str, ...]  # ordered edge-id sequence


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph with edge ids, parallel edges, and OD pairs.

    A path is an edge-id sequence, never a vertex sequence: with parallel
    edges only the ids disambiguate which copy a path uses.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (edge id, endpoint, endpoint)
    od_pairs: tuple[tuple[str, str], ...]

    def __init__(
        self,
        vertices: Iterable[str],
        edges: Iterable[Sequence[str]],
        od_pairs: Iterable[Sequence[str]],
    ):
        object.__setattr__(self, "vertices", tuple(sorted(set(vertices))))
        object.__setattr__(
            self, "edges", tuple((str(e[0]), str(e[1]), str(e[2])) for e in edges)
        )
        object.__setattr__(
            self, "od_pairs", tuple((str(p[0]), str(p[1])) for p in od_pairs)
        )
        self._check_structure()

    def _check_structure(self) -> None:
        vertex_set = set(self.vertices)
        seen_ids = set()
        for eid, u, v in self.edges:
            if eid in seen_ids:
                raise InvalidNetwork(f"duplicate edge id {eid!r}")
            seen_ids.add(eid)
            if u == v:
                raise InvalidNetwork(f"edge {eid!r} is a loop at {u!r}")
            if u not in vertex_set or v not in vertex_set:
                raise InvalidNetwork(f"edge {eid!r} has an unknown endpoint")
        for o, d in self.od_pairs:
            if o == d:
                raise InvalidNetwork(f"OD pair ({o!r}, {d!r}) has equal terminals")
            if o not in vertex_set or d not in vertex_set:
                raise InvalidNetwork(f"OD pair ({o!r}, {d!r}) names unknown vertices")

    # -- lookups -------------------------------------------------------------

    @cached_property
    def edge_map(self) -> dict[str, tuple[str, str]]:
        return {eid: (u, v) for eid, u, v in self.edges}

    @cached_property
    def edge_ids(self) -> frozenset[str]:
        return frozenset(self.edge_map)

    @cached_property
    def adjacency(self) -> dict[str, tuple[tuple[str, str], ...]]:
        """Per vertex: (edge id, other endpoint) sorted by edge id."""
        adj: dict[str, list[tuple[str, str]]] = {v: [] for v in self.vertices}
        for eid, u, v in self.edges:
            adj[u].append((eid, v))
            adj[v].append((eid, u))
        return {v: tuple(sorted(inc)) for v, inc in adj.items()}

    def endpoints(self, eid: str) -> tuple[str, str]:
        try:
            return self.edge_map[eid]
        except KeyError:
            raise EdgeNotFound(eid) from None

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    def parallel_ids(self, u: str, v: str) -> tuple[str, ...]:
        """Ids of all edges joining u and v, sorted."""
        pair = frozenset((u, v))
        return tuple(
            sorted(eid for eid, a, b in self.edges if frozenset((a, b)) == pair)
        )

    @property
    def terminals(self) -> frozenset[str]:
        return frozenset(v for pair in self.od_pairs for v in pair)

    def path_vertices(self, path: Path, start: str) -> tuple[str, ...]:
        """Vertex sequence of an edge path beginning at `start`."""
        seq = [start]
        for eid in path:
            u, v = self.endpoints(eid)
            if seq[-1] == u:
                seq.append(v)
            elif seq[-1] == v:
                seq.append(u)
            else:
                raise ValueError(f"edge {eid!r} does not continue the path")
        return tuple(seq)

    def induced(
        self, edge_subset: Iterable[str], od_pairs: Iterable[Sequence[str]]
    ) -> "MultiGraph":
        """Subgraph on an edge subset, keeping only incident vertices."""
        keep = set(edge_subset)
        edges = [e for e in self.edges if e[0] in keep]
        missing = keep - {e[0] for e in edges}
        if missing:
            raise EdgeNotFound(sorted(missing)[0])
        vertices = {u for _, u, v in edges} | {v for _, u, v in edges}
        return MultiGraph(vertices, edges, od_pairs)


# -- validation ----------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`; downstream operations need `ok`."""

    connected: bool
    loop_edges: tuple[str, ...]
    uncovered_edges: tuple[str, ...]
    uncovered_vertices: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (
            self.connected
            and not self.loop_edges
            and not self.uncovered_edges
            and not self.uncovered_vertices
        )


def connected_components(graph: MultiGraph) -> list[frozenset[str]]:
    seen: set[str] = set()
    comps = []
    for v in graph.vertices:
        if v in seen:
            continue
        comp = {v}
        queue = deque([v])
        while queue:
            cur = queue.popleft()
            for _, other in graph.adjacency[cur]:
                if other not in comp:
                    comp.add(other)
                    queue.append(other)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def validate(graph: MultiGraph, max_paths: int = DEFAULT_PATH_CAP) -> ValidationReport:
    """Report connectivity, loop-freeness, and OD-path coverage.

    Every edge and every vertex must lie on at least one simple OD path;
    violating elements are listed rather than raised so callers can render
    a full diagnosis.
    """
    covered_edges: set[str] = set()
    covered_vertices: set[str] = set()
    for o, d in graph.od_pairs:
        for path in enumerate_simple_paths(graph, o, d, max_paths=max_paths):
            covered_edges.update(path)
            covered_vertices.update(graph.path_vertices(path, o))
    return ValidationReport(
        connected=len(connected_components(graph)) <= 1,
        loop_edges=(),  # construction already rejects loops
        uncovered_edges=tuple(sorted(graph.edge_ids - covered_edges)),
        uncovered_vertices=tuple(sorted(set(graph.vertices) - covered_vertices)),
    )


# -- simple path enumeration ---------------------------------------------------


def enumerate_simple_paths(
    graph: MultiGraph,
    s: str,
    t: str,
    allowed_edges: Optional[Iterable[str]] = None,
    max_paths: int = DEFAULT_PATH_CAP,
) -> tuple[Path, ...]:
    """All simple s-t paths as edge-id sequences, lexicographically ordered.

    `allowed_edges` restricts the usable edge set (information sets, blocks).
    Raises PathCapExceeded once more than `max_paths` paths are found.
    """
    if s == t:
        raise ValueError("path enumeration requires distinct endpoints")
    allowed = graph.edge_ids if allowed_edges is None else frozenset(allowed_edges)
    if s not in graph.adjacency or t not in graph.adjacency:
        return ()

    paths: list[Path] = []
    path: list[str] = []
    visited = {s}

    def walk(v: str) -> None:
        for eid, other in graph.adjacency[v]:  # sorted by edge id -> lex order
            if eid not in allowed or other in visited:
                continue
            path.append(eid)
            if other == t:
                if len(paths) >= max_paths:
                    raise PathCapExceeded(max_paths)
                paths.append(tuple(path))
            else:
                visited.add(other)
                walk(other)
                visited.remove(other)
            path.pop()

    walk(s)
    return tuple(paths)


# -- OD subnetworks ------------------------------------------------------------


@dataclass(frozen=True)
class Subnetwork:
    """The single-OD network spanned by all terminal-to-terminal paths."""

    parent: MultiGraph
    edge_subset: frozenset[str]
    terminal_pair: tuple[str, str]
    max_paths: int = field(default=DEFAULT_PATH_CAP, compare=False)

    @cached_property
    def graph(self) -> MultiGraph:
        return self.parent.induced(self.edge_subset, [self.terminal_pair])

    @cached_property
    def paths(self) -> tuple[Path, ...]:
        o, d = self.terminal_pair
        return enumerate_simple_paths(
            self.parent, o, d, self.edge_subset, max_paths=self.max_paths
        )

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.graph.vertices


def od_subnetwork(
    graph: MultiGraph, i: int, max_paths: int = DEFAULT_PATH_CAP
) -> Subnetwork:
    """Union of all simple o_i-d_i paths, as a terminal-marked subnetwork."""
    o, d = graph.od_pairs[i]
    paths = enumerate_simple_paths(graph, o, d, max_paths=max_paths)
    if not paths:
        raise NoPath(f"terminals {o!r} and {d!r} are disconnected")
    edges = frozenset(eid for p in paths for eid in p)
    return Subnetwork(
        parent=graph, edge_subset=edges, terminal_pair=(o, d), max_paths=max_paths
    )


# -- biconnected decomposition ---------------------------------------------------


@dataclass(frozen=True)
class Block:
    id: int
    edges: frozenset[str]


@dataclass(frozen=True)
class ChainLink:
    """One block of an OD chain together with its induced terminal pair."""

    block_id: int
    origin: str
    destination: str


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[Block, ...]
    cut_vertices: frozenset[str]
    chains: tuple[tuple[ChainLink, ...], ...]  # per OD index

    def block_edges(self, block_id: int) -> frozenset[str]:
        return self.blocks[block_id].edges


def _biconnected(graph: MultiGraph) -> tuple[list[frozenset[str]], set[str]]:
    """Hopcroft-Tarjan on a multigraph; parallel edges share one block.

    Only the entering edge id is skipped at each vertex, so a second parallel
    edge back to the parent correctly acts as a back edge.
    """
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    estack: list[str] = []
    blocks: list[frozenset[str]] = []
    cuts: set[str] = set()
    counter = 0

    for root in graph.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        root_children = 0
        stack: list[tuple[str, Optional[str], Iterable]] = [
            (root, None, iter(graph.adjacency[root]))
        ]
        while stack:
            v, in_edge, it = stack[-1]
            step = next(it, None)
            if step is None:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] >= disc[u]:
                        if u == root:
                            root_children += 1
                        else:
                            cuts.add(u)
                        block: set[str] = set()
                        while True:
                            eid = estack.pop()
                            block.add(eid)
                            if eid == in_edge:
                                break
                        blocks.append(frozenset(block))
                continue
            eid, w = step
            if eid == in_edge:
                continue
            if w not in disc:
                disc[w] = low[w] = counter
                counter += 1
                estack.append(eid)
                stack.append((w, eid, iter(graph.adjacency[w])))
            elif disc[w] < disc[v]:
                estack.append(eid)
                low[v] = min(low[v], disc[w])
        if root_children >= 2:
            cuts.add(root)
    return blocks, cuts


def _chain_of(sub: Subnetwork) -> list[tuple[frozenset[str], str, str]]:
    """Ordered block chain of a single-OD subnetwork with per-block terminals.

    Every OD subnetwork is a chain in its block-cut tree: each block lies on
    the unique tree path between the terminals, entered and left at distinct
    cut vertices.
    """
    o, d = sub.terminal_pair
    g = sub.graph
    blocks, cuts = _biconnected(g)
    if len(blocks) == 1:
        return [(blocks[0], o, d)]

    vertex_blocks: dict[str, list[int]] = {v: [] for v in g.vertices}
    block_vertices: list[set[str]] = []
    for bi, bl in enumerate(blocks):
        vs = {v for eid in bl for v in g.endpoints(eid)}
        block_vertices.append(vs)
        for v in vs:
            vertex_blocks[v].append(bi)

    # block-cut tree nodes: ("b", i) and ("c", v)
    def start_node(vertex: str):
        if vertex in cuts:
            return ("c", vertex)
        return ("b", vertex_blocks[vertex][0])

    adj: dict[tuple, list[tuple]] = {}
    for bi in range(len(blocks)):
        adj[("b", bi)] = []
    for v in cuts:
        adj[("c", v)] = []
    for v in cuts:
        for bi in vertex_blocks[v]:
            adj[("c", v)].append(("b", bi))
            adj[("b", bi)].append(("c", v))

    src, dst = start_node(o), start_node(d)
    prev: dict[tuple, tuple] = {src: src}
    queue = deque([src])
    while queue and dst not in prev:
        cur = queue.popleft()
        for nxt in adj[cur]:
            if nxt not in prev:
                prev[nxt] = cur
                queue.append(nxt)
    if dst not in prev:
        raise NoPath(f"block-cut tree disconnects {o!r} from {d!r}")
    node_path = [dst]
    while node_path[-1] != src:
        node_path.append(prev[node_path[-1]])
    node_path.reverse()

    chain = []
    entry = o
    for node in node_path:
        if node[0] != "b":
            continue
        bi = node[1]
        idx = node_path.index(node)
        if idx + 1 < len(node_path):
            leave = node_path[idx + 1][1]  # following cut vertex
        else:
            leave = d
        chain.append((blocks[bi], entry, leave))
        entry = leave
    return chain


def decompose_blocks(
    graph: MultiGraph, max_paths: int = DEFAULT_PATH_CAP
) -> BlockDecomposition:
    """Biconnected blocks of the whole graph plus the per-OD block chains.

    Chain blocks are blocks of the OD subnetwork; for validated graphs these
    coincide with blocks of the whole graph, which lets each chain link refer
    to a global block id.
    """
    global_blocks, cuts = _biconnected(graph)
    by_edges = {bl: i for i, bl in enumerate(global_blocks)}

    chains = []
    for i in range(len(graph.od_pairs)):
        sub = od_subnetwork(graph, i, max_paths=max_paths)
        links = []
        for edges, entry, leave in _chain_of(sub):
            if edges not in by_edges:
                raise InvalidNetwork(
                    f"OD {i} chain block {sorted(edges)} is not a block of the graph"
                )
            links.append(ChainLink(by_edges[edges], entry, leave))
        chains.append(tuple(links))

    return BlockDecomposition(
        blocks=tuple(Block(i, bl) for i, bl in enumerate(global_blocks)),
        cut_vertices=frozenset(cuts),
        chains=tuple(chains),
    )


# -- minor operations ------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingStep:
    """One edge deletion or contraction of a nice-embedding sequence."""

    kind: str  # "delete" | "contract"
    edge: str
    merged_vertex_name: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("delete", "contract"):
            raise ValueError(f"unknown step kind {self.kind!r}")
        if self.kind == "contract" and not self.merged_vertex_name:
            raise ValueError("contract steps need a merged vertex name")

    @staticmethod
    def delete(edge: str) -> "EmbeddingStep":
        return EmbeddingStep("delete", edge)

    @staticmethod
    def contract(edge: str, merged_vertex_name: str) -> "EmbeddingStep":
        return EmbeddingStep("contract", edge, merged_vertex_name)


def apply_embedding_step(graph: MultiGraph, step: EmbeddingStep) -> MultiGraph:
    """Delete or contract one edge, preserving OD terminal distinctness.

    Contraction re-homes any terminal sitting on the contracted edge to the
    merged vertex and refuses to merge the two terminals of a single OD pair.
    Parallel partners of a contracted edge would become loops, which the graph
    type forbids, so that contraction is rejected too.
    """
    u, v = graph.endpoints(step.edge)

    if step.kind == "delete":
        edges = [e for e in graph.edges if e[0] != step.edge]
        used = {w for _, a, b in edges for w in (a, b)}
        isolated = set(graph.vertices) - used
        if isolated & graph.terminals:
            raise GraphOperationError(
                f"deleting {step.edge!r} would isolate a terminal vertex"
            )
        return MultiGraph(used, edges, graph.od_pairs)

    # contract
    for o, d in graph.od_pairs:
        if {o, d} == {u, v}:
            raise TerminalMergeForbidden(
                f"contracting {step.edge!r} would merge OD pair ({o!r}, {d!r})"
            )
    if len(graph.parallel_ids(u, v)) > 1:
        raise GraphOperationError(
            f"contracting {step.edge!r} would turn a parallel edge into a loop"
        )
    name = step.merged_vertex_name
    assert name is not None
    if name in graph.vertices and name not in (u, v):
        raise GraphOperationError(f"merged vertex name {name!r} already in use")

    def rename(w: str) -> str:
        return name if w in (u, v) else w

    edges = [
        (eid, rename(a), rename(b)) for eid, a, b in graph.edges if eid != step.edge
    ]
    vertices = {rename(w) for w in graph.vertices}
    od_pairs = [(rename(o), rename(d)) for o, d in graph.od_pairs]
    return MultiGraph(vertices, edges, od_pairs)


def is_cycle(graph: MultiGraph, edge_subset: Optional[Iterable[str]] = None) -> bool:
    """True iff the (sub)graph is a single cycle.

    A pair of parallel edges counts as a degenerate 2-cycle; a single edge
    does not.
    """
    if edge_subset is None:
        edge_ids = graph.edge_ids
    else:
        edge_ids = frozenset(edge_subset)
    if len(edge_ids) < 2:
        return False
    degree: dict[str, int] = {}
    for eid in edge_ids:
        u, v = graph.endpoints(eid)
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    if len(edge_ids) != len(degree):
        return False
    if any(d != 2 for d in degree.values()):
        return False
    # degree-2 everywhere and |E| == |V|: connected iff one component
    start = next(iter(degree))
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for eid, other in graph.adjacency[cur]:
            if eid in edge_ids and other not in seen:
                seen.add(other)
                queue.append(other)
    return len(seen) == len(degree)
