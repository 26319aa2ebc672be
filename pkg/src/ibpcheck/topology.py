"""Single-OD network classes (SP / LI / SLI) and the IBP-freeness verdict.

A multi-OD network is immune to the informational Braess' paradox exactly
when every OD subnetwork is SLI and every block shared by two subnetworks is
either coincident (same terminal set in both) or a cycle.  This module
recognizes the single-OD classes and renders that verdict with a witness for
the failing condition.

SP recognition runs by terminal-aware series/parallel reduction; the literal
opposite-traversal definition is exposed separately as a (worst-case
exponential) cross-check oracle and for witness extraction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .core_graph import (
    DEFAULT_PATH_CAP,
    BlockDecomposition,
    MultiGraph,
    Path,
    Subnetwork,
    decompose_blocks,
    is_cycle,
    od_subnetwork,
    validate,
)
from .errors import InvalidNetwork, NotSingleOd, PreconditionNotSli

IBP_FREE = "ibp-free"
NOT_IBP_FREE = "not-ibp-free"

COINCIDENT = "coincident"
CYCLE = "cycle"
OTHER = "other"


# -- result types -------------------------------------------------------------


@dataclass(frozen=True)
class OppositeTraversal:
    """Two OD paths crossing one edge in opposite directions."""

    edge: str
    path_a: Path
    path_b: Path


@dataclass(frozen=True)
class PathWithoutPrivateEdge:
    path: Path


@dataclass(frozen=True)
class SingleOdClass:
    is_sp: bool
    is_li: bool
    is_sli: bool
    witness: Optional[object]  # OppositeTraversal | PathWithoutPrivateEdge

    def __post_init__(self):
        if self.is_li and not self.is_sli:
            raise AssertionError("LI network classified as non-SLI")
        if self.is_sli and not self.is_sp:
            raise AssertionError("SLI network classified as non-SP")


@dataclass(frozen=True)
class CommonBlockVerdict:
    block_id: int
    kind: str  # COINCIDENT | CYCLE | OTHER
    terminal_set_in_i: tuple[str, str]
    terminal_set_in_j: tuple[str, str]


@dataclass(frozen=True)
class PairwiseEntry:
    disjoint: bool
    verdicts: tuple[CommonBlockVerdict, ...]
    induced_matches: bool  # intersection edges == union of common blocks


@dataclass(frozen=True)
class FailureSite:
    condition: str  # "sli" | "common-block"
    od_index: Optional[int] = None
    od_pair_indices: Optional[tuple[int, int]] = None
    block_id: Optional[int] = None

    def describe(self) -> str:
        if self.condition == "sli":
            return f"SLI condition fails for OD index {self.od_index}"
        i, j = self.od_pair_indices
        return (
            f"common block condition fails for OD pair ({i}, {j})"
            f" at block {self.block_id}"
        )


@dataclass(frozen=True)
class TopologyReport:
    per_od: tuple[SingleOdClass, ...]
    pairwise: tuple[tuple[tuple[int, int], PairwiseEntry], ...]
    decomposition: BlockDecomposition
    verdict: str  # IBP_FREE | NOT_IBP_FREE
    failure_site: Optional[FailureSite]


# -- series-parallel ------------------------------------------------------------


def _check_single_od(net: Subnetwork) -> None:
    covered = {eid for p in net.paths for eid in p}
    if covered != net.edge_subset:
        stray = sorted(net.edge_subset - covered)
        raise NotSingleOd(f"edges on no terminal path: {stray}")


def _sp_reducible(edges: dict[str, tuple[str, str]], s: str, t: str) -> bool:
    """Iterated series/parallel reduction down to a single terminal edge."""
    edges = dict(edges)
    fresh = itertools.count()
    while True:
        if len(edges) == 1:
            (u, v) = next(iter(edges.values()))
            return {u, v} == {s, t}
        changed = False
        # parallel: collapse edge groups with identical endpoints
        groups: dict[frozenset[str], list[str]] = {}
        for eid, (u, v) in edges.items():
            groups.setdefault(frozenset((u, v)), []).append(eid)
        for group in groups.values():
            if len(group) > 1:
                for eid in sorted(group)[1:]:
                    del edges[eid]
                changed = True
        # series: splice out one non-terminal degree-2 vertex
        incidence: dict[str, list[str]] = {}
        for eid, (u, v) in edges.items():
            incidence.setdefault(u, []).append(eid)
            incidence.setdefault(v, []).append(eid)
        for v in sorted(incidence):
            if v in (s, t) or len(incidence[v]) != 2:
                continue
            ea, eb = incidence[v]
            other_a = next(w for w in edges[ea] if w != v)
            other_b = next(w for w in edges[eb] if w != v)
            if other_a == other_b:
                continue  # parallel pair through v; next pass collapses it
            del edges[ea]
            del edges[eb]
            edges[f"~sp{next(fresh)}"] = (other_a, other_b)
            changed = True
            break
        if not changed:
            return False


def _oriented_edge_directions(
    graph: MultiGraph, paths: tuple[Path, ...], start: str
) -> dict[str, dict[tuple[str, str], Path]]:
    directions: dict[str, dict[tuple[str, str], Path]] = {}
    for path in paths:
        seq = graph.path_vertices(path, start)
        for eid, u, v in zip(path, seq, seq[1:]):
            directions.setdefault(eid, {}).setdefault((u, v), path)
    return directions


def is_series_parallel_by_definition(
    net: Subnetwork,
) -> tuple[bool, Optional[OppositeTraversal]]:
    """Literal definition: no edge is crossed in opposite directions.

    Exponential in the path count; used as the oracle cross-check for the
    reduction recognizer and to extract failure witnesses.
    """
    o, _ = net.terminal_pair
    directions = _oriented_edge_directions(net.parent, net.paths, o)
    for eid in sorted(directions):
        used = directions[eid]
        if len(used) == 2:
            (pa, pb) = (used[k] for k in sorted(used))
            return False, OppositeTraversal(edge=eid, path_a=pa, path_b=pb)
    return True, None


def is_series_parallel(net: Subnetwork) -> tuple[bool, Optional[OppositeTraversal]]:
    """Reduction-based SP test; witness extracted on failure."""
    _check_single_od(net)
    s, t = net.terminal_pair
    edge_map = {eid: net.parent.endpoints(eid) for eid in net.edge_subset}
    if _sp_reducible(edge_map, s, t):
        return True, None
    ok, witness = is_series_parallel_by_definition(net)
    if ok:
        raise AssertionError("SP recognizers disagree; reduction says no")
    return False, witness


# -- linear independence ----------------------------------------------------------


def is_linearly_independent(
    net: Subnetwork,
) -> tuple[bool, Optional[PathWithoutPrivateEdge]]:
    """Every OD path must own an edge no other OD path uses."""
    _check_single_od(net)
    paths = net.paths
    for idx, path in enumerate(paths):
        others = set()
        for jdx, q in enumerate(paths):
            if jdx != idx:
                others.update(q)
        if not (set(path) - others):
            return False, PathWithoutPrivateEdge(path)
    return True, None


def _parallel_branches(graph: MultiGraph, s: str, t: str) -> list[frozenset[str]]:
    """Edge classes of the parallel decomposition between s and t.

    Each connected component of the graph minus {s, t} spans one branch; every
    direct s-t edge is its own branch.
    """
    comp_of: dict[str, int] = {}
    n = 0
    for v in graph.vertices:
        if v in (s, t) or v in comp_of:
            continue
        comp_of[v] = n
        stack = [v]
        while stack:
            cur = stack.pop()
            for _, other in graph.adjacency[cur]:
                if other in (s, t) or other in comp_of:
                    continue
                comp_of[other] = n
                stack.append(other)
        n += 1
    branches: dict[object, set[str]] = {}
    for eid, u, v in graph.edges:
        if {u, v} == {s, t}:
            branches[("direct", eid)] = {eid}
            continue
        interior = u if u not in (s, t) else v
        branches.setdefault(("comp", comp_of[interior]), set()).add(eid)
    return [frozenset(b) for _, b in sorted(branches.items(), key=lambda kv: sorted(kv[1]))]


def is_linearly_independent_recursive(net: Subnetwork) -> bool:
    """Recursive recognizer: single edge, parallel of LI, or edge + LI in series."""
    _check_single_od(net)
    return _li_rec(net.graph, net.terminal_pair[0], net.terminal_pair[1])


def _li_rec(graph: MultiGraph, s: str, t: str) -> bool:
    if len(graph.edge_ids) == 1:
        (eid,) = graph.edge_ids
        return frozenset(graph.endpoints(eid)) == frozenset((s, t))

    chain = _raw_chain(graph, s, t)
    if len(chain) >= 2:
        first_edges, _, first_leave = chain[0]
        last_edges, last_entry, _ = chain[-1]
        if len(first_edges) == 1:
            rest = _merge_chain(graph, chain[1:])
            if _li_rec(rest, first_leave, t):
                return True
        if len(last_edges) == 1:
            front = _merge_chain(graph, chain[:-1])
            if _li_rec(front, s, last_entry):
                return True
        return False

    branches = _parallel_branches(graph, s, t)
    if len(branches) < 2:
        return False
    return all(
        _li_rec(graph.induced(branch, [(s, t)]), s, t) for branch in branches
    )


def _raw_chain(graph: MultiGraph, s: str, t: str):
    from .core_graph import _chain_of

    sub = Subnetwork(parent=graph, edge_subset=graph.edge_ids, terminal_pair=(s, t))
    return _chain_of(sub)


def _merge_chain(graph: MultiGraph, chain) -> MultiGraph:
    edges = frozenset(eid for block, _, _ in chain for eid in block)
    return graph.induced(edges, [(chain[0][1], chain[-1][2])])


# -- series of linearly independent ------------------------------------------------


@dataclass(frozen=True)
class SliChainBlock:
    edges: frozenset[str]
    origin: str
    destination: str
    is_li: bool


def is_sli(net: Subnetwork) -> tuple[bool, tuple[SliChainBlock, ...]]:
    """Decompose into the OD block chain and require each block to be LI."""
    _check_single_od(net)
    chain_blocks = []
    ok = True
    for edges, entry, leave in _raw_chain(net.graph, *net.terminal_pair):
        block_net = Subnetwork(
            parent=net.parent, edge_subset=edges, terminal_pair=(entry, leave)
        )
        li, _ = is_linearly_independent(block_net)
        chain_blocks.append(
            SliChainBlock(edges=edges, origin=entry, destination=leave, is_li=li)
        )
        ok = ok and li
    return ok, tuple(chain_blocks)


def classify_single_od(net: Subnetwork) -> SingleOdClass:
    sp, sp_witness = is_series_parallel(net)
    if not sp:
        return SingleOdClass(is_sp=False, is_li=False, is_sli=False, witness=sp_witness)
    li, li_witness = is_linearly_independent(net)
    if li:
        return SingleOdClass(is_sp=True, is_li=True, is_sli=True, witness=None)
    sli, _ = is_sli(net)
    return SingleOdClass(is_sp=True, is_li=False, is_sli=sli, witness=li_witness)


# -- common blocks across OD pairs ---------------------------------------------------


def classify_common_blocks(
    g: MultiGraph,
    i: int,
    j: int,
    decomposition: Optional[BlockDecomposition] = None,
    max_paths: int = DEFAULT_PATH_CAP,
) -> PairwiseEntry:
    """Classify each block shared by subnetworks i and j.

    Requires both subnetworks to be SLI (otherwise blocks sharing an edge need
    not coincide).  Terminal order is ignored when testing coincidence.
    """
    sub_i = od_subnetwork(g, i, max_paths=max_paths)
    sub_j = od_subnetwork(g, j, max_paths=max_paths)
    for idx, sub in ((i, sub_i), (j, sub_j)):
        ok, _ = is_sli(sub)
        if not ok:
            raise PreconditionNotSli(f"OD subnetwork {idx} is not SLI")

    intersection = sub_i.edge_subset & sub_j.edge_subset
    if not intersection:
        return PairwiseEntry(disjoint=True, verdicts=(), induced_matches=True)

    dec = decomposition or decompose_blocks(g, max_paths=max_paths)
    chain_i = {dec.block_edges(l.block_id): l for l in dec.chains[i]}
    chain_j = {dec.block_edges(l.block_id): l for l in dec.chains[j]}

    verdicts = []
    matched: set[str] = set()
    for edges in sorted(chain_i, key=sorted):
        if edges not in chain_j:
            continue
        li = chain_i[edges]
        lj = chain_j[edges]
        set_i = {li.origin, li.destination}
        set_j = {lj.origin, lj.destination}
        if set_i == set_j:
            kind = COINCIDENT
        elif is_cycle(g, edges):
            kind = CYCLE
        else:
            kind = OTHER
        verdicts.append(
            CommonBlockVerdict(
                block_id=li.block_id,
                kind=kind,
                terminal_set_in_i=(li.origin, li.destination),
                terminal_set_in_j=(lj.origin, lj.destination),
            )
        )
        matched |= edges
    return PairwiseEntry(
        disjoint=False,
        verdicts=tuple(verdicts),
        induced_matches=matched == intersection,
    )


def decide_ibp_free(g: MultiGraph, max_paths: int = DEFAULT_PATH_CAP) -> TopologyReport:
    """Full verdict: SLI condition plus the coincident-or-cycle block condition.

    The conditions are conjunctive, so the verdict short-circuits on the first
    failure; pairwise entries are still produced for every pair whose two
    subnetworks are SLI.
    """
    report = validate(g, max_paths=max_paths)
    if not report.ok:
        raise InvalidNetwork(
            "graph fails validation: "
            f"connected={report.connected}, "
            f"uncovered_edges={list(report.uncovered_edges)}, "
            f"uncovered_vertices={list(report.uncovered_vertices)}"
        )

    dec = decompose_blocks(g, max_paths=max_paths)
    per_od = []
    for i in range(len(g.od_pairs)):
        per_od.append(classify_single_od(od_subnetwork(g, i, max_paths=max_paths)))
    failure: Optional[FailureSite] = None
    for i, cls in enumerate(per_od):
        if not cls.is_sli:
            failure = FailureSite(condition="sli", od_index=i)
            break

    pairwise = []
    for i, j in itertools.combinations(range(len(g.od_pairs)), 2):
        if not (per_od[i].is_sli and per_od[j].is_sli):
            continue
        entry = classify_common_blocks(g, i, j, decomposition=dec, max_paths=max_paths)
        pairwise.append(((i, j), entry))
        if failure is not None:
            continue
        bad = next(
            (v for v in entry.verdicts if v.kind == OTHER),
            None,
        )
        if bad is not None:
            failure = FailureSite(
                condition="common-block", od_pair_indices=(i, j), block_id=bad.block_id
            )
        elif not entry.induced_matches:
            failure = FailureSite(condition="common-block", od_pair_indices=(i, j))

    return TopologyReport(
        per_od=tuple(per_od),
        pairwise=tuple(pairwise),
        decomposition=dec,
        verdict=NOT_IBP_FREE if failure else IBP_FREE,
        failure_site=failure,
    )


def check_sufficient_coincident(g: MultiGraph, max_paths: int = DEFAULT_PATH_CAP) -> bool:
    """Stricter sufficient condition: every common block coincident.

    Implies the full verdict is IBP-free, but not conversely: a shared cycle
    block with different terminal sets is immune yet not coincident.
    """
    per_od = []
    for i in range(len(g.od_pairs)):
        ok, _ = is_sli(od_subnetwork(g, i, max_paths=max_paths))
        per_od.append(ok)
    if not all(per_od):
        return False
    dec = decompose_blocks(g, max_paths=max_paths)
    for i, j in itertools.combinations(range(len(g.od_pairs)), 2):
        entry = classify_common_blocks(g, i, j, decomposition=dec, max_paths=max_paths)
        if entry.disjoint:
            continue
        if not entry.induced_matches:
            return False
        if any(v.kind != COINCIDENT for v in entry.verdicts):
            return False
    return True
