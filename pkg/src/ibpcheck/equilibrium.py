"""Information-constrained Wardrop equilibria via potential minimization.

All traveler types share the same edge latencies; information sets only shape
each type's feasible path polytope.  The classic aggregated convex potential
(edge-wise integral of latencies) therefore remains valid: its minimizers
over the product of per-type path-flow simplices are exactly the equilibria,
and every equilibrium induces the same per-edge latencies.

Two solver backends:

* ``cg``    -- pairwise conditional-gradient on path flows: per type, shift
  mass from the costliest used path to the cheapest feasible path, step size
  by exact polynomial line search.  Works for any polynomial latencies.
* ``exact`` -- for affine latencies on small instances: enumerate supports of
  used paths, solve the equal-latency linear system per support, keep the
  first support whose solution is feasible and optimal.  Serves as the
  solver-independent oracle for ``cg``.

Games and results are immutable values and both solvers are deterministic
single-threaded procedures, so independent games may be solved concurrently.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .core_graph import (
    DEFAULT_PATH_CAP,
    BlockDecomposition,
    MultiGraph,
    Path,
    enumerate_simple_paths,
)
from .errors import (
    BackendUnavailable,
    DidNotConverge,
    InvalidNetwork,
    NoFeasiblePath,
    SolverError,
)

DEFAULT_TOLERANCE = 1e-8
DEFAULT_FLOW_EPS = 1e-9
DEFAULT_MAX_ITERATIONS = 50_000
EXACT_PATH_LIMIT = 12


@dataclass(frozen=True)
class LatencyFunction:
    """Polynomial latency, coefficients constant-first.

    Nonnegative coefficients are enforced: they guarantee the function is
    nonnegative and nondecreasing on the whole flow range.  The constant zero
    function is allowed (free edges used by instance lifting).
    """

    coefficients: tuple[float, ...]

    def __init__(self, coefficients: Iterable[float]):
        coeffs = tuple(float(c) for c in coefficients)
        if not coeffs:
            coeffs = (0.0,)
        if any(c < 0 for c in coeffs):
            raise InvalidNetwork(f"negative latency coefficient in {coeffs}")
        object.__setattr__(self, "coefficients", coeffs)

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def integral(self, x: float) -> float:
        """Antiderivative at x with F(0) = 0, in closed form."""
        acc = 0.0
        for k in reversed(range(len(self.coefficients))):
            acc = acc * x + self.coefficients[k] / (k + 1)
        return acc * x

    @property
    def degree(self) -> int:
        deg = len(self.coefficients) - 1
        while deg > 0 and self.coefficients[deg] == 0.0:
            deg -= 1
        return deg

    @property
    def is_affine(self) -> bool:
        return self.degree <= 1

    @staticmethod
    def zero() -> "LatencyFunction":
        return LatencyFunction((0.0,))


@dataclass(frozen=True)
class TravelerType:
    """A traveler population: rate, OD pair index, and known edge set."""

    rate: float
    od_index: int
    info_set: frozenset[str]

    def __init__(self, rate: float, od_index: int, info_set: Iterable[str]):
        if rate < 0:
            raise InvalidNetwork("traveler rate must be nonnegative")
        object.__setattr__(self, "rate", float(rate))
        object.__setattr__(self, "od_index", int(od_index))
        object.__setattr__(self, "info_set", frozenset(info_set))


@dataclass(frozen=True)
class RoutingGame:
    graph: MultiGraph
    latencies: Mapping[str, LatencyFunction]
    types: tuple[TravelerType, ...]

    def __init__(
        self,
        graph: MultiGraph,
        latencies: Mapping[str, LatencyFunction],
        types: Sequence[TravelerType],
    ):
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "latencies", dict(latencies))
        object.__setattr__(self, "types", tuple(types))
        if set(self.latencies) != set(graph.edge_ids):
            raise InvalidNetwork("latencies must cover exactly the edge set")
        for t in self.types:
            if not 0 <= t.od_index < len(graph.od_pairs):
                raise InvalidNetwork(f"type references unknown OD index {t.od_index}")
            if not t.info_set <= graph.edge_ids:
                raise InvalidNetwork("info set references unknown edges")

    @property
    def total_rate(self) -> float:
        return sum(t.rate for t in self.types)

    def path_latency(self, path: Path, edge_flows: Mapping[str, float]) -> float:
        return sum(self.latencies[eid](edge_flows.get(eid, 0.0)) for eid in path)


def feasible_paths(
    game: RoutingGame, j: int, max_paths: int = DEFAULT_PATH_CAP
) -> tuple[Path, ...]:
    """Type j's OD paths inside its information set, lexicographically ordered."""
    t = game.types[j]
    o, d = game.graph.od_pairs[t.od_index]
    paths = enumerate_simple_paths(game.graph, o, d, t.info_set, max_paths=max_paths)
    if t.rate > 0 and not paths:
        raise NoFeasiblePath(f"type {j} has rate {t.rate} but no feasible path")
    return paths


def beckmann_potential(game: RoutingGame, edge_flows: Mapping[str, float]) -> float:
    """Edge-wise integral of latencies; minimizers are the equilibria."""
    return sum(
        lat.integral(edge_flows.get(eid, 0.0)) for eid, lat in game.latencies.items()
    )


# -- results -------------------------------------------------------------------


@dataclass(frozen=True)
class EquilibriumResult:
    path_flows: tuple[dict[Path, float], ...]  # per type
    edge_flows: dict[str, float]
    type_latencies: tuple[float, ...]
    max_wardrop_violation: float
    backend: str
    iterations: int


def equilibrium_latency(result: EquilibriumResult, j: int) -> float:
    """Common latency of type j's used paths; 0 for rate-0 types."""
    return result.type_latencies[j]


@dataclass(frozen=True)
class TypeWardropCheck:
    type_index: int
    conservation_error: float
    violation: float


@dataclass(frozen=True)
class WardropReport:
    per_type: tuple[TypeWardropCheck, ...]
    max_violation: float
    passed: bool


def verify_wardrop(
    game: RoutingGame,
    result: EquilibriumResult,
    epsilon: float = DEFAULT_TOLERANCE,
    flow_eps: float = DEFAULT_FLOW_EPS,
) -> WardropReport:
    """Re-derive everything from the path flows and check the equilibrium.

    Deliberately independent of any solver: edge flows are rebuilt from
    scratch and the per-type violation is the worst gap between a used path
    and that type's cheapest feasible path.
    """
    edge_flows: dict[str, float] = {}
    for flows in result.path_flows:
        for path, amount in flows.items():
            for eid in path:
                edge_flows[eid] = edge_flows.get(eid, 0.0) + amount

    checks = []
    worst = 0.0
    for j, t in enumerate(game.types):
        flows = result.path_flows[j]
        conservation = abs(sum(flows.values()) - t.rate)
        violation = 0.0
        candidates = feasible_paths(game, j)
        if candidates:
            latencies = {p: game.path_latency(p, edge_flows) for p in candidates}
            best = min(latencies.values())
            for p, amount in flows.items():
                if amount > flow_eps:
                    violation = max(violation, latencies[p] - best)
        checks.append(
            TypeWardropCheck(
                type_index=j, conservation_error=conservation, violation=violation
            )
        )
        worst = max(worst, violation)
    passed = worst <= epsilon and all(c.conservation_error <= 1e-9 for c in checks)
    return WardropReport(per_type=tuple(checks), max_violation=worst, passed=passed)


# -- shared solver scaffolding -----------------------------------------------------


def _active_types(game: RoutingGame, flow_eps: float) -> list[int]:
    return [j for j, t in enumerate(game.types) if t.rate > flow_eps]


def _edge_flows_of(path_flows: Sequence[Mapping[Path, float]]) -> dict[str, float]:
    acc: dict[str, float] = {}
    for flows in path_flows:
        for path, amount in flows.items():
            for eid in path:
                acc[eid] = acc.get(eid, 0.0) + amount
    return acc


def _build_result(
    game: RoutingGame,
    type_paths: Sequence[tuple[Path, ...]],
    path_flows: Sequence[Mapping[Path, float]],
    backend: str,
    iterations: int,
    flow_eps: float,
) -> EquilibriumResult:
    edge_flows = _edge_flows_of(path_flows)
    latencies_by_type = []
    violation = 0.0
    for j, paths in enumerate(type_paths):
        if game.types[j].rate <= flow_eps or not paths:
            latencies_by_type.append(0.0)
            continue
        lat = {p: game.path_latency(p, edge_flows) for p in paths}
        best = min(lat.values())
        used = [p for p in paths if path_flows[j].get(p, 0.0) > flow_eps]
        for p in used:
            violation = max(violation, lat[p] - best)
        latencies_by_type.append(min(lat[p] for p in used) if used else best)
    return EquilibriumResult(
        path_flows=tuple(dict(f) for f in path_flows),
        edge_flows=edge_flows,
        type_latencies=tuple(latencies_by_type),
        max_wardrop_violation=violation,
        backend=backend,
        iterations=iterations,
    )


# -- exact backend: affine active-set enumeration ------------------------------------


def _solve_exact(
    game: RoutingGame,
    type_paths: Sequence[tuple[Path, ...]],
    tolerance: float,
    flow_eps: float,
    path_limit: int,
) -> EquilibriumResult:
    if not all(lat.is_affine for lat in game.latencies.values()):
        raise BackendUnavailable("exact backend requires affine latencies")
    active = _active_types(game, flow_eps)
    if not active:
        return _build_result(
            game, type_paths, [{} for _ in game.types], "exact", 0, flow_eps
        )
    flat: list[tuple[int, Path]] = [(j, p) for j in active for p in type_paths[j]]
    if len(flat) > path_limit:
        raise BackendUnavailable(
            f"exact backend limited to {path_limit} paths, got {len(flat)}"
        )

    def aff(eid: str) -> tuple[float, float]:
        c = game.latencies[eid].coefficients
        return (c[0], c[1] if len(c) > 1 else 0.0)

    const_cost = [sum(aff(e)[0] for e in p) for _, p in flat]
    interact = np.zeros((len(flat), len(flat)))
    for a, (_, pa) in enumerate(flat):
        sa = set(pa)
        for b, (_, pb) in enumerate(flat):
            interact[a, b] = sum(aff(e)[1] for e in sa & set(pb))

    # per-type candidate supports: nonempty subsets ordered by size then index
    per_type_subsets: list[list[tuple[int, ...]]] = []
    for j in active:
        indices = [k for k, (tj, _) in enumerate(flat) if tj == j]
        subsets = []
        for size in range(1, len(indices) + 1):
            subsets.extend(itertools.combinations(indices, size))
        per_type_subsets.append(subsets)

    n_types = len(active)
    for support in itertools.product(*per_type_subsets):
        chosen = [k for subset in support for k in subset]
        n = len(chosen)
        dim = n + n_types
        a_mat = np.zeros((dim, dim))
        b_vec = np.zeros(dim)
        row = 0
        for tpos, subset in enumerate(support):
            for k in subset:
                for col, k2 in enumerate(chosen):
                    a_mat[row, col] = interact[k, k2]
                a_mat[row, n + tpos] = -1.0
                b_vec[row] = -const_cost[k]
                row += 1
        for tpos, subset in enumerate(support):
            for col, k2 in enumerate(chosen):
                if k2 in subset:
                    a_mat[row, col] = 1.0
            b_vec[row] = game.types[active[tpos]].rate
            row += 1

        solution, *_ = np.linalg.lstsq(a_mat, b_vec, rcond=None)
        if not np.all(np.isfinite(solution)):
            continue
        if np.max(np.abs(a_mat @ solution - b_vec)) > 1e-7:
            continue
        x = solution[:n]
        if np.min(x) < -1e-9:
            continue

        path_flows: list[dict[Path, float]] = [dict() for _ in game.types]
        for col, k in enumerate(chosen):
            j, p = flat[k]
            path_flows[j][p] = max(float(x[col]), 0.0)
        feasible = True
        for j in active:  # absorb solver rounding into the largest flow
            total = sum(path_flows[j].values())
            gap = game.types[j].rate - total
            if path_flows[j] and gap != 0.0:
                top = max(path_flows[j], key=path_flows[j].get)
                path_flows[j][top] += gap
                if path_flows[j][top] < 0:
                    feasible = False
                    break
        if not feasible:
            continue
        candidate = _build_result(
            game, type_paths, path_flows, "exact", 1, flow_eps
        )
        if candidate.max_wardrop_violation <= max(tolerance, 1e-9):
            return candidate
    raise SolverError("exact backend found no optimal support (degenerate input?)")


# -- conditional-gradient backend ----------------------------------------------------


def _line_search_shift(
    game: RoutingGame,
    edge_flows: Mapping[str, float],
    source: Path,
    target: Path,
    gamma_max: float,
) -> float:
    """Amount to move from `source` to `target` minimizing the potential.

    The potential restricted to the move is a polynomial in the shifted
    amount with a nondecreasing derivative (convexity), so the minimizer is
    the derivative's zero crossing: closed form for affine latencies,
    bisection otherwise.
    """
    gain = set(target) - set(source)
    drop = set(source) - set(target)
    deriv = [0.0]  # coefficients of dPhi/dgamma

    def accumulate(coeffs: tuple[float, ...], f: float, s: float, sign: float) -> None:
        # sign * latency(f + s * gamma), expanded in powers of gamma
        for m, c in enumerate(coeffs):
            if c == 0.0:
                continue
            if m >= len(deriv):
                deriv.extend([0.0] * (m - len(deriv) + 1))
            for k in range(m + 1):
                deriv[k] += sign * c * math.comb(m, k) * f ** (m - k) * s**k

    for eid in gain:
        accumulate(game.latencies[eid].coefficients, edge_flows.get(eid, 0.0), 1.0, 1.0)
    for eid in drop:
        accumulate(game.latencies[eid].coefficients, edge_flows.get(eid, 0.0), -1.0, -1.0)

    def value(x: float) -> float:
        acc = 0.0
        for c in reversed(deriv):
            acc = acc * x + c
        return acc

    if deriv[0] >= 0.0:
        return 0.0
    if value(gamma_max) <= 0.0:
        return gamma_max
    if all(c == 0.0 for c in deriv[2:]):  # affine: exact crossing
        return min(max(-deriv[0] / deriv[1], 0.0), gamma_max)
    lo, hi = 0.0, gamma_max
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if value(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _start_flows(
    game: RoutingGame,
    type_paths: Sequence[tuple[Path, ...]],
    flow_eps: float,
    start_seed: Optional[int],
) -> list[dict[Path, float]]:
    rng = random.Random(start_seed) if start_seed is not None else None
    flows: list[dict[Path, float]] = []
    for j, t in enumerate(game.types):
        if t.rate <= flow_eps or not type_paths[j]:
            flows.append({})
            continue
        if rng is None:
            flows.append({type_paths[j][0]: t.rate})
        else:
            weights = [rng.random() + 1e-9 for _ in type_paths[j]]
            total = sum(weights)
            alloc = {
                p: t.rate * w / total for p, w in zip(type_paths[j], weights)
            }
            # force exact conservation
            drift = t.rate - sum(alloc.values())
            alloc[type_paths[j][0]] += drift
            flows.append(alloc)
    return flows


def _solve_cg(
    game: RoutingGame,
    type_paths: Sequence[tuple[Path, ...]],
    tolerance: float,
    max_iterations: int,
    flow_eps: float,
    start_seed: Optional[int],
) -> EquilibriumResult:
    flows = _start_flows(game, type_paths, flow_eps, start_seed)
    edge_flows = _edge_flows_of(flows)
    active = [j for j in _active_types(game, flow_eps) if len(type_paths[j]) > 1]

    def apply_shift(j: int, source: Path, target: Path, gamma: float) -> None:
        remaining = flows[j].get(source, 0.0) - gamma
        if remaining <= flow_eps * 1e-3:
            gamma += remaining  # empty the source exactly
            remaining = 0.0
        if remaining == 0.0:
            flows[j].pop(source, None)
        else:
            flows[j][source] = remaining
        flows[j][target] = flows[j].get(target, 0.0) + gamma
        for eid in set(target) - set(source):
            edge_flows[eid] = edge_flows.get(eid, 0.0) + gamma
        for eid in set(source) - set(target):
            edge_flows[eid] = edge_flows.get(eid, 0.0) - gamma

    result = _build_result(game, type_paths, flows, "cg", 0, flow_eps)
    if result.max_wardrop_violation <= tolerance:
        return result
    for sweep in range(1, max_iterations + 1):
        for j in active:
            lat = {p: game.path_latency(p, edge_flows) for p in type_paths[j]}
            best = min(type_paths[j], key=lambda p: (lat[p], p))
            used = [p for p in type_paths[j] if flows[j].get(p, 0.0) > flow_eps]
            worst = max(used, key=lambda p: (lat[p], p))
            if worst == best or lat[worst] - lat[best] <= tolerance * 1e-3:
                continue
            gamma = _line_search_shift(
                game, edge_flows, worst, best, flows[j][worst]
            )
            if gamma > 0.0:
                apply_shift(j, worst, best, gamma)

        result = _build_result(game, type_paths, flows, "cg", sweep, flow_eps)
        if result.max_wardrop_violation <= tolerance:
            return result
    raise DidNotConverge(max_iterations, result.max_wardrop_violation)


# -- public solver ---------------------------------------------------------------------


def solve_icwe(
    game: RoutingGame,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    backend: str = "auto",
    start_seed: Optional[int] = None,
    flow_eps: float = DEFAULT_FLOW_EPS,
    max_paths: int = DEFAULT_PATH_CAP,
    exact_path_limit: int = EXACT_PATH_LIMIT,
) -> EquilibriumResult:
    """Compute an ICWE flow: minimize the potential over per-type path flows.

    backend "exact" enumerates active path sets (affine latencies, small path
    counts only); "cg" runs the conditional-gradient iteration; "auto" picks
    "exact" when eligible, falling back to "cg".
    """
    type_paths = [feasible_paths(game, j, max_paths=max_paths) for j in range(len(game.types))]

    if backend == "auto":
        affine = all(lat.is_affine for lat in game.latencies.values())
        n_paths = sum(
            len(type_paths[j]) for j in _active_types(game, flow_eps)
        )
        backend = "exact" if affine and n_paths <= exact_path_limit else "cg"
    if backend == "exact":
        return _solve_exact(game, type_paths, tolerance, flow_eps, exact_path_limit)
    if backend == "cg":
        return _solve_cg(
            game, type_paths, tolerance, max_iterations, flow_eps, start_seed
        )
    raise ValueError(f"unknown backend {backend!r}")


# -- block-local games ------------------------------------------------------------------


def block_local_game(
    game: RoutingGame, block_id: int, decomposition: BlockDecomposition
) -> RoutingGame:
    """Restrict the game to one block of the block chains.

    Types whose OD chain crosses the block keep their rate, with terminals
    and information set induced by the block; all other types ride along as
    rate-0 dummies so type indices stay aligned with the parent game.
    """
    edges = decomposition.block_edges(block_id)
    local_pairs: list[tuple[str, str]] = []
    od_to_local: dict[int, int] = {}
    for od_index, chain in enumerate(decomposition.chains):
        for link in chain:
            if link.block_id == block_id:
                od_to_local[od_index] = len(local_pairs)
                local_pairs.append((link.origin, link.destination))
    if not local_pairs:
        raise SolverError(f"block {block_id} lies on no OD chain")

    graph = game.graph.induced(edges, local_pairs)
    latencies = {eid: game.latencies[eid] for eid in edges}
    types = []
    for t in game.types:
        if t.od_index in od_to_local:
            types.append(
                TravelerType(
                    rate=t.rate,
                    od_index=od_to_local[t.od_index],
                    info_set=t.info_set & edges,
                )
            )
        else:
            types.append(TravelerType(rate=0.0, od_index=0, info_set=()))
    return RoutingGame(graph, latencies, types)


def check_series_decomposition(
    game: RoutingGame,
    result: EquilibriumResult,
    decomposition: BlockDecomposition,
    tolerance: float = 1e-6,
    **solve_kwargs,
) -> bool:
    """Each type's latency must equal the sum of its block-local latencies.

    Valid whenever the graph satisfies the SLI condition, because each OD
    subnetwork is then its block chain connected in series.
    """
    sums = [0.0] * len(game.types)
    for block in decomposition.blocks:
        local = block_local_game(game, block.id, decomposition)
        local_result = solve_icwe(local, **solve_kwargs)
        for j in range(len(game.types)):
            sums[j] += local_result.type_latencies[j]
    return all(
        abs(sums[j] - result.type_latencies[j]) <= tolerance
        for j in range(len(game.types))
    )
