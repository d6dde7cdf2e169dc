"""Layered edge partition and the approximation scheme for planar games.

The scheme deletes one of h edge classes at a time, solves each thinned
game exactly by tree-decomposition DP, and keeps the best assignment
re-measured on the full edge set.  Some class intersects the optimum's
satisfied edges in at most a 1/h fraction, so the best thinned optimum is
within 1 - 1/h of the true one.  Classes come from BFS levels: an edge
joins the class of its smaller endpoint level mod h, so removing a class
cuts the graph into slabs spanning fewer than h consecutive levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from time import perf_counter

from .core import (
    Assignment,
    LabelCoverError,
    ProjectionGame,
    SolveReport,
    build_game,
    connected_components,
    lift_assignment,
    value,
)
from .exact import (
    EXACT_DECOMPOSITION_LIMIT,
    TreeDecomposition,
    _decomposition_from_order,
    _exact_order,
    _min_fill_order,
    tree_dp_solve,
    validate_decomposition,
)


class PlanarityCheckFailed(LabelCoverError):
    """The instance graph fails the edge-count planarity sanity bound."""


def euler_planarity_ok(game: ProjectionGame) -> bool:
    """Necessary (not sufficient) planarity condition: |E| <= 3n - 6."""
    n = game.vertex_count
    if n < 3:
        return True
    return game.edge_count <= 3 * n - 6


@dataclass(frozen=True)
class BakerPartition:
    """Edge classes plus a tree decomposition of each thinned graph.

    ``classes[i]`` holds the edge indices of class i + 1; the classes are
    disjoint and cover the edge set.  ``decompositions[i]`` is valid for
    the graph with class i + 1 removed.  ``levels`` records the BFS level
    used for every global vertex.
    """

    h: int
    classes: tuple[frozenset[int], ...]
    decompositions: tuple[TreeDecomposition, ...]
    levels: tuple[int, ...]


def _bfs_levels(game: ProjectionGame) -> list[int]:
    n = game.vertex_count
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in game.edges:
        adj[a].append(game.a_count + b)
        adj[game.a_count + b].append(a)
    level = [-1] * n
    for start in range(n):
        if level[start] != -1:
            continue
        level[start] = 0
        frontier = [start]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if level[v] == -1:
                        level[v] = level[u] + 1
                        nxt.append(v)
            frontier = nxt
    return level


def residual_game(game: ProjectionGame, removed: frozenset[int]) -> ProjectionGame:
    """The game with the given edge indices deleted, order preserved."""
    keep = [i for i in range(game.edge_count) if i not in removed]
    return build_game(
        game.a_count,
        game.b_count,
        game.sigma_a,
        game.sigma_b,
        [game.edges[i] for i in keep],
        [game.projections[i] for i in keep],
    )


def baker_partition(game: ProjectionGame, h: int) -> BakerPartition:
    """Split edges into h classes by BFS level and decompose each residue.

    BFS starts at vertex 0 (and at the smallest vertex of any further
    component).  An edge whose smaller endpoint level is L lands in class
    (L mod h) + 1.  Each thinned graph gets an exact minimum-width
    decomposition when the graph is tiny, else a min-fill one; every
    decomposition is validated before being returned.
    """
    if h < 1:
        raise ValueError("h must be at least 1")
    levels = _bfs_levels(game)
    classes: list[set[int]] = [set() for _ in range(h)]
    for i, (a, b) in enumerate(game.edges):
        low = min(levels[a], levels[game.a_count + b])
        classes[low % h].add(i)

    decomps = []
    n = game.vertex_count
    for cls in classes:
        res = residual_game(game, frozenset(cls))
        adj: list[set[int]] = [set() for _ in range(n)]
        for a, b in res.edges:
            adj[a].add(game.a_count + b)
            adj[game.a_count + b].add(a)
        if n <= EXACT_DECOMPOSITION_LIMIT:
            order = _exact_order(n, adj)
        else:
            order = _min_fill_order(n, adj)
        td = _decomposition_from_order(n, adj, order)
        bad = validate_decomposition(res, td)
        if bad:
            raise LabelCoverError(f"internal: residual decomposition invalid: {bad}")
        decomps.append(td)
    return BakerPartition(
        h=h,
        classes=tuple(frozenset(c) for c in classes),
        decompositions=tuple(decomps),
        levels=tuple(levels),
    )


def ptas(
    game: ProjectionGame,
    epsilon: Fraction,
    force_nonplanar: bool = False,
    h_override: int | None = None,
    state_cap: int | None = None,
) -> SolveReport:
    """Approximation scheme: best thinned-exact assignment over h classes.

    h = ceil(1 + 1/epsilon).  Components are solved separately and the
    per-component winners recombined; each candidate is evaluated on the
    full edge set, so the result is at least the best thinned optimum,
    which is at least OPT * (1 - 1/h) >= OPT / (1 + epsilon).

    The output assignment is correct for any graph; planarity only keeps
    the decomposition widths (hence the running time) small, so the Euler
    sanity check can be overridden.
    """
    t0 = perf_counter()
    if h_override is None and not 0 < epsilon <= 1:
        raise ValueError("epsilon must be in (0, 1]")
    if not force_nonplanar and not euler_planarity_ok(game):
        raise PlanarityCheckFailed(
            f"{game.edge_count} edges on {game.vertex_count} vertices breaks the "
            f"planar edge bound; pass force_nonplanar to run anyway"
        )
    h = h_override if h_override is not None else math.ceil(1 + 1 / epsilon)

    comps = connected_components(game)
    winners = []
    certified = 0
    for comp in comps:
        sub = comp.game
        if sub.edge_count == 0:
            winners.append(
                Assignment((0,) * sub.a_count, (0,) * sub.b_count)
            )
            continue
        part = baker_partition(sub, h)
        best_phi, best_val, best_dp = None, -1, 0
        for i in range(h):
            res = residual_game(sub, part.classes[i])
            phi, dp_val = tree_dp_solve(res, part.decompositions[i], state_cap)
            full_val = value(sub, phi)
            if full_val > best_val:
                best_phi, best_val, best_dp = phi, full_val, dp_val
        winners.append(best_phi)
        certified += best_dp
    phi = lift_assignment(game, comps, winners)
    return SolveReport(
        assignment=phi,
        satisfied=value(game, phi),
        algorithm="ptas",
        guarantee=Fraction(certified),
        elapsed=perf_counter() - t0,
        guarantee_ratio_of_opt=Fraction(h - 1, h),
        breakdown=(("h", h),),
    )
