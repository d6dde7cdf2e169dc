"""Projection-game (Label Cover) instances and their derived statistics.

A projection game is a bipartite constraint graph between an A side and a
B side, each with its own integer alphabet.  Every edge (a, b) carries a
total table mapping each A symbol to a B symbol; an assignment satisfies
the edge when the table maps a's label to b's label.  The goal is to
satisfy as many edges as possible.

Everything here is immutable after construction and safe to share between
threads; all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property


class LabelCoverError(Exception):
    """Base class for all errors raised by this package."""


class IndexOutOfRange(LabelCoverError):
    """An edge endpoint is outside the declared vertex range."""


class DuplicateEdge(LabelCoverError):
    """The same (a, b) pair appears twice in the edge list."""


class TableLengthMismatch(LabelCoverError):
    """A projection table does not have exactly one entry per A symbol."""


class SymbolOutOfRange(LabelCoverError):
    """A projection table entry is not a valid B symbol."""


class ShapeMismatch(LabelCoverError):
    """An assignment does not fit the game it is evaluated against."""


class BudgetExceeded(LabelCoverError):
    """An enumeration would exceed the caller-supplied budget."""


class InfeasibleParams(LabelCoverError):
    """Generator parameters do not admit a well-formed instance."""


@dataclass(frozen=True)
class ProjectionGame:
    """A validated projection-game instance.

    Vertices are integer indices: A-side 0..a_count-1, B-side
    0..b_count-1.  Symbols are integer indices into the two alphabets.
    ``edges`` is the canonical identity of the edge set: all per-edge data
    (``projections``, statistics, solver reports) is aligned to its order.

    Where a single global vertex numbering is needed (tree decompositions,
    BFS layerings), A vertices keep their indices and B vertex j becomes
    a_count + j.
    """

    a_count: int
    b_count: int
    sigma_a: int
    sigma_b: int
    edges: tuple[tuple[int, int], ...]
    projections: tuple[tuple[int, ...], ...]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def vertex_count(self) -> int:
        return self.a_count + self.b_count

    @cached_property
    def a_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices incident to each A vertex, in edge order."""
        out = [[] for _ in range(self.a_count)]
        for i, (a, _) in enumerate(self.edges):
            out[a].append(i)
        return tuple(tuple(x) for x in out)

    @cached_property
    def b_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices incident to each B vertex, in edge order."""
        out = [[] for _ in range(self.b_count)]
        for i, (_, b) in enumerate(self.edges):
            out[b].append(i)
        return tuple(tuple(x) for x in out)

    @cached_property
    def a_neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Sorted B neighbors of each A vertex."""
        return tuple(
            tuple(sorted(self.edges[i][1] for i in eids)) for eids in self.a_edges
        )

    @cached_property
    def b_neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Sorted A neighbors of each B vertex."""
        return tuple(
            tuple(sorted(self.edges[i][0] for i in eids)) for eids in self.b_edges
        )

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def preimage_masks(self) -> tuple[tuple[int, ...], ...]:
        """Per edge, per B symbol, the bitmask of A symbols mapping to it."""
        out = []
        for table in self.projections:
            masks = [0] * self.sigma_b
            for sa, sb in enumerate(table):
                masks[sb] |= 1 << sa
            out.append(tuple(masks))
        return tuple(out)


@dataclass(frozen=True)
class Assignment:
    """Labels for every vertex of a game; the universal solution currency."""

    a_labels: tuple[int, ...]
    b_labels: tuple[int, ...]


def build_game(
    a_count: int,
    b_count: int,
    sigma_a: int,
    sigma_b: int,
    edges,
    projections,
) -> ProjectionGame:
    """Validate raw instance data and return an immutable game.

    Raises IndexOutOfRange, DuplicateEdge, TableLengthMismatch or
    SymbolOutOfRange, each naming the offending edge index.  Computes
    nothing beyond validation.
    """
    if a_count < 0 or b_count < 0:
        raise IndexOutOfRange("vertex counts must be nonnegative")
    if sigma_a < 1 or sigma_b < 1:
        raise SymbolOutOfRange("alphabet sizes must be positive")
    edges = tuple((int(a), int(b)) for a, b in edges)
    projections = tuple(tuple(int(s) for s in t) for t in projections)
    if len(projections) != len(edges):
        raise TableLengthMismatch(
            f"{len(edges)} edges but {len(projections)} projection tables"
        )
    seen = set()
    for i, (a, b) in enumerate(edges):
        if not (0 <= a < a_count and 0 <= b < b_count):
            raise IndexOutOfRange(f"edge {i}: endpoint ({a}, {b}) out of range")
        if (a, b) in seen:
            raise DuplicateEdge(f"edge {i}: duplicate pair ({a}, {b})")
        seen.add((a, b))
        table = projections[i]
        if len(table) != sigma_a:
            raise TableLengthMismatch(
                f"edge {i}: table has {len(table)} entries, expected {sigma_a}"
            )
        for s in table:
            if not 0 <= s < sigma_b:
                raise SymbolOutOfRange(f"edge {i}: table entry {s} not a B symbol")
    return ProjectionGame(a_count, b_count, sigma_a, sigma_b, edges, projections)


def check_assignment(game: ProjectionGame, phi: Assignment) -> None:
    """Raise ShapeMismatch unless phi is structurally valid for game."""
    if len(phi.a_labels) != game.a_count or len(phi.b_labels) != game.b_count:
        raise ShapeMismatch(
            f"assignment shape ({len(phi.a_labels)}, {len(phi.b_labels)}) does not "
            f"match game ({game.a_count}, {game.b_count})"
        )
    for s in phi.a_labels:
        if not 0 <= s < game.sigma_a:
            raise ShapeMismatch(f"A label {s} out of range")
    for s in phi.b_labels:
        if not 0 <= s < game.sigma_b:
            raise ShapeMismatch(f"B label {s} out of range")


def value(game: ProjectionGame, phi: Assignment) -> int:
    """Exact number of edges whose table maps phi(a) to phi(b)."""
    check_assignment(game, phi)
    sat = 0
    for (a, b), table in zip(game.edges, game.projections):
        if table[phi.a_labels[a]] == phi.b_labels[b]:
            sat += 1
    return sat


@dataclass(frozen=True)
class InstanceStats:
    """Every derived quantity the solvers consume.

    ``n2`` holds the two-hop A neighborhood of each A vertex (neighbors of
    neighbors, which includes the vertex itself whenever it has an edge).
    ``h`` counts the edges touching that set; ``e_n`` counts the edges
    touching the direct neighborhood.  ``sigma_b_max`` is the B symbol with
    the largest total preimage over incident edges (smallest index on
    ties), ``p_max_e`` the per-edge preimage size under it, ``p_bar_max``
    the exact mean of those sizes.  ``uniform_p`` is the common preimage
    size when every table splits its alphabet evenly, else None.
    """

    a_degree: tuple[int, ...]
    b_degree: tuple[int, ...]
    a_neighbors: tuple[tuple[int, ...], ...]
    b_neighbors: tuple[tuple[int, ...], ...]
    n2: tuple[tuple[int, ...], ...]
    sigma_b_max: tuple[int, ...]
    p_max_e: tuple[int, ...]
    p_bar_max: Fraction
    h: tuple[int, ...]
    h_max: int
    e_n: tuple[int, ...]
    e_n_max: int
    uniform_p: int | None


def compute_stats(game: ProjectionGame) -> InstanceStats:
    """Populate InstanceStats for a game.  Pure, no caching."""
    a_deg = tuple(len(x) for x in game.a_edges)
    b_deg = tuple(len(x) for x in game.b_edges)

    n2 = []
    for a in range(game.a_count):
        two_hop: set[int] = set()
        for b in game.a_neighbors[a]:
            two_hop.update(game.b_neighbors[b])
        n2.append(tuple(sorted(two_hop)))
    n2 = tuple(n2)

    sigma_b_max = []
    for b in range(game.b_count):
        best_sym, best_total = 0, -1
        for sb in range(game.sigma_b):
            total = sum(
                game.preimage_masks[e][sb].bit_count() for e in game.b_edges[b]
            )
            if total > best_total:
                best_sym, best_total = sb, total
        sigma_b_max.append(best_sym)
    sigma_b_max = tuple(sigma_b_max)

    p_max_e = tuple(
        game.preimage_masks[i][sigma_b_max[b]].bit_count()
        for i, (_, b) in enumerate(game.edges)
    )
    m = game.edge_count
    p_bar_max = Fraction(sum(p_max_e), m) if m else Fraction(0)

    e_n = tuple(
        sum(b_deg[b] for b in game.a_neighbors[a]) for a in range(game.a_count)
    )
    h = tuple(sum(a_deg[ap] for ap in n2[a]) for a in range(game.a_count))
    h_max = max(h, default=0)
    e_n_max = max(e_n, default=0)

    uniform_p: int | None = None
    if m and game.sigma_a % game.sigma_b == 0:
        want = game.sigma_a // game.sigma_b
        if all(
            mask.bit_count() == want
            for masks in game.preimage_masks
            for mask in masks
        ):
            uniform_p = want

    return InstanceStats(
        a_degree=a_deg,
        b_degree=b_deg,
        a_neighbors=game.a_neighbors,
        b_neighbors=game.b_neighbors,
        n2=n2,
        sigma_b_max=sigma_b_max,
        p_max_e=p_max_e,
        p_bar_max=p_bar_max,
        h=h,
        h_max=h_max,
        e_n=e_n,
        e_n_max=e_n_max,
        uniform_p=uniform_p,
    )


@dataclass(frozen=True)
class Component:
    """One connected component of a game, with maps back to the original.

    ``a_vertices``/``b_vertices``/``edge_indices`` give, for each local
    index, the original index it came from.
    """

    game: ProjectionGame
    a_vertices: tuple[int, ...]
    b_vertices: tuple[int, ...]
    edge_indices: tuple[int, ...]


def connected_components(game: ProjectionGame) -> list[Component]:
    """Split a game into its connected components.

    Isolated vertices become single-vertex components.  Components are
    ordered by their smallest global vertex; edge order inside a component
    follows the original edge order, so lifting sub-assignments back
    preserves value additively.
    """
    n = game.vertex_count
    comp_of = [-1] * n
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in game.edges:
        adj[a].append(game.a_count + b)
        adj[game.a_count + b].append(a)
    comps = 0
    for start in range(n):
        if comp_of[start] != -1:
            continue
        stack = [start]
        comp_of[start] = comps
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if comp_of[v] == -1:
                    comp_of[v] = comps
                    stack.append(v)
        comps += 1

    out = []
    for c in range(comps):
        a_verts = [a for a in range(game.a_count) if comp_of[a] == c]
        b_verts = [
            b for b in range(game.b_count) if comp_of[game.a_count + b] == c
        ]
        a_local = {a: i for i, a in enumerate(a_verts)}
        b_local = {b: i for i, b in enumerate(b_verts)}
        eids = [i for i, (a, _) in enumerate(game.edges) if comp_of[a] == c]
        sub = build_game(
            len(a_verts),
            len(b_verts),
            game.sigma_a,
            game.sigma_b,
            [(a_local[game.edges[i][0]], b_local[game.edges[i][1]]) for i in eids],
            [game.projections[i] for i in eids],
        )
        out.append(
            Component(sub, tuple(a_verts), tuple(b_verts), tuple(eids))
        )
    return out


def lift_assignment(
    game: ProjectionGame,
    components: list[Component],
    assignments: list[Assignment],
) -> Assignment:
    """Recombine per-component assignments into one for the whole game."""
    a_labels = [0] * game.a_count
    b_labels = [0] * game.b_count
    for comp, phi in zip(components, assignments):
        for local, orig in enumerate(comp.a_vertices):
            a_labels[orig] = phi.a_labels[local]
        for local, orig in enumerate(comp.b_vertices):
            b_labels[orig] = phi.b_labels[local]
    return Assignment(tuple(a_labels), tuple(b_labels))


@dataclass(frozen=True)
class SolveReport:
    """What a solver produced and what it promised.

    ``guarantee`` is an exact rational lower bound on the satisfied count
    that the algorithm's analysis certifies for this instance whenever its
    preconditions held (for the approximation algorithms: instance
    satisfiability).  ``guarantee_ratio_of_opt`` is set by solvers whose
    promise is relative to the unknown optimum (the planar scheme).
    ``breakdown`` carries per-subalgorithm values for combined solvers.
    """

    assignment: Assignment
    satisfied: int
    algorithm: str
    guarantee: Fraction
    elapsed: float
    seed: int | None = None
    guarantee_ratio_of_opt: Fraction | None = None
    breakdown: tuple[tuple[str, int], ...] | None = None
