"""Polynomial-time approximation algorithms for satisfiable games.

Five algorithms, each certifying an exact rational lower bound on the
number of edges it satisfies whenever the instance is satisfiable, plus a
selector that runs all five and keeps the best.  The bounds interlock:
whatever the instance's shape, at least one of them is within a
4 * (a_count * sigma_a)^(1/4) factor of the edge count (see best_of).

All tie-breaking is smallest-index-wins so runs are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from time import perf_counter

from .core import (
    Assignment,
    InstanceStats,
    LabelCoverError,
    ProjectionGame,
    SolveReport,
    compute_stats,
    value,
)


class NotInSigmaStar(LabelCoverError):
    """The requested anchor symbol is not admissible for its vertex."""


class UniformAssumptionViolated(LabelCoverError):
    """A uniform-variant algorithm was run on a nonuniform instance."""


@dataclass(frozen=True)
class SigmaStarCache:
    """Admissible anchor symbols and their good-edge neighborhoods.

    A symbol s is admissible for vertex a when anchoring a at s and
    propagating to a's neighborhood leaves every two-hop vertex a
    consistent choice against every B vertex; on a satisfiable instance
    the all-satisfying label of a is always admissible.  For each
    admissible (a, s) the cache stores the neighbors reachable through at
    least one good edge (preimage size at most ``threshold``), the good
    two-hop set, the number of edges touching it (``h_star``), and the
    good-edge set itself (``e_star``, as edge indices).
    """

    threshold: Fraction
    sigma_star: tuple[tuple[int, ...], ...]
    n_star: dict[tuple[int, int], tuple[int, ...]]
    n2_star: dict[tuple[int, int], tuple[int, ...]]
    h_star: dict[tuple[int, int], int]
    e_star: dict[tuple[int, int], frozenset[int]]
    h_star_max: int
    h_star_argmax: tuple[int, int] | None


def compute_sigma_star(
    game: ProjectionGame, stats: InstanceStats | None = None
) -> SigmaStarCache:
    """Evaluate the admissibility definition exactly for every (a, symbol).

    A symbol s is kept for a iff for every B vertex b there is some B
    symbol t such that every two-hop vertex a' adjacent to b still has a
    candidate: the intersection of a's propagated preimages at a' with the
    preimage of t on (a', b) is nonempty.  B vertices with no two-hop
    member adjacent are vacuously fine.
    """
    stats = stats if stats is not None else compute_stats(game)
    pre = game.preimage_masks
    proj = game.projections
    eidx = game.edge_index
    full = (1 << game.sigma_a) - 1
    threshold = 2 * stats.p_bar_max

    sigma_star: list[tuple[int, ...]] = []
    n_star: dict[tuple[int, int], tuple[int, ...]] = {}
    n2_star: dict[tuple[int, int], tuple[int, ...]] = {}
    h_star: dict[tuple[int, int], int] = {}
    e_star: dict[tuple[int, int], frozenset[int]] = {}

    for a in range(game.a_count):
        nbrs = game.a_neighbors[a]
        nbr_set = set(nbrs)
        n2 = stats.n2[a]
        n2_set = set(n2)
        cand_bs = sorted({b for ap in n2 for b in game.a_neighbors[ap]})
        admissible = []
        for sa in range(game.sigma_a):
            propagated = {b: proj[eidx[(a, b)]][sa] for b in nbrs}
            s_mask = {}
            for ap in n2:
                mask = full
                for b2 in game.a_neighbors[ap]:
                    if b2 in nbr_set:
                        mask &= pre[eidx[(ap, b2)]][propagated[b2]]
                s_mask[ap] = mask
            ok = True
            for b in cand_bs:
                members = [ap for ap in game.b_neighbors[b] if ap in n2_set]
                if not members:
                    continue
                if not any(
                    all(s_mask[ap] & pre[eidx[(ap, b)]][sb] for ap in members)
                    for sb in range(game.sigma_b)
                ):
                    ok = False
                    break
            if not ok:
                continue
            admissible.append(sa)

            good_b = []
            good_two_hop: set[int] = set()
            good_edges: set[int] = set()
            for b in nbrs:
                sb = propagated[b]
                hits = [
                    ap
                    for ap in game.b_neighbors[b]
                    if pre[eidx[(ap, b)]][sb].bit_count() <= threshold
                ]
                if hits:
                    good_b.append(b)
                    good_two_hop.update(hits)
                    good_edges.update(eidx[(ap, b)] for ap in hits)
            n_star[(a, sa)] = tuple(good_b)
            n2_star[(a, sa)] = tuple(sorted(good_two_hop))
            h_star[(a, sa)] = sum(stats.a_degree[ap] for ap in good_two_hop)
            e_star[(a, sa)] = frozenset(good_edges)
        sigma_star.append(tuple(admissible))

    h_star_max = 0
    argmax: tuple[int, int] | None = None
    for a in range(game.a_count):
        for sa in sigma_star[a]:
            if argmax is None or h_star[(a, sa)] > h_star_max:
                h_star_max = h_star[(a, sa)]
                argmax = (a, sa)
    return SigmaStarCache(
        threshold=threshold,
        sigma_star=tuple(sigma_star),
        n_star=n_star,
        n2_star=n2_star,
        h_star=h_star,
        e_star=e_star,
        h_star_max=h_star_max if argmax is not None else 0,
        h_star_argmax=argmax,
    )


def _lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def satisfy_one_neighbor(game: ProjectionGame) -> SolveReport:
    """Give every A vertex the zero symbol; let each B vertex match one edge.

    Each B vertex with at least one edge is satisfied along its
    smallest-index incident edge, so the value is at least the number of
    non-isolated B vertices (the full B count on instances without
    isolated vertices).
    """
    t0 = perf_counter()
    a_labels = (0,) * game.a_count
    b_labels = []
    covered = 0
    for b in range(game.b_count):
        eids = game.b_edges[b]
        if eids:
            b_labels.append(game.projections[min(eids)][0])
            covered += 1
        else:
            b_labels.append(0)
    phi = Assignment(a_labels, tuple(b_labels))
    return SolveReport(
        assignment=phi,
        satisfied=value(game, phi),
        algorithm="one-neighbor",
        guarantee=Fraction(covered),
        elapsed=perf_counter() - t0,
    )


def greedy_assignment(
    game: ProjectionGame, stats: InstanceStats | None = None
) -> SolveReport:
    """Preimage-greedy labels: B takes the heaviest symbol, A responds.

    Every B vertex takes the symbol whose preimages over its incident
    edges are largest in total; every A vertex then takes the symbol
    satisfying the most incident edges.  The averaging argument over A
    symbols certifies at least |E| * p_bar_max / sigma_a satisfied edges.
    """
    t0 = perf_counter()
    stats = stats if stats is not None else compute_stats(game)
    b_labels = stats.sigma_b_max
    a_labels = []
    for a in range(game.a_count):
        best_s, best_cnt = 0, -1
        for sa in range(game.sigma_a):
            cnt = 0
            for e in game.a_edges[a]:
                if game.projections[e][sa] == b_labels[game.edges[e][1]]:
                    cnt += 1
            if cnt > best_cnt:
                best_s, best_cnt = sa, cnt
        a_labels.append(best_s)
    phi = Assignment(tuple(a_labels), b_labels)
    guarantee = Fraction(sum(stats.p_max_e), game.sigma_a)
    return SolveReport(
        assignment=phi,
        satisfied=value(game, phi),
        algorithm="greedy",
        guarantee=guarantee,
        elapsed=perf_counter() - t0,
    )


def know_your_neighbors(
    game: ProjectionGame,
    a0: int,
    sigma_a0: int,
    stats: InstanceStats | None = None,
    cache: SigmaStarCache | None = None,
) -> SolveReport:
    """Anchor a0 at an admissible symbol and satisfy its whole neighborhood.

    Propagating the anchor fixes every neighbor of a0; admissibility
    guarantees every two-hop vertex keeps a consistent symbol, so every
    edge touching the neighborhood of a0 is satisfied: at least
    e_n(a0) edges.
    """
    t0 = perf_counter()
    stats = stats if stats is not None else compute_stats(game)
    cache = cache if cache is not None else compute_sigma_star(game, stats)
    if sigma_a0 not in cache.sigma_star[a0]:
        raise NotInSigmaStar(f"symbol {sigma_a0} is not admissible for a{a0}")

    pre = game.preimage_masks
    proj = game.projections
    eidx = game.edge_index
    full = (1 << game.sigma_a) - 1
    nbr_set = set(game.a_neighbors[a0])

    b_labels = [0] * game.b_count
    for b in game.a_neighbors[a0]:
        b_labels[b] = proj[eidx[(a0, b)]][sigma_a0]
    a_labels = [0] * game.a_count
    for ap in stats.n2[a0]:
        mask = full
        for b in game.a_neighbors[ap]:
            if b in nbr_set:
                mask &= pre[eidx[(ap, b)]][b_labels[b]]
        a_labels[ap] = _lowest_bit(mask) if mask else 0
    phi = Assignment(tuple(a_labels), tuple(b_labels))
    return SolveReport(
        assignment=phi,
        satisfied=value(game, phi),
        algorithm="kyn",
        guarantee=Fraction(stats.e_n[a0]),
        elapsed=perf_counter() - t0,
    )


def _kynn_single(game, stats, a0, s0, scope, pinned_empty_skips):
    """One anchored pass: propagate, score B symbols over the scope,
    then let every A vertex respond inside its candidate set.

    Returns (a_labels, b_labels) or None when a candidate set is empty
    and ``pinned_empty_skips`` asks to skip this anchor.
    """
    pre = game.preimage_masks
    proj = game.projections
    eidx = game.edge_index
    full = (1 << game.sigma_a) - 1
    nbr_set = set(game.a_neighbors[a0])

    propagated = {b: proj[eidx[(a0, b)]][s0] for b in game.a_neighbors[a0]}
    s_mask = [full] * game.a_count
    for ap in stats.n2[a0]:
        mask = full
        for b in game.a_neighbors[ap]:
            if b in nbr_set:
                mask &= pre[eidx[(ap, b)]][propagated[b]]
        if mask == 0 and pinned_empty_skips:
            return None
        s_mask[ap] = mask

    scope_set = set(scope)
    b_labels = []
    for b in range(game.b_count):
        members = [ap for ap in game.b_neighbors[b] if ap in scope_set]
        best_s, best_score = 0, -1
        for sb in range(game.sigma_b):
            score = 0
            for ap in members:
                score += (pre[eidx[(ap, b)]][sb] & s_mask[ap]).bit_count()
            if score > best_score:
                best_s, best_score = sb, score
        b_labels.append(best_s)

    a_labels = []
    for a in range(game.a_count):
        mask = s_mask[a] if s_mask[a] else full
        best_s, best_cnt = None, -1
        mm = mask
        while mm:
            low = mm & -mm
            sa = low.bit_length() - 1
            mm ^= low
            cnt = 0
            for e in game.a_edges[a]:
                if proj[e][sa] == b_labels[game.edges[e][1]]:
                    cnt += 1
            if cnt > best_cnt:
                best_s, best_cnt = sa, cnt
        a_labels.append(best_s if best_s is not None else 0)
    return tuple(a_labels), tuple(b_labels)


def know_neighbors_neighbors(
    game: ProjectionGame,
    a0: int,
    stats: InstanceStats | None = None,
    cache: SigmaStarCache | None = None,
    uniform: bool = False,
) -> SolveReport:
    """Try every anchor symbol for a0 and keep the best resulting pass.

    In the canonical variant the anchors range over the admissible set of
    a0 and the pass scores B symbols over the good two-hop set; the best
    pass satisfies at least h_star(a0, s) / (2 * p_bar_max) edges for
    every anchor s it tried.  The uniform variant requires evenly
    splitting tables, ranges over the whole alphabet, skips anchors that
    empty some candidate set, and certifies h(a0) / uniform_p.
    """
    t0 = perf_counter()
    stats = stats if stats is not None else compute_stats(game)

    best: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    best_val = -1
    if uniform:
        if stats.uniform_p is None:
            raise UniformAssumptionViolated(
                "instance tables do not split evenly; use the canonical variant"
            )
        for s0 in range(game.sigma_a):
            out = _kynn_single(game, stats, a0, s0, stats.n2[a0], True)
            if out is None:
                continue
            val = value(game, Assignment(*out))
            if val > best_val:
                best, best_val = out, val
        guarantee = Fraction(stats.h[a0], stats.uniform_p)
    else:
        cache = cache if cache is not None else compute_sigma_star(game, stats)
        guarantee = Fraction(0)
        for s0 in cache.sigma_star[a0]:
            out = _kynn_single(game, stats, a0, s0, cache.n2_star[(a0, s0)], False)
            val = value(game, Assignment(*out))
            if val > best_val:
                best, best_val = out, val
            if stats.p_bar_max > 0:
                bound = Fraction(cache.h_star[(a0, s0)]) / (2 * stats.p_bar_max)
                guarantee = max(guarantee, bound)

    if best is None:
        phi = Assignment((0,) * game.a_count, (0,) * game.b_count)
        best_val = value(game, phi)
        guarantee = Fraction(0)
    else:
        phi = Assignment(*best)
    return SolveReport(
        assignment=phi,
        satisfied=best_val,
        algorithm="kynn-uniform" if uniform else "kynn",
        guarantee=guarantee,
        elapsed=perf_counter() - t0,
    )


def divide_and_conquer(
    game: ProjectionGame,
    stats: InstanceStats | None = None,
    cache: SigmaStarCache | None = None,
    uniform: bool = False,
) -> SolveReport:
    """Greedily carve off fully-satisfiable neighborhoods.

    While some anchor still has enough live edges in its (good)
    neighborhood region, claim the region, satisfy every edge inside it by
    propagating the anchor, and retire its vertices.  The canonical
    variant anchors on admissible (vertex, symbol) pairs with live good
    edges at least |E|^2 / (16 nA nB) and certifies
    |E|^3 / (64 nA nB (h_star_max + e_n_max)); the uniform variant anchors
    on vertices with live region edges at least |E|^2 / (4 nA nB) and
    certifies |E|^3 / (8 nA nB h_max).
    """
    t0 = perf_counter()
    stats = stats if stats is not None else compute_stats(game)
    n_a, n_b, m = game.a_count, game.b_count, game.edge_count
    a_labels = [0] * n_a
    b_labels = [0] * n_b

    def finish(guarantee: Fraction) -> SolveReport:
        phi = Assignment(tuple(a_labels), tuple(b_labels))
        return SolveReport(
            assignment=phi,
            satisfied=value(game, phi),
            algorithm="dnc-uniform" if uniform else "dnc",
            guarantee=guarantee,
            elapsed=perf_counter() - t0,
        )

    if m == 0 or n_a == 0 or n_b == 0:
        return finish(Fraction(0))

    pre = game.preimage_masks
    proj = game.projections
    eidx = game.edge_index
    full = (1 << game.sigma_a) - 1

    if uniform:
        keys: list[tuple[int, int | None]] = [(a, None) for a in range(n_a)]
        regions = {}
        for a in range(n_a):
            regions[(a, None)] = frozenset(
                e for b in game.a_neighbors[a] for e in game.b_edges[b]
            )
        factor = 4
        guarantee = (
            Fraction(m**3, 8 * n_a * n_b * stats.h_max)
            if stats.h_max
            else Fraction(0)
        )
    else:
        cache = cache if cache is not None else compute_sigma_star(game, stats)
        keys = [
            (a, sa) for a in range(n_a) for sa in cache.sigma_star[a]
        ]
        regions = {(a, sa): cache.e_star[(a, sa)] for a, sa in keys}
        factor = 16
        denom = cache.h_star_max + stats.e_n_max
        guarantee = Fraction(m**3, 64 * n_a * n_b * denom) if denom else Fraction(0)

    owners: list[list[int]] = [[] for _ in range(m)]
    for ki, key in enumerate(keys):
        for e in regions[key]:
            owners[e].append(ki)
    live = [len(regions[key]) for key in keys]
    edge_alive = [True] * m
    in_vp = [False] * (n_a + n_b)
    incident: list[list[int]] = [[] for _ in range(n_a + n_b)]
    for e, (a, b) in enumerate(game.edges):
        incident[a].append(e)
        incident[n_a + b].append(e)

    def retire(vertices_global):
        for v in vertices_global:
            if in_vp[v]:
                continue
            in_vp[v] = True
            for e in incident[v]:
                if edge_alive[e]:
                    edge_alive[e] = False
                    for ki in owners[e]:
                        live[ki] -= 1

    while True:
        chosen = None
        for ki, key in enumerate(keys):
            if factor * n_a * n_b * live[ki] >= m * m and live[ki] > 0:
                chosen = (ki, key)
                break
        if chosen is None:
            break
        _, (a, sa) = chosen

        if uniform:
            p_b = [b for b in game.a_neighbors[a] if not in_vp[n_a + b]]
            p_a = [ap for ap in stats.n2[a] if not in_vp[ap]]
            # try anchors until the whole region propagates; an
            # unsatisfiable region just keeps its default labels
            for try_sa in range(game.sigma_a):
                blab = {b: proj[eidx[(a, b)]][try_sa] for b in p_b}
                alab = {}
                ok = True
                for ap in p_a:
                    if ap == a:
                        continue
                    mask = full
                    for b in game.a_neighbors[ap]:
                        if b in blab:
                            mask &= pre[eidx[(ap, b)]][blab[b]]
                    if mask == 0:
                        ok = False
                        break
                    alab[ap] = _lowest_bit(mask)
                if ok:
                    for b, s in blab.items():
                        b_labels[b] = s
                    for ap, s in alab.items():
                        a_labels[ap] = s
                    if not in_vp[a]:
                        a_labels[a] = try_sa
                    break
        else:
            nbr_set = set(game.a_neighbors[a])
            p_b = [b for b in cache.n_star[(a, sa)] if not in_vp[n_a + b]]
            p_a = [ap for ap in cache.n2_star[(a, sa)] if not in_vp[ap]]
            for b in p_b:
                b_labels[b] = proj[eidx[(a, b)]][sa]
            if not in_vp[a]:
                a_labels[a] = sa
            for ap in p_a:
                if ap == a:
                    continue
                mask = full
                for b in game.a_neighbors[ap]:
                    if b in nbr_set:
                        mask &= pre[eidx[(ap, b)]][proj[eidx[(a, b)]][sa]]
                if mask:
                    a_labels[ap] = _lowest_bit(mask)

        retire([n_a + b for b in p_b] + list(p_a))

    return finish(guarantee)


def best_of(
    game: ProjectionGame,
    stats: InstanceStats | None = None,
    cache: SigmaStarCache | None = None,
) -> SolveReport:
    """Run all five algorithms and return the best report.

    On a satisfiable instance the combined value is at least
    |E| / (4 * (a_count * sigma_a)^(1/4)).  Derivation: write nB for the
    B-side size, p for p_bar_max, h for h_star_max, EN for e_n_max, and
    D = 64 nA nB (h + EN) for the divide-and-conquer denominator.  The
    five certified bounds are nB, |E| p / kA, EN, h / (2p), |E|^3 / D.
    If h >= EN then D <= 128 nA nB h and the product of bounds one, two,
    four and five is at least |E|^4 / (256 nA kA); if EN > h then
    D <= 128 nA nB EN and the product of bounds one, two, three and five
    is at least |E|^4 p / (128 nA kA), with p >= 1 on satisfiable
    instances.  The maximum of four numbers is at least their geometric
    mean, so in both cases some bound is at least
    |E| / (256 nA kA)^(1/4) >= |E| / (4 (nA kA)^(1/4)).
    """
    t0 = perf_counter()
    stats = stats if stats is not None else compute_stats(game)
    cache = cache if cache is not None else compute_sigma_star(game, stats)

    reports = [satisfy_one_neighbor(game), greedy_assignment(game, stats)]
    if game.a_count and game.edge_count:
        a0 = max(range(game.a_count), key=lambda a: (stats.e_n[a], -a))
        if cache.sigma_star[a0]:
            reports.append(
                know_your_neighbors(game, a0, cache.sigma_star[a0][0], stats, cache)
            )
    if cache.h_star_argmax is not None:
        reports.append(
            know_neighbors_neighbors(game, cache.h_star_argmax[0], stats, cache)
        )
    reports.append(divide_and_conquer(game, stats, cache))

    winner = reports[0]
    for rep in reports[1:]:
        if rep.satisfied > winner.satisfied:
            winner = rep
    return SolveReport(
        assignment=winner.assignment,
        satisfied=winner.satisfied,
        algorithm=f"best({winner.algorithm})",
        guarantee=max(rep.guarantee for rep in reports),
        elapsed=perf_counter() - t0,
        breakdown=tuple((rep.algorithm, rep.satisfied) for rep in reports),
    )
