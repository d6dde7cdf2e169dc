import random
from fractions import Fraction
from itertools import combinations, product

import pytest

import labelcover as lc
from labelcover import formats

from conftest import fixture_text


# --- independent oracles -----------------------------------------------------

def exhaustive_3coloring(g: lc.ColoringGraph):
    """Try every coloring outright; None if no proper one exists."""
    for colors in product(range(3), repeat=g.vertex_count):
        if all(colors[u] != colors[v] for u, v in g.edges):
            return colors
    return None


def k_graph(n):
    return lc.build_coloring_graph(n, list(combinations(range(n), 2)))


# --- 3-coloring reduction ------------------------------------------------------

def test_3col_triangle():
    game, _ = lc.from_planar_3col(k_graph(3))
    assert (game.a_count, game.b_count, game.edge_count) == (3, 3, 6)
    assert lc.is_satisfiable(game)
    _, val = lc.brute_force_opt(game)
    assert val == 6
    assert exhaustive_3coloring(k_graph(3)) is not None


def test_3col_single_edge_graph():
    g = lc.build_coloring_graph(2, [(0, 1)])
    game, maps = lc.from_planar_3col(g)
    assert game.sigma_a == 6 and game.sigma_b == 3
    assert game.edge_count == 2
    assert lc.is_satisfiable(game)
    assert len(maps.color_pairs) == 6
    assert len(set(maps.color_pairs)) == 6


def test_3col_k4_and_k5_unsatisfiable():
    for n in (4, 5):
        g = k_graph(n)
        game, _ = lc.from_planar_3col(g)
        assert exhaustive_3coloring(g) is None
        assert not lc.is_satisfiable(game)


def test_3col_preserves_planarity_bound():
    graph, _ = lc.gen_coloring_graph(3, 3, Fraction(4, 5), seed=2)
    game, _ = lc.from_planar_3col(graph)
    assert lc.euler_planarity_ok(game)


def test_extract_coloring_proper():
    g = k_graph(3)
    game, _ = lc.from_planar_3col(g)
    phi, val = lc.brute_force_opt(game)
    assert val == game.edge_count
    ext = lc.extract_coloring(g, game, phi)
    assert ext.proper
    assert len(set(ext.coloring)) == 3
    assert exhaustive_3coloring(g) is not None


def test_extract_coloring_violations():
    g = k_graph(3)
    game, _ = lc.from_planar_3col(g)
    bad = lc.Assignment((0,) * 3, (0,) * 3)
    ext = lc.extract_coloring(g, game, bad)
    assert not ext.proper
    assert ext.violated_edges


def test_extract_coloring_single_edge_distinct():
    g = lc.build_coloring_graph(2, [(0, 1)])
    game, _ = lc.from_planar_3col(g)
    phi, val = lc.brute_force_opt(game)
    assert val == 2
    ext = lc.extract_coloring(g, game, phi)
    assert ext.proper
    assert ext.coloring[0] != ext.coloring[1]


def all_graphs_up_to(n_max):
    """All non-isomorphic simple graphs on 1..n_max vertices."""
    import itertools

    out = []
    for n in range(1, n_max + 1):
        pairs = list(combinations(range(n), 2))
        seen = set()
        for bits in range(1 << len(pairs)):
            edges = frozenset(pairs[i] for i in range(len(pairs)) if bits >> i & 1)
            canon = min(
                tuple(sorted(
                    tuple(sorted((perm[u], perm[v]))) for u, v in edges
                ))
                for perm in itertools.permutations(range(n))
            )
            if canon in seen:
                continue
            seen.add(canon)
            out.append(lc.build_coloring_graph(n, sorted(edges)))
    return out


def test_3col_equivalence_small_graphs():
    graphs = all_graphs_up_to(4)
    assert len(graphs) == 1 + 2 + 4 + 11
    for g in graphs:
        game, _ = lc.from_planar_3col(g)
        colorable = exhaustive_3coloring(g) is not None
        if game.edge_count == 0:
            assert colorable
            continue
        assert lc.is_satisfiable(game) == colorable


# --- matrix tiling reduction -----------------------------------------------------

def singleton_tiling(k=2, pair=(1, 1), coord_max=2):
    return lc.build_matrix_tiling(k, coord_max, [{pair}] * (k * k))


def test_tiling_reduction_counts():
    for k in (2, 3):
        t = lc.gen_matrix_tiling(k, 2, 0.5, seed=k)
        game, _ = lc.from_matrix_tiling(t)
        assert game.a_count + game.b_count == 3 * k * k - 2 * k
        assert game.edge_count == 4 * k * k - 4 * k
        assert game.sigma_a == 4 and game.sigma_b == 4
        assert lc.euler_planarity_ok(game)


def test_tiling_constant_cells_satisfiable():
    t = singleton_tiling()
    game, _ = lc.from_matrix_tiling(t)
    assert lc.is_satisfiable(game)
    sol, opt = lc.brute_force_tiling(t)
    assert opt == 4
    assert lc.validate_tiling_solution(t, sol) == []


def test_tiling_one_incompatible_cell():
    cells = [{(1, 1)}] * 3 + [{(2, 2)}]
    t = lc.build_matrix_tiling(2, 2, cells)
    _, opt = lc.brute_force_tiling(t)
    assert opt == 3


def test_tiling_empty_cell_forces_wildcard():
    cells = [set(), {(1, 1)}, {(1, 1)}, {(1, 1)}]
    t = lc.build_matrix_tiling(2, 2, cells)
    sol, opt = lc.brute_force_tiling(t)
    assert sol.cells[0] is None
    assert opt <= 3


def test_tiling_budget():
    t = lc.gen_matrix_tiling(3, 2, 0.9, seed=0)
    with pytest.raises(lc.BudgetExceeded):
        lc.brute_force_tiling(t, budget=10)


def test_tiling_dual_oracle_properties():
    # first property: a full tiling selection makes the game satisfiable,
    # and vice versa (zero violated edges extract to zero wildcards).
    # second property, in the direction the extraction argument proves:
    # an assignment violating u edges yields a tiling with at most 2u
    # wildcards, so the tiling optimum is at least k^2 - 2(m - gopt).
    for seed in range(6):
        k = 2 if seed % 2 else 3
        t = lc.gen_matrix_tiling(k, 2, 0.4, seed=seed, solvable=(seed % 3 == 0))
        game, _ = lc.from_matrix_tiling(t)
        _, topt = lc.brute_force_tiling(t)
        _, gopt = lc.brute_force_opt(game)
        m = game.edge_count
        assert (topt == k * k) == (gopt == m)
        assert topt >= k * k - 2 * (m - gopt)


def test_tiling_second_property_literal_lower_bound_is_not_implied():
    # the proven inequality does not bound the game optimum from below:
    # here one wildcard suffices for the tiling yet two game edges fail
    cells = [{(1, 1)}, {(1, 1)}, {(2, 2)}, {(1, 1)}]
    t = lc.build_matrix_tiling(2, 2, cells)
    game, _ = lc.from_matrix_tiling(t)
    _, topt = lc.brute_force_tiling(t)
    _, gopt = lc.brute_force_opt(game)
    assert topt == 3
    assert 2 * gopt < 2 * game.edge_count - (4 - topt)
    # the proven direction still holds
    assert topt >= 4 - 2 * (game.edge_count - gopt)


def test_extract_tiling_zero_wildcards_on_satisfying():
    t = singleton_tiling()
    game, _ = lc.from_matrix_tiling(t)
    phi, val = lc.brute_force_opt(game)
    assert val == game.edge_count
    sol = lc.extract_tiling(t, game, phi)
    assert sol.chosen_count() == 4
    assert lc.validate_tiling_solution(t, sol) == []


def test_extract_tiling_single_violation():
    # cell (1,1) may pick (1,2): its row edge stays satisfied, its column
    # edge breaks, so exactly one violated edge and at most two wildcards
    cells = [{(1, 1), (1, 2)}, {(1, 1)}, {(1, 1)}, {(1, 1)}]
    t = lc.build_matrix_tiling(2, 2, cells)
    game, maps = lc.from_matrix_tiling(t)
    phi, val = lc.brute_force_opt(game)
    assert val == game.edge_count
    a_labels = list(phi.a_labels)
    a_labels[0] = maps.pair_symbol(1, 2)
    moved = lc.Assignment(tuple(a_labels), phi.b_labels)
    unsat = game.edge_count - lc.value(game, moved)
    assert unsat == 1
    sol = lc.extract_tiling(t, game, moved)
    assert lc.validate_tiling_solution(t, sol) == []
    assert 4 - sol.chosen_count() <= 2 * unsat


def test_extract_tiling_random_assignments_valid():
    t = lc.gen_matrix_tiling(3, 2, 0.5, seed=9, solvable=True)
    game, _ = lc.from_matrix_tiling(t)
    rng = random.Random(1)
    for _ in range(50):
        phi = lc.Assignment(
            tuple(rng.randrange(game.sigma_a) for _ in range(game.a_count)),
            tuple(rng.randrange(game.sigma_b) for _ in range(game.b_count)),
        )
        sol = lc.extract_tiling(t, game, phi)
        assert lc.validate_tiling_solution(t, sol) == []
        unsat = game.edge_count - lc.value(game, phi)
        assert 9 - sol.chosen_count() <= 2 * unsat


# --- generators -------------------------------------------------------------------

def test_gen_random_planted_value():
    for seed in range(8):
        g, plant = lc.gen_random_satisfiable(7, 5, 3, 2, 2, seed=seed)
        assert lc.value(g, plant) == g.edge_count
        assert min(len(e) for e in g.b_edges) >= 1


def test_gen_random_uniform_flag():
    g, plant = lc.gen_random_satisfiable(6, 6, 4, 2, 3, seed=4, uniform=True)
    assert lc.compute_stats(g).uniform_p == 2
    assert lc.value(g, plant) == g.edge_count


def test_gen_random_golden_bytes():
    g, _ = lc.gen_random_satisfiable(8, 8, 4, 2, 3, seed=42)
    assert formats.emit_labelcover(g) == fixture_text("random_seed42.lc")
    gu, _ = lc.gen_random_satisfiable(8, 8, 4, 2, 3, seed=42, uniform=True)
    assert formats.emit_labelcover(gu) == fixture_text("random_seed42_uniform.lc")


def test_gen_random_infeasible_params():
    with pytest.raises(lc.InfeasibleParams):
        lc.gen_random_satisfiable(3, 2, 2, 2, 5, seed=0)
    with pytest.raises(lc.InfeasibleParams):
        lc.gen_random_satisfiable(3, 3, 3, 2, 2, seed=0, uniform=True)


def test_gen_smooth_meets_target():
    g, report, plant = lc.gen_smooth(3, 8, 3, 4, 8, Fraction(1, 4), seed=6)
    assert report.mu <= Fraction(1, 4)
    assert report.mu == lc.measure_smoothness(g).mu
    assert lc.value(g, plant) == g.edge_count


def test_gen_smooth_trivial_target_never_rejects():
    g, report, plant = lc.gen_smooth(3, 6, 3, 3, 6, Fraction(1), seed=1)
    assert report.mu <= 1
    assert lc.value(g, plant) == g.edge_count


def test_gen_smooth_golden_bytes(smooth1):
    game, plant = smooth1
    g, _, p = lc.gen_smooth(4, 12, 3, 7, 12, Fraction(1, 12), seed=0)
    assert formats.emit_labelcover(g) == formats.emit_labelcover(game)
    assert p == plant


def test_gen_smooth_rejection_failure():
    with pytest.raises(lc.GenerationFailed):
        lc.gen_smooth(2, 2, 3, 2, 2, Fraction(0), seed=0, max_tries=50)


def test_gen_grid_shapes():
    g, plant = lc.gen_planar_grid(1, 2, 2, 2, seed=0)
    assert g.edge_count == 1
    g3, plant3 = lc.gen_planar_grid(3, 3, 3, 2, seed=5)
    assert lc.value(g3, plant3) == g3.edge_count
    assert lc.euler_planarity_ok(g3)


def test_gen_grid_golden_bytes():
    g, _ = lc.gen_planar_grid(4, 4, 3, 2, seed=7)
    assert formats.emit_labelcover(g) == fixture_text("grid4x4_seed7.lc")


def test_gen_coloring_graph_proper_and_planar():
    graph, coloring = lc.gen_coloring_graph(4, 4, Fraction(2, 3), seed=3)
    assert graph.claimed_planar
    for u, v in graph.edges:
        assert coloring[u] != coloring[v]
    game, _ = lc.from_planar_3col(graph)
    assert lc.is_satisfiable(game)


def test_gen_matrix_tiling_solvable_plant():
    t = lc.gen_matrix_tiling(3, 2, 0.3, seed=12, solvable=True)
    _, opt = lc.brute_force_tiling(t)
    assert opt == 9
