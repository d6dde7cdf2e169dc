import random
from itertools import product

import pytest

import labelcover as lc


def naive_value(game, a_labels, b_labels):
    return sum(
        1
        for (a, b), table in zip(game.edges, game.projections)
        if table[a_labels[a]] == b_labels[b]
    )


def brute_both_sides(game):
    """Fully independent oracle: enumerate both sides outright."""
    best_val = -1
    for al in product(range(game.sigma_a), repeat=game.a_count):
        for bl in product(range(game.sigma_b), repeat=game.b_count):
            best_val = max(best_val, naive_value(game, al, bl))
    return best_val


def random_game(seed, n_a=3, n_b=3, k_a=3, k_b=2, p=0.6):
    rng = random.Random(seed)
    edges = [(a, b) for a in range(n_a) for b in range(n_b) if rng.random() < p]
    if not edges:
        edges = [(0, 0)]
    tables = [tuple(rng.randrange(k_b) for _ in range(k_a)) for _ in edges]
    return lc.build_game(n_a, n_b, k_a, k_b, edges, tables)


def path_game(k_a=2, k_b=2, tables=None):
    """a0 - b0 - a1: two edges."""
    edges = [(0, 0), (1, 0)]
    if tables is None:
        tables = [tuple(range(k_b)) + (0,) * (k_a - k_b)] * 2
    return lc.build_game(2, 1, k_a, k_b, edges, tables)


# --- brute force ----------------------------------------------------------

def test_brute_single_edge():
    g = lc.build_game(1, 1, 2, 2, [(0, 0)], [(0, 1)])
    phi, val = lc.brute_force_opt(g)
    assert val == 1 and lc.value(g, phi) == 1


def test_brute_tiny1_planted(tiny1):
    game, _, _ = tiny1
    phi, val = lc.brute_force_opt(game)
    assert val == game.edge_count
    assert lc.value(game, phi) == val


def test_brute_matches_double_enumeration():
    for seed in range(20):
        g = random_game(seed)
        phi, val = lc.brute_force_opt(g)
        assert lc.value(g, phi) == val
        assert val == brute_both_sides(g)


def test_brute_lexicographic_tie_break():
    # constant tables: every assignment satisfies everything, so the
    # all-zeros assignment must be returned
    g = lc.build_game(2, 2, 2, 2, [(0, 0), (1, 1)], [(0, 0), (0, 0)])
    phi, val = lc.brute_force_opt(g)
    assert val == 2
    assert phi == lc.Assignment((0, 0), (0, 0))


def test_brute_budget_exceeded():
    g, _ = lc.gen_random_satisfiable(10, 5, 4, 2, 2, seed=1)
    with pytest.raises(lc.BudgetExceeded):
        lc.brute_force_opt(g, budget=1000)


def test_brute_against_coloring_reduction():
    # diamond (K4 minus an edge) is 3-colorable, K4 itself needs 4 colors
    diamond = lc.build_coloring_graph(
        4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]
    )
    dgame, _ = lc.from_planar_3col(diamond)
    _, dval = lc.brute_force_opt(dgame)
    assert dval == dgame.edge_count
    k4 = lc.build_coloring_graph(
        4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    )
    game, _ = lc.from_planar_3col(k4)
    _, val = lc.brute_force_opt(game)
    assert val < game.edge_count
    assert not lc.is_satisfiable(game)
    wheel = lc.build_coloring_graph(
        6,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
         (5, 0), (5, 1), (5, 2), (5, 3), (5, 4)],
    )
    wgame, _ = lc.from_planar_3col(wheel)
    # planar but not 3-colorable: the satisfiability oracle must agree
    assert not lc.is_satisfiable(wgame)
    with pytest.raises(lc.BudgetExceeded):
        lc.brute_force_opt(wgame, budget=100_000)


def test_is_satisfiable_matches_brute():
    for seed in range(20):
        g = random_game(seed, k_b=3)
        _, val = lc.brute_force_opt(g)
        assert lc.is_satisfiable(g) == (val == g.edge_count)


# --- decomposition validation ----------------------------------------------

def test_validate_single_bag():
    g = path_game()
    td = lc.TreeDecomposition((frozenset({0, 1, 2}),), ())
    assert lc.validate_decomposition(g, td) == []
    assert td.width == 2


def test_validate_path_decomposition():
    g = path_game()
    # global ids: a0=0, a1=1, b0=2
    td = lc.TreeDecomposition((frozenset({0, 2}), frozenset({2, 1})), ((0, 1),))
    assert lc.validate_decomposition(g, td) == []
    assert td.width == 1


def test_validate_reports_missing_edge():
    g = path_game()
    td = lc.TreeDecomposition((frozenset({0, 2}), frozenset({1})), ((0, 1),))
    bad = lc.validate_decomposition(g, td)
    assert any("condition 2" in v and "edge 1" in v and "a1" in v for v in bad)


def test_validate_reports_coverage_and_connectivity():
    g = path_game()
    td = lc.TreeDecomposition((frozenset({0, 2}), frozenset({2})), ((0, 1),))
    bad = lc.validate_decomposition(g, td)
    assert any("condition 1" in v and "a1" in v for v in bad)
    td2 = lc.TreeDecomposition(
        (frozenset({0, 2}), frozenset({1}), frozenset({0, 2, 1})),
        ((0, 1), (1, 2)),
    )
    bad2 = lc.validate_decomposition(g, td2)
    assert any("condition 3" in v for v in bad2)


# --- heuristic and exact decompositions -------------------------------------

def test_heuristic_edgeless():
    g = lc.build_game(2, 2, 2, 2, [], [])
    td = lc.heuristic_decomposition(g)
    assert lc.validate_decomposition(g, td) == []
    assert td.width == 0


def test_heuristic_tree_width_one():
    # bipartite path a0-b0-a1-b1-a2 (a tree)
    g = lc.build_game(
        3, 2, 2, 2,
        [(0, 0), (1, 0), (1, 1), (2, 1)],
        [(0, 1)] * 4,
    )
    td = lc.heuristic_decomposition(g)
    assert lc.validate_decomposition(g, td) == []
    assert td.width == 1
    assert max(len(b) for b in td.bags) <= 2


def test_heuristic_grid_width_bounded():
    g, _ = lc.gen_planar_grid(4, 4, 2, 2, seed=3)
    td = lc.heuristic_decomposition(g)
    assert lc.validate_decomposition(g, td) == []
    assert td.width <= 6


def test_exact_decomposition_optimal_on_small_graphs():
    g, _ = lc.gen_planar_grid(3, 3, 2, 2, seed=5)
    td = lc.exact_decomposition(g)
    assert lc.validate_decomposition(g, td) == []
    heur = lc.heuristic_decomposition(g)
    assert td.width <= heur.width


# --- tree DP ----------------------------------------------------------------

def test_dp_single_bag_equals_brute(tiny1):
    game = tiny1[0]
    td = lc.TreeDecomposition((frozenset(range(game.vertex_count)),), ())
    phi, val = lc.tree_dp_solve(game, td)
    assert val == lc.brute_force_opt(game)[1]
    assert lc.value(game, phi) == val


def test_dp_path_width_one():
    g = path_game(tables=[(0, 1), (1, 0)])
    td = lc.TreeDecomposition((frozenset({0, 2}), frozenset({2, 1})), ((0, 1),))
    phi, val = lc.tree_dp_solve(g, td)
    assert val == lc.brute_force_opt(g)[1]
    assert lc.value(g, phi) == val


def test_dp_invalid_decomposition_raises():
    g = path_game()
    td = lc.TreeDecomposition((frozenset({0, 2}),), ())
    with pytest.raises(lc.InvalidDecomposition):
        lc.tree_dp_solve(g, td)


def test_dp_equals_brute_on_random_sweep():
    for seed in range(15):
        g = random_game(seed, n_a=3, n_b=3, k_a=3, k_b=3)
        td = lc.heuristic_decomposition(g)
        phi, val = lc.tree_dp_solve(g, td)
        assert val == lc.brute_force_opt(g)[1]
        assert lc.value(g, phi) == val


def test_dp_value_independent_of_decomposition():
    for seed in range(8):
        g = random_game(seed, n_a=4, n_b=3)
        td1 = lc.heuristic_decomposition(g)
        td2 = lc.exact_decomposition(g)
        td3 = lc.TreeDecomposition((frozenset(range(g.vertex_count)),), ())
        vals = {lc.tree_dp_solve(g, td)[1] for td in (td1, td2, td3)}
        assert len(vals) == 1


def test_dp_state_count_bound():
    for seed in range(6):
        g = random_game(seed, n_a=4, n_b=3)
        td = lc.heuristic_decomposition(g)
        _, _, stats = lc.tree_dp_solve(g, td, return_stats=True)
        bound = (g.sigma_a + g.sigma_b) ** (td.width + 1) * len(td.bags)
        assert stats["states"] <= bound


def test_dp_state_cap():
    g = random_game(3, n_a=4, n_b=4)
    td = lc.TreeDecomposition((frozenset(range(g.vertex_count)),), ())
    with pytest.raises(lc.BudgetExceeded):
        lc.tree_dp_solve(g, td, state_cap=10)


def test_dp_edge_net_count_is_one():
    # every edge is counted once at each bag containing both endpoints and
    # subtracted once per tree link whose shared set contains both
    for seed in range(10):
        g = random_game(seed, n_a=4, n_b=4)
        td = lc.heuristic_decomposition(g)
        assert lc.validate_decomposition(g, td) == []
        for a, b in g.edges:
            gb = g.a_count + b
            plus = sum(1 for bag in td.bags if a in bag and gb in bag)
            minus = sum(
                1
                for i, j in td.tree
                if a in td.bags[i] & td.bags[j] and gb in td.bags[i] & td.bags[j]
            )
            assert plus - minus == 1
