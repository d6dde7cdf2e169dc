import random
from fractions import Fraction

import pytest

import labelcover as lc


def identity_edge_game():
    return lc.build_game(1, 1, 2, 2, [(0, 0)], [(0, 1)])


# --- independent oracles -------------------------------------------------

def naive_value(game, a_labels, b_labels):
    return sum(
        1
        for (a, b), table in zip(game.edges, game.projections)
        if table[a_labels[a]] == b_labels[b]
    )


def naive_neighbor_sets(game):
    na = [set() for _ in range(game.a_count)]
    nb = [set() for _ in range(game.b_count)]
    for a, b in game.edges:
        na[a].add(b)
        nb[b].add(a)
    return na, nb


def naive_two_hop(game, a):
    na, nb = naive_neighbor_sets(game)
    out = set()
    for b in na[a]:
        out |= nb[b]
    return out


def naive_edges_touching(game, a_side_set, b_side_set):
    """|E(S)| by direct set expansion."""
    return sum(
        1 for a, b in game.edges if a in a_side_set or b in b_side_set
    )


def random_game(seed, n_a=4, n_b=4, k_a=3, k_b=2, p=0.6):
    """Random instance built directly, independent of the generators."""
    rng = random.Random(seed)
    edges = [
        (a, b) for a in range(n_a) for b in range(n_b) if rng.random() < p
    ]
    if not edges:
        edges = [(0, 0)]
    tables = [
        tuple(rng.randrange(k_b) for _ in range(k_a)) for _ in edges
    ]
    return lc.build_game(n_a, n_b, k_a, k_b, edges, tables)


# --- build_game ----------------------------------------------------------

def test_build_smallest_instance():
    g = identity_edge_game()
    assert g.edge_count == 1
    assert g.a_neighbors == ((0,),)


def test_build_symbol_out_of_range_names_edge():
    with pytest.raises(lc.SymbolOutOfRange) as err:
        lc.build_game(1, 1, 2, 2, [(0, 0)], [(0, 2)])
    assert "edge 0" in str(err.value)


def test_build_index_out_of_range_names_edge():
    with pytest.raises(lc.IndexOutOfRange) as err:
        lc.build_game(1, 1, 2, 2, [(0, 1)], [(0, 1)])
    assert "edge 0" in str(err.value)


def test_build_duplicate_edge():
    with pytest.raises(lc.DuplicateEdge) as err:
        lc.build_game(1, 2, 2, 2, [(0, 0), (0, 1), (0, 0)], [(0, 1)] * 3)
    assert "edge 2" in str(err.value)


def test_build_table_length_mismatch():
    with pytest.raises(lc.TableLengthMismatch) as err:
        lc.build_game(1, 1, 3, 2, [(0, 0)], [(0, 1)])
    assert "edge 0" in str(err.value)


def test_build_tiny1_matches_golden_stats(tiny1):
    game, _, golden = tiny1
    st = lc.compute_stats(game)
    assert list(st.a_degree) == golden["a_degree"]
    assert list(st.b_degree) == golden["b_degree"]
    assert [list(x) for x in st.n2] == golden["n2"]
    assert list(st.sigma_b_max) == golden["sigma_b_max"]
    assert list(st.p_max_e) == golden["p_max_e"]
    assert str(st.p_bar_max) == golden["p_bar_max"]
    assert list(st.h) == golden["h"] and st.h_max == golden["h_max"]
    assert list(st.e_n) == golden["e_n"] and st.e_n_max == golden["e_n_max"]
    assert st.uniform_p == golden["uniform_p"]


# --- value ---------------------------------------------------------------

def test_value_identity_satisfied():
    g = identity_edge_game()
    assert lc.value(g, lc.Assignment((0,), (0,))) == 1


def test_value_identity_mismatch():
    g = identity_edge_game()
    assert lc.value(g, lc.Assignment((0,), (1,))) == 0


def test_value_shape_mismatch():
    g = identity_edge_game()
    with pytest.raises(lc.ShapeMismatch):
        lc.value(g, lc.Assignment((0, 0), (0,)))
    with pytest.raises(lc.ShapeMismatch):
        lc.value(g, lc.Assignment((2,), (0,)))


def test_value_planted_tiny1(tiny1):
    game, plant, golden = tiny1
    assert lc.value(game, plant) == golden["planted_value"] == game.edge_count


def test_value_invariant_under_edge_reorder():
    for seed in range(5):
        g = random_game(seed)
        rng = random.Random(100 + seed)
        perm = list(range(g.edge_count))
        rng.shuffle(perm)
        g2 = lc.build_game(
            g.a_count,
            g.b_count,
            g.sigma_a,
            g.sigma_b,
            [g.edges[i] for i in perm],
            [g.projections[i] for i in perm],
        )
        phi = lc.Assignment(
            tuple(rng.randrange(g.sigma_a) for _ in range(g.a_count)),
            tuple(rng.randrange(g.sigma_b) for _ in range(g.b_count)),
        )
        assert lc.value(g, phi) == lc.value(g2, phi)


# --- compute_stats -------------------------------------------------------

def test_stats_bijective_tables():
    g = lc.build_game(2, 2, 2, 2, [(0, 0), (1, 1)], [(0, 1), (1, 0)])
    st = lc.compute_stats(g)
    assert st.uniform_p == 1
    assert st.p_bar_max == Fraction(1)


def test_stats_constant_projection():
    g = lc.build_game(1, 1, 3, 2, [(0, 0)], [(0, 0, 0)])
    st = lc.compute_stats(g)
    assert st.sigma_b_max == (0,)
    assert st.p_max_e == (3,)
    assert st.uniform_p is None


def test_stats_against_naive_set_expansion(tiny1):
    game = tiny1[0]
    games = [game] + [random_game(s) for s in range(10)]
    for g in games:
        st = lc.compute_stats(g)
        for a in range(g.a_count):
            two_hop = naive_two_hop(g, a)
            assert set(st.n2[a]) == two_hop
            assert st.h[a] == naive_edges_touching(g, two_hop, set())
            na, _ = naive_neighbor_sets(g)
            assert st.e_n[a] == naive_edges_touching(g, set(), na[a])
        assert st.h_max == max(st.h, default=0)
        assert st.e_n_max == max(st.e_n, default=0)


def test_stats_identities_random_sweep():
    for seed in range(30):
        g = random_game(seed, n_a=5, n_b=5)
        st = lc.compute_stats(g)
        assert sum(st.a_degree) == sum(st.b_degree) == g.edge_count
        for a in range(g.a_count):
            assert st.h[a] >= st.e_n[a] >= st.a_degree[a]


def test_pbar_max_at_least_one_on_planted():
    for seed in range(10):
        g, plant = lc.gen_random_satisfiable(5, 5, 3, 2, 2, seed=seed)
        st = lc.compute_stats(g)
        assert st.p_bar_max >= 1
        assert lc.value(g, plant) == g.edge_count


def test_uniform_flag_set_and_counterexample():
    g, _ = lc.gen_random_satisfiable(5, 5, 4, 2, 2, seed=9, uniform=True)
    assert lc.compute_stats(g).uniform_p == 2
    bad = lc.build_game(1, 1, 3, 2, [(0, 0)], [(0, 0, 1)])
    assert lc.compute_stats(bad).uniform_p is None
    # the generator without the flag produces an unbalanced table somewhere
    g2, _ = lc.gen_random_satisfiable(5, 5, 4, 2, 2, seed=9, uniform=False)
    assert lc.compute_stats(g2).uniform_p is None


def test_stats_carry_adjacency():
    g = lc.build_game(2, 2, 2, 2, [(0, 0), (0, 1), (1, 1)], [(0, 1)] * 3)
    st = lc.compute_stats(g)
    assert st.a_neighbors == ((0, 1), (1,))
    assert st.b_neighbors == ((0,), (0, 1))


# --- connected components ------------------------------------------------

def test_components_connected_game(tiny1):
    game = tiny1[0]
    comps = lc.connected_components(game)
    assert len(comps) == 1
    assert comps[0].game.edges == game.edges


def test_components_two_disjoint_edges():
    g = lc.build_game(2, 2, 2, 2, [(0, 0), (1, 1)], [(0, 1), (1, 0)])
    comps = lc.connected_components(g)
    assert len(comps) == 2
    assert all(c.game.edge_count == 1 for c in comps)


def test_components_isolated_vertices():
    g = lc.build_game(2, 2, 2, 2, [(0, 0)], [(0, 1)])
    comps = lc.connected_components(g)
    assert len(comps) == 3
    sizes = sorted((c.game.a_count, c.game.b_count) for c in comps)
    assert sizes == [(0, 1), (1, 0), (1, 1)]


def test_components_lifted_optima_match_whole():
    # three blocks, solved independently, must recombine to the whole optimum
    for seed in range(5):
        rng = random.Random(seed)
        edges, tables = [], []
        for block in range(3):
            for a in range(2):
                for b in range(2):
                    if rng.random() < 0.8:
                        edges.append((block * 2 + a, block * 2 + b))
                        tables.append(tuple(rng.randrange(2) for _ in range(2)))
        g = lc.build_game(6, 6, 2, 2, edges, tables)
        comps = lc.connected_components(g)
        parts = [lc.brute_force_opt(c.game)[0] for c in comps]
        lifted = lc.lift_assignment(g, comps, parts)
        _, whole = lc.brute_force_opt(g)
        assert lc.value(g, lifted) == whole
