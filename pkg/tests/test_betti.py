"""Closed forms, the recursion, block elimination, and method dispatch."""

from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from foldbetti import (
    BettiTable,
    b1_k3_veronese,
    b1_singular_line_arrangement,
    b1_tutte,
    b1_veronese,
    betti_cm_generic,
    betti_from_b1_height_km1,
    betti_from_hilbert,
    betti_height1_reduce,
    betti_k3_block,
    betti_maximal_power,
    betti_nminus1,
    betti_nminus2_arrangement,
    betti_rank2,
    betti_recursion,
    compute_betti,
    essentialize,
    height_of_fold_ideal,
    herzog_kuhl_residuals,
    hilbert_function,
    normalize,
    rank2_flats,
)

from conftest import make_random_collection


def count_capped_monomials(caps, a):
    """Oracle for the coordinate-collection generator counts."""
    k = len(caps)

    def rec(i, left):
        if i == k:
            return 1 if left == 0 else 0
        return sum(rec(i + 1, left - e) for e in range(min(caps[i], left) + 1))

    return rec(0, a)


def test_table_invariants():
    with pytest.raises(ValueError):
        BettiTable(1, 3, (1, 0, 2))
    with pytest.raises(ValueError):
        BettiTable(1, 2, (3, -1))
    with pytest.raises(ValueError):
        BettiTable(1, 2, (3,))
    assert BettiTable(1, 3, (0, 0, 0)).pdim == 0


def test_b1_tutte_column(example_2_5):
    assert [b1_tutte(example_2_5, a) for a in range(1, 8)] == [3, 6, 10, 14, 14, 6, 1]


def test_b1_tutte_extremes(example_2_5):
    assert b1_tutte(example_2_5, 7) == 1
    sigma = normalize([((1, 0), 1), ((0, 1), 1)], 2)
    assert b1_tutte(sigma, 1) == 2
    with pytest.raises(ValueError):
        b1_tutte(example_2_5, 8)


def test_maximal_power_tables():
    assert betti_maximal_power(3, 3).b == (10, 15, 6)
    assert betti_maximal_power(3, 2).b == (6, 8, 3)
    assert betti_maximal_power(1, 5).b == (1,)


def test_maximal_power_against_oracle():
    # 2-generic 7 lines: d_1 = 5, so folds up to 5 give maximal-ideal powers
    sigma = normalize([((1, t, t * t), 1) for t in range(7)], 3)
    assert betti_from_hilbert(sigma, 3) == betti_maximal_power(3, 3)


def test_height_km1_solve():
    assert betti_from_b1_height_km1(3, 4, 14).b == (14, 22, 9)
    assert betti_from_b1_height_km1(3, 5, 14).b == (14, 21, 8)
    assert betti_from_b1_height_km1(2, 3, 4).b == (4, 3)


def test_rank2_tables(example_4_3):
    assert betti_rank2(example_4_3, 3).b == (3, 2)
    mixed = normalize([((1, 0), 2), ((0, 1), 2), ((1, 2), 1)], 2)
    assert betti_rank2(mixed, 4).b == (3, 2)
    low = normalize([((1, 0), 1), ((0, 1), 1), ((1, 1), 2)], 2)
    d1 = low.n - max(low.multiplicities)
    for a in range(1, d1 + 1):
        assert betti_rank2(low, a).b == (a + 1, a)


def test_rank2_rank1_principal():
    sigma = normalize([((1, 1), 4)], 2)
    assert betti_rank2(sigma, 2).b == (1,)


def test_height1_reduce_example(example_2_5):
    reduced, e = betti_height1_reduce(example_2_5, 6)
    assert e == 5
    assert reduced.n == 6
    assert reduced.multiplicities == (1, 1, 1, 1, 1, 1)


def test_height1_reduce_small(example_4_3):
    reduced, e = betti_height1_reduce(example_4_3, 4)
    assert e == 1
    assert [(tuple(f.coeffs), m) for f, m in reduced.groups] == [((0, 1), 1), ((1, 0), 1)]
    outer = betti_recursion(example_4_3, 4)
    inner = betti_recursion(reduced, 1)
    assert (outer.k, outer.b) == (inner.k, inner.b)
    assert outer == betti_from_hilbert(example_4_3, 4)


def test_height1_reduce_tiny():
    sigma = normalize([((1, 0), 2), ((0, 1), 1)], 2)
    reduced, e = betti_height1_reduce(sigma, 2)
    assert e == 1
    assert reduced.multiplicities == (1, 1)


def test_height1_reduce_preconditions(example_2_5):
    with pytest.raises(ValueError):
        betti_height1_reduce(example_2_5, 7)  # a = n is the principal case
    with pytest.raises(ValueError):
        betti_height1_reduce(example_2_5, 4)  # height 2 window


def test_nminus1_tables(example_2_5):
    two_generic = normalize(
        [((1, 0, 0), 1), ((0, 1, 0), 1), ((1, 0, -1), 1), ((0, 1, 1), 1), ((1, 2, 5), 1)], 3
    )
    assert betti_nminus1(two_generic).b == (5, 4, 0)
    principal = normalize([((1, 0), 4)], 2)
    assert betti_nminus1(principal).b == (1,)
    pair = normalize([((1, 0), 1), ((0, 1), 1)], 2)
    assert betti_nminus1(pair).b == (2, 1)


def test_cm_generic_tables():
    two_generic = normalize(
        [((1, 0, 0), 1), ((0, 1, 0), 1), ((1, 0, -1), 1), ((0, 1, 1), 1), ((1, 2, 5), 1)], 3
    )
    table = betti_cm_generic(two_generic, 3)
    assert table.b == (10, 15, 6)
    # star-configuration reindexing of the same binomials
    n, c = 5, 3
    a = n - c + 1
    star = betti_cm_generic(two_generic, a)
    assert star.b[:c] == tuple(
        comb(n, c - i) * comb(n - c + i - 1, i - 1) for i in range(1, c + 1)
    )
    assert betti_cm_generic(two_generic, 5).b == (1, 0, 0)


def test_cm_generic_rejects_nongeneric(example_2_5):
    with pytest.raises(ValueError, match="generic"):
        betti_cm_generic(example_2_5, 5)


def test_nminus2_arrangement_generic():
    generic = normalize([((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1), ((1, 1, 1), 1)], 3)
    assert betti_nminus2_arrangement(generic).b == (6, 8, 3)
    assert betti_nminus2_arrangement(generic) == betti_cm_generic(generic, 2)


def test_nminus2_arrangement_example(example_3_6):
    table = betti_nminus2_arrangement(example_3_6)
    beta = sum(comb(size - 1, 2) for _, size in rank2_flats(example_3_6))
    assert table.b[0] == comb(8, 2) - beta
    assert table == betti_from_hilbert(example_3_6, 6)


def test_nminus2_arrangement_triangle():
    triangle = normalize([((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1)], 3)
    assert betti_nminus2_arrangement(triangle).b == (3, 3, 1)
    assert betti_nminus2_arrangement(triangle) == betti_maximal_power(3, 1)


def test_nminus2_arrangement_preconditions(example_2_5):
    with pytest.raises(ValueError):
        betti_nminus2_arrangement(example_2_5)  # multiplicity 2 present


def test_b1_veronese_values():
    assert b1_veronese((3, 2), 2, 3) == 3
    assert b1_veronese((1,) * 4, 4, 4) == 1
    assert b1_veronese((2, 2, 2), 3, 2) == 6
    assert b1_veronese((3, 2), 2, 3) == count_capped_monomials((3, 2), 3)


def test_b1_veronese_fold_guard():
    with pytest.raises(ValueError):
        b1_veronese((3, 2), 2, 2)
    assert b1_veronese((3, 2), 2, 2, allow_any_fold=True) == count_capped_monomials((3, 2), 2)


def test_b1_k3_veronese_values():
    assert b1_k3_veronese(5, 2, 1, 2) == 5
    assert b1_k3_veronese(5, 2, 1, 2) == count_capped_monomials((5, 2, 1), 2)
    assert b1_k3_veronese(5, 2, 1, 3) == 6
    assert b1_k3_veronese(5, 2, 1, 3) == count_capped_monomials((5, 2, 1), 3)


def test_b1_k3_veronese_branch_seam():
    # m2 = m3 + 1 makes a = m2 = m3 + 1 sit on the branch boundary
    for m1, m3 in ((6, 2), (7, 3)):
        m2 = m3 + 1
        a = m2
        assert b1_k3_veronese(m1, m2, m3, a) == count_capped_monomials((m1, m2, m3), a)


def test_b1_k3_veronese_preconditions():
    with pytest.raises(ValueError):
        b1_k3_veronese(3, 2, 2, 3)  # m1 < m3 + 2
    with pytest.raises(ValueError):
        b1_k3_veronese(5, 2, 1, 5)  # a > m2 + m3


def test_singular_line_arrangement(example_3_6):
    assert b1_singular_line_arrangement(example_3_6) == 19
    assert b1_tutte(example_3_6, 5) == 19


def test_singular_line_arrangement_replacement(example_3_6):
    # swap the last line for one through neither 4-fold point
    raw = [(f.coeffs, m) for f, m in example_3_6.groups if tuple(f.coeffs) != (1, 1, -2)]
    raw.append(((0, 1, -1), 1))
    replaced = normalize(raw, 3)
    assert b1_singular_line_arrangement(replaced) == 19
    assert b1_tutte(replaced, 5) == 19


def test_singular_line_arrangement_near_pencil():
    pencil = normalize(
        [((1, 0, 0), 1), ((0, 1, 0), 1), ((1, -1, 0), 1), ((1, 1, 0), 1), ((0, 0, 1), 1)], 3
    )
    assert b1_singular_line_arrangement(pencil) == 5
    assert b1_tutte(pencil, 2) == 5


def test_singular_line_arrangement_rejects_generic():
    generic = normalize([((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1), ((1, 1, 1), 1)], 3)
    with pytest.raises(ValueError, match="collinear"):
        b1_singular_line_arrangement(generic)


def test_herzog_kuhl_values():
    assert herzog_kuhl_residuals(BettiTable(4, 3, (14, 22, 9)), 4, 2) == (0, 0)
    assert herzog_kuhl_residuals(BettiTable(7, 3, (1, 0, 0)), 7, 1) == (0,)
    assert herzog_kuhl_residuals(betti_maximal_power(3, 2), 2, 3) == (0, 0, 0)


def test_recursion_golden(example_2_5):
    assert betti_recursion(example_2_5, 4).b == (14, 22, 9)
    assert betti_recursion(example_2_5, 5).b == (14, 21, 8)
    assert betti_recursion(example_2_5, 6).b == (6, 5, 0)


def test_recursion_bounds(example_2_5):
    assert betti_recursion(example_2_5, 8).b == (0, 0, 0)
    with pytest.raises(ValueError):
        betti_recursion(example_2_5, 0)


def test_block_elimination(example_2_5):
    assert betti_k3_block(example_2_5, 4) == betti_recursion(example_2_5, 4)
    caps = normalize([((1, 0, 0), 5), ((0, 1, 0), 2), ((0, 0, 1), 1)], 3)
    assert betti_k3_block(caps, 2).b[0] == 5
    assert betti_k3_block(caps, 9).b == (0, 0, 0)


def test_block_matches_recursion(rng):
    checked = 0
    while checked < 25:
        sigma = make_random_collection(rng, max_k=3)
        if essentialize(sigma).k != 3:
            continue
        for a in range(1, sigma.n + 1):
            assert betti_k3_block(sigma, a) == betti_recursion(sigma, a), (sigma, a)
        checked += 1


def test_compute_betti_methods(example_2_5):
    expected = BettiTable(4, 3, (14, 22, 9))
    for method in ("auto", "recursion", "tutte_hk", "oracle"):
        assert compute_betti(example_2_5, 4, method) == expected
    assert compute_betti(example_2_5, 7, "auto").b == (1, 0, 0)
    assert compute_betti(example_2_5, 8, "auto").b == (0, 0, 0)
    with pytest.raises(ValueError):
        compute_betti(example_2_5, 8, "recursion")
    with pytest.raises(ValueError):
        compute_betti(example_2_5, 4, "newton")


def test_tutte_hk_full_k3_coverage(example_2_5):
    for a in range(1, 8):
        assert compute_betti(example_2_5, a, "tutte_hk") == betti_recursion(example_2_5, a)


def test_tutte_hk_window_error():
    sigma = normalize(
        [((1, 0, 0, 0), 3), ((0, 1, 0, 0), 1), ((0, 0, 1, 0), 1), ((0, 0, 0, 1), 1)], 4
    )
    with pytest.raises(ValueError, match="height window"):
        compute_betti(sigma, 3, "tutte_hk")


def test_scaling_leaves_tables_unchanged(example_2_5):
    scaled = normalize(
        [(tuple(Fraction(-7, 3) * c for c in f.coeffs), m) for f, m in example_2_5.groups], 3
    )
    assert scaled == example_2_5
    for a in (2, 4, 6):
        assert betti_recursion(scaled, a) == betti_recursion(example_2_5, a)


def test_method_agreement_small(rng):
    for _ in range(20):
        sigma = make_random_collection(rng, max_n=6)
        for a in range(1, sigma.n + 1):
            rec = betti_recursion(sigma, a)
            assert rec == betti_from_hilbert(sigma, a)
            assert rec.b[0] == b1_tutte(sigma, a)


def test_pdim_and_tail_laws(rng):
    for _ in range(20):
        sigma = make_random_collection(rng)
        ess = essentialize(sigma)
        for a in range(1, sigma.n + 1):
            table = betti_recursion(sigma, a)
            assert table.pdim == min(ess.k, sigma.n - a + 1)
            height = height_of_fold_ideal(sigma, a)
            assert all(r == 0 for r in herzog_kuhl_residuals(table, a, height))


def test_b1_equals_hilbert_function(rng):
    for _ in range(10):
        sigma = make_random_collection(rng, max_n=6)
        for a in range(1, sigma.n + 1):
            assert betti_recursion(sigma, a).b[0] == hilbert_function(sigma, a, a)


def test_tutte_threshold_changes_no_output(rng):
    import foldbetti.betti as betti_mod

    for _ in range(10):
        sigma = make_random_collection(rng)
        betti_mod._recursion_cache.clear()
        with_window = [compute_betti(sigma, a, "auto", tutte_threshold=16) for a in range(1, sigma.n + 1)]
        betti_mod._recursion_cache.clear()
        pure_recursion = [compute_betti(sigma, a, "auto", tutte_threshold=0) for a in range(1, sigma.n + 1)]
        assert with_window == pure_recursion


def test_concurrent_recursion_is_consistent(example_2_5):
    from concurrent.futures import ThreadPoolExecutor

    import foldbetti.betti as betti_mod

    betti_mod._recursion_cache.clear()
    expected = {a: betti_recursion(example_2_5, a).b for a in range(1, 8)}
    betti_mod._recursion_cache.clear()
    with ThreadPoolExecutor(max_workers=4) as pool:
        futures = [
            pool.submit(betti_recursion, example_2_5, a) for a in range(1, 8) for _ in range(3)
        ]
        results = [f.result() for f in futures]
    for table in results:
        assert table.b == expected[table.a]
