import itertools
import math
from fractions import Fraction

import pytest

from regcolor import colorings, graphs, rng
from regcolor.errors import GuardError, ValidationError


def cycle_graph(n):
    return graphs.multigraph(n, 2, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return graphs.multigraph(n, n - 1, list(itertools.combinations(range(n), 2)))


def test_coloring_basics():
    sigma = colorings.coloring([0, 1, 2, 0], 3)
    assert sigma.n == 4
    assert sigma.class_sizes() == [2, 1, 1]
    assert sigma.color_class(0) == [0, 3]
    with pytest.raises(ValidationError):
        colorings.coloring([0, 3], 3)
    text = colorings.format_coloring(sigma)
    assert colorings.parse_coloring(text, 3) == sigma


def test_is_proper():
    G = cycle_graph(4)
    assert colorings.is_proper(G, colorings.coloring([0, 1, 0, 1], 2))
    assert not colorings.is_proper(G, colorings.coloring([0, 0, 1, 1], 2))
    loop = graphs.multigraph(1, 2, [(0, 0)])
    assert not colorings.is_proper(loop, colorings.coloring([0], 2))


def test_is_balanced():
    assert colorings.is_balanced(colorings.coloring([0, 1, 0, 1], 2))
    assert not colorings.is_balanced(colorings.coloring([0, 0, 0, 1], 2))
    assert not colorings.is_balanced(colorings.coloring([0, 1, 0], 2))


def test_overlap_exact():
    sigma = colorings.coloring([0, 0, 1, 1], 2)
    tau = colorings.coloring([0, 1, 1, 0], 2)
    rho = colorings.overlap(sigma, tau)
    assert rho == ((Fraction(1, 2), Fraction(1, 2)),
                   (Fraction(1, 2), Fraction(1, 2)))
    ident = colorings.overlap(sigma, sigma)
    assert ident == ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    # doubly stochastic for balanced pairs
    assert all(sum(row) == 1 for row in rho)
    assert all(sum(rho[i][j] for i in range(2)) == 1 for j in range(2))
    with pytest.raises(ValidationError):
        colorings.overlap(sigma, colorings.coloring([0, 1, 2, 0], 3))


def test_in_cluster():
    sigma = colorings.coloring([0, 0, 1, 1], 2)
    assert colorings.in_cluster(sigma, sigma)
    swapped = colorings.coloring([1, 1, 0, 0], 2)
    assert not colorings.in_cluster(sigma, swapped)


def chromatic_polynomial(G, k):
    """Independent oracle: deletion-contraction on the simple support of G
    (multiplicities do not change properness); loops give zero."""
    edges = []
    seen = set()
    for u, v in G.edges:
        if u == v:
            return 0
        if (u, v) not in seen:
            seen.add((u, v))
            edges.append((u, v))

    def rec(n_vertices, edge_list):
        if not edge_list:
            return k ** n_vertices
        (u, v) = edge_list[0]
        rest = edge_list[1:]
        deleted = rec(n_vertices, rest)
        # contract v into u
        merged = set()
        for a, b in rest:
            a2 = u if a == v else a
            b2 = u if b == v else b
            if a2 != b2:
                merged.add((min(a2, b2), max(a2, b2)))
        contracted = rec(n_vertices - 1, sorted(merged))
        return deleted - contracted

    return rec(G.n, edges)


def test_count_matches_chromatic_polynomial():
    cases = [cycle_graph(5), cycle_graph(6), complete_graph(4),
             graphs.multigraph(4, 0, [(0, 1), (1, 2), (2, 3)], check=False),
             graphs.multigraph(4, 0, [(0, 1), (0, 1), (2, 3)], check=False)]
    for G in cases:
        for k in (2, 3, 4):
            assert colorings.count_colorings(G, k) == \
                chromatic_polynomial(G, k)
    # closed form for cycles: (k-1)^n + (-1)^n (k-1)
    for n in (5, 6):
        for k in (2, 3):
            assert colorings.count_colorings(cycle_graph(n), k) == \
                (k - 1) ** n + (-1) ** n * (k - 1)


def test_count_with_loops_is_zero():
    G = graphs.multigraph(2, 2, [(0, 0), (1, 1)])
    assert colorings.count_colorings(G, 3) == 0


def test_enumerate_matches_count():
    G = cycle_graph(6)
    for k in (2, 3):
        cols = list(colorings.enumerate_proper_colorings(G, k))
        assert len(cols) == colorings.count_colorings(G, k)
        assert all(colorings.is_proper(G, c) for c in cols)
        bal = list(colorings.enumerate_proper_colorings(G, k, balanced=True))
        assert len(bal) == colorings.count_colorings(G, k, filter="balanced")
        assert all(colorings.is_balanced(c) for c in bal)
        assert {c.assignment for c in bal} <= {c.assignment for c in cols}


def test_count_profile_filter():
    G = cycle_graph(6)
    total = 0
    for a in range(7):
        for b in range(7 - a):
            c = 6 - a - b
            prof = [Fraction(a, 6), Fraction(b, 6), Fraction(c, 6)]
            total += colorings.count_colorings(G, 3, filter="profile",
                                               profile=prof)
    assert total == colorings.count_colorings(G, 3)
    with pytest.raises(ValidationError):
        colorings.count_colorings(G, 3, filter="profile", profile=None)
    with pytest.raises(ValidationError):
        colorings.count_colorings(G, 3, filter="bogus")


def test_count_guard():
    G = graphs.multigraph(31, 0, [], check=False)
    with pytest.raises(GuardError):
        colorings.count_colorings(G, 2)


def test_cluster_of():
    G = cycle_graph(6)
    sigma = colorings.coloring([0, 1, 0, 1, 0, 1], 2)
    cluster = colorings.cluster_of(G, sigma)
    assert sigma in cluster
    assert all(colorings.in_cluster(sigma, tau) for tau in cluster)
    # membership matches the predicate over the full balanced enumeration
    for tau in colorings.enumerate_proper_colorings(G, 2, balanced=True):
        assert (tau in cluster) == colorings.in_cluster(sigma, tau)


def test_cluster_guard():
    big = graphs.multigraph(20, 0, [], check=False)
    with pytest.raises(GuardError):
        colorings.cluster_of(big, colorings.coloring([0] * 20, 2))


def test_is_separable():
    # C6 with k=2: the only balanced proper colorings are the two
    # alternating ones, overlapping in 0 or 1 -- separable
    G = cycle_graph(6)
    sigma = colorings.coloring([0, 1, 0, 1, 0, 1], 2)
    assert colorings.is_separable(G, sigma, kappa=0.1)
    # path-ish graph with many colorings: a 0.67 overlap breaks separability
    H = graphs.multigraph(6, 0, [(0, 1), (2, 3), (4, 5)], check=False)
    tau = colorings.coloring([0, 1, 0, 1, 0, 1], 2)
    assert not colorings.is_separable(H, tau, kappa=0.1)


def test_kappa_paper_impractical():
    assert colorings.kappa_paper(10) > 1


def test_is_skewed():
    with pytest.raises(ValidationError):
        colorings.is_skewed(cycle_graph(4), colorings.coloring([0, 0, 0, 1], 2))
    # C4 alternating: e(V0,V1)=4, target dn/(k(k-1)) = 8/2 = 4, deviation 0
    assert not colorings.is_skewed(cycle_graph(4),
                                   colorings.coloring([0, 1, 0, 1], 2))


def test_star_cluster_contains_cluster():
    G = cycle_graph(6)
    sigma = colorings.coloring([0, 1, 0, 1, 0, 1], 2)
    star = colorings.star_cluster(G, sigma)
    assert colorings.cluster_of(G, sigma) <= star


def test_is_nice_report():
    n, k, d = 996, 4, 12
    sigma = colorings.coloring([v // (n // k) for v in range(n)], k)
    off = Fraction(1, k * (k - 1))
    mu = [[Fraction(0) if i == j else off for j in range(k)] for i in range(k)]
    G = graphs.sample_planted(sigma.assignment, k, d, mu, rng.stream(11, 0))
    rep = colorings.is_nice(G, sigma)
    assert rep.condition1 and rep.condition2
    assert rep.rho_deviation == 0.0
    assert rep.mu_deviation == 0.0
    assert rep.condition3 is None
    with pytest.raises(ValidationError):
        bool(rep)


def test_is_nice_check_cluster_small():
    G = cycle_graph(6)
    sigma = colorings.coloring([0, 1, 0, 1, 0, 1], 2)
    rep = colorings.is_nice(G, sigma, check_cluster=True)
    assert rep.condition3 is not None


def test_rainbow_and_vacant_consistency():
    n, k, d = 60, 3, 5
    sigma = colorings.coloring([v // (n // k) for v in range(n)], k)
    off = Fraction(1, k * (k - 1))
    mu = [[Fraction(0) if i == j else off for j in range(k)] for i in range(k)]
    G = graphs.sample_planted(sigma.assignment, k, d, mu, rng.stream(3, 0))
    rainbow = colorings.rainbow_vertices(G, sigma)
    table = colorings.vacant_table(G, sigma)
    vacant_any = set()
    for (i, j), s in table.sets.items():
        vacant_any |= s
    # a vertex is rainbow exactly when it is not j-vacant for any other j
    assert rainbow == set(range(n)) - vacant_any
    for (i, j), s in table.sets.items():
        for v in s:
            assert sigma.assignment[v] == i


def test_rainbow_hand_instance():
    G = graphs.multigraph(4, 0, [(0, 1), (0, 2), (1, 2)], check=False)
    sigma = colorings.coloring([0, 1, 2, 0], 3)
    assert colorings.rainbow_vertices(G, sigma) == {0, 1, 2}
    table = colorings.vacant_table(G, sigma)
    assert 3 in table[(0, 1)] and 3 in table[(0, 2)]


def test_count_pairs_with_overlap():
    G = cycle_graph(6)
    k = 2
    bal = list(colorings.enumerate_proper_colorings(G, k, balanced=True))
    flat_total = 0
    # the counts over all achievable overlap matrices sum to |bal|^2
    seen = {}
    for s in bal:
        for t in bal:
            seen[colorings.overlap(s, t)] = None
    for rho in seen:
        flat_total += colorings.count_pairs_with_overlap(G, k, rho)
    assert flat_total == len(bal) ** 2
    ident = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    assert colorings.count_pairs_with_overlap(G, k, ident) >= len(bal)


def test_skewed_count_zero_on_tiny():
    # the sqrt(n) ln n slack dwarfs any deviation at n=6
    assert colorings.count_colorings(cycle_graph(6), 2, filter="skewed") == 0


def test_nice12_filter_counts_subset():
    G = cycle_graph(6)
    all_count = colorings.count_colorings(G, 2)
    nice = colorings.count_colorings(G, 2, filter="nice12")
    assert 0 <= nice <= all_count
