from math import comb, sqrt

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tightpowers.errors import InvalidArgument
from tightpowers.hypergraph import Hypergraph, min_codegree, union
from tightpowers.oracle import find_power_ham_cycle
from tightpowers.powers import PowerParams
from tightpowers.random_models import (
    bernoulli_host,
    check_reserve,
    derive_seed,
    intersecting_host,
    parse_host,
    sample_gnp,
    sample_reserve,
    sample_rounds,
    split_rounds,
    splitmix64,
)


class TestSeeds:
    def test_splitmix_reference(self):
        # first outputs of the reference generator seeded with 0
        assert splitmix64(0) == 0xE220A8397B1DCDAF

    def test_derive_seed_separates_labels(self):
        seeds = {derive_seed(7, "round", i) for i in range(100)}
        assert len(seeds) == 100
        assert derive_seed(7, "a") != derive_seed(7, "b")
        assert derive_seed(7, "a", 1) == derive_seed(7, "a", 1)


class TestGnp:
    def test_extremes(self):
        assert len(sample_gnp(8, 3, 0.0, 1)) == 0
        assert sample_gnp(8, 3, 1.0, 1) == Hypergraph.complete(8, 3)

    def test_bad_p(self):
        with pytest.raises(InvalidArgument):
            sample_gnp(8, 3, 1.5, 0)

    def test_mean_edge_count(self):
        counts = [len(sample_gnp(10, 3, 0.1, s)) for s in range(1000)]
        assert abs(np.mean(counts) - 12.0) <= 1.0

    @given(st.integers(0, 2**64 - 1), st.floats(0, 1))
    def test_deterministic(self, seed, p):
        assert sample_gnp(9, 3, p, seed) == sample_gnp(9, 3, p, seed)

    @given(st.integers(0, 2**32), st.floats(0.05, 0.5), st.floats(0.05, 0.5))
    def test_coupled_in_p(self, seed, a, b):
        lo, hi = sorted((a, b))
        assert sample_gnp(9, 3, lo, seed).edges <= sample_gnp(9, 3, hi, seed).edges


class TestSplitRounds:
    def test_one_round(self):
        assert split_rounds(0.3, 1).p_round == 0.3

    def test_two_rounds(self):
        assert split_rounds(0.5, 2).p_round == pytest.approx(1 - sqrt(0.5), rel=1e-12)

    def test_four_rounds_estimate(self):
        p = 64 ** (-1 / 3)
        assert p == pytest.approx(0.25)
        s = split_rounds(p, 4)
        assert s.p_round == pytest.approx(0.0694, abs=5e-5)
        assert s.p_round > p / 4

    def test_saturated(self):
        s = split_rounds(1.0, 4)
        assert s.p_round == 1.0 and s.saturated

    @given(st.floats(0, 0.99), st.integers(1, 6))
    def test_composition_identity(self, p, t):
        s = split_rounds(p, t)
        assert (1 - s.p_round) ** t == pytest.approx(1 - p, abs=1e-12)

    @pytest.mark.parametrize("t", [2, 4])
    def test_union_density(self, t):
        n, k, p, trials = 30, 3, 0.2, 200
        split = split_rounds(p, t)
        total = comb(n, k)
        densities = [len(union(*sample_rounds(n, k, split, s))) / total for s in range(trials)]
        se = sqrt(p * (1 - p) / (total * trials))
        assert abs(np.mean(densities) - p) <= 3 * se

    def test_rounds_are_independent_streams(self):
        rounds = sample_rounds(12, 3, split_rounds(0.5, 4), 3)
        assert len({G.edges for G in rounds}) == 4


class TestReserve:
    def test_full_reserve(self):
        H = intersecting_host(12, 3, 5)
        R = sample_reserve(12, 1.0, 0)
        assert R == frozenset(range(12))
        assert check_reserve(H, R, 5) and not check_reserve(H, R, 6)

    def test_empty_reserve(self):
        assert sample_reserve(12, 0.0, 0) == frozenset()
        assert not check_reserve(Hypergraph.complete(12, 3), frozenset(), 0)

    def test_size_cap(self):
        K = Hypergraph.complete(20, 3)
        assert not check_reserve(K, range(10), 1, eta=0.2)
        assert check_reserve(K, range(8), 1, eta=0.2)

    def test_bernoulli_host_pass_rate(self):
        # q = 0.5 host, threshold alpha*eta*n/2 = 1.8; measured, pinned
        passes = 0
        for s in range(200):
            H = bernoulli_host(60, 3, 0.5, derive_seed(s, "host"))
            passes += check_reserve(H, sample_reserve(60, 0.2, s), 0.3 * 0.2 * 60 / 2, eta=0.2)
        assert passes == 17


class TestHosts:
    def test_intersecting_codegree(self):
        assert min_codegree(intersecting_host(10, 3, 4)) == 4

    @pytest.mark.parametrize("n,k", [(7, 3), (8, 4)])
    def test_intersecting_full(self, n, k):
        assert intersecting_host(n, k, n) == Hypergraph.complete(n, k)

    def test_bernoulli_full(self):
        assert bernoulli_host(9, 3, 1.0, 5) == Hypergraph.complete(9, 3)

    def test_parse(self, tmp_path):
        assert parse_host("intersecting:4", 10, 3, 0) == intersecting_host(10, 3, 4)
        assert parse_host("intersecting:0.3", 10, 3, 0) == intersecting_host(10, 3, 3)
        assert parse_host("complete", 6, 3, 0) == Hypergraph.complete(6, 3)
        assert len(parse_host("empty", 6, 3, 0)) == 0
        assert parse_host("bernoulli:0.4", 9, 3, 2) == parse_host("bernoulli:0.4", 9, 3, 2)
        path = tmp_path / "h.txt"
        path.write_text("6 3\n0 1 2\n")
        assert len(parse_host(f"file:{path}", 6, 3, 0)) == 1
        with pytest.raises(InvalidArgument):
            parse_host("star", 6, 3, 0)

    @pytest.mark.parametrize("n", [10, 11, 12])
    def test_intersecting_has_no_cycle(self, n):
        for a in range(1, n // 3 + 1):
            assert find_power_ham_cycle(intersecting_host(n, 3, a), PowerParams(3, 2)) is None
