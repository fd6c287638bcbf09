import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightpowers.embed import (
    CandidateFamily,
    PhaseSchedule,
    extend_tight_path,
    extension_mask,
    gadget_image,
    greedy_rooted_embed,
    image_edges,
    phase_constant_diagnostic,
    sample_absorber_candidates,
)
from tightpowers.errors import EmbeddingIncomplete, ExtensionFailed, InvalidArgument
from tightpowers.gadgets import AbsorberWitness, absorber_gadget, connector_gadget, is_absorber, link_path_pattern
from tightpowers.hypergraph import Hypergraph, iter_bits, union
from tightpowers.powers import PowerParams, is_power_path, tight_path_edges
from tightpowers.random_models import (
    bernoulli_host,
    derive_seed,
    intersecting_host,
    sample_gnp,
    sample_rounds,
    split_rounds,
)

P32 = PowerParams(3, 2)
A32 = absorber_gadget(P32)


def test_extension_mask():
    K = Hypergraph.complete(8, 3)
    assert list(iter_bits(extension_mask(K, P32, (0, 1, 2)))) == [3, 4, 5, 6, 7]
    H = Hypergraph.from_edges(8, 3, [(0, 1, 5), (0, 2, 5), (1, 2, 5), (1, 2, 6)])
    assert list(iter_bits(extension_mask(H, P32, (0, 1, 2)))) == [5]


class TestExtend:
    def test_complete(self):
        K = Hypergraph.complete(20, 3)
        avoid = {0, 1, 2}
        new = extend_tight_path(K, P32, (0, 1, 2), range(20), 10, avoid, random.Random(0))
        assert len(new) == 10 and len(set(new)) == 10
        assert avoid >= set(new)
        assert not {0, 1, 2} & set(new)

    def test_empty_target(self):
        with pytest.raises(ExtensionFailed) as info:
            extend_tight_path(Hypergraph.complete(8, 3), P32, (0, 1, 2), (), 3, set(), random.Random(0))
        assert info.value.progress == 0

    def test_short_end(self):
        with pytest.raises(InvalidArgument):
            extend_tight_path(Hypergraph.complete(8, 3), P32, (0,), range(8), 2, set(), random.Random(0))

    def test_intersecting_host(self):
        H = intersecting_host(12, 3, 6)
        for seed in range(20):
            end = (0, 1)
            new = extend_tight_path(H, P32, end, range(12), 4, set(end), random.Random(seed))
            assert tight_path_edges(3, end + new) <= H.edges

    def test_dead_end_reports_progress(self):
        # the pair {6, 7} has no completion outside A once A is used up
        H = intersecting_host(12, 3, 6)
        with pytest.raises(ExtensionFailed) as info:
            extend_tight_path(H, P32, (6, 7), range(6, 12), 3, {6, 7}, random.Random(0))
        assert info.value.progress == 0

    def test_working_keeps_power_path(self):
        H = Hypergraph.complete(14, 3)
        work = bernoulli_host(14, 3, 0.9, 3)
        for seed in range(10):
            try:
                new = extend_tight_path(H, P32, (0, 1, 2), range(14), 5, {0, 1, 2}, random.Random(seed), work)
            except ExtensionFailed:
                continue
            assert is_power_path(work, P32, (0, 1, 2) + new)


class TestAbsorberCandidates:
    def test_complete_host(self):
        K = Hypergraph.complete(14, 3)
        res = sample_absorber_candidates(K, P32, 0, range(1, 14), 10, 10, random.Random(1))
        assert res.complete and res.attempts == 10
        for t in res.tuples:
            assert is_absorber(K, P32, AbsorberWitness(0, t))

    def test_small_y(self):
        K = Hypergraph.complete(14, 3)
        res = sample_absorber_candidates(K, P32, 0, range(1, 6), 10, 100, random.Random(1))
        assert res.tuples == [] and not res.complete

    def test_root_in_y(self):
        with pytest.raises(InvalidArgument):
            sample_absorber_candidates(Hypergraph.complete(8, 3), P32, 0, range(8), 1, 1, random.Random(0))

    def test_link_pattern(self):
        H = bernoulli_host(30, 3, 0.6, 8)
        res = sample_absorber_candidates(H, P32, 5, set(range(30)) - {5}, 20, 500, random.Random(3))
        assert len(set(res.tuples)) == len(res.tuples)
        for t in res.tuples:
            assert len(t) == 6 and 5 not in t
            for s in link_path_pattern(P32, t):
                assert (5, *s) in H

    def test_working_filter(self):
        H = bernoulli_host(30, 3, 0.6, 8)
        work = union(H, sample_gnp(30, 3, 0.3, 9))
        res = sample_absorber_candidates(H, P32, 5, set(range(30)) - {5}, 10, 2000, random.Random(3), work)
        assert res.tuples
        for t in res.tuples:
            assert is_absorber(work, P32, AbsorberWitness(5, t))

    def test_bernoulli_host_yield(self):
        hits = sum(
            sample_absorber_candidates(bernoulli_host(60, 3, 0.5, s), P32, 0, range(1, 60), 50, 5000,
                                       random.Random(s)).complete
            for s in range(10)
        )
        assert hits == 10


class TestSchedule:
    def test_validation(self):
        with pytest.raises(InvalidArgument):
            PhaseSchedule(1, (5, 6), (0, 1))
        with pytest.raises(InvalidArgument):
            PhaseSchedule(1, (5, 0), (0, 1))
        with pytest.raises(InvalidArgument):
            PhaseSchedule(1, (5,), (0, 1))
        with pytest.raises(InvalidArgument):
            PhaseSchedule.desk(2).check_rounds(1)

    def test_desk_and_asymptotic(self):
        d = PhaseSchedule.desk(4, cap=50)
        assert d.budgets == (50,) * 4 and d.rounds == (0, 1, 2, 3) and d.phases == 4
        a = PhaseSchedule.asymptotic(100, 2)
        assert a.budgets == (461, 47, 5) and a.rounds == (0, 1, 2)

    def test_diagnostic_is_reported(self):
        rep = phase_constant_diagnostic(6, 3, 4, 0.1, 1.0)
        assert rep["lhs"] == 2 ** 15 * 4 ** 4 * 720 and not rep["holds"]


def _full_rounds(n, count):
    return [Hypergraph.complete(n, 3)] * count


class TestGreedyEmbed:
    def test_single_task_phase_one(self):
        t = (1, 2, 3, 4, 5, 6)
        image = gadget_image(A32, (0,), t)
        rnd = Hypergraph(7, 3, frozenset(image_edges(A32, image)))
        res = greedy_rooted_embed([rnd], A32, [CandidateFamily((0,), [t])], PhaseSchedule.desk(1))
        assert res.phase == [1] and res.images[0] == image
        assert res.consumed[0] == rnd.edges

    def test_host_edges_are_free(self):
        t = (1, 2, 3, 4, 5, 6)
        res = greedy_rooted_embed([Hypergraph.empty(7, 3)], A32, [CandidateFamily((0,), [t])],
                                  PhaseSchedule.desk(1), host=Hypergraph.complete(7, 3))
        assert res.complete and res.consumed.get(0, set()) == set()

    def test_edgeless_rounds(self):
        tasks = [CandidateFamily((v,), [tuple(range(10, 16))]) for v in range(3)]
        rounds = [Hypergraph.empty(16, 3)] * 2
        with pytest.raises(EmbeddingIncomplete) as info:
            greedy_rooted_embed(rounds, A32, tasks, PhaseSchedule.desk(2))
        assert info.value.survivors == [0, 1, 2]
        res = greedy_rooted_embed(rounds, A32, tasks, PhaseSchedule.desk(2), raise_on_failure=False)
        assert res.remaining == [3, 3]

    def test_task_validation(self):
        with pytest.raises(InvalidArgument):
            greedy_rooted_embed(_full_rounds(9, 1), A32, [CandidateFamily((0,), [(1, 2, 3)])], PhaseSchedule.desk(1))
        with pytest.raises(InvalidArgument):
            greedy_rooted_embed(_full_rounds(9, 1), A32,
                                [CandidateFamily((0,), []), CandidateFamily((0,), [])], PhaseSchedule.desk(1))
        with pytest.raises(InvalidArgument):
            CandidateFamily((0,), [(0, 1, 2, 3, 4, 5)])

    def test_connector_gadget(self):
        F = connector_gadget(P32, 6)
        roots = (0, 1, 2, 9, 10, 11)
        res = greedy_rooted_embed(_full_rounds(12, 1), F, [CandidateFamily(roots, [tuple(range(3, 9))])],
                                  PhaseSchedule.desk(1))
        assert res.images[0] == tuple(range(12))
        assert len(res.consumed[0]) == 20

    @given(st.integers(0, 10_000), st.floats(0.3, 0.9))
    @settings(max_examples=25, deadline=None)
    def test_disjoint_certified_monotone(self, seed, p):
        n = 24
        rng = random.Random(seed)
        rounds = sample_rounds(n, 3, split_rounds(p, 3), seed)
        tasks = []
        for v in range(4):
            free = [x for x in range(4, n)]
            tasks.append(CandidateFamily((v,), [tuple(rng.sample(free, 6)) for _ in range(30)]))
        res = greedy_rooted_embed(rounds, A32, tasks, PhaseSchedule.desk(3), raise_on_failure=False)
        interiors = [set(img) - {tasks[i].roots[0]} for i, img in enumerate(res.images) if img is not None]
        seen = set(range(4))
        for part in interiors:
            assert not part & seen
            seen |= part
        assert all(a >= b for a, b in zip(res.remaining, res.remaining[1:]))
        for i, img in enumerate(res.images):
            if img is None:
                continue
            ridx = res.phase[i] - 1
            assert set(image_edges(A32, img)) <= rounds[ridx].edges
            assert set(image_edges(A32, img)) <= res.consumed[ridx]

    def test_absorber_tasks_at_sixty(self):
        # ceil(0.1 n) tasks, host q = 0.5, x = 0.23, three rounds; measured, pinned
        n, wins = 60, 0
        for s in range(10):
            H = bernoulli_host(n, 3, 0.5, derive_seed(s, "host"))
            rounds = sample_rounds(n, 3, split_rounds(n ** -0.23, 3), s)
            rng = random.Random(s)
            t = math.ceil(0.1 * n)
            Y = set(range(t, n))
            work = union(H, rounds[0])
            tasks = [CandidateFamily((v,), sample_absorber_candidates(H, P32, v, Y, 200, 4000, rng, work).tuples)
                     for v in range(t)]
            wins += greedy_rooted_embed(rounds, A32, tasks, PhaseSchedule.desk(3), host=H,
                                        raise_on_failure=False).complete
        assert wins == 8
