import pytest
import numpy as np

from lib.covers.certificates import (
    CoverCandidate,
    cover_degree_profile,
    spectral_certificate,
    verify_chiR_relation_identities,
    theorem_check,
    complement_closure,
    check_lemma1,
    check_random_subsets,
)
from lib.covers.search import (
    EXHAUSTIVE,
    BUDGETED,
    CoverSearch,
    SearchConfig,
    resolve_mode,
    search_covers,
    sigma_orbit_key,
)


@pytest.fixture(scope='module')
def q2_outcome(bundle2):
    return search_covers(bundle2, 1, SearchConfig(mode='exhaustive'))


def test_toy_exact_cover():
    point_lines = [(0, 2), (0, 3), (1, 2), (1, 3)]
    line_points = [(0, 1), (2, 3), (0, 2), (1, 3)]
    search = CoverSearch(point_lines, line_points, 1)
    assert search.run()
    assert sorted(search.solutions) == [(0, 1), (2, 3)]
    assert search.trail == []


def test_candidate_basics():
    R = CoverCandidate.from_lines(6, [0, 2, 5])
    assert len(R) == 3
    assert R.members == (0, 2, 5)
    assert 2 in R and 1 not in R
    assert R.complement().members == (1, 3, 4)
    assert R.image([1, 0, 3, 2, 5, 4]).members == (1, 3, 4)
    assert R.chi.tolist() == [1, 0, 1, 0, 0, 1]
    with pytest.raises(ValueError):
        CoverCandidate.from_lines(6, [6])


def test_trivial_covers(bundle2, scheme2):
    n, q = bundle2.n_ext, bundle2.q
    empty, full = CoverCandidate(0, n), CoverCandidate.everything(n)
    assert cover_degree_profile(bundle2, empty).m == 0
    assert cover_degree_profile(bundle2, full).m == q
    for R in (empty, full):
        assert spectral_certificate(bundle2, scheme2, R).passed
        assert verify_chiR_relation_identities(bundle2, scheme2, R).passed
        with pytest.raises(ValueError):
            theorem_check(bundle2, R)


def test_non_cover_rejected(bundle2, scheme2):
    R = CoverCandidate.from_lines(bundle2.n_ext, [0])
    assert not cover_degree_profile(bundle2, R).is_cover
    with pytest.raises(ValueError):
        theorem_check(bundle2, R)
    with pytest.raises(ValueError):
        spectral_certificate(bundle2, scheme2, R)


def test_q2_hemisystems(bundle2, scheme2, q2_outcome):
    assert q2_outcome.mode == EXHAUSTIVE
    assert q2_outcome.exhausted and q2_outcome.tree_closed
    assert len(q2_outcome.solutions) == 2
    first, second = q2_outcome.solutions
    assert len(first) == len(second) == 6
    assert second == first.complement()
    for R in q2_outcome.solutions:
        a, b = theorem_check(bundle2, R)
        assert a.passed and b.passed
        assert R.image(bundle2.ext_sigma) == R.complement()
        assert spectral_certificate(bundle2, scheme2, R).passed
        assert verify_chiR_relation_identities(bundle2, scheme2, R).passed
        assert complement_closure(bundle2, R)
    assert check_lemma1(bundle2, q2_outcome.solutions).passed


def test_q2_record(bundle2, q2_outcome):
    record = q2_outcome.to_record(bundle2)
    assert record['record'] == 'search'
    assert 'elapsed' not in record
    assert [s['size'] for s in record['solutions']] == [6, 6]
    sol = record['solutions'][0]
    assert sol['lines'] == sorted(sol['lines'])
    assert np.array(sol['matrices']).shape == (6, 2, 4)
    assert 'elapsed' in q2_outcome.to_record(bundle2, timings=True)


def test_dedup_sigma(bundle2, q2_outcome):
    outcome = search_covers(bundle2, 1, SearchConfig(mode='exhaustive', dedup_sigma=True))
    assert outcome.raw_solutions == 2
    assert len(outcome.solutions) == 1
    R = q2_outcome.solutions[0]
    assert sigma_orbit_key(R, bundle2.ext_sigma, 2, 1) == sigma_orbit_key(R.complement(), bundle2.ext_sigma, 2, 1)


def test_seed_and_workers_do_not_change_solutions(bundle2, q2_outcome):
    seeded = search_covers(bundle2, 1, SearchConfig(mode='exhaustive', seed=1))
    assert seeded.solutions == q2_outcome.solutions
    again = search_covers(bundle2, 1, SearchConfig(mode='exhaustive', seed=1))
    assert again.nodes == seeded.nodes
    pooled = search_covers(bundle2, 1, SearchConfig(mode='exhaustive', workers=2))
    assert pooled.solutions == q2_outcome.solutions


def test_forced_lines(bundle2, q2_outcome):
    first, second = q2_outcome.solutions
    line = first.global_lines(bundle2)[0]
    out = search_covers(bundle2, 1, SearchConfig(mode='exhaustive', force_out=(line,)))
    assert out.solutions == [second]
    inside = search_covers(bundle2, 1, SearchConfig(mode='exhaustive', force_in=(line,)))
    assert inside.solutions == [first]
    both = search_covers(bundle2, 1, SearchConfig(mode='exhaustive', force_in=(line,), force_out=(line,)))
    assert both.solutions == [] and both.exhausted

    w_line = int(np.flatnonzero(bundle2.w_lines)[0])
    with pytest.raises(ValueError):
        search_covers(bundle2, 1, SearchConfig(force_in=(w_line,)))


def test_budgeted_search(bundle2):
    outcome = search_covers(bundle2, 1, SearchConfig(mode='budgeted', budget_nodes=1))
    assert outcome.mode == BUDGETED
    assert not outcome.exhausted


def test_multiplicity_range(bundle2):
    for m in (0, 2, 3):
        with pytest.raises(ValueError):
            search_covers(bundle2, m)


def test_resolve_mode():
    assert resolve_mode('auto', 2, 1) == EXHAUSTIVE
    assert resolve_mode('auto', 3, 1) == EXHAUSTIVE
    assert resolve_mode('auto', 3, 2) == BUDGETED
    assert resolve_mode('auto', 4, 2) == BUDGETED
    assert resolve_mode('exhaustive', 4, 2) == EXHAUSTIVE


def test_random_subsets(bundle2, bundle3):
    assert check_random_subsets(bundle2, trials=50, seed=3).passed
    assert check_random_subsets(bundle3, trials=50, seed=3).passed


@pytest.mark.slow
def test_no_relative_cover_at_q3(bundle3):
    outcome = search_covers(bundle3, 1, SearchConfig(mode='exhaustive'))
    assert outcome.solutions == []
    assert outcome.exhausted
