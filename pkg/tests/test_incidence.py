import pytest
import numpy as np

from lib.geometry.incidence import (
    Quadrangle,
    verify_gq,
    hermitian_quadrangle,
    symplectic_quadrangle,
    subtended_spread,
    antipode,
    check_spreads,
    spread_intersection_profile,
    perp_external,
    perp2,
    check_barlemma,
    count_common_external,
    valency_identity,
    check_lemma3,
    check_perp_sizes,
    check_external_point_lines,
    index_sample,
)


@pytest.fixture
def bundle(request):
    return request.getfixturevalue(request.param)


@pytest.mark.parametrize('bundle', ['bundle2', 'bundle3'], indirect=True)
def test_quadrangles(bundle):
    q = bundle.q
    H = hermitian_quadrangle(bundle)
    W = symplectic_quadrangle(bundle)
    assert H.order == (q ** 2, q)
    assert W.order == (q, q)
    for quad in (H, W, H.dual()):
        report = verify_gq(quad)
        assert report.passed, report.witness
        assert all(report.details['axioms'].values())
    assert H.dual().order == (q, q ** 2)


def test_broken_quadrangle_has_witness(bundle2):
    H = hermitian_quadrangle(bundle2)
    broken = Quadrangle(H.n_points, H.lines[1:], H.order, name='broken')
    report = verify_gq(broken)
    assert not report.passed
    assert not report.details['axioms']['lines_per_point']
    assert report.witness is not None


@pytest.mark.parametrize('bundle', ['bundle2', 'bundle3'], indirect=True)
def test_spreads_and_antipodes(bundle):
    q = bundle.q
    assert check_spreads(bundle).passed
    line = int(bundle.ext_lines[0])
    spread = subtended_spread(bundle, line)
    assert len(spread) == q ** 2 + 1
    assert spread.covers_once(bundle)
    other = antipode(bundle, line)
    assert other == int(bundle.sigma_lines[line])
    assert subtended_spread(bundle, other) == spread


@pytest.mark.parametrize('bundle', ['bundle2', 'bundle3'], indirect=True)
def test_spread_intersection_table(bundle):
    q = bundle.q
    report = spread_intersection_profile(bundle)
    assert report.passed, report.witness
    assert set(report.details['histogram']) <= {q ** 2 + 1, 1, q + 1}
    assert sum(report.details['histogram'].values()) == bundle.n_ext ** 2


def test_non_external_line_rejected(bundle2):
    w_line = int(np.flatnonzero(bundle2.w_lines)[0])
    with pytest.raises(ValueError):
        antipode(bundle2, w_line)
    with pytest.raises(ValueError):
        perp_external(bundle2, w_line)


@pytest.mark.parametrize('bundle', ['bundle2', 'bundle3'], indirect=True)
def test_perps(bundle):
    q = bundle.q
    line = int(bundle.ext_lines[0])
    perp = perp_external(bundle, line)
    assert len(perp) == (q - 1) * (q ** 2 + 1)
    assert len(perp2(bundle, line)) == q * (q - 2) * (q ** 2 + 1)
    assert count_common_external(bundle, line, antipode(bundle, line)) == 0
    assert all(count_common_external(bundle, line, n) == q - 2 for n in perp)
    assert all(count_common_external(bundle, line, n) == q ** 2 - q for n in perp2(bundle, line))


@pytest.mark.parametrize('bundle', ['bundle2', 'bundle3'], indirect=True)
def test_lemmas(bundle):
    q = bundle.q
    assert check_barlemma(bundle).passed
    report = check_lemma3(bundle)
    assert report.passed, report.witness
    assert report.details['counts']['antipode'] == [0]
    assert report.details['counts']['concurrent_with_antipode'] == [q ** 2]
    assert check_perp_sizes(bundle).passed
    assert check_external_point_lines(bundle).passed


def test_sampled_checks(bundle3):
    report = check_lemma3(bundle3, exhaustive=False, budget=500, seed=1)
    assert report.passed
    assert report.params['pairs'] <= 500
    assert check_barlemma(bundle3, exhaustive=False, budget=300, seed=1).params['pairs'] == 300
    again = spread_intersection_profile(bundle3, exhaustive=False, budget=400, seed=1)
    assert again.details == spread_intersection_profile(bundle3, exhaustive=False, budget=400, seed=1).details


def test_index_sample():
    assert index_sample(10, True, 3, 0).tolist() == list(range(10))
    assert index_sample(10, False, 20, 0).tolist() == list(range(10))
    picked = index_sample(10, False, 3, 0)
    assert len(picked) == 3
    assert picked.tolist() == sorted(set(picked.tolist()))


@pytest.mark.parametrize('q', [2, 3, 4, 5, 7])
def test_valency_identity(q):
    assert valency_identity(q)
