import joblib
import pytest
import numpy as np

from lib.core.errors import CacheError
from lib.fields.galois_field import field_create, tower_create
from lib.geometry.projective import normalize, row_reduce, line_points, projective_points
from lib.geometry.hermitian import hermitian_values, hermitian_form, symplectic_form
from lib.geometry.bundle import (
    FORMAT_VERSION,
    build_geometry,
    save_geometry,
    load_geometry,
    default_cache_path,
    payload_checksum,
    baer_image,
    verify_counts,
)

COUNTS = {
    2: dict(points=45, lines=27, w_points=15, w_lines=15, ext_points=30, ext_lines=12),
    3: dict(points=280, lines=112, w_points=40, w_lines=40, ext_points=240, ext_lines=72),
}


@pytest.fixture
def bundle(request):
    return request.getfixturevalue(request.param)


def test_projective_helpers():
    F = tower_create(field_create(3, 1))
    assert normalize(F, (0, 2, 1, 0)) == (0, 1, 2, 0)
    with pytest.raises(ValueError):
        normalize(F, (0, 0, 0, 0))

    F2 = field_create(2, 1)
    assert row_reduce(F2, [(1, 0, 0, 0), (1, 1, 0, 0)]) == ((1, 0, 0, 0), (0, 1, 0, 0))
    assert row_reduce(F2, [(1, 1, 0, 0), (1, 1, 0, 0)]) == ((1, 1, 0, 0),)
    assert len(line_points(F, ((1, 0, 0, 0), (0, 1, 0, 0)))) == 10

    pts = projective_points(F2)
    assert len(pts) == 15
    assert all(row[np.flatnonzero(row)[0]] == 1 for row in pts)


@pytest.mark.parametrize('bundle, q', [('bundle2', 2), ('bundle3', 3)], indirect=['bundle'])
def test_counts(bundle, q):
    header = bundle.header()
    for key, value in COUNTS[q].items():
        assert header[key] == value
    report = verify_counts(bundle)
    assert report.passed, report.witness


@pytest.mark.parametrize('bundle', ['bundle2', 'bundle3'], indirect=True)
def test_points_are_isotropic(bundle):
    tower = bundle.tower
    assert not np.any(hermitian_values(tower, bundle.gram, bundle.points))
    pts = bundle.points[bundle.line_pts[0]]
    assert not np.any(hermitian_form(tower, bundle.gram, pts, pts))

    f = hermitian_form(tower, bundle.gram, bundle.points[:20], bundle.points[20:40])
    g = hermitian_form(tower, bundle.gram, bundle.points[20:40], bundle.points[:20])
    assert np.array_equal(tower.conj_table[f], g.T)


@pytest.mark.parametrize('bundle', ['bundle2', 'bundle3'], indirect=True)
def test_symplectic_subgeometry(bundle):
    q = bundle.q
    assert np.all(bundle.w_points[bundle.line_pts[bundle.w_lines]].sum(axis=1) == q + 1)
    on_w = bundle.w_points[bundle.line_pts].sum(axis=1)
    assert set(np.unique(on_w).tolist()) == {0, q + 1}
    w = bundle.points[bundle.w_points]
    assert np.all(w < q)
    line = bundle.points[bundle.line_pts[np.flatnonzero(bundle.w_lines)[0]]]
    assert not np.any(symplectic_form(bundle.tower, line, line))


@pytest.mark.parametrize('bundle', ['bundle2', 'bundle3'], indirect=True)
def test_baer_involution(bundle):
    sp, sl = bundle.sigma_points, bundle.sigma_lines
    assert np.array_equal(sp[sp], np.arange(bundle.n_points))
    assert np.array_equal(sl[sl], np.arange(bundle.n_lines))
    w_idx = np.flatnonzero(bundle.w_points)
    assert np.array_equal(sp[w_idx], w_idx)
    assert np.all(sl[bundle.ext_lines] != bundle.ext_lines)
    assert np.array_equal(bundle.antipode, bundle.ext_sigma)
    line = int(bundle.ext_lines[0])
    assert baer_image(bundle, baer_image(bundle, line)) == line
    with pytest.raises(ValueError):
        baer_image(bundle, 0, kind='plane')


def test_external_lines_hold_external_points(bundle2):
    assert np.all(bundle2.ext_incidence.sum(axis=0) == 5)
    assert np.all(bundle2.ext_incidence.sum(axis=1) == 2)


def test_build_is_deterministic(bundle2):
    again = build_geometry(2)
    assert again.checksum == bundle2.checksum
    for key, value in bundle2.body().items():
        assert np.array_equal(value, again.body()[key])


def test_copy_keeps_original(bundle2):
    rolled = np.roll(bundle2.antipode, 1)
    moved = bundle2.copy(antipode=rolled)
    assert moved is not bundle2
    assert np.array_equal(moved.antipode, rolled)
    assert not np.array_equal(bundle2.antipode, rolled)
    assert moved.checksum != bundle2.checksum
    assert np.array_equal(moved.ext_sigma, bundle2.ext_sigma)


def test_cache_round_trip(bundle2, tmp_path):
    path = default_cache_path(str(tmp_path), 2)
    assert path.endswith('hermitian_q2.pkl')
    checksum = save_geometry(bundle2, path)
    assert checksum == bundle2.checksum

    loaded = load_geometry(path)
    assert loaded.q == 2
    assert loaded.checksum == checksum
    assert loaded.tower == bundle2.tower
    assert np.array_equal(loaded.line_pts, bundle2.line_pts)
    assert np.array_equal(loaded.antipode, bundle2.antipode)


def test_cache_corruption(bundle2, tmp_path):
    path = str(tmp_path / 'q2.pkl')
    save_geometry(bundle2, path)
    payload = joblib.load(path)
    payload['body']['w_points'] = ~payload['body']['w_points']
    joblib.dump(payload, path)
    with pytest.raises(CacheError):
        load_geometry(path)

    payload['format_version'] = FORMAT_VERSION + 1
    joblib.dump(payload, path)
    with pytest.raises(CacheError):
        load_geometry(path)

    with open(path, 'wb') as f:
        f.write(b'not a cache')
    with pytest.raises(CacheError):
        load_geometry(path)

    with pytest.raises(CacheError):
        load_geometry(str(tmp_path / 'missing.pkl'))


def reseal(payload, path):
    payload['checksum'] = payload_checksum(payload['header'], payload['body'])
    joblib.dump(payload, path)


def test_cache_header_is_checked(bundle2, tmp_path):
    path = str(tmp_path / 'q2.pkl')
    save_geometry(bundle2, path)
    clean = joblib.load(path)

    payload = joblib.load(path)
    payload['header']['q'] = 3
    joblib.dump(payload, path)
    with pytest.raises(CacheError, match='checksum'):
        load_geometry(path)
    reseal(payload, path)
    with pytest.raises(CacheError, match='header'):
        load_geometry(path)

    payload = dict(clean, header=dict(clean['header']))
    del payload['header']['field']
    reseal(payload, path)
    with pytest.raises(CacheError):
        load_geometry(path)

    payload['header']['field'] = {'p': 2}
    reseal(payload, path)
    with pytest.raises(CacheError):
        load_geometry(path)

    joblib.dump(clean, path)
    assert load_geometry(path).q == 2


@pytest.mark.slow
def test_q4_geometry():
    from lib.geometry.incidence import check_lemma3, hermitian_quadrangle, verify_gq

    bundle = build_geometry(4)
    header = bundle.header()
    assert (header['points'], header['lines']) == (1105, 325)
    assert (header['w_points'], header['w_lines']) == (85, 85)
    assert (header['ext_points'], header['ext_lines']) == (1020, 240)
    assert verify_counts(bundle).passed
    assert verify_gq(hermitian_quadrangle(bundle)).passed
    assert check_lemma3(bundle, exhaustive=False, budget=10000, seed=0).passed
