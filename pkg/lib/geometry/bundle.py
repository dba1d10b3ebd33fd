# -*- coding: utf-8 -*-

import os
import time
import joblib
import logging
import numpy as np
import os.path as osp

from functools import cached_property

from lib.core.errors import RelcoverError, CacheError, ConstructionError
from lib.fields.galois_field import (
    TABLE_LIMIT,
    prime_power,
    field_create,
    tower_create,
    field_from_description,
)
from lib.geometry.hermitian import (
    gram_matrix,
    is_hermitian_matrix,
    hermitian_points,
    hermitian_lines,
    symplectic_subgeometry,
    classify_external,
    baer_involution,
    check_baer_involution,
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
BODY_FIELDS = (
    'gram', 'points', 'line_mats', 'line_pts', 'w_points', 'w_lines',
    'ext_points', 'ext_lines', 'sigma_points', 'sigma_lines', 'antipode',
)


class GeometryBundle(object):
    """
    H(3,q^2) with its W(3,q). Points and lines are indexed in sorted
    canonical order; `antipode` is a permutation of the local external-line
    order 0..N-1, where local index i stands for line ext_lines[i].
    """
    def __init__(
            self,
            q,
            tower,
            gram,
            points,
            line_mats,
            line_pts,
            w_points,
            w_lines,
            ext_points,
            ext_lines,
            sigma_points,
            sigma_lines,
            antipode=None,
    ):
        self.q = q
        self.tower = tower
        self.gram = gram
        self.points = points
        self.line_mats = line_mats
        self.line_pts = line_pts
        self.w_points = w_points
        self.w_lines = w_lines
        self.ext_points = ext_points
        self.ext_lines = ext_lines
        self.sigma_points = sigma_points
        self.sigma_lines = sigma_lines
        self.antipode = antipode

    def copy(self, **kwargs):
        """A fresh bundle, cached tables dropped, with `kwargs` replacing stored arrays."""
        arrays = {name: getattr(self, name) for name in BODY_FIELDS}
        arrays.update(kwargs)
        return GeometryBundle(q=self.q, tower=self.tower, **arrays)

    @property
    def n_points(self):
        return len(self.points)

    @property
    def n_lines(self):
        return len(self.line_mats)

    @property
    def n_ext(self):
        return len(self.ext_lines)

    @cached_property
    def incidence(self):
        inc = np.zeros((self.n_points, self.n_lines), dtype=np.int64)
        inc[self.line_pts, np.arange(self.n_lines)[:, None]] = 1
        return inc

    @cached_property
    def point_lines(self):
        return np.array([np.flatnonzero(row) for row in self.incidence], dtype=np.int64)

    @cached_property
    def line_concurrency(self):
        """Distinct lines sharing a point."""
        conc = (self.incidence.T @ self.incidence) > 0
        np.fill_diagonal(conc, False)
        return conc

    @cached_property
    def ext_position(self):
        pos = -np.ones(self.n_lines, dtype=np.int64)
        pos[self.ext_lines] = np.arange(self.n_ext)
        return pos

    @cached_property
    def ext_point_position(self):
        pos = -np.ones(self.n_points, dtype=np.int64)
        pos[self.ext_points] = np.arange(len(self.ext_points))
        return pos

    @cached_property
    def ext_concurrency(self):
        return self.line_concurrency[np.ix_(self.ext_lines, self.ext_lines)]

    @cached_property
    def ext_incidence(self):
        """External points by external lines, 0/1."""
        return self.incidence[np.ix_(self.ext_points, self.ext_lines)]

    @cached_property
    def ext_sigma(self):
        """sigma on the local external-line order."""
        return self.ext_position[self.sigma_lines[self.ext_lines]]

    @cached_property
    def ext_point_sigma(self):
        return self.ext_point_position[self.sigma_points[self.ext_points]]

    def is_external(self, line):
        return 0 <= line < self.n_lines and self.ext_position[line] >= 0

    def header(self):
        q = self.q
        return {
            'q': q,
            'field': self.tower.describe(),
            'points': self.n_points,
            'lines': self.n_lines,
            'w_points': int(self.w_points.sum()),
            'w_lines': int(self.w_lines.sum()),
            'ext_points': len(self.ext_points),
            'ext_lines': self.n_ext,
            'counts_expected': {
                'points': (q ** 2 + 1) * (q ** 3 + 1),
                'lines': (q ** 3 + 1) * (q + 1),
                'ext_points': (q ** 2 + 1) * (q ** 3 - q),
                'ext_lines': q ** 2 * (q ** 2 - 1),
            },
        }

    def body(self):
        return {name: np.ascontiguousarray(getattr(self, name)) for name in BODY_FIELDS}

    @cached_property
    def checksum(self):
        return payload_checksum(self.header(), self.body())


def baer_image(bundle, index, kind='line'):
    if kind == 'point':
        return int(bundle.sigma_points[index])
    if kind == 'line':
        return int(bundle.sigma_lines[index])
    raise ValueError(f'unknown object kind {kind!r}')


def build_geometry(q, table_limit=TABLE_LIMIT):
    from lib.geometry.incidence import antipodes_from_spreads

    start = time.time()
    p, k = prime_power(q)
    base = field_create(p, k, table_limit=table_limit)
    tower = tower_create(base, table_limit=table_limit)
    logger.info(f'Fields: GF({q}) modulus {base.modulus}, GF({q ** 2})/GF({q}) modulus {tower.modulus}')

    G = gram_matrix(tower)
    if not is_hermitian_matrix(tower, G):
        raise ConstructionError(f'Gram matrix {G.tolist()} is not Hermitian')

    points = hermitian_points(tower, G)
    line_mats, line_pts = hermitian_lines(tower, G, points)
    w_points, w_lines = symplectic_subgeometry(tower, points, line_pts)
    ext_points, ext_lines = classify_external(q, w_points, line_pts)
    sigma_points, sigma_lines = baer_involution(tower, points, line_mats)

    problem = check_baer_involution(sigma_points, sigma_lines, line_pts, w_points, ext_lines)
    if problem is not None:
        raise ConstructionError(problem)

    bundle = GeometryBundle(
        q=q, tower=tower, gram=G, points=points, line_mats=line_mats, line_pts=line_pts,
        w_points=w_points, w_lines=w_lines, ext_points=ext_points, ext_lines=ext_lines,
        sigma_points=sigma_points, sigma_lines=sigma_lines,
    )
    antipode = antipodes_from_spreads(bundle)
    if not np.array_equal(antipode, bundle.ext_sigma):
        bad = int(np.flatnonzero(antipode != bundle.ext_sigma)[0])
        raise ConstructionError(
            f'antipode of external line {int(ext_lines[bad])} is {int(ext_lines[antipode[bad]])} '
            f'but sigma maps it to {int(ext_lines[bundle.ext_sigma[bad]])}'
        )
    bundle = bundle.copy(antipode=antipode)
    logger.info(f'Built geometry for q={q} in {time.time() - start:.2f}s')
    return bundle


def payload_checksum(header, body):
    return joblib.hash({'header': header, 'body': body})


def save_geometry(bundle, path):
    payload = {
        'format_version': FORMAT_VERSION,
        'header': bundle.header(),
        'body': bundle.body(),
        'checksum': bundle.checksum,
    }
    try:
        if osp.dirname(path):
            os.makedirs(osp.dirname(path), exist_ok=True)
        joblib.dump(payload, path)
    except OSError as e:
        raise CacheError(f'could not write geometry cache {path}: {e}')
    logger.info(f'Saved geometry cache {path} (checksum {payload["checksum"]})')
    return payload['checksum']


def load_geometry(path, table_limit=TABLE_LIMIT):
    if not osp.isfile(path):
        raise CacheError(f'geometry cache {path} does not exist')
    try:
        payload = joblib.load(path)
    except Exception as e:
        raise CacheError(f'could not read geometry cache {path}: {e}')

    if not isinstance(payload, dict) or payload.get('format_version') != FORMAT_VERSION:
        raise CacheError(f'{path} is not a format {FORMAT_VERSION} geometry cache')
    header, body = payload.get('header'), payload.get('body')
    if not isinstance(header, dict) or not isinstance(body, dict) or set(body) != set(BODY_FIELDS):
        raise CacheError(f'{path} has a malformed header or body')
    if payload_checksum(header, body) != payload.get('checksum'):
        raise CacheError(f'checksum mismatch in {path}, the cache is corrupt')

    try:
        tower = field_from_description(header['field'], table_limit=table_limit)
        q = tower.base.order
        rebuilt = tower_create(field_create(tower.p, tower.base.k, table_limit=table_limit),
                               table_limit=table_limit)
        if rebuilt.describe() != header['field']:
            raise CacheError(f'{path} was built with field {header["field"]}, expected {rebuilt.describe()}')
        bundle = GeometryBundle(q=q, tower=tower, **body)
        if bundle.header() != header:
            raise CacheError(f'{path} has a header that does not match its geometry (stored q={header.get("q")})')
    except CacheError:
        raise
    except (RelcoverError, KeyError, TypeError, ValueError, AttributeError) as e:
        raise CacheError(f'{path} has an unreadable header: {type(e).__name__}: {e}')
    logger.info(f'Loaded geometry cache {path}: {bundle.n_points} points, {bundle.n_lines} lines')
    return bundle


def default_cache_path(cache_dir, q):
    return osp.join(cache_dir, f'hermitian_q{q}.pkl')


def verify_counts(bundle):
    """Object counts against their closed forms, the Gram matrix and the Baer involution."""
    from lib.core.report import CheckReport

    q = bundle.q
    header = bundle.header()
    expected = dict(header['counts_expected'])
    expected['w_points'] = (q + 1) * (q ** 2 + 1)
    expected['w_lines'] = (q + 1) * (q ** 2 + 1)

    report = CheckReport('EQ1-COUNTS', 'object counts', True, params={'q': q})
    for key, want in expected.items():
        if header[key] != want:
            report.fail({'count': key, 'observed': header[key], 'expected': want})

    if not is_hermitian_matrix(bundle.tower, bundle.gram):
        report.fail({'reason': 'Gram matrix is not Hermitian'})
    problem = check_baer_involution(bundle.sigma_points, bundle.sigma_lines, bundle.line_pts,
                                    bundle.w_points, bundle.ext_lines)
    if problem is not None:
        report.fail({'reason': problem})
    if not np.array_equal(bundle.antipode, bundle.ext_sigma):
        report.fail({'reason': 'antipode differs from sigma'})

    report.details['observed'] = {key: header[key] for key in expected}
    report.details['expected'] = expected
    return report
