# -*- coding: utf-8 -*-

import logging
import numpy as np
from tqdm import tqdm

from lib.core.errors import ConstructionError
from lib.fields.galois_field import special_scalar
from lib.geometry.projective import row_reduce, line_points, projective_points

logger = logging.getLogger(__name__)

SYMPLECTIC_J = ((0, 1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, 1), (0, 0, -1, 0))


def _require_tables(field):
    if not field.has_tables:
        raise ConstructionError(f'{field} is too large for table driven geometry construction')


def gram_matrix(tower):
    """G = eps * J, J the symplectic Gram matrix."""
    _require_tables(tower)
    eps = special_scalar(tower).value
    G = np.zeros((4, 4), dtype=np.int64)
    for i, row in enumerate(SYMPLECTIC_J):
        for j, v in enumerate(row):
            if v == 1:
                G[i, j] = eps
            elif v == -1:
                G[i, j] = tower.neg(eps)
    return G


def symplectic_matrix(field):
    J = np.zeros((4, 4), dtype=np.int64)
    for i, row in enumerate(SYMPLECTIC_J):
        for j, v in enumerate(row):
            J[i, j] = 1 if v == 1 else (field.neg(1) if v == -1 else 0)
    return J


def is_hermitian_matrix(tower, G):
    return bool(np.array_equal(tower.conj_table[G].T, G))


def _times_matrix(field, X, G):
    X = np.atleast_2d(X)
    out = np.zeros_like(X)
    for j in range(G.shape[1]):
        acc = np.zeros(X.shape[0], dtype=np.int64)
        for i in range(G.shape[0]):
            acc = field.add_table[acc, field.mul_table[X[:, i], G[i, j]]]
        out[:, j] = acc
    return out


def sesquilinear_form(field, G, X, Y, conjugate=True):
    """Pairwise table f(x, y) = x G y^q (or x G y without conjugation), shape (len(X), len(Y))."""
    _require_tables(field)
    XG = _times_matrix(field, X, G)
    Y = np.atleast_2d(Y)
    if conjugate:
        Y = field.conj_table[Y]
    out = np.zeros((XG.shape[0], Y.shape[0]), dtype=np.int64)
    for j in range(G.shape[1]):
        out = field.add_table[out, field.mul_table[XG[:, j][:, None], Y[:, j][None, :]]]
    return out


def hermitian_form(tower, G, X, Y):
    return sesquilinear_form(tower, G, X, Y, conjugate=True)


def symplectic_form(field, X, Y):
    return sesquilinear_form(field, symplectic_matrix(field), X, Y, conjugate=False)


def hermitian_values(tower, G, X):
    """x G x^q for every row of X."""
    XG = _times_matrix(tower, X, G)
    Xc = tower.conj_table[np.atleast_2d(X)]
    acc = np.zeros(XG.shape[0], dtype=np.int64)
    for j in range(4):
        acc = tower.add_table[acc, tower.mul_table[XG[:, j], Xc[:, j]]]
    return acc


def hermitian_points(tower, G):
    """Isotropic points of PG(3, q^2), in sorted canonical order."""
    q = tower.base.order
    pts = projective_points(tower)
    points = pts[hermitian_values(tower, G, pts) == 0]
    expected = (q ** 2 + 1) * (q ** 3 + 1)
    if len(points) != expected:
        raise ConstructionError(f'H(3,{q}^2) has {len(points)} points, expected {expected}')
    logger.info(f'H(3,{q}^2): {len(points)} of {len(pts)} points of PG(3,{q ** 2}) are isotropic')
    return points


def hermitian_lines(tower, G, points):
    """
    Totally isotropic lines. Returns (echelon matrices (L, 2, 4), point
    indices (L, q^2 + 1)), sorted by echelon form.
    """
    q = tower.base.order
    index = {tuple(int(v) for v in p): i for i, p in enumerate(points)}
    ortho = hermitian_form(tower, G, points, points) == 0

    lines = {}
    for P in tqdm(range(len(points)), desc=f'lines of H(3,{q}^2)', leave=False):
        assigned = {P}
        for R in np.flatnonzero(ortho[P]):
            if R in assigned:
                continue
            key = row_reduce(tower, [points[P], points[R]])
            idx = [index.get(pt) for pt in line_points(tower, key)]
            if None in idx:
                raise ConstructionError(f'line {key} through points {P}, {R} is not totally isotropic')
            assigned.update(idx)
            if key not in lines:
                lines[key] = sorted(idx)

    keys = sorted(lines)
    matrices = np.array(keys, dtype=np.int64)
    line_pts = np.array([lines[k] for k in keys], dtype=np.int64)

    expected = (q ** 3 + 1) * (q + 1)
    if len(keys) != expected:
        raise ConstructionError(f'H(3,{q}^2) has {len(keys)} lines, expected {expected}')
    per_point = np.bincount(line_pts.ravel(), minlength=len(points))
    if not np.all(per_point == q + 1):
        bad = int(np.flatnonzero(per_point != q + 1)[0])
        raise ConstructionError(f'point {bad} is on {per_point[bad]} lines, expected {q + 1}')
    logger.info(f'H(3,{q}^2): {len(keys)} lines, {q ** 2 + 1} points each, {q + 1} per point')
    return matrices, line_pts


def symplectic_subgeometry(tower, points, line_pts):
    """
    W-points have every coordinate in the embedded GF(q); W-lines are the
    Hermitian lines holding at least two of them. Returns boolean masks.
    """
    q = tower.base.order
    w_points = np.all(points < q, axis=1)
    w_on_line = w_points[line_pts].sum(axis=1)
    w_lines = w_on_line >= 2

    n_pts, n_lines = int(w_points.sum()), int(w_lines.sum())
    if n_pts != q ** 3 + q ** 2 + q + 1 or n_lines != (q ** 2 + 1) * (q + 1):
        raise ConstructionError(f'W({q}) has {n_pts} points and {n_lines} lines')
    if not np.all(w_on_line[w_lines] == q + 1):
        raise ConstructionError(f'a W-line of W({q}) does not meet W in {q + 1} points')
    tangents = int((w_on_line == 1).sum())
    if tangents:
        raise ConstructionError(f'{tangents} Hermitian lines meet W({q}) in exactly one point')

    w_coords = points[w_points]
    sympl = symplectic_form(tower, w_coords, w_coords)
    w_index = -np.ones(len(points), dtype=np.int64)
    w_index[w_points] = np.arange(n_pts)
    for line in np.flatnonzero(w_lines):
        sub = w_index[line_pts[line]]
        sub = sub[sub >= 0]
        if np.any(sympl[np.ix_(sub, sub)] != 0):
            raise ConstructionError(f'W-line {line} is not totally isotropic for the alternating form')

    logger.info(f'W({q}): {n_pts} points, {n_lines} lines, no tangent lines')
    return w_points, w_lines


def classify_external(q, w_points, line_pts):
    """Index arrays of external points and of lines holding no W-point."""
    ext_points = np.flatnonzero(~w_points)
    ext_lines = np.flatnonzero(w_points[line_pts].sum(axis=1) == 0)
    n_p, n_l = (q ** 2 + 1) * (q ** 3 - q), q ** 2 * (q ** 2 - 1)
    if len(ext_points) != n_p or len(ext_lines) != n_l:
        raise ConstructionError(
            f'{len(ext_points)} external points and {len(ext_lines)} external lines, expected {n_p} and {n_l}'
        )
    logger.info(f'{n_p} external points, {n_l} external lines')
    return ext_points, ext_lines


def baer_involution(tower, points, line_mats):
    """Coordinatewise x -> x^q as permutations of the point and line orders."""
    point_index = {tuple(int(v) for v in p): i for i, p in enumerate(points)}
    line_index = {tuple(int(v) for v in m.ravel()): i for i, m in enumerate(line_mats)}
    conj = tower.conj_table

    # conjugation keeps a leading 1 and zeros, so images stay normalized
    sigma_points = np.array([point_index[tuple(int(v) for v in conj[p])] for p in points], dtype=np.int64)
    sigma_lines = np.array([line_index[tuple(int(v) for v in conj[m].ravel())] for m in line_mats],
                           dtype=np.int64)
    return sigma_points, sigma_lines


def check_baer_involution(sigma_points, sigma_lines, line_pts, w_points, ext_lines):
    n_pts, n_lines = len(sigma_points), len(sigma_lines)
    if not np.array_equal(sigma_points[sigma_points], np.arange(n_pts)):
        return 'sigma is not an involution on points'
    if not np.array_equal(sigma_lines[sigma_lines], np.arange(n_lines)):
        return 'sigma is not an involution on lines'
    w_idx = np.flatnonzero(w_points)
    if not np.array_equal(sigma_points[w_idx], w_idx):
        return 'sigma moves a W-point'
    images = np.sort(sigma_points[line_pts], axis=1)
    if not np.array_equal(images, line_pts[sigma_lines]):
        return 'sigma does not preserve incidence'
    if np.any(sigma_lines[ext_lines] == ext_lines):
        return 'sigma fixes an external line'
    return None
