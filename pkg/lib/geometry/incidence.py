# -*- coding: utf-8 -*-

import logging
import numpy as np
from dataclasses import dataclass
from functools import cached_property

from lib.core.errors import ConstructionError
from lib.core.report import CheckReport

logger = logging.getLogger(__name__)


def pair_indices(n, exhaustive, budget, seed):
    """All ordered pairs of range(n), or `budget` uniformly sampled ones."""
    if exhaustive:
        rows, cols = np.meshgrid(np.arange(n), np.arange(n), indexing='ij')
        return rows.ravel(), cols.ravel()
    rng = np.random.default_rng(seed)
    pairs = rng.integers(0, n, size=(budget, 2))
    return pairs[:, 0], pairs[:, 1]


def index_sample(n, exhaustive, budget, seed):
    if exhaustive or budget >= n:
        return np.arange(n)
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(n, size=budget, replace=False))


@dataclass
class Quadrangle:
    n_points: int
    lines: list
    order: tuple
    name: str = 'GQ'

    @property
    def n_lines(self):
        return len(self.lines)

    @cached_property
    def incidence(self):
        inc = np.zeros((self.n_points, self.n_lines), dtype=np.int64)
        for j, pts in enumerate(self.lines):
            inc[list(pts), j] = 1
        return inc

    def dual(self):
        inc = self.incidence
        lines = [tuple(np.flatnonzero(inc[p])) for p in range(self.n_points)]
        s, t = self.order
        return Quadrangle(self.n_lines, lines, (t, s), name=f'dual {self.name}')


def hermitian_quadrangle(bundle):
    q = bundle.q
    return Quadrangle(bundle.n_points, [tuple(r) for r in bundle.line_pts], (q ** 2, q), name=f'H(3,{q}^2)')


def symplectic_quadrangle(bundle):
    q = bundle.q
    w_idx = np.flatnonzero(bundle.w_points)
    local = -np.ones(bundle.n_points, dtype=np.int64)
    local[w_idx] = np.arange(len(w_idx))
    lines = []
    for line in np.flatnonzero(bundle.w_lines):
        pts = local[bundle.line_pts[line]]
        lines.append(tuple(int(p) for p in pts[pts >= 0]))
    return Quadrangle(len(w_idx), lines, (q, q), name=f'W(3,{q})')


def verify_gq(Q):
    s, t = Q.order
    report = CheckReport('GQ-AXIOMS', f'{Q.name} as order ({s},{t})', True,
                         params={'points': Q.n_points, 'lines': Q.n_lines, 's': s, 't': t})
    inc = Q.incidence
    axioms = {}

    per_line = inc.sum(axis=0)
    axioms['points_per_line'] = bool(np.all(per_line == s + 1))
    if not axioms['points_per_line']:
        bad = int(np.flatnonzero(per_line != s + 1)[0])
        report.fail({'line': bad, 'points': int(per_line[bad])})

    per_point = inc.sum(axis=1)
    axioms['lines_per_point'] = bool(np.all(per_point == t + 1))
    if not axioms['lines_per_point']:
        bad = int(np.flatnonzero(per_point != t + 1)[0])
        report.fail({'point': bad, 'lines': int(per_point[bad])})

    shared = inc @ inc.T
    np.fill_diagonal(shared, 0)
    axioms['at_most_one_line'] = bool(np.all(shared <= 1))
    if not axioms['at_most_one_line']:
        a, b = np.argwhere(shared > 1)[0]
        report.fail({'points': [int(a), int(b)], 'common_lines': int(shared[a, b])})

    # for P off a line, exactly one point of the line is collinear with P
    collinear = (shared > 0).astype(np.int64)
    seen = collinear @ inc
    off = inc == 0
    axioms['unique_collinear_point'] = bool(np.all(seen[off] == 1))
    if not axioms['unique_collinear_point']:
        P, line = np.argwhere(off & (seen != 1))[0]
        report.fail({'point': int(P), 'line': int(line), 'collinear_points_on_line': int(seen[P, line])})

    report.details['axioms'] = axioms
    logger.info(f'{report.name}: {"pass" if report.passed else "FAIL"}')
    return report


@dataclass(frozen=True)
class Spread:
    lines: tuple

    def __len__(self):
        return len(self.lines)

    def covers_once(self, bundle):
        """Every W-point on exactly one member."""
        counts = bundle.incidence[:, list(self.lines)].sum(axis=1)
        return bool(np.all(counts[bundle.w_points] == 1))


def _require_external(bundle, line):
    if not bundle.is_external(line):
        raise ValueError(f'line {line} is not an external line')


def subtended_spread_matrix(bundle):
    """External lines (local order) by W-lines: concurrent pairs."""
    w_idx = np.flatnonzero(bundle.w_lines)
    return bundle.line_concurrency[np.ix_(bundle.ext_lines, w_idx)]


def subtended_spread(bundle, line):
    _require_external(bundle, line)
    members = np.flatnonzero(bundle.line_concurrency[line] & bundle.w_lines)
    return Spread(tuple(int(m) for m in members))


def antipodes_from_spreads(bundle):
    """Pair external lines subtending the same spread, as a local permutation."""
    spreads = subtended_spread_matrix(bundle)
    groups = {}
    for i, row in enumerate(spreads):
        groups.setdefault(row.tobytes(), []).append(i)
    antipode = -np.ones(bundle.n_ext, dtype=np.int64)
    for members in groups.values():
        if len(members) != 2:
            lines = [int(bundle.ext_lines[i]) for i in members]
            raise ConstructionError(f'external lines {lines} share a subtended spread, expected a pair')
        a, b = members
        antipode[a], antipode[b] = b, a
    return antipode


def antipode(bundle, line):
    """The other external line with the same subtended spread, cross-checked with sigma."""
    _require_external(bundle, line)
    spreads = subtended_spread_matrix(bundle)
    own = spreads[bundle.ext_position[line]]
    same = np.flatnonzero(np.all(spreads == own[None, :], axis=1))
    others = [int(bundle.ext_lines[i]) for i in same if bundle.ext_lines[i] != line]
    if len(others) != 1:
        raise ConstructionError(f'external line {line} shares its spread with {others}')
    other = others[0]
    if other != bundle.sigma_lines[line]:
        raise ConstructionError(f'antipode of {line} is {other}, sigma gives {int(bundle.sigma_lines[line])}')
    return other


def check_spreads(bundle):
    q = bundle.q
    report = CheckReport('BROWN-TABLE', 'subtended spreads', True, params={'q': q})
    spreads = subtended_spread_matrix(bundle)
    w_idx = np.flatnonzero(bundle.w_lines)
    sizes = spreads.sum(axis=1)
    if not np.all(sizes == q ** 2 + 1):
        bad = int(np.flatnonzero(sizes != q ** 2 + 1)[0])
        report.fail({'line': int(bundle.ext_lines[bad]), 'spread_size': int(sizes[bad])})

    w_inc = bundle.incidence[np.ix_(np.flatnonzero(bundle.w_points), w_idx)]
    cover = w_inc @ spreads.T.astype(np.int64)
    if not np.all(cover == 1):
        point, line = np.argwhere(cover != 1)[0]
        report.fail({'line': int(bundle.ext_lines[line]), 'w_point': int(point),
                     'covered': int(cover[point, line])})

    sigma = bundle.ext_sigma
    if not np.array_equal(spreads, spreads[sigma]):
        bad = int(np.flatnonzero(np.any(spreads != spreads[sigma], axis=1))[0])
        report.fail({'line': int(bundle.ext_lines[bad]), 'reason': 'sigma image subtends another spread'})

    recomputed = antipodes_from_spreads(bundle)
    if not np.array_equal(recomputed, sigma) or not np.array_equal(bundle.antipode, sigma):
        bad = int(np.flatnonzero((recomputed != sigma) | (bundle.antipode != sigma))[0])
        report.fail({'line': int(bundle.ext_lines[bad]), 'reason': 'antipode differs from sigma'})

    n = bundle.n_ext
    if np.any(bundle.ext_concurrency[np.arange(n), bundle.antipode]):
        bad = int(np.flatnonzero(bundle.ext_concurrency[np.arange(n), bundle.antipode])[0])
        report.fail({'line': int(bundle.ext_lines[bad]), 'reason': 'concurrent with its antipode'})

    report.details['spread_size'] = q ** 2 + 1
    report.details['sigma_transpositions'] = n // 2
    return report


def spread_intersection_profile(bundle, exhaustive=True, budget=10000, seed=0):
    q = bundle.q
    spreads = subtended_spread_matrix(bundle).astype(np.int64)
    rows, cols = pair_indices(bundle.n_ext, exhaustive, budget, seed)
    sizes = np.einsum('ij,ij->i', spreads[rows], spreads[cols])

    conc = bundle.ext_concurrency
    bar = bundle.antipode
    same = (cols == rows) | (cols == bar[rows])
    touching = conc[rows, cols] | conc[bar[rows], cols]
    expected = np.where(same, q ** 2 + 1, np.where(touching, 1, q + 1))

    report = CheckReport('BROWN-TABLE', 'spread intersection table', True,
                         params={'q': q, 'pairs': len(rows), 'exhaustive': bool(exhaustive)})
    values, counts = np.unique(sizes, return_counts=True)
    report.details['histogram'] = {int(v): int(c) for v, c in zip(values, counts)}
    report.details['allowed'] = [q ** 2 + 1, 1, q + 1]
    wrong = np.flatnonzero(sizes != expected)
    if len(wrong):
        i = wrong[0]
        report.fail({'pair': [int(bundle.ext_lines[rows[i]]), int(bundle.ext_lines[cols[i]])],
                     'size': int(sizes[i]), 'expected': int(expected[i])}, violations=len(wrong))
    return report


def perp_external(bundle, line):
    """External lines concurrent with `line`."""
    _require_external(bundle, line)
    return [int(n) for n in bundle.ext_lines[bundle.line_concurrency[line, bundle.ext_lines]]]


def perp2(bundle, line):
    """External lines neither equal nor concurrent to `line` or its antipode."""
    _require_external(bundle, line)
    bar = int(bundle.sigma_lines[line])
    conc = bundle.line_concurrency
    keep = ~conc[line, bundle.ext_lines] & ~conc[bar, bundle.ext_lines]
    keep &= (bundle.ext_lines != line) & (bundle.ext_lines != bar)
    return [int(n) for n in bundle.ext_lines[keep]]


def check_barlemma(bundle, exhaustive=True, budget=10000, seed=0):
    """A line meeting an external line meets its antipode iff it meets W."""
    conc = bundle.line_concurrency
    ext_rows = conc[bundle.ext_lines]
    bar_rows = conc[bundle.ext_lines[bundle.antipode]]
    rows, cols = np.nonzero(ext_rows)
    if not exhaustive and budget < len(rows):
        pick = np.sort(np.random.default_rng(seed).choice(len(rows), size=budget, replace=False))
        rows, cols = rows[pick], cols[pick]

    report = CheckReport('LEMMA2', 'concurrent with antipode iff meets W', True,
                         params={'q': bundle.q, 'pairs': len(rows), 'exhaustive': bool(exhaustive)})
    bad = np.flatnonzero(bar_rows[rows, cols] != bundle.w_lines[cols])
    if len(bad):
        i = bad[0]
        report.fail({'line': int(bundle.ext_lines[rows[i]]), 'k': int(cols[i]),
                     'meets_w': bool(bundle.w_lines[cols[i]])}, violations=len(bad))

    # spread members meet both
    spreads = subtended_spread_matrix(bundle)
    w_idx = np.flatnonzero(bundle.w_lines)
    if not np.all(bar_rows[:, w_idx][spreads]):
        report.fail({'reason': 'a spread line misses the antipode'})
    return report


def count_common_external(bundle, line, other):
    _require_external(bundle, line)
    _require_external(bundle, other)
    conc = bundle.line_concurrency
    return int(np.sum(conc[line, bundle.ext_lines] & conc[other, bundle.ext_lines]))


def valency_identity(q):
    return 1 + 2 * (q - 1) * (q ** 2 + 1) + q * (q - 2) * (q ** 2 + 1) + 1 == q ** 2 * (q ** 2 - 1)


def check_lemma3(bundle, exhaustive=True, budget=10000, seed=0):
    q = bundle.q
    conc = bundle.ext_concurrency.astype(np.int64)
    common = conc @ conc
    rows, cols = pair_indices(bundle.n_ext, exhaustive, budget, seed)
    keep = rows != cols
    rows, cols = rows[keep], cols[keep]

    bar = bundle.antipode
    cases = np.where(cols == bar[rows], 0,
                     np.where(conc[rows, cols] == 1, 1,
                              np.where(conc[bar[rows], cols] == 1, 2, 3)))
    names = ('antipode', 'concurrent', 'concurrent_with_antipode', 'other')
    expected = np.array([0, q - 2, q ** 2, q ** 2 - q])[cases]
    observed = common[rows, cols]

    report = CheckReport('LEMMA3', 'common external lines', True,
                         params={'q': q, 'pairs': len(rows), 'exhaustive': bool(exhaustive)})
    report.details['counts'] = {
        names[c]: sorted(int(v) for v in np.unique(observed[cases == c])) for c in range(4) if np.any(cases == c)
    }
    report.details['expected'] = dict(zip(names, [0, q - 2, q ** 2, q ** 2 - q]))
    bad = np.flatnonzero(observed != expected)
    if len(bad):
        i = bad[0]
        report.fail({'pair': [int(bundle.ext_lines[rows[i]]), int(bundle.ext_lines[cols[i]])],
                     'case': names[cases[i]], 'count': int(observed[i]), 'expected': int(expected[i])},
                    violations=len(bad))
    return report


def check_perp_sizes(bundle):
    q = bundle.q
    report = CheckReport('LEMMA3', 'perp sizes and valency identity', True, params={'q': q})
    conc = bundle.ext_concurrency
    sizes = conc.sum(axis=1)
    if not np.all(sizes == (q - 1) * (q ** 2 + 1)):
        bad = int(np.flatnonzero(sizes != (q - 1) * (q ** 2 + 1))[0])
        report.fail({'line': int(bundle.ext_lines[bad]), 'perp_size': int(sizes[bad])})
    bar = bundle.antipode
    perp2_sizes = (~conc & ~conc[bar]).sum(axis=1) - 2
    if not np.all(perp2_sizes == q * (q - 2) * (q ** 2 + 1)):
        bad = int(np.flatnonzero(perp2_sizes != q * (q - 2) * (q ** 2 + 1))[0])
        report.fail({'line': int(bundle.ext_lines[bad]), 'perp2_size': int(perp2_sizes[bad])})
    if not valency_identity(q):
        report.fail({'reason': 'valency identity'})
    report.details['perp_size'] = (q - 1) * (q ** 2 + 1)
    report.details['perp2_size'] = q * (q - 2) * (q ** 2 + 1)
    return report


def check_external_point_lines(bundle):
    """Each external point: q+1 lines, exactly one of them meeting W."""
    q = bundle.q
    report = CheckReport('EQ1-COUNTS', 'lines on external points', True, params={'q': q})
    on_w = bundle.w_lines[bundle.point_lines[bundle.ext_points]].sum(axis=1)
    if not np.all(on_w == 1):
        bad = int(np.flatnonzero(on_w != 1)[0])
        report.fail({'point': int(bundle.ext_points[bad]), 'w_lines': int(on_w[bad])})
    ext_on = bundle.ext_incidence.sum(axis=1)
    if not np.all(ext_on == q):
        bad = int(np.flatnonzero(ext_on != q)[0])
        report.fail({'point': int(bundle.ext_points[bad]), 'external_lines': int(ext_on[bad])})
    return report
