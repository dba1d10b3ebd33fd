# -*- coding: utf-8 -*-

import logging
import numpy as np
from dataclasses import dataclass
from functools import cached_property

from lib.core.report import CheckReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoverCandidate:
    """Subset of the external lines as a bitset over the local order."""
    mask: int
    n: int

    @classmethod
    def from_lines(cls, n, lines):
        mask = 0
        for line in lines:
            if not 0 <= line < n:
                raise ValueError(f'local line index {line} out of range 0..{n - 1}')
            mask |= 1 << int(line)
        return cls(mask, n)

    @classmethod
    def everything(cls, n):
        return cls((1 << n) - 1, n)

    @cached_property
    def members(self):
        return tuple(i for i in range(self.n) if self.mask >> i & 1)

    @cached_property
    def chi(self):
        vec = np.zeros(self.n, dtype=np.int64)
        vec[list(self.members)] = 1
        return vec

    def __len__(self):
        return bin(self.mask).count('1')

    def __contains__(self, line):
        return bool(self.mask >> line & 1)

    def complement(self):
        return CoverCandidate(self.mask ^ ((1 << self.n) - 1), self.n)

    def image(self, perm):
        return CoverCandidate.from_lines(self.n, (int(perm[i]) for i in self.members))

    def global_lines(self, bundle):
        return [int(bundle.ext_lines[i]) for i in self.members]


@dataclass
class CoverProfile:
    degrees: np.ndarray
    m: object
    size: int
    lemma1: bool

    @property
    def is_cover(self):
        return self.m is not None


def cover_degree_profile(bundle, R):
    """Per external point, the number of lines of R on it, from the raw incidence."""
    q = bundle.q
    degrees = bundle.ext_incidence @ R.chi
    m = int(degrees[0]) if np.all(degrees == degrees[0]) else None
    lemma1 = m is not None and len(R) == m * (q ** 3 - q)
    return CoverProfile(degrees=degrees, m=m, size=len(R), lemma1=lemma1)


def _require_cover(bundle, R):
    profile = cover_degree_profile(bundle, R)
    if not profile.is_cover:
        raise ValueError(f'line set of size {len(R)} is not a relative m-cover')
    return profile


def spectral_certificate(bundle, S, R):
    """chi_R in V_0 + V_1, and 2m j = q(chi_R + chi_R^sigma)."""
    q = bundle.q
    m = _require_cover(bundle, R).m
    chi = R.chi
    chi_sigma = R.image(bundle.ext_sigma).chi
    report = CheckReport('COR-SINV0V1', f'spectral certificate, m={m}, |R|={len(R)}', True,
                         params={'q': q, 'm': m, 'size': len(R)})
    for i in (2, 3, 4):
        proj = chi @ S.idempotents[i]
        if np.any(proj):
            report.fail({'idempotent': i, 'index': int(np.flatnonzero(proj)[0])})
    lhs, rhs = 2 * m * np.ones_like(chi), q * (chi + chi_sigma)
    if not np.array_equal(lhs, rhs):
        report.fail({'reason': '2m j != q(chi_R + chi_R^sigma)', 'index': int(np.flatnonzero(lhs != rhs)[0])})
    if 2 * m == q and not np.all(chi + chi_sigma == 1):
        report.fail({'reason': 'chi_R + chi_R^sigma != j'})
    return report


def verify_chiR_relation_identities(bundle, S, R, statement='THM1B'):
    q, n = bundle.q, S.n
    m = _require_cover(bundle, R).m
    A, E = S.relations, S.idempotents
    scale = S.denominator // n
    chi = R.chi
    chi_s = R.image(bundle.ext_sigma).chi
    j = np.ones_like(chi)

    closed = {
        'A4': (chi @ A[4], chi_s),
        'A3': (chi @ A[3], m * (q ** 2 + 1) * j - (q ** 2 + 1) * chi),
        'A1': (chi @ A[1], m * (q ** 2 + 1) * j - (q ** 2 + 1) * chi_s),
        'A2': (chi @ A[2], m * (q ** 3 - 2 * q ** 2 - q - 2) * j + q ** 2 * (chi + chi_s)),
        'E2': (chi @ E[2], scale * (2 * m * q * (q + 1) * j - q ** 2 * (q + 1) * (chi + chi_s))),
        'E3': (chi @ E[3], 0 * j),
        'E4': (chi @ E[4], scale * (q ** 2 * (q + 1) ** 2 // 2 * (chi + chi_s) - m * q * (q + 1) ** 2 * j)),
    }
    report = CheckReport(statement, f'chi_R identities, m={m}, |R|={len(R)}', True,
                         params={'q': q, 'm': m, 'size': len(R)})
    for name, (got, want) in closed.items():
        if not np.array_equal(got, want):
            report.fail({'identity': name, 'index': int(np.flatnonzero(got != want)[0])})
    report.details['identities'] = list(closed)
    return report


def theorem_check(bundle, R):
    """q even, m = q/2 and sigma(R) is the complement. Returns (THM1A, THM1B) reports."""
    q = bundle.q
    profile = _require_cover(bundle, R)
    m = profile.m
    if m == 0 or m == q:
        raise ValueError(f'trivial cover (m={m}) passed to theorem_check')

    params = {'q': q, 'm': m, 'lines': R.global_lines(bundle)}
    first = CheckReport('THM1A', f'q even and m = q/2 for |R|={len(R)}', True, params=params)
    if q % 2:
        first.fail({'reason': 'nontrivial relative cover with q odd', 'm': m})
    if 2 * m != q:
        first.fail({'reason': 'm != q/2', 'm': m})
    if not profile.lemma1:
        first.fail({'reason': '|R| != m(q^3-q)', 'size': len(R)})

    second = CheckReport('THM1B', f'sigma(R) is the complement for |R|={len(R)}', True, params=params)
    image = R.image(bundle.ext_sigma)
    if image != R.complement():
        stray = sorted(set(image.members) & set(R.members))
        second.fail({'reason': 'sigma(R) meets R', 'lines': [int(bundle.ext_lines[i]) for i in stray]})
    if first.passed and second.passed:
        logger.info(f'Relative hemisystem of size {len(R)} satisfies q even, m = q/2, sigma(R) = complement')
    else:
        logger.warning(f'Falsification on cover {params["lines"]}: {first.witness or second.witness}')
    return first, second


def complement_closure(bundle, R):
    """R is an m-cover iff its complement is a (q-m)-cover."""
    q = bundle.q
    a, b = cover_degree_profile(bundle, R), cover_degree_profile(bundle, R.complement())
    if a.is_cover != b.is_cover:
        return False
    return not a.is_cover or a.m + b.m == q


def check_lemma1(bundle, covers=()):
    """|R| = m(q^3 - q) on the trivial covers and on every supplied cover."""
    q, n = bundle.q, bundle.n_ext
    report = CheckReport('LEMMA1', 'size of relative m-covers', True, params={'q': q})
    cases = [CoverCandidate(0, n), CoverCandidate.everything(n)] + list(covers)
    seen = []
    for R in cases:
        profile = cover_degree_profile(bundle, R)
        seen.append({'m': profile.m, 'size': profile.size})
        if not profile.is_cover or not profile.lemma1:
            report.fail({'size': profile.size, 'm': profile.m})
        if not complement_closure(bundle, R):
            report.fail({'reason': 'complement closure', 'size': profile.size})
    report.details['covers'] = seen
    return report


def check_random_subsets(bundle, trials=200, seed=0):
    """Random subsets: complement closure holds and non-covers stay non-covers."""
    n = bundle.n_ext
    rng = np.random.default_rng(seed)
    report = CheckReport('LEMMA1', 'complement closure on random subsets', True,
                         params={'q': bundle.q, 'trials': trials, 'seed': seed})
    covers = 0
    for _ in range(trials):
        R = CoverCandidate.from_lines(n, np.flatnonzero(rng.integers(0, 2, size=n)))
        covers += cover_degree_profile(bundle, R).is_cover
        if not complement_closure(bundle, R):
            report.fail({'lines': R.global_lines(bundle)})
            break
    report.details['covers_hit'] = int(covers)
    return report
