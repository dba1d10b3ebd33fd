# -*- coding: utf-8 -*-

import logging
import itertools
import numpy as np
from sympy import isprime, factorint

from lib.core.errors import ConfigError, FieldMismatchError

logger = logging.getLogger(__name__)

MAX_FIELD_ORDER = 2 ** 16
TABLE_LIMIT = 1024


def _poly_rem(num, den, add, mul, neg):
    """Remainder of num modulo the monic polynomial den, coefficients low degree first."""
    rem = list(num)
    d = len(den) - 1
    for top in range(len(rem) - 1, d - 1, -1):
        c = rem[top]
        if c == 0:
            continue
        for i in range(d + 1):
            rem[top - d + i] = add(rem[top - d + i], neg(mul(c, den[i])))
    return rem[:d]


def is_irreducible(modulus, scalars, add, mul, neg):
    """Trial division of x^k + modulus by every monic polynomial of degree <= k // 2."""
    k = len(modulus)
    poly = list(modulus) + [1]
    if k == 1:
        return True
    for deg in range(1, k // 2 + 1):
        for low in itertools.product(scalars, repeat=deg):
            rem = _poly_rem(poly, list(low) + [1], add, mul, neg)
            if all(c == 0 for c in rem):
                return False
    return True


class GaloisField(object):
    """
    GF(p^k) realised as a degree `degree` extension of either the prime field
    (base is None) or of another GaloisField (a tower).

    Elements are integers in [0, order): the coefficient vector (c_0, .., c_{d-1})
    over the base is stored as sum c_i * base_order^i.
    """
    def __init__(self, p, degree, modulus, base=None, table_limit=TABLE_LIMIT):
        self.p = p
        self.degree = degree
        self.modulus = tuple(int(c) for c in modulus)
        self.base = base
        self.base_order = p if base is None else base.order
        self.order = self.base_order ** degree
        self.k = degree if base is None else base.k * degree

        if len(self.modulus) != degree:
            raise ValueError(f'modulus needs {degree} coefficients, got {len(self.modulus)}')
        if base is not None and degree != 2:
            raise ValueError('a tower field has degree exactly 2 over its base')

        self._build_tables(table_limit)

    # ========= scalar arithmetic in the base ========= #
    def _sadd(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        return self.base.add(a, b)

    def _smul(self, a, b):
        if self.base is None:
            return (a * b) % self.p
        return self.base.mul(a, b)

    def _sneg(self, a):
        if self.base is None:
            return (-a) % self.p
        return self.base.neg(a)

    def coefficients(self, x):
        coeffs = []
        for _ in range(self.degree):
            x, c = divmod(x, self.base_order)
            coeffs.append(c)
        return tuple(coeffs)

    def from_coefficients(self, coeffs):
        x = 0
        for c in reversed(coeffs):
            x = x * self.base_order + c
        return x

    def _add_raw(self, a, b):
        ca, cb = self.coefficients(a), self.coefficients(b)
        return self.from_coefficients([self._sadd(x, y) for x, y in zip(ca, cb)])

    def _mul_raw(self, a, b):
        ca, cb = self.coefficients(a), self.coefficients(b)
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(ca):
            if x == 0:
                continue
            for j, y in enumerate(cb):
                prod[i + j] = self._sadd(prod[i + j], self._smul(x, y))
        rem = _poly_rem(prod, list(self.modulus) + [1], self._sadd, self._smul, self._sneg) \
            if len(prod) > self.degree else prod
        return self.from_coefficients(rem)

    def _pow_raw(self, a, e):
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_raw(result, base)
            base = self._mul_raw(base, base)
            e >>= 1
        return result

    def _build_tables(self, table_limit):
        n = self.order
        group = n - 1
        primes = list(factorint(group).keys()) if group > 1 else []
        self.generator = None
        for g in range(1, n):
            if all(self._pow_raw(g, group // r) != 1 for r in primes):
                self.generator = g
                break
        if self.generator is None:
            raise ValueError(f'x^{self.degree} + {self.modulus} does not give a field')

        self.exp_table = np.zeros(2 * group, dtype=np.int64)
        self.log_table = np.full(n, -1, dtype=np.int64)
        x = 1
        for i in range(group):
            if self.log_table[x] != -1:
                raise ValueError(f'element {self.generator} is not primitive')
            self.exp_table[i] = x
            self.log_table[x] = i
            x = self._mul_raw(x, self.generator)
        self.exp_table[group:] = self.exp_table[:group]

        self.neg_table = np.array([self.from_coefficients([self._sneg(c) for c in self.coefficients(a)])
                                   for a in range(n)], dtype=np.int64)
        self.inv_table = np.zeros(n, dtype=np.int64)
        self.inv_table[1:] = self.exp_table[(group - self.log_table[1:]) % group]

        self.frobenius_table = np.array([self._pow_raw(a, self.p) for a in range(n)], dtype=np.int64)
        if self.base is not None:
            conj = np.arange(n, dtype=np.int64)
            for _ in range(self.base.k):
                conj = self.frobenius_table[conj]
            self.conj_table = conj
        else:
            self.conj_table = None

        if n <= table_limit:
            idx = np.arange(n)
            coeffs = np.array([self.coefficients(a) for a in range(n)], dtype=np.int64)
            self.add_table = np.zeros((n, n), dtype=np.int64)
            for i in range(self.degree):
                if self.base is None:
                    col = (coeffs[:, i][:, None] + coeffs[:, i][None, :]) % self.p
                else:
                    col = self.base.add_table[coeffs[:, i][:, None], coeffs[:, i][None, :]]
                self.add_table += col * self.base_order ** i
            log_sum = self.log_table[idx][:, None] + self.log_table[idx][None, :]
            self.mul_table = np.where(
                (idx[:, None] == 0) | (idx[None, :] == 0), 0,
                self.exp_table[np.clip(log_sum, 0, None) % group]
            ).astype(np.int64)
        else:
            self.add_table = None
            self.mul_table = None

    # ========= public integer arithmetic ========= #
    @property
    def has_tables(self):
        return self.add_table is not None

    def add(self, a, b):
        if self.add_table is not None:
            return int(self.add_table[a, b])
        return self._add_raw(a, b)

    def neg(self, a):
        return int(self.neg_table[a])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self.exp_table[self.log_table[a] + self.log_table[b]])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f'0 has no inverse in {self}')
        return int(self.inv_table[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e):
        if a == 0:
            return 0 if e > 0 else 1
        return int(self.exp_table[(self.log_table[a] * e) % (self.order - 1)])

    def frobenius(self, a):
        return int(self.frobenius_table[a])

    def conj(self, a):
        if self.conj_table is None:
            raise ValueError(f'{self} is not a tower field, conjugation is undefined')
        return int(self.conj_table[a])

    def norm(self, a):
        """x^(q+1), lands in the base of a tower."""
        return self.mul(a, self.conj(a))

    def in_subfield(self, a):
        return self.base is not None and a < self.base.order

    def element(self, value):
        return FieldElement(self, value)

    def elements(self):
        return [FieldElement(self, a) for a in range(self.order)]

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    def describe(self):
        return {
            'p': self.p,
            'k': self.k,
            'degree': self.degree,
            'modulus': list(self.modulus),
            'base': None if self.base is None else self.base.describe(),
        }

    def __eq__(self, other):
        return isinstance(other, GaloisField) and self.describe() == other.describe()

    def __hash__(self):
        return hash((self.p, self.degree, self.modulus, self.base))

    def __repr__(self):
        if self.base is None:
            return f'GF({self.p}^{self.k})'
        return f'GF({self.order})/GF({self.base.order})'


class FieldElement(object):
    __slots__ = ('field', 'value')

    def __init__(self, field, value):
        if not 0 <= value < field.order:
            raise ValueError(f'{value} is not an element of {field}')
        self.field = field
        self.value = int(value)

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError(f'cannot combine FieldElement with {type(other).__name__}')
        if other.field is not self.field and other.field != self.field:
            raise FieldMismatchError(f'{self.field} and {other.field} are different fields')

    @property
    def coefficients(self):
        return self.field.coefficients(self.value)

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.div(self.value, other.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.power(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        return isinstance(other, FieldElement) and other.field == self.field and other.value == self.value

    def __hash__(self):
        return hash((self.field.order, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f'{self.field}({self.coefficients})'


def _smallest_irreducible(degree, scalars, add, mul, neg):
    for low in itertools.product(scalars, repeat=degree):
        if is_irreducible(low, scalars, add, mul, neg):
            return low
    raise ValueError(f'no monic irreducible polynomial of degree {degree}')


def field_create(p, k, table_limit=TABLE_LIMIT):
    """
    GF(p^k) with the lexicographically smallest monic irreducible modulus,
    coefficients compared low degree first.
    """
    if not isprime(p):
        raise ConfigError(f'characteristic must be prime, got {p}')
    if k < 1:
        raise ConfigError(f'degree must be positive, got {k}')
    if p ** k > MAX_FIELD_ORDER:
        raise ConfigError(f'GF({p}^{k}) exceeds the supported size {MAX_FIELD_ORDER}')

    modulus = _smallest_irreducible(
        k, range(p), lambda a, b: (a + b) % p, lambda a, b: (a * b) % p, lambda a: (-a) % p
    )
    field = GaloisField(p, k, modulus, table_limit=table_limit)
    logger.debug(f'Built {field} with modulus {modulus}')
    return field


def tower_create(base, table_limit=TABLE_LIMIT):
    """GF(q^2) as a quadratic extension of base = GF(q), same modulus rule."""
    if base.base is not None:
        raise ConfigError('towers are only built over a field given over its prime field')
    if base.order ** 2 > MAX_FIELD_ORDER:
        raise ConfigError(f'GF({base.order}^2) exceeds the supported size {MAX_FIELD_ORDER}')
    modulus = _smallest_irreducible(2, range(base.order), base.add, base.mul, base.neg)
    field = GaloisField(base.p, 2, modulus, base=base, table_limit=table_limit)
    logger.debug(f'Built {field} with modulus {modulus}')
    return field


def field_from_description(desc, table_limit=TABLE_LIMIT):
    if desc['base'] is None:
        return GaloisField(desc['p'], desc['degree'], desc['modulus'], table_limit=table_limit)
    base = field_from_description(desc['base'], table_limit=table_limit)
    return GaloisField(desc['p'], desc['degree'], desc['modulus'], base=base, table_limit=table_limit)


def prime_power(q):
    """Return (p, k) with q = p^k, raising ConfigError otherwise."""
    factors = factorint(q)
    if len(factors) != 1:
        raise ConfigError(f'q must be a prime power, got {q}')
    (p, k), = factors.items()
    return p, k


def element_arithmetic(a, b, op):
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    if op == 'div':
        return a / b
    raise ValueError(f'unknown field operation {op!r}')


def conjugate(x):
    """x -> x^q in GF(q^2)/GF(q)."""
    return FieldElement(x.field, x.field.conj(x.value))


def embed_subfield(x, tower):
    if tower.base is None:
        raise ValueError(f'{tower} has no subfield tower configured')
    if x.field != tower.base:
        raise FieldMismatchError(f'{x.field} is not the base of {tower}')
    # second tower coordinate is zero
    return FieldElement(tower, x.value)


def special_scalar(tower):
    """1 in characteristic 2, else the first nonzero e with e^q = -e."""
    if tower.base is None:
        raise ValueError(f'{tower} is not a tower field')
    if tower.p == 2:
        return tower.one
    for e in range(1, tower.order):
        if tower.conj(e) == tower.neg(e):
            return FieldElement(tower, e)
    raise ValueError(f'{tower} has no element with e^q = -e')


def check_frobenius(field):
    """
    x -> x^p is an automorphism. Additivity is checked against every element
    with a single nonzero coordinate and multiplicativity against the
    generator; both sets generate, so the check covers all pairs.
    """
    frob = field.frobenius_table
    if len(np.unique(frob)) != field.order:
        return False
    singles = [field.from_coefficients([c if i == j else 0 for j in range(field.degree)])
               for i in range(field.degree) for c in range(1, field.base_order)]
    g = field.generator
    for a in range(field.order):
        for b in singles:
            if frob[field.add(a, b)] != field.add(int(frob[a]), int(frob[b])):
                return False
        if frob[field.mul(a, g)] != field.mul(int(frob[a]), int(frob[g])):
            return False
    return True


def verify_fields(tower):
    """Frobenius on both fields, conjugation and the subfield embedding."""
    from lib.core.report import CheckReport

    base = tower.base
    q = base.order
    report = CheckReport('EQ1-COUNTS', 'field tower', True, params={'q': q, 'field': tower.describe()})
    for field in (base, tower):
        if not check_frobenius(field):
            report.fail({'field': repr(field), 'reason': 'Frobenius is not an automorphism'})

    conj = tower.conj_table
    fixed = np.flatnonzero(conj == np.arange(tower.order))
    if not np.array_equal(conj[conj], np.arange(tower.order)):
        report.fail({'reason': 'conjugation is not an involution'})
    if not np.array_equal(fixed, np.arange(q)):
        report.fail({'reason': 'fixed field of conjugation', 'fixed': fixed.tolist()})
    for a in range(tower.order):
        for b in range(tower.order):
            if conj[tower.add(a, b)] != tower.add(int(conj[a]), int(conj[b])) \
                    or conj[tower.mul(a, b)] != tower.mul(int(conj[a]), int(conj[b])):
                report.fail({'reason': 'conjugation is not a field automorphism', 'pair': [a, b]})
                break

    for x in base.elements():
        for y in base.elements():
            ex, ey = embed_subfield(x, tower), embed_subfield(y, tower)
            if embed_subfield(x + y, tower) != ex + ey or embed_subfield(x * y, tower) != ex * ey:
                report.fail({'reason': 'embedding is not a homomorphism', 'pair': [x.value, y.value]})

    eps = special_scalar(tower)
    report.details['special_scalar'] = list(eps.coefficients)
    report.details['fixed_field_size'] = len(fixed)
    return report
