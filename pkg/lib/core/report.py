# -*- coding: utf-8 -*-

import sys
import json
import logging
import numpy as np
from dataclasses import dataclass, field

from sympy import Rational, Integer

from lib.core.errors import CacheError, ConfigError

logger = logging.getLogger(__name__)

# verification order of the catalogue
STATEMENTS = (
    'GQ-AXIOMS',
    'EQ1-COUNTS',
    'LEMMA1',
    'BROWN-TABLE',
    'LEMMA2',
    'LEMMA3',
    'THM3-SCHEME',
    'EQ2-Q',
    'E-IDEMPOTENTS',
    'PROP1',
    'THM2-RANK',
    'THM2-M-STRUCTURE',
    'LINE-PROJECTIONS',
    'COR-SINV0V1',
    'THM1A',
    'THM1B',
)


def select_statements(only):
    if not only:
        return list(STATEMENTS)
    unknown = [s for s in only if s not in STATEMENTS]
    if unknown:
        raise ConfigError(f'unknown statement ids {unknown}, known ids are {list(STATEMENTS)}')
    return [s for s in STATEMENTS if s in set(only)]


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer, Integer)):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Rational):
        return fraction_str(obj)
    return obj


def fraction_str(x):
    x = Rational(x)
    return str(x.p) if x.q == 1 else f'{x.p}/{x.q}'


@dataclass
class CheckReport:
    """Outcome of one verification routine. Failures carry a witness."""
    statement: str
    name: str
    passed: bool
    params: dict = field(default_factory=dict)
    witness: object = None
    details: dict = field(default_factory=dict)
    elapsed: float = 0.

    def __bool__(self):
        return bool(self.passed)

    def fail(self, witness, **details):
        self.passed = False
        if self.witness is None:
            self.witness = witness
        self.details.update(details)
        return self

    def to_record(self, timings=False):
        rec = {
            'name': self.name,
            'passed': bool(self.passed),
            'params': self.params,
            'details': self.details,
        }
        if self.witness is not None:
            rec['witness'] = self.witness
        if timings:
            rec['elapsed'] = round(self.elapsed, 4)
        return to_jsonable(rec)


@dataclass
class RunReport:
    tool_version: str
    q: int
    checksum: str
    header: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    searches: list = field(default_factory=list)

    def add(self, report):
        self.checks.append(report)

    def statement_records(self, timings=False):
        """One record per statement id, in catalogue order."""
        grouped = {}
        for rep in self.checks:
            grouped.setdefault(rep.statement, []).append(rep)
        records = []
        for sid in STATEMENTS:
            if sid not in grouped:
                continue
            reps = grouped[sid]
            rec = {
                'record': 'check',
                'statement': sid,
                'q': self.q,
                'passed': all(r.passed for r in reps),
                'checks': [r.to_record(timings) for r in reps],
            }
            failing = [r for r in reps if not r.passed]
            if failing:
                rec['witness'] = to_jsonable({'check': failing[0].name, 'witness': failing[0].witness})
            if timings:
                rec['elapsed'] = round(sum(r.elapsed for r in reps), 4)
            records.append(rec)
        return records

    @property
    def passed(self):
        return all(r.passed for r in self.checks)

    def failed_statements(self):
        return sorted({r.statement for r in self.checks if not r.passed}, key=STATEMENTS.index)


class ReportWriter(object):
    """Line-delimited JSON; every record is flushed as soon as it is written."""
    def __init__(self, out=''):
        self.out = out
        self._fh = None

    def __enter__(self):
        if self.out:
            try:
                self._fh = open(self.out, 'w')
            except OSError as e:
                raise CacheError(f'could not open report file {self.out}: {e}')
        else:
            self._fh = sys.stdout
        return self

    def __exit__(self, *exc):
        if self._fh is not None and self._fh is not sys.stdout:
            self._fh.close()
        self._fh = None
        return False

    def write(self, record):
        self._fh.write(json.dumps(to_jsonable(record), sort_keys=True) + '\n')
        self._fh.flush()

    def header(self, run):
        self.write({
            'record': 'header',
            'tool_version': run.tool_version,
            'q': run.q,
            'checksum': run.checksum,
            'geometry': run.header,
        })

    def summary(self, run):
        self.write({
            'record': 'summary',
            'q': run.q,
            'passed': run.passed,
            'checks': len(run.statement_records()),
            'failed': run.failed_statements(),
            'searches': len(run.searches),
        })
