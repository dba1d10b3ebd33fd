# -*- coding: utf-8 -*-

import time
import logging
import numpy as np
from progress.bar import Bar

from lib.core.config import TOOL_VERSION, worker_count
from lib.core.report import CheckReport, RunReport, select_statements
from lib.fields.galois_field import verify_fields
from lib.geometry.bundle import verify_counts
from lib.geometry.incidence import (
    verify_gq,
    hermitian_quadrangle,
    symplectic_quadrangle,
    index_sample,
    check_spreads,
    spread_intersection_profile,
    check_barlemma,
    check_lemma3,
    check_perp_sizes,
    check_external_point_lines,
)
from lib.scheme.relations import verify_scheme_axioms
from lib.scheme.idempotents import build_scheme, verify_idempotents, verify_eigenmatrices
from lib.scheme.spectral import (
    verify_point_relation_identities,
    verify_prop1,
    verify_theorem2_rank,
    verify_theorem2_structure,
    verify_line_projection_formulas,
    verify_corollary_span,
)
from lib.covers.certificates import (
    CoverCandidate,
    spectral_certificate,
    verify_chiR_relation_identities,
    theorem_check,
    check_lemma1,
    check_random_subsets,
)
from lib.covers.search import SearchConfig, search_covers

logger = logging.getLogger(__name__)

SEARCH_STATEMENTS = ('THM1A', 'THM1B')


class Verifier():
    def __init__(
            self,
            bundle,
            cfg,
            writer=None,
    ):
        self.bundle = bundle
        self.cfg = cfg
        self.writer = writer

        self.q = bundle.q
        self.statements = select_statements(list(cfg.VERIFY.ONLY))
        self.exhaustive = self.q <= cfg.VERIFY.EXHAUSTIVE_MAX_Q
        self.budget = int(cfg.VERIFY.SAMPLE_BUDGET)
        self.seed = int(cfg.SEED_VALUE)
        self.timings = bool(cfg.REPORT.TIMINGS)

        self._scheme = None
        self._scheme_error = None
        self._outcomes = None

        self.run_report = RunReport(tool_version=TOOL_VERSION, q=self.q, checksum=bundle.checksum,
                                    header=bundle.header())

    # ========= shared state ========= #
    @property
    def scheme(self):
        if self._scheme is None and self._scheme_error is None:
            try:
                self._scheme = build_scheme(self.bundle)
            except Exception as e:
                self._scheme_error = e
        if self._scheme_error is not None:
            raise self._scheme_error
        return self._scheme

    @property
    def search_ms(self):
        ms = list(self.cfg.VERIFY.SEARCH_M) or list(range(1, self.q))
        return [m for m in ms if 0 < m < self.q]

    @property
    def outcomes(self):
        """Searches run once, and only when a theorem statement is selected."""
        if self._outcomes is None:
            self._outcomes = []
            if not any(s in self.statements for s in SEARCH_STATEMENTS):
                return self._outcomes
            config = SearchConfig(mode=self.cfg.SEARCH.MODE,
                                  budget_nodes=int(self.cfg.VERIFY.SEARCH_BUDGET_NODES),
                                  budget_seconds=float(self.cfg.SEARCH.BUDGET_SECONDS),
                                  seed=int(self.cfg.SEARCH.SEED), workers=worker_count(self.cfg))
            for m in self.search_ms:
                outcome = search_covers(self.bundle, m, config)
                self._outcomes.append(outcome)
                self.run_report.searches.append(outcome)
                if self.writer is not None:
                    self.writer.write(outcome.to_record(self.bundle, self.timings))
        return self._outcomes

    @property
    def found_covers(self):
        return [R for outcome in self.outcomes for R in outcome.solutions]

    def rows(self, n):
        return index_sample(n, self.exhaustive, self.budget, self.seed)

    # ========= statements ========= #
    def gq_axioms(self):
        H = hermitian_quadrangle(self.bundle)
        return [verify_gq(H), verify_gq(symplectic_quadrangle(self.bundle)), verify_gq(H.dual())]

    def counts(self):
        return [verify_counts(self.bundle), verify_fields(self.bundle.tower),
                check_external_point_lines(self.bundle)]

    def lemma1(self):
        return [check_lemma1(self.bundle, self.found_covers),
                check_random_subsets(self.bundle, seed=self.seed)]

    def brown_table(self):
        return [check_spreads(self.bundle),
                spread_intersection_profile(self.bundle, self.exhaustive, self.budget, self.seed)]

    def lemma2(self):
        return [check_barlemma(self.bundle, self.exhaustive, self.budget, self.seed)]

    def lemma3(self):
        return [check_lemma3(self.bundle, self.exhaustive, self.budget, self.seed),
                check_perp_sizes(self.bundle)]

    def scheme_axioms(self):
        S = self.scheme
        report, _ = verify_scheme_axioms(S)
        if self.cfg.VERIFY.EXPORT_SCHEME:
            ext = self.bundle.ext_lines
            report.details['relations'] = {
                f'A{i}': [ext[np.flatnonzero(row)].tolist() for row in S.relations[i]] for i in range(1, 5)
            }
            report.details['external_lines'] = ext.tolist()
        return [report]

    def eigenmatrices(self):
        return [verify_eigenmatrices(self.scheme)]

    def idempotents(self):
        S = self.scheme
        report = verify_idempotents(S)
        if self.cfg.VERIFY.EXPORT_IDEMPOTENTS:
            report.details['denominator'] = S.denominator
            report.details['numerators'] = S.idempotents
        return [report]

    def prop1(self):
        S = self.scheme
        rows = None if self.exhaustive else self.rows(len(self.bundle.ext_points))
        return [verify_point_relation_identities(self.bundle, S, rows), verify_prop1(self.bundle, S, rows)]

    def theorem2_rank(self):
        return [verify_theorem2_rank(self.bundle, self.scheme)]

    def theorem2_structure(self):
        return [verify_theorem2_structure(self.bundle, self.scheme)]

    def line_projections(self):
        rows = None if self.exhaustive else self.rows(self.bundle.n_ext)
        return [verify_line_projection_formulas(self.bundle, self.scheme, rows)]

    def corollary(self):
        S, n = self.scheme, self.bundle.n_ext
        reports = [verify_corollary_span(self.bundle, S, exact=self.exhaustive)]
        for R in [CoverCandidate(0, n), CoverCandidate.everything(n)] + self.found_covers:
            reports.append(spectral_certificate(self.bundle, S, R))
        return reports

    def theorem1a(self):
        q = self.q
        reports = []
        for outcome in self.outcomes:
            report = CheckReport('THM1A', f'relative {outcome.m}-covers', True,
                                 params={'q': q, 'm': outcome.m, 'mode': outcome.mode},
                                 details={'solutions': len(outcome.solutions), 'exhausted': outcome.exhausted,
                                          'tree_closed': outcome.tree_closed, 'nodes': outcome.nodes})
            if outcome.solutions and (q % 2 or 2 * outcome.m != q):
                report.fail({'m': outcome.m, 'lines': outcome.solutions[0].global_lines(self.bundle)})
            reports.append(report)
            reports.extend(theorem_check(self.bundle, R)[0] for R in outcome.solutions)
        if not reports:
            reports.append(CheckReport('THM1A', 'no multiplicity in range', True,
                                       params={'q': q, 'search_m': list(self.cfg.VERIFY.SEARCH_M)}))
        return reports

    def theorem1b(self):
        S, n = self.scheme, self.bundle.n_ext
        reports = []
        for R in self.found_covers:
            reports.append(theorem_check(self.bundle, R)[1])
            reports.append(verify_chiR_relation_identities(self.bundle, S, R))
        for R in (CoverCandidate(0, n), CoverCandidate.everything(n)):
            reports.append(verify_chiR_relation_identities(self.bundle, S, R))
        return reports

    @property
    def handlers(self):
        return {
            'GQ-AXIOMS': self.gq_axioms,
            'EQ1-COUNTS': self.counts,
            'LEMMA1': self.lemma1,
            'BROWN-TABLE': self.brown_table,
            'LEMMA2': self.lemma2,
            'LEMMA3': self.lemma3,
            'THM3-SCHEME': self.scheme_axioms,
            'EQ2-Q': self.eigenmatrices,
            'E-IDEMPOTENTS': self.idempotents,
            'PROP1': self.prop1,
            'THM2-RANK': self.theorem2_rank,
            'THM2-M-STRUCTURE': self.theorem2_structure,
            'LINE-PROJECTIONS': self.line_projections,
            'COR-SINV0V1': self.corollary,
            'THM1A': self.theorem1a,
            'THM1B': self.theorem1b,
        }

    def check_statement(self, statement):
        start = time.time()
        try:
            reports = self.handlers[statement]()
        except Exception as e:
            logger.exception(f'{statement}: {type(e).__name__}: {e}')
            reports = [CheckReport(statement, 'exception', False, params={'q': self.q},
                                   witness={'error': type(e).__name__, 'message': str(e)})]
        elapsed = time.time() - start
        for report in reports:
            report.elapsed = elapsed / len(reports)
            self.run_report.add(report)
        return reports

    def run(self):
        start = time.time()
        logger.info(f'Verifying {len(self.statements)} statements at q={self.q} '
                    f'({"exhaustive" if self.exhaustive else f"sampled, budget {self.budget}"})')
        if self.writer is not None:
            self.writer.header(self.run_report)

        bar = Bar('Verification', fill='#', max=len(self.statements))
        for statement in self.statements:
            reports = self.check_statement(statement)
            passed = all(r.passed for r in reports)
            if self.writer is not None:
                record = [rec for rec in self.run_report.statement_records(self.timings)
                          if rec['statement'] == statement][0]
                self.writer.write(record)
            bar.suffix = f'{statement}: {"pass" if passed else "FAIL"} | Total: {bar.elapsed_td}'
            bar.next()
            if not passed:
                logger.warning(f'{statement} failed: {[r.witness for r in reports if not r.passed][0]}')
        bar.finish()

        if self.writer is not None:
            self.writer.summary(self.run_report)
        failed = self.run_report.failed_statements()
        logger.info(f'Verification finished in {time.time() - start:.2f}s, '
                    f'{"all statements pass" if not failed else f"failed: {failed}"}')
        return self.run_report
