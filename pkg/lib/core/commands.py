# -*- coding: utf-8 -*-

import logging
import os.path as osp

from lib.core.config import TOOL_VERSION, check_cfg, worker_count
from lib.core.errors import RelcoverError, ConfigError
from lib.core.report import RunReport, ReportWriter
from lib.core.verifier import Verifier
from lib.covers.certificates import theorem_check
from lib.covers.search import SearchConfig, search_covers
from lib.geometry.bundle import build_geometry, save_geometry, load_geometry, default_cache_path

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FALSIFIED = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def cache_path(cfg):
    if cfg.GEOMETRY.CACHE:
        return cfg.GEOMETRY.CACHE
    return default_cache_path(cfg.GEOMETRY.CACHE_DIR, cfg.GEOMETRY.Q)


def get_geometry(cfg):
    """Load the cache named by --cache, else the default cache of q, else build in memory."""
    path = cache_path(cfg)
    if cfg.GEOMETRY.CACHE or osp.isfile(path):
        bundle = load_geometry(path, table_limit=cfg.GEOMETRY.TABLE_LIMIT)
        if cfg.GEOMETRY.CACHE and bundle.q != cfg.GEOMETRY.Q:
            logger.info(f'Cache {path} holds q={bundle.q}, overriding q={cfg.GEOMETRY.Q}')
            cfg.GEOMETRY.Q = bundle.q
            check_cfg(cfg)
        return bundle
    logger.info(f'No cache at {path}, building q={cfg.GEOMETRY.Q} in memory')
    return build_geometry(cfg.GEOMETRY.Q, table_limit=cfg.GEOMETRY.TABLE_LIMIT)


def cmd_build(cfg):
    check_cfg(cfg)
    path = cache_path(cfg)
    bundle = build_geometry(cfg.GEOMETRY.Q, table_limit=cfg.GEOMETRY.TABLE_LIMIT)
    checksum = save_geometry(bundle, path)
    with ReportWriter(cfg.REPORT.OUT) as writer:
        writer.write({
            'record': 'build',
            'tool_version': TOOL_VERSION,
            'q': bundle.q,
            'path': path,
            'checksum': checksum,
            'geometry': bundle.header(),
        })
    return EXIT_PASS


def cmd_verify(cfg):
    check_cfg(cfg)
    bundle = get_geometry(cfg)
    with ReportWriter(cfg.REPORT.OUT) as writer:
        run = Verifier(bundle, cfg, writer=writer).run()
    return EXIT_PASS if run.passed else EXIT_FALSIFIED


def cmd_search(cfg):
    check_cfg(cfg)
    bundle = get_geometry(cfg)
    m = cfg.SEARCH.M
    if not 0 < m < bundle.q:
        raise ConfigError(f'--m must satisfy 0 < m < q={bundle.q}, got {m}')

    config = SearchConfig.from_cfg(cfg, workers=worker_count(cfg))
    try:
        outcome = search_covers(bundle, m, config)
    except ValueError as e:
        raise ConfigError(str(e))

    timings = bool(cfg.REPORT.TIMINGS)
    run = RunReport(tool_version=TOOL_VERSION, q=bundle.q, checksum=bundle.checksum, header=bundle.header())
    run.searches.append(outcome)
    for R in outcome.solutions:
        for report in theorem_check(bundle, R):
            run.add(report)

    with ReportWriter(cfg.REPORT.OUT) as writer:
        writer.header(run)
        writer.write(outcome.to_record(bundle, timings))
        for record in run.statement_records(timings):
            writer.write(record)
        writer.summary(run)
    return EXIT_PASS if run.passed else EXIT_FALSIFIED


COMMANDS = {
    'build': cmd_build,
    'verify': cmd_verify,
    'search': cmd_search,
}


def run_command(name, cfg):
    """Run a command and map every failure onto the exit code contract."""
    try:
        return COMMANDS[name](cfg)
    except RelcoverError as e:
        logger.error(f'{type(e).__name__}: {e}')
        return getattr(e, 'exit_code', EXIT_FALSIFIED)
    except OSError as e:
        logger.error(f'I/O error: {e}')
        return EXIT_IO
