# -*- coding: utf-8 -*-

import os
import yaml
import argparse
from yacs.config import CfgNode as CN

from lib.core.errors import ConfigError

# CONSTANTS
# You may modify them at will
base_dir = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
CACHE_DIR = os.path.join(base_dir, 'data', 'geometry')
TOOL_VERSION = '1.0.0'
THREADS_ENV = 'RELCOVER_THREADS'

# Configuration variables
cfg = CN()

# run folders (log and config dump) are only created when this is set
cfg.OUTPUT_DIR = ''
cfg.EXP_NAME = 'default'
cfg.DEBUG = False
cfg.LOGDIR = ''
cfg.NUM_WORKERS = 1
cfg.SEED_VALUE = 0

cfg.GEOMETRY = CN()
cfg.GEOMETRY.Q = 2
cfg.GEOMETRY.CACHE = ''
cfg.GEOMETRY.CACHE_DIR = CACHE_DIR
cfg.GEOMETRY.UNSAFE = False
cfg.GEOMETRY.MAX_SAFE_Q = 4
# full addition/multiplication tables are built up to this field order
cfg.GEOMETRY.TABLE_LIMIT = 1024

cfg.VERIFY = CN()
cfg.VERIFY.ONLY = []
cfg.VERIFY.SAMPLE_BUDGET = 10000
cfg.VERIFY.EXHAUSTIVE_MAX_Q = 3
cfg.VERIFY.EXPORT_SCHEME = False
cfg.VERIFY.EXPORT_IDEMPOTENTS = False
# empty list means every 0 < m < q
cfg.VERIFY.SEARCH_M = []
# node budget of verify-time searches, mode and time limit come from SEARCH
cfg.VERIFY.SEARCH_BUDGET_NODES = 2000000

cfg.SEARCH = CN()
cfg.SEARCH.M = 1
cfg.SEARCH.MODE = 'auto'
cfg.SEARCH.BUDGET_NODES = 2000000
cfg.SEARCH.BUDGET_SECONDS = 0.
cfg.SEARCH.SEED = -1
cfg.SEARCH.DEDUP_SIGMA = False
cfg.SEARCH.FORCE_IN = []
cfg.SEARCH.FORCE_OUT = []

cfg.REPORT = CN()
cfg.REPORT.OUT = ''
cfg.REPORT.TIMINGS = False

SEARCH_MODES = ('auto', 'exhaustive', 'budgeted')


def get_cfg_defaults():
    """Get a yacs CfgNode object with default values for relcover."""
    # Return a clone so that the defaults will not be altered
    # This is for the "local variable" use pattern
    return cfg.clone()


def update_cfg(cfg_file):
    cfg = get_cfg_defaults()
    try:
        cfg.merge_from_file(cfg_file)
    except (OSError, KeyError, ValueError, yaml.YAMLError) as e:
        raise ConfigError(f'could not merge config {cfg_file}: {e}')
    return cfg.clone()


def worker_count(cfg):
    workers = max(1, int(cfg.NUM_WORKERS))
    cap = os.environ.get(THREADS_ENV, '')
    if cap:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f'{THREADS_ENV} must be an integer, got {cap!r}')
    return workers


def check_cfg(cfg):
    q = cfg.GEOMETRY.Q
    if q < 2:
        raise ConfigError(f'q must be a prime power >= 2, got {q}')
    if q > cfg.GEOMETRY.MAX_SAFE_Q and not cfg.GEOMETRY.UNSAFE:
        raise ConfigError(
            f'q={q} is above the supported range (q <= {cfg.GEOMETRY.MAX_SAFE_Q}); '
            f'pass --unsafe to build it anyway'
        )
    if cfg.SEARCH.MODE not in SEARCH_MODES:
        raise ConfigError(f'unknown search mode {cfg.SEARCH.MODE!r}, expected one of {SEARCH_MODES}')
    if cfg.SEARCH.BUDGET_NODES < 0 or cfg.SEARCH.BUDGET_SECONDS < 0:
        raise ConfigError('search budgets must be non-negative')
    if cfg.VERIFY.SAMPLE_BUDGET <= 0:
        raise ConfigError('sample budget must be positive')
    return cfg


def _id_list(value):
    return [v for v in value.replace(',', ' ').split() if v]


def parse_args(argv=None):
    parser = argparse.ArgumentParser()
    parser.add_argument('--cfg', type=str, help='cfg file path')
    parser.add_argument('--q', type=int, help='order of the subfield GF(q)')
    parser.add_argument('--cache', type=str, help='geometry cache file')
    parser.add_argument('--unsafe', action='store_true', help='allow q above the supported range')
    parser.add_argument('--all', action='store_true', help='run every catalogue statement')
    parser.add_argument('--only', type=_id_list, help='comma separated statement ids')
    parser.add_argument('--sample-budget', type=int, help='pairs or points sampled above the exhaustive range')
    parser.add_argument('--export-scheme', action='store_true', help='add relations, P and Q to the report')
    parser.add_argument('--export-idempotents', action='store_true', help='add the dense idempotents to the report')
    parser.add_argument('--m', type=int, help='cover multiplicity')
    parser.add_argument('--mode', type=str, choices=SEARCH_MODES, help='search mode')
    parser.add_argument('--budget-nodes', type=int, help='search node budget')
    parser.add_argument('--budget-seconds', type=float, help='search time budget')
    parser.add_argument('--seed', type=int, help='candidate ordering seed, -1 for canonical order')
    parser.add_argument('--dedup-sigma', action='store_true', help='report one solution per sigma/complement orbit')
    parser.add_argument('--force-in', type=int, nargs='+', help='line indices forced into every solution')
    parser.add_argument('--force-out', type=int, nargs='+', help='line indices excluded from every solution')
    parser.add_argument('--out', type=str, help='report file, stdout when omitted')
    parser.add_argument('--workers', type=int, help='worker processes')

    args = parser.parse_args(argv)

    cfg_file = args.cfg
    if args.cfg is not None:
        try:
            cfg = update_cfg(args.cfg)
        except ConfigError as e:
            parser.error(str(e))
    else:
        cfg = get_cfg_defaults()

    if args.q is not None:
        cfg.GEOMETRY.Q = args.q
    if args.cache is not None:
        cfg.GEOMETRY.CACHE = args.cache
    if args.unsafe:
        cfg.GEOMETRY.UNSAFE = True
    if args.all:
        cfg.VERIFY.ONLY = []
    elif args.only is not None:
        cfg.VERIFY.ONLY = args.only
    if args.sample_budget is not None:
        cfg.VERIFY.SAMPLE_BUDGET = args.sample_budget
    if args.export_scheme:
        cfg.VERIFY.EXPORT_SCHEME = True
    if args.export_idempotents:
        cfg.VERIFY.EXPORT_IDEMPOTENTS = True
    if args.m is not None:
        cfg.SEARCH.M = args.m
    if args.mode is not None:
        cfg.SEARCH.MODE = args.mode
    if args.budget_nodes is not None:
        cfg.SEARCH.BUDGET_NODES = args.budget_nodes
    if args.budget_seconds is not None:
        cfg.SEARCH.BUDGET_SECONDS = args.budget_seconds
    if args.seed is not None:
        cfg.SEARCH.SEED = args.seed
    if args.dedup_sigma:
        cfg.SEARCH.DEDUP_SIGMA = True
    if args.force_in is not None:
        cfg.SEARCH.FORCE_IN = args.force_in
    if args.force_out is not None:
        cfg.SEARCH.FORCE_OUT = args.force_out
    if args.out is not None:
        cfg.REPORT.OUT = args.out
    if args.workers is not None:
        cfg.NUM_WORKERS = args.workers

    return cfg, cfg_file
