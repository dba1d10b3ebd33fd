# -*- coding: utf-8 -*-

import sys
import pprint

from lib.core.config import parse_args
from lib.core.commands import run_command
from lib.utils.utils import create_logger, prepare_output_dir


def main(cfg):
    logger = create_logger(cfg.LOGDIR, phase='build', debug=cfg.DEBUG)
    logger.info('...Building H(3,q^2) with W(3,q) at q={}...'.format(cfg.GEOMETRY.Q))
    logger.debug(pprint.pformat(cfg))

    return run_command('build', cfg)


if __name__ == '__main__':
    cfg, cfg_file = parse_args()
    cfg = prepare_output_dir(cfg, 'build')

    sys.exit(main(cfg))
