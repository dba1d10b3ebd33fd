# -*- coding: utf-8 -*-

import sys
import pprint

from lib.core.config import parse_args
from lib.core.commands import run_command
from lib.utils.utils import create_logger, prepare_output_dir


def main(cfg):
    logger = create_logger(cfg.LOGDIR, phase='search', debug=cfg.DEBUG)
    logger.info('...Searching relative m-covers at q={}...'.format(cfg.GEOMETRY.Q))
    logger.debug(pprint.pformat(cfg))

    return run_command('search', cfg)


if __name__ == '__main__':
    cfg, cfg_file = parse_args()
    cfg = prepare_output_dir(cfg, 'search')

    sys.exit(main(cfg))
