# -*- coding: utf-8 -*-

import os
import sys
import time
import logging
from os import path as osp


def create_logger(logdir='', phase='verify', debug=False):
    head = '%(asctime)-15s %(message)s'
    logger = logging.getLogger()
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    if logdir:
        os.makedirs(logdir, exist_ok=True)
        log_file = osp.join(logdir, f'{phase}_log.txt')
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(head))
        logger.addHandler(file_handler)

    # stdout carries the json report, logs go to stderr
    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter(head))
    logger.addHandler(console)
    logger.setLevel(logging.DEBUG if debug else logging.INFO)

    return logger


def prepare_output_dir(cfg, phase):
    if not cfg.OUTPUT_DIR:
        return cfg

    # ==== create logdir
    logtime = time.strftime('%d-%m-%Y_%H-%M-%S')
    logdir = f'{logtime}_{cfg.EXP_NAME}_q{cfg.GEOMETRY.Q}_{phase}'

    logdir = osp.join(cfg.OUTPUT_DIR, logdir)
    os.makedirs(logdir, exist_ok=True)

    cfg.LOGDIR = logdir

    # save config
    with open(osp.join(cfg.LOGDIR, 'config.yaml'), 'w') as f:
        f.write(cfg.dump())

    return cfg
