"""
Bounded worker pool shared by the scenario drivers
"""

import os
from concurrent.futures import ThreadPoolExecutor

from . import constants
from .exception import ConfigurationError


def default_workers():
    """Worker count from the environment, 1 when unset"""
    value = os.getenv(constants.WORKERS_ENV_VAR)
    if value is None or value == '':
        return 1
    try:
        workers = int(value)
    except ValueError:
        raise ConfigurationError("{} must be an integer, got '{}'".format(constants.WORKERS_ENV_VAR, value))
    if workers < 1:
        raise ConfigurationError("{} must be positive, got {}".format(constants.WORKERS_ENV_VAR, workers))
    return workers


def run_tasks(func, tasks, workers=1):
    """
    Apply func to every task and return the results in task order

    Results never depend on the worker count: each task is pure and the
    collector keeps submission order.
    """
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, tasks))
