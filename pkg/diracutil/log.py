#!/usr/bin/env python
#
# log.py
#
# Logging library for the Dirac scattering command-line laboratory
#

try:
    import logging
    import os
    import sys

    import click

    from utilities_common import constants
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))

# ========================= Constants ==========================================

SYSLOG_IDENTIFIER = constants.SYSLOG_IDENTIFIER
LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s: %(message)s"

# Global logger instance
log = logging.getLogger(SYSLOG_IDENTIFIER)


def setup_logging(verbose=False, stream=None):
    """
    Route the package logger to stderr

    DEBUG with --verbose, otherwise $DIRACUTIL_LOG_LEVEL or INFO.
    """
    level_name = os.getenv(constants.LOG_LEVEL_ENV_VAR, 'INFO').upper()
    level = logging.DEBUG if verbose else getattr(logging, level_name, logging.INFO)

    for handler in list(log.handlers):
        log.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr if stream is None else stream)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    log.addHandler(handler)
    log.setLevel(level)
    log.propagate = False
    return log


# ========================= Helper classes =====================================

class LogHelper(object):
    """
    LogHelper
    """
    STATUS_SUCCESS = "success"
    STATUS_FAILURE = "failure"

    def log_scenario_start(self, scenario, n):
        log.info("Scenario {} started: N={}".format(scenario, n))

    def log_scenario_end(self, scenario, n, status, exception=None):
        caption = "Scenario {} ended".format(scenario)

        status_template = "{}: N={}, status={}"
        exception_template = "{}: N={}, status={}, exception={}"

        if status:
            log.info(status_template.format(caption, n, self.STATUS_SUCCESS))
        elif exception is None:
            log.error(status_template.format(caption, n, self.STATUS_FAILURE))
        else:
            log.error(exception_template.format(caption, n, self.STATUS_FAILURE, str(exception)))

    def print_error(self, msg):
        click.echo("Error: {}.".format(msg), err=True)

    def print_warning(self, msg):
        click.echo("Warning: {}.".format(msg), err=True)

    def print_info(self, msg):
        click.echo("Info: {}.".format(msg), err=True)
