#!/usr/bin/env python
#
# main.py
#
# Command-line laboratory for 1D Dirac scattering on chirp potentials
#

try:
    import os

    import click

    from utilities_common import constants
    from utilities_common.cli import AliasedGroup, scenario_click_options
    from utilities_common.exception import ConfigurationError, DiracRuntimeException

    from . import lib
    from .emit import emit
    from .log import LogHelper, setup_logging
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))

# ========================= Constants ==========================================

VERSION = '1.0.0'

ALIASES_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'aliases.ini')
CONTEXT_SETTINGS = dict(help_option_names=['-h', '--help', '-?'])

BUMP_KINDS = [constants.BUMP_KIND_EXPONENTIAL, constants.BUMP_KIND_SHARP]

# ========================= Variables ==========================================

log_helper = LogHelper()

# ========================= Helper functions ===================================

def cli_abort(ctx, msg):
    click.echo("Error: " + msg + ". Aborting...")
    ctx.abort()


def cli_exit(ctx, passed):
    ctx.exit(constants.EXIT_SUCCESS if passed else constants.EXIT_FAILURE)


def bump_kind_option(func):
    return click.option('--bump-kind', 'bump_kind', type=click.Choice(BUMP_KINDS),
                        default=constants.BUMP_KIND_EXPONENTIAL, show_default=True,
                        help='Bump profile shaping the chirp blocks')(func)


def build_config(ctx, scenario, options):
    try:
        return lib.make_config(scenario, **options)
    except ConfigurationError as e:
        ctx.fail(str(e))


def show_report(report, out):
    # the report file already went to stdout
    if out != constants.STDOUT_PATH:
        click.echo(report.table())


def run_guarded(ctx, func, cfg):
    try:
        return func(cfg)
    except ConfigurationError as e:
        ctx.fail(str(e))
    except DiracRuntimeException as e:
        cli_abort(ctx, str(e))


def run_scenario(ctx, scenario, driver, options):
    cfg = build_config(ctx, scenario, options)
    records = run_guarded(ctx, driver, cfg)
    run_guarded(ctx, lambda c: emit(records, c.fmt, c.out), cfg)

    if len(cfg.n_list) < 2:
        log_helper.print_info("Growth assessment needs at least two sizes, skipped")
        cli_exit(ctx, True)

    if scenario == lib.SCENARIO_BOUNDED:
        report = lib.assess_contrast(records, cfg.tolerances)
    else:
        report = lib.assess_growth(records, scenario, cfg.tolerances)
    click.echo(report.table(), err=True)
    if not report.passed:
        log_helper.print_warning("{} of {} growth checks failed".format(len(report.failures), len(report)))
    cli_exit(ctx, report.passed)

# ========================= CLI commands and groups ============================

# 'diracutil' command main entrypoint
@click.group(cls=AliasedGroup, aliases_file=ALIASES_FILE, context_settings=CONTEXT_SETTINGS)
@click.option('-v', '--verbose', is_flag=True, default=False, help='Log at DEBUG level')
@click.pass_context
def cli(ctx, verbose):
    """diracutil - Numerical laboratory for 1D Dirac scattering on chirp potentials"""
    setup_logging(verbose)
    ctx.ensure_object(dict)


# 'bump-check' subcommand
@cli.command(name='bump-check')
@scenario_click_options
@bump_kind_option
@click.pass_context
def bump_check(ctx, **options):
    """Check the normalization and transform of the bump profile"""
    cfg = build_config(ctx, 'bump-check', options)
    report = run_guarded(ctx, lib.run_bump_check, cfg)
    run_guarded(ctx, lambda c: emit(report, c.fmt, c.out), cfg)
    show_report(report, cfg.out)
    cli_exit(ctx, report.passed)


# 'select-a' subcommand
@cli.command(name='select-a')
@scenario_click_options
@bump_kind_option
@click.pass_context
def select_a(ctx, **options):
    """Search the frequency constant A and re-check its separation condition"""
    cfg = build_config(ctx, 'select-a', options)
    selection, report = run_guarded(ctx, lib.run_select_a, cfg)
    if selection is not None:
        log_helper.print_info("A = {!r} ({} x grid step {!r}, worst ratio {:.6g} at xi = {!r})".format(
            selection.value, selection.multiple, selection.step, selection.worst_ratio, selection.worst_xi))
    run_guarded(ctx, lambda c: emit(report, c.fmt, c.out), cfg)
    show_report(report, cfg.out)
    cli_exit(ctx, report.passed)


# 't2max' subcommand
@cli.command()
@scenario_click_options
@bump_kind_option
@click.pass_context
def t2max(ctx, **options):
    """Growth of |T_2(F, F)(k, x)| with N"""
    run_scenario(ctx, lib.SCENARIO_T2, lib.run_t2_growth, options)


# 't3inf' subcommand
@cli.command()
@scenario_click_options
@bump_kind_option
@click.pass_context
def t3inf(ctx, **options):
    """Growth of |T_3(F, F, F)(k, +inf)| with N"""
    run_scenario(ctx, lib.SCENARIO_T3, lib.run_t3_growth, options)


# 'bounded' subcommand
@cli.command()
@scenario_click_options
@bump_kind_option
@click.pass_context
def bounded(ctx, **options):
    """Boundedness of the exact scattering coefficients a and b"""
    run_scenario(ctx, lib.SCENARIO_BOUNDED, lib.run_boundedness, options)


# 'verify' subcommand
@cli.command()
@scenario_click_options
@bump_kind_option
@click.pass_context
def verify(ctx, **options):
    """Run every cross-module verification on one chirp"""
    cfg = build_config(ctx, lib.SCENARIO_VERIFY, options)
    report, fits = run_guarded(ctx, lib.run_identities, cfg)
    run_guarded(ctx, lambda c: emit(report, c.fmt, c.out), cfg)
    show_report(report, cfg.out)
    for name, fit in sorted(fits.items()):
        log_helper.print_info("Fit {}: constant={!r}, R2={}".format(name, fit.constant, fit.r2))
    if not report.passed:
        log_helper.print_error("{} of {} checks failed".format(len(report.failures), len(report)))
    cli_exit(ctx, report.passed)


# 'version' subcommand
@cli.command()
def version():
    """Print version"""
    click.echo("diracutil version {0}".format(VERSION))


if __name__ == '__main__':
    cli()
