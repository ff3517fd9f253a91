import os

import click

try:
    import ConfigParser as configparser
except ImportError:
    import configparser

from utilities_common import constants


# This is from the aliases example:
# https://github.com/pallets/click/blob/57c6f09611fc47ca80db0bd010f05998b3c0aa95/examples/aliases/aliases.py
class Config(object):
    """Object to hold CLI config"""

    def __init__(self):
        self.path = os.getcwd()
        self.aliases = {}

    def read_config(self, filename):
        parser = configparser.RawConfigParser()
        parser.read([filename])
        try:
            self.aliases.update(parser.items('aliases'))
        except configparser.NoSectionError:
            pass


class AliasedGroup(click.Group):
    """This subclass of click.Group supports abbreviations and
       looking up aliases in a config file with a bit of magic.
    """

    def __init__(self, *args, **kwargs):
        self.aliases_file = kwargs.pop('aliases_file', None)
        self._config = None
        super(AliasedGroup, self).__init__(*args, **kwargs)

    def get_command(self, ctx, cmd_name):
        # If we haven't instantiated our config, do it now and load current config
        if self._config is None:
            self._config = Config()
            if self.aliases_file is not None:
                self._config.read_config(self.aliases_file)

        # Try to get builtin commands as normal
        rv = click.Group.get_command(self, ctx, cmd_name)
        if rv is not None:
            return rv

        # No builtin found. Look up an explicit command alias in the config
        if cmd_name in self._config.aliases:
            actual_cmd = self._config.aliases[cmd_name]
            return click.Group.get_command(self, ctx, actual_cmd)

        # Alternative option: if we did not find an explicit alias we
        # allow automatic abbreviation of the command.  "verify" for
        # instance will match "ver".  We only allow that however if
        # there is only one command.
        matches = [x for x in self.list_commands(ctx)
                   if x.lower().startswith(cmd_name.lower())]
        if not matches:
            return None
        elif len(matches) == 1:
            return click.Group.get_command(self, ctx, matches[0])
        ctx.fail('Too many matches: %s' % ', '.join(sorted(matches)))


class NumberListType(click.ParamType):
    """Comma separated list of positive integers, e.g. 16,36,64"""
    name = 'n-list'

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return tuple(value)
        items = []
        for item in str(value).split(','):
            item = item.strip()
            if not item:
                continue
            try:
                items.append(int(item))
            except ValueError:
                self.fail("'{}' is not an integer".format(item), param, ctx)
        if not items:
            self.fail("empty list", param, ctx)
        return tuple(items)


class ToleranceType(click.ParamType):
    """A single name=value tolerance override"""
    name = 'name=value'

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        name, sep, number = str(value).partition('=')
        if not sep or not name.strip():
            self.fail("'{}' is not of the form name=value".format(value), param, ctx)
        try:
            number = float(number)
        except ValueError:
            self.fail("'{}' is not a number".format(number), param, ctx)
        return (name.strip(), number)


N_LIST = NumberListType()
TOLERANCE = ToleranceType()


_scenario_click_options = [
    click.option('--n-list', 'n_list', type=N_LIST, default=None,
                 help='Comma separated chirp sizes, perfect squares >= {}'.format(constants.MIN_N)),
    click.option('--j0', 'j0', type=int, default=None,
                 help='Resonant block index (default depends on the scenario)'),
    click.option('--oversample', 'oversample', type=float, default=1.0, show_default=True,
                 help='Grid refinement factor relative to the phase-resolution step'),
    click.option('--tol', 'tolerances', type=TOLERANCE, multiple=True,
                 help='Override a named tolerance, e.g. --tol fourier=1e-9'),
    click.option('--a-override', 'a_override', type=float, default=None,
                 help='Use this frequency constant instead of searching for one'),
    click.option('--out', 'out', type=click.Path(dir_okay=False, writable=True),
                 default=constants.STDOUT_PATH, show_default=True,
                 help='Result file, "-" for stdout'),
    click.option('--format', 'fmt', type=click.Choice([constants.FORMAT_CSV, constants.FORMAT_JSON]),
                 default=constants.FORMAT_CSV, show_default=True, help='Result file format'),
    click.option('--workers', 'workers', type=int, default=None,
                 help='Worker count (default from ${})'.format(constants.WORKERS_ENV_VAR)),
    click.option('--dump-profiles', 'dump_profiles', type=click.Path(file_okay=False),
                 default=None, help='Directory receiving W_m and a/b profile CSV files'),
    click.option('--timing', 'timing', is_flag=True, default=False,
                 help='Record wall time per record (output is no longer byte-stable)'),
]


def scenario_click_options(func):
    for option in reversed(_scenario_click_options):
        func = option(func)
    return func
