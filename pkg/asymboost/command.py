from __future__ import print_function

import argparse
import logging
import os
import pprint
import time
from fractions import Fraction

import asymboost
from .api import *
from .core import validate_gamma
from .data import CsvSchema, load_csv
from .plugin import *

log = logging.getLogger('command')

OUTPUT_DIR_ENV = 'ASYMBOOST_OUTPUT_DIR'


# https://gist.github.com/sampsyo/471779
class AliasedSubParsersAction(argparse._SubParsersAction):
    class _AliasedPseudoAction(argparse.Action):
        def __init__(self, name, aliases, help):
            dest = name
            if aliases:
                dest += ' (%s)' % ','.join(aliases)
            sup = super(AliasedSubParsersAction._AliasedPseudoAction, self)
            sup.__init__(option_strings=[], dest=dest, help=help)

    def add_parser(self, name, **kwargs):
        aliases = kwargs.pop('aliases', [])
        parser = super(AliasedSubParsersAction, self).add_parser(name, **kwargs)

        # Make the aliases work.
        for alias in aliases:
            self._name_parser_map[alias] = parser
        # Make the help text reflect them, first removing old help entry.
        if 'help' in kwargs:
            help = kwargs.pop('help')
            self._choices_actions.pop()
            pseudo_action = self._AliasedPseudoAction(name, aliases, help)
            self._choices_actions.append(pseudo_action)

        return parser


def parse_gamma(text):
    """
    Parse an asymmetry value given as a decimal ("0.875") or a fraction
    ("7/8").
    """
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidGammaError("Invalid gamma '{}': expected a decimal or a fraction like 2/3".format(text))
    return validate_gamma(float(value))


def parse_gammas(text):
    gammas = [parse_gamma(g) for g in str(text).split(',') if g.strip()]
    if not gammas:
        raise UsageError("No gamma values given")
    return gammas


def parse_bool(value):
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ('1', 'true', 'yes', 'on')


def require_file(path, what):
    if path is None:
        raise UsageError("No {} file given".format(what))
    if not os.path.isfile(path):
        raise UsageError("{} file '{}' does not exist".format(what.capitalize(), path))
    return path


class Command(object):
    """
    Parent class for all subcommands.

    A command reads its settings from the loaded scruffy config, then lets
    command line flags override them. `run()` returns the process exit code
    and raises an AsymBoostError subclass on failure.
    """
    command_type = None
    help = None

    @classmethod
    def add_generic_arguments(cls, sp):
        sp.add_argument('--out', '-O', action='store', default=None,
                        help='output location (default: ${} or output.directory)'.format(OUTPUT_DIR_ENV))

    @classmethod
    def add_csv_arguments(cls, sp):
        sp.add_argument('--label-column', action='store', default=None, help='label column name or 0-based index')
        sp.add_argument('--positive-label', action='store', default=None, help='label value of the positive class')
        sp.add_argument('--negative-label', action='store', default=None,
                        help='label value of the negative class (default: every other value)')
        sp.add_argument('--delimiter', action='store', default=None, help='field delimiter')
        sp.add_argument('--no-header', dest='header', action='store_false', default=None,
                        help='the file has no header row')

    @classmethod
    def add_arguments(cls, sp):
        pass

    @classmethod
    def configure_subparser(cls, subparsers):
        if hasattr(cls._plugin, 'aliases'):
            sp = subparsers.add_parser(cls.command_type, aliases=cls._plugin.aliases, help=cls.help)
        else:
            sp = subparsers.add_parser(cls.command_type, help=cls.help)
        Command.add_generic_arguments(sp)
        cls.add_arguments(sp)
        sp.set_defaults(func=cls)

    def __init__(self, args=None, loaded_config=None):
        log.debug('Loading command: ' + self.__class__.__name__)
        self.pm = None
        self.args = args or argparse.Namespace()
        self.loaded_config = loaded_config if loaded_config is not None else asymboost.config
        self.started = time.time()

        self.build_config()

        log.debug("Command config: " + pprint.pformat(self.config))
        log.debug("Args: " + str(self.args))

        self.setup()

    def arg(self, name):
        return getattr(self.args, name, None)

    def build_config(self):
        """
        Resolve the settings this command uses into a plain dictionary that
        is echoed into the run manifest.
        """
        c = self.loaded_config
        self.config = {
            'training': {
                'rounds': int(c['training']['rounds']),
                'learner': str(c['training']['learner']),
                'eps_min': float(c['training']['eps_min']),
                'identity_tolerance': float(c['training']['identity_tolerance']),
            },
            'experiment': {
                'gammas': str(c['experiment']['gammas']),
                'workers': int(c['experiment']['workers']),
            },
            'output': {
                'directory': str(c['output']['directory']),
            },
            'csv': {
                'label_column': str(c['csv']['label_column']),
                'positive_label': str(c['csv']['positive_label']),
                'negative_label': str(c['csv']['negative_label']),
                'delimiter': str(c['csv']['delimiter']),
                'has_header': parse_bool(c['csv']['has_header']),
            },
        }
        if os.environ.get(OUTPUT_DIR_ENV):
            self.config['output']['directory'] = os.environ[OUTPUT_DIR_ENV]

        # Apply command-specific command-line args
        self.apply_cli_config()

    def apply_cli_config(self):
        if self.arg('out') is not None:
            self.config['output']['directory'] = self.arg('out')
        csv_flags = {
            'label_column': self.arg('label_column'),
            'positive_label': self.arg('positive_label'),
            'negative_label': self.arg('negative_label'),
            'delimiter': self.arg('delimiter'),
            'has_header': self.arg('header'),
        }
        for key, value in csv_flags.items():
            if value is not None:
                self.config['csv'][key] = value

    def csv_schema(self):
        c = self.config['csv']
        label = c['label_column']
        try:
            label = int(label)
        except ValueError:
            pass
        return CsvSchema(label_column=label, positive_label=c['positive_label'],
                         negative_label=c['negative_label'] or None, delimiter=c['delimiter'],
                         has_header=c['has_header'])

    def load_dataset(self, path, what='data'):
        return load_csv(require_file(path, what), self.csv_schema())

    def make_learner(self):
        return learner(self.config['training']['learner'])

    def output_directory(self):
        return self.config['output']['directory']

    def setup(self):
        log.debug('Base command class setup')

    def cleanup(self):
        log.debug('Base command class cleanup')

    def run(self):
        log.warning('Might wanna implement run() in this command eh')
        return 0
