from __future__ import print_function

import argparse
import logging
import sys
import traceback

import yaml

import asymboost
from .api import *
from .api import __version__
from .command import *

log = logging.getLogger('main')


def parse_options(options):
    """
    Turn `-o section.key=value` overrides into a dictionary.
    """
    parsed = {}
    for option in options:
        if '=' not in option:
            raise UsageError("Invalid override '{}', expected section.key=value".format(option))
        key, value = option.split('=', 1)
        parsed[key.strip()] = value.strip()
    return parsed


def load_config_file(path):
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except (IOError, OSError) as e:
        raise UsageError("Cannot read config file {}: {}".format(path, e))
    except yaml.YAMLError as e:
        raise UsageError("Invalid config file {}: {}".format(path, e))
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise UsageError("Config file {} must contain a mapping".format(path))
    return data


def build_parser():
    parser = argparse.ArgumentParser(prog='asymboost', description='Asymmetric AdaBoost experiments')
    parser.register('action', 'parsers', AliasedSubParsersAction)
    parser.add_argument('--debug', '-d', action='store_true', help='write a debug log to ~/.asymboost')
    parser.add_argument('--verbose', '-v', action='store_true', help='log progress to stderr')
    parser.add_argument('--config', '-c', default=None, help='YAML config file merged over the defaults')
    parser.add_argument('-o', action='append', help='override config variable', default=[])
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(__version__))
    sp = parser.add_subparsers(title='subcommands', description='valid subcommands', dest='subcommand')
    sp.required = True

    # Set up a subcommand for each command plugin
    for name in sorted(pm.command_plugins):
        pm.command_plugins[name].command_class.configure_subparser(sp)

    return parser


def main(argv=None):
    """
    Command line entry point. Returns the process exit code: 0 on success,
    2 for usage errors, 3 for data errors and 4 for identity-check failures.
    """
    asymboost.setup_logging('main')

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    inst = None
    try:
        if args.debug:
            asymboost.config['general']['debug_logging'] = True
        if args.verbose:
            asymboost.config['general']['verbose'] = True
        if args.debug or args.verbose:
            asymboost.setup_logging('main')
        if args.config:
            asymboost.config.update(load_config_file(args.config))
        asymboost.config.update(options=parse_options(args.o))

        # Instantiate and run the appropriate command
        inst = args.func(args, loaded_config=asymboost.config)
        inst.pm = pm
        return inst.run()
    except AsymBoostError as e:
        log.exception("Error running {}: {}".format(args.subcommand, e))
        print("asymboost {}: error: {}".format(args.subcommand, e), file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        return 130
    except Exception as e:
        log.exception("Exception running {}: {}".format(args.subcommand, traceback.format_exc()))
        print("Encountered an exception while running '{}':\n{}".format(args.subcommand, traceback.format_exc()),
              file=sys.stderr)
        return 1
    finally:
        if inst is not None:
            inst.cleanup()
