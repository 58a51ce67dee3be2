from __future__ import print_function

import logging
import os

from asymboost.command import *
from asymboost.harness import ExperimentConfig, curve_run, gamma_label, write_run_manifest
from asymboost.report import PANELS, SCATTER, emit_curves_csv, emit_figure_svg

log = logging.getLogger('command')


class CurvesCommand(Command):
    """
    Per-round bound and error curves on a train/test pair, written as one CSV
    per gamma and one SVG per panel, plus a scatter of the test set as each
    gamma's classifier labels it.
    """
    help = 'per-round bound and error curves over a gamma sweep'

    @classmethod
    def add_arguments(cls, sp):
        sp.add_argument('--train', dest='train_data', default=None, help='training dataset CSV')
        sp.add_argument('--test', dest='test_data', default=None, help='test dataset CSV')
        sp.add_argument('--gammas', default=None, help='comma separated asymmetries, decimals or fractions')
        sp.add_argument('--rounds', '-T', type=int, default=None, help='rounds per gamma')
        sp.add_argument('--workers', '-j', type=int, default=None, help='worker threads')
        sp.add_argument('--learner', default=None, help='weak learner plugin')
        Command.add_csv_arguments(sp)

    def apply_cli_config(self):
        super(CurvesCommand, self).apply_cli_config()
        if self.arg('gammas') is not None:
            self.config['experiment']['gammas'] = self.arg('gammas')
        if self.arg('workers') is not None:
            self.config['experiment']['workers'] = self.arg('workers')
        if self.arg('rounds') is not None:
            self.config['training']['rounds'] = self.arg('rounds')
        if self.arg('learner') is not None:
            self.config['training']['learner'] = self.arg('learner')

    def run(self):
        train_path = require_file(self.arg('train_data'), 'training')
        test_path = require_file(self.arg('test_data'), 'test')
        experiment = ExperimentConfig(
            gammas=parse_gammas(self.config['experiment']['gammas']),
            t_max=self.config['training']['rounds'],
            workers=self.config['experiment']['workers'],
            output_directory=self.output_directory(),
            learner=self.make_learner(),
            eps_min=self.config['training']['eps_min'],
            source={'train': train_path, 'test': test_path}).validate()

        train_set = self.load_dataset(train_path, 'training')
        test_set = self.load_dataset(test_path, 'test')
        series = curve_run(experiment, train_set, test_set)

        directory = experiment.output_directory
        paths = emit_curves_csv(series, directory)
        for panel in sorted(PANELS):
            paths.append(emit_figure_svg(series, panel, os.path.join(directory, '{}.svg'.format(panel))))
        for s in series:
            name = 'scatter-{}.svg'.format(gamma_label(s.gamma))
            paths.append(emit_figure_svg(series, SCATTER, os.path.join(directory, name), test_set, s.classifier))
        self.config['experiment']['gammas'] = list(experiment.gammas)
        write_run_manifest(directory, 'curves', self.config, self.started, paths)

        for p in paths:
            print(p)
        return 0


class CurvesCommandPlugin(CommandPlugin):
    plugin_type = 'command'
    name = 'curves'
    command_class = CurvesCommand
