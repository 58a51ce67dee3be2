from __future__ import print_function

import logging

from asymboost.command import *
from asymboost.harness import ExperimentConfig, loocv, write_loocv_reports, write_run_manifest
from asymboost.report import format_summary

log = logging.getLogger('command')


class LoocvCommand(Command):
    """
    Leave-one-out evaluation over a list of asymmetries, printed as a
    FN / FP / ClErr / AsErr table.
    """
    help = 'leave-one-out evaluation over a gamma sweep'

    @classmethod
    def add_arguments(cls, sp):
        sp.add_argument('--data', required=True, help='dataset CSV')
        sp.add_argument('--gammas', default=None, help='comma separated asymmetries, decimals or fractions')
        sp.add_argument('--rounds', '-T', type=int, default=None, help='rounds per fold')
        sp.add_argument('--workers', '-j', type=int, default=None, help='worker threads')
        sp.add_argument('--learner', default=None, help='weak learner plugin')
        Command.add_csv_arguments(sp)

    def apply_cli_config(self):
        super(LoocvCommand, self).apply_cli_config()
        if self.arg('gammas') is not None:
            self.config['experiment']['gammas'] = self.arg('gammas')
        if self.arg('workers') is not None:
            self.config['experiment']['workers'] = self.arg('workers')
        if self.arg('rounds') is not None:
            self.config['training']['rounds'] = self.arg('rounds')
        if self.arg('learner') is not None:
            self.config['training']['learner'] = self.arg('learner')

    def experiment(self, source):
        return ExperimentConfig(
            gammas=parse_gammas(self.config['experiment']['gammas']),
            t_max=self.config['training']['rounds'],
            workers=self.config['experiment']['workers'],
            output_directory=self.output_directory(),
            learner=self.make_learner(),
            eps_min=self.config['training']['eps_min'],
            source=source).validate()

    def run(self):
        experiment = self.experiment({'data': self.arg('data'), 'schema': self.csv_schema().to_dict()})
        dataset = self.load_dataset(self.arg('data'))
        results = loocv(experiment, dataset)

        paths = write_loocv_reports(results, experiment.output_directory)
        self.config['experiment']['gammas'] = list(experiment.gammas)
        write_run_manifest(experiment.output_directory, 'loocv', self.config, self.started, paths)

        print(format_summary(results))
        for p in paths:
            print(p)
        return 0


class LoocvCommandPlugin(CommandPlugin):
    plugin_type = 'command'
    name = 'loocv'
    aliases = ('cv',)
    command_class = LoocvCommand
