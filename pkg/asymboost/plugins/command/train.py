from __future__ import print_function

import logging
import os

from asymboost.command import *
from asymboost.core import AnyOf, BoundTarget, TrainingErrorTarget, WeightInit, train, verify_identities
from asymboost.harness import write_run_manifest
from asymboost.metrics import per_class_training_error
from asymboost.report import SCATTER, emit_figure_svg, write_round_log

log = logging.getLogger('command')


class TrainCommand(Command):
    """
    Train a strong classifier and write it together with its round log,
    identity residual report and a scatter of the training set with the
    selected stumps. Exits with the identity-check code if any
    residual exceeds the tolerance.
    """
    help = 'train an asymmetric classifier'

    @classmethod
    def add_arguments(cls, sp):
        sp.add_argument('--data', required=True, help='training dataset CSV')
        sp.add_argument('--gamma', required=True, help='asymmetry in (0, 1), decimal or fraction')
        sp.add_argument('--rounds', '-T', type=int, default=None, help='maximum number of rounds')
        sp.add_argument('--learner', default=None, help='weak learner plugin')
        sp.add_argument('--stop-train-err', type=float, default=None,
                        help='stop once the weighted training error is at or below this value')
        sp.add_argument('--stop-bound', type=float, default=None,
                        help='stop once the exponential bound is at or below this value')
        Command.add_csv_arguments(sp)

    def apply_cli_config(self):
        super(TrainCommand, self).apply_cli_config()
        if self.arg('rounds') is not None:
            self.config['training']['rounds'] = self.arg('rounds')
        if self.arg('learner') is not None:
            self.config['training']['learner'] = self.arg('learner')
        self.config['training']['gamma'] = self.arg('gamma')
        self.config['training']['stop_train_err'] = self.arg('stop_train_err')
        self.config['training']['stop_bound'] = self.arg('stop_bound')

    def model_path(self):
        out = self.arg('out')
        if out is None or os.path.isdir(out) or out.endswith(os.sep):
            return os.path.join(self.output_directory() if out is None else out, 'model.json')
        return out

    def stop_policy(self):
        policies = []
        if self.arg('stop_train_err') is not None:
            policies.append(TrainingErrorTarget(self.arg('stop_train_err')))
        if self.arg('stop_bound') is not None:
            policies.append(BoundTarget(self.arg('stop_bound')))
        return AnyOf(policies) if policies else None

    def run(self):
        gamma = parse_gamma(self.arg('gamma'))
        rounds = self.config['training']['rounds']
        if rounds < 1:
            raise UsageError("Rounds must be at least 1, got {}".format(rounds))
        learner = self.make_learner()
        dataset = self.load_dataset(self.arg('data'))
        init = WeightInit.for_dataset(dataset, gamma)
        eps_min = self.config['training']['eps_min']

        classifier, records = train(dataset, init, t_max=rounds, stop=self.stop_policy(), learner=learner,
                                    eps_min=eps_min)
        residuals = verify_identities(records, init, self.config['training']['identity_tolerance'], eps_min)

        path = self.model_path()
        directory = os.path.dirname(path) or '.'
        if not os.path.isdir(directory):
            try:
                os.makedirs(directory)
            except OSError as e:
                raise DataError("Cannot create {}: {}".format(directory, e))
        stem = os.path.splitext(path)[0]
        try:
            classifier.save(path)
            residuals.to_document().save(stem + '.residuals.json')
        except (IOError, OSError) as e:
            raise DataError("Cannot write model to {}: {}".format(path, e))
        write_round_log(records, stem + '.rounds.csv')
        emit_figure_svg(None, SCATTER, stem + '.scatter.svg', dataset, classifier,
                        [stump for _, stump in classifier.rounds])
        outputs = [path, stem + '.rounds.csv', stem + '.residuals.json', stem + '.scatter.svg']
        write_run_manifest(directory, 'train', self.config, self.started, outputs)

        e_pos, e_neg, e_weighted = per_class_training_error(classifier, dataset, init)
        print("rounds={} stop={}".format(len(classifier), classifier.stop_reason))
        print("train_err={!r} train_err_pos={!r} train_err_neg={!r}".format(e_weighted, e_pos, e_neg))
        for p in outputs:
            print(p)

        if not residuals.ok:
            raise IdentityCheckError("Identity residuals above {!r}: {}".format(
                residuals.tolerance, ', '.join(residuals.failures())))
        return 0


class TrainCommandPlugin(CommandPlugin):
    plugin_type = 'command'
    name = 'train'
    command_class = TrainCommand
