"""
Experiment orchestration: leave-one-out evaluation and per-round curve runs
over a list of asymmetry values.

Every (gamma, fold) pair is an independent work item. Items may be run by
several worker threads, but results are always merged by their key, so the
output does not depend on the worker count or on completion order.
"""
import logging
import os
import threading
import time

import numpy as np

from .api import *
from .api import __version__
from .core import EPS_MIN, WeightInit, train, validate_gamma
from .metrics import class_rates, evaluate_predictions
from .stump import StumpLearner

log = logging.getLogger('harness')

CURVE_COLUMNS = ('t', 'bound', 'bound_pos', 'bound_neg',
                 'train_err', 'train_err_pos', 'train_err_neg',
                 'test_err', 'test_err_pos', 'test_err_neg')


class ExperimentConfig(object):
    """
    Settings shared by the runs of one experiment.

    `init` is None for uniform class-conditional distributions, or a callable
    taking (dataset, gamma) and returning a WeightInit. Leave-one-out folds
    always use uniform distributions over the fold's own members.
    `source` is a plain description of where the data came from, echoed into
    the run manifest.
    """
    def __init__(self, gammas, t_max=100, workers=1, output_directory='.', init=None, learner=None,
                 eps_min=EPS_MIN, source=None):
        self.gammas = list(gammas)
        self.t_max = t_max
        self.workers = workers
        self.output_directory = output_directory
        self.init = init
        self.learner = learner
        self.eps_min = eps_min
        self.source = source

    def validate(self):
        if not self.gammas:
            raise UsageError("At least one gamma is needed")
        self.gammas = [validate_gamma(g) for g in self.gammas]
        if int(self.t_max) != self.t_max or self.t_max < 1:
            raise UsageError("Rounds must be a positive integer, got {!r}".format(self.t_max))
        if int(self.workers) != self.workers or self.workers < 1:
            raise UsageError("Workers must be a positive integer, got {!r}".format(self.workers))
        return self

    def weight_init(self, dataset, gamma):
        if self.init is None:
            return WeightInit.for_dataset(dataset, gamma)
        return self.init(dataset, gamma)

    def make_learner(self):
        return self.learner or StumpLearner()

    def to_dict(self):
        return {
            'gammas': list(self.gammas),
            't_max': int(self.t_max),
            'workers': int(self.workers),
            'output_directory': self.output_directory,
            'init': 'uniform' if self.init is None else getattr(self.init, '__name__', 'custom'),
            'learner': getattr(self.make_learner(), 'name', None),
            'eps_min': self.eps_min,
            'source': self.source,
        }


def gamma_label(gamma):
    """
    Short label used in file names and legends.
    """
    return '{:.4f}'.format(gamma)


def run_work_items(items, func, workers=1):
    """
    Call `func(*item)` for every item and return {item: result}.

    With more than one worker the items are shared between threads through a
    list guarded by a lock. If any item raises, the error of the first item
    in list order is re-raised once every thread has finished.
    """
    items = list(items)
    results = {}
    errors = {}
    if workers <= 1 or len(items) <= 1:
        for item in items:
            results[item] = func(*item)
        return results

    queue = list(reversed(items))
    queue_lock = threading.Lock()

    def worker():
        while True:
            queue_lock.acquire()
            if not queue or errors:
                queue_lock.release()
                return
            item = queue.pop()
            queue_lock.release()
            try:
                result = func(*item)
            except Exception as e:
                log.exception("Work item {} failed".format(item))
                queue_lock.acquire()
                errors[item] = e
                queue_lock.release()
                return
            queue_lock.acquire()
            results[item] = result
            queue_lock.release()

    threads = [threading.Thread(target=worker, name='asymboost-worker-{}'.format(i))
               for i in range(min(int(workers), len(items)))]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    if errors:
        first = min(errors, key=items.index)
        raise errors[first]
    return results


class LoocvResult(object):
    """
    Held-out predictions and scores of one gamma, in canonical row order,
    with their aggregated EvalReport.
    """
    def __init__(self, gamma, rounds, dataset, predictions, scores):
        self.gamma = gamma
        self.rounds = rounds
        self.dataset = dataset
        self.predictions = np.asarray(predictions, dtype=int)
        self.scores = np.asarray(scores, dtype=float)
        self.report = evaluate_predictions(dataset.labels, self.predictions, gamma)

    def __repr__(self):
        return "<LoocvResult gamma={!r} {}>".format(self.gamma, self.report)

    def to_document(self):
        folds = []
        for i in range(self.dataset.n):
            folds.append({
                'row': int(self.dataset.source_order[i]),
                'label': int(self.dataset.labels[i]),
                'prediction': int(self.predictions[i]),
                'score': float(self.scores[i]),
            })
        folds.sort(key=lambda f: f['row'])
        return LoocvReportDocument(gamma=self.gamma, rounds=int(self.rounds), report=self.report.to_dict(),
                                   folds=folds)


def _fold(dataset, config, gamma, index):
    held_out = dataset.features[index:index + 1]
    fold = dataset.without(index)
    classifier, _ = train(fold, WeightInit.for_dataset(fold, gamma), t_max=config.t_max,
                          learner=config.make_learner(), eps_min=config.eps_min)
    return int(classifier.classify_many(held_out)[0]), float(classifier.score_many(held_out)[0])


def loocv(config, dataset):
    """
    Leave-one-out evaluation of `dataset` for every gamma in `config`.

    Each fold trains on the other n - 1 samples with uniform class-conditional
    distributions over the fold's own members and predicts the held-out one.

    Returns a list of LoocvResult in the order of `config.gammas`.
    """
    config.validate()
    if dataset.m < 2 or dataset.n - dataset.m < 2:
        raise DegenerateDatasetError("Leave-one-out needs at least 2 samples per class (m={}, n-m={})".format(
            dataset.m, dataset.n - dataset.m))

    items = [(gi, i) for gi in range(len(config.gammas)) for i in range(dataset.n)]
    log.info("Running {} leave-one-out folds for {} gammas with {} workers".format(
        dataset.n, len(config.gammas), config.workers))

    def work(gi, i):
        return _fold(dataset, config, config.gammas[gi], i)

    outcomes = run_work_items(items, work, config.workers)

    results = []
    for gi, gamma in enumerate(config.gammas):
        predictions = [outcomes[(gi, i)][0] for i in range(dataset.n)]
        scores = [outcomes[(gi, i)][1] for i in range(dataset.n)]
        result = LoocvResult(gamma, config.t_max, dataset, predictions, scores)
        log.info("gamma={!r}: {}".format(gamma, result.report))
        results.append(result)
    return results


class CurveSeries(object):
    """
    Per-round bounds and errors of one gamma.

    `rows` holds one tuple per round with the values of CURVE_COLUMNS.
    Per-class errors are plain rates over each class; `train_err` and
    `test_err` combine them as gamma * FN + (1 - gamma) * FP.
    `classifier` is the strong classifier the rows were computed from, when
    the series came from a training run; it takes no part in equality.
    """
    columns = CURVE_COLUMNS

    def __init__(self, gamma, rows=(), classifier=None):
        self.gamma = gamma
        self.rows = [tuple(r) for r in rows]
        self.classifier = classifier

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        return "<CurveSeries gamma={!r} rounds={}>".format(self.gamma, len(self.rows))

    def __eq__(self, other):
        return isinstance(other, CurveSeries) and self.gamma == other.gamma and self.rows == other.rows

    def __ne__(self, other):
        return not self == other

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def prefix_errors(classifier, dataset, gamma, t=None):
    """
    (err, err_pos, err_neg) of the first `t` rounds of `classifier`.
    """
    c = classifier if t is None else classifier.truncate(t)
    fn, fp, _ = class_rates(dataset, c.classify_many(dataset.features))
    return gamma * fn + (1.0 - gamma) * fp, fn, fp


def curve_run(config, train_set, test_set):
    """
    Train one classifier per gamma on `train_set` and record, for every round
    prefix, the exponential bounds and the training and test errors.

    Returns a list of CurveSeries in the order of `config.gammas`.
    """
    config.validate()
    if train_set.d != test_set.d:
        raise DimensionMismatchError("Training data has {} features but test data has {}".format(
            train_set.d, test_set.d))

    def work(gi):
        gamma = config.gammas[gi]
        classifier, records = train(train_set, config.weight_init(train_set, gamma), t_max=config.t_max,
                                    learner=config.make_learner(), eps_min=config.eps_min)
        train_scores = np.zeros(train_set.n)
        test_scores = np.zeros(test_set.n)
        rows = []
        for rec in records:
            train_scores += rec.alpha * rec.stump.predict_many(train_set.features)
            test_scores += rec.alpha * rec.stump.predict_many(test_set.features)
            tr_fn, tr_fp, _ = class_rates(train_set, np.where(train_scores > 0, 1, -1))
            te_fn, te_fp, _ = class_rates(test_set, np.where(test_scores > 0, 1, -1))
            rows.append((
                rec.round, rec.bound, rec.bound_pos, rec.bound_neg,
                gamma * tr_fn + (1.0 - gamma) * tr_fp, tr_fn, tr_fp,
                gamma * te_fn + (1.0 - gamma) * te_fp, te_fn, te_fp))
        log.info("Curve for gamma={!r}: {} rounds, {}".format(gamma, len(rows), classifier.stop_reason))
        return CurveSeries(gamma, rows, classifier), classifier

    # shared by the worker threads
    train_set.sort_order()
    outcomes = run_work_items([(gi,) for gi in range(len(config.gammas))], work, config.workers)
    return [outcomes[(gi,)][0] for gi in range(len(config.gammas))]


def write_loocv_reports(results, directory):
    """
    Write one `loocv-<gamma>.json` report per result. Returns the paths.
    """
    _ensure_directory(directory)
    paths = []
    for result in results:
        path = os.path.join(directory, 'loocv-{}.json'.format(gamma_label(result.gamma)))
        try:
            result.to_document().save(path)
        except (IOError, OSError) as e:
            raise DataError("Cannot write {}: {}".format(path, e))
        paths.append(path)
    return paths


def write_run_manifest(directory, command, config, started, outputs=(), seed=None):
    """
    Write `manifest.json` describing a command run. This is the only output
    carrying a timestamp and a wall time.
    """
    _ensure_directory(directory)
    manifest = RunManifest(
        command=command,
        config=config,
        library_version=__version__,
        started=time.strftime('%Y-%m-%dT%H:%M:%SZ', time.gmtime(started)),
        wall_time=time.time() - started,
        outputs=[os.path.basename(p) for p in outputs],
        seed=seed)
    path = os.path.join(directory, 'manifest.json')
    try:
        manifest.save(path)
    except (IOError, OSError) as e:
        raise DataError("Cannot write {}: {}".format(path, e))
    return path


def _ensure_directory(directory):
    if not os.path.isdir(directory):
        try:
            os.makedirs(directory)
        except OSError as e:
            raise DataError("Cannot create {}: {}".format(directory, e))
