import logging

import numpy as np

from .api import DegenerateDatasetError, DimensionMismatchError
from .core import validate_gamma

log = logging.getLogger('metrics')


def _safe_div(n, d):
    return n / d if d != 0 else 0.0


class EvalReport(object):
    """
    Confusion counts of a classifier on a labelled set, with the false
    negative and false positive rates taken over each class population.

    `as_err` is the asymmetric error gamma * FN + (1 - gamma) * FP.
    """
    def __init__(self, tp, fn, tn, fp, gamma):
        self.counts = (int(tp), int(fn), int(tn), int(fp))
        self.gamma = gamma

    @property
    def tp(self):
        return self.counts[0]

    @property
    def fn(self):
        return self.counts[1]

    @property
    def tn(self):
        return self.counts[2]

    @property
    def fp(self):
        return self.counts[3]

    @property
    def n(self):
        return sum(self.counts)

    @property
    def fn_rate(self):
        return _safe_div(float(self.fn), self.tp + self.fn)

    @property
    def fp_rate(self):
        return _safe_div(float(self.fp), self.tn + self.fp)

    @property
    def cl_err(self):
        return _safe_div(float(self.fn + self.fp), self.n)

    @property
    def as_err(self):
        return asymmetric_error(self.gamma, self.fn_rate, self.fp_rate)

    def __repr__(self):
        return "<EvalReport gamma={!r} FN={:.4f} FP={:.4f} ClErr={:.4f} AsErr={:.4f}>".format(
            self.gamma, self.fn_rate, self.fp_rate, self.cl_err, self.as_err)

    def to_dict(self):
        return {
            'gamma': self.gamma,
            'counts': {'tp': self.tp, 'fn': self.fn, 'tn': self.tn, 'fp': self.fp},
            'fn_rate': self.fn_rate,
            'fp_rate': self.fp_rate,
            'cl_err': self.cl_err,
            'as_err': self.as_err,
        }

    @classmethod
    def from_dict(cls, d):
        c = d['counts']
        return cls(c['tp'], c['fn'], c['tn'], c['fp'], d['gamma'])


def asymmetric_error(gamma, fn_rate, fp_rate):
    return gamma * fn_rate + (1.0 - gamma) * fp_rate


def evaluate_predictions(labels, predictions, gamma):
    """
    Build an EvalReport from true `labels` and `predictions` in {+1, -1}.
    """
    gamma = validate_gamma(gamma)
    labels = np.asarray(labels)
    predictions = np.asarray(predictions)
    if labels.shape != predictions.shape:
        raise DimensionMismatchError("{} labels but {} predictions".format(labels.shape, predictions.shape))
    pos = labels == 1
    if pos.all() or not pos.any():
        raise DegenerateDatasetError("Both classes are needed to compute FN and FP rates")
    tp = int(np.count_nonzero(pos & (predictions == 1)))
    fn = int(np.count_nonzero(pos & (predictions != 1)))
    tn = int(np.count_nonzero(~pos & (predictions != 1)))
    fp = int(np.count_nonzero(~pos & (predictions == 1)))
    return EvalReport(tp, fn, tn, fp, gamma)


def evaluate(classifier, dataset, gamma):
    """
    Evaluate `classifier` on every sample of `dataset`.
    """
    return evaluate_predictions(dataset.labels, classifier.classify_many(dataset.features), gamma)


def per_class_training_error(classifier, dataset, init):
    """
    Training error weighted by the initial class-conditional distributions.

    Returns (e_pos, e_neg, e_weighted) with
    e_weighted = gamma * e_pos + (1 - gamma) * e_neg.
    """
    init.check_dataset(dataset)
    return weighted_errors(dataset, classifier.classify_many(dataset.features), init)


def weighted_errors(dataset, predictions, init):
    m = dataset.m
    miss = np.asarray(predictions) != dataset.labels
    e_pos = float(init.d1_pos[miss[:m]].sum())
    e_neg = float(init.d1_neg[miss[m:]].sum())
    return e_pos, e_neg, init.gamma * e_pos + (1.0 - init.gamma) * e_neg


def class_rates(dataset, predictions):
    """
    Plain (FN rate, FP rate, error rate) of `predictions` on `dataset`.
    """
    m = dataset.m
    miss = np.asarray(predictions) != dataset.labels
    return (float(np.count_nonzero(miss[:m])) / m,
            float(np.count_nonzero(miss[m:])) / (dataset.n - m),
            float(np.count_nonzero(miss)) / dataset.n)


def format_percent(value):
    """
    Two-decimal percentage as printed in summary tables.
    """
    return "{:.2f}%".format(100.0 * value)
