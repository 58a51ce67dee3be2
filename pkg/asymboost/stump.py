import logging
from collections import namedtuple

import numpy as np

from .api import DataError, DegenerateDatasetError, DimensionMismatchError, InvalidWeightsError

log = logging.getLogger('stump')

# Relative tolerance (times the total weight) under which two candidate
# stumps are considered to have the same weighted error.
TIE_TOLERANCE = 1e-12


class Stump(namedtuple('Stump', ['feature', 'threshold', 'polarity'])):
    """
    A single-feature threshold rule.

    `predict(x)` is `polarity` if `x[feature] > threshold`, otherwise
    `-polarity`.
    """
    __slots__ = ()

    def predict(self, x):
        return self.polarity if x[self.feature] > self.threshold else -self.polarity

    def predict_many(self, features):
        """
        Predict every row of the (n, d) array `features`.
        """
        column = np.asarray(features)[:, self.feature]
        return np.where(column > self.threshold, self.polarity, -self.polarity)

    def to_dict(self):
        return {'feature': int(self.feature), 'threshold': float(self.threshold), 'polarity': int(self.polarity)}

    @classmethod
    def from_dict(cls, d):
        try:
            stump = cls(int(d['feature']), float(d['threshold']), int(d['polarity']))
        except (KeyError, TypeError, ValueError) as e:
            raise DataError("Invalid stump {}: {}".format(d, e))
        if stump.polarity not in (1, -1) or stump.feature < 0 or not np.isfinite(stump.threshold):
            raise DataError("Invalid stump {}".format(d))
        return stump


def enumerate_thresholds(values):
    """
    Candidate thresholds for a feature column: one below the smallest value,
    then the midpoint between every pair of consecutive distinct values.
    """
    v = np.unique(np.asarray(values, dtype=float))
    if v.size == 0:
        raise DataError("Cannot enumerate thresholds of an empty column")
    return np.concatenate(([v[0] - 1.0], (v[:-1] + v[1:]) / 2.0))


def _sweep(xs, ws, ys):
    """
    Weighted errors of every candidate threshold of one feature, given the
    column sorted ascending with its weights and labels.

    Returns (thresholds, err_plus, err_minus) where `err_plus` is the error of
    polarity +1 (positive above the threshold) and `err_minus` of polarity -1.
    """
    pos_w = np.where(ys > 0, ws, 0.0)
    neg_w = np.where(ys > 0, 0.0, ws)
    cp = np.cumsum(pos_w)
    cn = np.cumsum(neg_w)

    # index of the last element of each run of equal values, except the final run
    ends = np.flatnonzero(xs[1:] != xs[:-1])

    thresholds = np.concatenate(([xs[0] - 1.0], (xs[ends] + xs[ends + 1]) / 2.0))
    pos_le = np.concatenate(([0.0], cp[ends]))
    neg_le = np.concatenate(([0.0], cn[ends]))

    err_plus = pos_le + (cn[-1] - neg_le)
    err_minus = neg_le + (cp[-1] - pos_le)
    return thresholds, err_plus, err_minus


def _check_weights(weights, n):
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise DimensionMismatchError("Expected {} weights, got shape {}".format(n, w.shape))
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise InvalidWeightsError("Weights must be finite and nonnegative")
    if not w.sum() > 0:
        raise InvalidWeightsError("Weights must have positive mass")
    return w


def train_stump(dataset, weights, sort_order=None):
    """
    Find the stump with the lowest weighted error on `dataset`.

    Every feature, every threshold from `enumerate_thresholds` and both
    polarities are searched exactly with a prefix-sum sweep over the feature
    sorted once. Ties are broken by lower feature index, then lower threshold,
    then polarity +1.

    `sort_order` is an optional (d, n) array of per-feature argsorts; by
    default the dataset's cached one is used.

    Returns (stump, eps).
    """
    features = dataset.features
    labels = dataset.labels
    n, d = features.shape
    w = _check_weights(weights, n)

    if sort_order is None:
        sort_order = dataset.sort_order()

    sweeps = []
    discriminating = False
    for j in range(d):
        order = sort_order[j]
        xs = features[order, j]
        if xs[0] != xs[-1]:
            discriminating = True
        sweeps.append(_sweep(xs, w[order], labels[order]))

    if not discriminating:
        raise DegenerateDatasetError("All features are constant; no stump can split the data")

    best = min(min(err_plus.min(), err_minus.min()) for _, err_plus, err_minus in sweeps)
    limit = best + TIE_TOLERANCE * w.sum()

    stump = None
    for j, (thresholds, err_plus, err_minus) in enumerate(sweeps):
        ok_plus = err_plus <= limit
        ok = ok_plus | (err_minus <= limit)
        if ok.any():
            k = int(np.argmax(ok))
            stump = Stump(j, float(thresholds[k]), 1 if ok_plus[k] else -1)
            break

    # recompute directly rather than trust the prefix sums
    eps = float(w[stump.predict_many(features) != labels].sum())
    log.debug("Selected {} with weighted error {!r}".format(stump, eps))
    return stump, eps


class StumpLearner(object):
    """
    Weak learner producing exact weighted decision stumps. This is the
    default learner used by the boosting engine.
    """
    name = 'stump'

    def fit(self, dataset, weights):
        return train_stump(dataset, weights)
