"""
Generalised discrete AdaBoost with an asymmetric initial weight distribution.

The global distribution D_t is tracked together with its class-conditional
parts D_t+ and D_t- and the cumulative normaliser products P_t+, P_t- and P_t,
so that every round can report the class-level decomposition of the error
bound and check its own algebra.
"""
import logging
from collections import namedtuple

import numpy as np

from .api import *
from .stump import Stump, StumpLearner

log = logging.getLogger('core')

# alpha is computed from the weighted error clamped into [EPS_MIN, 1 - EPS_MIN]
EPS_MIN = 1e-10

# tolerances for pure arithmetic, accumulated per-round products and the
# identity report respectively
WEIGHT_TOLERANCE = 1e-12
STATE_TOLERANCE = 1e-10
IDENTITY_TOLERANCE = 1e-9

RESIDUAL_NAMES = (
    'weight_mass',
    'bound_product',
    'bound_correlation',
    'eps_reconstruction',
    'alpha_decomposition',
)


LabeledSample = namedtuple('LabeledSample', ['features', 'label'])


def validate_gamma(gamma):
    """
    Return `gamma` as a float, raising InvalidGammaError unless 0 < gamma < 1.
    """
    try:
        g = float(gamma)
    except (TypeError, ValueError):
        raise InvalidGammaError("gamma must be a number, got {!r}".format(gamma))
    if not (0.0 < g < 1.0):
        raise InvalidGammaError("gamma must lie strictly inside (0, 1), got {!r}".format(gamma))
    return g


class Dataset(object):
    """
    A set of feature vectors with labels in {+1, -1}.

    Rows are canonicalised at construction so that the `m` positives come
    first, keeping their relative order, followed by the negatives.
    `source_order[i]` is the source row index of canonical row `i`.
    """
    def __init__(self, features, labels, source_order=None, name=None):
        x = np.array(features, dtype=float)
        y = np.asarray(labels)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.shape[0]:
            raise DimensionMismatchError("Features of shape {} do not match {} labels".format(x.shape, y.shape))
        if x.shape[1] == 0:
            raise DimensionMismatchError("Samples need at least one feature")
        if not np.all(np.isfinite(x)):
            raise DataError("Features must be finite")
        if not np.all((y == 1) | (y == -1)):
            raise DataError("Labels must be +1 or -1")
        y = y.astype(int)

        if source_order is None:
            source_order = np.arange(len(y))
        source_order = np.asarray(source_order, dtype=int)
        if source_order.shape != y.shape:
            raise DimensionMismatchError("source_order must have one entry per sample")

        order = np.argsort(-y, kind='mergesort')
        self.features = x[order]
        self.labels = y[order]
        self.source_order = source_order[order]
        for a in (self.features, self.labels, self.source_order):
            a.flags.writeable = False

        self.n = len(y)
        self.m = int(np.count_nonzero(y == 1))
        self.d = x.shape[1]
        self.name = name
        self._sort_order = None

        if self.m == 0 or self.m == self.n:
            raise DegenerateDatasetError("Both classes must be present (m={}, n={})".format(self.m, self.n))

    @classmethod
    def from_samples(cls, samples, name=None):
        samples = list(samples)
        if not samples:
            raise DegenerateDatasetError("Dataset has no samples")
        dims = set(len(s.features) for s in samples)
        if len(dims) != 1:
            raise DimensionMismatchError("Samples have differing dimensions: {}".format(sorted(dims)))
        return cls([s.features for s in samples], [s.label for s in samples], name=name)

    def __len__(self):
        return self.n

    def __repr__(self):
        return "<Dataset {}: m={} n={} d={}>".format(self.name or '', self.m, self.n, self.d)

    def subset(self, indices):
        """
        Return a new dataset of the given canonical rows, keeping their source
        row indices.
        """
        indices = np.asarray(indices, dtype=int)
        return Dataset(self.features[indices], self.labels[indices], self.source_order[indices], name=self.name)

    def without(self, index):
        """
        Return the dataset with canonical row `index` left out.
        """
        keep = np.ones(self.n, dtype=bool)
        keep[index] = False
        return self.subset(np.flatnonzero(keep))

    def restore_order(self, values):
        """
        Reorder per-row `values` from canonical order back to source order.
        Only valid when the dataset covers source rows 0..n-1.
        """
        values = np.asarray(values)
        out = np.empty_like(values)
        out[self.source_order] = values
        return out

    def sort_order(self):
        """
        Per-feature stable argsort of the feature matrix, shape (d, n). Built
        once and reused by every stump search on this dataset.
        """
        if self._sort_order is None:
            order = np.argsort(self.features, axis=0, kind='mergesort').T.copy()
            order.flags.writeable = False
            self._sort_order = order
        return self._sort_order


class WeightInit(object):
    """
    Decomposed initial distribution: the asymmetry `gamma` (total mass on the
    positives) and the class-conditional distributions `d1_pos` and `d1_neg`,
    each summing to one.
    """
    def __init__(self, gamma, d1_pos, d1_neg):
        self.gamma = validate_gamma(gamma)
        self.d1_pos = self._check(d1_pos, 'positive')
        self.d1_neg = self._check(d1_neg, 'negative')

    @staticmethod
    def _check(d, name):
        d = np.array(d, dtype=float)
        if d.ndim != 1 or d.size == 0:
            raise InvalidWeightsError("The {} class distribution must be a nonempty vector".format(name))
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise InvalidWeightsError("The {} class distribution must be finite and nonnegative".format(name))
        if abs(d.sum() - 1.0) > WEIGHT_TOLERANCE:
            raise InvalidWeightsError("The {} class distribution sums to {!r}, not 1".format(name, d.sum()))
        d.flags.writeable = False
        return d

    @classmethod
    def uniform(cls, gamma, m, n_neg):
        """
        Uniform class-conditional distributions over `m` positives and `n_neg`
        negatives.
        """
        if m < 1 or n_neg < 1:
            raise DegenerateDatasetError("Both classes must be present (m={}, n-m={})".format(m, n_neg))
        return cls(gamma, np.full(m, 1.0 / m), np.full(n_neg, 1.0 / n_neg))

    @classmethod
    def for_dataset(cls, dataset, gamma):
        return cls.uniform(gamma, dataset.m, dataset.n - dataset.m)

    @property
    def m(self):
        return len(self.d1_pos)

    @property
    def n(self):
        return len(self.d1_pos) + len(self.d1_neg)

    def check_dataset(self, dataset):
        if dataset.m != self.m or dataset.n != self.n:
            raise DimensionMismatchError("Weight init for m={}, n={} does not match dataset with m={}, n={}".format(
                self.m, self.n, dataset.m, dataset.n))

    @property
    def is_classic(self):
        """
        True when the global initial distribution is uniform over all n
        samples, i.e. both class distributions are uniform and gamma = m/n.
        """
        return bool(self.gamma == self.m / float(self.n) and
                np.all(self.d1_pos == self.d1_pos[0]) and np.all(self.d1_neg == self.d1_neg[0]))

    def global_distribution(self):
        # gamma * (1/m) and 1/n can differ in the last bit
        if self.is_classic:
            return np.full(self.n, 1.0 / self.n)
        return np.concatenate((self.gamma * self.d1_pos, (1.0 - self.gamma) * self.d1_neg))


class BoostState(object):
    """
    Weights at the start of round `round`: the global distribution `d_t`,
    the class-conditional `d_pos` and `d_neg`, and the normaliser products
    `p_pos`, `p_neg` and `p_global` of the previous rounds.
    """
    def __init__(self, gamma, d_t, d_pos, d_neg, p_pos=1.0, p_neg=1.0, p_global=1.0, round=1):
        self.gamma = gamma
        self.d_t = d_t
        self.d_pos = d_pos
        self.d_neg = d_neg
        self.p_pos = p_pos
        self.p_neg = p_neg
        self.p_global = p_global
        self.round = round

    @property
    def m(self):
        return len(self.d_pos)

    def residual(self):
        """
        Largest violation of the normalisation constraints and of the
        weight-state identities linking the global and class-conditional
        distributions.
        """
        g = self.gamma
        m = self.m
        return max(
            abs(self.d_t.sum() - 1.0),
            abs(self.d_pos.sum() - 1.0),
            abs(self.d_neg.sum() - 1.0),
            abs(g * self.p_pos + (1.0 - g) * self.p_neg - self.p_global),
            np.max(np.abs(g * self.p_pos * self.d_pos - self.p_global * self.d_t[:m])),
            np.max(np.abs((1.0 - g) * self.p_neg * self.d_neg - self.p_global * self.d_t[m:])),
        )


class RoundRecord(namedtuple('RoundRecord', [
        'round', 'stump', 'alpha', 'eps', 'eps_pos', 'eps_neg', 'eps_reconstructed',
        'alpha_decomposed', 'eps_clamped', 'r', 'z', 'z_pos', 'z_neg',
        'p_pos_before', 'p_neg_before', 'p_pos_after', 'p_neg_after', 'p_global_after',
        'effective_gamma', 'gamma', 'bound', 'bound_pos', 'bound_neg'])):
    """
    Diagnostics of one boosting round.

    `bound` is the exponential bound after this round, split into the
    class-conditional partial bounds `bound_pos` and `bound_neg`.
    `effective_gamma` is the share of the class-level coefficients taken by
    the positives when this round's stump was selected. `eps_clamped` is set
    when alpha was computed from a clamped error.
    """
    __slots__ = ()

    def to_dict(self):
        d = self._asdict()
        d['stump'] = self.stump.to_dict()
        d['eps_clamped'] = bool(self.eps_clamped)
        return d


class StrongClassifier(object):
    """
    Sign of the alpha-weighted vote of the selected stumps. A score of exactly
    zero is classified as negative.
    """
    def __init__(self, rounds=(), gamma_used=None, stop_reason=None, dimension=None):
        self.rounds = tuple((float(alpha), stump) for alpha, stump in rounds)
        self.gamma_used = gamma_used
        self.stop_reason = stop_reason
        self.dimension = dimension

    def __len__(self):
        return len(self.rounds)

    def __repr__(self):
        return "<StrongClassifier rounds={} gamma={}>".format(len(self.rounds), self.gamma_used)

    def _check(self, width):
        if self.dimension is not None and width != self.dimension:
            raise DimensionMismatchError("Expected {} features, got {}".format(self.dimension, width))
        for _, stump in self.rounds:
            if stump.feature >= width:
                raise DimensionMismatchError("Stump uses feature {} but only {} are given".format(stump.feature, width))

    def score(self, x):
        x = np.asarray(x, dtype=float).ravel()
        self._check(len(x))
        return sum(alpha * stump.predict(x) for alpha, stump in self.rounds)

    def classify(self, x):
        return 1 if self.score(x) > 0 else -1

    def score_many(self, features):
        features = np.asarray(features, dtype=float)
        if features.ndim == 1:
            features = features.reshape(-1, 1)
        self._check(features.shape[1])
        scores = np.zeros(features.shape[0])
        for alpha, stump in self.rounds:
            scores += alpha * stump.predict_many(features)
        return scores

    def classify_many(self, features):
        return np.where(self.score_many(features) > 0, 1, -1)

    def truncate(self, t):
        """
        The classifier made of the first `t` rounds.
        """
        return StrongClassifier(self.rounds[:t], self.gamma_used, dimension=self.dimension)

    def to_document(self):
        return ClassifierDocument(
            gamma=self.gamma_used,
            rounds=[dict(alpha=alpha, **stump.to_dict()) for alpha, stump in self.rounds],
            dimension=self.dimension,
            stop_reason=self.stop_reason)

    @classmethod
    def from_document(cls, doc):
        doc.validate()
        rounds = []
        for r in doc.rounds:
            try:
                alpha = float(r['alpha'])
            except (KeyError, TypeError, ValueError):
                raise InvalidDocumentError("Round without a valid alpha: {}".format(r))
            rounds.append((alpha, Stump.from_dict(r)))
        dimension = doc.dimension
        if dimension is not None:
            if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 1:
                raise InvalidDocumentError("Invalid dimension: {!r}".format(dimension))
        return cls(rounds, gamma_used=doc.gamma, stop_reason=doc.stop_reason, dimension=dimension)

    def save(self, path):
        return self.to_document().save(path)

    @classmethod
    def load(cls, path):
        return cls.from_document(ClassifierDocument.load(path))


def score(classifier, x):
    return classifier.score(x)


def classify(classifier, x):
    return classifier.classify(x)


def init_weights(dataset, init):
    """
    Build the round-1 state from a decomposed initial distribution.
    """
    init.check_dataset(dataset)
    return BoostState(
        init.gamma,
        d_t=init.global_distribution(),
        d_pos=init.d1_pos.copy(),
        d_neg=init.d1_neg.copy())


def decompose_weights(d1, m):
    """
    Split a global initial distribution whose first `m` entries are the
    positives into (gamma, D_1+, D_1-).
    """
    d1 = np.asarray(d1, dtype=float)
    if d1.ndim != 1 or not (1 <= m <= len(d1) - 1):
        raise DimensionMismatchError("Need 1 <= m <= n-1, got m={} for {} weights".format(m, d1.size))
    if not np.all(np.isfinite(d1)) or np.any(d1 <= 0):
        raise InvalidWeightsError("Initial weights must be finite and positive")
    if abs(d1.sum() - 1.0) > WEIGHT_TOLERANCE:
        raise InvalidWeightsError("Initial weights sum to {!r}, not 1".format(d1.sum()))
    gamma = d1[:m].sum()
    if not (0.0 < gamma < 1.0):
        raise InvalidGammaError("A class has no mass (gamma={!r})".format(gamma))
    return WeightInit(gamma, d1[:m] / gamma, d1[m:] / (1.0 - gamma))


def compute_alpha(eps, eps_min=EPS_MIN):
    """
    alpha = 1/2 ln((1 - eps) / eps), with eps clamped into
    [eps_min, 1 - eps_min].
    """
    eps = float(eps)
    if not (-WEIGHT_TOLERANCE <= eps <= 1.0 + WEIGHT_TOLERANCE):
        raise InvalidWeightsError("Weighted error {!r} is outside [0, 1]".format(eps))
    eps = min(max(eps, eps_min), 1.0 - eps_min)
    return 0.5 * np.log((1.0 - eps) / eps)


def effective_gamma(gamma, p_pos, p_neg, fallback=None):
    """
    Share of the positives in the class-level coefficients
    gamma * P+ and (1 - gamma) * P-.

    When both products have underflowed, `fallback` (the positive mass of the
    current global distribution, which equals the same quantity) is returned.
    """
    a_pos = gamma * p_pos
    a_neg = (1.0 - gamma) * p_neg
    total = a_pos + a_neg
    if total > 0 and np.isfinite(total):
        return a_pos / total
    return fallback


def decomposed_alpha(coefficient, eps_pos, eps_neg, eps_min=EPS_MIN):
    """
    alpha written in terms of the class-conditional errors, weighted by the
    positive class coefficient `coefficient` (see `effective_gamma`).
    """
    wrong = coefficient * eps_pos + (1.0 - coefficient) * eps_neg
    right = coefficient * (1.0 - eps_pos) + (1.0 - coefficient) * (1.0 - eps_neg)
    total = wrong + right
    if wrong < eps_min * total:
        wrong = eps_min * total
        right = total - wrong
    elif right < eps_min * total:
        right = eps_min * total
        wrong = total - right
    return 0.5 * np.log(right / wrong)


def compute_r(dataset, d_t, stump):
    """
    Weighted correlation between the labels and the stump's predictions.
    """
    return float(np.dot(d_t, dataset.labels * stump.predict_many(dataset.features)))


def update_weights(state, alpha, stump, dataset):
    """
    Reweight every sample by exp(-alpha * y * h(x)) and renormalise the global
    and both class-conditional distributions, each by its own normaliser.

    Returns (new_state, z, z_pos, z_neg).
    """
    m = state.m
    margins = dataset.labels * stump.predict_many(dataset.features)
    factors = np.exp(-alpha * margins)

    w = state.d_t * factors
    w_pos = state.d_pos * factors[:m]
    w_neg = state.d_neg * factors[m:]
    z, z_pos, z_neg = w.sum(), w_pos.sum(), w_neg.sum()

    for name, value in (('z', z), ('z_pos', z_pos), ('z_neg', z_neg)):
        if not (np.isfinite(value) and value > 0):
            raise NumericalError("Normaliser {} is {!r} at round {}".format(name, value, state.round))

    new_state = BoostState(
        state.gamma,
        d_t=w / z,
        d_pos=w_pos / z_pos,
        d_neg=w_neg / z_neg,
        p_pos=state.p_pos * z_pos,
        p_neg=state.p_neg * z_neg,
        p_global=state.p_global * z,
        round=state.round + 1)
    return new_state, float(z), float(z_pos), float(z_neg)


def boost_round(state, dataset, learner, eps_min=EPS_MIN):
    """
    Run one round: select the weak classifier with the lowest weighted error,
    compute its vote and reweight.

    Returns (new_state, record).
    """
    m = state.m
    gamma = state.gamma
    stump, eps = learner.fit(dataset, state.d_t)

    miss = stump.predict_many(dataset.features) != dataset.labels
    eps_pos = float(state.d_pos[miss[:m]].sum())
    eps_neg = float(state.d_neg[miss[m:]].sum())

    coefficient = effective_gamma(gamma, state.p_pos, state.p_neg, fallback=float(state.d_t[:m].sum()))
    eps_reconstructed = coefficient * eps_pos + (1.0 - coefficient) * eps_neg

    alpha = float(compute_alpha(eps, eps_min))
    alpha_decomposed = float(decomposed_alpha(coefficient, eps_pos, eps_neg, eps_min))
    clamped = not (eps_min <= eps <= 1.0 - eps_min)
    r = compute_r(dataset, state.d_t, stump)

    new_state, z, z_pos, z_neg = update_weights(state, alpha, stump, dataset)

    record = RoundRecord(
        round=state.round,
        stump=stump,
        alpha=alpha,
        eps=eps,
        eps_pos=eps_pos,
        eps_neg=eps_neg,
        eps_reconstructed=float(eps_reconstructed),
        alpha_decomposed=alpha_decomposed,
        eps_clamped=clamped,
        r=r,
        z=z,
        z_pos=z_pos,
        z_neg=z_neg,
        p_pos_before=state.p_pos,
        p_neg_before=state.p_neg,
        p_pos_after=new_state.p_pos,
        p_neg_after=new_state.p_neg,
        p_global_after=new_state.p_global,
        effective_gamma=float(coefficient),
        gamma=gamma,
        bound=gamma * new_state.p_pos + (1.0 - gamma) * new_state.p_neg,
        bound_pos=new_state.p_pos,
        bound_neg=new_state.p_neg)

    residual = new_state.residual()
    if residual > STATE_TOLERANCE:
        log.warning("Weight-state identities off by {!r} after round {}".format(residual, state.round))

    log.debug("Round {}: {} eps={!r} alpha={!r} bound={!r}".format(state.round, stump, eps, alpha, record.bound))
    return new_state, record


class StopPolicy(object):
    """
    Decides after each round whether training should stop early.

    `should_stop` returns a reason string to stop, or None to continue.
    """
    name = 'rounds'

    def should_stop(self, record, train_error):
        return None

    def describe(self):
        return self.name


class FixedRounds(StopPolicy):
    """
    Never stops early; training runs for `t_max` rounds.
    """
    pass


class TrainingErrorTarget(StopPolicy):
    """
    Stops once the training error weighted by the initial distribution is at
    or below `target`.
    """
    name = 'train_error'

    def __init__(self, target):
        self.target = float(target)

    def should_stop(self, record, train_error):
        if train_error <= self.target:
            return "training error {!r} reached target {!r}".format(train_error, self.target)

    def describe(self):
        return "train_error<={!r}".format(self.target)


class BoundTarget(StopPolicy):
    """
    Stops once the exponential bound is at or below `target`.
    """
    name = 'bound'

    def __init__(self, target):
        self.target = float(target)

    def should_stop(self, record, train_error):
        if record.bound <= self.target:
            return "bound {!r} reached target {!r}".format(record.bound, self.target)

    def describe(self):
        return "bound<={!r}".format(self.target)


class AnyOf(StopPolicy):
    """
    Stops as soon as any of `policies` does.
    """
    name = 'any'

    def __init__(self, policies):
        self.policies = list(policies)

    def should_stop(self, record, train_error):
        for p in self.policies:
            reason = p.should_stop(record, train_error)
            if reason:
                return reason

    def describe(self):
        return ','.join(p.describe() for p in self.policies) or 'rounds'


def train(dataset, init, t_max=100, stop=None, learner=None, eps_min=EPS_MIN):
    """
    Train a strong classifier for at most `t_max` rounds.

    `init` is a WeightInit matching the dataset, `stop` an optional
    StopPolicy and `learner` any object with a `fit(dataset, weights)` method
    returning (stump, eps); by default a StumpLearner.

    Returns (classifier, records).
    """
    if int(t_max) < 1:
        raise UsageError("t_max must be at least 1, got {}".format(t_max))
    init.check_dataset(dataset)
    learner = learner or StumpLearner()
    stop = stop or FixedRounds()

    state = init_weights(dataset, init)
    d1 = state.d_t
    scores = np.zeros(dataset.n)
    records = []
    stop_reason = 'completed {} rounds'.format(t_max)

    log.info("Training {} for up to {} rounds with gamma={!r}".format(dataset, t_max, init.gamma))
    for _ in range(int(t_max)):
        state, record = boost_round(state, dataset, learner, eps_min)
        records.append(record)

        scores += record.alpha * record.stump.predict_many(dataset.features)
        predictions = np.where(scores > 0, 1, -1)
        train_error = float(d1[predictions != dataset.labels].sum())

        reason = stop.should_stop(record, train_error)
        if reason:
            stop_reason = reason
            log.info("Stopping after round {}: {}".format(record.round, reason))
            break

    classifier = StrongClassifier(
        [(r.alpha, r.stump) for r in records],
        gamma_used=init.gamma,
        stop_reason=stop_reason,
        dimension=dataset.d)
    return classifier, records


class ResidualReport(object):
    """
    Maximum residual of each identity over a training run.
    """
    def __init__(self, residuals, tolerance=IDENTITY_TOLERANCE, rounds=0, clamped_rounds=0):
        self.residuals = residuals
        self.tolerance = tolerance
        self.rounds = rounds
        self.clamped_rounds = clamped_rounds

    def __repr__(self):
        return "<ResidualReport ok={} {}>".format(self.ok, self.residuals)

    def failures(self):
        return [name for name in RESIDUAL_NAMES if not self.residuals[name] <= self.tolerance]

    @property
    def ok(self):
        return not self.failures()

    def to_document(self):
        return ResidualReportDocument(
            residuals={k: float(v) for k, v in self.residuals.items()},
            tolerance=self.tolerance,
            ok=self.ok,
            rounds=self.rounds,
            clamped_rounds=self.clamped_rounds)


def verify_identities(records, init=None, tolerance=IDENTITY_TOLERANCE, eps_min=EPS_MIN):
    """
    Recompute the identities of a run from its records and report the largest
    residual of each:

    `weight_mass`: gamma P+ + (1 - gamma) P- against the tracked P
    `bound_product`: the bound against the product of the normalisers
    `bound_correlation`: the bound against the product of sqrt(1 - r^2)
    `eps_reconstruction`: the error rebuilt from the class-conditional errors
    `alpha_decomposition`: alpha rebuilt from the class-conditional errors

    On rounds whose error was clamped sqrt(1 - r^2) is not the normaliser, so
    the closed form (1 - eps) e^-alpha + eps e^alpha is used instead.
    """
    residuals = dict((name, 0.0) for name in RESIDUAL_NAMES)
    prod_z = 1.0
    prod_r = 1.0
    clamped = 0

    for rec in records:
        gamma = init.gamma if init is not None else rec.gamma

        residuals['weight_mass'] = max(residuals['weight_mass'], abs(
            gamma * rec.p_pos_after + (1.0 - gamma) * rec.p_neg_after - rec.p_global_after))

        prod_z *= rec.z
        residuals['bound_product'] = max(residuals['bound_product'], abs(rec.bound - prod_z))

        if rec.eps_clamped:
            clamped += 1
            prod_r *= (1.0 - rec.eps) * np.exp(-rec.alpha) + rec.eps * np.exp(rec.alpha)
        else:
            prod_r *= np.sqrt(max(0.0, 1.0 - rec.r ** 2))
        residuals['bound_correlation'] = max(residuals['bound_correlation'], abs(rec.bound - prod_r))

        coefficient = effective_gamma(gamma, rec.p_pos_before, rec.p_neg_before, fallback=rec.effective_gamma)
        eps = coefficient * rec.eps_pos + (1.0 - coefficient) * rec.eps_neg
        residuals['eps_reconstruction'] = max(residuals['eps_reconstruction'], abs(eps - rec.eps))

        alpha = decomposed_alpha(coefficient, rec.eps_pos, rec.eps_neg, eps_min)
        residuals['alpha_decomposition'] = max(residuals['alpha_decomposition'], abs(alpha - rec.alpha))

    report = ResidualReport(residuals, tolerance, rounds=len(records), clamped_rounds=clamped)
    if not report.ok:
        log.warning("Identity check failed for {}".format(report.failures()))
    return report
