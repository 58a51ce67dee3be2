import io
import itertools
import logging
import logging.config
import os

import numpy as np
from mock import patch

LOGGER_DEFAULT = {
    'handlers': ['file'],
    'level': 'DEBUG',
    'propagate': False
}

LOG_CONFIG = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {'format': '[%(levelname)s] %(message)s'},
        'testing': {'format': "%(levelname)-7s %(filename)12s:%(lineno)-4s %(funcName)20s -- %(message)s"}
    },
    'handlers': {
        'default': {
            'class': 'logging.StreamHandler',
            'formatter': 'standard'
        },
        'file': {
            'class': 'logging.FileHandler',
            'formatter': 'testing',
            'filename': os.path.join(os.path.dirname(__file__), 'test.log'),
            'delay': True
        }
    },
    'loggers': {
        '':         LOGGER_DEFAULT,
        'api':      LOGGER_DEFAULT,
        'core':     LOGGER_DEFAULT,
        'stump':    LOGGER_DEFAULT,
        'metrics':  LOGGER_DEFAULT,
        'data':     LOGGER_DEFAULT,
        'harness':  LOGGER_DEFAULT,
        'report':   LOGGER_DEFAULT,
        'main':     LOGGER_DEFAULT,
        'command':  LOGGER_DEFAULT,
        'plugin':   LOGGER_DEFAULT,
        'tests':    LOGGER_DEFAULT,
    }
}

logging.config.dictConfig(LOG_CONFIG)

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# reference LOOCV results: dataset, gamma, FN, FP, ClErr, AsErr (percent)
PUBLISHED_ROWS = [
    ('synthetic', 1 / 2., 31.60, 29.20, 30.40, 30.40),
    ('synthetic', 3 / 5., 26.80, 38.00, 32.40, 31.28),
    ('synthetic', 2 / 3., 22.00, 42.00, 32.00, 28.67),
    ('synthetic', 7 / 8., 7.60, 66.40, 37.00, 14.95),
    ('credit', 1 / 2., 28.67, 26.86, 27.40, 27.76),
    ('credit', 3 / 5., 22.67, 37.43, 33.00, 28.57),
    ('credit', 2 / 3., 18.67, 43.43, 36.00, 26.92),
    ('credit', 7 / 8., 6.00, 69.14, 50.20, 13.89),
    ('diabetes', 1 / 2., 32.09, 22.40, 25.78, 27.24),
    ('diabetes', 3 / 5., 22.39, 28.60, 26.43, 24.87),
    ('diabetes', 2 / 3., 19.78, 32.20, 27.86, 23.92),
    ('diabetes', 7 / 8., 10.07, 53.00, 38.02, 15.44),
    ('spam', 1 / 2., 4.84, 6.18, 5.37, 5.51),
    ('spam', 3 / 5., 4.16, 7.06, 5.30, 5.32),
    ('spam', 2 / 3., 3.84, 8.38, 5.63, 5.35),
    ('spam', 7 / 8., 2.33, 11.75, 6.04, 3.51),
]


def random_dataset(rng, n, d, integer=False):
    """
    Random dataset with both classes present. Integer features produce
    plenty of tied values.
    """
    from asymboost.core import Dataset
    m = int(rng.integers(1, n))
    labels = np.array([1] * m + [-1] * (n - m))
    rng.shuffle(labels)
    if integer:
        features = rng.integers(0, 4, size=(n, d)).astype(float)
    else:
        features = rng.normal(size=(n, d))
    return Dataset(features, labels)


def random_weights(rng, n):
    w = rng.random(n) + 0.01
    return w / w.sum()


def brute_force_stump(dataset, weights):
    """
    Lowest weighted error over every candidate stump, evaluated one by one.
    """
    from asymboost.stump import Stump, enumerate_thresholds
    best = None
    for j in range(dataset.d):
        for threshold, polarity in itertools.product(enumerate_thresholds(dataset.features[:, j]), (1, -1)):
            stump = Stump(j, float(threshold), polarity)
            miss = np.array([stump.predict(x) != y for x, y in zip(dataset.features, dataset.labels)])
            eps = float(weights[miss].sum())
            if best is None or eps < best:
                best = eps
    return best


def classic_adaboost(dataset, t_max, eps_min=1e-10):
    """
    Reference AdaBoost run from the uniform distribution 1/n, with no
    class-conditional bookkeeping. Returns [(stump, alpha), ...].
    """
    from asymboost.stump import train_stump
    d = np.full(dataset.n, 1.0 / dataset.n)
    rounds = []
    for _ in range(t_max):
        stump, eps = train_stump(dataset, d)
        e = min(max(eps, eps_min), 1.0 - eps_min)
        alpha = 0.5 * np.log((1.0 - e) / e)
        rounds.append((stump, alpha))
        d = d * np.exp(-alpha * dataset.labels * stump.predict_many(dataset.features))
        d = d / d.sum()
    return rounds


def four_points():
    """
    1D dataset {(+1 at 1), (+1 at 3), (-1 at 2), (-1 at 4)}.
    """
    from asymboost.core import Dataset
    return Dataset([[1.0], [3.0], [2.0], [4.0]], [1, 1, -1, -1], name='four')


def write_file(path, text):
    with open(path, 'w') as f:
        f.write(text)
    return path


def run_main(argv):
    """
    Run the command line entry point in process. Returns (exit code, stdout).
    """
    from asymboost.main import main
    with patch('sys.stdout', new_callable=io.StringIO) as out, patch('sys.stderr', new_callable=io.StringIO):
        code = main(argv)
    return code, out.getvalue()
