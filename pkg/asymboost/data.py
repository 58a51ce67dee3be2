"""
Synthetic cloud datasets and CSV ingestion.

Clouds place the positives uniformly in a disc and the negatives uniformly in
a surrounding annulus. Random numbers come from numpy's PCG64 bit generator,
whose stream is fixed for a given seed, and only uniform doubles are drawn so
the geometry does not depend on numpy's distribution algorithms.
"""
import csv
import hashlib
import io
import logging
import os

import numpy as np
import pandas as pd
import requests

from .api import *
from .core import Dataset

log = logging.getLogger('data')
logging.getLogger('requests').setLevel(logging.WARNING)

GENERATOR = 'numpy.random.PCG64'


class CloudSpec(object):
    """
    Geometry of a synthetic cloud.

    Positives fill a disc of radius `inner_radius`, negatives an annulus from
    `inner_radius + gap` to `outer_radius`. A nonzero `overlap_fraction`
    pushes each class across the gap into the other's band: the positives
    reach out by that fraction of the full radial span and the negatives reach
    in by that fraction of their inner edge.
    """
    _fields = ['n_pos', 'n_neg', 'inner_radius', 'outer_radius', 'gap', 'overlap_fraction', 'seed']

    def __init__(self, n_pos=250, n_neg=250, inner_radius=1.0, outer_radius=2.0, gap=0.5,
                 overlap_fraction=0.0, seed=0):
        self.n_pos = n_pos
        self.n_neg = n_neg
        self.inner_radius = inner_radius
        self.outer_radius = outer_radius
        self.gap = gap
        self.overlap_fraction = overlap_fraction
        self.seed = seed

    @classmethod
    def separable(cls, **kwargs):
        return cls(**kwargs)

    @classmethod
    def overlapping(cls, **kwargs):
        """
        Overlapping preset. With these radii both classes have the same
        density inside the shared band, so a symmetric classifier has no
        preferred boundary there.
        """
        params = dict(inner_radius=1.0, outer_radius=1.3, gap=0.0, overlap_fraction=0.3)
        params.update(kwargs)
        return cls(**params)

    PRESETS = {'separable': 'separable', 'overlapping': 'overlapping'}

    @classmethod
    def preset(cls, name, **kwargs):
        if name not in cls.PRESETS:
            raise UsageError("Unknown cloud preset '{}', expected one of {}".format(name, sorted(cls.PRESETS)))
        return getattr(cls, cls.PRESETS[name])(**kwargs)

    def to_dict(self):
        return dict((f, getattr(self, f)) for f in self._fields)

    @classmethod
    def from_dict(cls, d):
        return cls(**dict((f, d[f]) for f in cls._fields if f in d))

    def validate(self):
        for name in ('n_pos', 'n_neg'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise UsageError("{} must be a positive integer, got {!r}".format(name, value))
        if not (self.inner_radius > 0 and self.outer_radius > 0):
            raise UsageError("Radii must be positive")
        if not self.gap >= 0:
            raise UsageError("gap must be nonnegative, got {!r}".format(self.gap))
        if not self.outer_radius > self.inner_radius + self.gap:
            raise UsageError("outer_radius {!r} must exceed inner_radius + gap = {!r}".format(
                self.outer_radius, self.inner_radius + self.gap))
        if not (0.0 <= self.overlap_fraction < 1.0):
            raise UsageError("overlap_fraction must lie in [0, 1), got {!r}".format(self.overlap_fraction))
        if int(self.seed) != self.seed or not (0 <= self.seed < 2 ** 64):
            raise UsageError("seed must be an integer in [0, 2^64), got {!r}".format(self.seed))

    @property
    def positive_radius(self):
        return self.inner_radius + self.overlap_fraction * (self.outer_radius - self.inner_radius)

    @property
    def negative_min_radius(self):
        edge = self.inner_radius + self.gap
        return edge - self.overlap_fraction * edge

    @property
    def separable_by_construction(self):
        return self.positive_radius < self.negative_min_radius


def _polar(radius, angle):
    return np.column_stack((radius * np.cos(angle), radius * np.sin(angle)))


def gen_cloud(spec):
    """
    Generate the cloud described by `spec`. The result is positives first and
    identical for identical specs.
    """
    spec.validate()
    rng = np.random.Generator(np.random.PCG64(int(spec.seed)))
    n_pos, n_neg = int(spec.n_pos), int(spec.n_neg)

    u = rng.random(n_pos)
    v = rng.random(n_pos)
    pos = _polar(spec.positive_radius * np.sqrt(u), 2.0 * np.pi * v)

    a = spec.negative_min_radius
    b = float(spec.outer_radius)
    u = rng.random(n_neg)
    v = rng.random(n_neg)
    neg = _polar(np.sqrt(a * a + u * (b * b - a * a)), 2.0 * np.pi * v)

    labels = np.concatenate((np.ones(n_pos, dtype=int), -np.ones(n_neg, dtype=int)))
    dataset = Dataset(np.vstack((pos, neg)), labels, name='cloud-{}'.format(spec.seed))
    log.debug("Generated {} from {}".format(dataset, spec.to_dict()))
    return dataset


def circle_separable(dataset):
    """
    True if some circle centred on the origin separates the classes, i.e.
    every positive is strictly closer to the origin than every negative.
    """
    radii = np.sqrt((dataset.features ** 2).sum(axis=1))
    return bool(radii[:dataset.m].max() < radii[dataset.m:].min())


class CsvSchema(object):
    """
    How to read a labelled CSV file.

    `label_column` is a column name or a 0-based index. Rows whose label
    equals `positive_label` become positives; the rest become negatives,
    unless `negative_label` is given, in which case any other value is an
    error. `feature_columns` is a list of names or indices; None means every
    other column, dropping columns with no numeric cell at all.
    """
    _fields = ['label_column', 'positive_label', 'negative_label', 'delimiter', 'has_header', 'feature_columns']

    def __init__(self, label_column=-1, positive_label='1', negative_label=None, delimiter=',',
                 has_header=True, feature_columns=None):
        self.label_column = label_column
        self.positive_label = positive_label
        self.negative_label = negative_label
        self.delimiter = delimiter
        self.has_header = has_header
        self.feature_columns = feature_columns

    def to_dict(self):
        return dict((f, getattr(self, f)) for f in self._fields)

    @classmethod
    def from_dict(cls, d):
        return cls(**dict((f, d[f]) for f in cls._fields if f in d))

    def resolve_column(self, columns, key):
        """
        Map a column name or index to a position in `columns`.
        """
        columns = list(columns)
        if isinstance(key, str) and key in columns:
            return columns.index(key)
        try:
            index = int(key)
        except (TypeError, ValueError):
            raise DatasetFormatError("Column '{}' not found in {}".format(key, columns))
        if not -len(columns) <= index < len(columns):
            raise DatasetFormatError("Column index {} out of range for {} columns".format(index, len(columns)))
        return index % len(columns)


def _is_number(cell):
    try:
        return np.isfinite(float(cell))
    except (TypeError, ValueError):
        return False


def load_csv(path, schema=None):
    """
    Read a labelled dataset from a CSV file.

    Rows with a missing or non-numeric feature, or an unmapped label, are
    rejected with a DatasetFormatError naming the source line.
    """
    schema = schema or CsvSchema()
    try:
        frame = pd.read_csv(path, sep=schema.delimiter, header=0 if schema.has_header else None,
                            dtype=str, keep_default_na=False, skip_blank_lines=False, encoding='utf-8')
    except pd.errors.EmptyDataError:
        raise DatasetFormatError("{} is empty".format(path))
    except UnicodeDecodeError as e:
        raise DatasetFormatError("{} is not valid UTF-8: {}".format(path, e))
    except (pd.errors.ParserError, ValueError) as e:
        raise DatasetFormatError("{}: {}".format(path, e))
    except (IOError, OSError) as e:
        raise DataError("Cannot read {}: {}".format(path, e))

    columns = list(frame.columns)
    label_index = schema.resolve_column(columns, schema.label_column)
    if schema.feature_columns is None:
        feature_index = [i for i in range(len(columns)) if i != label_index]
        numeric = [i for i in feature_index if any(_is_number(c) for c in frame.iloc[:, i])]
        dropped = [columns[i] for i in feature_index if i not in numeric]
        if dropped:
            log.info("Dropping non-numeric columns {}".format(dropped))
        feature_index = numeric
    else:
        feature_index = [schema.resolve_column(columns, c) for c in schema.feature_columns]
    if not feature_index:
        raise DatasetFormatError("{} has no feature columns".format(path))

    first_line = 2 if schema.has_header else 1
    positive = str(schema.positive_label)
    negative = None if schema.negative_label is None else str(schema.negative_label)

    features = []
    labels = []
    for i, row in enumerate(frame.itertuples(index=False, name=None)):
        line = first_line + i
        cells = ['' if c is None or (isinstance(c, float) and np.isnan(c)) else str(c).strip() for c in row]
        if not any(cells):
            continue
        label = cells[label_index]
        if label == positive:
            labels.append(1)
        elif negative is None or label == negative:
            labels.append(-1)
        else:
            raise DatasetFormatError("unmapped label value '{}'".format(label), line)
        values = []
        for j in feature_index:
            cell = cells[j]
            if cell == '':
                raise DatasetFormatError("missing value in column '{}'".format(columns[j]), line)
            if not _is_number(cell):
                raise DatasetFormatError("non-numeric value '{}' in column '{}'".format(cell, columns[j]), line)
            values.append(float(cell))
        features.append(values)

    if not labels:
        raise DatasetFormatError("{} has no data rows".format(path))
    if all(l == 1 for l in labels) or all(l == -1 for l in labels):
        raise DegenerateDatasetError("{}: a class is empty after mapping labels (positive label '{}')".format(
            path, positive))

    # source_order counts data rows only; blank lines do not take an index
    dataset = Dataset(np.array(features), np.array(labels), name=os.path.basename(str(path)))
    dataset.feature_names = [str(columns[j]) for j in feature_index]
    log.info("Loaded {} from {}".format(dataset, path))
    return dataset


def dataset_csv(dataset, feature_names=None):
    """
    Canonical CSV serialisation of a dataset: header, then one row per sample
    in canonical order with round-trip float formatting and labels 1 / -1.
    """
    names = feature_names or getattr(dataset, 'feature_names', None) or \
        ['x{}'.format(j) for j in range(dataset.d)]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(list(names) + ['label'])
    for x, y in zip(dataset.features, dataset.labels):
        writer.writerow([repr(float(v)) for v in x] + [int(y)])
    return out.getvalue()


def dataset_checksum(dataset):
    """
    SHA-256 of the canonical CSV serialisation.
    """
    return hashlib.sha256(dataset_csv(dataset).encode('utf-8')).hexdigest()


def write_dataset(dataset, directory, name, manifest_fields=None):
    """
    Write `<name>.csv` and `<name>.manifest.json` to `directory`.

    Returns (csv_path, manifest_path, manifest).
    """
    if not os.path.isdir(directory):
        try:
            os.makedirs(directory)
        except OSError as e:
            raise DataError("Cannot create {}: {}".format(directory, e))
    text = dataset_csv(dataset)
    csv_path = os.path.join(directory, name + '.csv')
    manifest_path = os.path.join(directory, name + '.manifest.json')

    manifest = DatasetManifest(
        m=dataset.m, n=dataset.n, d=dataset.d,
        checksum=hashlib.sha256(text.encode('utf-8')).hexdigest(),
        **(manifest_fields or {}))
    try:
        with open(csv_path, 'w', newline='') as f:
            f.write(text)
        manifest.save(manifest_path)
    except (IOError, OSError) as e:
        raise DataError("Cannot write dataset to {}: {}".format(directory, e))
    log.info("Wrote {} to {}".format(dataset, csv_path))
    return csv_path, manifest_path, manifest


def cloud_manifest_fields(spec, dataset):
    return {
        'source': 'synthetic-cloud',
        'spec': spec.to_dict(),
        'seed': int(spec.seed),
        'generator': GENERATOR,
        'separable': circle_separable(dataset),
    }


def csv_manifest_fields(path, schema, dataset):
    return {
        'source': os.path.abspath(str(path)),
        'schema': schema.to_dict(),
        'source_order': [int(i) for i in dataset.source_order],
    }


class UciDataset(object):
    """
    A dataset from the UCI repository that `fetch_dataset` knows how to
    download and read.
    """
    def __init__(self, url, schema, description=''):
        self.url = url
        self.schema = schema
        self.description = description


UCI_BASE = 'https://archive.ics.uci.edu/ml/machine-learning-databases/'

UCI_DATASETS = {
    'credit': UciDataset(
        UCI_BASE + 'statlog/german/german.data-numeric',
        CsvSchema(label_column=-1, positive_label='2', delimiter=r'\s+', has_header=False),
        'Statlog German credit, numeric attributes, 300 bad (positive) / 700 good'),
    'spam': UciDataset(
        UCI_BASE + 'spambase/spambase.data',
        CsvSchema(label_column=-1, positive_label='1', has_header=False),
        'Spambase, 57 attributes, spam is positive'),
}

FETCH_TIMEOUT = 60


def fetch_dataset(source, directory, schema=None, raw=False, session=None):
    """
    Download a dataset into `directory`.

    `source` is a key of UCI_DATASETS or an http(s) URL. The downloaded file
    is written as `<name>.data`; unless `raw` is set it is then read with the
    known schema (or `schema` for a URL) and written out as a canonical
    `<name>.csv` with its manifest.

    Returns (raw_path, csv_path, manifest_path), the last two None when `raw`
    is set.
    """
    if source in UCI_DATASETS:
        name = source
        known = UCI_DATASETS[source]
        url = known.url
        schema = known.schema
    elif source.startswith(('http://', 'https://')):
        url = source
        name = os.path.splitext(os.path.basename(url.split('?')[0].rstrip('/')))[0] or 'dataset'
        schema = schema or CsvSchema()
    else:
        raise UsageError("Unknown dataset '{}', expected one of {} or a URL".format(
            source, ', '.join(sorted(UCI_DATASETS))))

    session = session or requests.Session()
    log.info("Fetching {}".format(url))
    try:
        response = session.get(url, timeout=FETCH_TIMEOUT)
    except requests.RequestException as e:
        raise DataError("Cannot fetch {}: {}".format(url, e))
    if response.status_code != 200:
        raise DataError("Cannot fetch {}: HTTP {}".format(url, response.status_code))
    if not response.content:
        raise DatasetFormatError("{} returned no data".format(url))

    if not os.path.isdir(directory):
        try:
            os.makedirs(directory)
        except OSError as e:
            raise DataError("Cannot create {}: {}".format(directory, e))
    raw_path = os.path.join(directory, name + '.data')
    try:
        with open(raw_path, 'wb') as f:
            f.write(response.content)
    except (IOError, OSError) as e:
        raise DataError("Cannot write {}: {}".format(raw_path, e))
    log.debug("Wrote {} bytes to {}".format(len(response.content), raw_path))

    if raw:
        return raw_path, None, None

    dataset = load_csv(raw_path, schema)
    fields = csv_manifest_fields(raw_path, schema, dataset)
    fields['url'] = url
    csv_path, manifest_path, _ = write_dataset(dataset, directory, name, fields)
    return raw_path, csv_path, manifest_path
