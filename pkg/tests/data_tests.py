import os
import shutil
import tempfile

import numpy as np
import requests
from mock import Mock

from asymboost.api import *
from asymboost.data import *

from .common import *

log = logging.getLogger('tests')

tmp = None


def setup_module():
    global tmp
    tmp = tempfile.mkdtemp(prefix='asymboost-data-')


def teardown_module():
    shutil.rmtree(tmp, ignore_errors=True)


def fixture(name, text):
    return write_file(os.path.join(tmp, name), text)


def radii(features):
    return np.sqrt((features ** 2).sum(axis=1))


def expect_error(cls, func, *args, **kwargs):
    exception = None
    try:
        func(*args, **kwargs)
    except cls as e:
        exception = e
    assert exception is not None, "{} not raised".format(cls.__name__)
    return exception


def test_cloud_deterministic():
    spec = CloudSpec(n_pos=40, n_neg=60, seed=42)
    a = gen_cloud(spec)
    b = gen_cloud(CloudSpec.from_dict(spec.to_dict()))
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(a.labels, b.labels)
    assert dataset_checksum(a) == dataset_checksum(b)
    assert dataset_checksum(a) != dataset_checksum(gen_cloud(CloudSpec(n_pos=40, n_neg=60, seed=43)))


def test_cloud_canonical_order():
    ds = gen_cloud(CloudSpec(n_pos=30, n_neg=20, seed=1))
    assert (ds.m, ds.n, ds.d) == (30, 50, 2)
    assert list(ds.labels[:30]) == [1] * 30
    assert list(ds.labels[30:]) == [-1] * 20
    assert ds.name == 'cloud-1'


def test_separable_cloud():
    for seed in (0, 1, 42):
        spec = CloudSpec.preset('separable', seed=seed)
        ds = gen_cloud(spec)
        assert spec.separable_by_construction
        assert circle_separable(ds)
        assert (ds.m, ds.n) == (250, 500)


def test_cloud_radius_bounds():
    spec = CloudSpec(n_pos=200, n_neg=200, inner_radius=1.0, outer_radius=3.0, gap=0.5, seed=7)
    ds = gen_cloud(spec)
    r = radii(ds.features)
    assert r[:ds.m].max() <= 1.0
    assert r[ds.m:].min() >= 1.5
    assert r[ds.m:].max() <= 3.0


def test_overlapping_cloud():
    spec = CloudSpec.preset('overlapping', seed=3)
    assert not spec.separable_by_construction
    assert abs(spec.positive_radius - 1.09) < 1e-12
    assert abs(spec.negative_min_radius - 0.7) < 1e-12
    ds = gen_cloud(spec)
    assert not circle_separable(ds)
    r = radii(ds.features)
    assert r[:ds.m].max() <= spec.positive_radius
    assert r[ds.m:].min() >= spec.negative_min_radius


def test_preset_overrides():
    spec = CloudSpec.preset('overlapping', n_pos=10, overlap_fraction=0.1)
    assert spec.n_pos == 10 and spec.overlap_fraction == 0.1 and spec.outer_radius == 1.3
    expect_error(UsageError, CloudSpec.preset, 'spiral')


def test_cloud_spec_validation():
    bad = [
        dict(n_pos=0),
        dict(n_neg=-3),
        dict(n_pos=2.5),
        dict(inner_radius=0.0),
        dict(inner_radius=2.0, outer_radius=1.0),
        dict(gap=-0.1),
        dict(inner_radius=1.0, outer_radius=1.4, gap=0.5),
        dict(overlap_fraction=1.0),
        dict(overlap_fraction=-0.2),
        dict(seed=-1),
    ]
    for kwargs in bad:
        expect_error(UsageError, gen_cloud, CloudSpec(**kwargs))


def test_load_csv_fixture():
    path = fixture('three.csv', "f1,f2,label\n0.5,1,good\n2,3.25,bad\n-1,4,good\n")
    ds = load_csv(path, CsvSchema(label_column='label', positive_label='bad'))
    assert (ds.m, ds.n, ds.d) == (1, 3, 2)
    assert ds.feature_names == ['f1', 'f2']
    assert list(ds.features[0]) == [2.0, 3.25]
    assert list(ds.source_order) == [1, 0, 2]


def test_load_csv_restores_source_order():
    path = fixture('order.csv', "a,label\n1,0\n2,1\n3,0\n4,1\n")
    ds = load_csv(path)
    assert list(ds.labels) == [1, 1, -1, -1]
    assert list(ds.restore_order(ds.labels)) == [-1, 1, -1, 1]
    assert list(ds.restore_order(ds.features[:, 0])) == [1.0, 2.0, 3.0, 4.0]


def test_load_csv_non_numeric_cell():
    path = fixture('nonnumeric.csv', "f1,f2,label\n1,2,good\n3,x,bad\n")
    e = expect_error(DatasetFormatError, load_csv, path, CsvSchema(label_column='label', positive_label='bad'))
    assert e.line == 3
    assert 'line 3' in str(e)


def test_load_csv_missing_value():
    path = fixture('missing.csv', "f1,f2,label\n1,,good\n3,4,bad\n")
    e = expect_error(DatasetFormatError, load_csv, path, CsvSchema(positive_label='bad'))
    assert e.line == 2
    assert 'missing' in str(e)


def test_load_csv_unmapped_label():
    path = fixture('unmapped.csv', "f1,label\n1,good\n2,bad\n3,ugly\n")
    e = expect_error(DatasetFormatError, load_csv, path,
                     CsvSchema(positive_label='bad', negative_label='good'))
    assert e.line == 4

    # without a negative label every other value is a negative
    ds = load_csv(path, CsvSchema(positive_label='bad'))
    assert (ds.m, ds.n) == (1, 3)


def test_load_csv_single_class():
    path = fixture('single.csv', "f1,label\n1,bad\n2,bad\n")
    expect_error(DegenerateDatasetError, load_csv, path, CsvSchema(positive_label='bad'))
    expect_error(DegenerateDatasetError, load_csv, path, CsvSchema(positive_label='good'))


def test_load_csv_drops_id_column():
    path = fixture('ids.csv', "id,f1,label\na,1,1\nb,2,0\nc,3,1\n")
    ds = load_csv(path)
    assert ds.d == 1
    assert ds.feature_names == ['f1']


def test_load_csv_explicit_columns():
    path = fixture('explicit.csv', "f1,f2,f3,label\n1,2,3,1\n4,5,6,0\n")
    ds = load_csv(path, CsvSchema(feature_columns=['f3', 0]))
    assert ds.feature_names == ['f3', 'f1']
    assert list(ds.features[0]) == [3.0, 1.0]
    expect_error(DatasetFormatError, load_csv, path, CsvSchema(feature_columns=['nope']))


def test_load_csv_no_header():
    path = fixture('noheader.csv', "1;2;1\n3;4;0\n5;6;1\n")
    ds = load_csv(path, CsvSchema(label_column=2, delimiter=';', has_header=False))
    assert (ds.m, ds.n, ds.d) == (2, 3, 2)


def test_load_csv_no_header_line_numbers():
    path = fixture('noheader_bad.csv', "1,2,1\n3,?,0\n")
    e = expect_error(DatasetFormatError, load_csv, path, CsvSchema(label_column=2, has_header=False))
    assert e.line == 2


def test_load_csv_invalid_utf8():
    path = os.path.join(tmp, 'latin.csv')
    with open(path, 'wb') as f:
        f.write(b'f1,label\n1,0\n2,\xff\xfe\n3,1\n')
    expect_error(DatasetFormatError, load_csv, path)


def test_load_csv_blank_lines_keep_source_order():
    path = fixture('blank.csv', "a,label\n1,0\n\n2,1\n\n3,0\n")
    ds = load_csv(path)
    assert ds.n == 3
    assert sorted(ds.source_order) == [0, 1, 2]
    assert list(ds.restore_order(ds.features[:, 0])) == [1.0, 2.0, 3.0]
    assert list(ds.restore_order(ds.labels)) == [-1, 1, -1]


def test_load_csv_empty_and_missing_files():
    expect_error(DatasetFormatError, load_csv, fixture('empty.csv', ''))
    expect_error(DataError, load_csv, os.path.join(tmp, 'does-not-exist.csv'))


def test_load_csv_credit_composition():
    lines = ['f1,f2,class']
    for i in range(1000):
        lines.append('{},{},{}'.format(i % 17, i % 5, 2 if i % 10 < 3 else 1))
    path = fixture('credit.csv', '\n'.join(lines) + '\n')
    ds = load_csv(path, CsvSchema(label_column='class', positive_label='2'))
    assert (ds.m, ds.n) == (300, 1000)


def test_dataset_csv_format():
    ds = four_points()
    text = dataset_csv(ds)
    assert text.splitlines() == ['x0,label', '1.0,1', '3.0,1', '2.0,-1', '4.0,-1']
    assert dataset_checksum(ds) == dataset_checksum(four_points())


def test_write_dataset_round_trip():
    spec = CloudSpec(n_pos=25, n_neg=35, seed=5)
    ds = gen_cloud(spec)
    out = os.path.join(tmp, 'written')
    csv_path, manifest_path, manifest = write_dataset(ds, out, 'cloud', cloud_manifest_fields(spec, ds))
    assert os.path.basename(csv_path) == 'cloud.csv'
    assert os.path.basename(manifest_path) == 'cloud.manifest.json'

    loaded = load_csv(csv_path)
    assert np.array_equal(loaded.features, ds.features)
    assert np.array_equal(loaded.labels, ds.labels)
    assert dataset_checksum(loaded) == manifest.checksum

    doc = DatasetManifest.load(manifest_path)
    assert (doc.m, doc.n, doc.d) == (25, 60, 2)
    assert doc.source == 'synthetic-cloud'
    assert doc.generator == 'numpy.random.PCG64'
    assert doc.seed == 5
    assert doc.separable is True
    assert CloudSpec.from_dict(doc.spec).to_dict() == spec.to_dict()


def test_write_dataset_byte_identical():
    spec = CloudSpec(n_pos=10, n_neg=10, seed=9)
    a, _, _ = write_dataset(gen_cloud(spec), os.path.join(tmp, 'a'), 'cloud')
    b, _, _ = write_dataset(gen_cloud(spec), os.path.join(tmp, 'b'), 'cloud')
    with open(a, 'rb') as fa, open(b, 'rb') as fb:
        assert fa.read() == fb.read()


def test_csv_manifest_fields():
    path = fixture('prov.csv', "f1,label\n1,0\n2,1\n")
    schema = CsvSchema()
    ds = load_csv(path, schema)
    fields = csv_manifest_fields(path, schema, ds)
    assert fields['source'] == os.path.abspath(path)
    assert fields['schema']['label_column'] == -1
    assert fields['source_order'] == [1, 0]


def fake_session(content=b'', status_code=200, error=None):
    session = Mock()
    if error is not None:
        session.get.side_effect = error
    else:
        session.get.return_value = Mock(status_code=status_code, content=content)
    return session


def test_fetch_known_dataset():
    session = fake_session(b'1 2 1\n3  4 2\n5 6 1\n')
    out = os.path.join(tmp, 'fetch-credit')
    raw_path, csv_path, manifest_path = fetch_dataset('credit', out, session=session)

    session.get.assert_called_once_with(UCI_DATASETS['credit'].url, timeout=FETCH_TIMEOUT)
    assert os.path.basename(raw_path) == 'credit.data'
    with open(raw_path, 'rb') as f:
        assert f.read() == b'1 2 1\n3  4 2\n5 6 1\n'

    ds = load_csv(csv_path)
    assert (ds.m, ds.n, ds.d) == (1, 3, 2)
    assert list(ds.features[0]) == [3.0, 4.0]
    doc = DatasetManifest.load(manifest_path)
    assert doc.url == UCI_DATASETS['credit'].url
    assert doc.checksum == dataset_checksum(ds)


def test_fetch_url_raw():
    session = fake_session(b'anything at all')
    out = os.path.join(tmp, 'fetch-raw')
    raw_path, csv_path, manifest_path = fetch_dataset('https://example.org/files/thing.csv?x=1', out,
                                                      raw=True, session=session)
    assert os.path.basename(raw_path) == 'thing.data'
    assert csv_path is None and manifest_path is None


def test_fetch_url_with_schema():
    session = fake_session(b'a;b;class\n1;2;yes\n3;4;no\n')
    out = os.path.join(tmp, 'fetch-schema')
    _, csv_path, _ = fetch_dataset('http://example.org/d.csv', out,
                                   CsvSchema(label_column='class', positive_label='yes', delimiter=';'),
                                   session=session)
    assert load_csv(csv_path).m == 1


def test_fetch_errors():
    out = os.path.join(tmp, 'fetch-errors')
    expect_error(UsageError, fetch_dataset, 'diabetes', out, session=fake_session(b'x'))
    expect_error(DataError, fetch_dataset, 'spam', out, session=fake_session(status_code=404))
    expect_error(DataError, fetch_dataset, 'spam', out, session=fake_session(error=requests.ConnectionError('down')))
    expect_error(DatasetFormatError, fetch_dataset, 'spam', out, session=fake_session(b''))
    # the download is kept even when it cannot be read as a dataset
    expect_error(DegenerateDatasetError, fetch_dataset, 'spam', out, session=fake_session(b'1,2,1\n3,4,1\n'))
    assert os.path.isfile(os.path.join(out, 'spam.data'))
