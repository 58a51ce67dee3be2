import csv
import os
import re
import shutil
import tempfile

from blessed import Terminal
from mock import Mock

from asymboost.api import *
from asymboost.core import Dataset, StrongClassifier, WeightInit, train
from asymboost.harness import CurveSeries
from asymboost.metrics import EvalReport
from asymboost.report import *
from asymboost.stump import Stump

from .common import *

log = logging.getLogger('tests')

HEADER = 't,bound,bound_pos,bound_neg,train_err,train_err_pos,train_err_neg,test_err,test_err_pos,test_err_neg'

tmp = None


def setup_module():
    global tmp
    tmp = tempfile.mkdtemp(prefix='asymboost-report-')


def teardown_module():
    shutil.rmtree(tmp, ignore_errors=True)


def make_series(gamma, rounds, scale=1.0):
    rows = []
    for t in range(1, rounds + 1):
        b = scale * 0.9 ** t
        rows.append((t, b, b * 1.1, b * 0.8, 0.3 / t, 0.1 / t, 0.5 / t, 0.35 / t, 0.2 / t, 1 / 3. / t))
    return CurveSeries(gamma, rows)


def read(path, mode='r'):
    with open(path, mode) as f:
        return f.read()


def test_curves_csv_layout():
    paths = emit_curves_csv([make_series(0.5, 3)], os.path.join(tmp, 'layout'))
    assert [os.path.basename(p) for p in paths] == ['curve-0.5000.csv']
    lines = read(paths[0]).split('\n')
    assert lines[0] == HEADER
    assert lines[-1] == ''
    assert len(lines) == 1 + 3 + 1
    assert lines[1].startswith('1,0.9,')


def test_curves_csv_deterministic():
    series = [make_series(0.5, 20), make_series(7 / 8., 20, 0.7)]
    a = emit_curves_csv(series, os.path.join(tmp, 'det-a'))
    b = emit_curves_csv(series, os.path.join(tmp, 'det-b'))
    for pa, pb in zip(a, b):
        assert read(pa, 'rb') == read(pb, 'rb')
    assert read(os.path.join(tmp, 'det-a', CURVE_MANIFEST), 'rb') == \
        read(os.path.join(tmp, 'det-b', CURVE_MANIFEST), 'rb')


def test_curves_csv_round_trip():
    series = [make_series(0.5, 15), make_series(2 / 3., 15, 0.5)]
    out = os.path.join(tmp, 'round-trip')
    emit_curves_csv(series, out)
    assert read_curves(out) == series


def test_curves_csv_empty_series():
    out = os.path.join(tmp, 'empty')
    paths = emit_curves_csv([make_series(0.5, 4), CurveSeries(0.875, [])], out)
    assert read(paths[1]) == HEADER + '\n'
    manifest = CurveManifest.load(os.path.join(out, CURVE_MANIFEST))
    assert manifest.empty == [0.875]
    assert [f['rounds'] for f in manifest.files] == [4, 0]


def test_curves_csv_needs_series():
    exception = False
    try:
        emit_curves_csv([], os.path.join(tmp, 'none'))
    except UsageError:
        exception = True
    assert exception


def test_read_curves_bad_file():
    bad_header = write_file(os.path.join(tmp, 'bad-header.csv'), 't,bound\n1,0.5\n')
    short_row = write_file(os.path.join(tmp, 'short-row.csv'), HEADER + '\n1,0.5,0.5\n')
    for path, line in ((bad_header, 1), (short_row, 2)):
        exception = None
        try:
            read_curves_csv(path)
        except DatasetFormatError as e:
            exception = e
        assert exception is not None and exception.line == line


def test_figure_structure():
    svg = figure_svg([make_series(0.5, 100)], 'bounds')
    assert svg.startswith('<?xml')
    assert svg.count('<polyline') == 3
    for quantity in ('overall', 'positive', 'negative'):
        assert 'class="{}"'.format(quantity) in svg
    assert 'id="gamma-0.5000"' in svg
    assert 'id="legend"' in svg
    assert 'gamma = 0.5000' in svg
    assert 'Training error bounds' in svg


def test_figure_one_group_per_series():
    series = [make_series(g, 10) for g in (0.5, 0.6, 2 / 3., 0.875)]
    svg = figure_svg(series, 'train')
    assert svg.count('<polyline') == 12
    for label in ('0.5000', '0.6000', '0.6667', '0.8750'):
        assert 'gamma = {}'.format(label) in svg


def test_figure_deterministic():
    series = [make_series(0.5, 30), make_series(0.875, 30, 0.6)]
    a = emit_figure_svg(series, 'test', os.path.join(tmp, 'a.svg'))
    b = emit_figure_svg(series, 'test', os.path.join(tmp, 'b.svg'))
    assert read(a, 'rb') == read(b, 'rb')


def test_figure_points_inside_view_box():
    series = [make_series(0.5, 50, 3.0), make_series(0.875, 50)]
    for panel in PANELS:
        svg = figure_svg(series, panel)
        width, height = [float(v) for v in re.search(r'viewBox="0 0 (\S+) (\S+)"', svg).groups()]
        for points in re.findall(r'<polyline points="([^"]*)"', svg):
            for pair in points.split():
                x, y = [float(v) for v in pair.split(',')]
                assert 0 <= x <= width and 0 <= y <= height, (panel, x, y)


def test_figure_y_range():
    series = make_series(0.5, 5)
    svg = figure_svg([series], 'bounds')
    # the axis tops out 5% above the largest plotted value
    peak = max(series.column('bound_pos'))
    assert '>{:.3f}</text>'.format(1.05 * peak) in svg


def test_figure_errors():
    for series, panel, cls in [([make_series(0.5, 10), make_series(0.875, 9)], 'bounds', DimensionMismatchError),
                               ([make_series(0.5, 10)], 'weights', UsageError),
                               ([], 'bounds', UsageError),
                               ([CurveSeries(0.5, [])], 'bounds', DataError)]:
        exception = False
        try:
            figure_svg(series, panel)
        except cls:
            exception = True
        assert exception, (panel, cls)


def test_single_round_figure():
    svg = figure_svg([make_series(0.5, 1)], 'train')
    assert svg.count('<polyline') == 3


def scatter_fixture():
    dataset = Dataset([[1.0, 0.0], [2.0, 1.0], [0.0, 2.0], [-1.0, 0.0], [0.2, -1.0]], [1, 1, 1, -1, -1])
    classifier = StrongClassifier([(1.0, Stump(0, 0.5, 1))], gamma_used=0.5, dimension=2)
    return dataset, classifier


def test_scatter_markers():
    dataset, classifier = scatter_fixture()
    svg = scatter_svg(dataset, classifier)
    # shape follows the true class, fill the predicted one; (0, 2) is a missed positive
    assert len(re.findall(r'<circle [^>]*fill="#d62728"[^>]*class="positive"', svg)) == 2
    assert len(re.findall(r'<circle [^>]*fill="#1f77b4"[^>]*class="positive"', svg)) == 1
    assert len(re.findall(r'<rect [^>]*fill="#1f77b4"[^>]*class="negative"', svg)) == 2
    assert len(re.findall(r'<rect [^>]*fill="#d62728"[^>]*class="negative"', svg)) == 0
    assert 'predicted positive' in svg

    # without a classifier the fill is the true class
    svg = scatter_svg(dataset)
    assert len(re.findall(r'<circle [^>]*fill="#d62728"[^>]*class="positive"', svg)) == 3
    assert 'predicted' not in svg


def test_scatter_stumps():
    dataset, classifier = scatter_fixture()
    stumps = [Stump(0, 0.5, 1), Stump(1, 0.5, -1), Stump(1, 100.0, 1), Stump(2, 0.0, 1)]
    svg = scatter_svg(dataset, classifier, stumps)
    lines = re.findall(r'<line x1="(\S+)" y1="(\S+)" x2="(\S+)" y2="(\S+)"[^>]*class="stump"', svg)
    assert len(lines) == 2
    vertical, horizontal = lines
    assert vertical[0] == vertical[2]
    assert horizontal[1] == horizontal[3]


def test_scatter_inside_view_box():
    dataset, classifier = scatter_fixture()
    svg = scatter_svg(dataset, classifier)
    width, height = [float(v) for v in re.search(r'viewBox="0 0 (\S+) (\S+)"', svg).groups()]
    for cx, cy in re.findall(r'<circle cx="(\S+)" cy="(\S+)"', svg):
        assert 0 <= float(cx) <= width and 0 <= float(cy) <= height


def test_scatter_single_feature():
    dataset = Dataset([[1.0], [2.0], [3.0]], [1, -1, -1])
    svg = scatter_svg(dataset, stumps=[Stump(0, 1.5, -1)])
    assert svg.count('class="stump"') == 1
    assert 'feature 1' not in svg


def test_emit_scatter_panel():
    dataset, classifier = scatter_fixture()
    a = emit_figure_svg(None, SCATTER, os.path.join(tmp, 'scatter-a.svg'), dataset, classifier)
    b = emit_figure_svg([make_series(0.5, 3)], SCATTER, os.path.join(tmp, 'scatter-b.svg'), dataset, classifier)
    assert read(a, 'rb') == read(b, 'rb')
    assert 'gamma = 0.5000' in read(a)

    exception = False
    try:
        emit_figure_svg([make_series(0.5, 3)], SCATTER, os.path.join(tmp, 'never.svg'))
    except UsageError:
        exception = True
    assert exception
    assert not os.path.exists(os.path.join(tmp, 'never.svg'))


def test_write_round_log():
    ds = four_points()
    _, records = train(ds, WeightInit.for_dataset(ds, 0.5), t_max=3)
    path = write_round_log(records, os.path.join(tmp, 'model.rounds.csv'))
    with open(path, newline='') as f:
        rows = list(csv.reader(f))
    assert tuple(rows[0]) == ROUND_LOG_COLUMNS
    assert [r[0] for r in rows[1:]] == ['1', '2', '3']
    first = dict(zip(rows[0], rows[1]))
    assert first['feature'] == '0'
    assert first['polarity'] in ('1', '-1')
    assert first['eps_clamped'] == '0'
    assert float(first['eps']) == records[0].eps
    assert float(first['bound']) == records[0].bound


def test_summary_rows():
    result = Mock(report=EvalReport(231, 19, 84, 166, 7 / 8.))
    assert summary_rows([result]) == [('0.8750', '7.60', '66.40', '37.00', '14.95')]


def test_summary_as_err_matches_printed_rates():
    reports = [EvalReport(171, 79, 177, 73, g) for g in (1 / 2., 3 / 5., 2 / 3., 7 / 8.)]
    for row in summary_rows([Mock(report=r) for r in reports]):
        gamma, fn, fp, _, as_err = [float(v) for v in row]
        assert abs(gamma * fn + (1 - gamma) * fp - as_err) <= 0.01 + 1e-9


def test_format_summary():
    results = [Mock(report=EvalReport(171, 79, 177, 73, 0.5)), Mock(report=EvalReport(231, 19, 84, 166, 0.875))]
    text = format_summary(results, Terminal(force_styling=None))
    lines = text.split('\n')
    assert len(lines) == 3
    assert lines[0].split() == ['gamma', 'FN', '(%)', 'FP', '(%)', 'ClErr', '(%)', 'AsErr', '(%)']
    assert lines[1].split() == ['0.5000', '31.60', '29.20', '30.40', '30.40']
    assert lines[2].split() == ['0.8750', '7.60', '66.40', '37.00', '14.95']
    assert len(set(len(l) for l in lines)) == 1
