"""
Serialisation of curves and round logs, static SVG line charts, and the
human-readable summary table.

Data files use round-trip float formatting and carry no timestamps, so
identical inputs always produce identical bytes.
"""
import csv
import io
import logging
import os
from xml.sax.saxutils import escape

import numpy as np
from blessed import Terminal

from .api import *
from .harness import CURVE_COLUMNS, CurveSeries, gamma_label
from .metrics import asymmetric_error

log = logging.getLogger('report')

CURVE_MANIFEST = 'curves.manifest.json'

PANELS = {
    'bounds': (('bound', 'overall'), ('bound_pos', 'positive'), ('bound_neg', 'negative')),
    'train': (('train_err', 'overall'), ('train_err_pos', 'positive'), ('train_err_neg', 'negative')),
    'test': (('test_err', 'overall'), ('test_err_pos', 'positive'), ('test_err_neg', 'negative')),
}

PANEL_TITLES = {
    'bounds': 'Training error bounds',
    'train': 'Training errors',
    'test': 'Test errors',
}

# one colour per series, one dash pattern per plotted quantity
SERIES_COLOURS = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b', '#e377c2', '#17becf']
QUANTITY_DASHES = {'overall': None, 'positive': '6,3', 'negative': '2,3'}

ROUND_LOG_COLUMNS = (
    'round', 'feature', 'threshold', 'polarity', 'alpha', 'eps', 'eps_pos', 'eps_neg',
    'eps_reconstructed', 'alpha_decomposed', 'eps_clamped', 'r', 'z', 'z_pos', 'z_neg',
    'p_pos_before', 'p_neg_before', 'p_pos_after', 'p_neg_after', 'p_global_after',
    'effective_gamma', 'gamma', 'bound', 'bound_pos', 'bound_neg')


def _num(value):
    if isinstance(value, bool):
        return '1' if value else '0'
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _write_text(path, text):
    try:
        with open(path, 'w', newline='') as f:
            f.write(text)
    except (IOError, OSError) as e:
        raise DataError("Cannot write {}: {}".format(path, e))
    return path


def curves_csv(series):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(CURVE_COLUMNS)
    for row in series.rows:
        writer.writerow([str(int(row[0]))] + [_num(v) for v in row[1:]])
    return out.getvalue()


def emit_curves_csv(series, out):
    """
    Write one `curve-<gamma>.csv` per series into the directory `out`, plus a
    curve manifest listing the files and flagging series with no rows.

    Returns the CSV paths in series order.
    """
    if not series:
        raise UsageError("No curve series to write")
    if not os.path.isdir(out):
        try:
            os.makedirs(out)
        except OSError as e:
            raise DataError("Cannot create {}: {}".format(out, e))

    paths = []
    files = []
    empty = []
    for s in series:
        name = 'curve-{}.csv'.format(gamma_label(s.gamma))
        paths.append(_write_text(os.path.join(out, name), curves_csv(s)))
        files.append({'gamma': s.gamma, 'file': name, 'rounds': len(s.rows)})
        if not s.rows:
            log.warning("Curve for gamma={!r} has no rows".format(s.gamma))
            empty.append(s.gamma)

    try:
        CurveManifest(files=files, empty=empty).save(os.path.join(out, CURVE_MANIFEST))
    except (IOError, OSError) as e:
        raise DataError("Cannot write curve manifest in {}: {}".format(out, e))
    return paths


def read_curves_csv(path, gamma=None):
    """
    Parse a curve file written by `emit_curves_csv`.
    """
    try:
        with open(path, newline='') as f:
            rows = list(csv.reader(f))
    except (IOError, OSError) as e:
        raise DataError("Cannot read {}: {}".format(path, e))
    if not rows or tuple(rows[0]) != CURVE_COLUMNS:
        raise DatasetFormatError("{} does not start with the curve header".format(path), 1)
    parsed = []
    for line, row in enumerate(rows[1:], 2):
        if len(row) != len(CURVE_COLUMNS):
            raise DatasetFormatError("expected {} fields, got {}".format(len(CURVE_COLUMNS), len(row)), line)
        try:
            parsed.append((int(row[0]),) + tuple(float(v) for v in row[1:]))
        except ValueError as e:
            raise DatasetFormatError(str(e), line)
    return CurveSeries(gamma, parsed)


def read_curves(directory):
    """
    Read every series listed in the curve manifest of `directory`.
    """
    manifest = CurveManifest.load(os.path.join(directory, CURVE_MANIFEST))
    return [read_curves_csv(os.path.join(directory, f['file']), f['gamma']) for f in manifest.files]


class SVG(object):
    """
    Minimal SVG 1.1 document builder.
    """
    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.parts = []

    def line(self, x1, y1, x2, y2, stroke='#000000', extra=''):
        self.parts.append('<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="{}"{}/>'.format(
            x1, y1, x2, y2, stroke, extra))

    def polyline(self, points, stroke, dash=None, extra=''):
        coords = ' '.join('{:.2f},{:.2f}'.format(x, y) for x, y in points)
        dash_attr = ' stroke-dasharray="{}"'.format(dash) if dash else ''
        self.parts.append('<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{}{}/>'.format(
            coords, stroke, dash_attr, extra))

    def text(self, x, y, string, anchor='start', size=11):
        self.parts.append('<text x="{:.2f}" y="{:.2f}" font-family="sans-serif" font-size="{}" '
                          'text-anchor="{}">{}</text>'.format(x, y, size, anchor, escape(string)))

    def rect(self, x, y, width, height, fill='none', stroke='#000000', extra=''):
        self.parts.append('<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="{}" stroke="{}"{}/>'.format(
            x, y, width, height, fill, stroke, extra))

    def circle(self, cx, cy, r, fill, stroke='#000000', extra=''):
        self.parts.append('<circle cx="{:.2f}" cy="{:.2f}" r="{:.2f}" fill="{}" stroke="{}"{}/>'.format(
            cx, cy, r, fill, stroke, extra))

    def group_start(self, **attrs):
        self.parts.append('<g {}>'.format(' '.join('{}="{}"'.format(k, escape(str(v)))
                                                    for k, v in sorted(attrs.items()))))

    def group_end(self):
        self.parts.append('</g>')

    def get_svg(self):
        head = ('<?xml version="1.0" standalone="no"?>\n'
                '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
                '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">\n'
                '<svg version="1.1" width="{0}" height="{1}" viewBox="0 0 {0} {1}" '
                'xmlns="http://www.w3.org/2000/svg">\n'.format(self.width, self.height))
        return head + '\n'.join(self.parts) + '\n</svg>\n'


class Chart(object):
    """
    Layout of a single line chart panel: plot area, axis scales and legend.
    """
    width = 720
    height = 420
    left = 60
    right = 170
    top = 40
    bottom = 50

    def __init__(self, rounds, y_max):
        self.rounds = rounds
        self.y_max = y_max

    @property
    def plot_width(self):
        return self.width - self.left - self.right

    @property
    def plot_height(self):
        return self.height - self.top - self.bottom

    def x(self, t):
        if self.rounds <= 1:
            return self.left + self.plot_width / 2.0
        return self.left + (t - 1) * self.plot_width / float(self.rounds - 1)

    def y(self, value):
        return self.top + self.plot_height * (1.0 - value / self.y_max)


def _y_ticks(y_max, count=5):
    return [y_max * i / float(count) for i in range(count + 1)]


def figure_svg(series, panel):
    """
    Render one panel for every series and return the SVG text.
    """
    if not series:
        raise UsageError("No curve series to plot")
    if panel not in PANELS:
        raise UsageError("Unknown panel '{}', expected one of {}".format(panel, sorted(PANELS)))
    counts = set(len(s.rows) for s in series)
    if len(counts) != 1:
        raise DimensionMismatchError("Series have differing round counts: {}".format(sorted(counts)))
    rounds = counts.pop()
    if rounds == 0:
        raise DataError("Series have no rounds to plot")

    quantities = PANELS[panel]
    peak = max(max(s.column(col)) for s in series for col, _ in quantities)
    chart = Chart(rounds, 1.05 * peak if peak > 0 else 1.0)
    svg = SVG(chart.width, chart.height)

    svg.text(chart.left + chart.plot_width / 2.0, chart.top / 2.0 + 4, PANEL_TITLES[panel], anchor='middle', size=14)
    svg.rect(chart.left, chart.top, chart.plot_width, chart.plot_height)

    # axes
    base = chart.top + chart.plot_height
    for value in _y_ticks(chart.y_max):
        y = chart.y(value)
        svg.line(chart.left - 4, y, chart.left, y)
        svg.text(chart.left - 8, y + 4, '{:.3f}'.format(value), anchor='end', size=10)
    step = max(1, rounds // 10)
    for t in range(1, rounds + 1):
        if t == 1 or t == rounds or t % step == 0:
            x = chart.x(t)
            svg.line(x, base, x, base + 4)
            svg.text(x, base + 16, str(t), anchor='middle', size=10)
    svg.text(chart.left + chart.plot_width / 2.0, chart.height - 12, 'round', anchor='middle')

    for i, s in enumerate(series):
        colour = SERIES_COLOURS[i % len(SERIES_COLOURS)]
        svg.group_start(id='gamma-{}'.format(gamma_label(s.gamma)))
        for col, quantity in quantities:
            points = [(chart.x(t), chart.y(v)) for t, v in zip(s.column('t'), s.column(col))]
            svg.polyline(points, colour, QUANTITY_DASHES[quantity], extra=' class="{}"'.format(quantity))
        svg.group_end()

    # legend
    lx = chart.left + chart.plot_width + 15
    ly = chart.top + 10
    svg.group_start(id='legend')
    for i, s in enumerate(series):
        colour = SERIES_COLOURS[i % len(SERIES_COLOURS)]
        svg.line(lx, ly, lx + 24, ly, stroke=colour, extra=' stroke-width="3"')
        svg.text(lx + 30, ly + 4, 'gamma = {}'.format(gamma_label(s.gamma)))
        ly += 18
    ly += 8
    for _, quantity in quantities:
        dash = QUANTITY_DASHES[quantity]
        svg.line(lx, ly, lx + 24, ly, extra=' stroke-dasharray="{}"'.format(dash) if dash else '')
        svg.text(lx + 30, ly + 4, quantity)
        ly += 18
    svg.group_end()

    return svg.get_svg()


# marker shape shows the true class, fill colour the predicted one
CLASS_COLOURS = {1: '#d62728', -1: '#1f77b4'}
CLASS_NAMES = {1: 'positive', -1: 'negative'}
STUMP_COLOUR = '#555555'
SCATTER = 'scatter'


class ScatterChart(object):
    """
    Layout of a two-feature scatter panel. Data limits are widened by
    `pad` of their span on each side.
    """
    width = 560
    height = 480
    left = 50
    right = 150
    top = 40
    bottom = 40
    pad = 0.05

    def __init__(self, x_range, y_range):
        self.x_min, self.x_max = self._padded(*x_range)
        self.y_min, self.y_max = self._padded(*y_range)

    def _padded(self, lo, hi):
        span = hi - lo
        if span <= 0:
            span = 1.0
            lo -= 0.5
            hi += 0.5
        return lo - self.pad * span, hi + self.pad * span

    @property
    def plot_width(self):
        return self.width - self.left - self.right

    @property
    def plot_height(self):
        return self.height - self.top - self.bottom

    def x(self, value):
        return self.left + self.plot_width * (value - self.x_min) / (self.x_max - self.x_min)

    def y(self, value):
        return self.top + self.plot_height * (1.0 - (value - self.y_min) / (self.y_max - self.y_min))


def _marker(svg, x, y, true_label, colour, size=4.0):
    if true_label == 1:
        svg.circle(x, y, size, colour, extra=' stroke-width="0.5" class="positive"')
    else:
        svg.rect(x - size, y - size, 2 * size, 2 * size, fill=colour, extra=' stroke-width="0.5" class="negative"')


def scatter_svg(dataset, classifier=None, stumps=(), title=None):
    """
    Plot the first two features of `dataset`.

    Each sample is drawn with a marker for its true class (circle for
    positive, square for negative) filled with the colour of the class
    `classifier` assigns to it, or of its true class when no classifier is
    given. `stumps` on feature 0 or 1 are drawn as vertical or horizontal
    threshold lines. A one-feature dataset is plotted along the x axis.
    """
    if dataset.d > 2:
        log.debug("Scatter uses features 0 and 1 of {}".format(dataset.d))
    xs = dataset.features[:, 0]
    ys = dataset.features[:, 1] if dataset.d > 1 else np.zeros(dataset.n)
    predicted = dataset.labels if classifier is None else classifier.classify_many(dataset.features)

    chart = ScatterChart((float(xs.min()), float(xs.max())), (float(ys.min()), float(ys.max())))
    svg = SVG(chart.width, chart.height)
    if title:
        svg.text(chart.left + chart.plot_width / 2.0, chart.top / 2.0 + 4, title, anchor='middle', size=14)
    svg.rect(chart.left, chart.top, chart.plot_width, chart.plot_height)
    svg.text(chart.left + chart.plot_width / 2.0, chart.height - 12, 'feature 0', anchor='middle')
    if dataset.d > 1:
        svg.text(14, chart.top + chart.plot_height / 2.0, 'feature 1', anchor='middle')

    svg.group_start(id='stumps')
    for i, stump in enumerate(stumps):
        if stump.feature == 0 and chart.x_min <= stump.threshold <= chart.x_max:
            x = chart.x(stump.threshold)
            svg.line(x, chart.top, x, chart.top + chart.plot_height, stroke=STUMP_COLOUR,
                     extra=' stroke-dasharray="4,3" class="stump"')
        elif stump.feature == 1 and dataset.d > 1 and chart.y_min <= stump.threshold <= chart.y_max:
            y = chart.y(stump.threshold)
            svg.line(chart.left, y, chart.left + chart.plot_width, y, stroke=STUMP_COLOUR,
                     extra=' stroke-dasharray="4,3" class="stump"')
        else:
            log.debug("Stump {} on feature {} is not drawn".format(i + 1, stump.feature))
    svg.group_end()

    svg.group_start(id='samples')
    for x, y, label, guess in zip(xs, ys, dataset.labels, predicted):
        _marker(svg, chart.x(x), chart.y(y), int(label), CLASS_COLOURS[int(guess)])
    svg.group_end()

    lx = chart.left + chart.plot_width + 15
    ly = chart.top + 10
    svg.group_start(id='legend')
    for label in (1, -1):
        _marker(svg, lx + 6, ly, label, '#ffffff')
        svg.text(lx + 18, ly + 4, 'true ' + CLASS_NAMES[label])
        ly += 18
    ly += 8
    for label in (1, -1):
        svg.rect(lx + 2, ly - 4, 8, 8, fill=CLASS_COLOURS[label], stroke=CLASS_COLOURS[label])
        svg.text(lx + 18, ly + 4, ('predicted ' if classifier is not None else '') + CLASS_NAMES[label])
        ly += 18
    svg.group_end()

    return svg.get_svg()


def emit_figure_svg(series, panel, out, dataset=None, classifier=None, stumps=()):
    """
    Write the `panel` chart of `series` to `out`.

    `panel` is one of the line chart panels (bounds, train or test) or
    `scatter`, which ignores `series` and plots `dataset` with the
    predictions of `classifier` and the thresholds of `stumps`.
    """
    if panel == SCATTER:
        if dataset is None:
            raise UsageError("The scatter panel needs a dataset")
        title = None
        if classifier is not None and classifier.gamma_used is not None:
            title = 'gamma = {}'.format(gamma_label(classifier.gamma_used))
        text = scatter_svg(dataset, classifier, stumps, title)
    else:
        text = figure_svg(series, panel)
    log.debug("Writing {} panel to {}".format(panel, out))
    return _write_text(out, text)


def write_round_log(records, path):
    """
    Write one CSV row of diagnostics per boosting round.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(ROUND_LOG_COLUMNS)
    for rec in records:
        d = rec._asdict()
        stump = d.pop('stump')
        d.update(feature=int(stump.feature), threshold=float(stump.threshold), polarity=int(stump.polarity))
        d['eps_clamped'] = bool(d['eps_clamped'])
        writer.writerow([_num(d[c]) for c in ROUND_LOG_COLUMNS])
    return _write_text(path, out.getvalue())


def summary_rows(results):
    """
    (gamma, FN, FP, ClErr, AsErr) of each LOOCV result as two-decimal
    percentage strings.
    """
    rows = []
    for r in results:
        rep = r.report
        rows.append((
            '{:.4f}'.format(rep.gamma),
            '{:.2f}'.format(100.0 * rep.fn_rate),
            '{:.2f}'.format(100.0 * rep.fp_rate),
            '{:.2f}'.format(100.0 * rep.cl_err),
            '{:.2f}'.format(100.0 * asymmetric_error(rep.gamma, rep.fn_rate, rep.fp_rate)),
        ))
    return rows


def format_summary(results, term=None):
    """
    Tabulate LOOCV results with a bold header when writing to a terminal.
    """
    term = term or Terminal()
    header = ('gamma', 'FN (%)', 'FP (%)', 'ClErr (%)', 'AsErr (%)')
    rows = summary_rows(results)
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = [term.bold('  '.join(h.rjust(w) for h, w in zip(header, widths)))]
    for row in rows:
        lines.append('  '.join(v.rjust(w) for v, w in zip(row, widths)))
    return '\n'.join(lines)
