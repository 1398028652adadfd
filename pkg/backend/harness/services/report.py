"""
Sweep reports: CSV and JSON for machines, a short text summary for people.
"""
import csv
import io
import json
from typing import List, Optional, Sequence, Tuple

from ..exceptions import HarnessError
from .sweep import SweepRecord
from .trend import TrendFit

CSV_FIELDS = ['key_size', 'io_pairs', 'total_iters', 'total_s', 'io_pairs_s', 'avg_s', 'unsat_s', 'unsat_pct']


def to_csv(records: Sequence[SweepRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator='\n')
    writer.writeheader()
    for record in records:
        row = record.as_dict()
        writer.writerow({
            name: (f"{row[name]:.6f}" if isinstance(row[name], float) else row[name])
            for name in CSV_FIELDS
        })
    return buffer.getvalue()


def to_json(records: Sequence[SweepRecord], fit: Optional[TrendFit] = None) -> str:
    payload = {'records': [record.as_dict() for record in records]}
    if fit is not None:
        payload['fit'] = fit.as_dict()
    return json.dumps(payload, indent=2)


def from_json(text: str) -> List[SweepRecord]:
    payload = json.loads(text)
    return [SweepRecord.from_dict(item) for item in payload['records']]


def iteration_drops(records: Sequence[SweepRecord]) -> List[Tuple[int, int, int]]:
    """(key size, previous TI, TI) wherever TI falls as the key grows by one bit."""
    ordered = sorted(records, key=lambda r: r.key_size)
    return [
        (current.key_size, previous.total_iters, current.total_iters)
        for previous, current in zip(ordered, ordered[1:])
        if current.total_iters < previous.total_iters
    ]


def text_summary(records: Sequence[SweepRecord], fit: Optional[TrendFit] = None) -> str:
    lines = [f"{len(records)} sweep points"]
    incomplete = [r.key_size for r in records if not r.complete]
    if incomplete:
        lines.append(f"incomplete at |K| = {', '.join(map(str, incomplete))}")
    if records:
        total = sum(r.total_s for r in records)
        unsat = sum(r.unsat_s for r in records)
        share = 100.0 * unsat / total if total else 0.0
        lines.append(f"UNSAT share of total time: {share:.1f}%")
    if fit is not None:
        lines.append(f"trend: {fit.equation()} (residual {fit.residual:.3f})")
    drops = iteration_drops(records)
    if drops:
        for size, before, after in drops:
            lines.append(f"TI drop at |K|={size}: {before} -> {after}")
    else:
        lines.append("no TI drops")
    return '\n'.join(lines) + '\n'


REPORT_FORMATS = {
    'csv': lambda records, fit: to_csv(records),
    'json': to_json,
    'text': text_summary,
}


def report(records: Sequence[SweepRecord], format: str = 'csv', fit: Optional[TrendFit] = None) -> str:
    try:
        render = REPORT_FORMATS[format]
    except KeyError:
        raise HarnessError(f"unknown report format {format!r}; expected one of {sorted(REPORT_FORMATS)}")
    return render(records, fit)


def elimination_csv(matrix) -> str:
    """One row per key with a 1/0 survival mark per IO pair."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['key'] + [str(pair) for pair in matrix.pairs] + ['survives_all'])
    for key, marks in matrix.rows.items():
        writer.writerow([key] + [int(mark) for mark in marks] + [int(all(marks))])
    return buffer.getvalue()


def elimination_table(matrix) -> str:
    key_width = max([3] + [len(key) for key in matrix.rows])
    header = ['K'.ljust(key_width)] + [str(pair) for pair in matrix.pairs]
    lines = ['  '.join(header)]
    for key, marks in matrix.rows.items():
        cells = [key.ljust(len(header[0]))] + [
            ('ok' if mark else 'x').center(len(title)) for mark, title in zip(marks, header[1:])
        ]
        lines.append('  '.join(cells))
    return '\n'.join(lines) + '\n'
