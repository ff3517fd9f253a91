#!/usr/bin/env python
#
# emit.py
#
# Fixed-schema writers for growth records and verification reports
#

try:
    import csv
    import json
    import math
    import os
    from dataclasses import dataclass

    import click

    from utilities_common import constants
    from utilities_common.exception import EmitError
    from spectral_tools.report import Report
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))


# ========================= Records ============================================

@dataclass(frozen=True)
class GrowthRecord:
    """
    One evaluated point of a scenario

    x is a position, or X_INFINITY for values at +inf, or X_SUPREMUM for
    quantities already maximized over x.
    """
    scenario: str
    n: int
    j0: int
    k: float
    x: object
    value: complex
    walltime_ms: float = 0.0

    @property
    def magnitude(self):
        return abs(self.value)

    @property
    def ratio_log_n(self):
        return self.magnitude / math.log(self.n)

    def fields(self):
        value = complex(self.value)
        return (self.scenario, self.n, self.j0, self.k, self.x, value.real, value.imag,
                self.magnitude, self.ratio_log_n, self.walltime_ms)


def format_number(value):
    if isinstance(value, str):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return '{:.17g}'.format(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


# ========================= Writers ============================================

class _Output(object):
    """Context manager over a path, '-' meaning stdout"""

    def __init__(self, path):
        self.path = path
        self.stream = None

    def __enter__(self):
        try:
            if self.path != constants.STDOUT_PATH:
                directory = os.path.dirname(os.path.abspath(self.path))
                if not os.path.isdir(directory):
                    raise EmitError("Cannot write {}: directory {} does not exist".format(self.path, directory))
            self.stream = click.open_file(self.path, 'w')
            return self.stream.__enter__()
        except OSError as e:
            if isinstance(e, EmitError):
                raise
            raise EmitError("Cannot write {}: {}".format(self.path, e.strerror or str(e)))

    def __exit__(self, *args):
        return self.stream.__exit__(*args)


def write_records(records, fmt=constants.FORMAT_CSV, path=constants.STDOUT_PATH):
    with _Output(path) as stream:
        if fmt == constants.FORMAT_CSV:
            writer = csv.writer(stream, lineterminator='\n')
            writer.writerow(constants.CSV_HEADER)
            for record in records:
                writer.writerow([format_number(v) for v in record.fields()])
        elif fmt == constants.FORMAT_JSON:
            rows = [dict(zip(constants.CSV_HEADER, [_json_value(v) for v in record.fields()]))
                    for record in records]
            stream.write(json.dumps(rows, indent=2))
            stream.write('\n')
        else:
            raise EmitError("Unknown output format '{}'".format(fmt))


def write_report(report, fmt=constants.FORMAT_CSV, path=constants.STDOUT_PATH):
    with _Output(path) as stream:
        if fmt == constants.FORMAT_CSV:
            writer = csv.writer(stream, lineterminator='\n')
            writer.writerow(constants.REPORT_CSV_HEADER)
            for item in report:
                writer.writerow([item.check, 'true' if item.passed else 'false',
                                 format_number(item.max_error), format_number(item.tolerance), item.detail])
        elif fmt == constants.FORMAT_JSON:
            items = [dict(zip(constants.REPORT_CSV_HEADER,
                              (item.check, item.passed, _json_value(item.max_error),
                               _json_value(item.tolerance), item.detail)))
                     for item in report]
            stream.write(json.dumps({'passed': report.passed, 'checks': items}, indent=2))
            stream.write('\n')
        else:
            raise EmitError("Unknown output format '{}'".format(fmt))


def emit(payload, fmt=constants.FORMAT_CSV, path=constants.STDOUT_PATH):
    """Write a Report or a list of GrowthRecord in the fixed schema"""
    if isinstance(payload, Report):
        write_report(payload, fmt, path)
    else:
        write_records(payload, fmt, path)


def read_records_json(path):
    """Parse records written by write_records in JSON format"""
    with open(path) as stream:
        rows = json.load(stream)
    records = []
    for row in rows:
        records.append(GrowthRecord(scenario=row['scenario'], n=row['N'], j0=row['j0'], k=row['k'],
                                    x=row['x'], value=complex(row['value_re'], row['value_im']),
                                    walltime_ms=row['walltime_ms']))
    return records


def profile_path(directory, name):
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise EmitError("Cannot create {}: {}".format(directory, e.strerror or str(e)))
    return os.path.join(directory, name)


def dump_profile(directory, name, profile):
    path = profile_path(directory, name)
    try:
        with open(path, 'w') as stream:
            profile.to_csv(stream)
    except OSError as e:
        raise EmitError("Cannot write {}: {}".format(path, e.strerror or str(e)))
    return path


def dump_json(directory, name, payload):
    path = profile_path(directory, name)
    try:
        with open(path, 'w') as stream:
            stream.write(payload)
            stream.write('\n')
    except OSError as e:
        raise EmitError("Cannot write {}: {}".format(path, e.strerror or str(e)))
    return path
