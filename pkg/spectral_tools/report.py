"""
Pass/fail reports shared by every verification in the package
"""

import math
from dataclasses import dataclass

from tabulate import tabulate


@dataclass(frozen=True)
class ReportItem:
    check: str
    max_error: float
    tolerance: float
    detail: str = ''

    @property
    def passed(self):
        # nan never passes
        return bool(self.max_error <= self.tolerance)

    @property
    def severity(self):
        if not self.passed:
            if math.isnan(self.max_error):
                return math.inf
        if self.tolerance == 0:
            return 0.0 if self.max_error == 0 else math.inf
        return self.max_error / self.tolerance


class Report(object):
    """
    Ordered list of checks

    A report passes when every item passes; its max error and tolerance are
    those of the item closest to (or furthest beyond) its own tolerance.
    """

    def __init__(self, items=None):
        self.items = list(items or [])

    def check(self, name, max_error, tolerance, detail=''):
        self.items.append(ReportItem(name, float(max_error), float(tolerance), detail))
        return self

    def fail(self, name, detail):
        return self.check(name, math.nan, 0.0, detail)

    def extend(self, other, prefix=None):
        for item in other.items:
            name = item.check if prefix is None else '{}/{}'.format(prefix, item.check)
            self.items.append(ReportItem(name, item.max_error, item.tolerance, item.detail))
        return self

    @property
    def passed(self):
        return bool(self.items) and all(item.passed for item in self.items)

    @property
    def worst(self):
        if not self.items:
            return None
        return max(self.items, key=lambda item: item.severity)

    @property
    def max_error(self):
        worst = self.worst
        return math.nan if worst is None else worst.max_error

    @property
    def tolerance(self):
        worst = self.worst
        return math.nan if worst is None else worst.tolerance

    @property
    def failures(self):
        return [item for item in self.items if not item.passed]

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def table(self):
        header = ['Check', 'Status', 'Max error', 'Tolerance', 'Detail']
        body = []
        for item in self.items:
            body.append([item.check, 'OK' if item.passed else 'FAILED',
                         '{:.3e}'.format(item.max_error), '{:.3e}'.format(item.tolerance), item.detail])
        return tabulate(body, header, tablefmt='simple', disable_numparse=True)
