"""Verification reports, their JSON form and the summary table."""
import pandas as pd
from rich.console import Console
from rich.table import Table

from ..utils.errors import DomainError
from ..utils.json_encoder import dumps

STATUSES = ('pass', 'fail', 'unsupported')


class VerificationReport:
    """Outcome of one check; failures carry what is needed to reproduce them."""

    def __init__(self, check, n, rng_seed=None, status='pass', details=None):
        if status not in STATUSES:
            raise DomainError(f'unknown report status {status!r}')
        self.check = check
        self.n = n
        self.rng_seed = rng_seed
        self.status = status
        self.details = dict(details or {})
        self.failures = []

    @property
    def passed(self):
        return self.status == 'pass'

    def fail(self, reason, **reproducer):
        """Record a failure; the first one flips the status."""
        self.status = 'fail'
        entry = {'reason': reason, 'seed': self.rng_seed}
        entry.update(reproducer)
        self.failures.append(entry)
        return self

    def expect(self, condition, reason, **reproducer):
        if not condition:
            self.fail(reason, **reproducer)
        return bool(condition)

    def unsupported(self, reason):
        self.status = 'unsupported'
        self.details['reason'] = reason
        return self

    def to_dict(self):
        details = dict(self.details)
        if self.failures:
            details['failures'] = self.failures
        return {
            'check': self.check,
            'n': self.n,
            'seed': self.rng_seed,
            'status': self.status,
            'details': details,
        }

    def to_json(self, indent=2):
        return dumps(self.to_dict(), indent=indent)

    def __repr__(self):
        return f'VerificationReport({self.check}, n={self.n}, status={self.status})'


def sort_reports(reports):
    return sorted(reports, key=lambda r: (r.check, r.n if r.n is not None else -1))


def reports_to_json(reports, indent=2):
    return dumps([r.to_dict() for r in sort_reports(reports)], indent=indent)


def summary_frame(reports):
    rows = [
        {
            'check': r.check,
            'n': r.n,
            'seed': r.rng_seed,
            'status': r.status,
            'failures': len(r.failures),
        }
        for r in sort_reports(reports)
    ]
    return pd.DataFrame(rows, columns=['check', 'n', 'seed', 'status', 'failures'])


def render_table(reports, console=None, title='verification summary'):
    console = console or Console(stderr=True)
    frame = summary_frame(reports)
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(column, justify='right' if column in ('n', 'seed', 'failures') else 'left')
    styles = {'pass': 'green', 'fail': 'bold red', 'unsupported': 'yellow'}
    for record in frame.itertuples(index=False):
        cells = [str(v) for v in record]
        cells[3] = f'[{styles[record.status]}]{record.status}[/]'
        table.add_row(*cells)
    console.print(table)
    return table


def exit_code(reports):
    """0 when every check passed, 1 on any failure, 2 when something was unsupported."""
    statuses = {r.status for r in reports}
    if 'fail' in statuses:
        return 1
    if 'unsupported' in statuses:
        return 2
    return 0
