"""MSE 结果表与 CSV 导出"""
import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

CSV_COLUMNS = ['graph', 'noise', 'band', 'domain', 'method', 'mse_db', 'std_db', 'trials']
EXTRA_COLUMNS = ['analytic_db', 'failed']

# dB of an exactly zero error
DB_FLOOR = 1e-30


def to_db(value) -> np.ndarray:
    return 10.0 * np.log10(np.maximum(value, DB_FLOOR))


def noise_label(sigma2: float) -> str:
    return f"{sigma2:g}"


def _fmt(value: float) -> str:
    return f"{value:.4g}"


@dataclass(frozen=True)
class MseRow:
    """One (graph, noise, band, domain, method) cell."""
    graph: str
    noise: str
    band: str
    domain: str
    method: str
    mse_db: float
    std_db: float
    trials: int
    mse_mean: float = math.nan
    mse_std: float = math.nan
    analytic_mean: float = math.nan
    failed: int = 0

    @property
    def key(self):
        return (self.graph, self.noise, self.band, self.domain, self.method)

    @property
    def analytic_db(self) -> float:
        return float(to_db(self.analytic_mean)) if not math.isnan(self.analytic_mean) else math.nan

    def standard_error(self) -> float:
        used = self.trials - self.failed
        return self.mse_std / math.sqrt(used) if used > 0 else math.nan


@dataclass
class MseTable:
    rows: List[MseRow] = field(default_factory=list)

    def add(self, row: MseRow) -> None:
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    def lookup(self, graph: str, noise: str, band: str, domain: str, method: str) -> Optional[MseRow]:
        for row in self.rows:
            if row.key == (graph, noise, band, domain, method):
                return row
        return None

    def select(self, **filters) -> List[MseRow]:
        """Rows whose attributes equal every keyword filter."""
        return [r for r in self.rows if all(getattr(r, k) == v for k, v in filters.items())]


def to_csv(table: MseTable, extra: bool = False) -> str:
    """
    表格导出为 CSV 文本

    Args:
        extra: append the analytic_db and failed columns
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(CSV_COLUMNS + (EXTRA_COLUMNS if extra else []))
    for r in table.rows:
        record = [r.graph, r.noise, r.band, r.domain, r.method, _fmt(r.mse_db), _fmt(r.std_db), r.trials]
        if extra:
            record += [_fmt(r.analytic_db), r.failed]
        writer.writerow(record)
    return buf.getvalue()


def parse_csv(text: str) -> MseTable:
    """Inverse of ``to_csv`` for the columns it writes."""
    table = MseTable()
    for rec in csv.DictReader(io.StringIO(text)):
        mse_db = float(rec['mse_db'])
        analytic_db = rec.get('analytic_db')
        table.add(MseRow(
            graph=rec['graph'],
            noise=rec['noise'],
            band=rec['band'],
            domain=rec['domain'],
            method=rec['method'],
            mse_db=mse_db,
            std_db=float(rec['std_db']),
            trials=int(rec['trials']),
            mse_mean=10.0 ** (mse_db / 10.0),
            analytic_mean=10.0 ** (float(analytic_db) / 10.0) if analytic_db else math.nan,
            failed=int(rec.get('failed') or 0),
        ))
    return table


def write_csv(table: MseTable, path: Union[str, Path], extra: bool = False) -> None:
    Path(path).write_text(to_csv(table, extra=extra), encoding='utf-8', newline='')


def read_csv(path: Union[str, Path]) -> MseTable:
    return parse_csv(Path(path).read_text(encoding='utf-8'))
