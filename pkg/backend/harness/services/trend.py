"""
Least-squares trend of total iterations against key size.
"""
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from ..exceptions import DegenerateFitError


@dataclass(frozen=True)
class TrendFit:
    slope: float
    intercept: float
    residual: float
    deviations: Tuple[float, ...]
    normal_residual: float

    def predict(self, key_size: float) -> float:
        return self.slope * key_size + self.intercept

    def as_dict(self) -> dict:
        return {
            'slope': self.slope,
            'intercept': self.intercept,
            'residual': self.residual,
            'deviations': list(self.deviations),
        }

    def equation(self) -> str:
        sign = '+' if self.intercept >= 0 else '-'
        return f"TI = {self.slope:.3f}|K| {sign} {abs(self.intercept):.3f}"


def _points(records: Iterable) -> Tuple[np.ndarray, np.ndarray]:
    xs, ys = [], []
    for item in records:
        if hasattr(item, 'key_size'):
            xs.append(item.key_size)
            ys.append(item.total_iters)
        else:
            x, y = item
            xs.append(x)
            ys.append(y)
    return np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)


def fit_linear(records: Sequence) -> TrendFit:
    """
    Ordinary least squares of TI on |K|. Accepts SweepRecords or (x, y) pairs.
    """
    x, y = _points(records)
    if len(x) < 2:
        raise DegenerateFitError(f"a line needs at least 2 points, got {len(x)}")
    if np.ptp(x) == 0:
        raise DegenerateFitError("every point has the same key size")
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    deviations = y - design @ np.array([slope, intercept])
    normal = design.T @ deviations
    return TrendFit(
        slope=float(slope),
        intercept=float(intercept),
        residual=float(np.sum(deviations ** 2)),
        deviations=tuple(float(d) for d in deviations),
        normal_residual=float(np.max(np.abs(normal))),
    )
