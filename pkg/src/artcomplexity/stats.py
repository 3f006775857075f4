"""Pearson correlation, significance, and correlation matrices.

Correlations use a two-pass computation (means first, then centered
moments) so near-constant measure columns don't lose precision to
cancellation.  Matrix cells are pairwise-complete: rows missing either
variable are dropped for that cell only, and the per-cell sample count is
kept alongside r and p.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import InvalidParameterError, UndefinedMeasureError

MIN_SAMPLES = 3


def pearson(x, y) -> float:
    """Sample Pearson correlation of two equal-length vectors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise InvalidParameterError("pearson needs two 1-D vectors of equal length")
    n = x.size
    if n < MIN_SAMPLES:
        raise InvalidParameterError(f"pearson needs n >= {MIN_SAMPLES}, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedMeasureError("correlation undefined for a constant vector")
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def p_value(r: float, n: int) -> float:
    """Two-tailed p for a Pearson r at sample size n.

    Uses t = r * sqrt((n-2) / (1-r^2)) against the t distribution with
    n-2 degrees of freedom, evaluated with the regularized incomplete
    beta function.
    """
    if n < MIN_SAMPLES:
        raise InvalidParameterError(f"p_value needs n >= {MIN_SAMPLES}, got {n}")
    if not -1.0 <= r <= 1.0:
        raise InvalidParameterError(f"|r| must be <= 1, got {r}")
    if abs(r) == 1.0:
        return 0.0
    df = n - 2
    t2 = r * r * df / (1.0 - r * r)
    return float(special.betainc(df / 2.0, 0.5, df / (df + t2)))


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric pairwise r / p / n over named variables.

    Missing cells (too few complete pairs, or a constant variable) hold
    NaN in r and p, with the attempted n recorded.
    """

    names: tuple[str, ...]
    r: np.ndarray
    p: np.ndarray
    n: np.ndarray

    def cell(self, a: str, b: str) -> tuple[float, float, int]:
        i, j = self.names.index(a), self.names.index(b)
        return float(self.r[i, j]), float(self.p[i, j]), int(self.n[i, j])

    def to_json(self) -> str:
        def clean(mat):
            return [[None if np.isnan(v) else v for v in row] for row in mat.tolist()]

        return json.dumps(
            {
                "variables": list(self.names),
                "r": clean(self.r),
                "p": clean(self.p),
                "n": self.n.tolist(),
            },
            indent=2,
            sort_keys=True,
        )

    def to_csv(self) -> str:
        """Triangular layout: row i lists r values up to the diagonal."""
        lines = ["," + ",".join(self.names)]
        for i, name in enumerate(self.names):
            cells = []
            for j in range(len(self.names)):
                if j > i:
                    cells.append("")
                else:
                    v = self.r[i, j]
                    cells.append("" if np.isnan(v) else f"{v:.6f}")
            lines.append(name + "," + ",".join(cells))
        return "\n".join(lines) + "\n"


def correlation_matrix(columns: dict[str, list[float | None]]) -> CorrelationMatrix:
    """Pairwise-complete correlation matrix over named columns.

    Column values may contain None/NaN for missing entries; each cell uses
    the rows where both of its variables are present.
    """
    names = tuple(columns.keys())
    k = len(names)
    if k == 0:
        raise InvalidParameterError("correlation matrix needs at least one column")
    length = {len(v) for v in columns.values()}
    if len(length) != 1:
        raise InvalidParameterError("all columns must have equal length")

    data = np.full((k, length.pop()), np.nan)
    for i, name in enumerate(names):
        col = [np.nan if v is None else float(v) for v in columns[name]]
        data[i] = col

    r = np.eye(k)
    p = np.zeros((k, k))
    n = np.full((k, k), data.shape[1], dtype=np.int64)
    valid = ~np.isnan(data)
    for i in range(k):
        n[i, i] = int(valid[i].sum())
        for j in range(i):
            both = valid[i] & valid[j]
            count = int(both.sum())
            n[i, j] = n[j, i] = count
            if count < MIN_SAMPLES:
                r[i, j] = r[j, i] = p[i, j] = p[j, i] = np.nan
                continue
            try:
                rij = pearson(data[i, both], data[j, both])
            except UndefinedMeasureError:
                r[i, j] = r[j, i] = p[i, j] = p[j, i] = np.nan
                continue
            r[i, j] = r[j, i] = rij
            p[i, j] = p[j, i] = p_value(rij, count)
    return CorrelationMatrix(names=names, r=r, p=p, n=n)
