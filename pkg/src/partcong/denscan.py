"""Empirical density of n <= X with coefficient(n) = 0 (mod u).

Counts run over 1 <= n <= X so that density(u=1) is exactly 1.  Densities are
stored as exact fractions; nothing here asserts a limit.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .qseries import Domain, TruncatedSeries
from .sequences import SequenceSpec, coefficients

__all__ = ["DensityRow", "DensityTable", "density_scan", "X_MAX_DEFAULT", "X_MAX_CAP"]

X_MAX_DEFAULT = 100_000
X_MAX_CAP = 1_000_000


@dataclass(frozen=True)
class DensityRow:
    X: int
    count: int
    density: Fraction


@dataclass(frozen=True)
class DensityTable:
    spec: str
    u: int
    rows: tuple[DensityRow, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["X", "count", "density_num", "density_den"])
        for r in self.rows:
            w.writerow([r.X, r.count, r.density.numerator, r.density.denominator])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, spec: str, u: int) -> DensityTable:
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            rows.append(
                DensityRow(
                    int(rec["X"]),
                    int(rec["count"]),
                    Fraction(int(rec["density_num"]), int(rec["density_den"])),
                )
            )
        return cls(spec, u, tuple(rows))

    def densities(self) -> list[Fraction]:
        return [r.density for r in self.rows]


def density_scan(
    spec: str | SequenceSpec,
    u: int,
    X_max: int = X_MAX_DEFAULT,
    checkpoints: Sequence[int] | None = None,
    series: TruncatedSeries | None = None,
) -> DensityTable:
    spec = SequenceSpec.of(spec)
    if checkpoints is None:
        checkpoints = [X_max]
    checkpoints = list(checkpoints)
    if u < 1:
        raise ValueError(f"modulus must be positive, got {u}")
    if X_max > X_MAX_CAP:
        raise ValueError(f"X_max={X_max} exceeds the cap {X_MAX_CAP}")
    if checkpoints != sorted(checkpoints) or not checkpoints or checkpoints[0] < 1 or checkpoints[-1] > X_max:
        raise ValueError("checkpoints must be sorted, positive and <= X_max")

    if u == 1:
        zero = np.ones(X_max, dtype=bool)
    else:
        if series is None:
            series = coefficients(spec, X_max, Domain.mod(u))
        c = series.coeffs[1 : X_max + 1]
        zero = np.array([int(v) % u == 0 for v in c]) if c.dtype == object else (c % u == 0)
    running = np.cumsum(zero)
    rows = tuple(DensityRow(X, int(running[X - 1]), Fraction(int(running[X - 1]), X)) for X in checkpoints)
    return DensityTable(str(spec), u, rows)
