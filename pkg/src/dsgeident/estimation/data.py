"""Observable datasets for likelihood-based estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from ..errors import MissingColumnError, ParseError

Array = NDArray[np.float64]

SMALL_COLUMNS = ("YGR", "INFL", "INT")


@dataclass(frozen=True)
class Dataset:
    """T x n_Y observable panel with optional date labels."""

    values: Array
    columns: tuple[str, ...]
    dates: tuple[str, ...] = ()
    demeaned: bool = False

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise ParseError("observables must be a 2-D panel")
        if np.isnan(v).any():
            t, c = np.argwhere(np.isnan(v))[0]
            raise ParseError(f"missing value at row {t + 1}, column {self.columns[c]}")
        if self.demeaned:
            worst = np.abs(v.mean(axis=0)).max()
            if worst > 1e-10:
                raise ParseError(f"demeaned flag set but column mean {worst:.2e} != 0")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "dates", tuple(self.dates))

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def n_obs(self) -> int:
        return self.values.shape[1]


def load_observables(path, demean: bool = False, columns=None) -> Dataset:
    """Read an observables CSV (header row, numeric columns).

    A leading non-numeric column is treated as date labels.  ``columns``
    restricts and orders the variables; a missing name raises
    MissingColumnError, a non-numeric cell raises ParseError naming it.
    """
    try:
        frame = pd.read_csv(path)
    except Exception as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if frame.shape[1] == 0 or frame.shape[0] == 0:
        raise ParseError(f"{path}: empty file")

    dates: tuple[str, ...] = ()
    first = frame.columns[0]
    if frame[first].dtype == object and (columns is None or first not in columns):
        dates = tuple(str(x) for x in frame[first])
        frame = frame.drop(columns=[first])

    if columns is not None:
        missing = [c for c in columns if c not in frame.columns]
        if missing:
            raise MissingColumnError(
                f"{path}: missing column(s) {missing}; found {list(frame.columns)}"
            )
        frame = frame[list(columns)]

    values = np.empty(frame.shape, dtype=float)
    for j, col in enumerate(frame.columns):
        converted = pd.to_numeric(frame[col], errors="coerce")
        bad = np.flatnonzero(converted.isna().to_numpy() & frame[col].notna().to_numpy())
        if converted.isna().any():
            row = int(converted.index[converted.isna()][0])
            cell = frame[col].iloc[row] if row < len(frame) else "NaN"
            raise ParseError(
                f"{path}: non-numeric cell {cell!r} at row {row + 2}, column {col!r}"
            )
        values[:, j] = converted.to_numpy()

    if demean:
        values = values - values.mean(axis=0, keepdims=True)
    return Dataset(
        values=values,
        columns=tuple(str(c) for c in frame.columns),
        dates=dates,
        demeaned=demean,
    )
