"""Validated dataset containers and CSV ingestion.

The canonical CSV schema has a header row with columns
``time,event,treatment,<covariate...>`` (names remappable). Numeric output
uses 17 significant digits so that write -> read round-trips are
bit-identical for float64 values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import ConfigurationError, DataError, UsageError

FLOAT_FORMAT = "%.17g"


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SurvivalDataset:
    """Right-censored two-arm dataset.

    Attributes
    ----------
    covariates : (n, p) float array, no intercept column.
    treatment : (n,) int array of arm labels in {0, 1}.
    time : (n,) float array of observed times, min(failure, censoring).
    event : (n,) int array, 1 = failure observed, 0 = censored.
    covariate_names : p column labels.
    """

    covariates: np.ndarray
    treatment: np.ndarray
    time: np.ndarray
    event: np.ndarray
    covariate_names: tuple[str, ...]

    def __post_init__(self):
        X = np.asarray(self.covariates, dtype=float)
        if X.ndim != 2:
            raise DataError("covariates must be a 2-D matrix")
        a = np.asarray(self.treatment)
        t = np.asarray(self.time, dtype=float)
        d = np.asarray(self.event)
        n = X.shape[0]
        if not (len(a) == len(t) == len(d) == n):
            raise DataError("covariates, treatment, time, event lengths differ")
        if n < 2:
            raise DataError(f"need at least 2 subjects, got {n}")
        if len(self.covariate_names) != X.shape[1]:
            raise DataError("covariate_names length does not match covariate count")
        if not np.all(np.isfinite(X)):
            raise DataError("covariates contain non-finite values")
        if not np.all(np.isfinite(t)):
            raise DataError("times contain non-finite values")
        if np.any(t < 0):
            rows = np.flatnonzero(t < 0)
            raise DataError(f"negative time at data row {rows[0] + 1}")
        for name, v in (("treatment", a), ("event", d)):
            fv = np.asarray(v, dtype=float)
            if not np.all(np.isfinite(fv)) or not np.all(np.isin(fv, (0.0, 1.0))):
                bad = np.flatnonzero(~np.isin(fv, (0.0, 1.0)))
                raise DataError(f"{name} outside {{0,1}} at data row {bad[0] + 1}")
        a = np.asarray(a, dtype=np.int64) if a.dtype != np.int64 else a
        d = np.asarray(d, dtype=np.int64) if d.dtype != np.int64 else d
        n1 = int(np.sum(a == 1))
        if n1 == 0 or n1 == n:
            raise DataError("both treatment arms must be nonempty")
        object.__setattr__(self, "covariates", _frozen(X))
        object.__setattr__(self, "treatment", _frozen(a.astype(np.int64)))
        object.__setattr__(self, "time", _frozen(t))
        object.__setattr__(self, "event", _frozen(d.astype(np.int64)))
        object.__setattr__(self, "covariate_names", tuple(str(c) for c in self.covariate_names))

    @property
    def n(self) -> int:
        return self.covariates.shape[0]

    @property
    def p(self) -> int:
        return self.covariates.shape[1]

    def arm_mask(self, arm: int) -> np.ndarray:
        return self.treatment == arm

    def subset(self, mask: np.ndarray) -> "SurvivalDataset":
        """Row subset (boolean mask or index array); revalidates invariants."""
        return SurvivalDataset(
            covariates=self.covariates[mask],
            treatment=self.treatment[mask],
            time=self.time[mask],
            event=self.event[mask],
            covariate_names=self.covariate_names,
        )

    def write_csv(self, path, time_col="time", event_col="event", treatment_col="treatment"):
        """Write the canonical CSV schema at full (17 significant digit) precision."""
        df = pd.DataFrame({time_col: self.time, event_col: self.event, treatment_col: self.treatment})
        for j, name in enumerate(self.covariate_names):
            df[name] = self.covariates[:, j]
        df.to_csv(path, index=False, float_format=FLOAT_FORMAT)

    def equals(self, other: "SurvivalDataset") -> bool:
        return (
            self.covariate_names == other.covariate_names
            and np.array_equal(self.covariates, other.covariates)
            and np.array_equal(self.treatment, other.treatment)
            and np.array_equal(self.time, other.time)
            and np.array_equal(self.event, other.event)
        )


def load_csv(
    path,
    time_col: str = "time",
    event_col: str = "event",
    treatment_col: str = "treatment",
    covariate_cols: list[str] | None = None,
) -> SurvivalDataset:
    """Load and validate a dataset CSV.

    ``covariate_cols=None`` takes every column not mapped to time/event/
    treatment, in file order. Rejects missing and non-numeric cells with the
    offending 1-based data row in the message.
    """
    try:
        df = pd.read_csv(path)
    except FileNotFoundError:
        raise ConfigurationError(f"input file not found: {path}")
    except pd.errors.EmptyDataError:
        raise DataError(f"input file is empty: {path}")

    for role, col in (("time", time_col), ("event", event_col), ("treatment", treatment_col)):
        if col not in df.columns:
            raise ConfigurationError(f"missing {role} column '{col}'")
    if covariate_cols is None:
        covariate_cols = [c for c in df.columns if c not in (time_col, event_col, treatment_col)]
    else:
        for col in covariate_cols:
            if col not in df.columns:
                raise ConfigurationError(f"missing covariate column '{col}'")
    if not covariate_cols:
        raise ConfigurationError("no covariate columns")

    def numeric(col):
        raw = df[col]
        vals = pd.to_numeric(raw, errors="coerce")
        bad = vals.isna()
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            kind = "missing value" if pd.isna(raw.iloc[row]) else f"non-numeric value '{raw.iloc[row]}'"
            raise DataError(f"{kind} in column '{col}' at data row {row + 1}")
        return vals.to_numpy(dtype=float)

    time = numeric(time_col)
    event = numeric(event_col)
    treatment = numeric(treatment_col)
    X = np.column_stack([numeric(c) for c in covariate_cols])
    return SurvivalDataset(
        covariates=X,
        treatment=treatment,
        time=time,
        event=event,
        covariate_names=tuple(covariate_cols),
    )


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing evaluation times starting at 0."""

    times: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or len(t) == 0:
            raise UsageError("time grid must be a nonempty 1-D sequence")
        if t[0] != 0.0:
            raise UsageError("time grid must start at 0")
        if not np.all(np.isfinite(t)) or np.any(np.diff(t) <= 0):
            raise UsageError("time grid must be finite and strictly increasing")
        object.__setattr__(self, "times", _frozen(t))

    @classmethod
    def from_times(cls, times) -> "TimeGrid":
        """Build a grid from arbitrary nonnegative times; 0 is prepended, duplicates dropped."""
        t = np.asarray(times, dtype=float).ravel()
        if np.any(~np.isfinite(t)) or np.any(t < 0):
            raise UsageError("grid times must be finite and nonnegative")
        return cls(np.unique(np.concatenate(([0.0], t))))

    @property
    def t_max(self) -> float:
        return float(self.times[-1])

    def __len__(self) -> int:
        return len(self.times)


def default_time_grid(dataset: SurvivalDataset) -> TimeGrid:
    """Grid of {0} plus the distinct observed event times."""
    events = dataset.time[dataset.event == 1]
    if events.size == 0:
        raise DataError("no observed events; cannot build a default time grid")
    return TimeGrid.from_times(events)


@dataclass(frozen=True)
class DesignMatrix:
    """Intercept-augmented design with per-column standardization constants.

    ``values`` is on the original covariate scale (column 0 all ones).
    Continuous columns are centered/scaled internally for solver
    conditioning; binary (0/1-valued) columns and the intercept are left
    alone. Fitted coefficients are always reported on the original scale.
    """

    values: np.ndarray
    center: np.ndarray = field(repr=False)
    scale: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or not np.all(v[:, 0] == 1.0):
            raise UsageError("design matrix must be 2-D with an all-ones first column")
        object.__setattr__(self, "values", _frozen(v))
        object.__setattr__(self, "center", _frozen(np.asarray(self.center, dtype=float)))
        object.__setattr__(self, "scale", _frozen(np.asarray(self.scale, dtype=float)))

    @classmethod
    def from_covariates(cls, X: np.ndarray) -> "DesignMatrix":
        X = np.asarray(X, dtype=float)
        n, p = X.shape
        values = np.column_stack([np.ones(n), X])
        center = np.zeros(p + 1)
        scale = np.ones(p + 1)
        for j in range(p):
            col = X[:, j]
            if np.all(np.isin(col, (0.0, 1.0))):
                continue
            sd = float(np.std(col))
            center[j + 1] = float(np.mean(col))
            scale[j + 1] = sd if sd > 0 else 1.0
        return cls(values=values, center=center, scale=scale)

    @property
    def n_params(self) -> int:
        return self.values.shape[1]

    def standardized(self) -> np.ndarray:
        return (self.values - self.center) / self.scale

    def coef_to_original(self, beta_std: np.ndarray) -> np.ndarray:
        """Map coefficients fitted on the standardized design back to the original scale."""
        beta_std = np.asarray(beta_std, dtype=float)
        beta = beta_std / self.scale
        beta[0] = beta_std[0] - float(np.sum(beta_std[1:] * self.center[1:] / self.scale[1:]))
        return beta

    def coef_to_standardized(self, beta: np.ndarray) -> np.ndarray:
        beta = np.asarray(beta, dtype=float)
        beta_std = beta * self.scale
        beta_std[0] = beta[0] + float(np.sum(beta[1:] * self.center[1:]))
        return beta_std
