"""SAX discretization of real-valued multivariate series into symbolic sequences."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import norm

from .core import AlphabetSpec, Mvs
from .objective import ConfigError


class BreakpointMode(str, enum.Enum):
    GAUSSIAN = "gaussian_equiprobable"
    UNIFORM = "uniform_range"


class Normalization(str, enum.Enum):
    ZSCORE = "per_sequence_per_attribute_zscore"
    NONE = "none"


@dataclass(frozen=True)
class RawSeries:
    id: str
    values: Mapping[str, Sequence[float]]

    @property
    def length(self) -> int:
        return max((len(v) for v in self.values.values()), default=0)


@dataclass(frozen=True)
class SaxConfig:
    alphabet_size: int = 10
    breakpoint_mode: BreakpointMode = BreakpointMode.GAUSSIAN
    paa_window: int = 1
    normalize: Normalization = Normalization.ZSCORE

    def __post_init__(self):
        object.__setattr__(self, "breakpoint_mode", BreakpointMode(self.breakpoint_mode))
        object.__setattr__(self, "normalize", Normalization(self.normalize))
        if self.alphabet_size < 2:
            raise ConfigError("alphabet_size must be >= 2")
        if self.paa_window < 1:
            raise ConfigError("paa_window must be >= 1")

    def as_dict(self) -> dict:
        return {"alphabet_size": self.alphabet_size, "breakpoint_mode": self.breakpoint_mode.value,
                "paa_window": self.paa_window, "normalize": self.normalize.value}


def gaussian_breakpoints(k: int) -> list[float]:
    """Standard-normal quantiles splitting the real line into ``k`` equiprobable bins."""
    if k < 2:
        raise ConfigError("need at least 2 bins")
    return [float(x) for x in norm.ppf(np.arange(1, k) / k)]


def uniform_breakpoints(k: int, lo: float, hi: float) -> list[float]:
    if k < 2:
        raise ConfigError("need at least 2 bins")
    return [lo + i * (hi - lo) / k for i in range(1, k)]


def zscore(x: np.ndarray, eps: float = 1e-12) -> np.ndarray:
    """Zero-mean unit-variance copy; flat series become all zeros."""
    if x.size == 0:
        return x.astype(float)
    std = x.std()
    if std < eps:
        return np.zeros_like(x, dtype=float)
    return (x - x.mean()) / std


def paa(x: np.ndarray, window: int) -> np.ndarray:
    """Window means; a trailing partial window is dropped."""
    m = len(x) // window
    return x[: m * window].reshape(m, window).mean(axis=1)


def symbolize(x: np.ndarray, breakpoints: Sequence[float]) -> np.ndarray:
    """Bin index per value: bin ``k`` covers ``[bp[k-1], bp[k])``."""
    return np.searchsorted(np.asarray(breakpoints), x, side="right")


def discretize_values(x, cfg: SaxConfig, value_range: tuple[float, float] | None = None) -> np.ndarray:
    """Bin indices (0-based) for one real-valued sequence."""
    x = np.asarray(x, dtype=float)
    k = cfg.alphabet_size
    middle = (k - 1) // 2
    if cfg.normalize is Normalization.ZSCORE:
        if x.size and np.ptp(x) == 0:
            return np.full(len(x) // cfg.paa_window, middle)
        x = zscore(x)
    x = paa(x, cfg.paa_window)
    if cfg.breakpoint_mode is BreakpointMode.GAUSSIAN:
        bps = gaussian_breakpoints(k)
    else:
        if value_range is not None:
            lo, hi = value_range
        else:
            lo, hi = (float(x.min()), float(x.max())) if x.size else (0.0, 0.0)
        if hi <= lo:
            return np.full(len(x), middle)
        bps = uniform_breakpoints(k, lo, hi)
    return symbolize(x, bps)


def discretize(series: RawSeries, cfg: SaxConfig = SaxConfig(), alphabet: AlphabetSpec | None = None,
               value_range: Mapping[str, tuple[float, float]] | None = None) -> Mvs:
    """SAX-encode every attribute of ``series``.

    ``value_range`` optionally fixes per-attribute ``(min, max)`` for uniform
    breakpoints (e.g. ranges fitted on a training set); by default each
    sequence uses its own range.
    """
    if alphabet is None:
        alphabet = AlphabetSpec.letters(cfg.alphabet_size)
    if len(alphabet) != cfg.alphabet_size:
        raise ConfigError(f"alphabet has {len(alphabet)} symbols but alphabet_size is {cfg.alphabet_size}")
    lengths = {len(v) for v in series.values.values()}
    if len(lengths) > 1:
        raise ValueError(f"{series.id}: attributes have different lengths {sorted(lengths)}")
    out = {}
    for attr, vals in series.values.items():
        rng = value_range.get(attr) if value_range else None
        bins = discretize_values(vals, cfg, rng)
        out[attr] = tuple(alphabet.symbols[b] for b in bins)
    return Mvs(series.id, out)
