"""Quasi-periodic MSD signals f(t) = sum a_n (1 - cos(nu_n t))."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# term count at which evaluation switches to exactly rounded summation
FSUM_THRESHOLD = 10_000
_CHUNK = 2_000_000


class SignalFormatError(ValueError):
    """Malformed signal or curve file."""


@dataclass(frozen=True)
class QuasiPeriodicSignal:
    a: np.ndarray
    nu: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float).ravel()
        nu = np.array(self.nu, dtype=float).ravel()
        if a.shape != nu.shape:
            raise ValueError("a and nu must have the same length")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(nu))):
            raise ValueError("amplitudes and frequencies must be finite")
        if np.any(a < 0):
            raise ValueError("amplitudes must be nonnegative")
        if np.any(nu <= 0):
            raise ValueError("frequencies must be positive")
        a.setflags(write=False)
        nu.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "nu", nu)

    @classmethod
    def from_terms(cls, terms) -> QuasiPeriodicSignal:
        terms = list(terms)
        if not terms:
            return cls(np.empty(0), np.empty(0))
        a, nu = zip(*terms)
        return cls(np.array(a), np.array(nu))

    @property
    def terms(self) -> list[tuple[float, float]]:
        return list(zip(self.a.tolist(), self.nu.tolist()))

    def __len__(self) -> int:
        return self.a.size

    def concat(self, other: QuasiPeriodicSignal) -> QuasiPeriodicSignal:
        return QuasiPeriodicSignal(np.concatenate([self.a, other.a]),
                                   np.concatenate([self.nu, other.nu]))

    @property
    def total_amplitude(self) -> float:
        return math.fsum(self.a)


@dataclass(frozen=True)
class SampledCurve:
    t: np.ndarray
    f: np.ndarray
    T: float

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        f = np.asarray(self.f, dtype=float)
        if t.shape != f.shape or t.ndim != 1:
            raise ValueError("t and f must be 1-d arrays of equal length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ValueError("sample times must be strictly increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "f", f)


def eval_signal(sig: QuasiPeriodicSignal, t):
    """Evaluate the signal at scalar or array t.

    Uses 1 - cos(x) = 2 sin^2(x/2), which keeps small-t values accurate.
    """
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)):
        raise ValueError("t must be finite")
    flat = t_arr.ravel()
    out = np.empty(flat.size)
    n = len(sig)
    if n == 0:
        out[:] = 0.0
    elif n >= FSUM_THRESHOLD:
        for i, ti in enumerate(flat):
            s = np.sin(0.5 * sig.nu * ti)
            out[i] = 2.0 * math.fsum(sig.a * s * s)
    else:
        rows = max(1, _CHUNK // n)
        for start in range(0, flat.size, rows):
            ts = flat[start:start + rows, None]
            s = np.sin(0.5 * sig.nu[None, :] * ts)
            out[start:start + rows] = 2.0 * (s * s) @ sig.a
    out = out.reshape(t_arr.shape)
    return out if out.ndim else float(out)


def curious_signal(n_terms: int) -> QuasiPeriodicSignal:
    """a_n = 1/n^2, nu_n = 2 pi n^2 for n = 1..n_terms; symmetric about t = 1/2."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    n = np.arange(1, n_terms + 1, dtype=float)
    return QuasiPeriodicSignal(1.0 / n**2, 2.0 * np.pi * n**2)


def sample_curve(sig: QuasiPeriodicSignal, T: float, n_points: int) -> SampledCurve:
    if not T > 0:
        raise ValueError("T must be positive")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    t = np.linspace(0.0, T, n_points)
    return SampledCurve(t=t, f=eval_signal(sig, t), T=float(T))


def bml_divergence_diagnostic(sig: QuasiPeriodicSignal) -> np.ndarray:
    """Running partial sums of a_n * nu_n in the given term order.

    Growth diagnostic only: a finite truncation never diverges.
    """
    return np.cumsum(sig.a * sig.nu)


# --- file formats ---------------------------------------------------------

def read_signal_csv(path) -> QuasiPeriodicSignal:
    path = Path(path)
    a, nu = [], []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["a", "nu"]:
            raise SignalFormatError(f"{path}: line 1: expected header 'a,nu', got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise SignalFormatError(f"{path}: line {lineno}: expected 2 fields, got {len(row)}")
            try:
                ai, ni = float(row[0]), float(row[1])
            except ValueError:
                raise SignalFormatError(f"{path}: line {lineno}: non-numeric field in {row!r}") from None
            if not (math.isfinite(ai) and math.isfinite(ni)):
                raise SignalFormatError(f"{path}: line {lineno}: non-finite value")
            if ai < 0:
                raise SignalFormatError(f"{path}: line {lineno}, field a: amplitude must be >= 0")
            if ni <= 0:
                raise SignalFormatError(f"{path}: line {lineno}, field nu: frequency must be > 0")
            a.append(ai)
            nu.append(ni)
    if not a:
        raise SignalFormatError(f"{path}: no terms")
    return QuasiPeriodicSignal(np.array(a), np.array(nu))


def write_signal_csv(sig: QuasiPeriodicSignal, path) -> None:
    with Path(path).open("w", newline="") as fh:
        fh.write("a,nu\n")
        for a, nu in sig.terms:
            fh.write(f"{a:.17g},{nu:.17g}\n")


def write_curve_csv(curve: SampledCurve, path, fmt: str = ".12g") -> None:
    with Path(path).open("w", newline="") as fh:
        fh.write("t,f\n")
        for t, f in zip(curve.t.tolist(), curve.f.tolist()):
            fh.write(f"{t:{fmt}},{f:{fmt}}\n")


def read_curve_csv(path) -> SampledCurve:
    path = Path(path)
    t, f = [], []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["t", "f"]:
            raise SignalFormatError(f"{path}: line 1: expected header 't,f'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                t.append(float(row[0]))
                f.append(float(row[1]))
            except (ValueError, IndexError):
                raise SignalFormatError(f"{path}: line {lineno}: bad row {row!r}") from None
    if len(t) < 2:
        raise SignalFormatError(f"{path}: need at least 2 samples")
    return SampledCurve(t=np.array(t), f=np.array(f), T=t[-1])
