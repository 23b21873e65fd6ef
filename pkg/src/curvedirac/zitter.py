"""Zitterbewegung detection in a centre-of-mass time series."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_time_grid

__all__ = ["ZBResult", "zb_analysis", "spectral_amplitude", "envelope", "detrend"]

NOISE_FLOOR = 1e-9


@dataclass(frozen=True)
class ZBResult:
    """Dominant oscillation of detrended <x>(t).

    ``frequency`` is angular (rad per unit time); it is NaN when no peak
    rises above the noise floor, in which case ``has_zb`` is False.
    ``amplitude`` is the largest value of the demodulated envelope, i.e. the
    oscillation amplitude before dephasing of the momentum components sets
    in.  ``spectral_amplitude`` is the Hann-window average over the record.
    """

    frequency: float
    amplitude: float
    has_zb: bool
    spectral_amplitude: float = 0.0


def _uniform_step(t: np.ndarray) -> float:
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0):
        raise ValueError("ZB analysis needs uniformly sampled times")
    return float(dt[0])


def detrend(t, x) -> np.ndarray:
    """Remove the least-squares straight line from ``x(t)``."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    coef = np.polyfit(t - t.mean(), x, 1)
    return x - np.polyval(coef, t - t.mean())


def spectral_amplitude(t, x, omega: float) -> float:
    """Hann-windowed amplitude of detrended ``x(t)`` at angular frequency ``omega``."""
    t = check_time_grid(t, "t")
    y = detrend(t, x)
    w = np.hanning(t.size)
    return float(2 * np.abs(np.sum(w * y * np.exp(-1j * omega * (t - t[0])))) / w.sum())


def envelope(t, x, omega: float) -> np.ndarray:
    """Amplitude envelope of detrended ``x(t)`` demodulated at ``omega``.

    The demodulated signal is averaged over one oscillation period, which
    removes the counter-rotating term; the result is sampled at the window
    centres (``len(t) - period + 1`` values).
    """
    t = check_time_grid(t, "t")
    dt = _uniform_step(t)
    y = detrend(t, x)
    period = max(1, int(round(2 * np.pi / (omega * dt))))
    if period > t.size:
        raise ValueError("record shorter than one oscillation period")
    z = y * np.exp(-1j * omega * (t - t[0]))
    kernel = np.full(period, 1.0 / period)
    return 2 * np.abs(np.convolve(z, kernel, mode="valid"))


def zb_analysis(t, x, pad: int = 8, min_cycles: float = 4.0, noise_floor: float = NOISE_FLOOR) -> ZBResult:
    """Locate the dominant spectral peak of detrended, Hann-windowed ``x(t)``.

    The spectrum is zero padded by ``pad`` and the peak is refined by
    parabolic interpolation of the log magnitude.  Frequencies below
    ``min_cycles`` cycles per record are ignored (detrending residue).
    """
    t = check_time_grid(t, "t")
    x = np.asarray(x, dtype=float)
    if x.shape != t.shape or t.size < 8:
        raise ValueError("need matching t and x with at least 8 samples")
    dt = _uniform_step(t)
    y = detrend(t, x)
    w = np.hanning(t.size)
    nfft = 1 << int(np.ceil(np.log2(pad * t.size)))
    spec = np.abs(np.fft.rfft(y * w, nfft))
    omega = 2 * np.pi * np.fft.rfftfreq(nfft, dt)
    record = t[-1] - t[0]
    usable = omega >= 2 * np.pi * min_cycles / record
    if not np.any(usable):
        return ZBResult(float("nan"), 0.0, False)
    idx = np.flatnonzero(usable)[np.argmax(spec[usable])]
    peak = spec[idx]
    freq = omega[idx]
    if 0 < idx < spec.size - 1 and peak > 0:
        a, b, c = np.log(np.maximum(spec[idx - 1 : idx + 2], 1e-300))
        denom = a - 2 * b + c
        if denom < 0:
            delta = 0.5 * (a - c) / denom
            freq = omega[idx] + delta * (omega[1] - omega[0])
            peak = np.exp(b - 0.25 * (a - c) * delta)
    spectral = float(2 * peak / w.sum())
    amplitude = float(envelope(t, x, freq).max())
    if amplitude < noise_floor:
        return ZBResult(float("nan"), 0.0, False, spectral)
    return ZBResult(float(freq), amplitude, True, spectral)
