"""Classical noise sources: 1/f charge detuning and quasistatic nuclear fields.

All randomness is drawn from Philox generators keyed by a 64-bit seed plus a
tuple stream id, so a sample depends only on ``(seed, stream)`` and never on
how many samples were drawn before it or on which worker drew it.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit
from scipy.signal import find_peaks

from .hubbard import NuclearFields

__all__ = [
    "rng_for",
    "OneOverFConfig",
    "NoiseTrace",
    "TunnelingProfile",
    "gen_one_over_f",
    "tunneling_at",
    "sample_nuclear",
    "EnvelopeFit",
    "fit_envelope_decay",
    "CalibrationError",
    "CalibrationResult",
    "calibrate_amplitude",
    "STREAM_CHARGE",
    "STREAM_NUCLEAR",
]

log = logging.getLogger(__name__)

STREAM_NUCLEAR = 0
STREAM_CHARGE = 1

PROFILE_WIDTH = 0.01


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for the ``(seed, stream)`` pair."""
    if not 0 <= int(seed) < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class OneOverFConfig:
    """Band-limited 1/f noise.

    ``f_min`` defaults to the inverse record length and ``f_max`` to the
    Nyquist frequency.  Frequencies are in inverse scaled time.
    """

    amplitude: float
    n_samples: int
    dt: float
    f_min: float | None = None
    f_max: float | None = None
    seed: int = 0
    stream: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError("n_samples must be at least 2")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")
        lo, hi = self.band
        if not 0 < lo < hi <= self.nyquist * (1 + 1e-12):
            raise ValueError(f"invalid band [{lo}, {hi}] (Nyquist {self.nyquist})")

    @property
    def nyquist(self) -> float:
        return 0.5 / self.dt

    @property
    def band(self) -> tuple[float, float]:
        lo = self.f_min if self.f_min is not None else 1.0 / (self.n_samples * self.dt)
        hi = self.f_max if self.f_max is not None else self.nyquist
        return float(lo), float(hi)


@dataclass(frozen=True)
class NoiseTrace:
    values: np.ndarray
    config: OneOverFConfig

    @property
    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.values**2)))


@dataclass(frozen=True)
class TunnelingProfile:
    t0: float
    width: float = PROFILE_WIDTH

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("profile width must be positive")


def gen_one_over_f(cfg: OneOverFConfig) -> NoiseTrace:
    """Spectral synthesis of a real 1/f trace.

    Fourier amplitudes go as ``f**-0.5`` (power as ``1/f``) inside the band,
    phases are independent and uniform, and the inverse real FFT is scaled
    to the configured rms.  The DC and exact Nyquist bins are left empty.
    """
    n = cfg.n_samples
    if cfg.amplitude == 0:
        return NoiseTrace(np.zeros(n), cfg)
    freqs = np.fft.rfftfreq(n, cfg.dt)
    lo, hi = cfg.band
    inband = (freqs >= lo) & (freqs <= hi) & (freqs > 0)
    if n % 2 == 0:
        inband[-1] = False
    if not inband.any():
        raise ValueError("no FFT bins fall inside the requested band")
    phases = rng_for(cfg.seed, STREAM_CHARGE, *cfg.stream).uniform(0.0, 2 * np.pi, freqs.size)
    spec = np.zeros(freqs.size, dtype=complex)
    spec[inband] = freqs[inband] ** -0.5 * np.exp(1j * phases[inband])
    x = np.fft.irfft(spec, n)
    x *= cfg.amplitude / np.sqrt(np.mean(x**2))
    return NoiseTrace(x, cfg)


def tunneling_at(profile: TunnelingProfile, delta):
    """Gaussian suppression ``t0 exp(-delta^2 / (2 width^2))`` of the hopping."""
    d = np.asarray(delta, dtype=float)
    out = profile.t0 * np.exp(-(d**2) / (2 * profile.width**2))
    return float(out) if out.ndim == 0 else out


def sample_nuclear(b_nuc: float, seed: int, stream: tuple[int, ...] = ()) -> NuclearFields:
    """Three frozen fields with i.i.d. ``N(0, b_nuc**2)`` Cartesian components.

    Isotropic Gaussian components give a uniformly random direction and the
    Maxwell magnitude law of a 3-d Gaussian field distribution.
    """
    if b_nuc < 0:
        raise ValueError("b_nuc must be non-negative")
    rng = rng_for(seed, STREAM_NUCLEAR, *stream)
    return NuclearFields(b_nuc * rng.standard_normal((3, 3)))


# --- envelope fitting and amplitude calibration -------------------------------


@dataclass(frozen=True)
class EnvelopeFit:
    """``floor + (1 - floor) exp(-tau / decay)`` through the oscillation maxima."""

    decay: float
    floor: float
    peak_times: np.ndarray
    peak_values: np.ndarray
    rms_residual: float

    def as_dict(self) -> dict:
        return {
            "decay": float(self.decay),
            "floor": float(self.floor),
            "n_peaks": int(self.peak_times.size),
            "rms_residual": float(self.rms_residual),
        }


def _envelope(tau, floor, decay):
    return floor + (1.0 - floor) * np.exp(-tau / decay)


def fit_envelope_decay(times: np.ndarray, trace: np.ndarray, min_spacing: float | None = None) -> EnvelopeFit:
    """1/e time of the oscillation maxima of a return-probability trace.

    The envelope starts at 1 and relaxes to the level the oscillation is
    centred on, taken as the time average of the trace (1/2 for pure
    dephasing of a ``cos^2`` revival); maxima below that level are trough
    ripples and are ignored.  Only the decay time is fitted.  A
    trace whose maxima do not drop reports ``decay = inf``.
    """
    times = np.asarray(times, dtype=float)
    trace = np.asarray(trace, dtype=float)
    dt = times[1] - times[0]
    distance = max(1, int(round(min_spacing / dt))) if min_spacing else None
    idx, _ = find_peaks(trace, distance=distance)
    floor = float(np.mean(trace))
    # ripples in the troughs of a strongly dephased trace are not maxima of
    # the oscillation; only points above its centre line belong to the envelope
    idx = idx[trace[idx] > floor]
    pt = np.concatenate([[times[0]], times[idx]])
    pv = np.concatenate([[trace[0]], trace[idx]])
    if pt.size < 3 or pv[1:].min() > 1.0 - 1e-9 or floor > 1.0 - 1e-9:
        return EnvelopeFit(math.inf, floor, pt, pv, 0.0)
    span = pt[-1] - pt[0]
    try:
        (decay,), _ = curve_fit(
            lambda tau, d: _envelope(tau, floor, d),
            pt,
            pv,
            p0=(span / 2,),
            bounds=([1e-6], [1e9]),
            maxfev=20000,
        )
    except RuntimeError:
        return EnvelopeFit(math.nan, floor, pt, pv, math.nan)
    resid = float(np.sqrt(np.mean((_envelope(pt, floor, decay) - pv) ** 2)))
    if decay > 1e8:
        decay = math.inf
    return EnvelopeFit(float(decay), floor, pt, pv, resid)


class CalibrationError(RuntimeError):
    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class CalibrationResult:
    amplitude: float
    target_decay: float
    achieved_decay: float
    fit: EnvelopeFit
    history: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "amplitude": float(self.amplitude),
            "target_decay": float(self.target_decay),
            "achieved_decay": float(self.achieved_decay),
            "fit": self.fit.as_dict(),
            "iterations": len(self.history),
        }


def calibrate_amplitude(
    target_decay: float,
    template=None,
    context=None,
    *,
    measure: Callable[[float], EnvelopeFit] | None = None,
    bracket: tuple[float, float] = (1e-4, 1.0),
    rtol: float = 0.05,
    max_iter: int = 60,
) -> CalibrationResult:
    """Find the rms detuning whose ↑↑ return-peak envelope decays in ``target_decay``.

    Bisection in log-amplitude.  By default each candidate runs the
    Monte-Carlo ↑↑ experiment from :mod:`tripledot.gatelab` described by
    ``template`` (charge-noise settings) and ``context`` (Hubbard
    parameters, grid, sample count, seed); ``measure`` replaces that with
    any ``amplitude -> EnvelopeFit`` map.
    """
    if not target_decay > 0 or not math.isfinite(target_decay):
        raise ValueError("target_decay must be positive and finite")
    if measure is None:
        from .gatelab import upup_decay_fit

        def measure(a):
            return upup_decay_fit(a, template, context)

    history = []

    def decay_of(a: float) -> EnvelopeFit:
        fit = measure(a)
        history.append((a, fit.decay))
        log.debug("amplitude %.6g -> decay %.6g", a, fit.decay)
        if math.isnan(fit.decay):
            raise CalibrationError(f"envelope fit failed at amplitude {a:g}", {"history": history})
        return fit

    lo, hi = bracket
    f_lo, f_hi = decay_of(lo), decay_of(hi)
    # decay time falls as the noise grows
    if not (f_lo.decay > target_decay > f_hi.decay):
        raise CalibrationError(
            f"bracket [{lo:g}, {hi:g}] gives decay times [{f_lo.decay:g}, {f_hi.decay:g}],"
            f" which do not straddle {target_decay:g}",
            {"history": history},
        )
    best = min(((lo, f_lo), (hi, f_hi)), key=lambda af: abs(af[1].decay - target_decay))
    for _ in range(max_iter):
        mid = math.sqrt(lo * hi)
        f_mid = decay_of(mid)
        if abs(f_mid.decay - target_decay) < abs(best[1].decay - target_decay):
            best = (mid, f_mid)
        if abs(f_mid.decay - target_decay) <= rtol * target_decay:
            return CalibrationResult(mid, target_decay, f_mid.decay, f_mid, history)
        if f_mid.decay > target_decay:
            lo = mid
        else:
            hi = mid
        if hi / lo < 1 + 1e-9:
            break
    raise CalibrationError(
        f"no amplitude within {rtol:.0%} of decay {target_decay:g}; closest"
        f" {best[0]:g} -> {best[1].decay:g} (decay is not monotonic in amplitude here)",
        {"history": history},
    )
