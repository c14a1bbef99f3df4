"""Gate targets, fidelity traces, gate-time search and Monte-Carlo averaging.

Two-qubit labels follow the (A, B) spin order: ``"uu"`` is ↑_A ↑_B,
``"ud"`` is ↑_A ↓_B and so on, embedded as ``d+_{A s} d+_{B s'} |0>``.
Times are in scaled units (hbar / 10 ueV), energies in 10 ueV.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .dynamics import TIME_UNIT_NS, propagate_batch, static_amplitudes
from .fock import FockState, SectorBasis, enumerate_sector, full_basis, state
from .hubbard import HubbardOperators, HubbardParams, operators_for
from .noise import (
    EnvelopeFit,
    OneOverFConfig,
    TunnelingProfile,
    fit_envelope_decay,
    gen_one_over_f,
    sample_nuclear,
    tunneling_at,
)
from .tjmodel import EffectiveParams, analytic_overlap, return_times, target_times

__all__ = [
    "QUBIT_STATES",
    "gate_matrix",
    "gate_target",
    "partial_swap_target",
    "superposition_initial",
    "superposition_target",
    "concurrence",
    "ChargeNoise",
    "ExperimentConfig",
    "FidelityTrace",
    "fidelity_trace",
    "run_superposition_check",
    "GateTime",
    "find_gate_time",
    "CalibrationContext",
    "upup_decay_fit",
    "calibrate_charge_noise",
]

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
QUBIT_LABELS = ("uu", "ud", "du", "dd")
QUBIT_STATES: dict[str, FockState] = {
    "uu": state("Au", "Bu"),
    "ud": state("Au", "Bd"),
    "du": state("Ad", "Bu"),
    "dd": state("Ad", "Bd"),
}
_SECTOR_OF = {"uu": 1, "ud": 0, "du": 0, "dd": -1}
_MC_CHUNK = 25
_STEP_BLOCK = 256


# --- targets ------------------------------------------------------------------


def gate_matrix() -> np.ndarray:
    """The entangling gate as a 4x4 unitary on (uu, ud, du, dd); columns are images."""
    w = np.exp(1j * np.pi / 4) / SQRT2
    g = np.zeros((4, 4), dtype=complex)
    g[0, 0] = 1
    g[1, 1], g[2, 1] = w, -1j * w
    g[2, 2], g[1, 2] = w, -1j * w
    g[3, 3] = 1
    return g


def _embed(coeffs: Mapping[str, complex], basis: SectorBasis) -> np.ndarray:
    v = np.zeros(len(basis), dtype=complex)
    for lab, c in coeffs.items():
        if c != 0:
            v[basis.index(QUBIT_STATES[lab])] += c
    return v


def _check_label(label: str) -> None:
    if label not in QUBIT_STATES:
        raise ValueError(f"two-qubit label must be one of {QUBIT_LABELS}, got {label!r}")


def qubit_vector(label: str, basis: SectorBasis | None = None) -> np.ndarray:
    _check_label(label)
    basis = basis or enumerate_sector(_SECTOR_OF[label])
    return _embed({label: 1.0}, basis)


def gate_target(label: str, basis: SectorBasis | None = None) -> np.ndarray:
    """Image of a computational basis state under the gate, as a Fock vector.

    The default basis is the S_z sector of ``label``.
    """
    _check_label(label)
    basis = basis or enumerate_sector(_SECTOR_OF[label])
    col = gate_matrix()[:, QUBIT_LABELS.index(label)]
    return _embed(dict(zip(QUBIT_LABELS, col)), basis)


def partial_swap_target(tau, j: float, label: str = "ud", basis: SectorBasis | None = None) -> np.ndarray:
    """Short-time gate image ``e^{i th}(cos th |ud> - i sin th |du>)``, ``th = 3 J tau / 2``.

    ``label="du"`` gives the mirror image.  ``tau`` may be an array, in
    which case one row per time is returned.
    """
    if label not in ("ud", "du"):
        raise ValueError("the partial swap acts on 'ud' or 'du'")
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be non-negative")
    basis = basis or enumerate_sector(0)
    other = "du" if label == "ud" else "ud"
    th = 1.5 * j * tau
    a = np.exp(1j * th) * np.cos(th)
    b = -1j * np.exp(1j * th) * np.sin(th)
    out = np.multiply.outer(a, _embed({label: 1.0}, basis)) + np.multiply.outer(b, _embed({other: 1.0}, basis))
    return out


def superposition_initial(basis: SectorBasis | None = None) -> np.ndarray:
    """(|uu> + |ud>)/sqrt 2, spanning the S_z = +1 and 0 sectors."""
    basis = basis or full_basis()
    return _embed({"uu": 1 / SQRT2, "ud": 1 / SQRT2}, basis)


def superposition_target(basis: SectorBasis | None = None) -> np.ndarray:
    """Exact gate image of :func:`superposition_initial`, unit norm.

    ``|uu>/sqrt 2 + e^{i pi/4}/2 (|ud> - i |du>)``.
    """
    basis = basis or full_basis()
    g = gate_matrix()
    coeffs = (g[:, 0] + g[:, 1]) / SQRT2
    return _embed(dict(zip(QUBIT_LABELS, coeffs)), basis)


def concurrence(amps: np.ndarray) -> float:
    """Concurrence of a pure two-qubit state given in (uu, ud, du, dd) order."""
    a, b, c, d = np.asarray(amps, dtype=complex) / np.linalg.norm(amps)
    return float(2 * abs(a * d - b * c))


# --- experiment configuration ------------------------------------------------


@dataclass(frozen=True)
class ChargeNoise:
    """1/f detuning applied to the dot energies.

    ``coupling`` scales the detuning on (A, C, B); the default moves only
    the central dot.  The hoppings follow the resulting energy mismatch
    through a Gaussian profile of width ``width``.  The default ``f_min``
    makes each sample's noise record ten times the 40-unit calibration
    window; a record no longer than the run makes every sample accumulate
    the same total tunneling phase at its end, which shows up as a
    spurious revival.  ``f_min=None`` means one over the run length.
    """

    amplitude: float
    f_min: float | None = 0.0025
    f_max: float | None = None
    width: float = 0.01
    coupling: tuple[float, float, float] = (0.0, 1.0, 0.0)

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("charge noise amplitude must be non-negative")
        if self.width <= 0:
            raise ValueError("profile width must be positive")
        object.__setattr__(self, "coupling", tuple(float(c) for c in self.coupling))
        if len(self.coupling) != 3:
            raise ValueError("coupling needs one entry per dot (A, C, B)")


_INITIALS = QUBIT_LABELS + ("uu+ud",)
_TARGET_KINDS = ("self", "gate", "partial_swap")


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte-Carlo fidelity experiment.

    ``targets`` maps output names to a target kind: ``"self"`` (the initial
    state), ``"gate"`` (its ideal image under the entangling gate) or
    ``"partial_swap"`` (the time-dependent short-gate image).
    """

    hubbard: HubbardParams = field(default_factory=HubbardParams.processing)
    initial: str = "ud"
    targets: Mapping[str, str] = field(default_factory=lambda: {"gate": "gate"})
    dt: float = 0.01
    tau_max: float = 20.0
    record_every: int = 1
    charge: ChargeNoise | None = None
    b_nuc: float = 0.0
    n_mc: int = 100
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.initial not in _INITIALS:
            raise ValueError(f"initial state must be one of {_INITIALS}")
        for name, kind in self.targets.items():
            if kind not in _TARGET_KINDS:
                raise ValueError(f"target {name!r}: kind must be one of {_TARGET_KINDS}")
            if kind == "partial_swap" and self.initial not in ("ud", "du"):
                raise ValueError("partial_swap targets need initial 'ud' or 'du'")
        if not self.targets:
            raise ValueError("at least one target is required")
        if self.tau_max <= 0 or self.dt <= 0:
            raise ValueError("tau_max and dt must be positive")
        if self.n_mc < 1 or self.workers < 1 or self.record_every < 1:
            raise ValueError("n_mc, workers and record_every must be >= 1")
        if self.b_nuc < 0:
            raise ValueError("b_nuc must be non-negative")
        object.__setattr__(self, "targets", dict(self.targets))

    @property
    def n_steps(self) -> int:
        return int(round(self.tau_max / self.dt))

    @property
    def noisy(self) -> bool:
        return (self.charge is not None and self.charge.amplitude > 0) or self.b_nuc > 0

    def basis(self) -> SectorBasis:
        # transverse fields couple sectors; the superposition spans two of them
        if self.b_nuc > 0 or self.initial == "uu+ud":
            return full_basis()
        return enumerate_sector(_SECTOR_OF[self.initial])


@dataclass
class FidelityTrace:
    times: np.ndarray
    mean: dict[str, np.ndarray]
    stderr: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    @property
    def times_ns(self) -> np.ndarray:
        return self.times * TIME_UNIT_NS

    def at(self, tau: float) -> dict[str, float]:
        """Mean overlaps at the recorded time closest to ``tau``."""
        k = int(np.argmin(np.abs(self.times - tau)))
        return {name: float(v[k]) for name, v in self.mean.items()}

    def stderr_at(self, tau: float) -> dict[str, float]:
        k = int(np.argmin(np.abs(self.times - tau)))
        return {name: float(v[k]) for name, v in self.stderr.items()}


# --- experiment engine --------------------------------------------------------


def _initial_vector(cfg: ExperimentConfig, basis: SectorBasis) -> np.ndarray:
    if cfg.initial == "uu+ud":
        return superposition_initial(basis)
    return _embed({cfg.initial: 1.0}, basis)


def _target_rows(kind: str, cfg: ExperimentConfig, basis: SectorBasis, times: np.ndarray) -> np.ndarray:
    """Target vectors, shape (dim,) when static or (n_times, dim) when not."""
    if kind == "self":
        return _initial_vector(cfg, basis)
    if kind == "gate":
        if cfg.initial == "uu+ud":
            return superposition_target(basis)
        return gate_target(cfg.initial, basis)
    j = cfg.hubbard.t_ac * cfg.hubbard.t_cb / float(np.mean(cfg.hubbard.u))
    return partial_swap_target(times, j, cfg.initial, basis)


def _overlaps(targets: dict[str, np.ndarray], psi: np.ndarray, k: slice | int | None = None) -> dict:
    out = {}
    for name, tgt in targets.items():
        if tgt.ndim == 1:
            amp = psi @ tgt.conj()
        else:
            amp = np.einsum("...i,...i->...", psi, tgt[k].conj() if k is not None else tgt.conj())
        out[name] = np.minimum(np.abs(amp) ** 2, 1.0)
    return out


def _noiseless(cfg: ExperimentConfig, basis, psi0, targets, times) -> dict[str, np.ndarray]:
    h = operators_for(basis).hubbard(cfg.hubbard)
    psi = static_amplitudes(h, psi0, times)
    return {
        name: np.minimum(np.abs(np.einsum("ti,ti->t", psi, np.broadcast_to(t, psi.shape).conj())) ** 2, 1.0)
        for name, t in targets.items()
    }


def _charge_traces(cfg: ExperimentConfig, sample_ids, n_steps: int) -> np.ndarray:
    ch = cfg.charge
    f_min = ch.f_min if ch.f_min is not None else 1.0 / cfg.tau_max
    # synthesise the full 1/f_min record so that runs of different length
    # share the same noise statistics, then keep the part this run needs
    n_rec = max(n_steps, int(math.ceil(1.0 / (f_min * cfg.dt))))
    out = np.empty((len(sample_ids), n_steps))
    for row, s in enumerate(sample_ids):
        nc = OneOverFConfig(ch.amplitude, n_rec, cfg.dt, f_min=f_min, f_max=ch.f_max, seed=cfg.seed, stream=(s,))
        out[row] = gen_one_over_f(nc).values[:n_steps]
    return out


def _run_chunk(cfg: ExperimentConfig, basis, ops: HubbardOperators, psi0, targets, rec_idx, sample_ids):
    p = cfg.hubbard
    n_steps = cfg.n_steps
    nb = len(sample_ids)
    dim = len(basis)
    h_static = (
        np.einsum("i,ijk->jk", np.asarray(p.e), ops.number)
        + np.einsum("i,ijk->jk", np.asarray(p.u), ops.double)
    ).astype(complex)
    h_base = np.broadcast_to(h_static, (nb, dim, dim)).copy()
    if cfg.b_nuc > 0:
        for row, s in enumerate(sample_ids):
            h_base[row] += ops.zeeman(sample_nuclear(cfg.b_nuc, cfg.seed, (s,)))
    hop = p.t_ac * ops.hop_ac, p.t_cb * ops.hop_cb

    charge_on = cfg.charge is not None and cfg.charge.amplitude > 0
    if not charge_on:
        # frozen fields only: each sample is a static problem
        times = rec_idx * cfg.dt
        h_all = h_base + hop[0] + hop[1]
        res = {name: np.empty((rec_idx.size, nb)) for name in targets}
        for row in range(nb):
            psi = static_amplitudes(h_all[row], psi0, times)
            for name, v in _overlaps(targets, psi, rec_idx).items():
                res[name][:, row] = v
        return res

    ch = cfg.charge
    delta = _charge_traces(cfg, sample_ids, n_steps)
    c = np.asarray(ch.coupling)
    prof = TunnelingProfile(1.0, ch.width)
    g_ac = tunneling_at(prof, (c[1] - c[0]) * delta)
    g_cb = tunneling_at(prof, (c[1] - c[2]) * delta)
    onsite = np.einsum("i,ijk->jk", c, ops.number)

    res = {name: np.empty((rec_idx.size, nb)) for name in targets}
    rec_pos = {int(k): r for r, k in enumerate(rec_idx)}
    psi = np.broadcast_to(psi0, (nb, dim)).astype(complex)
    if 0 in rec_pos:
        for name, v in _overlaps(targets, psi, 0).items():
            res[name][rec_pos[0]] = v
    for start in range(0, n_steps, _STEP_BLOCK):
        stop = min(n_steps, start + _STEP_BLOCK)
        d = delta[:, start:stop].T  # (steps, batch)
        h = (
            h_base[None]
            + d[..., None, None] * onsite
            + g_ac[:, start:stop].T[..., None, None] * hop[0]
            + g_cb[:, start:stop].T[..., None, None] * hop[1]
        )
        states = propagate_batch(h, psi, cfg.dt)
        psi = states[-1]
        for k_local in range(1, stop - start + 1):
            k = start + k_local
            if k in rec_pos:
                for name, v in _overlaps(targets, states[k_local], k).items():
                    res[name][rec_pos[k]] = v
    return res


def fidelity_trace(cfg: ExperimentConfig) -> FidelityTrace:
    """Mean squared overlaps of the evolved initial state with each target.

    Noiseless configs are solved exactly at the recorded times.  Noisy ones
    run ``n_mc`` samples keyed by ``(seed, sample index)`` in fixed chunks,
    so the result does not depend on ``workers``.
    """
    basis = cfg.basis()
    ops = operators_for(basis)
    rec_idx = np.arange(0, cfg.n_steps + 1, cfg.record_every)
    times = rec_idx * cfg.dt
    psi0 = _initial_vector(cfg, basis)
    all_times = np.arange(cfg.n_steps + 1) * cfg.dt
    targets = {name: _target_rows(kind, cfg, basis, all_times) for name, kind in cfg.targets.items()}
    meta = {
        "config": _config_echo(cfg),
        "basis_dim": len(basis),
        "time_unit_ns": TIME_UNIT_NS,
    }
    if not cfg.noisy:
        tg = {n: (t if t.ndim == 1 else t[rec_idx]) for n, t in targets.items()}
        mean = _noiseless(cfg, basis, psi0, tg, times)
        return FidelityTrace(times, mean, {n: np.zeros_like(v) for n, v in mean.items()}, meta)

    chunks = [range(s, min(cfg.n_mc, s + _MC_CHUNK)) for s in range(0, cfg.n_mc, _MC_CHUNK)]

    def work(ids):
        return _run_chunk(cfg, basis, ops, psi0, targets, rec_idx, list(ids))

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(ids) for ids in chunks]
    mean, stderr = {}, {}
    for name in targets:
        samples = np.concatenate([part[name] for part in parts], axis=1)
        mean[name] = samples.mean(axis=1)
        if cfg.n_mc > 1:
            stderr[name] = samples.std(axis=1, ddof=1) / math.sqrt(cfg.n_mc)
        else:
            stderr[name] = np.zeros(times.size)
    return FidelityTrace(times, mean, stderr, meta)


def _config_echo(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d["hubbard"] = {k: (list(v) if isinstance(v, tuple) else v) for k, v in d["hubbard"].items()}
    if d["charge"] is not None:
        d["charge"]["coupling"] = list(d["charge"]["coupling"])
    d.pop("workers")
    return d


def run_superposition_check(cfg: ExperimentConfig) -> FidelityTrace:
    """Phase check: evolve (|uu> + |ud>)/sqrt 2 against its exact gate image."""
    return fidelity_trace(replace(cfg, initial="uu+ud", targets={"superposition": "gate"}))


# --- gate-time search ---------------------------------------------------------


@dataclass(frozen=True)
class GateTime:
    tau: float
    fidelities: dict[str, float]
    objective: float
    upup_amplitude: float
    nearby_return_times: list[float]
    nearby_target_times: list[float]
    threshold_met: bool

    def as_dict(self) -> dict:
        return {
            "tau": self.tau,
            "tau_ns": self.tau * TIME_UNIT_NS,
            "objective": self.objective,
            "fidelities": dict(self.fidelities),
            "upup_amplitude": self.upup_amplitude,
            "threshold_met": self.threshold_met,
            "nearby_return_times": list(self.nearby_return_times),
            "nearby_target_times": list(self.nearby_target_times),
        }


def _gate_model(p) -> tuple[Callable, float, float]:
    """Return ``f(tau) -> (F_uu, F_ud, amp_uu)`` plus (t, j) for the model."""
    if isinstance(p, EffectiveParams):
        t, j = p.t, p.j

        def f(tau):
            tau = np.asarray(tau, dtype=float)
            amp = np.cos(SQRT2 * t * tau)
            return amp**2, analytic_overlap(tau, p), amp

        return f, t, j
    if isinstance(p, HubbardParams):
        b1, b0 = enumerate_sector(1), enumerate_sector(0)
        h1 = operators_for(b1).hubbard(p)
        h0 = operators_for(b0).hubbard(p)
        uu = qubit_vector("uu", b1)
        ud = qubit_vector("ud", b0)
        tgt = gate_target("ud", b0)

        def f(tau):
            taus = np.atleast_1d(np.asarray(tau, dtype=float))
            a1 = static_amplitudes(h1, uu, taus) @ uu.conj()
            a0 = static_amplitudes(h0, ud, taus) @ tgt.conj()
            out = np.abs(a1) ** 2, np.abs(a0) ** 2, a1.real
            return tuple(o[0] for o in out) if np.ndim(tau) == 0 else out

        t = math.sqrt(p.t_ac * p.t_cb)
        return f, t, p.t_ac * p.t_cb / float(np.mean(p.u))
    raise TypeError("p must be EffectiveParams or HubbardParams")


def find_gate_time(
    p,
    window: tuple[float, float] = (0.0, 8.0),
    weights: tuple[float, float] = (1.0, 1.0),
    threshold: float = 0.99,
    require_trivial_phase: bool = True,
    points_per_period: int = 400,
) -> GateTime:
    """Noiseless gate time maximizing ``min(F_uu, F_ud->target)``.

    The objective is ``min_k [1 - w_k (1 - F_k)]``.  With
    ``require_trivial_phase`` only instants where |uu> comes back with a
    positive amplitude count, i.e. the neighbourhoods of the revivals
    ``tau_m``; halfway revivals return -|uu> (and minus the whole gate).

    A dense grid is refined around each local maximum.  The earliest
    refined optimum above ``threshold`` is returned, otherwise the best.
    """
    lo, hi = map(float, window)
    if not (0 <= lo <= hi) or not math.isfinite(hi):
        raise ValueError(f"empty or invalid window {window}")
    f, t, j = _gate_model(p)
    w_uu, w_ud = weights

    def objective(tau):
        f_uu, f_ud, amp = f(tau)
        val = np.minimum(1 - w_uu * (1 - f_uu), 1 - w_ud * (1 - f_ud))
        if require_trivial_phase:
            val = np.where(np.asarray(amp) > 0, val, -1.0)
        return val

    def result(tau, met):
        f_uu, f_ud, amp = f(tau)
        m_near = max(1, int(round(tau * SQRT2 * t / (2 * math.pi)))) if t > 0 else 1
        rts = [return_times(t, m) for m in range(max(1, m_near - 1), m_near + 2)] if t > 0 else []
        tts = []
        if j > 0:
            n_near = max(0, int(round((tau * 6 * j / math.pi - 1) / 4)))
            tts = [target_times(j, n) for n in range(max(0, n_near - 1), n_near + 2)]
        return GateTime(
            float(tau),
            {"uu": float(f_uu), "ud": float(f_ud)},
            float(objective(tau)),
            float(amp),
            rts,
            tts,
            met,
        )

    if hi == lo:
        return result(lo, bool(objective(lo) >= threshold))

    period = math.pi / (SQRT2 * t) if t > 0 else hi - lo
    n = max(64, int(math.ceil((hi - lo) / period * points_per_period)))
    grid = np.linspace(lo, hi, n + 1)
    vals = objective(grid)
    step = grid[1] - grid[0]
    peaks = [
        k
        for k in range(n + 1)
        if (k == 0 or vals[k] >= vals[k - 1]) and (k == n or vals[k] >= vals[k + 1]) and vals[k] > -1
    ]
    refined = []
    for k in peaks:
        a, b = max(lo, grid[k] - step), min(hi, grid[k] + step)
        r = minimize_scalar(lambda x: -float(objective(x)), bounds=(a, b), method="bounded", options={"xatol": 1e-10})
        tau, val = (r.x, -r.fun) if -r.fun >= vals[k] else (grid[k], vals[k])
        refined.append((float(tau), float(val)))
    if not refined:
        k = int(np.argmax(vals))
        return result(grid[k], False)
    for tau, val in refined:
        if val >= threshold:
            return result(tau, True)
    tau, _ = max(refined, key=lambda tv: tv[1])
    return result(tau, False)


# --- charge-noise calibration -------------------------------------------------


@dataclass(frozen=True)
class CalibrationContext:
    """Everything but the amplitude for the ↑↑ decay experiment."""

    hubbard: HubbardParams = field(default_factory=HubbardParams.processing)
    dt: float = 0.01
    fit_tmax: float = 40.0
    n_mc: int = 100
    seed: int = 0
    workers: int = 1


def upup_decay_fit(amplitude: float, template: ChargeNoise | None, context: CalibrationContext | None) -> EnvelopeFit:
    """Fit the ↑↑ revival envelope under charge noise of the given rms."""
    template = template or ChargeNoise(0.0)
    context = context or CalibrationContext()
    cfg = ExperimentConfig(
        hubbard=context.hubbard,
        initial="uu",
        targets={"self": "self"},
        dt=context.dt,
        tau_max=context.fit_tmax,
        charge=replace(template, amplitude=amplitude),
        n_mc=context.n_mc,
        seed=context.seed,
        workers=context.workers,
    )
    tr = fidelity_trace(cfg)
    t = math.sqrt(context.hubbard.t_ac * context.hubbard.t_cb)
    return fit_envelope_decay(tr.times, tr.mean["self"], min_spacing=0.75 * math.pi / (SQRT2 * t))


# Above ~0.02 rms the narrow tunneling profile shuts the hopping off for most
# samples, the oscillation freezes and the fitted decay grows again.
CALIBRATION_BRACKET = (1e-3, 0.02)


def calibrate_charge_noise(
    target_decay: float,
    template: ChargeNoise | None = None,
    context: CalibrationContext | None = None,
    **kw,
):
    """Charge-noise rms giving the ↑↑ envelope a 1/e time of ``target_decay``."""
    from .noise import calibrate_amplitude

    kw.setdefault("bracket", CALIBRATION_BRACKET)
    return calibrate_amplitude(target_decay, template, context, **kw)
