"""Pseudo-spectral time integration of the full nonlinear system.

The state is advanced in Fourier space on the periodic unit interval with a
Strang splitting: an exact half-step of the linear part (matrix exponentials
of the mode matrices, precomputed once per run), a full step of the
quadratic collision term integrated with classical RK4, and another linear
half-step.  Products are evaluated on a zero-padded grid large enough that
quadratic aliasing vanishes identically.

Two structural projections are reapplied after every step to keep rounding
noise from accumulating: the reality constraint y^(-n) = conj y^(n) and the
mass constraint sum_j y_j^(0) = 0.

The spatially uniform (mode 0) dynamics d/dt y0 = -DA y0 + Q0 is linearly
unstable for both default models (-DA has eigenvalues with positive real
part on the zero-total-mass subspace; the nonsymmetric one grows at the
golden ratio 1.618...).  Faithful runs therefore blow up through the
uniform directions long before a bifurcating wave can saturate, no matter
the domain length: mode 0 is admissible at every lam.  The option
``zero_mode="slaved"`` removes exactly this instability by adiabatic
elimination: after every step the mode-0 coefficients are replaced by the
quasi-static balance DA y0 = Q0(y) on the zero-mass subspace.  On a wave
whose mode-1 pair oscillates at a single frequency, the mode-0 forcing is
constant in time at leading order, so the slaved response coincides with
the mean term of the cubic bifurcation coefficient and the saturated
amplitude and frequency of the wave are reproduced correctly.

Diagnostics extract the early-time growth rate of the seeded mode, the
saturated oscillation frequency (from the rotation of the mode-1 phase), the
period via autocorrelation of a probe signal, and a limit-cycle flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import expm

from .dispersion import mode_matrix
from .model import MASS_VECTOR, Model

__all__ = [
    "BlowupDetected",
    "SimState",
    "init_state",
    "Integrator",
    "SimResult",
    "run",
    "SimDiagnostics",
    "run_diagnostics",
    "field_on_grid",
]


class BlowupDetected(RuntimeError):
    """The state norm exceeded the blow-up threshold."""

    def __init__(self, time: float, norm: float):
        super().__init__(f"state norm {norm:.3e} exceeded threshold "
                         f"at t = {time:.6f}")
        self.time = time
        self.norm = norm


@dataclass
class SimState:
    """Spectral state: Fourier coefficients in FFT frequency order.

    ``modes`` has shape (4, 2 N + 1); column m holds the coefficient of
    exp(2 pi i n x) with n = fftfreq ordering [0, 1, ..., N, -N, ..., -1].
    """

    modes: np.ndarray
    time: float
    lam: float
    N: int

    def copy(self) -> "SimState":
        return SimState(modes=self.modes.copy(), time=self.time,
                        lam=self.lam, N=self.N)

    @property
    def frequencies(self) -> np.ndarray:
        L = 2 * self.N + 1
        return np.rint(np.fft.fftfreq(L, d=1.0 / L)).astype(int)

    def mode(self, n: int) -> np.ndarray:
        """Coefficient 4-vector of mode n."""
        return self.modes[:, n % (2 * self.N + 1)]


def _project(modes: np.ndarray) -> None:
    """Enforce reality and zero total mass in place."""
    L = modes.shape[1]
    idx = (-np.arange(L)) % L
    modes += np.conj(modes[:, idx])
    modes *= 0.5
    modes[:, 0] -= MASS_VECTOR * (modes[:, 0].sum() / 4.0)


def init_state(model: Model, lam: float, N: int = 64,
               amplitude: float = 1e-4, seed_mode: int = 1,
               direction: Optional[np.ndarray] = None,
               perturbation: Optional[Dict[int, np.ndarray]] = None
               ) -> SimState:
    """Initial spectral state: a small perturbation of the uniform state.

    By default mode ``seed_mode`` (and its conjugate partner) is seeded with
    ``amplitude`` along the most unstable eigenvector of the mode matrix at
    the run length ``lam``.  An explicit ``direction`` overrides the
    eigenvector; an explicit ``perturbation`` dict {mode: 4-vector}
    overrides everything else.  Reality and zero mass are enforced.
    """
    L = 2 * N + 1
    modes = np.zeros((4, L), dtype=complex)
    if perturbation is not None:
        for n, vec in perturbation.items():
            if not (-N <= n <= N):
                raise ValueError(f"perturbed mode {n} outside resolution")
            vec = np.asarray(vec, dtype=complex)
            if vec.shape != (4,):
                raise ValueError("perturbation vectors must have 4 components")
            modes[:, n % L] += vec
    else:
        if not (1 <= abs(seed_mode) <= N):
            raise ValueError("seed_mode must be a nonzero resolved mode")
        if direction is None:
            mat = mode_matrix(model, seed_mode, lam)
            eigval, eigvec = np.linalg.eig(mat)
            direction = eigvec[:, int(np.argmax(eigval.real))]
        direction = np.asarray(direction, dtype=complex)
        direction = direction / np.linalg.norm(direction)
        modes[:, seed_mode % L] = amplitude * direction
    _project(modes)
    return SimState(modes=modes, time=0.0, lam=float(lam), N=N)


class Integrator:
    """Strang-splitting stepper with cached linear propagators.

    Parameters
    ----------
    model, lam : the system and the domain length of the run.
    N : spectral resolution (modes -N..N are evolved).
    dt : time step.
    lam0 : optional reference length activating the slaved diffusion
        scaling of the symmetric model (see
        :func:`myxoripple.dispersion.mode_matrix`).
    zero_mode : "free" evolves mode 0 dynamically (default; the uniform
        instability of the default models then ends in blow-up), "slaved"
        replaces it each step by the quasi-static balance DA y0 = Q0.
    blowup_threshold : state max-norm that aborts the run.
    """

    def __init__(self, model: Model, lam: float, N: int = 64,
                 dt: float = 1e-3, lam0: Optional[float] = None,
                 zero_mode: str = "free",
                 blowup_threshold: float = 1e6):
        if dt <= 0:
            raise ValueError("dt must be positive")
        if zero_mode not in ("free", "slaved"):
            raise ValueError("zero_mode must be 'free' or 'slaved'")
        self.model = model
        self.lam = float(lam)
        self.N = int(N)
        self.dt = float(dt)
        self.zero_mode = zero_mode
        self.blowup_threshold = float(blowup_threshold)
        L = 2 * self.N + 1
        freqs = np.rint(np.fft.fftfreq(L, d=1.0 / L)).astype(int)
        self.half_propagators = np.stack([
            expm(0.5 * dt * mode_matrix(model, int(n), lam, lam0))
            for n in freqs
        ])
        # smallest grid on which products of band-N functions are alias-free
        self.n_pad = 3 * self.N + 2
        self._c = model.c
        if zero_mode == "slaved":
            # bordered system [DA b; b^t 0] [y0; mu] = [q0; 0]; mu vanishes
            # because b^t DA = 0 and q0 has zero component sum
            bordered = np.zeros((5, 5))
            bordered[:4, :4] = model.DA
            bordered[:4, 4] = MASS_VECTOR
            bordered[4, :4] = MASS_VECTOR
            self._bordered_inv = np.linalg.inv(bordered)

    def _slave_zero_mode(self, modes: np.ndarray) -> None:
        """Replace mode 0 by the quasi-static response to Q's mean."""
        c1, c2, c3, c4 = self._c
        # mean of y_i^2 over x = sum_n |y_i^(n)|^2 by Parseval
        s = (np.abs(modes) ** 2).sum(axis=1)
        t = np.array([c1 * s[0], c2 * s[1], c3 * s[2], c4 * s[3]])
        q0 = np.array([t[3] - t[0], t[0] - t[1], t[1] - t[2], t[2] - t[3]])
        rhs = np.zeros(5)
        rhs[:4] = q0
        modes[:, 0] = (self._bordered_inv @ rhs)[:4]

    def _quadratic_rate(self, modes: np.ndarray) -> np.ndarray:
        """Exact spectral coefficients of Q(y) for band-limited y."""
        N, G = self.N, self.n_pad
        padded = np.zeros((4, G), dtype=complex)
        padded[:, :N + 1] = modes[:, :N + 1]
        padded[:, G - N:] = modes[:, N + 1:]
        y = np.fft.ifft(padded, axis=1) * G
        c1, c2, c3, c4 = self._c
        t1 = c1 * y[0] * y[0]
        t2 = c2 * y[1] * y[1]
        t3 = c3 * y[2] * y[2]
        t4 = c4 * y[3] * y[3]
        q = np.stack([t4 - t1, t1 - t2, t2 - t3, t3 - t4])
        qhat = np.fft.fft(q, axis=1) / G
        out = np.empty_like(modes)
        out[:, :N + 1] = qhat[:, :N + 1]
        out[:, N + 1:] = qhat[:, G - N:]
        return out

    def _linear_half(self, modes: np.ndarray) -> np.ndarray:
        return np.einsum("nij,jn->in", self.half_propagators, modes)

    def step(self, state: SimState) -> SimState:
        """Advance the state by one time step in place."""
        dt = self.dt
        m = self._linear_half(state.modes)
        k1 = self._quadratic_rate(m)
        k2 = self._quadratic_rate(m + 0.5 * dt * k1)
        k3 = self._quadratic_rate(m + 0.5 * dt * k2)
        k4 = self._quadratic_rate(m + dt * k3)
        m = m + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        m = self._linear_half(m)
        _project(m)
        if self.zero_mode == "slaved":
            self._slave_zero_mode(m)
        state.modes = m
        state.time += dt
        peak = float(np.max(np.abs(m)))
        if not np.isfinite(peak) or peak > self.blowup_threshold:
            raise BlowupDetected(state.time, peak)
        return state


@dataclass
class SimResult:
    """Recorded time series of a run.

    ``mode1`` holds the mode-1 coefficient 4-vectors, ``probe`` the real
    field values at x = 0, both sampled every ``record_every`` steps;
    ``snapshots`` optionally keeps full spectral states for space-time
    output.
    """

    times: np.ndarray
    mode1: np.ndarray
    probe: np.ndarray
    state: SimState
    snapshot_times: np.ndarray
    snapshots: List[np.ndarray]
    lam: float
    dt: float

    @property
    def mode1_amplitude(self) -> np.ndarray:
        return np.linalg.norm(self.mode1, axis=1)


def run(model: Model, lam: float, T: float, dt: float = 1e-3,
        N: int = 64, amplitude: float = 1e-4,
        lam0: Optional[float] = None,
        state: Optional[SimState] = None,
        record_every: int = 10,
        n_snapshots: int = 0,
        direction: Optional[np.ndarray] = None,
        zero_mode: str = "free",
        blowup_threshold: float = 1e6) -> SimResult:
    """Integrate from a seeded state for time T and record diagnostics data."""
    if state is None:
        state = init_state(model, lam, N=N, amplitude=amplitude,
                           direction=direction)
    stepper = Integrator(model, lam, N=state.N, dt=dt, lam0=lam0,
                         zero_mode=zero_mode,
                         blowup_threshold=blowup_threshold)
    n_steps = int(round(T / dt))
    snap_stride = max(1, n_steps // n_snapshots) if n_snapshots > 0 else 0

    times = [state.time]
    mode1 = [state.mode(1).copy()]
    probe = [state.modes.sum(axis=1).real.copy()]
    snap_times = []
    snaps = []
    for i in range(1, n_steps + 1):
        stepper.step(state)
        if i % record_every == 0 or i == n_steps:
            times.append(state.time)
            mode1.append(state.mode(1).copy())
            probe.append(state.modes.sum(axis=1).real.copy())
        if snap_stride and (i % snap_stride == 0 or i == n_steps):
            snap_times.append(state.time)
            snaps.append(state.modes.copy())
    return SimResult(times=np.array(times), mode1=np.array(mode1),
                     probe=np.array(probe), state=state,
                     snapshot_times=np.array(snap_times), snapshots=snaps,
                     lam=float(lam), dt=float(dt))


@dataclass(frozen=True)
class SimDiagnostics:
    """Growth, frequency, and saturation diagnostics of a recorded run.

    ``growth_rate`` is the least-squares slope of log mode-1 amplitude; the
    fit window is the stretch between three times the seed amplitude and a
    third of the plateau when the run saturated, else the middle of the
    run.  ``angular_frequency`` is the (absolute) rotation rate of the
    mode-1 phase over the trailing quarter of the run; ``period`` is
    confirmed by autocorrelation of the probe signal and reported only when
    the signal repeats to 0.99 correlation over two periods.  ``saturated``
    means the trailing-quarter amplitude sits well above the seed with
    relative spread below 1 percent; ``limit_cycle`` additionally requires
    the period confirmation.
    """

    growth_rate: float
    growth_window: Tuple[float, float]
    angular_frequency: float
    period: Optional[float]
    autocorrelation: float
    amplitude: float
    amplitude_rel_std: float
    limit_cycle: bool
    saturated: bool


def _autocorr_at_lag(x: np.ndarray, lag: int) -> float:
    x = x - x.mean()
    if lag <= 0 or lag >= x.size:
        return float("nan")
    a, b = x[:-lag], x[lag:]
    denom = float(np.linalg.norm(a) * np.linalg.norm(b))
    if denom == 0.0:
        return float("nan")
    return float(np.dot(a, b) / denom)


def run_diagnostics(result: SimResult) -> SimDiagnostics:
    """Extract growth rate, frequency, period, and saturation flags."""
    t = result.times
    amp = result.mode1_amplitude
    a0 = amp[0] if amp[0] > 0 else np.max(amp[:10])

    # saturation first: a flat trailing quarter well above the seed level
    tail_amp = amp[int(0.75 * t.size):]
    tail_mean = float(tail_amp.mean()) if tail_amp.size else 0.0
    tail_std = float(tail_amp.std()) if tail_amp.size else float("nan")
    saturated = bool(tail_mean > 10.0 * a0 and tail_std < 0.01 * tail_mean)

    # growth fit: the exponential stretch between seed and plateau if the
    # run saturated, otherwise the middle of the run
    if saturated:
        grow = np.flatnonzero((amp > 3.0 * a0) & (amp < tail_mean / 3.0))
    else:
        grow = np.flatnonzero((t >= 0.1 * t[-1]) & (t <= 0.7 * t[-1])
                              & (amp > 0))
    if grow.size >= 10:
        sel = grow
        slope = np.polyfit(t[sel], np.log(amp[sel]), 1)[0]
        window = (float(t[sel[0]]), float(t[sel[-1]]))
    else:
        slope = float("nan")
        window = (float("nan"), float("nan"))

    tail = slice(int(0.75 * t.size), None)
    t_tail = t[tail]
    species = int(np.argmax(np.abs(result.mode1[tail]).mean(axis=0)))
    coeff = result.mode1[tail, species]
    phase = np.unwrap(np.angle(coeff))
    omega = float(abs(np.polyfit(t_tail, phase, 1)[0])) if t_tail.size > 4 \
        else float("nan")

    period = None
    autocorr = float("nan")
    if np.isfinite(omega) and omega > 0:
        period_guess = 2.0 * np.pi / omega
        dt_rec = float(np.median(np.diff(t_tail))) if t_tail.size > 2 else 0.0
        if dt_rec > 0:
            lag = int(round(period_guess / dt_rec))
            sig = result.probe[tail, 0]
            if 0 < lag < sig.size // 2:
                autocorr = _autocorr_at_lag(sig, lag)
                if autocorr > 0.99 and t_tail[-1] - t_tail[0] >= 2 * period_guess:
                    period = period_guess

    rel_std = tail_std / tail_mean if tail_mean > 0 else float("nan")
    limit_cycle = bool(period is not None and saturated)
    return SimDiagnostics(growth_rate=float(slope), growth_window=window,
                          angular_frequency=omega, period=period,
                          autocorrelation=autocorr, amplitude=tail_mean,
                          amplitude_rel_std=float(rel_std),
                          limit_cycle=limit_cycle, saturated=saturated)


def field_on_grid(modes: np.ndarray, n_points: int = 128) -> np.ndarray:
    """Evaluate the real field on a uniform grid from FFT-ordered modes."""
    L = modes.shape[1]
    N = (L - 1) // 2
    if n_points < L:
        raise ValueError("n_points must be at least the mode count")
    padded = np.zeros((4, n_points), dtype=complex)
    padded[:, :N + 1] = modes[:, :N + 1]
    padded[:, n_points - N:] = modes[:, N + 1:]
    return np.real(np.fft.ifft(padded, axis=1) * n_points)
