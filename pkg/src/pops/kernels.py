"""Hermitian kernel matrices for useful and interference power.

For a prototype waveform w and a scattering function, the useful kernel KS
and the interference kernel KI are L x L Hermitian PSD matrices on a window
of the global time axis such that, for the opposite prototype x aligned on
that window,

    x^H KS x = average useful power,      x^H KI x = average interference power

(up to the 1/||w||^2 ||x||^2 normalization applied by the SINR engine).
Entries follow the quadratic-form convention

    KS(p, q) = sum_k pi_k w(p - p_k) conj(w(q - p_k)) rho_k(p - q),

with rho_k(r) = exp(2j pi nu_k Ts r) for explicit paths and the closed-form
Jakes autocorrelation rho(r) = J0(pi Bd Ts r) for separable channels.  The
subcarrier sum in KI is folded analytically through
sum_{m=0}^{Q-1} exp(2j pi m r / Q) = Q * [r = 0 mod Q], which yields the
comb-masked matrix Omega; the remaining lattice sum over time shifts n runs
over the finitely many terms with support overlap.

The S(-p, -nu) orientation (sign=-1) negates delays and Dopplers; it appears
in the role-swap identities and in the pong half-step of the optimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz
from scipy.special import j0

from .channel import PathList, SeparableChannel
from .lattice import LatticeConfig, Waveform

__all__ = [
    "KernelMatrix",
    "build_ks",
    "build_ki",
    "build_kin",
    "build_ks_kin",
    "best_window_start",
]

KIND_USEFUL = "useful"
KIND_INTERFERENCE = "interference"
KIND_INTERFERENCE_NOISE = "interference-plus-noise"
_KINDS = (KIND_USEFUL, KIND_INTERFERENCE, KIND_INTERFERENCE_NOISE)


@dataclass(frozen=True)
class KernelMatrix:
    """Hermitian PSD kernel on the global window [window_start, window_start+L)."""

    data: np.ndarray
    kind: str
    built_from: str
    sign: int
    window_start: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        d = np.asarray(self.data, dtype=np.complex128)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"kernel data must be square, got shape {d.shape}")
        d = d.copy()
        d.flags.writeable = False
        object.__setattr__(self, "data", d)
        object.__setattr__(self, "window_start", int(self.window_start))

    @property
    def L(self) -> int:
        return self.data.shape[0]

    def quad(self, w: Waveform) -> float:
        """Real quadratic form x^H K x with x = w restricted to the window."""
        x = w.dense(self.window_start, self.L)
        return float(np.real(np.vdot(x, self.data @ x)))


def _path_params(ch, sign: int):
    """(signed delays, signed per-sample Doppler cycles or None, powers, Bd*Ts or None)."""
    if isinstance(ch, PathList):
        return sign * ch.delays, sign * ch.dopplers * ch.Ts, ch.powers, None
    if isinstance(ch, SeparableChannel):
        return sign * ch.delays, None, ch.powers(), ch.Bd * ch.Ts
    raise TypeError(f"unsupported channel type {type(ch).__name__}")


def best_window_start(w: Waveform, ch, L_out: int, sign: int = 1) -> int:
    """Start of the length-L_out window maximizing the useful-kernel trace.

    The KS diagonal restricted to a window starting at s has trace
    sum_k pi_k * (energy of w on [s - p_k, s - p_k + L_out)); ties break to
    the smallest s.  (The interference trace is N-periodic in s, so it cannot
    discriminate; maximizing the useful trace simultaneously minimizes the
    interference trace of the window.)
    """
    delays, _, powers, _ = _path_params(ch, sign)
    n = len(w)
    energy = np.abs(w.samples) ** 2
    cum = np.concatenate(([0.0], np.cumsum(energy)))
    d_min, d_max = int(delays.min()), int(delays.max())
    s_vals = np.arange(w.offset + d_min - L_out + 1, w.offset + n + d_max)
    trace = np.zeros(s_vals.size)
    for d, pi_k in zip(delays, powers):
        lo = np.clip(s_vals - int(d) - w.offset, 0, n)
        hi = np.clip(s_vals - int(d) + L_out - w.offset, 0, n)
        trace += pi_k * (cum[hi] - cum[lo])
    return int(s_vals[int(np.argmax(trace))])


def _shift_range(w: Waveform, s: int, L: int, d: int, N: int) -> range:
    """Lattice shifts n for which w(. - d - nN) overlaps [s, s+L)."""
    n_lo = (s - d - w.end) // N + 1
    n_hi = -(-(s - d + L - w.offset) // N) - 1
    return range(n_lo, n_hi + 1)


def _assemble(w: Waveform, ch, s: int, L: int, sign: int, N: int | None) -> np.ndarray:
    """sum_k pi_k [sum_n v_kn v_kn^H] with per-path Doppler phases folded in.

    N=None restricts to the n=0 term (useful kernel); otherwise n runs over
    every lattice shift with support overlap.  For separable channels the
    (real) Jakes autocorrelation is applied by the caller.
    """
    delays, nutilde, powers, _ = _path_params(ch, sign)
    idx = np.arange(L)
    step = 0 if N is None else N
    cols = []
    for k in range(len(powers)):
        d = int(delays[k])
        shifts = (0,) if N is None else _shift_range(w, s, L, d, N)
        phase = None if nutilde is None else np.exp(2j * np.pi * nutilde[k] * idx)
        root = math.sqrt(powers[k])
        for n in shifts:
            v = w.dense(s - d - n * step, L)
            if not v.any():
                continue
            cols.append(root * (v if phase is None else v * phase))
    if not cols:
        return np.zeros((L, L), dtype=np.complex128)
    G = np.column_stack(cols)
    return G @ G.conj().T


def _jakes_matrix(bd_ts: float, L: int) -> np.ndarray:
    return toeplitz(j0(np.pi * bd_ts * np.arange(L)))


def _comb_matrix(Q: int, L: int) -> np.ndarray:
    return toeplitz((np.arange(L) % Q == 0).astype(float))


def _hermitize(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def build_ks(w: Waveform, ch, L_out: int, window_start: int | None = None,
             sign: int = 1, label: str = "w") -> KernelMatrix:
    """Useful-signal kernel of waveform w on a length-L_out window.

    window_start=None selects the maximum-trace window (see
    :func:`best_window_start`).
    """
    if L_out < 1:
        raise ValueError(f"L_out must be >= 1, got {L_out}")
    s = best_window_start(w, ch, L_out, sign) if window_start is None else int(window_start)
    M = _assemble(w, ch, s, L_out, sign, N=None)
    _, _, _, bd_ts = _path_params(ch, sign)
    if bd_ts is not None and bd_ts != 0.0:
        M = M * _jakes_matrix(bd_ts, L_out)
    return KernelMatrix(_hermitize(M), KIND_USEFUL, label, sign, s)


def build_ki(w: Waveform, ch, cfg: LatticeConfig, L_out: int,
             window_start: int | None = None, sign: int = 1,
             label: str = "w") -> KernelMatrix:
    """Interference kernel: comb-folded total over all lattice shifts, minus KS."""
    ks = build_ks(w, ch, L_out, window_start=window_start, sign=sign, label=label)
    ki = _total_minus_ks(w, ch, cfg, ks)
    return KernelMatrix(ki, KIND_INTERFERENCE, label, sign, ks.window_start)


def _total_minus_ks(w: Waveform, ch, cfg: LatticeConfig, ks: KernelMatrix) -> np.ndarray:
    if isinstance(ch, (PathList, SeparableChannel)) and abs(ch.Ts - cfg.Ts) > 0:
        raise ValueError(f"channel Ts={ch.Ts} disagrees with lattice Ts={cfg.Ts}")
    L, s = ks.L, ks.window_start
    total = _assemble(w, ch, s, L, ks.sign, N=cfg.N)
    mask = cfg.Q * _comb_matrix(cfg.Q, L)
    _, _, _, bd_ts = _path_params(ch, ks.sign)
    if bd_ts is not None and bd_ts != 0.0:
        mask = mask * _jakes_matrix(bd_ts, L)
    return _hermitize(total * mask - ks.data)


def build_kin(ki: KernelMatrix, w_other_norm_sq: float, snr: float) -> KernelMatrix:
    """KIN = KI + (||w||^2 / SNR) I; snr may be math.inf (zero-noise limit)."""
    if ki.kind != KIND_INTERFERENCE:
        raise ValueError(f"build_kin expects an interference kernel, got {ki.kind!r}")
    if not snr > 0:
        raise ValueError(f"snr must be positive, got {snr}")
    data = ki.data
    if not math.isinf(snr):
        data = data + (w_other_norm_sq / snr) * np.eye(ki.L)
    return KernelMatrix(data, KIND_INTERFERENCE_NOISE, ki.built_from, ki.sign, ki.window_start)


def build_ks_kin(w: Waveform, ch, cfg: LatticeConfig, L_out: int, snr: float,
                 window_start: int | None = None, sign: int = 1,
                 label: str = "w") -> tuple[KernelMatrix, KernelMatrix]:
    """(KS, KIN) sharing one window — the pair a half-step solver consumes."""
    ks = build_ks(w, ch, L_out, window_start=window_start, sign=sign, label=label)
    ki = KernelMatrix(_total_minus_ks(w, ch, cfg, ks), KIND_INTERFERENCE, label, sign,
                      ks.window_start)
    return ks, build_kin(ki, w.energy, snr)
