"""Kronecker-relaxation upper bound on the achievable SINR.

For a fixed pair of support windows, the useful and interference powers are
quadratic forms in the Kronecker vector ``chi = phi (x) conj(psi)`` (transmit
sample index major, receive index minor),

    P_S = chi^H A chi,      P_I = chi^H B chi,

where ``A`` collects the per-path selection operators that pair a transmit
sample ``alpha`` with a receive sample ``beta`` at the path lag
``beta - alpha = p_k``, and ``B`` collects the same pairings at every lattice
lag ``p_k + n N`` folded over the ``Q`` subcarriers with the comb identity,
minus ``A``.  Maximizing the quotient over *all* unit vectors ``chi`` instead
of the rank-one set ``{phi (x) conj(psi)}`` relaxes the waveform-design
problem into a single generalized eigenvalue problem whose top eigenvalue can
never be below the SINR of any concrete waveform pair on those windows.

The construction is pinned down by the defining identity
``kronecker_quotient(sys, tx, rx) == sir(tx, rx)`` for every waveform pair
embedded in the system's windows; ``tests/test_bound.py`` checks it against
the kernel engine on randomized instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channel import PathList
from .lattice import LatticeConfig, Waveform

__all__ = [
    "KroneckerSystem",
    "SingularInterferenceError",
    "build_kronecker_system",
    "kronecker_quotient",
    "upper_bound",
]

# Relative eigenvalue threshold below which B is treated as singular.
_SINGULAR_RTOL = 1e-12


class SingularInterferenceError(np.linalg.LinAlgError):
    """Raised when the interference operator B is singular at snr = inf.

    This happens on channels whose lattice reproduces the transmit pulse
    orthogonally (e.g. the ideal single-path channel at full guard), where
    some chi carries zero interference and the SIR bound is infinite.  Use a
    finite snr to obtain the noise-regularized SINR bound instead.
    """


@dataclass(frozen=True)
class KroneckerSystem:
    """Quadratic forms of the relaxed SINR problem on fixed windows.

    Attributes
    ----------
    a_matrix, b_matrix : ndarray
        Hermitian PSD operators on the Kronecker space; ``chi^H A chi`` is
        the useful power and ``chi^H B chi`` the interference power of the
        pair ``chi = phi (x) conj(psi)`` (up to the common energy factor,
        which cancels in every quotient).
    phi_offset, phi_length : int
        Transmit-side window: global sample indices
        ``[phi_offset, phi_offset + phi_length)``.
    psi_offset, psi_length : int
        Receive-side window, same convention.
    """

    a_matrix: np.ndarray
    b_matrix: np.ndarray
    phi_offset: int
    phi_length: int
    psi_offset: int
    psi_length: int

    def __post_init__(self) -> None:
        dim = self.phi_length * self.psi_length
        for name in ("a_matrix", "b_matrix"):
            mat = getattr(self, name)
            if mat.shape != (dim, dim):
                raise ValueError(f"{name} must be {dim}x{dim}, got {mat.shape}")
            mat.flags.writeable = False

    @property
    def dimension(self) -> int:
        return self.phi_length * self.psi_length


def _pair_indices(shift: int, l_phi: int, l_psi: int) -> tuple[np.ndarray, np.ndarray]:
    """Local (i, j) index pairs with j - i == shift, or empty arrays."""
    i_lo = max(0, -shift)
    i_hi = min(l_phi, l_psi - shift)
    if i_hi <= i_lo:
        empty = np.empty(0, dtype=np.intp)
        return empty, empty
    i = np.arange(i_lo, i_hi, dtype=np.intp)
    return i, i + shift


def build_kronecker_system(
    cfg: LatticeConfig,
    ch: PathList,
    *,
    phi_offset: int | None = None,
    phi_length: int | None = None,
    psi_offset: int | None = None,
    psi_length: int | None = None,
    max_dimension: int = 4096,
) -> KroneckerSystem:
    """Assemble the A/B operators for the given lattice, channel and windows.

    Parameters
    ----------
    cfg : LatticeConfig
        Lattice geometry; supplies N (time stride), Q (subcarriers) and the
        default window lengths ``L_phi``/``L_psi``.
    ch : PathList
        Discrete channel paths.  Separable channels are bounded through
        their Doppler quadrature grid (``SeparableChannel.to_pathlist``).
    phi_offset, phi_length, psi_offset, psi_length : int, optional
        Support windows for the two prototypes.  The default transmit window
        is the optimizer's: length ``cfg.L_phi`` centered so that
        ``phi_offset = -(L_phi // 2)``.  The default receive window is the
        union of every length-``cfg.L_psi`` window the optimizer could
        select for that transmit support (all starts with nonzero useful
        power), so the bound dominates ``run_pops`` regardless of which
        receive window its trace rule picks; a waveform supported on any
        sub-window embeds with an unchanged quotient.
    max_dimension : int
        Guard on the Kronecker dimension ``phi_length * psi_length``; the
        generalized eigensolve is dense and cubic, so very large windows are
        refused with the size report rather than silently thrashing.

    Returns
    -------
    KroneckerSystem
    """
    if phi_length is None:
        phi_length = cfg.L_phi
    if phi_offset is None:
        phi_offset = -(phi_length // 2)
    if psi_length is None or psi_offset is None:
        if psi_length is not None or psi_offset is not None:
            raise ValueError("give both psi_offset and psi_length, or neither")
        # Candidate receive windows [s, s + L_psi) have nonzero useful power
        # for s in [phi_offset + d_min - L_psi + 1, phi_offset + L_phi - 1
        # + d_max]; take their union so any optimizer choice is covered.
        d_min = int(ch.delays[0])
        d_max = int(ch.delays[-1])
        psi_offset = phi_offset + d_min - cfg.L_psi + 1
        last_start = phi_offset + phi_length - 1 + d_max
        psi_length = last_start + cfg.L_psi - psi_offset
    if phi_length < 1 or psi_length < 1:
        raise ValueError("window lengths must be positive")
    dim = phi_length * psi_length
    if dim > max_dimension:
        raise ValueError(
            f"Kronecker dimension {phi_length}*{psi_length} = {dim} exceeds "
            f"max_dimension = {max_dimension}; the dense eigensolve scales as "
            "dim^3 -- shrink the windows or raise max_dimension explicitly"
        )
    if ch.Ts != cfg.Ts:
        raise ValueError(f"channel Ts = {ch.Ts} does not match lattice Ts = {cfg.Ts}")

    n_cols = np.arange(psi_length, dtype=np.float64)
    diff = n_cols[:, None] - n_cols[None, :]  # j - j'
    comb = np.where(np.round(diff).astype(np.int64) % cfg.Q == 0, float(cfg.Q), 0.0)

    a = np.zeros((dim, dim), dtype=np.complex128)
    b = np.zeros((dim, dim), dtype=np.complex128)
    for delay, doppler, power in zip(ch.delays, ch.dopplers, ch.powers):
        nu_ts = doppler * cfg.Ts
        # rho_k at (row - col) on receive indices enters conjugated; see the
        # quadratic-form matching in tests/test_bound.py.
        rho = np.exp(-2j * np.pi * nu_ts * diff)
        base_shift = int(delay) + phi_offset - psi_offset
        # All n with a nonempty pairing: -phi_length < shift + nN < psi_length.
        n_lo = math.ceil((-phi_length + 1 - base_shift) / cfg.N)
        n_hi = math.floor((psi_length - 1 - base_shift) / cfg.N)
        for n in range(n_lo, n_hi + 1):
            i, j = _pair_indices(base_shift + n * cfg.N, phi_length, psi_length)
            if i.size == 0:
                continue
            flat = i * psi_length + j
            block = np.ix_(flat, flat)
            jj = np.ix_(j, j)
            b[block] += power * (comb[jj] * rho[jj])
            if n == 0:
                a[block] += power * rho[jj]
    b -= a
    a = 0.5 * (a + a.conj().T)
    b = 0.5 * (b + b.conj().T)
    return KroneckerSystem(
        a_matrix=a,
        b_matrix=b,
        phi_offset=phi_offset,
        phi_length=phi_length,
        psi_offset=psi_offset,
        psi_length=psi_length,
    )


def _embed(w: Waveform, offset: int, length: int, side: str) -> np.ndarray:
    if w.offset < offset or w.end > offset + length:
        raise ValueError(
            f"{side} support [{w.offset}, {w.end}) does not fit in the system "
            f"window [{offset}, {offset + length})"
        )
    return w.dense(offset, length)


def kronecker_quotient(sys: KroneckerSystem, tx: Waveform, rx: Waveform) -> float:
    """P_S / P_I of a concrete pair, evaluated through the relaxed operators.

    Equals ``sinr(tx, rx, ...).sir`` from the kernel engine whenever both
    supports fit the system's windows; this is the identity that defines the
    A/B construction.
    """
    phi = _embed(tx, sys.phi_offset, sys.phi_length, "transmit")
    psi = _embed(rx, sys.psi_offset, sys.psi_length, "receive")
    chi = np.kron(phi, psi.conj())
    ps = float(np.real(chi.conj() @ (sys.a_matrix @ chi)))
    pi = float(np.real(chi.conj() @ (sys.b_matrix @ chi)))
    if pi <= 0.0:
        return math.inf if ps > 0.0 else 0.0
    return ps / pi


def upper_bound(sys: KroneckerSystem, snr: float = math.inf) -> float:
    """Largest generalized eigenvalue of (A, B + I/snr).

    With unit-norm ``chi`` the noise term contributes ``1/snr`` to the
    denominator, so the quotient relaxes the exact SINR and its maximum
    dominates the SINR of every waveform pair supported on the system's
    windows (snr = inf gives the pure SIR bound).

    Raises
    ------
    SingularInterferenceError
        If snr = inf and B is singular (the SIR bound is infinite).
    """
    if not snr > 0.0:
        raise ValueError(f"snr must be positive, got {snr}")
    # Directions outside range(A + B) carry neither useful nor interference
    # power (both forms are PSD, so null quadratic form means null vector);
    # they never help the quotient and would fake a singular B on windows
    # larger than the channel's reach.  Work on range(A + B).
    total_eigs, total_vecs = scipy.linalg.eigh(sys.a_matrix + sys.b_matrix)
    keep = total_eigs > _SINGULAR_RTOL * max(total_eigs[-1], 0.0)
    if not np.any(keep):
        return 0.0
    basis = total_vecs[:, keep]
    a_sub = basis.conj().T @ sys.a_matrix @ basis
    b_sub = basis.conj().T @ sys.b_matrix @ basis
    a_sub = 0.5 * (a_sub + a_sub.conj().T)
    b_sub = 0.5 * (b_sub + b_sub.conj().T)
    if math.isfinite(snr):
        b_sub[np.diag_indices_from(b_sub)] += 1.0 / snr
    else:
        eigs = scipy.linalg.eigvalsh(b_sub)
        if eigs[0] <= _SINGULAR_RTOL * max(eigs[-1], 0.0):
            raise SingularInterferenceError(
                "interference operator is singular at snr = inf (some chi has "
                "zero interference, the SIR bound is infinite); pass a finite "
                "snr for the noise-regularized bound"
            )
    dim = a_sub.shape[0]
    top = scipy.linalg.eigh(
        a_sub,
        b_sub,
        eigvals_only=True,
        subset_by_index=[dim - 1, dim - 1],
    )
    return float(top[0])
