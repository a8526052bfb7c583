"""Shared factories for randomized test instances."""

import numpy as np

from pops import KernelMatrix, LatticeConfig, PathList, Waveform, normalized


def random_pathlist(rng, max_delay, k=3, complex_doppler=True, nu_scale=0.01):
    """K-path channel with random integer delays, Dopplers and unit total power."""
    delays = np.sort(rng.choice(max_delay + 1, size=min(k, max_delay + 1), replace=False))
    if complex_doppler:
        nus = rng.uniform(-nu_scale, nu_scale, size=delays.size)
    else:
        nus = np.zeros(delays.size)
    powers = rng.uniform(0.2, 1.0, size=delays.size)
    powers /= powers.sum()
    return PathList.from_paths(list(zip(delays.tolist(), nus.tolist(), powers.tolist())))


def random_waveform(rng, length, offset=0):
    """Unit-energy complex waveform with i.i.d. Gaussian samples."""
    z = rng.standard_normal(length) + 1j * rng.standard_normal(length)
    return normalized(Waveform(z, offset=offset))


def small_config(n=10, q=8, dphi=1, dpsi=1):
    return LatticeConfig(N=n, Q=q, Dphi=dphi, Dpsi=dpsi)


def random_kernel_pair(rng, L, ridge=0.1):
    """Random PSD useful kernel and PD interference-plus-noise kernel."""
    G = rng.standard_normal((L, L)) + 1j * rng.standard_normal((L, L))
    H = rng.standard_normal((L, L)) + 1j * rng.standard_normal((L, L))
    A = (G @ G.conj().T) / L
    B = (H @ H.conj().T) / L + ridge * np.eye(L)
    ks = KernelMatrix(A, "useful", "synthetic", 1, 0)
    kin = KernelMatrix(B, "interference-plus-noise", "synthetic", 1, 0)
    return ks, kin
