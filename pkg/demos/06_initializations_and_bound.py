"""Initialization sensitivity and the product-space upper bound.

The alternating optimization is only guaranteed to find a local optimum, so it
is worth asking how much the starting pulse matters and how far the reached
SINR sits from any achievable value.  The study runs the optimizer from
several named initializations and reports them against two rulers: the
conventional CP-OFDM closed form (floor worth beating) and the Kronecker
relaxation bound (ceiling nobody can exceed).
"""

import numpy as np

from pops import (
    LatticeConfig,
    PopsConfig,
    SeparableChannel,
    initialization_study,
    make_gaussian_init,
    make_hermite_init,
    make_rrc_init,
    normalized,
    Waveform,
)

cfg = LatticeConfig(N=10, Q=8)
ch = SeparableChannel.from_spread_product(cfg, 0.01)
snr = 10.0

rng = np.random.default_rng(7)
center = (cfg.L_phi - 1) / 2.0
noise = normalized(Waveform(rng.standard_normal(cfg.L_phi)
                            + 1j * rng.standard_normal(cfg.L_phi),
                            offset=-(cfg.L_phi // 2)))
inits = [
    ("hermite-0", make_hermite_init(cfg, [1.0])),
    ("hermite-mix", make_hermite_init(cfg, [0.9, 0.0, 0.1])),
    ("gaussian-narrow", make_gaussian_init(cfg, center, 2.0)),
    ("gaussian-wide", make_gaussian_init(cfg, center, 6.0)),
    ("rrc-0.25", make_rrc_init(cfg, 0.25)),
    ("white-noise", noise),
]

study = initialization_study(cfg, ch, snr, inits,
                             pops=PopsConfig(snr=snr, max_iterations=100))

bound = float(study.series["upper_bound"][0])
conv = float(study.series["conventional"][0])
print(f"upper bound {bound:.3f}, conventional baseline {conv:.3f}\n")
print(f"{'initialization':>16} {'final sinr':>11} {'of bound':>9}")
for i, (name, _) in enumerate(inits):
    val = float(study.series["sinr"][i])
    print(f"{name:>16} {val:11.4f} {100 * val / bound:8.1f}%")

print("\nEvery run beats the conventional pair and sits under the bound; the")
print("smooth initializations all land on the same optimum, and even white")
print("noise recovers most of it.")
