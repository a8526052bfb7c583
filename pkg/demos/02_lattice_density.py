"""Trade spectral efficiency against interference: SIR versus FT.

FT = N/Q is the inverse lattice density; FT = 1 is Nyquist signaling with no
guard, larger FT buys orthogonality headroom at the cost of rate.  The sweep
reruns the optimizer at every grid point and carries the conventional CP-OFDM
closed form alongside, including an unequal-duration series where only the
receive pulse is lengthened.
"""

import math
from pathlib import Path

from pops import LatticeConfig, PopsConfig, SeparableChannel, sweep_ft, write_sweep_csv


def db(x: float) -> float:
    return 10.0 * math.log10(x)


# Reference lattice for the channel: the spread factor is tied to a physical
# channel, so it is built once (here at FT=1.25) and reused at every FT point.
ref = LatticeConfig(N=40, Q=32)
ch = SeparableChannel.from_spread_product(ref, 0.01)

fts = [34 / 32, 36 / 32, 40 / 32, 44 / 32, 48 / 32, 56 / 32, 2.0]
result = sweep_ft(
    ref,
    ch,
    fts,
    durations=((1, 1), (1, 3)),
    snr=math.inf,
    pops=PopsConfig(max_iterations=80, snr=math.inf),
)

print("SIR in dB versus FT (channel spread Bd*Tm = 0.01):\n")
header = f"{'FT':>6} {'conventional':>13} {'optimized 1x1':>14} {'optimized 1x3':>14}"
print(header)
for i, ft in enumerate(result.axis_values):
    conv = db(result.series["conventional"][i])
    p11 = db(result.series["pops_dphi1_dpsi1"][i])
    p13 = db(result.series["pops_dphi1_dpsi3"][i])
    print(f"{ft:6.3f} {conv:13.2f} {p11:14.2f} {p13:14.2f}")

print("\nNotes: the optimizer dominates the CP design at every point, the gap")
print("widens on sparser lattices, and the longer receive pulse adds a little")
print("more on top of the equal-duration design.")

out = Path("demo_out/density/sweep_ft.csv")
out.parent.mkdir(parents=True, exist_ok=True)
write_sweep_csv(result, out)
print(f"\nwrote {out} (rerunnable from its metadata sidecar)")
