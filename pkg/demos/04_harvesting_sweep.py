"""Mutual-information sweeps: single peak versus oscillation.

Runs two bundled presets over interdetector separation. At slow rotation
(fig2a: a=0.1, R=0.02) each detuning curve has a single harvesting peak.
At fast rotation (fig2c: a=5, R=0.02) the curves oscillate; the counting
helper makes that transition quantitative.
"""
import numpy as np

from udwmi.sweep import count_interior_maxima, load_config, run_sweep

for name in ("fig2a", "fig2c"):
    spec = load_config(name)
    rows = run_sweep(spec)
    n = spec.axis.points
    seps = np.array([r.sep for r in rows[:n]])
    print(f"preset {name}: a={spec.accel}, R={spec.radius}, dz={spec.dz}, "
          f"{n} points per curve")
    for k, ratio in enumerate(spec.gap_ratios):
        curve = np.array([r.mutual_info for r in rows[k * n:(k + 1) * n]])
        peaks = count_interior_maxima(curve)
        at = seps[int(np.argmax(curve))]
        print(f"  detuning ratio {ratio:4.1f}: max I = {curve.max():.3e} "
              f"at L = {at:.2f}, interior maxima: {peaks}")
    statuses = sorted(set(r.status for r in rows))
    print(f"  row statuses: {statuses}")
    print()

print("statuses tag rather than hide regime warnings: warn:perturbative")
print("marks rows whose P_A + P_B exceeds the leading-order budget")
