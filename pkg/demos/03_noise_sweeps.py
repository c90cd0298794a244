"""Position MSE as bearing noise and self-localization noise grow.

The bearing sweep holds sigma_p = 1 m; the position sweep holds
sigma_theta = 5 deg. All levels reuse the same seeds.

    python3 demos/03_noise_sweeps.py [n_trials]
"""
import math
import sys
from pathlib import Path

from bearing_tma.harness import TrialConfig, run_noise_sweep
from bearing_tma.output import plot_sweep, write_sweep_csv

n_trials = int(sys.argv[1]) if len(sys.argv) > 1 else 20
cfg = TrialConfig()
out = Path("demo_out")
out.mkdir(exist_ok=True)

sweeps = {
    "bearing": [(math.radians(d), 1.0) for d in range(1, 11)],
    "position": [(math.radians(5.0), sp) for sp in (0.001, 0.01, 0.1, 1.0, 10.0)],
}
for name, levels in sweeps.items():
    res = run_noise_sweep(cfg, levels, n_trials, estimators=("rtls", "plkf"))
    print(f"{name} sweep ({n_trials} trials per level)")
    print(f"  {'sigma_theta':>11s} {'sigma_p':>8s} {'RTLS':>9s} {'PLKF':>9s}")
    for (st, sp), a, b in zip(res.levels, res.mse("rtls"), res.mse("plkf")):
        print(f"  {math.degrees(st):10.1f}d {sp:8.3g} {a:9.4f} {b:9.4f}")
    write_sweep_csv(res, out / f"sweep_{name}.csv")
    plot_sweep(res, out / f"mse_{name}.svg")
