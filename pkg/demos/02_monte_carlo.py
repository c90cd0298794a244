"""Monte Carlo comparison of RTLS and the PLKF on the reference scenario.

Both estimators see identical noise draws in every trial, so the gap between
the mean error curves is a paired comparison.

    python3 demos/02_monte_carlo.py [n_trials]
"""
import math
import sys
from pathlib import Path

import numpy as np

from bearing_tma import NoiseConfig
from bearing_tma.harness import TrialConfig, run_monte_carlo
from bearing_tma.output import plot_mean_errors

n_trials = int(sys.argv[1]) if len(sys.argv) > 1 else 50
cfg = TrialConfig(noise=NoiseConfig(math.radians(1.0), 0.1, 0))
summ = run_monte_carlo(cfg, n_trials, base_seed=0, estimators=("rtls", "plkf"))

steady_plkf = float(np.mean(summ.mean_e_s["plkf"][-cfg.n_steps // 5:]))
for est in summ.estimators:
    curve = summ.mean_e_s[est]
    below = np.flatnonzero(curve < 0.5 * steady_plkf)
    k = int(below[0]) if below.size else None
    print(f"{est.upper():5s} mean final e_s {curve[-1]:.4f}  position MSE {summ.mse_pos[est]:.4f}  "
          f"median final e_p {np.median(summ.final_e_p[est]):.4f}  "
          f"first below half PLKF steady error at k={k}")

out = Path("demo_out")
out.mkdir(exist_ok=True)
plot_mean_errors(summ, out / "mean_error.svg", cfg.dt)
print(f"wrote {out}/mean_error.svg")
