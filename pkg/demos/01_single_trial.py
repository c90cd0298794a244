"""One closed-loop run: an observer circles a moving target while RTLS and
the PLKF estimate its initial position and velocity from noisy bearings.

    python3 demos/01_single_trial.py [out_dir]
"""
import math
import sys
from dataclasses import replace
from pathlib import Path

from bearing_tma import NoiseConfig
from bearing_tma.harness import TrialConfig, run_trial
from bearing_tma.output import plot_trajectory, write_trial_csv

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out/single")
out.mkdir(parents=True, exist_ok=True)

# target starts at (10, 5) moving at (1, 1) m/s; observer starts at (1, 1)
cfg = TrialConfig(noise=NoiseConfig(sigma_theta=math.radians(1.0), sigma_p=0.1, seed=7))
records = [run_trial(replace(cfg, estimator=est), trial=i) for i, est in enumerate(("rtls", "plkf"))]

for rec in records:
    k10 = int(10 / cfg.dt)
    print(f"{rec.estimator.upper():5s} e_s at t=10s: {rec['e_s'][k10]:.3f}   "
          f"final e_s: {rec['e_s'][-1]:.4f}   final e_p: {rec['e_p'][-1]:.4f} m")

# once the estimate settles the observer should sit near rho from the target
rtls = records[0]
d = ((rtls["px"] - rtls["pox"]) ** 2 + (rtls["py"] - rtls["poy"]) ** 2) ** 0.5
print(f"standoff over the last 30 s: {d[-300:].min():.2f} .. {d[-300:].max():.2f} m "
      f"(rho = {cfg.circ.rho})")

write_trial_csv(records, out / "trial.csv")
plot_trajectory(records, out / "trajectory.svg", cfg.circ.rho)
print(f"wrote {out}/trial.csv and {out}/trajectory.svg")
