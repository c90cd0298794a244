"""The bounded circumnavigation law on its own.

With the true target position fed back, a stationary target is orbited at
close to rho. The small outward offset, about alpha^2 dt / (2 rho), comes
from the forward-Euler observer step: each tangential move lands slightly
outside the circle. A moving target makes the standoff distance oscillate: the
radial term is purely proportional, so the target's own motion leaks into
the distance error with an amplitude of roughly v / sqrt(1 + (alpha/rho)^2).
"""
import math
from dataclasses import replace

import numpy as np

from bearing_tma import NoiseConfig, TmaParams
from bearing_tma.harness import TrialConfig, run_trial

base = TrialConfig(noise=NoiseConfig(0.0, 0.0, 0), control_source="truth")
rho, alpha = base.circ.rho, base.circ.alpha

for label, v0 in (("stationary", [0.0, 0.0]), ("moving 1.41 m/s", [1.0, 1.0])):
    rec = run_trial(replace(base, x_true=TmaParams([10.0, 5.0], v0)))
    d = np.hypot(rec["px"] - rec["pox"], rec["py"] - rec["poy"])[len(rec) // 2:]
    speed = np.hypot(rec["ux"], rec["uy"]).max()
    print(f"{label:16s} standoff {d.min():.3f} .. {d.max():.3f} m (rho={rho}), "
          f"max |u| {speed:.3f} <= {base.circ.u_bound}")

v = math.hypot(1.0, 1.0)
print(f"predicted oscillation amplitude for the moving target: {v / math.hypot(1, alpha / rho):.2f} m")
