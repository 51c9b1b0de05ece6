"""Compare the two analytic evaluation routes along a time sweep.

The eigenbasis series (at increasing truncation order) and the closed
angular-integral route evaluate the same two-time quasi-probability
q_{1,-1}(0, t2) for a strongly squeezed coherent state.  The series visibly
converges onto the integral curve as the truncation order grows.

Run:  python3 demos/route_comparison.py [out.csv]
"""

import math
import sys

import numpy as np

from lgqpd import StateSpec, q_sign_series_curve, qpd_integral

state = StateSpec.from_phase_space(x0=0.550, p0=1.925, r=1.0, theta0=math.pi / 3)
s1, s2, t1 = 1, -1, 0.0
grid = np.arange(0.0, 2 * math.pi + 1e-9, 0.05)

curves = {n: q_sign_series_curve(state, s1, s2, t1, grid, n_max=n) for n in (5, 50, 500)}
integral = np.array([qpd_integral(state, None, s1, s2, t1, float(t)) for t in grid])

print(f"q_(1,-1)(0, t2) for x0=0.550 p0=1.925 r=1 theta0=pi/3  ({grid.size} points)")
print(f"{'w*t2':>6} {'series n=5':>12} {'n=50':>12} {'n=500':>12} {'integral':>12}")
for k in range(0, grid.size, 10):
    print(f"{grid[k]:6.2f} {curves[5][k]:12.6f} {curves[50][k]:12.6f} "
          f"{curves[500][k]:12.6f} {integral[k]:12.6f}")

for n in (5, 50, 500):
    dev = np.max(np.abs(curves[n] - integral))
    print(f"max |series(n={n:3d}) - integral| = {dev:.2e}")

if len(sys.argv) > 1:
    out = sys.argv[1]
    header = "wt2,series_n5,series_n50,series_n500,integral"
    np.savetxt(out, np.column_stack([grid, curves[5], curves[50], curves[500], integral]),
               delimiter=",", header=header, comments="")
    print(f"wrote {out}")
