"""Thermal occupation washes out the two-time violation.

The plane minimum of q_{-1,1}(0, t2) over the initial displacement weakens
monotonically as the temperature ratio k_B T / (hbar omega) grows: mixing in
thermal phonons drives the state toward classical statistics.

Run:  python3 demos/thermal_weakening.py    (takes a couple of minutes)
"""

from lgqpd import n_th_from_temperature
from lgqpd.verify import _panel_minimum

print(f"{'k_B T / hw':>10} {'n_th':>7} {'plane min q':>12} {'x0*':>6} {'p0*':>6}")
for temp in (0.0, 0.5, 1.0, 2.0):
    n_th = n_th_from_temperature(temp)
    res = _panel_minimum(-1, 1, r=0.5, n_th=n_th, n_starts=2,
                         coarse_steps=7, t2_coarse=64, t2_refine=24, nm_maxiter=60)
    print(f"{temp:10.1f} {n_th:7.3f} {res.value:12.5f} "
          f"{res.argmin['x0']:6.2f} {res.argmin['p0']:6.2f}")

print("\nthe violation fades with temperature; at k_B T = 2 hbar omega it is "
      "an order of magnitude shallower than at T = 0")
