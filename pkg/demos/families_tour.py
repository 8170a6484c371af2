#!/usr/bin/env python3
"""Tour the profile catalog.

Every catalog entry solves the quartic reduction ODE at its own value
of c.  The script prints the window, the worst quartic residual, the
third-order first integral where it is constant, and the detected
period for the oscillatory entries.  It finishes with the parametric
Abel curve against its hypergeometric closed form.
"""

import math

import numpy as np

from ewhorizon.nearhorizon import (abel_parametric, build_family,
                                   detect_period, ode3_first_integral,
                                   ode4_residual)
from ewhorizon.specfun import hyp2f1

ENTRIES = [
    ("linear", dict(ell=1.0, b=0.0)),
    ("quadratic", dict(b=0.0)),
    ("rational", dict(gamma=1.0, b=0.0)),
    ("rational", dict(gamma=2.0, b=0.0, alpha=1.0)),
    ("rational", dict(gamma=-1.0, b=0.0, alpha=1.0)),
    ("tan", dict(alpha=-1.0, ell=-0.5, b=0.0)),
    ("tanh", dict(c=-1.0, ell=-1.0, b=0.0)),
    ("jacobi", dict(m=1.0, c=0.0, b=0.0)),
]

print(f"{'family':12s} {'c':>6s} {'window':>22s} {'|ode4|':>10s} "
      f"{'first int.':>11s} {'period':>8s}")
print("-" * 76)

for tag, kwargs in ENTRIES:
    fam = build_family(tag, **kwargs)
    lo, hi = fam.window
    flo = lo if math.isfinite(lo) else -2.0
    fhi = hi if math.isfinite(hi) else flo + 4.0
    span = fhi - flo
    xs = np.linspace(flo + 0.12 * span, fhi - 0.12 * span, 9)
    worst = max(abs(ode4_residual(fam.field(float(x)), fam.c)) for x in xs)
    fi = ode3_first_integral(fam.field(float(xs[4])))
    period = detect_period(fam.field, float(xs[4]))
    wtxt = f"[{lo:+.2f}, {hi:+.2f}]"
    ptxt = f"{period:.4f}" if period is not None else "-"
    print(f"{tag:12s} {fam.c:6.2f} {wtxt:>22s} {worst:10.2e} "
          f"{fi:11.3e} {ptxt:>8s}")

print()
print("Abel curve (alpha = 0, beta = 2) against the 2F1 closed form")
beta = 2.0
pref = math.sqrt(2.0) / (2.0 * beta ** 0.25)
x_off_ab = x_off_hg = None
print(f"{'z':>6s} {'x (quadrature)':>15s} {'x (2F1)':>12s} {'diff':>10s}")
for z in (0.05, 0.2, 0.4, 0.6):
    y = math.sqrt(2.0 / (beta * z))
    _, x_ab = abel_parametric(y, 0.0, beta, 1.0)
    x_hg = pref * math.sqrt(z) * hyp2f1(0.5, 0.75, 1.5, z)
    if x_off_ab is None:
        x_off_ab, x_off_hg = x_ab, x_hg
    diff = abs((x_ab - x_off_ab) - (x_hg - x_off_hg))
    print(f"{z:6.2f} {x_ab - x_off_ab:15.10f} {x_hg - x_off_hg:12.10f} "
          f"{diff:10.2e}")
