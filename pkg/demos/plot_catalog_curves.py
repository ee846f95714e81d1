"""
Closed-form derivative curves
=============================

Derivatives of ``t`` and ``sin t`` for several orders. As alpha grows the
curves approach the classical derivatives 1 and cos t, except right at
t = 0: every CF derivative vanishes at its lower limit.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cfcalc import Monomial, Power, Sine, cf_derivative_closed, classical_limit_derivative
from cfcalc.catalog import monomial_terms

alphas = (0.3, 0.5, 0.7, 0.9, 0.99)
t = np.linspace(0.0, 2 * np.pi, 401)

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for fn, ax, name in ((Monomial(1), axes[0], "t"), (Sine(), axes[1], "sin t")):
    for alpha in alphas:
        ax.plot(t, [cf_derivative_closed(fn, alpha, 0.0, s) for s in t], label=f"alpha={alpha}")
    ax.set_title(f"D^alpha {name}")
    ax.set_xlabel("t")
axes[0].legend()
fig.savefig("catalog_curves.png", dpi=120)

###############################################################################
# At t = 0 the fractional derivative of sin is 0 for every order while the
# classical derivative is 1, so the limit alpha -> 1 is not uniform there.

print("D^alpha sin at 0:", [cf_derivative_closed(Sine(), a, 0.0, 0.0) for a in alphas])
print("classical:", classical_limit_derivative(Sine(), 0.0, 0.0))

###############################################################################
# A monomial splits into a dominant term ``(m / alpha) t^(m-1)``, a
# polynomial memory term and a decaying exponential.

for alpha in (0.5, 0.9, 0.99):
    dom, mem, ex = monomial_terms(3, alpha, 2.0)
    print(f"alpha={alpha}: dominant {dom:.6f}, memory {mem:.6f}, exponential {ex:.2e}")

###############################################################################
# For ``t^beta`` with beta < 1 the classical derivative blows up at 0, but
# the fractional one goes to 0 like ``t^beta``.

for s in (1e-8, 1e-4, 1e-2, 1.0):
    print(f"t={s:g}: D^0.5 t^0.5 = {cf_derivative_closed(Power(0.5), 0.5, 0.0, s):.6e}, "
          f"0.5 t^-0.5 = {0.5 / math.sqrt(s):.3e}")
