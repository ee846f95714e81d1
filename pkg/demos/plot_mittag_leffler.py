"""
The one-parameter Mittag-Leffler slice E_{1,beta}
=================================================

Closed-form derivatives of power functions need ``E_{1,beta}(-x)`` for
``x >= 0``. This script looks at how the evaluation behaves across the
argument range.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cfcalc import gamma, mittag_leffler_1

###############################################################################
# For beta = 1 the function is the exponential, for beta = 2 it is
# ``(e^z - 1) / z``. Both give a quick sanity check.

for z in (-30.0, -1.0, 0.5, 10.0):
    print(f"z={z:6.1f}  E_1,1={mittag_leffler_1(1.0, z):.17g}  exp={math.exp(z):.17g}")
print(f"E_1,2(-50) = {mittag_leffler_1(2.0, -50.0):.17g}, (1 - e^-50)/50 = {-math.expm1(-50) / 50:.17g}")

###############################################################################
# The defining series cancels badly for negative arguments: at z = -35 its
# terms reach about 1e14. The routine sums a positive series there instead
# and switches to the asymptotic expansion past x = 50, where
# ``E_{1,beta}(-x) ~ 1 / (x Gamma(beta - 1))``.

x = np.linspace(0.0, 120.0, 600)
fig, ax = plt.subplots()
for beta in (0.25, 0.5, 1.5, 2.5):
    ax.semilogy(x, [abs(mittag_leffler_1(beta, -v)) for v in x], label=f"beta={beta}")
ax.axvline(50.0, color="grey", lw=0.5)
ax.set_xlabel("x")
ax.set_ylabel("|E_1,beta(-x)|")
ax.legend()
fig.savefig("mittag_leffler.png", dpi=120)

###############################################################################
# Gamma comes from a Lanczos approximation; integers are exact factorials.

print("Gamma(0.5)^2 / pi =", gamma(0.5) ** 2 / math.pi)
print("Gamma(21) == 20! :", gamma(21.0) == math.factorial(20))
