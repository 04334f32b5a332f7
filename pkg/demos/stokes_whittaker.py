"""
Stokes data and the Whittaker form
==================================

In the Laplace plane the two saddles alpha_1, alpha_2 solve
4 alpha^2 + 4 x alpha + 1 = 0.  For |x| > 1 they are real and a
normalizable saddle exists; for |x| < 1 they sit on the circle |alpha| = 1/2,
which is the continuum.  The second-order equation maps to Whittaker form
with kappa = -m/4 and mu = 1/4, and a level shows up as a vanishing Stokes
multiplier exactly where the quantization condition holds.
"""
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from degenerate_rabi import (Branch, ModelParams, characteristic_exponents, multiplier_vanishes,
                             saddle_points, solve_level, whittaker_params)
from degenerate_rabi.spectrum import m_value
from degenerate_rabi.stokes import continuum_directions, equivalence_grid, multiplier_predicate
from degenerate_rabi.verify import whittaker_grid

for x in (-3.0, -0.4, 0.0, 0.7, 2.5):
    pair = saddle_points(x)
    print(f"x={x:+.1f}  alpha = {complex(pair.alpha1):.4f}, {complex(pair.alpha2):.4f}")
print("continuum directions at x = 0:", np.round(continuum_directions(0.0), 4))

p = ModelParams.uplus(1.0, 0.5, 1.0)
# at n = 0 (m = 1) both multipliers vanish; the sign of m assigns it to the Upper branch
print("levels and their Stokes multipliers")
for n in range(4):
    (pt,) = solve_level(p, n, Branch.UPPER)
    wp = whittaker_params(p, pt.x)
    alpha, beta = multiplier_vanishes(wp)
    print(f"  n={n}  x={pt.x:.6f}  kappa={wp.kappa:+.10f}  alpha vanishes {alpha}, beta vanishes {beta}")

# halfway between two levels neither multiplier vanishes
x_mid = brentq(lambda t: m_value(p, t) - 4.0, 1.0001, 100)
print(f"between levels (m = 4, x = {x_mid:.4f}): eigenvalue by multipliers? {multiplier_predicate(p, x_mid)}")

# exact exponent table for kappa = -3/4, i.e. the n = 1 Upper level
table = characteristic_exponents(Fraction(-3, 4))
print("exponents at alpha_2:", [str(b) for b in table.at_alpha2], "pair sums:",
      [str(s) for s in table.pair_sums()])

agree = [np.all(equivalence_grid(p, whittaker_grid(b, 1000))) for b in Branch]
print("multiplier and quantization predicates agree on 1000 points per branch:", all(agree))
