"""
Bargmann norms and growth
=========================

An entire function f(z) = sum a_k z^k belongs to Bargmann space when
sum k! |a_k|^2 is finite.  Eigenfunctions have |Re beta| < 1/2 and pass;
the x = 1 solution has beta = 1/2 exactly and its partial sums grow like
sqrt(K).  Growth order and type of |psi_1| come from max |f| on circles.
"""
import math

import numpy as np

from degenerate_rabi import (Branch, Diverging, ModelParams, build_eigenfunction, degenerate_solution,
                             eigenfunction_series, growth_order_type, norm_sq_adaptive, solve_level)
from degenerate_rabi.bargmann import gaussian_polynomial_series, sqrt_growth_slopes
from degenerate_rabi.eigenfunction import default_radii

p = ModelParams.uplus(1.0, 0.5, 0.3)

print("norms of psi_1 and psi_2 (c = 1)")
for branch in Branch:
    for n in (0, 2, 5):
        ef = build_eigenfunction(p, solve_level(p, n, branch)[0])
        norms = [norm_sq_adaptive(lambda K, i=i: eigenfunction_series(ef, K)[i]) for i in (0, 1)]
        print(f"  {branch.value:>5} n={n}  4 beta^2={4 * ef.beta.real ** 2:.4f}  "
              f"||psi_1||^2={norms[0].value:.6e}  ||psi_2||^2={norms[1].value:.6e}")

# the boundary solution: terms (2k)!/(4^k k!^2) ~ (pi k)^(-1/2)
psi1, psi2 = degenerate_solution(p)
series = gaussian_polynomial_series(psi1, 4000)
slopes = sqrt_growth_slopes(series)
verdicts = [norm_sq_adaptive(lambda K, gp=gp: gaussian_polynomial_series(gp, K), rel_tol=None)
            for gp in (psi1, psi2)]
print("x = 1:", [type(v).__name__ for v in verdicts],
      "partial-sum slopes against sqrt(K):", np.round(slopes, 4), f"(sqrt(2/pi) = {math.sqrt(2 / math.pi):.4f})")
assert all(isinstance(v, Diverging) for v in verdicts)

print("growth order and type of psi_1")
for branch in Branch:
    ef = build_eigenfunction(p, solve_level(p, 4, branch)[0])
    est = growth_order_type(ef, default_radii(ef.beta))
    print(f"  {branch.value:>5} n=4  order {est.order_hat:.4f}  type {est.type_hat:.5f}  "
          f"|Re beta| {abs(ef.beta.real):.5f}")
