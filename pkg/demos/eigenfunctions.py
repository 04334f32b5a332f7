"""
Closed-form eigenfunctions in Bargmann space
============================================

Each level comes with psi_1 = c exp(-beta z^2) H_n(scale z) and psi_2
obtained from psi_1 by one derivative.  Here we build a few of them,
check them against the coupled first-order system on a complex grid and
count the real zeros of the Hermite factor.
"""
import numpy as np

from degenerate_rabi import (Branch, ModelParams, build_eigenfunction, ode_residual_second_order,
                             ode_residual_system, solve_level)

p = ModelParams.uplus(1.0, 0.5, 0.3)
t = np.linspace(-2, 2, 5)
grid = (t[:, None] + 1j * t[None, :]).ravel()

for branch in Branch:
    print(f"{branch.value} branch")
    for n in range(4):
        (pt,) = solve_level(p, n, branch)
        ef = build_eigenfunction(p, pt)
        r1, r2 = ode_residual_system(p, pt.energy, ef.psi1, ef.psi2, grid)
        r3 = ode_residual_second_order(p, pt.x, ef.psi1, grid)
        worst = max(np.abs(r1).max(), np.abs(r2).max(), np.abs(r3).max())
        print(f"  n={n}  x={pt.x:+.6f}  E={pt.energy:+.6f}  beta={ef.beta.real:+.4f}  "
              f"max residual {worst:.1e}")

# Lower-branch Hermite factors have a real scale, so H_n(scale z) has n
# real zeros; the Gaussian does not change the sign.
(pt,) = solve_level(p, 3, Branch.LOWER)
ef = build_eigenfunction(p, pt)
z = np.linspace(-6, 6, 12001)
values = ef.psi1(z).real
signs = np.sign(values[values != 0])
print("sign changes of psi_1 on the real axis, n=3:", np.count_nonzero(np.diff(signs)))

# U = -2 omega is the mirror problem: the two spinor components trade places
mirror = ModelParams(1.0, -0.5, 0.3, -2.0)
(pt,) = solve_level(mirror, 1, Branch.UPPER)
first, second = build_eigenfunction(mirror, pt).components(0.7)
print(f"U = -2 omega, n=1 components at z=0.7: {complex(first):.6f}, {complex(second):.6f}")
