"""
Spectral curves at degenerate coupling
======================================

Energy levels E_n(g) of both branches at omega = 1, omega0 = 1/2, U = 2.
The Upper branch carries one level per n at every coupling; the Lower
branch empties out as g^2 approaches 1/4.
"""
import numpy as np

from degenerate_rabi import Branch, ModelParams, continuum_window, spectrum_sweep

base = ModelParams.uplus(1.0, 0.5, 1.0)
g_grid = np.round(np.arange(0.1, 1.01, 0.1), 10)
table = spectrum_sweep(base, g_grid, n_max=4)

print(f"{'g':>5} {'branch':>6} " + " ".join(f"{'E_' + str(n):>10}" for n in range(5)))
for g in g_grid:
    for branch in Branch:
        levels = {pt.n: pt.energy for gg, pt in table.rows if gg == g and pt.branch is branch}
        cells = " ".join(f"{levels[n]:10.5f}" if n in levels else f"{'-':>10}" for n in range(5))
        print(f"{g:5.2f} {branch.value:>6} {cells}")

# the continuum window sits between the two branches
for g in (0.3, 0.6):
    lo, hi = continuum_window(ModelParams.uplus(1.0, 0.5, g))
    print(f"g = {g}: continuum window [{lo:.4f}, {hi:.4f}]")

# the same table as CSV, as the CLI writes it
print(table.to_csv().splitlines()[0])
