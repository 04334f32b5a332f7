"""Exact spectrum of the generalized Rabi model at degenerate coupling U = +-2 omega.

H = (omega + U/2 sigma_z) a^+a + omega0/2 sigma_z + g sigma_x (a^+ + a)
is solved in closed form through the spectral parameter
x = 1 + omega (E + omega0/2) / g^2; a truncated Fock-space matrix serves
as the independent check.
"""
from .bargmann import (Diverging, Finite, IndecisiveError, TaylorSeries, bargmann_norm_sq,
                       eigenfunction_series, inner_product, norm_sq_adaptive)
from .eigenfunction import (EigenFunction, GrowthEstimate, build_eigenfunction, degenerate_solution,
                            growth_order_type, hermite, ode_residual_second_order, ode_residual_system)
from .model import (CouplingClass, DomainError, ModelParams, OutOfScopeError, continuum_window,
                    coupling_class, e_to_x, reduce_uminus, x_to_e)
from .oracle import (FockMatrix, MatchReport, build_hamiltonian, converged_levels, eigenvalues_sym,
                     match_spectra)
from .spectrum import (Branch, SpectralClass, SpectralKind, SpectralPoint, SweepTable, classify_energy,
                       m_value, quantization_residual, rho_value, solve_level, spectrum_sweep)
from .stokes import (ExponentTable, SaddlePair, WhittakerParams, characteristic_exponents,
                     equivalence_check, multiplier_vanishes, normalizable_saddle_exists, saddle_points,
                     stokes_line_angles, whittaker_params)

__version__ = "0.1.0"
