"""Model parameters, coupling classes and the energy <-> spectral parameter map.

The Hamiltonian is

    H = (omega + U/2 sigma_z) a^+ a + omega0/2 sigma_z + g sigma_x (a^+ + a)

and the exactly solvable cases are the two degenerate couplings U = +2 omega
and U = -2 omega.  The second one is mapped onto the first by flipping the
sign of omega0 and exchanging the two spinor components.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

#: relative tolerance used to decide U = +-2 omega
TAU_CLASS = 1e-12


class OutOfScopeError(ValueError):
    """Raised for parameters outside the degenerate coupling classes."""


class DomainError(ValueError):
    """Raised when a function is evaluated outside its domain."""


class CouplingClass(enum.Enum):
    UPLUS = "UPlus"
    UMINUS = "UMinus"
    GENERIC = "Generic"


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the generalized Rabi Hamiltonian.

    Parameters
    ----------
    omega : float
        Boson frequency, strictly positive.
    omega0 : float
        Level splitting of the two-level system.
    g : float
        Spin-boson coupling, non-zero.
    u : float
        Nonlinear coupling U.
    """

    omega: float
    omega0: float
    g: float
    u: float

    def __post_init__(self):
        for name in ("omega", "omega0", "g", "u"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.g == 0:
            raise ValueError("g = 0 decouples the system; nonzero coupling required")

    @classmethod
    def uplus(cls, omega: float, omega0: float, g: float) -> "ModelParams":
        """Parameters on the U = +2 omega line."""
        return cls(omega, omega0, g, 2.0 * omega)

    @property
    def coupling_class(self) -> CouplingClass:
        return coupling_class(self)


def coupling_class(params: ModelParams) -> CouplingClass:
    scale = 2.0 * params.omega
    if abs(params.u - scale) <= TAU_CLASS * scale:
        return CouplingClass.UPLUS
    if abs(params.u + scale) <= TAU_CLASS * scale:
        return CouplingClass.UMINUS
    return CouplingClass.GENERIC


def reduce_uminus(params: ModelParams) -> tuple[ModelParams, bool]:
    """Map a U = -2 omega problem onto U = +2 omega.

    Returns the reduced parameters and a flag telling that psi_1 and psi_2
    of the reduced problem are psi_2 and psi_1 of the original one.
    """
    cls = coupling_class(params)
    if cls is not CouplingClass.UMINUS:
        raise ValueError(f"reduce_uminus needs UMinus coupling, got {cls.value}")
    return replace(params, omega0=-params.omega0, u=2.0 * params.omega), True


def as_uplus(params: ModelParams) -> tuple[ModelParams, bool]:
    """Return UPlus parameters for any degenerate coupling, plus the swap flag."""
    cls = coupling_class(params)
    if cls is CouplingClass.UPLUS:
        return params, False
    if cls is CouplingClass.UMINUS:
        return reduce_uminus(params)
    raise OutOfScopeError(
        f"U={params.u} with omega={params.omega} is the generic coupling class "
        "(U^2 != 4 omega^2); only U = +-2 omega is solved here"
    )


def e_to_x(params: ModelParams, energy):
    """Spectral parameter x = 1 + omega (E + omega0/2) / g^2."""
    p, _ = as_uplus(params)
    energy = np.asarray(energy, dtype=float) if np.ndim(energy) else float(energy)
    return 1.0 + p.omega * (energy + 0.5 * p.omega0) / p.g**2


def x_to_e(params: ModelParams, x):
    """Inverse of :func:`e_to_x`."""
    p, _ = as_uplus(params)
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    return p.g**2 * (x - 1.0) / p.omega - 0.5 * p.omega0


def continuum_window(params: ModelParams) -> tuple[float, float]:
    """Energy interval mapped onto -1 <= x <= 1."""
    return x_to_e(params, -1.0), x_to_e(params, 1.0)
