"""Parameters, effective quantities and coupling-regime classification.

The potential is ``V(x) = -hbar*c*q/|x| + V0``.  Eliminating one spinor
component from the first-order Dirac system gives, for each component, a
Schrodinger-like problem with effective mass ``m_eff``, Coulomb strength
``hbar*c*q_eff`` and an inverse-square term ``a/x**2`` whose coefficient
depends on the component and on the side of the origin:

    a(upper, x) = hbar**2/(2 m_eff) * q * (q + sgn x)
    a(lower, x) = hbar**2/(2 m_eff) * q * (q - sgn x)

These signs follow from the Dirac system with ``beta*gamma5 = sigma_2`` as
written (see ``analytic.dirac_residual``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateParametersError, DomainError


@dataclass(frozen=True)
class PhysicalParams:
    """Rest mass, speed of light and reduced Planck constant.

    Defaults are natural units.
    """

    m: float = 1.0
    c: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("m", "c", "hbar"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if self.m < 0:
            raise DomainError(f"mass must be >= 0, got {self.m!r}")
        if self.c <= 0 or self.hbar <= 0:
            raise DomainError("c and hbar must be strictly positive")

    @property
    def rest_energy(self) -> float:
        return self.m * self.c**2


@dataclass(frozen=True)
class PotentialParams:
    """Dimensionless coupling ``q`` and uniform background ``V0`` (energy)."""

    q: float
    V0: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.V0)):
            raise DomainError("q and V0 must be finite")

    def flipped(self) -> "PotentialParams":
        """The (q, V0) -> (-q, -V0) partner."""
        return PotentialParams(-self.q, -self.V0)


@dataclass(frozen=True)
class EffectiveParams:
    m_eff: float
    q_eff: float
    a_upper_right: float
    a_upper_left: float
    a_lower_right: float
    a_lower_left: float
    lambda_c_eff: float
    # kept so callers can compare both thresholds m c^2 and m_eff c^2
    rest_energy: float
    threshold: float
    a_critical: float

    def coefficient(self, component: str, side: str) -> float:
        """Inverse-square coefficient for ``component`` in {'upper','lower'},
        ``side`` in {'right','left'}."""
        return getattr(self, f"a_{component}_{side}")


class Regime(str, Enum):
    CASE_A = "CaseA"
    CASE_B = "CaseB"
    UNBOUND = "Unbound"


class UnboundReason(str, Enum):
    ZERO_BACKGROUND = "ZeroBackground"
    SUBCRITICAL_COUPLING = "SubcriticalCoupling"
    SIGN_MISMATCH = "SignMismatch"


@dataclass(frozen=True)
class CaseClass:
    variant: Regime
    reason: UnboundReason | None = None

    @property
    def bound(self) -> bool:
        return self.variant is not Regime.UNBOUND

    @property
    def min_index(self) -> int:
        """Smallest admissible principal index n."""
        if self.variant is Regime.CASE_A:
            return 1
        if self.variant is Regime.CASE_B:
            return 0
        raise ValueError("unbound regime has no index range")

    def __str__(self):
        if self.reason is None:
            return self.variant.value
        return f"{self.variant.value}({self.reason.value})"


def effective_mass(phys: PhysicalParams, V0: float) -> float:
    return math.sqrt(phys.m**2 + (V0 / phys.c**2) ** 2)


def effective_params(phys: PhysicalParams, pot: PotentialParams) -> EffectiveParams:
    """Effective mass, coupling, channel coefficients and Compton wavelength.

    Raises
    ------
    DegenerateParametersError
        If ``m == 0`` and ``V0 == 0``.
    """
    if phys.m == 0 and pot.V0 == 0:
        raise DegenerateParametersError("m = 0 and V0 = 0: effective mass vanishes")
    c, hbar, q = phys.c, phys.hbar, pot.q
    m_eff = effective_mass(phys, pot.V0)
    q_eff = q * pot.V0 / (m_eff * c**2)
    unit = hbar**2 / (2.0 * m_eff)
    a_plus = unit * q * (q + 1.0)
    a_minus = unit * q * (q - 1.0)
    eff = EffectiveParams(
        m_eff=m_eff,
        q_eff=q_eff,
        a_upper_right=a_plus,
        a_upper_left=a_minus,
        a_lower_right=a_minus,
        a_lower_left=a_plus,
        lambda_c_eff=hbar / (m_eff * c),
        rest_energy=phys.m * c**2,
        threshold=m_eff * c**2,
        a_critical=critical_coefficient(phys, m_eff),
    )
    return eff


def critical_coefficient(phys: PhysicalParams, m_eff: float) -> float:
    """Inverse-square coefficient below which the Hamiltonian falls to the centre."""
    return -phys.hbar**2 / (8.0 * m_eff)


def classify_case(pot: PotentialParams) -> CaseClass:
    q, V0 = pot.q, pot.V0
    if V0 == 0:
        return CaseClass(Regime.UNBOUND, UnboundReason.ZERO_BACKGROUND)
    if abs(q) < 0.5:
        return CaseClass(Regime.UNBOUND, UnboundReason.SUBCRITICAL_COUPLING)
    if q > 0 and V0 > 0:
        return CaseClass(Regime.CASE_A)
    if q < 0 and V0 < 0:
        return CaseClass(Regime.CASE_B)
    return CaseClass(Regime.UNBOUND, UnboundReason.SIGN_MISMATCH)


def exponents(q: float) -> tuple[float, float]:
    """Indicial exponents ``(s_plus, s_minus)`` of the upper and lower
    components on x > 0; both are >= 1/2.

    On x < 0 the roles swap, so ``s_plus(-q) == s_minus(q)``.
    """
    return 0.5 + abs(q + 0.5), 0.5 + abs(q - 0.5)
