"""Finite-difference cross-check of the closed-form spectrum.

Each spinor component on a half-line obeys a Kratzer-type problem

    -hbar^2/(2 m_eff) psi'' + (-C/x + a/x^2) psi = E_eff psi,   x in (0, L)

with ``C = hbar c q_eff`` and Dirichlet walls.  The 3-point discretisation on
nodes ``h, 2h, ..., npts*h`` is a symmetric tridiagonal matrix whose lowest
eigenvalues are found by Sturm bisection.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .analytic import BoundState, _require_norm, _spinor_with_derivs, spectrum
from .core import PhysicalParams, PotentialParams, classify_case, effective_params
from .errors import DomainError, InvalidCaseError, ResolutionError, TruncationWarning
from .tridiag import eigh_tridiagonal_lowest, eigvalsh_tridiagonal

MIN_NPTS = 100
RESOLUTION = 0.05
TAIL_FRACTION = 0.1
TAIL_MASS = 1e-6
DEFAULT_MATCH_TOL = 1e-3
# attractive inverse-square channels converge more slowly
ATTRACTIVE_TOL = 1e-2
CHANNEL_NAMES = ("upper_right", "upper_left", "lower_right", "lower_left")


@dataclass(frozen=True)
class FdGrid:
    L: float
    npts: int

    def __post_init__(self):
        if self.npts < MIN_NPTS:
            raise ResolutionError(f"need at least {MIN_NPTS} interior points, got {self.npts}")
        if not self.L > 0:
            raise DomainError("domain length must be positive")

    @property
    def h(self) -> float:
        return self.L / (self.npts + 1)

    @property
    def offset(self) -> float:
        return self.h

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.npts + 1)

    def refined(self) -> "FdGrid":
        """Same domain, half the spacing."""
        return FdGrid(self.L, 2 * self.npts + 1)


@dataclass(frozen=True)
class ChannelSpec:
    coulomb_strength: float
    inv_square_coeff: float
    m_eff: float
    hbar: float = 1.0

    def __post_init__(self):
        crit = -self.hbar**2 / (8.0 * self.m_eff)
        # tiny slack so q = 1/2 style channels sitting on the bound survive rounding
        if self.inv_square_coeff < crit * (1 + 1e-12):
            raise DomainError(f"inverse-square coefficient {self.inv_square_coeff} below critical {crit}")

    @property
    def exponent(self) -> float:
        """Indicial exponent s >= 1/2 of the channel."""
        disc = 0.25 + 2.0 * self.m_eff * self.inv_square_coeff / self.hbar**2
        return 0.5 + math.sqrt(max(disc, 0.0))

    def kappa(self, level: int = 0) -> float:
        """Decay constant of level ``level`` (0 = ground); 0 if unbound."""
        if self.coulomb_strength <= 0:
            return 0.0
        return self.m_eff * self.coulomb_strength / (self.hbar**2 * (self.exponent + level))

    def analytic_levels(self, k: int) -> list[float]:
        """Closed-form Kratzer levels ``-m C^2 / (2 hbar^2 (s+j)^2)``, j < k."""
        if self.coulomb_strength <= 0:
            return []
        s = self.exponent
        C = self.coulomb_strength
        return [-self.m_eff * C * C / (2.0 * self.hbar**2 * (s + j) ** 2) for j in range(k)]


def channel_spec(phys: PhysicalParams, pot: PotentialParams, name: str) -> ChannelSpec:
    """Channel ``name`` in ``CHANNEL_NAMES`` (component_side)."""
    eff = effective_params(phys, pot)
    component, side = name.split("_")
    return ChannelSpec(
        coulomb_strength=phys.hbar * phys.c * eff.q_eff,
        inv_square_coeff=eff.coefficient(component, side),
        m_eff=eff.m_eff,
        hbar=phys.hbar,
    )


def channel_tolerance(channel: ChannelSpec, tol: float = DEFAULT_MATCH_TOL) -> float:
    """Agreement tolerance for ``channel``: ``tol``, loosened to
    ``ATTRACTIVE_TOL`` when the inverse-square term is attractive."""
    return max(tol, ATTRACTIVE_TOL) if channel.inv_square_coeff < 0 else tol


def channels(phys: PhysicalParams, pot: PotentialParams) -> dict[str, ChannelSpec]:
    return {name: channel_spec(phys, pot, name) for name in CHANNEL_NAMES}


def default_grid(channel: ChannelSpec, k: int, npts: int = 4000, length_mult: float = 12.0, fallback_length: float = 100.0) -> FdGrid:
    """Grid long enough for the ``k`` lowest levels: ``L = mult*(B+1)/kappa``
    for the highest targeted level.

    ``npts`` is a floor; it is raised when needed so the deepest level still
    satisfies the resolution guard.
    """
    if channel.coulomb_strength <= 0:
        return FdGrid(fallback_length, npts)
    B = channel.exponent + (k - 1)
    L = length_mult * (B + 1.0) / channel.kappa(k - 1)
    needed = math.ceil(L * channel.kappa(0) / RESOLUTION)
    return FdGrid(L, max(npts, needed))


def _frobenius_correction(channel: ChannelSpec, grid: FdGrid) -> np.ndarray:
    """Node-wise potential correction for attractive inverse-square channels.

    Near the origin the solution behaves like ``x**s (1 + c1 x + ...)`` with
    ``c1 = -m C / (hbar**2 s)``.  For ``s < 1`` the plain 3-point stencil
    represents this power law badly and convergence drops to ``O(h**(2s))``.
    Adding ``hbar**2/(2m) * (D2 phi / phi - phi''/phi)`` to the sampled
    potential, with the zero-free local factor ``phi = x**s / (1 - c1 x)``,
    makes the discrete operator exact on ``phi`` at every node.  Away from
    the origin the correction is ``O(h**2)`` and harmless.
    """
    s = channel.exponent
    h = grid.h
    c1 = -channel.m_eff * channel.coulomb_strength / (channel.hbar**2 * s)
    x = grid.nodes
    xe = h * np.arange(0, grid.npts + 2, dtype=float)
    phi = xe**s / (1.0 - c1 * xe)
    discrete = (phi[2:] - 2.0 * phi[1:-1] + phi[:-2]) / (h * h * phi[1:-1])
    u = 1.0 - c1 * x
    exact = s * (s - 1.0) / x**2 + 2.0 * s * c1 / (x * u) + 2.0 * c1 * c1 / (u * u)
    return channel.hbar**2 / (2.0 * channel.m_eff) * (discrete - exact)


def fd_matrix(channel: ChannelSpec, grid: FdGrid, singular_correction: bool | None = None):
    """Diagonal and off-diagonal of the discretised channel Hamiltonian.

    Parameters
    ----------
    singular_correction : bool, optional
        Add the local power-law correction of :func:`_frobenius_correction`.
        By default it is used only for attractive inverse-square channels
        (``a < 0``), where plain sampling converges too slowly.
    """
    x = grid.nodes
    t = channel.hbar**2 / (2.0 * channel.m_eff * grid.h**2)
    d = 2.0 * t - channel.coulomb_strength / x + channel.inv_square_coeff / x**2
    if singular_correction is None:
        singular_correction = channel.inv_square_coeff < 0
    if singular_correction and channel.coulomb_strength > 0:
        d = d + _frobenius_correction(channel, grid)
    e = np.full(grid.npts - 1, -t)
    return d, e


def fd_effective_levels(channel: ChannelSpec, grid: FdGrid, k: int, check_tail: bool = True) -> list[float]:
    """Negative eigenvalues among the ``k`` lowest of the discretised channel.

    Raises
    ------
    ResolutionError
        If ``h * kappa`` exceeds 0.05 for the deepest level.

    Warns
    -----
    TruncationWarning
        If the k-th eigenvector has relative mass above 1e-6 in the outer
        10% of the box.
    """
    kap = channel.kappa(0)
    if kap * grid.h > RESOLUTION:
        raise ResolutionError(f"h*kappa = {kap * grid.h:.3g} exceeds {RESOLUTION}")
    d, e = fd_matrix(channel, grid)
    if check_tail:
        vals, vecs = eigh_tridiagonal_lowest(d, e, k)
        negative = vals < 0
        if negative.any():
            last = int(np.nonzero(negative)[0][-1])
            v = vecs[:, last]
            outer = v[int((1.0 - TAIL_FRACTION) * grid.npts):]
            mass = float(np.dot(outer, outer) / np.dot(v, v))
            if mass > TAIL_MASS:
                warnings.warn(
                    f"level {last} has {mass:.2e} of its mass in the outer {TAIL_FRACTION:.0%} of the box",
                    TruncationWarning,
                    stacklevel=2,
                )
    else:
        vals = eigvalsh_tridiagonal(d, e, k)
    return [float(v) for v in vals if v < 0]


@dataclass
class MatchReport:
    upper_levels: list
    lower_levels: list
    matched: list  # (i_upper, j_lower, relative gap)
    unmatched_upper: list = field(default_factory=list)
    unmatched_lower: list = field(default_factory=list)
    analytic_ref: list = field(default_factory=list)
    max_rel_err: float = 0.0

    def offsets(self) -> list[int]:
        """``j - i`` for every matched pair (lower index minus upper index)."""
        return [j - i for i, j, _ in self.matched]


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def match_common_levels(upper, lower, tol: float = DEFAULT_MATCH_TOL, analytic_ref=None) -> MatchReport:
    """Pair levels of the two channels that agree to relative ``tol``.

    Pairs are taken greedily, closest first.  ``max_rel_err`` is the worst
    relative distance from a matched level to the nearest value in
    ``analytic_ref`` when that is given, otherwise the worst matched gap.
    """
    upper = [float(u) for u in upper]
    lower = [float(v) for v in lower]
    cands = sorted(
        (_rel(u, v), i, j) for i, u in enumerate(upper) for j, v in enumerate(lower) if _rel(u, v) <= tol
    )
    used_i, used_j, matched = set(), set(), []
    for gap, i, j in cands:
        if i in used_i or j in used_j:
            continue
        used_i.add(i)
        used_j.add(j)
        matched.append((i, j, gap))
    matched.sort()
    ref = [float(r) for r in analytic_ref] if analytic_ref is not None else []
    if ref and matched:
        errs = []
        for i, j, _ in matched:
            for lvl in (upper[i], lower[j]):
                errs.append(min(_rel(lvl, r) for r in ref))
        max_err = max(errs)
    else:
        max_err = max((g for _, _, g in matched), default=0.0)
    return MatchReport(
        upper_levels=upper,
        lower_levels=lower,
        matched=matched,
        unmatched_upper=[i for i in range(len(upper)) if i not in used_i],
        unmatched_lower=[j for j in range(len(lower)) if j not in used_j],
        analytic_ref=ref,
        max_rel_err=max_err,
    )


def analytic_common_levels(phys: PhysicalParams, pot: PotentialParams, n_max: int) -> list[float]:
    """E_eff of the Dirac bound states with index up to ``n_max``."""
    return [st.E_eff for st in spectrum(phys, pot, n_max)]


# -- boundary term at the origin ---------------------------------------------


def wronskian(f, df, g, dg):
    """``conj(f) g' - conj(f') g`` elementwise."""
    return np.conj(f) * dg - np.conj(df) * g


def extrapolate_limit(values) -> float:
    """Aitken estimate of the limit of the last three terms of a sequence."""
    v = np.asarray(values)
    if v.shape[0] < 3:
        return complex(v[-1])
    w1, w2, w3 = v[-3], v[-2], v[-1]
    den = w3 - 2.0 * w2 + w1
    if den == 0:
        return complex(w3)
    return complex(w3 - (w3 - w2) ** 2 / den)


@dataclass(frozen=True)
class WronskianReport:
    xs: np.ndarray
    values: np.ndarray
    limit: complex
    scale: float
    tol: float

    @property
    def relative_limit(self) -> float:
        return abs(self.limit) / self.scale

    @property
    def decreasing(self) -> bool:
        mags = np.abs(self.values)
        return bool(np.all(np.diff(mags) <= 0))

    @property
    def passed(self) -> bool:
        return self.relative_limit <= self.tol


def hermiticity_wronskian(
    a: BoundState,
    b: BoundState,
    phys: PhysicalParams,
    pot: PotentialParams,
    x_sequence,
    component: str = "upper",
    tol: float = 1e-8,
) -> WronskianReport:
    """Boundary term ``lim_{x->0+} (psi_a* psi_b' - psi_a*' psi_b)`` for one
    spinor component of two normalized states, sampled along ``x_sequence``
    (positive, decreasing to 0).

    ``scale`` is ``max|psi_a| * max|psi_b'|`` over the standard grid, so
    the result is dimensionless.
    """
    _require_norm(a)
    _require_norm(b)
    xs = np.asarray(x_sequence, dtype=float)
    if np.any(xs <= 0):
        raise ValueError("x_sequence must be positive")
    idx = 0 if component == "upper" else 2
    fa = _spinor_with_derivs(a, phys, xs)
    fb = _spinor_with_derivs(b, phys, xs)
    W = wronskian(fa[idx], fa[idx + 1], fb[idx], fb[idx + 1])
    ref = np.geomspace(1e-3 / max(a.kappa, b.kappa), 30.0 / min(a.kappa, b.kappa), 800)
    ra = _spinor_with_derivs(a, phys, ref)
    rb = _spinor_with_derivs(b, phys, ref)
    scale = float(max(np.max(np.abs(ra[idx])) * np.max(np.abs(rb[idx + 1])),
                      np.max(np.abs(ra[idx + 1])) * np.max(np.abs(rb[idx]))))
    return WronskianReport(xs, W, extrapolate_limit(W), scale, tol)


def wronskian_report_from_profiles(f, df, g, dg, x_sequence, scale: float, tol: float = 1e-8) -> WronskianReport:
    """Same check for arbitrary profiles given as callables of x."""
    xs = np.asarray(x_sequence, dtype=float)
    W = wronskian(f(xs), df(xs), g(xs), dg(xs))
    return WronskianReport(xs, W, extrapolate_limit(W), scale, tol)


# -- nonrelativistic limit ---------------------------------------------------


def nr_kratzer_levels(phys: PhysicalParams, pot: PotentialParams, n_max: int) -> list[float]:
    """Levels above the rest energy of the small-coupling Schrodinger problem.

    ``E_NR = V0^2/(2 m c^2) * (1 - q^2/B^2)`` with the same ``B`` family as
    the relativistic spectrum.
    """
    case = classify_case(pot)
    if not case.bound:
        raise InvalidCaseError(f"no bound states for {case}")
    if phys.m == 0:
        raise DomainError("nonrelativistic limit needs m > 0")
    mc2 = phys.m * phys.c**2
    return [pot.V0**2 / (2.0 * mc2) * (1.0 - (pot.q / st.B) ** 2) for st in spectrum(phys, pot, n_max)]
