"""Closed-form bound states and spinors.

Conventions
-----------
The first-order system solved is

    (-E + m c^2) psi_+ = i hbar c psi_-' + i V psi_-
    (-E - m c^2) psi_- = i hbar c psi_+' - i V psi_+

with ``V = -hbar c q / |x| + V0``.  On each half-line a component is
``z**s * exp(-z/2) * L_k^(2s-1)(z)`` with ``z = 2 kappa |x|``.  The
quantum numbers stored on :class:`BoundState` (``n_plus``, ``s_plus``,
...) describe the x > 0 branch of each component; on x < 0 the upper
component takes the lower component's x > 0 shape and vice versa.

Both half-line solutions vanish at the origin, so the first-order system
does not fix their relative amplitude.  We give the two halves equal
probability; the upper component is real and positive just right of the
origin and the lower component carries the phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import roots_jacobi

from .core import (
    CaseClass,
    PhysicalParams,
    PotentialParams,
    Regime,
    classify_case,
    effective_params,
    exponents,
)
from .errors import (
    InvalidCaseError,
    InvalidIndexError,
    NumericalDegeneracyError,
    QuadratureError,
    UnnormalizedStateError,
)
from .specfun import gauss_laguerre, laguerre, laguerre_derivative

RULE_SIZES = (64, 128)
NORM_RTOL = 1e-9
GRID_INNER = 1e-3
GRID_OUTER = 30.0
GRID_POINTS = 400


@dataclass(frozen=True)
class BoundState:
    """One member pair ``±E_abs`` of the discrete spectrum.

    Spinor data (``rel_const`` onwards) are filled in by :func:`normalize`
    for the energy sign ``sign``.
    """

    case: CaseClass
    n: int
    n_plus: int
    n_minus: int
    s_plus: float
    s_minus: float
    B: float
    E_eff: float
    E_abs: float
    kappa: float
    sign: int = 1
    rel_const: complex | None = None
    rel_const_left: complex | None = None
    left_scale: float | None = None
    norm_const: float | None = None

    @property
    def energy(self) -> float:
        return self.sign * self.E_abs

    @property
    def normalized(self) -> bool:
        return self.norm_const is not None

    def branch(self, component: str, side: int) -> tuple[float, int]:
        """``(s, degree)`` of ``component`` ('upper'/'lower') on ``side`` (+1/-1)."""
        upper = (self.s_plus, self.n_plus)
        lower = (self.s_minus, self.n_minus)
        if (component == "upper") == (side > 0):
            return upper
        return lower


@dataclass(frozen=True)
class SpinorSample:
    xs: np.ndarray
    psi_plus: np.ndarray
    psi_minus: np.ndarray

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.psi_plus) ** 2 + np.abs(self.psi_minus) ** 2


def quantization(case: CaseClass, q: float, n: int):
    """Quantum numbers ``(n_plus, n_minus, s_plus, s_minus, B)`` of the x > 0
    branches for principal index ``n``."""
    if not case.bound:
        raise InvalidCaseError(f"no bound states for {case}")
    if n < case.min_index:
        raise InvalidIndexError(f"n must be >= {case.min_index} in {case.variant.value}, got {n}")
    s_plus, s_minus = exponents(q)
    if case.variant is Regime.CASE_A:
        return n - 1, n, s_plus, s_minus, n + q
    return n + 1, n, s_plus, s_minus, (n + 1) - q


def _bound_case(pot):
    case = classify_case(pot)
    if not case.bound:
        raise InvalidCaseError(f"no bound states for q={pot.q}, V0={pot.V0}: {case}")
    return case


def energy(phys: PhysicalParams, pot: PotentialParams, n: int):
    """``(E_plus, E_minus, E_eff)`` for principal index ``n``."""
    st = bound_state(phys, pot, n)
    return st.E_abs, -st.E_abs, st.E_eff


def bound_state(phys: PhysicalParams, pot: PotentialParams, n: int) -> BoundState:
    case = _bound_case(pot)
    n_plus, n_minus, s_plus, s_minus, B = quantization(case, pot.q, n)
    eff = effective_params(phys, pot)
    c = phys.c
    E_eff = -eff.m_eff * c**2 * eff.q_eff**2 / (2.0 * B * B)
    E_abs = math.sqrt((phys.m * c**2) ** 2 + pot.V0**2 * (1.0 - (pot.q / B) ** 2))
    kappa = math.sqrt(-2.0 * eff.m_eff * E_eff) / phys.hbar
    return BoundState(case, n, n_plus, n_minus, s_plus, s_minus, B, E_eff, E_abs, kappa)


def spectrum(phys: PhysicalParams, pot: PotentialParams, n_max: int) -> list[BoundState]:
    """Bound states with principal index up to ``n_max``, lowest first.

    Empty when the parameters do not bind; see :func:`classify_case` for
    the reason.
    """
    case = classify_case(pot)
    if not case.bound:
        return []
    return [bound_state(phys, pot, n) for n in range(case.min_index, n_max + 1)]


# -- shapes ------------------------------------------------------------------


def _shape(s, k, z):
    return z**s * np.exp(-0.5 * z) * laguerre(k, 2 * s - 1, z)


def _shape_dz(s, k, z):
    lag = laguerre(k, 2 * s - 1, z)
    dlag = laguerre_derivative(k, 2 * s - 1, z)
    return z ** (s - 1) * np.exp(-0.5 * z) * ((s - 0.5 * z) * lag + z * dlag)


def _potential(phys, pot, x):
    return -phys.hbar * phys.c * pot.q / np.abs(x) + pot.V0


def _branch_values(state, side, z):
    """Upper/lower shapes and their x-derivatives on one half-line."""
    su, ku = state.branch("upper", side)
    sl, kl = state.branch("lower", side)
    dzdx = side * 2.0 * state.kappa
    return (
        _shape(su, ku, z),
        _shape_dz(su, ku, z) * dzdx,
        _shape(sl, kl, z),
        _shape_dz(sl, kl, z) * dzdx,
    )


def relative_constant(state: BoundState, phys: PhysicalParams, pot: PotentialParams, side: int = 1) -> complex:
    """Lower/upper amplitude ratio on one half-line for energy ``state.energy``.

    Fitted by least squares to both Dirac equations at ``|x| = 1/kappa``;
    the reference point is moved outward by half a node spacing when one of
    the shapes is (nearly) zero there.
    """
    E = state.energy
    mc2 = phys.m * phys.c**2
    hc = phys.hbar * phys.c
    z0 = 2.0
    step = 2.0 * state.B / (max(state.n_plus, state.n_minus) + 1)
    zs = np.linspace(1e-3, 4.0 * state.B + 10.0, 400)
    peak_u, _, peak_w, _ = (np.max(np.abs(v)) for v in _branch_values(state, side, zs))
    for _ in range(6):
        u, du, w, dw = _branch_values(state, side, z0)
        if abs(u) > 1e-6 * peak_u and abs(w) > 1e-6 * peak_w:
            x0 = side * z0 / (2.0 * state.kappa)
            V = float(_potential(phys, pot, x0))
            a1 = (-E + mc2) * u
            b1 = 1j * (hc * dw + V * w)
            a2 = 1j * (hc * du - V * u)
            b2 = (-E - mc2) * w
            den = abs(b1) ** 2 + abs(b2) ** 2
            if den > 0:
                return complex((np.conj(b1) * a1 + np.conj(b2) * a2) / den)
        z0 += 0.5 * step
    raise NumericalDegeneracyError("spinor shapes vanish at every reference point tried")


def _moment(rule, s, k, p, alpha):
    """Integral over z of ``z**p * shape(s,k)**2`` with a fixed rule."""
    z = rule.nodes
    lag = laguerre(k, 2 * s - 1, z)
    return float(np.sum(rule.weights * z ** (2 * s - alpha + p) * lag * lag))


def _side_moments(state, p, rule, alpha):
    """Per-side integrals over |x| of |x|**p (|psi_+|^2 + |psi_-|^2) for the
    unscaled halves (upper amplitude 1)."""
    out = {}
    for side, N in ((1, state.rel_const), (-1, state.rel_const_left)):
        su, ku = state.branch("upper", side)
        sl, kl = state.branch("lower", side)
        zint = _moment(rule, su, ku, p, alpha) + abs(N) ** 2 * _moment(rule, sl, kl, p, alpha)
        out[side] = zint / (2.0 * state.kappa) ** (p + 1)
    return out


def _alpha(state):
    return 2.0 * min(state.s_plus, state.s_minus)


def normalize(state: BoundState, phys: PhysicalParams, pot: PotentialParams, sign: int | None = None) -> BoundState:
    """Fit relative constants and set the global scale so the spinor has unit norm.

    Raises
    ------
    QuadratureError
        If the 64- and 128-point rules disagree beyond 1e-9.
    """
    if sign is not None:
        state = replace(state, sign=1 if sign > 0 else -1)
    state = replace(
        state,
        rel_const=relative_constant(state, phys, pot, 1),
        rel_const_left=relative_constant(state, phys, pot, -1),
    )
    alpha = _alpha(state)
    results = []
    for npts in RULE_SIZES:
        m = _side_moments(state, 0, gauss_laguerre(npts, alpha), alpha)
        results.append((m[1], m[-1]))
    (r64, l64), (r128, l128) = results
    if abs(r64 - r128) > NORM_RTOL * r128 or abs(l64 - l128) > NORM_RTOL * l128:
        raise QuadratureError(f"norm integrals disagree: {r64!r} vs {r128!r}, {l64!r} vs {l128!r}")
    left_scale = math.sqrt(r128 / l128)
    norm_const = 1.0 / math.sqrt(2.0 * r128)
    return replace(state, left_scale=left_scale, norm_const=norm_const)


def _require_norm(state):
    if state.norm_const is None:
        raise UnnormalizedStateError("call normalize() first")


def _amplitudes(state, side):
    amp = state.norm_const if side > 0 else state.norm_const * state.left_scale
    N = state.rel_const if side > 0 else state.rel_const_left
    return amp, N


def assemble_spinor(state: BoundState, phys: PhysicalParams, pot: PotentialParams, xs) -> SpinorSample:
    """Sample the normalized spinor at ``xs`` (which must not contain 0)."""
    _require_norm(state)
    xs = np.asarray(xs, dtype=float)
    if np.any(xs == 0):
        raise ValueError("sample grid must exclude x = 0")
    up = np.zeros(xs.shape, dtype=complex)
    lo = np.zeros(xs.shape, dtype=complex)
    for side in (1, -1):
        mask = xs > 0 if side > 0 else xs < 0
        if not mask.any():
            continue
        z = 2.0 * state.kappa * np.abs(xs[mask])
        u, _, w, _ = _branch_values(state, side, z)
        amp, N = _amplitudes(state, side)
        up[mask] = amp * u
        lo[mask] = amp * N * w
    return SpinorSample(xs, up, lo)


def _spinor_with_derivs(state, phys, xs):
    up = np.zeros(xs.shape, dtype=complex)
    lo = np.zeros(xs.shape, dtype=complex)
    dup = np.zeros(xs.shape, dtype=complex)
    dlo = np.zeros(xs.shape, dtype=complex)
    for side in (1, -1):
        mask = xs > 0 if side > 0 else xs < 0
        if not mask.any():
            continue
        z = 2.0 * state.kappa * np.abs(xs[mask])
        u, du, w, dw = _branch_values(state, side, z)
        amp, N = _amplitudes(state, side)
        up[mask], dup[mask] = amp * u, amp * du
        lo[mask], dlo[mask] = amp * N * w, amp * N * dw
    return up, dup, lo, dlo


def standard_grid(kappa: float, inner: float = GRID_INNER, outer: float = GRID_OUTER, points: int = GRID_POINTS) -> np.ndarray:
    """Geometric grid in |x| from ``inner/kappa`` to ``outer/kappa`` on both sides."""
    t = np.geomspace(inner / kappa, outer / kappa, points)
    return np.concatenate([-t[::-1], t])


def dirac_residual(state: BoundState, phys: PhysicalParams, pot: PotentialParams, xs=None, scale: float = 1.0) -> float:
    """Largest pointwise relative residual of the first-order Dirac system.

    At each point the residual of each equation is divided by the sum of
    the magnitudes of its terms.  ``scale`` multiplies the whole spinor
    (the result must not depend on it).
    """
    _require_norm(state)
    if xs is None:
        xs = standard_grid(state.kappa)
    xs = np.asarray(xs, dtype=float)
    up, dup, lo, dlo = (scale * a for a in _spinor_with_derivs(state, phys, xs))
    E = state.energy
    mc2 = phys.m * phys.c**2
    hc = phys.hbar * phys.c
    V = _potential(phys, pot, xs)
    terms_p = ((-E + mc2) * up, -1j * hc * dlo, -1j * V * lo)
    terms_m = ((-E - mc2) * lo, -1j * hc * dup, 1j * V * up)
    worst = 0.0
    for terms in (terms_p, terms_m):
        res = np.abs(sum(terms))
        mag = sum(np.abs(t) for t in terms)
        ok = mag > 0
        if ok.any():
            worst = max(worst, float(np.max(res[ok] / mag[ok])))
    return worst


def perturbed(state: BoundState, phys: PhysicalParams, pot: PotentialParams, dE: float) -> BoundState:
    """Copy of ``state`` with ``E_abs`` shifted by ``dE`` and re-normalized
    (shapes unchanged).  Used as a negative control."""
    return normalize(replace(state, E_abs=state.E_abs + dE), phys, pot, state.sign)


def component_weights(state: BoundState, phys: PhysicalParams, pot: PotentialParams) -> tuple[float, float]:
    """``(integral |psi_+|^2, integral |psi_-|^2)`` over the whole line."""
    _require_norm(state)
    alpha = _alpha(state)
    rule = gauss_laguerre(RULE_SIZES[-1], alpha)
    wp = wm = 0.0
    for side in (1, -1):
        amp, N = _amplitudes(state, side)
        su, ku = state.branch("upper", side)
        sl, kl = state.branch("lower", side)
        jac = 1.0 / (2.0 * state.kappa)
        wp += amp**2 * _moment(rule, su, ku, 0, alpha) * jac
        wm += amp**2 * abs(N) ** 2 * _moment(rule, sl, kl, 0, alpha) * jac
    return wp, wm


def norm(state: BoundState, phys: PhysicalParams, pot: PotentialParams) -> float:
    wp, wm = component_weights(state, phys, pot)
    return wp + wm


def position_moments(state: BoundState, phys: PhysicalParams, pot: PotentialParams) -> tuple[float, float]:
    """``(<x>, <x^2>)`` of the full spinor density."""
    _require_norm(state)
    alpha = _alpha(state)
    rule = gauss_laguerre(RULE_SIZES[-1], alpha)
    m1 = _side_moments(state, 1, rule, alpha)
    m2 = _side_moments(state, 2, rule, alpha)
    a_r = state.norm_const**2
    a_l = (state.norm_const * state.left_scale) ** 2
    mean = a_r * m1[1] - a_l * m1[-1]
    second = a_r * m2[1] + a_l * m2[-1]
    return mean, second


def position_uncertainty(state: BoundState, phys: PhysicalParams, pot: PotentialParams) -> float:
    mean, second = position_moments(state, phys, pot)
    return math.sqrt(max(second - mean * mean, 0.0))


def upper_overlap_right(a: BoundState, b: BoundState, npts: int = 128) -> tuple[float, float]:
    """Overlap on x > 0 of the (unscaled) upper shapes of two states of the
    same case, and the geometric mean of their self-overlaps."""
    if a.s_plus != b.s_plus:
        raise ValueError("states belong to different upper channels")
    s = a.s_plus
    k = a.kappa + b.kappa
    rule = gauss_laguerre(npts, 2.0 * s)
    # shape_a(2 ka t) shape_b(2 kb t) = t^2s e^{-k t} * g(t); substitute y = k t
    y = rule.nodes
    g = (
        (2.0 * a.kappa) ** s
        * (2.0 * b.kappa) ** s
        * laguerre(a.n_plus, 2 * s - 1, 2.0 * a.kappa * y / k)
        * laguerre(b.n_plus, 2 * s - 1, 2.0 * b.kappa * y / k)
    )
    ov = float(np.sum(rule.weights * g)) / k ** (2.0 * s + 1.0)
    return ov, math.sqrt(_self_overlap(a, npts) * _self_overlap(b, npts))


def _self_overlap(st, npts):
    alpha = 2.0 * st.s_plus
    rule = gauss_laguerre(npts, alpha)
    return _moment(rule, st.s_plus, st.n_plus, 0, alpha) / (2.0 * st.kappa)


# -- origin checks -----------------------------------------------------------


@dataclass(frozen=True)
class ConnectionRow:
    delta: float
    jump_plus: float
    jump_minus: float
    integral_plus: float
    integral_minus: float
    identity_residual: float


@dataclass(frozen=True)
class ConnectionReport:
    rows: list
    jumps_decreasing: bool
    integrals_decreasing: bool
    identity_ok: bool
    jump_bounded: bool

    @property
    def passed(self) -> bool:
        return self.jumps_decreasing and self.integrals_decreasing and self.identity_ok and self.jump_bounded


def _half_integral(state, side, component, beta_shift, Z, npts=48):
    """Integral over z in (0, Z) of z**beta_shift * (component shape)."""
    s, k = state.branch(component, side)
    beta = s + beta_shift
    u, w = roots_jacobi(npts, 0.0, beta)
    z = 0.5 * Z * (1.0 + u)
    g = np.exp(-0.5 * z) * laguerre(k, 2 * s - 1, z)
    return (0.5 * Z) ** (beta + 1.0) * float(np.sum(w * g))


def connection_check(state: BoundState, phys: PhysicalParams, pot: PotentialParams, deltas, tol: float = 1e-8) -> ConnectionReport:
    """Continuity of the spinor across the origin.

    For each ``delta`` reports the jumps ``|psi(+delta) - psi(-delta)|``,
    the magnitudes ``|q| * integral |psi|/|x|`` over (-delta, delta) and the
    residual of the exact integrated Dirac system over that interval.
    """
    _require_norm(state)
    q = pot.q
    E = state.energy
    mc2 = phys.m * phys.c**2
    hc = phys.hbar * phys.c
    rows = []
    for delta in deltas:
        Z = 2.0 * state.kappa * delta
        sample = assemble_spinor(state, phys, pot, [delta, -delta])
        jp = sample.psi_plus[0] - sample.psi_plus[1]
        jm = sample.psi_minus[0] - sample.psi_minus[1]
        # I_over[c] = int psi_c/|x| dx, I_plain[c] = int psi_c dx over (-delta, delta)
        I_over = {}
        I_plain = {}
        abs_over = {}
        for comp in ("upper", "lower"):
            tot_o = tot_p = 0j
            mag = 0.0
            for side in (1, -1):
                amp, N = _amplitudes(state, side)
                coef = amp * (1.0 if comp == "upper" else N)
                io = _half_integral(state, side, comp, -1.0, Z)
                ip = _half_integral(state, side, comp, 0.0, Z) / (2.0 * state.kappa)
                tot_o += coef * io
                tot_p += coef * ip
                s, k = state.branch(comp, side)
                mag += abs(coef) * _abs_half_integral(s, k, Z)
            I_over[comp], I_plain[comp], abs_over[comp] = tot_o, tot_p, abs(q) * mag
        pred_m = -1j / hc * (-E + mc2) * I_plain["upper"] + q * I_over["lower"] - pot.V0 / hc * I_plain["lower"]
        pred_p = -1j / hc * (-E - mc2) * I_plain["lower"] - q * I_over["upper"] + pot.V0 / hc * I_plain["upper"]
        scale = max(abs(jp), abs(jm), abs_over["upper"], abs_over["lower"], 1e-300)
        resid = max(abs(jm - pred_m), abs(jp - pred_p)) / scale
        rows.append(ConnectionRow(delta, abs(jp), abs(jm), abs_over["upper"], abs_over["lower"], resid))
    jd = all(b.jump_plus < a.jump_plus and b.jump_minus < a.jump_minus for a, b in zip(rows, rows[1:]))
    idc = all(
        b.integral_plus < a.integral_plus and b.integral_minus < a.integral_minus for a, b in zip(rows, rows[1:])
    )
    ok = all(r.identity_residual <= tol for r in rows)
    # the integrated E and V0 terms are O(delta) relative, hence the slack
    bounded = all(
        r.jump_plus <= r.integral_plus * (1 + tol) + 2 * r.delta * state.kappa * r.integral_plus
        and r.jump_minus <= r.integral_minus * (1 + tol) + 2 * r.delta * state.kappa * r.integral_minus
        for r in rows
    )
    return ConnectionReport(rows, jd, idc, ok, bounded)


def _abs_half_integral(s, k, Z, npts=48):
    # int_0^Z |shape|/z dz; the Laguerre factor keeps one sign near the origin
    u, w = roots_jacobi(npts, 0.0, s - 1.0)
    z = 0.5 * Z * (1.0 + u)
    g = np.abs(np.exp(-0.5 * z) * laguerre(k, 2 * s - 1, z))
    return (0.5 * Z) ** s * float(np.sum(w * g))


@dataclass(frozen=True)
class IsolatedFactor:
    """Behaviour of ``exp(sigma * v(x))`` with ``v = -q sgn(x) ln|x| + V0 x/(hbar c)``.

    ``power_right``/``power_left`` are the exponents of |x| near the origin on
    each side; ``rate_right``/``rate_left`` the exponential rates as
    ``|x| -> inf`` (positive means growth).
    """

    sigma: int
    power_right: float
    power_left: float
    rate_right: float
    rate_left: float

    @property
    def continuous_at_origin(self) -> bool:
        both_vanish = self.power_right > 0 and self.power_left > 0
        both_finite = self.power_right == 0 and self.power_left == 0
        return both_vanish or both_finite

    @property
    def square_integrable(self) -> bool:
        near = self.power_right > -0.5 and self.power_left > -0.5
        # with zero rate the same power governs infinity, needing power < -1/2
        far_r = self.rate_right < 0 or (self.rate_right == 0 and self.power_right < -0.5)
        far_l = self.rate_left < 0 or (self.rate_left == 0 and self.power_left < -0.5)
        return near and far_r and far_l

    @property
    def admissible(self) -> bool:
        return self.continuous_at_origin and self.square_integrable


@dataclass(frozen=True)
class IsolatedModesReport:
    plus_mc2: IsolatedFactor  # exp(-v): the E = +mc^2 candidate
    minus_mc2: IsolatedFactor  # exp(+v): the E = -mc^2 candidate

    @property
    def normalizable_mode_exists(self) -> bool:
        # either factor may carry the mode (the other component can vanish)
        return self.plus_mc2.admissible or self.minus_mc2.admissible


def isolated_factor(phys: PhysicalParams, pot: PotentialParams, sigma: int) -> IsolatedFactor:
    rate = sigma * pot.V0 / (phys.hbar * phys.c)
    # exp(sigma v) = |x|**(-sigma q sgn x) * exp(sigma V0 x / hbar c)
    return IsolatedFactor(
        sigma=sigma,
        power_right=-sigma * pot.q + 0.0,
        power_left=sigma * pot.q + 0.0,
        rate_right=rate + 0.0,
        rate_left=-rate + 0.0,
    )


def isolated_modes_check(phys: PhysicalParams, pot: PotentialParams) -> IsolatedModesReport:
    """Check the E = ±mc^2 candidates excluded from the second-order problem."""
    return IsolatedModesReport(isolated_factor(phys, pot, -1), isolated_factor(phys, pot, 1))


def isolated_factor_values(phys: PhysicalParams, pot: PotentialParams, sigma: int, xs):
    """Numerical values of ``exp(sigma * v(x))`` (for cross-checking the report)."""
    xs = np.asarray(xs, dtype=float)
    v = -pot.q * np.sign(xs) * np.log(np.abs(xs)) + pot.V0 * xs / (phys.hbar * phys.c)
    return np.exp(sigma * v)
