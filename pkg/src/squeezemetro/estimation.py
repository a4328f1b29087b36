"""
Sensitivities of the measurement schemes, coherent baselines and quantum advantage.

The reference engine propagates photon-number moments through the scheme's
Bogoliubov map (leading order in |u|^2 by default) and applies error propagation,
delta_theta = Delta N / |d<N>/d theta|.  The printed closed forms are kept as a
second engine and carry a fidelity tag, because several of them do not agree
with moment propagation.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .fisher import cr_bound, qfi_closed
from .gaussian import (
    LEADING,
    PhotonObservable,
    ProbeConfig,
    mean_derivative,
    photon_moments,
    scheme_map,
)
from .schemes import Detection, Medium, SchemeSpec

MOMENT_ENGINE = "moment-propagation"
PRINTED_ENGINE = "printed-closed-form"

TABLE_CONSISTENT = "table-consistent"
DISCREPANT = "printed-form-discrepant"

SINGULAR_RTOL = 1e-12


class SingularOperatingPoint(ArithmeticError):
    """The mean signal does not depend on the parameter at this operating point."""


@dataclass(frozen=True)
class SensitivityReport:
    delta_theta: float
    delta_theta_coherent: float
    qa: float
    r: float
    theta: float
    u: complex
    scheme: SchemeSpec
    engine: str = MOMENT_ENGINE


def coherent_baseline(cfg, medium, theta):
    """Sensitivity of a coherent beam carrying the probe-arm photon number.

    Loss: sqrt(1 - alpha) / (|u| cosh r).  Gain: sqrt(G) / (|u| cosh r).
    """
    if cfg.u == 0:
        raise ValueError("coherent baseline undefined for u = 0")
    medium = Medium(medium)
    medium.check(theta)
    scale = np.sqrt(1.0 - theta) if medium is Medium.LOSS else np.sqrt(theta)
    return float(scale / (abs(cfg.u) * np.cosh(cfg.r)))


def sensitivity(scheme, cfg, theta, order=LEADING):
    """Error-propagation sensitivity of ``scheme`` at ``theta`` with its QA.

    Raises
    ------
    SingularOperatingPoint
        If |d<N>/dtheta| < 1e-12 <N>.
    """
    obs = PhotonObservable.for_detection(scheme.detection)
    moments = photon_moments(scheme_map(scheme, cfg, theta), cfg, obs, order)
    slope = mean_derivative(scheme, cfg, theta, obs, order)
    if abs(slope) < SINGULAR_RTOL * abs(moments.mean):
        raise SingularOperatingPoint(
            f"{scheme.label}: d<N>/dtheta = {slope:.3g} at r={cfg.r}, theta={theta}"
        )
    delta = moments.std / abs(slope)
    coh = coherent_baseline(cfg, scheme.medium, theta)
    return SensitivityReport(delta, coh, coh / delta, cfg.r, theta, cfg.u, scheme)


def crb_sensitivity(cfg, medium, theta, n_meas=1):
    """(Cramer-Rao bound, its QA) from the closed-form QFI."""
    bound = cr_bound(qfi_closed(medium, cfg.u, cfg.r, theta), n_meas)
    return bound, coherent_baseline(cfg, medium, theta) / bound


@dataclass(frozen=True)
class ClosedFormAux:
    """Shorthands of the printed sensitivity formulas (NaN where not applicable)."""

    zeta: float = np.nan
    eta: float = np.nan
    mu: float = np.nan
    nu: float = np.nan
    i_d: float = np.nan
    U: float = np.nan
    V: float = np.nan
    A: float = np.nan
    B: float = np.nan


def closed_form_aux(medium, r, theta):
    medium = Medium(medium)
    medium.check(theta)
    ch, sh = np.cosh(r), np.sinh(r)
    if medium is Medium.LOSS:
        alpha = theta
        s = np.sqrt(1.0 - alpha)
        zeta = 1.0 - s
        eta = alpha / 4 + s
        U = (4 - 4 * zeta - 4 * alpha * ch**2 + 2 * zeta * np.cosh(4 * r)
             - 2 * alpha * eta * np.sinh(4 * r) ** 2)
        V = 2 * ch**2 / s * (2 - s * np.cosh(2 * r))
        return ClosedFormAux(zeta=zeta, eta=eta, U=U, V=V)
    G = theta
    g = np.sqrt(G)
    mu, nu = g + 1, g - 1
    A = (mu * (7 * G**1.5 - 3 * G + 5 * g - 1)
         + 4 * (3 * g * mu - nu) * mu * nu * np.cosh(2 * r)
         + 8 * mu**2 * nu**2 * np.cosh(4 * r)
         + 4 * mu * nu**3 * np.cosh(6 * r)
         + nu**4 * np.cosh(8 * r))
    B = 4 * ch**2 * (1 + nu * np.cosh(2 * r))
    # intensity difference per seed photon
    i_d = G * ch**2 - sh**2
    return ClosedFormAux(mu=mu, nu=nu, i_d=i_d, A=A, B=B)


@dataclass(frozen=True)
class ClosedFormResult:
    value: float
    fidelity: str
    radicand: float

    @property
    def valid(self):
        return bool(np.isfinite(self.value))


def _root(radicand, denom, fidelity):
    value = np.sqrt(radicand) / abs(denom) if radicand >= 0 else np.nan
    return ClosedFormResult(float(value), fidelity, float(radicand))


def closed_form_sensitivity(scheme, cfg, theta, cross_coefficient=4.0):
    """Evaluate the printed sensitivity formula of ``scheme`` verbatim.

    A negative radicand gives ``value = nan`` with the radicand reported.
    ``cross_coefficient`` is the factor multiplying zeta^2 cosh^2 r sinh^2 r in the
    single-port loss formula (4 as printed, 2 from moment propagation).
    """
    medium = scheme.medium
    aux = closed_form_aux(medium, cfg.r, theta)
    u = abs(cfg.u)
    ch, sh = np.cosh(cfg.r), np.sinh(cfg.r)
    det = scheme.detection
    if medium is Medium.LOSS:
        alpha = theta
        if det is Detection.BALANCED:
            rad = 1 + 2 * alpha**2 * ch**2 * sh**2 - alpha * ch**2
            return _root(rad, u * ch**2, TABLE_CONSISTENT)
        if det is Detection.SU11_SINGLE:
            rad = (1 - alpha) * (1 + cross_coefficient * aux.zeta**2 * ch**2 * sh**2)
            fid = TABLE_CONSISTENT if cross_coefficient == 2.0 else DISCREPANT
            return _root(rad, u * ch**2, fid)
        return _root(aux.U, u * aux.V, DISCREPANT)
    G = theta
    if det is Detection.BALANCED:
        rad = aux.i_d * (2 * aux.i_d - 1)
        return _root(rad, u * ch**2, TABLE_CONSISTENT)
    if det is Detection.SU11_SUM:
        return _root(G * aux.A, u * aux.B, TABLE_CONSISTENT)
    raise ValueError(f"no printed closed form for {scheme.label}")


def qa_ratio_bd_loss(r, alpha):
    """Printed scaled sensitivity (delta/delta_coh) of balanced detection under loss."""
    ch, sh = np.cosh(r), np.sinh(r)
    rad = (1 + 2 * alpha**2 * ch**2 * sh**2 - alpha * ch**2) / (1 - alpha)
    return ClosedFormResult(float(np.sqrt(rad) / ch), TABLE_CONSISTENT, float(rad))


def qa_ratio_su11_single_loss(r, alpha, cross_coefficient=4.0):
    """Printed scaled sensitivity of the single-port SU(1,1) scheme under loss."""
    ch, sh = np.cosh(r), np.sinh(r)
    zeta = 1.0 - np.sqrt(1.0 - alpha)
    rad = 1 + cross_coefficient * zeta**2 * ch**2 * sh**2
    fid = TABLE_CONSISTENT if cross_coefficient == 2.0 else DISCREPANT
    return ClosedFormResult(float(np.sqrt(rad) / ch), fid, float(rad))


def su11_sum_singularity(alpha):
    """Squeezing r* at which d<N_a + N_b>/d alpha vanishes: sinh^2 r* = sqrt(1-alpha)/(2 zeta)."""
    if not 0 < alpha < 1:
        raise ValueError(f"need 0 < alpha < 1, got {alpha}")
    s = np.sqrt(1.0 - alpha)
    return float(np.arcsinh(np.sqrt(s / (2 * (1.0 - s)))))


def singularity_residual(alpha, r):
    s = np.sqrt(1.0 - alpha)
    return float(np.sinh(r) ** 2 - s / (2 * (1.0 - s)))


@dataclass(frozen=True)
class Optimum:
    r_opt: float
    qa_opt: float
    unimodal: bool


def _qa_or_zero(scheme, theta, r, u):
    try:
        return sensitivity(scheme, ProbeConfig(u, r), theta).qa
    except SingularOperatingPoint:
        return 0.0


def optimize_r(scheme, theta, r_range=(0.0, 4.0), n_grid=64, xtol=1e-6, u=1.0):
    """Squeezing that maximises the quantum advantage of ``scheme``.

    A coarse grid locates the peak and checks unimodality; golden-section search
    then refines it.  Multi-peaked profiles return the best grid point with a
    warning.
    """
    lo, hi = r_range
    grid = np.linspace(lo, hi, n_grid)
    qa = np.array([_qa_or_zero(scheme, theta, r, u) for r in grid])
    k = int(np.argmax(qa))
    interior_peaks = np.sum((qa[1:-1] > qa[:-2]) & (qa[1:-1] > qa[2:]))
    edge_peaks = int(qa[0] > qa[1]) + int(qa[-1] > qa[-2])
    if interior_peaks + edge_peaks > 1:
        warnings.warn(
            f"{scheme.label}: QA profile is not unimodal on [{lo}, {hi}]; "
            "returning the best grid point",
            RuntimeWarning,
            stacklevel=2,
        )
        return Optimum(float(grid[k]), float(qa[k]), False)
    if k in (0, n_grid - 1):
        return Optimum(float(grid[k]), float(qa[k]), True)
    res = minimize_scalar(
        lambda r: -_qa_or_zero(scheme, theta, r, u),
        bracket=(grid[k - 1], grid[k], grid[k + 1]),
        method="golden",
        options={"xtol": xtol / (2 * max(grid[k], 1.0))},
    )
    return Optimum(float(res.x), float(-res.fun), True)
