"""
Quantum Fisher information of two-mode Gaussian states and Cramer-Rao bounds.

The general expression works in the complex (a, b, a^dagger, b^dagger) form:

    F = 1/2 vec(dsigma)^dagger M^+ vec(dsigma) + 2 dd^dagger sigma^-1 dd,
    M = conj(sigma) (x) sigma - K (x) K,

where ``^+`` is a Moore-Penrose pseudo-inverse so that pure states (singular M)
are handled as well.
"""

from dataclasses import dataclass

import numpy as np

from .gaussian import (
    K,
    apply_channel,
    channel_derivative,
    squeeze_matrix,
    tmbss,
    ProbeConfig,
)
from .schemes import Medium

GENERAL = "general"
BRIGHT = "bright-limit"
CLOSED_FORM = "closed-form"

PINV_RCOND = 1e-10


@dataclass(frozen=True)
class QfiResult:
    value: float
    term_sigma: float
    term_disp: float
    method: str = GENERAL


@dataclass(frozen=True)
class QfiWorkspace:
    """Intermediate objects of one evaluation, kept for inspection."""

    dsigma: np.ndarray
    dd: np.ndarray
    M: np.ndarray


class ChannelFamily:
    """theta -> output state of TMBSS(u, r) sent through a loss or gain stage on mode a.

    With ``antisqueeze=True`` the second OPA S(-r) follows the sample.  The family
    is callable and also supplies analytic derivatives.
    """

    def __init__(self, medium, u, r, antisqueeze=False):
        self.medium = Medium(medium)
        self.cfg = ProbeConfig(u, r)
        self.antisqueeze = antisqueeze
        self._input = tmbss(self.cfg)
        self._post = squeeze_matrix(-r) if antisqueeze else np.eye(4)

    def __call__(self, theta):
        state = apply_channel(self._input, self.medium, theta)
        if self.antisqueeze:
            P = self._post
            state.d, state.sigma = P @ state.d, P @ state.sigma @ P.T
        return state

    def derivative(self, theta):
        dd, dsigma = channel_derivative(self._input, self.medium, theta)
        P = self._post
        return P @ dd, P @ dsigma @ P.T


def loss_family(u, r, antisqueeze=False):
    return ChannelFamily(Medium.LOSS, u, r, antisqueeze)


def gain_family(u, r, antisqueeze=False):
    return ChannelFamily(Medium.GAIN, u, r, antisqueeze)


def _vec(a):
    # column stacking
    return a.reshape(-1, order="F")


def central_difference(family, theta, step=None):
    """Numerical (dd, dsigma) with step 1e-6 * max(1, |theta|) by default."""
    if step is None:
        step = 1e-6 * max(1.0, abs(theta))
    try:
        hi, lo = family(theta + step), family(theta - step)
    except ValueError as exc:
        raise ValueError(
            f"cannot difference the family at theta={theta} with step {step}: {exc}"
        ) from exc
    dd = (hi.d - lo.d) / (2 * step)
    dsigma = (hi.sigma - lo.sigma) / (2 * step)
    if not (np.all(np.isfinite(dd)) and np.all(np.isfinite(dsigma))):
        raise ValueError("non-finite derivative; step too small or theta on the boundary")
    return dd, dsigma


def qfi_from_derivatives(sigma, dd, dsigma, workspace=False):
    """Evaluate the general two-term QFI for a state with covariance ``sigma``."""
    sigma = np.asarray(sigma, dtype=complex)
    M = np.kron(sigma.conj(), sigma) - np.kron(K, K)
    v = _vec(np.asarray(dsigma, dtype=complex))
    term_sigma = 0.5 * np.real(v.conj() @ np.linalg.pinv(M, rcond=PINV_RCOND, hermitian=True) @ v)
    term_disp = 2 * np.real(np.conj(dd) @ np.linalg.solve(sigma, dd))
    res = QfiResult(float(term_sigma + term_disp), float(term_sigma), float(term_disp), GENERAL)
    if workspace:
        return res, QfiWorkspace(np.asarray(dsigma), np.asarray(dd), M)
    return res


def qfi_general(family, theta, step=None):
    """QFI of a one-parameter Gaussian family at ``theta``.

    Parameters
    ----------
    family : callable
        theta -> GaussianState.  If it has a ``derivative`` method returning
        (dd, dsigma), that is used unless ``step`` is given.
    theta : float
    step : float, optional
        Central-difference step; forces numerical derivatives.
    """
    state = family(theta)
    if step is None and hasattr(family, "derivative"):
        dd, dsigma = family.derivative(theta)
    else:
        dd, dsigma = central_difference(family, theta, step)
    return qfi_from_derivatives(state.sigma, dd, dsigma)


def qfi_bright(dd, sigma):
    """Displacement-only QFI 2 dd^dagger sigma^-1 dd (covariance term dropped)."""
    dd = np.asarray(dd, dtype=complex)
    value = 2 * np.real(dd.conj() @ np.linalg.solve(np.asarray(sigma, dtype=complex), dd))
    return QfiResult(float(value), 0.0, float(value), BRIGHT)


def qfi_absorption_closed(u, r, alpha):
    """|u|^2 cosh^2 r cosh 2r / ([1 + alpha (cosh 2r - 1)] (1 - alpha)); inf at alpha = 1."""
    if alpha < 0 or alpha > 1:
        raise ValueError(f"loss parameter must lie in [0, 1), got {alpha}")
    if alpha == 1:
        return np.inf
    c2 = np.cosh(2 * r)
    return abs(u) ** 2 * np.cosh(r) ** 2 * c2 / ((1 + alpha * (c2 - 1)) * (1 - alpha))


def qfi_gain_closed(u, r, gain):
    """|u|^2 cosh^2 r cosh 2r / (G [G + (G - 1) cosh 2r])."""
    if gain < 1:
        raise ValueError(f"gain must be >= 1, got {gain}")
    c2 = np.cosh(2 * r)
    return abs(u) ** 2 * np.cosh(r) ** 2 * c2 / (gain * (gain + (gain - 1) * c2))


def qfi_closed(medium, u, r, theta):
    if Medium(medium) is Medium.LOSS:
        return qfi_absorption_closed(u, r, theta)
    return qfi_gain_closed(u, r, theta)


def cr_bound(fisher, n_meas=1):
    """Cramer-Rao bound 1/sqrt(n_meas * F)."""
    if not fisher > 0:
        raise ValueError(f"Fisher information must be positive, got {fisher}")
    if n_meas < 1:
        raise ValueError("need at least one measurement")
    return 1.0 / np.sqrt(n_meas * fisher)
