"""
Two-mode Gaussian states, squeezing/loss/gain channels and photon-number moments.

Operators are ordered as A = (a, b, a^dagger, b^dagger).  A state is described by
its displacement d_m = <A_m> and covariance sigma_mn = <{dA_m, dA_n^dagger}>, so the
vacuum and every coherent state have sigma = identity.

Two complementary descriptions of a setup are provided:

* ``GaussianState`` plus the channel functions, where ancillas are traced out
  immediately after each stage;
* ``BogoliubovMap``, which keeps the output annihilation operators expressed
  through every input mode (signal, idler and each ancilla).  Photon-number
  moments are evaluated from the map with Wick's theorem.
"""

import json
from dataclasses import dataclass

import numpy as np

from .schemes import Detection, Medium

K = np.diag([1.0, 1.0, -1.0, -1.0])

_MODES = {"a": 0, "b": 1}

EXACT = "exact"
LEADING = "leading"


def _mode_index(mode):
    try:
        return _MODES[mode]
    except KeyError:
        raise ValueError(f"mode must be 'a' or 'b', got {mode!r}") from None


@dataclass(frozen=True)
class ProbeConfig:
    """Seed amplitude ``u`` of the coherent input and two-mode squeezing ``r``."""

    u: complex
    r: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"squeezing parameter must be >= 0, got {self.r}")

    @property
    def bright(self):
        """True when |u|^2 > cosh^2 r, the regime of the leading-order formulas."""
        return abs(self.u) ** 2 > np.cosh(self.r) ** 2

    @property
    def probe_photons(self):
        """Mean photon number in the probe arm after the first OPA."""
        return abs(self.u) ** 2 * np.cosh(self.r) ** 2 + np.sinh(self.r) ** 2


@dataclass(frozen=True)
class MomentResult:
    mean: float
    variance: float
    order: str = EXACT

    @property
    def std(self):
        return float(np.sqrt(self.variance))


@dataclass(frozen=True)
class PhotonObservable:
    """Weighted photon number w_a N_a + w_b N_b of the two output modes."""

    w_a: float
    w_b: float

    @classmethod
    def for_detection(cls, detection):
        return cls(*Detection(detection).weights)

    @property
    def weights(self):
        return np.array([self.w_a, self.w_b], dtype=float)


BALANCED_DIFFERENCE = PhotonObservable(1.0, -1.0)
SUM_PORTS = PhotonObservable(1.0, 1.0)
SINGLE_PORT = PhotonObservable(1.0, 0.0)


class GaussianState:
    """Two-mode Gaussian state in the complex (a, b, a^dagger, b^dagger) form.

    Parameters
    ----------
    d : array_like, shape (4,)
        Displacement vector.
    sigma : array_like, shape (4, 4)
        Covariance matrix sigma_mn = <{dA_m, dA_n^dagger}>.
    """

    def __init__(self, d, sigma):
        self.d = np.asarray(d, dtype=complex).reshape(4)
        self.sigma = np.asarray(sigma, dtype=complex).reshape(4, 4)

    def __repr__(self):
        return f"GaussianState(d={self.d!r}, sigma={self.sigma!r})"

    def copy(self):
        return GaussianState(self.d.copy(), self.sigma.copy())

    def allclose(self, other, atol=1e-12):
        return np.allclose(self.d, other.d, rtol=0, atol=atol) and np.allclose(
            self.sigma, other.sigma, rtol=0, atol=atol
        )

    def symplectic_spectrum(self):
        """Absolute eigenvalues of K sigma, sorted ascending; all >= 1 for physical states."""
        return np.sort(np.abs(np.linalg.eigvals(K @ self.sigma)))

    def is_physical(self, tol=1e-12):
        return bool(self.symplectic_spectrum().min() >= 1.0 - tol)

    def is_pure(self, tol=1e-9):
        return bool(np.allclose(self.symplectic_spectrum(), 1.0, rtol=0, atol=tol))

    def check_symmetry(self, tol=1e-12):
        """Verify the conjugation structure imposed by the operator ordering."""
        d, s = self.d, self.sigma
        ok = np.allclose(d[2:], d[:2].conj(), atol=tol)
        ok &= np.allclose(s, s.conj().T, atol=tol)
        ok &= np.allclose(s[2:, 2:], s[:2, :2].conj(), atol=tol)
        ok &= np.allclose(s[2:, :2], s[:2, 2:].conj(), atol=tol)
        return bool(ok)

    def second_moments(self):
        """Normal-ordered fluctuation moments of the two annihilation operators.

        Returns
        -------
        n : ndarray, shape (2, 2)
            n[m, k] = <da_m^dagger da_k>.
        m : ndarray, shape (2, 2)
            m[j, k] = <da_j da_k>.
        """
        s = self.sigma
        n = (s[:2, :2].T - np.eye(2)) / 2
        m = s[:2, 2:] / 2
        return n, m

    def photon_moments(self, obs):
        """Exact mean and variance of ``obs`` on this state (Wick's theorem)."""
        n, m = self.second_moments()
        mean, var = _wick_moments(self.d[:2], n, m, obs.weights)
        return MomentResult(mean, var, EXACT)

    def to_dict(self):
        return {
            "d_re": self.d.real.tolist(),
            "d_im": self.d.imag.tolist(),
            "sigma_re": self.sigma.real.tolist(),
            "sigma_im": self.sigma.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        d = np.asarray(data["d_re"]) + 1j * np.asarray(data["d_im"])
        sigma = np.asarray(data["sigma_re"]) + 1j * np.asarray(data["sigma_im"])
        return cls(d, sigma)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def coherent_vacuum_input(cfg):
    """Coherent state |u> in mode a, vacuum in mode b (the pre-squeezer input)."""
    u = complex(cfg.u)
    return GaussianState([u, 0, u.conjugate(), 0], np.eye(4))


def squeeze_matrix(r):
    """Action of the two-mode squeezer on A: a -> a cosh r + b^dagger sinh r."""
    c, s = np.cosh(r), np.sinh(r)
    return np.array(
        [[c, 0, 0, s],
         [0, c, s, 0],
         [0, s, c, 0],
         [s, 0, 0, c]]
    )


def two_mode_squeeze(state, r):
    """Apply the two-mode squeezer S(r); negative ``r`` undoes the squeezing."""
    S = squeeze_matrix(r)
    return GaussianState(S @ state.d, S @ state.sigma @ S.T)


def _channel_matrices(medium, theta, mode):
    """Linear map S, added noise N and their theta-derivatives for a loss or gain stage.

    The stage acts as a -> k a + (ancilla term), so
    d -> S d and sigma -> S sigma S + N with S, N diagonal on the channel mode.
    """
    medium = Medium(medium)
    medium.check(theta)
    i = _mode_index(mode)
    if medium is Medium.LOSS:
        k = np.sqrt(1.0 - theta)
        noise = theta
        dk = -0.5 / k
    else:
        k = np.sqrt(theta)
        noise = theta - 1.0
        dk = 0.5 / k
    S, N, dS, dN = np.eye(4), np.zeros((4, 4)), np.zeros((4, 4)), np.zeros((4, 4))
    for j in (i, i + 2):
        S[j, j] = k
        N[j, j] = noise
        dS[j, j] = dk
        dN[j, j] = 1.0
    return S, N, dS, dN


def apply_channel(state, medium, theta, mode="a"):
    S, N, _, _ = _channel_matrices(medium, theta, mode)
    return GaussianState(S @ state.d, S @ state.sigma @ S + N)


def channel_derivative(state, medium, theta, mode="a"):
    """d/dtheta of the displacement and covariance produced by ``apply_channel``.

    ``state`` is the (theta-independent) input of the channel.
    """
    S, _, dS, dN = _channel_matrices(medium, theta, mode)
    dd = dS @ state.d
    dsigma = dS @ state.sigma @ S + S @ state.sigma @ dS + dN
    return dd, dsigma


def loss_channel(state, alpha, mode="a"):
    """Beam-splitter loss a -> a sqrt(1-alpha) + v sqrt(alpha), ancilla v traced out."""
    return apply_channel(state, Medium.LOSS, alpha, mode)


def gain_channel(state, gain, mode="a"):
    """Quantum-limited amplifier a -> a sqrt(G) + v^dagger sqrt(G-1), ancilla traced out."""
    return apply_channel(state, Medium.GAIN, gain, mode)


def tmbss(cfg):
    """Two-mode bright squeezed state S(r)|u, 0>."""
    return two_mode_squeeze(coherent_vacuum_input(cfg), cfg.r)


def scheme_state(scheme, cfg, theta, staged=False):
    """Output Gaussian state of a full scheme.

    By default the composed Bogoliubov map is formed first and sigma = T T^dagger
    is evaluated once; stage-by-stage propagation (``staged=True``) loses about
    cosh^2(2r) eps to cancellation when the second OPA undoes the first.
    """
    if not staged:
        return scheme_map(scheme, cfg, theta).state(cfg.u)
    state = apply_channel(tmbss(cfg), scheme.medium, theta)
    if scheme.detection.interferometric:
        state = two_mode_squeeze(state, -cfg.r)
    return state


class BogoliubovMap:
    """Output annihilation operators as linear combinations of all input modes.

    o_m = sum_k alpha[m, k] e_k + beta[m, k] e_k^dagger with inputs
    e = (a_in, b_in, v_1, v_2, ...).  ``a_in`` carries the coherent seed, every
    other input is vacuum.

    Parameters
    ----------
    alpha, beta : array_like, shape (2, n_inputs)
        Coefficients on the input annihilation and creation operators.
    """

    def __init__(self, alpha, beta):
        self.alpha = np.asarray(alpha, dtype=complex)
        self.beta = np.asarray(beta, dtype=complex)
        if self.alpha.shape != self.beta.shape or self.alpha.shape[0] != 2:
            raise ValueError("alpha and beta must both have shape (2, n_inputs)")

    @classmethod
    def identity(cls):
        return cls(np.eye(2), np.zeros((2, 2)))

    @property
    def n_inputs(self):
        return self.alpha.shape[1]

    @property
    def n_ancillas(self):
        return self.n_inputs - 2

    def __repr__(self):
        return f"BogoliubovMap(alpha={self.alpha!r}, beta={self.beta!r})"

    def squeeze(self, r):
        """Follow the current outputs with the two-mode squeezer S(r)."""
        c, s = np.cosh(r), np.sinh(r)
        al, be = self.alpha, self.beta
        # a' = c a + s b^dagger ; b' = c b + s a^dagger
        alpha = np.array([c * al[0] + s * be[1].conj(), c * al[1] + s * be[0].conj()])
        beta = np.array([c * be[0] + s * al[1].conj(), c * be[1] + s * al[0].conj()])
        return BogoliubovMap(alpha, beta)

    def channel(self, medium, theta, mode="a", derivative=False, unit_ancilla=False):
        """Follow the outputs with a loss or gain stage on ``mode``, adding one ancilla.

        With ``derivative=True`` the stage coefficients are replaced by their
        theta-derivatives, which yields the derivative of the composed map when the
        remaining stages do not depend on theta.  ``unit_ancilla=True`` sets the
        ancilla coupling to 1 (used to differentiate ancilla noise, whose squared
        coupling is linear in theta).
        """
        medium = Medium(medium)
        medium.check(theta)
        i = _mode_index(mode)
        if medium is Medium.LOSS:
            keep, anc, anc_created = np.sqrt(1.0 - theta), np.sqrt(theta), False
            if derivative:
                keep, anc = -0.5 / keep, 0.5 / anc if anc > 0 else np.inf
        else:
            keep, anc, anc_created = np.sqrt(theta), np.sqrt(theta - 1.0), True
            if derivative:
                keep, anc = 0.5 / keep, 0.5 / anc if anc > 0 else np.inf
        if unit_ancilla:
            anc = 1.0
        other = 0.0 if derivative else 1.0
        scale = np.full(2, other)
        scale[i] = keep
        alpha = np.hstack([self.alpha * scale[:, None], np.zeros((2, 1))])
        beta = np.hstack([self.beta * scale[:, None], np.zeros((2, 1))])
        target = beta if anc_created else alpha
        target[i, -1] = anc
        return BogoliubovMap(alpha, beta)

    def commutators(self):
        """Return ([o_m, o_n^dagger], [o_m, o_n]) as 2x2 matrices."""
        al, be = self.alpha, self.beta
        dag = al @ al.conj().T - be @ be.conj().T
        plain = al @ be.T - be @ al.T
        return dag, plain

    def commutator_error(self):
        dag, plain = self.commutators()
        return float(max(np.abs(dag - np.eye(2)).max(), np.abs(plain).max()))

    def is_normalized(self, tol=1e-12):
        return self.commutator_error() <= tol

    def table(self):
        """Coefficient table in the conventional 2x3 layout.

        Row a: (a_in, b_in^dagger, ancilla); row b: (a_in^dagger, b_in, ancilla).
        The ancilla entry is whichever of the first ancilla's annihilation or
        creation coefficients is non-zero.
        """
        al, be = self.alpha, self.beta
        anc = [0.0, 0.0]
        if self.n_ancillas:
            for m in range(2):
                anc[m] = al[m, 2] if abs(al[m, 2]) > 0 else be[m, 2]
        return np.real_if_close(
            np.array([[al[0, 0], be[0, 1], anc[0]], [be[1, 0], al[1, 1], anc[1]]])
        )

    def output_means(self, u):
        """<o_m> for a coherent seed u in a_in."""
        return self.alpha[:, 0] * u + self.beta[:, 0] * np.conj(u)

    def second_moments(self):
        """Fluctuation moments n[m,k] = <do_m^dagger do_k>, m[j,k] = <do_j do_k>."""
        al, be = self.alpha, self.beta
        n = be.conj() @ be.T
        m = al @ be.T
        return n, m

    def state(self, u):
        """Reduced two-mode Gaussian state of the outputs (ancillas traced)."""
        mu = self.output_means(u)
        T = np.block([[self.alpha, self.beta], [self.beta.conj(), self.alpha.conj()]])
        return GaussianState(np.concatenate([mu, mu.conj()]), T @ T.conj().T)


def scheme_map(scheme, cfg, theta, **stage_options):
    """Bogoliubov map of a complete scheme.

    Balanced detection: squeeze(r) -> channel(theta). SU(1,1): squeeze(r) ->
    channel(theta) -> squeeze(-r).  ``stage_options`` are forwarded to
    ``BogoliubovMap.channel``.
    """
    m = BogoliubovMap.identity().squeeze(cfg.r)
    m = m.channel(scheme.medium, theta, **stage_options)
    if scheme.detection.interferometric:
        m = m.squeeze(-cfg.r)
    return m


def _wick_moments(mu, n, m, w):
    """Mean and variance of sum_m w_m o_m^dagger o_m for a Gaussian state.

    ``mu`` are the output means; ``n`` and ``m`` the fluctuation moments.
    The linear fluctuation term gives the O(|u|^2) variance, the quadratic one
    the u-independent remainder; their covariance vanishes (odd moments).
    """
    mean = float(np.sum(w * (np.abs(mu) ** 2 + np.real(np.diag(n)))))
    var_lin, var_quad = _variance_parts(mu, n, m, w)
    return mean, var_lin + var_quad


def _variance_parts(mu, n, m, w):
    ww = np.outer(w, w)
    # <do_m do_n^dagger> = n[n, m] + delta_mn
    anti = n.T + np.eye(2)
    mc = mu.conj()
    lin = (
        np.outer(mc, mc) * m
        + np.outer(mc, mu) * anti
        + np.outer(mu, mc) * n
        + np.outer(mu, mu) * m.conj()
    )
    quad = np.abs(m) ** 2 + n * anti
    return float(np.real(np.sum(ww * lin))), float(np.real(np.sum(ww * quad)))


def photon_moments(bmap, cfg, obs, order=EXACT, tol=1e-9):
    """Mean and variance of a weighted photon-number observable.

    Parameters
    ----------
    bmap : BogoliubovMap
    cfg : ProbeConfig
        Only ``cfg.u`` is used; inputs are coherent(u) x vacuum x vacuum ancillas.
    obs : PhotonObservable
    order : {"exact", "leading"}
        ``"leading"`` keeps only the terms proportional to |u|^2.
    """
    if order not in (EXACT, LEADING):
        raise ValueError(f"order must be {EXACT!r} or {LEADING!r}")
    err = bmap.commutator_error()
    if err > tol:
        raise ValueError(f"Bogoliubov map violates commutation relations (error {err:.3g})")
    mu = bmap.output_means(cfg.u)
    n, m = bmap.second_moments()
    w = obs.weights
    if order == LEADING:
        var_lin, _ = _variance_parts(mu, n, m, w)
        return MomentResult(float(np.sum(w * np.abs(mu) ** 2)), var_lin, LEADING)
    mean, var = _wick_moments(mu, n, m, w)
    return MomentResult(mean, var, EXACT)


def mean_derivative(scheme, cfg, theta, obs, order=EXACT):
    """Analytic d<obs>/dtheta from the map and its theta-derivative."""
    bmap = scheme_map(scheme, cfg, theta)
    dmap = scheme_map(scheme, cfg, theta, derivative=True)
    w = obs.weights
    mu, dmu = bmap.output_means(cfg.u), dmap.output_means(cfg.u)
    out = np.sum(w * 2 * np.real(mu.conj() * dmu))
    if order == EXACT:
        # vacuum contribution sum_k |beta_mk|^2 over the signal/idler inputs ...
        be, dbe = bmap.beta[:, :2], dmap.beta[:, :2]
        out += np.sum(w * 2 * np.real(be.conj() * dbe).sum(axis=1))
        # ... and the ancilla, |c_m|^2 * d(coupling^2)/dtheta with d(coupling^2)/dtheta = 1
        unit = scheme_map(scheme, cfg, theta, unit_ancilla=True)
        out += np.sum(w * np.abs(unit.beta[:, 2]) ** 2)
    return float(out)
