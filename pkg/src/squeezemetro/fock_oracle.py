"""
Brute-force reference in a truncated number basis.

States are stored as pure amplitude tensors over (a, b, ancilla...) with one axis
per mode.  A loss or gain stage appends a vacuum ancilla and entangles it with the
probe mode through a beam splitter or a two-mode squeezer, so the physical
two-mode state is the reduced density matrix obtained by tracing the ancillas.
Nothing here uses the Gaussian machinery.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.linalg import expm
from scipy.special import gammaln

from .gaussian import EXACT, MomentResult, PhotonObservable
from .schemes import Medium

DEFAULT_CUTOFF = 48
TAIL_TOL = 1e-8
NORM_TOL = 1e-10

_MODE_AXES = {"a": 0, "b": 1}


class TruncationError(RuntimeError):
    """Population reached the top of the truncated number basis."""


@dataclass
class FockState:
    """Pure amplitudes over ``n_modes`` modes truncated at ``cutoff`` photons each.

    Axis 0 is mode a, axis 1 mode b, further axes are ancillas still attached to
    the state; every observable of (a, b) is evaluated on the reduced state.
    """

    cutoff: int
    psi: np.ndarray

    @property
    def dim(self):
        return self.cutoff + 1

    @property
    def n_modes(self):
        return self.psi.ndim

    def norm(self):
        return float(np.vdot(self.psi, self.psi).real)

    def tail_mass(self):
        """Largest population sitting at n = cutoff in any mode."""
        p = np.abs(self.psi) ** 2
        tails = []
        for axis in range(self.n_modes):
            tails.append(np.take(p, -1, axis=axis).sum())
        return float(max(tails))

    def populations(self):
        """Joint photon-number distribution P(n_a, n_b)."""
        p = np.abs(self.psi) ** 2
        if self.n_modes > 2:
            p = p.sum(axis=tuple(range(2, self.n_modes)))
        return p

    def _purification_matrix(self):
        return self.psi.reshape(self.dim ** 2, -1)

    def density_matrix(self):
        """Reduced density matrix of (a, b) over the flattened (n_a, n_b) basis."""
        M = self._purification_matrix()
        return M @ M.conj().T

    def trace(self):
        return float(np.real(np.trace(self.density_matrix())))

    def purity(self):
        """tr(rho^2) of the reduced state, via the small ancilla-side Gram matrix."""
        M = self._purification_matrix()
        gram = M.conj().T @ M
        return float(np.real(np.sum(np.abs(gram) ** 2)))

    def check(self, tail_tol=TAIL_TOL):
        tail = self.tail_mass()
        if tail > tail_tol:
            raise TruncationError(
                f"tail mass {tail:.3g} at cutoff {self.cutoff} exceeds {tail_tol:g}"
            )
        drift = abs(self.norm() - 1.0)
        if drift > NORM_TOL:
            raise TruncationError(f"norm drifted by {drift:.3g}")
        return self


@lru_cache(maxsize=8)
def _ladder(dim):
    return sparse.diags(np.sqrt(np.arange(1, dim)), 1, format="csr")


def _embed(ops, n_modes, dim):
    """Kronecker product with identities; ``ops`` maps axis -> single-mode operator."""
    out = None
    eye = sparse.identity(dim, format="csr")
    for axis in range(n_modes):
        factor = ops.get(axis, eye)
        out = factor if out is None else sparse.kron(out, factor, format="csr")
    return out


def two_mode_generator(n_modes, dim, i, j, kind):
    """Sparse truncated generator on the full tensor-product space.

    ``kind="squeeze"`` gives a_i^dagger a_j^dagger - a_i a_j, ``kind="bs"`` gives
    a_i^dagger a_j - a_i a_j^dagger.  Only used to cross-check the sector
    propagator on small cutoffs.
    """
    a = _ladder(dim)
    ad = a.T.tocsr()
    if kind == "squeeze":
        return _embed({i: ad, j: ad}, n_modes, dim) - _embed({i: a, j: a}, n_modes, dim)
    return _embed({i: ad, j: a}, n_modes, dim) - _embed({i: a, j: ad}, n_modes, dim)


def _sectors(dim, kind):
    """Index pairs (n_i, n_j) of each invariant sector with its generator block.

    The squeezer conserves n_i - n_j, the beam splitter n_i + n_j; inside a sector
    the truncated generator is tridiagonal.
    """
    if kind == "squeeze":
        for k in range(-(dim - 1), dim):
            n = np.arange(dim - abs(k))
            ni, nj = (n + k, n) if k >= 0 else (n, n - k)
            amp = np.sqrt((ni[:-1] + 1.0) * (nj[:-1] + 1.0))
            yield ni, nj, amp
    else:
        for total in range(2 * dim - 1):
            m = np.arange(max(0, total - dim + 1), min(total, dim - 1) + 1)
            ni, nj = m, total - m
            amp = np.sqrt((ni[:-1] + 1.0) * nj[:-1])
            yield ni, nj, amp


def _evolve(state, i, j, kind, t):
    """Apply exp(t * generator) between axes i and j, sector by sector."""
    if t == 0:
        return FockState(state.cutoff, state.psi.copy())
    x = np.moveaxis(state.psi, (i, j), (0, 1)).copy()
    for ni, nj, amp in _sectors(state.dim, kind):
        if len(ni) == 1:
            continue
        gen = np.diag(amp, -1) - np.diag(amp, 1)
        x[ni, nj] = expm(t * gen) @ x[ni, nj]
    return FockState(state.cutoff, np.moveaxis(x, (0, 1), (i, j)))


def coherent_amplitudes(u, cutoff):
    n = np.arange(cutoff + 1)
    u = complex(u)
    if u == 0:
        c = np.zeros(cutoff + 1, dtype=complex)
        c[0] = 1.0
        return c
    log_mag = -abs(u) ** 2 / 2 + n * np.log(abs(u)) - 0.5 * gammaln(n + 1)
    return np.exp(log_mag) * np.exp(1j * n * np.angle(u))


def coherent_vacuum(u, cutoff=DEFAULT_CUTOFF):
    psi = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    psi[:, 0] = coherent_amplitudes(u, cutoff)
    return FockState(cutoff, psi)


def apply_squeeze(state, r, modes=(0, 1)):
    """Apply exp(r(a^dagger b^dagger - a b)) between two axes."""
    return _evolve(state, *modes, "squeeze", r).check()


def build_tmbss(u, r, cutoff=DEFAULT_CUTOFF):
    """S(r)|u, 0> in the truncated basis."""
    return apply_squeeze(coherent_vacuum(u, cutoff), r)


def _with_ancilla(state):
    psi = np.zeros(state.psi.shape + (state.dim,), dtype=complex)
    psi[..., 0] = state.psi
    return FockState(state.cutoff, psi)


def apply_loss(state, alpha, mode="a"):
    """Beam splitter of transmissivity 1-alpha between ``mode`` and a fresh vacuum ancilla."""
    Medium.LOSS.check(alpha)
    ext = _with_ancilla(state)
    return _evolve(ext, _MODE_AXES[mode], ext.n_modes - 1, "bs", np.arcsin(np.sqrt(alpha))).check()


def apply_gain(state, gain, mode="a"):
    """Quantum-limited amplifier: two-mode squeezer with cosh^2 s = G on (mode, ancilla)."""
    Medium.GAIN.check(gain)
    ext = _with_ancilla(state)
    s = np.arccosh(np.sqrt(gain))
    return _evolve(ext, _MODE_AXES[mode], ext.n_modes - 1, "squeeze", s).check()


def apply_channel(state, medium, theta, mode="a"):
    if Medium(medium) is Medium.LOSS:
        return apply_loss(state, theta, mode)
    return apply_gain(state, theta, mode)


def scheme_state(scheme, cfg, theta, cutoff=DEFAULT_CUTOFF):
    """Output state of a complete scheme, ancilla still attached."""
    state = apply_channel(build_tmbss(cfg.u, cfg.r, cutoff), scheme.medium, theta)
    if scheme.detection.interferometric:
        state = apply_squeeze(state, -cfg.r)
    return state


def oracle_moments(state, obs):
    """Mean and variance of w_a N_a + w_b N_b by direct summation."""
    p = state.populations()
    n = np.arange(state.dim)
    x = obs.w_a * n[:, None] + obs.w_b * n[None, :]
    mean = float(np.sum(p * x))
    var = float(np.sum(p * (x - mean) ** 2))
    return MomentResult(mean, var, EXACT)


def oracle_sensitivity(scheme, cfg, theta, step=1e-3, cutoff=DEFAULT_CUTOFF):
    """Error-propagation sensitivity with a central difference of the mean signal."""
    if not 1e-4 <= step <= 1e-2:
        raise ValueError("finite-difference step must lie in [1e-4, 1e-2]")
    obs = PhotonObservable.for_detection(scheme.detection)
    centre = oracle_moments(scheme_state(scheme, cfg, theta, cutoff), obs)
    hi = oracle_moments(scheme_state(scheme, cfg, theta + step, cutoff), obs).mean
    lo = oracle_moments(scheme_state(scheme, cfg, theta - step, cutoff), obs).mean
    slope = (hi - lo) / (2 * step)
    return centre.std / abs(slope)
