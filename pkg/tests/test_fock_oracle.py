import numpy as np
import pytest
from scipy.sparse.linalg import expm_multiply

from squeezemetro import fock_oracle as fo
from squeezemetro.gaussian import (
    BALANCED_DIFFERENCE,
    EXACT,
    LEADING,
    SINGLE_PORT,
    SUM_PORTS,
    PhotonObservable,
    ProbeConfig,
    mean_derivative,
    photon_moments,
    scheme_map,
)
from squeezemetro.reproduction import oracle_suite
from squeezemetro.schemes import ALL_SCHEMES, Detection, Medium, SchemeSpec


def test_vacuum():
    s = fo.build_tmbss(0.0, 0.0, 10)
    assert abs(s.psi[0, 0]) == pytest.approx(1.0)
    assert s.norm() == pytest.approx(1.0)


def test_tmsv_structure():
    r = 0.5
    s = fo.build_tmbss(0.0, r, 30)
    p = s.populations()
    off = p - np.diag(np.diag(p))
    assert np.abs(off).max() < 1e-14
    n = np.arange(31)
    want = np.tanh(r) ** (2 * n) / np.cosh(r) ** 2
    assert np.allclose(np.diag(p), want, atol=1e-12)


def test_difference_conserved_by_squeezer():
    s = fo.build_tmbss(1.5, 0.5, 40)
    assert fo.oracle_moments(s, BALANCED_DIFFERENCE).mean == pytest.approx(2.25, abs=1e-8)


def test_loss_zero_identity():
    s = fo.build_tmbss(1.0, 0.4, 20)
    out = fo.apply_loss(s, 0.0)
    assert np.allclose(out.psi[..., 0], s.psi)
    assert np.allclose(out.populations(), s.populations())


def test_coherent_through_loss():
    s = fo.apply_loss(fo.coherent_vacuum(1.0, 20), 0.36)
    res = fo.oracle_moments(s, SINGLE_PORT)
    assert res.mean == pytest.approx(0.64, abs=1e-10)
    assert res.variance == pytest.approx(0.64, abs=1e-10)


def test_amplified_vacuum():
    s = fo.apply_gain(fo.coherent_vacuum(0.0, 40), 1.5)
    res = fo.oracle_moments(s, SINGLE_PORT)
    assert res.mean == pytest.approx(0.5, abs=1e-10)
    # thermal: Var = n(n + 1), i.e. sigma_11 = 2G - 1 = 2n + 1
    assert res.variance == pytest.approx(0.75, abs=1e-9)


def test_purity():
    s = fo.build_tmbss(1.0, 0.4, 24)
    assert s.purity() == pytest.approx(1.0, abs=1e-8)
    assert fo.apply_loss(s, 0.2).purity() < 1 - 1e-3
    assert fo.apply_gain(s, 1.2).purity() < 1 - 1e-3
    st = fo.apply_loss(s, 0.2)
    rho = st.density_matrix()
    assert st.trace() == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(rho, rho.conj().T)
    assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_truncation_guard():
    with pytest.raises(fo.TruncationError):
        fo.build_tmbss(3.0, 1.0, 10)


def test_channel_ranges():
    s = fo.build_tmbss(0.5, 0.2, 10)
    with pytest.raises(ValueError):
        fo.apply_loss(s, 1.0)
    with pytest.raises(ValueError):
        fo.apply_gain(s, 0.9)


@pytest.mark.parametrize("kind", ["squeeze", "bs"])
def test_sector_propagator_matches_sparse_action(kind):
    dim, t = 12, 0.37
    rng = np.random.default_rng(7)
    psi = rng.normal(size=(dim, dim, dim)) + 1j * rng.normal(size=(dim, dim, dim))
    psi /= np.linalg.norm(psi)
    st = fo.FockState(dim - 1, psi)
    got = fo._evolve(st, 0, 2, kind, t).psi
    gen = fo.two_mode_generator(3, dim, 0, 2, kind)
    want = expm_multiply(t * gen, psi.reshape(-1)).reshape(psi.shape)
    assert np.abs(got - want).max() < 1e-12


@pytest.mark.parametrize("scheme", ALL_SCHEMES, ids=lambda s: s.label)
@pytest.mark.parametrize("u,r,theta_loss,theta_gain", [(2.0, 0.6, 0.1, 1.1), (1.0, 0.8, 0.3, 1.3)])
def test_matches_wick_engine(scheme, u, r, theta_loss, theta_gain):
    theta = theta_loss if scheme.medium is Medium.LOSS else theta_gain
    cfg = ProbeConfig(u, r)
    obs = PhotonObservable.for_detection(scheme.detection)
    got = fo.oracle_moments(fo.scheme_state(scheme, cfg, theta, cutoff=64), obs)
    want = photon_moments(scheme_map(scheme, cfg, theta), cfg, obs, EXACT)
    assert got.mean == pytest.approx(want.mean, abs=1e-6)
    assert got.variance == pytest.approx(want.variance, abs=1e-6)


def test_r0_shot_noise():
    cfg = ProbeConfig(1.2, 0.0)
    s = fo.scheme_state(SchemeSpec(Detection.BALANCED, Medium.LOSS), cfg, 0.25, cutoff=24)
    res = fo.oracle_moments(s, BALANCED_DIFFERENCE)
    assert res.mean == pytest.approx(0.75 * 1.44, abs=1e-10)
    assert res.variance == pytest.approx(0.75 * 1.44, abs=1e-10)


def test_leading_order_convergence():
    scheme = SchemeSpec(Detection.BALANCED, Medium.LOSS)
    errs = []
    for u in (1.0, 2.0):
        cfg = ProbeConfig(u, 0.4)
        ref = fo.oracle_moments(fo.scheme_state(scheme, cfg, 0.1, cutoff=48), BALANCED_DIFFERENCE)
        lead = photon_moments(scheme_map(scheme, cfg, 0.1), cfg, BALANCED_DIFFERENCE, LEADING)
        errs.append(abs(ref.variance - lead.variance) / ref.variance)
    assert errs[1] < 0.5 * errs[0]


def test_oracle_sensitivity():
    scheme = SchemeSpec(Detection.SU11_SUM, Medium.GAIN)
    cfg = ProbeConfig(2.0, 0.6)
    got = fo.oracle_sensitivity(scheme, cfg, 1.1, step=1e-3, cutoff=64)
    obs = SUM_PORTS
    m = photon_moments(scheme_map(scheme, cfg, 1.1), cfg, obs, EXACT)
    want = m.std / abs(mean_derivative(scheme, cfg, 1.1, obs, EXACT))
    assert got == pytest.approx(want, rel=1e-5)
    with pytest.raises(ValueError):
        fo.oracle_sensitivity(scheme, cfg, 1.1, step=0.1)


def test_cutoff_convergence():
    scheme = SchemeSpec(Detection.SU11_SINGLE, Medium.LOSS)
    cfg = ProbeConfig(1.0, 0.6)
    a = fo.oracle_moments(fo.scheme_state(scheme, cfg, 0.2, cutoff=32), SINGLE_PORT)
    b = fo.oracle_moments(fo.scheme_state(scheme, cfg, 0.2, cutoff=48), SINGLE_PORT)
    assert a.variance == pytest.approx(b.variance, abs=1e-8)


def test_suite_agrees_at_converged_cutoff():
    # same parameter box as the default suite with enough headroom for |u|=2, r=0.8
    cases = oracle_suite(cutoff=96)
    assert not [c for c in cases if c.error]
    assert max(c.max_dev for c in cases) < 1e-6


def test_suite_rejects_overflow_at_default_cutoff():
    cases = oracle_suite(cutoff=48, u_values=(2.0,), r_values=(0.8,))
    assert cases and all(c.error and c.max_dev == np.inf for c in cases)
