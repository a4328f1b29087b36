"""
Checking the Gaussian engine against a brute-force number basis
===============================================================

At small brightness the full state fits in a truncated Fock space.  The loss
and gain stages are built explicitly with an ancilla mode, and photon-number
moments are computed by direct summation.  The cutoff needed grows quickly with
|u| and r: the |u|=2, r=0.8 corner already leaves more than 1e-8 of population
at n=48.

Run::

    python3 demos/04_fock_crosscheck.py
"""

from squeezemetro import fock_oracle
from squeezemetro.gaussian import PhotonObservable, ProbeConfig, photon_moments, scheme_map
from squeezemetro.schemes import ALL_SCHEMES, Medium

cfg = ProbeConfig(2.0, 0.6)
for scheme in ALL_SCHEMES:
    theta = 0.1 if scheme.medium is Medium.LOSS else 1.1
    obs = PhotonObservable.for_detection(scheme.detection)
    fock = fock_oracle.oracle_moments(fock_oracle.scheme_state(scheme, cfg, theta, cutoff=64), obs)
    wick = photon_moments(scheme_map(scheme, cfg, theta), cfg, obs)
    print(f"{scheme.label:>17}: mean {fock.mean:10.6f} vs {wick.mean:10.6f}   "
          f"var {fock.variance:10.6f} vs {wick.variance:10.6f}")

for cutoff in (48, 64, 96):
    try:
        state = fock_oracle.build_tmbss(2.0, 0.8, cutoff)
        print(f"cutoff {cutoff}: accepted, tail mass {state.tail_mass():.2e}")
    except fock_oracle.TruncationError as exc:
        print(f"cutoff {cutoff}: {exc}")
