"""Quantum metrology of absorption and gain with two-mode bright squeezed light."""

from .estimation import (
    Optimum,
    SensitivityReport,
    SingularOperatingPoint,
    closed_form_sensitivity,
    coherent_baseline,
    crb_sensitivity,
    optimize_r,
    sensitivity,
    su11_sum_singularity,
)
from .fisher import (
    ChannelFamily,
    QfiResult,
    cr_bound,
    qfi_absorption_closed,
    qfi_bright,
    qfi_gain_closed,
    qfi_general,
)
from .fock_oracle import FockState, TruncationError
from .gaussian import (
    BogoliubovMap,
    GaussianState,
    MomentResult,
    PhotonObservable,
    ProbeConfig,
    photon_moments,
    scheme_map,
)
from .schemes import ALL_SCHEMES, Detection, Medium, SchemeSpec

__version__ = "0.1.0"
