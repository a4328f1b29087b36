"""Measurement-scheme descriptors shared by the Gaussian, estimation and Fock layers."""

import enum
from dataclasses import dataclass


class Detection(enum.Enum):
    """Detection strategy at the output of the setup."""

    BALANCED = "bd"            # intensity difference N_a - N_b, no second OPA
    SU11_SUM = "su11-sum"      # N_a + N_b after the second (anti-squeezing) OPA
    SU11_SINGLE = "su11-single"  # N_a only after the second OPA

    @property
    def interferometric(self):
        return self is not Detection.BALANCED

    @property
    def weights(self):
        return {
            Detection.BALANCED: (1.0, -1.0),
            Detection.SU11_SUM: (1.0, 1.0),
            Detection.SU11_SINGLE: (1.0, 0.0),
        }[self]


class Medium(enum.Enum):
    """Sample placed in the probe arm; the parameter value travels separately as ``theta``."""

    LOSS = "loss"
    GAIN = "gain"

    def check(self, theta):
        if self is Medium.LOSS:
            if not 0.0 <= theta < 1.0:
                raise ValueError(f"loss parameter must lie in [0, 1), got {theta}")
        elif theta < 1.0:
            raise ValueError(f"gain must be >= 1, got {theta}")


@dataclass(frozen=True)
class SchemeSpec:
    detection: Detection
    medium: Medium

    @classmethod
    def parse(cls, detection, medium):
        """Build from the string tags used on the command line (``"bd"``, ``"loss"``...)."""
        return cls(Detection(detection), Medium(medium))

    @property
    def label(self):
        return f"{self.detection.value}/{self.medium.value}"


ALL_SCHEMES = tuple(SchemeSpec(d, m) for m in Medium for d in Detection)
