"""Device parameter models and the measured qubit catalogue

Configuration units are GHz for qubit frequencies, µs for qubit lifetimes and
ns for the cable; everything handed to the integrator is in rad/ns and ns.
"""

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

TWO_PI = 2.0 * math.pi


def mhz_to_rad_per_ns(value_mhz: float) -> float:
    return TWO_PI * value_mhz * 1e-3


def rad_per_ns_to_mhz(value: float) -> float:
    return value / TWO_PI * 1e3


def rate_per_ns(lifetime_us: float) -> float:
    """1/T in 1/ns for a lifetime in µs; zero for an infinite lifetime."""
    return 0.0 if math.isinf(lifetime_us) else 1.0 / (lifetime_us * 1e3)


class QubitParams(BaseModel):
    """Transmon qubit parameters, one row of the device table."""

    model_config = ConfigDict(frozen=True)

    f_eg_max: float = Field(gt=0, description="Maximum qubit frequency (GHz)")
    f_eg: float = Field(gt=0, description="Operating frequency (GHz)")
    eta: float = Field(description="Anharmonicity (GHz)")
    T1: float = Field(gt=0, description="Energy relaxation time (µs)")
    T_phi: float = Field(gt=0, description="Pure dephasing time (µs)")
    F_g: float = Field(ge=0, le=1, description="Readout visibility of |g>")
    F_e: float = Field(ge=0, le=1, description="Readout visibility of |e>")

    @property
    def lifetimes(self) -> tuple[float, float]:
        return self.T1, self.T_phi


DEVICE_QUBITS: dict[str, QubitParams] = {
    "Q1A": QubitParams(f_eg_max=6.03, f_eg=5.2556, eta=-0.23, T1=8.9, T_phi=1.8, F_g=0.968, F_e=0.940),
    "Q2A": QubitParams(f_eg_max=6.14, f_eg=5.8695, eta=-0.15, T1=5.7, T_phi=3.1, F_g=0.974, F_e=0.927),
    "Q3A": QubitParams(f_eg_max=6.04, f_eg=5.5055, eta=-0.23, T1=6.3, T_phi=2.5, F_g=0.962, F_e=0.926),
    "Q1B": QubitParams(f_eg_max=6.08, f_eg=5.3021, eta=-0.23, T1=22.1, T_phi=2.2, F_g=0.988, F_e=0.936),
    "Q2B": QubitParams(f_eg_max=6.25, f_eg=5.8901, eta=-0.15, T1=9.2, T_phi=3.0, F_g=0.965, F_e=0.939),
    "Q3B": QubitParams(f_eg_max=6.16, f_eg=5.3218, eta=-0.23, T1=21.1, T_phi=1.8, F_g=0.983, F_e=0.939),
}


class CouplerParams(BaseModel):
    """Inductances (nH) and junction phase of a tunable coupler."""

    model_config = ConfigDict(frozen=True)

    L_g: float = Field(default=0.2, gt=0)
    L_w: float = Field(default=0.1, gt=0)
    L_T: float = Field(default=0.62, gt=0)
    L_J: float | None = Field(
        default=None, gt=0, description="Qubit junction inductance; inferred when unset"
    )
    L_n: float = Field(default=121.0, gt=0, description="Cable mode inductance")
    delta: float = Field(default=math.pi, description="Coupler junction phase (rad)")


class CableParams(BaseModel):
    """Standing-wave modes of the cable, truncated to ``mode_dim`` levels."""

    model_config = ConfigDict(frozen=True)

    n_modes: int = Field(default=3, ge=1, description="Number of modes M (odd)")
    omega_fsr: float = Field(
        default=mhz_to_rad_per_ns(105.0), gt=0, description="Free spectral range (rad/ns)"
    )
    T1r: float = Field(default=477.3, gt=0, description="Mode lifetime (ns)")
    mode_dim: int = Field(default=2, ge=2)
    f_mode: float = Field(default=5.806, gt=0, description="Communication mode (GHz)")

    @field_validator("n_modes")
    @classmethod
    def _odd_modes(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError(f"n_modes must be odd so a mode sits at the frame origin, got {value}")
        return value

    def mode_offset(self, m: int) -> float:
        """Frequency of mode ``m`` (1-based) relative to the central mode."""
        return (m - (self.n_modes + 1) / 2) * self.omega_fsr

    def mode_labels(self) -> list[str]:
        return [f"C{m}" for m in range(1, self.n_modes + 1)]


class BellLinkParams(BaseModel):
    """Everything the cable Bell-pair sequence needs.

    Couplings are in rad/ns. When a qubit's coupler is on, its T1 switches to
    ``coupler_on_T1`` and, if set, its T_phi to ``coupler_on_T_phi``.

    With ``dephasing="quasi-static"`` the table T_phi is a Gaussian envelope
    applied after the sequence rather than a Lindblad collapse term; a
    ``coupler_on_T_phi`` override still acts as a Markovian rate.
    """

    model_config = ConfigDict(frozen=True)

    qubit_a: QubitParams = DEVICE_QUBITS["Q2A"]
    qubit_b: QubitParams = DEVICE_QUBITS["Q2B"]
    cable: CableParams = CableParams()
    g_a: float = Field(default=mhz_to_rad_per_ns(4.3), gt=0)
    g_b: float = Field(default=mhz_to_rad_per_ns(4.3), gt=0)
    half_swap_ns: float = Field(default=30.0, gt=0)
    full_swap_ns: float = Field(default=60.0, gt=0)
    coupler_on_T1: float | None = Field(default=2.1, gt=0, description="µs")
    coupler_on_T_phi: float | None = Field(default=None, gt=0, description="µs")
    dephasing: Literal["markovian", "quasi-static"] = "quasi-static"

    @classmethod
    def lossless(cls, omega_fsr: float = mhz_to_rad_per_ns(1000.0)) -> "BellLinkParams":
        """Infinite lifetimes, widely spaced modes and exact swap timings."""
        inf = math.inf
        ideal = QubitParams(f_eg_max=6.0, f_eg=5.8, eta=-0.2, T1=inf, T_phi=inf, F_g=1, F_e=1)
        g = mhz_to_rad_per_ns(4.3)
        return cls(
            qubit_a=ideal,
            qubit_b=ideal,
            cable=CableParams(omega_fsr=omega_fsr, T1r=inf),
            g_a=g,
            g_b=g,
            half_swap_ns=math.pi / (4 * g),
            full_swap_ns=math.pi / (2 * g),
            coupler_on_T1=None,
        )

    def qubit_lifetimes(self, qubit: QubitParams, coupler_on: bool) -> tuple[float, float]:
        """(T1, Markovian T_phi) in µs for one segment."""
        t1, t_phi = qubit.lifetimes
        if self.dephasing == "quasi-static":
            t_phi = math.inf
        if coupler_on:
            t1 = self.coupler_on_T1 or t1
            t_phi = self.coupler_on_T_phi or t_phi
        return t1, t_phi


# iSWAP coupling between Q1 and Q2 of one node, from a 15 ns gate time
G12_DEFAULT = mhz_to_rad_per_ns(16.7)
