"""Tunable-coupler coupling strength between a qubit and a cable mode"""

import logging
import math

from scipy.constants import h, physical_constants
from scipy.optimize import minimize_scalar

from quantum import SingularCouplerError

from .params import TWO_PI, CouplerParams

logger = logging.getLogger(__name__)

FLUX_QUANTUM = physical_constants["mag. flux quantum"][0]
# Charging energy of an unperturbed xmon (GHz)
DEFAULT_CHARGING_ENERGY_GHZ = 0.23
SINGULAR_COS_TOL = 1e-6


def infer_junction_inductance(
    f_ghz: float, charging_energy_ghz: float = DEFAULT_CHARGING_ENERGY_GHZ
) -> float:
    """Junction inductance (nH) of a transmon tuned to ``f_ghz``.

    Uses f = sqrt(8 E_J E_C) - E_C and L_J = (Phi0 / 2pi)^2 / (h E_J).
    """
    e_j_ghz = (f_ghz + charging_energy_ghz) ** 2 / (8.0 * charging_energy_ghz)
    reduced_flux = FLUX_QUANTUM / TWO_PI
    return reduced_flux**2 / (h * e_j_ghz * 1e9) * 1e9


def mutual_inductance(cp: CouplerParams) -> float:
    """M = L_g^2 / (2 L_g + L_w + L_T / cos(delta)), in nH."""
    cos_delta = math.cos(cp.delta)
    if abs(cos_delta) < SINGULAR_COS_TOL:
        raise SingularCouplerError(
            f"cos(delta) = {cos_delta:.2e} at delta = {cp.delta:.6f} rad"
        )
    return cp.L_g**2 / (2 * cp.L_g + cp.L_w + cp.L_T / cos_delta)


def g_from_mutual(
    m_nh: float, f_q: float, f_n: float, l_j: float, l_n: float, l_g: float
) -> float:
    """g = sqrt(w_q w_n)/2 * M / sqrt((L_J + L_g)(L_n + L_g)), in rad/ns."""
    omega_q, omega_n = TWO_PI * f_q, TWO_PI * f_n
    return 0.5 * math.sqrt(omega_q * omega_n) * m_nh / math.sqrt((l_j + l_g) * (l_n + l_g))


def coupler_strength(cp: CouplerParams, f_q: float, f_n: float) -> float:
    """Signed coupling (rad/ns) between a qubit at ``f_q`` and a mode at ``f_n`` (GHz)."""
    l_j = cp.L_J if cp.L_J is not None else infer_junction_inductance(f_q)
    return g_from_mutual(mutual_inductance(cp), f_q, f_n, l_j, cp.L_n, cp.L_g)


def max_coupling_strength(
    cp: CouplerParams, f_q: float, f_n: float
) -> tuple[float, float]:
    """Coupler phase maximizing |g| and the resulting |g| in rad/ns.

    The search avoids a small window around cos(delta) = 0 on both sides.
    """
    margin = 1e-3

    def objective(delta: float) -> float:
        return -abs(coupler_strength(cp.model_copy(update={"delta": delta}), f_q, f_n))

    best = None
    for lower, upper in ((margin, math.pi / 2 - margin), (math.pi / 2 + margin, math.pi)):
        result = minimize_scalar(objective, bounds=(lower, upper), method="bounded")
        if best is None or result.fun < best.fun:
            best = result
    g_max = -float(best.fun)
    logger.debug("Maximum coupling %.4f rad/ns at delta=%.4f", g_max, best.x)
    return float(best.x), g_max
