# =============================================================================
# nfadlab
#
# CIRCUIT MODEL SUB-MODULE
# =============================================================================

"""
DC operating point of the avalanche photodiode inside its bias network.

The diode is in series with R (integrated), R1 and R2. Under steady
illumination P the current is I = S * M(v) * P, and the voltage across the
diode obeys

    v = V_eff - I * R_s,    V_eff = V_bias - (v_quench if quenched else 0),

with the empirical gain law M(v) = 1 / (1 - (v / v_br)^n).
"""

# Python stdlib imports
import functools as _functools
import typing as _typing

# External dependencies
import scipy.constants as _constants

# Local imports
import nfadlab.errors as _errors
import nfadlab.util.custom_logging as _logging

from nfadlab.models.params import Mode, NfadParams, OperatingPoint

# =============================================================================

# Global submodule constants
_LOG_SCOPE = "{}".format(__name__)

WAVELENGTH = 1550e-9
PHOTON_ENERGY = _constants.h * _constants.c / WAVELENGTH
ELEMENTARY_CHARGE = _constants.e

SOLVER_TOLERANCE = 1e-7         # V, self-consistency residual
MODE_TIE_TOLERANCE = 1e-6       # V, v_apd this close to v_br counts as linear
MAX_ITERATIONS = 200
BLINDING_POWER_RTOL = 1e-3
BLINDING_POWER_START = 1e-12    # W

# Global submodule protected attributes
_logger = _logging.get_logger(name=_LOG_SCOPE)

# =============================================================================

def gain(v_apd, params):
    # type: (float, NfadParams) -> float
    """
    Linear-mode multiplication factor M(v) = 1 / (1 - (v/v_br)^n).

    :raises GainDomainError: Outside of 0 <= v_apd < v_br.
    """
    if not 0.0 <= v_apd < params.v_br:
        raise _errors.GainDomainError(v_apd=v_apd, v_br=params.v_br)
    return 1.0 / (1.0 - (v_apd / params.v_br) ** params.gain_exponent)


def _residual(v, v_eff, k, params):
    # f(v) = v - V_eff + S*P*R_s*M(v); increasing in v
    return v - v_eff + k * gain(v, params)


def _classify(v_apd, params, quenched):
    if v_apd > params.v_br + MODE_TIE_TOLERANCE:
        return Mode.GEIGER
    return Mode.QUENCHED if quenched else Mode.LINEAR

# =============================================================================

def solve_operating_point(p_optical, params, quenched=False):
    # type: (float, NfadParams, bool) -> OperatingPoint
    """
    Solves the self-consistent DC operating point under steady illumination
    `p_optical` [W] by bisection on the diode voltage.

    The bracket is [0, min(V_eff, v_top)], where v_top is the voltage at which
    the gain reaches `params.max_linear_gain`. If no root lies inside while
    V_eff > v_br, the light is too weak to hold the diode below breakdown and
    the point is Geiger (current 0, gain 1). If even unity gain drops the full
    bias (S*P*R_s >= V_eff) the diode sits at 0 V and the resistors limit the
    current to V_eff/R_s.

    :raises ParameterValidationError: If `p_optical` is negative.
    :raises InvalidQuenchError: If the effective bias is negative.
    :raises OperatingPointError: If bisection does not converge.
    """
    p_optical = float(p_optical)
    if not p_optical >= 0.0:
        raise _errors.ParameterValidationError(
            owner="solve_operating_point",
            reason="p_optical must be >= 0, got {}".format(p_optical))
    return _solve_cached(p_optical, params, bool(quenched))


@_functools.lru_cache(maxsize=4096)
def _solve_cached(p_optical, params, quenched):
    v_eff = params.v_bias - (params.v_quench if quenched else 0.0)
    if v_eff < 0:
        raise _errors.InvalidQuenchError(v_eff=v_eff)

    r_s = params.r_series
    k = params.responsivity * p_optical * r_s

    def point(v_apd, i_apd, m, mode):
        return OperatingPoint(
            v_apd=v_apd, i_apd=i_apd, gain=m, mode=mode,
            p_optical=p_optical, quenched=quenched)

    # Dark
    if k == 0.0:
        if v_eff > params.v_br:
            return point(v_eff, 0.0, 1.0, Mode.GEIGER)
        return point(
            v_eff, 0.0, gain(min(v_eff, params.v_top), params),
            _classify(v_eff, params, quenched))

    # Deep saturation: the whole bias drops across the resistors
    if k >= v_eff:
        return point(0.0, v_eff / r_s, 1.0, _classify(0.0, params, quenched))

    if v_eff > params.v_br:
        hi = params.v_top
        if _residual(hi, v_eff, k, params) < 0.0:
            return point(v_eff, 0.0, 1.0, Mode.GEIGER)
    else:
        # Quenched below breakdown: f(V_eff) = k*M(V_eff) > 0
        hi = min(v_eff, params.v_br * (1.0 - 1e-12))

    lo = 0.0
    best_v, best_f = lo, _residual(lo, v_eff, k, params)
    for iteration in range(MAX_ITERATIONS):
        mid = 0.5 * (lo + hi)
        f_mid = _residual(mid, v_eff, k, params)
        if abs(f_mid) < abs(best_f):
            best_v, best_f = mid, f_mid
        if abs(f_mid) < SOLVER_TOLERANCE:
            break
        if f_mid < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4.0 * 2.2e-16 * max(hi, 1.0):
            break

    if abs(best_f) >= SOLVER_TOLERANCE:
        raise _errors.OperatingPointError(
            iterations=iteration + 1, residual=abs(best_f),
            p_optical=p_optical, quenched=quenched)

    i_apd = (v_eff - best_v) / r_s
    return point(
        best_v, i_apd, gain(best_v, params),
        _classify(best_v, params, quenched))


def operating_point_scan(powers, params, quenched=False):
    # type: (_typing.Iterable[float], NfadParams, bool) -> _typing.List[OperatingPoint]
    return [
        solve_operating_point(p, params, quenched=quenched) for p in powers
    ]

# =============================================================================

def is_blinded(p_optical, params):
    # type: (float, NfadParams) -> bool
    return solve_operating_point(p_optical, params).mode is not Mode.GEIGER


@_functools.lru_cache(maxsize=256)
def min_blinding_power(params):
    # type: (NfadParams) -> float
    """
    Smallest CW power [W] that holds the unquenched diode in linear mode,
    found by bisection over power to a relative tolerance of 1e-3.
    """
    with _logging.start_action(
            action_type="nfadlab:min_blinding_power",
            detector=params.name) as action:

        lo, hi = 0.0, BLINDING_POWER_START
        while not is_blinded(hi, params):
            lo, hi = hi, 2.0 * hi

        while (hi - lo) > BLINDING_POWER_RTOL * hi:
            mid = 0.5 * (lo + hi)
            if is_blinded(mid, params):
                hi = mid
            else:
                lo = mid

        action.add_success_fields(p_min=hi)

    _logger.debug("Minimum blinding power of {}: {:.4g} W".format(
        params.name, hi))
    return hi

# =============================================================================
