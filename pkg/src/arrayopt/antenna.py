"""Uniform planar array gain model: single-element pattern plus array factor.

Geometry convention: antenna elements sit on a regular grid in the y-z plane
with the panel normal (boresight) along +x.  ``theta`` is the zenith angle in
degrees (0 = zenith, 90 = horizon, 180 = nadir); ``phi`` is the azimuth in
degrees measured from boresight, positive toward +y.  Angles are degrees at
the API boundary and radians internally.

The total gain is normalized by 1/(n_y*n_z) so that the radiated power does
not depend on the element count; arrays with the same total element budget
compare fairly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
DEFAULT_CARRIER_HZ = 28e9
DEFAULT_N_TOTAL = 64

# Single-element parabolic pattern constants (3GPP TR 38.901 values).
ELEMENT_GAIN_MAX_DB = 8.0
THETA_3DB_DEG = 65.0
PHI_3DB_DEG = 65.0
FRONT_BACK_LIMIT_DB = 30.0  # A_m
VERTICAL_SIDELOBE_LIMIT_DB = 30.0  # SLA_v


def divisors_of(n: int) -> tuple[int, ...]:
    """All positive integer divisors of ``n``, ascending."""
    return tuple(k for k in range(1, n + 1) if n % k == 0)


@dataclass(frozen=True)
class Direction:
    """A propagation direction: zenith angle theta, azimuth phi, in degrees.

    phi is wrapped into (-180, 180] on construction; theta must already lie
    in [0, 180].
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= 180.0:
            raise ValueError(f"theta must be in [0, 180] deg, got {self.theta}")
        phi = ((self.phi + 180.0) % 360.0) - 180.0
        if phi == -180.0:
            phi = 180.0
        object.__setattr__(self, "phi", float(phi))
        object.__setattr__(self, "theta", float(self.theta))


@dataclass(frozen=True)
class ArrayConfig:
    """Planar array layout: element counts and spacings (in wavelengths).

    n_z is derived as n_total // n_y when not given.  n_y * n_z == n_total
    always holds; spacings are strictly positive.
    """

    n_y: int
    d_y: float
    d_z: float
    n_z: int | None = None
    n_total: int = DEFAULT_N_TOTAL
    wavelength: float = SPEED_OF_LIGHT / DEFAULT_CARRIER_HZ

    def __post_init__(self):
        if self.n_total < 1:
            raise ValueError(f"n_total must be >= 1, got {self.n_total}")
        if self.n_y < 1:
            raise ValueError(f"n_y must be >= 1, got {self.n_y}")
        if self.n_total % self.n_y != 0:
            raise ValueError(
                f"n_y={self.n_y} does not divide n_total={self.n_total}; "
                f"valid values: {divisors_of(self.n_total)}"
            )
        derived = self.n_total // self.n_y
        if self.n_z is None:
            object.__setattr__(self, "n_z", derived)
        elif self.n_z != derived:
            raise ValueError(
                f"n_z={self.n_z} inconsistent with n_total/n_y={derived}"
            )
        if not (self.d_y > 0 and self.d_z > 0):
            raise ValueError(
                f"spacings must be positive, got d_y={self.d_y}, d_z={self.d_z}"
            )
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")


def element_pattern_db(theta_deg, phi_deg):
    """Directional gain of one element in dBi, vectorized over angle arrays.

    Parabolic attenuation in both planes, capped by the front-to-back limit:
    G = G_max - min(-(A_V + A_H), A_m).
    """
    theta = np.asarray(theta_deg, dtype=float)
    phi = np.asarray(phi_deg, dtype=float)
    att_v = np.minimum(12.0 * ((theta - 90.0) / THETA_3DB_DEG) ** 2,
                       VERTICAL_SIDELOBE_LIMIT_DB)
    att_h = np.minimum(12.0 * (phi / PHI_3DB_DEG) ** 2, FRONT_BACK_LIMIT_DB)
    att = np.minimum(att_v + att_h, FRONT_BACK_LIMIT_DB)
    return ELEMENT_GAIN_MAX_DB - att


def af_power_grid(n_y: int, n_z: int, u_y, u_z):
    """Un-normalized array factor power |AF|^2 for phase arguments in cycles.

    u_y = d_y * psi_y and u_z = d_z * psi_z, where psi_* are the direction
    cosine differences between observation and steering.  Separable product
    of two Dirichlet kernels; the coherent peak is (n_y*n_z)^2.
    """
    u_y = np.asarray(u_y, dtype=float)
    u_z = np.asarray(u_z, dtype=float)
    return _dirichlet_power(n_y, u_y) * _dirichlet_power(n_z, u_z)


def _dirichlet_power(n: int, u):
    """|sum_{k=0}^{n-1} exp(j 2 pi k u)|^2 = sin^2(n pi u) / sin^2(pi u)."""
    if n == 1:
        return np.ones_like(np.asarray(u, dtype=float))
    x = np.pi * u
    s = np.sin(x)
    # At u integer every phasor is 1 and the sum is exactly n.
    coherent = np.abs(s) < 1e-12
    s_safe = np.where(coherent, 1.0, s)
    ratio = np.sin(n * x) / s_safe
    return np.where(coherent, float(n) ** 2, ratio**2)


def direction_cosine_offsets(steer: Direction, obs: Direction):
    """(psi_y, psi_z): direction-cosine differences between obs and steer."""
    ts, ps = np.radians(steer.theta), np.radians(steer.phi)
    to, po = np.radians(obs.theta), np.radians(obs.phi)
    psi_y = np.sin(to) * np.sin(po) - np.sin(ts) * np.sin(ps)
    psi_z = np.cos(to) - np.cos(ts)
    return psi_y, psi_z


def element_gain_db(direction: Direction) -> float:
    """Single-element gain toward ``direction``, in dBi."""
    return float(element_pattern_db(direction.theta, direction.phi))


def array_factor_power(config: ArrayConfig, steer: Direction,
                       obs: Direction) -> float:
    """Un-normalized |AF|^2 with conjugate-phase steering toward ``steer``.

    Equals (n_y*n_z)^2 at obs == steer and is bounded by that value
    everywhere.
    """
    psi_y, psi_z = direction_cosine_offsets(steer, obs)
    return float(af_power_grid(config.n_y, config.n_z,
                               config.d_y * psi_y, config.d_z * psi_z))


def total_gain_db(config: ArrayConfig, steer: Direction,
                  obs: Direction) -> float:
    """Element gain plus per-element-normalized array gain, in dB.

    The 1/(n_y*n_z) normalization keeps total radiated power independent of
    the element count, so the steered peak is G_element + 10*log10(n_total).
    """
    af = array_factor_power(config, steer, obs)
    n = config.n_y * config.n_z
    with np.errstate(divide="ignore"):
        af_db = 10.0 * np.log10(af / n)
    return element_gain_db(obs) + float(af_db)
