"""Simulated second-order plants: a differential-drive robot in reduced wheel
coordinates and a two-link planar arm with a full Coriolis matrix.

Each plant exposes the same evaluation surface (mass matrix, Coriolis matrix,
gravity, friction, disturbance, forward acceleration) plus the bound constants
(mu1, mu2, c_b, g_b, f_b, d_bar) used by the gain-synthesis and analysis code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Array, ConfigurationError


@dataclass(frozen=True)
class PlantConstants:
    """Bounds honored by a plant over its operating range.

    mu1 I <= M(q) <= mu2 I; ||C(q,qd)|| <= c_b ||qd||; ||g(q)|| <= g_b;
    ||f(qd)|| <= f_b ||qd||; ||d_s(t)|| <= d_bar.
    """

    mu1: float
    mu2: float
    c_b: float
    g_b: float
    f_b: float
    d_bar: float


@dataclass(frozen=True)
class FrictionParams:
    """Viscous plus smooth-Coulomb joint friction.

    f(qd) = viscous * qd + coulomb * tanh(qd / slope_width), elementwise.
    """

    viscous: float = 0.5
    coulomb: float = 1.0
    slope_width: float = 0.01

    def force(self, qdot: Array) -> Array:
        if self.coulomb == 0.0:
            return self.viscous * qdot
        return self.viscous * qdot + self.coulomb * np.tanh(qdot / self.slope_width)

    def bound(self) -> float:
        # tanh(x/w) is (1/w)-Lipschitz through 0, so the linear bound is global
        return self.viscous + self.coulomb / self.slope_width


@dataclass(frozen=True)
class SinusoidDisturbance:
    """d_s(t) = amplitude * sin(2 pi t / period), per channel."""

    amplitude: tuple[float, ...] = (0.5, 0.5)
    period_s: float = 3.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitude", tuple(float(v) for v in self.amplitude))
        if self.period_s <= 0:
            raise ConfigurationError("disturbance period must be > 0")

    def value(self, t: float) -> Array:
        return np.asarray(self.amplitude) * math.sin(2.0 * math.pi * t / self.period_s)

    def bound(self) -> float:
        return float(np.linalg.norm(self.amplitude))


@dataclass(frozen=True)
class ConstantDisturbance:
    """A fixed disturbance vector."""

    value_vec: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "value_vec", tuple(float(v) for v in self.value_vec))

    def value(self, t: float) -> Array:
        return np.asarray(self.value_vec, dtype=float).copy()

    def bound(self) -> float:
        return float(np.linalg.norm(self.value_vec))


@dataclass(frozen=True)
class PayloadWindow:
    """Extra mass/inertia carried on [t_on, t_off)."""

    t_on_s: float
    t_off_s: float
    mass_kg: float
    inertia_kgm2: float

    def active(self, t: float) -> bool:
        return self.t_on_s <= t < self.t_off_s


@dataclass(frozen=True)
class WmrParams:
    """Differential-drive robot parameters.

    b is the full axle length (wheel separation); d the forward offset of the
    center of mass from the axle midpoint.
    """

    m: float = 9.0
    i_bar: float = 0.3
    i_w: float = 0.01
    r_w: float = 0.097
    b: float = 0.381
    d: float = 0.02

    def validate(self) -> list[str]:
        out = []
        for name in ("m", "i_bar", "i_w", "r_w", "b", "d"):
            if getattr(self, name) < 0 or (name in ("r_w", "b") and getattr(self, name) == 0):
                out.append(f"{name}: must be positive")
        return out


def wmr_reduced_mass(p: WmrParams, extra_m: float = 0.0, extra_i: float = 0.0) -> Array:
    """Constant 2x2 mass matrix of the wheel-coordinate model.

    [[k1, k2], [k2, k1]] with
    k1 = I_w + (I_bar + m (b^2/4 - d^2)) r_w^2 / b^2,
    k2 = (m (b^2/4 + d^2) - I_bar) r_w^2 / b^2.
    """
    m = p.m + extra_m
    i_bar = p.i_bar + extra_i
    ratio = p.r_w * p.r_w / (p.b * p.b)
    k1 = p.i_w + (i_bar + m * (p.b * p.b / 4.0 - p.d * p.d)) * ratio
    k2 = (m * (p.b * p.b / 4.0 + p.d * p.d) - i_bar) * ratio
    if not k1 > abs(k2):
        raise ConfigurationError(
            f"wheel mass matrix not positive definite: k1={k1:g}, k2={k2:g}"
        )
    return np.array([[k1, k2], [k2, k1]])


def wmr_kinematics_S(q: Array, p: WmrParams) -> Array:
    """5x2 matrix mapping wheel rates to full configuration rates.

    Configuration order: (x_c, y_c, phi, theta_r, theta_l); q only needs a
    valid heading phi at index 2.
    """
    phi = float(q[2])
    c = math.cos(phi)
    s = math.sin(phi)
    rb = p.r_w / p.b
    half = p.b / 2.0
    return np.array(
        [
            [rb * (half * c - p.d * s), rb * (half * c + p.d * s)],
            [rb * (half * s + p.d * c), rb * (half * s - p.d * c)],
            [rb, -rb],
            [1.0, 0.0],
            [0.0, 1.0],
        ]
    )


class WmrPlant:
    """Wheel-coordinate robot: constant mass matrix, no Coriolis, no gravity.

    Payload windows change the plant's mass/inertia only; controllers are
    never told.
    """

    n = 2

    def __init__(
        self,
        params: WmrParams = WmrParams(),
        friction: FrictionParams | None = FrictionParams(),
        disturbance=SinusoidDisturbance(),
        payload: tuple[PayloadWindow, ...] = (),
    ) -> None:
        self.params = params
        self.friction = friction
        self.disturbance = disturbance
        self.payload = tuple(payload)
        bad = params.validate()
        if bad:
            raise ConfigurationError("; ".join(bad))
        self._m_base = wmr_reduced_mass(params)
        self._minv_base = np.linalg.inv(self._m_base)
        self._m_loaded = [
            wmr_reduced_mass(params, w.mass_kg, w.inertia_kgm2) for w in self.payload
        ]
        self._minv_loaded = [np.linalg.inv(m) for m in self._m_loaded]

    def _phase(self, t: float) -> int:
        for i, w in enumerate(self.payload):
            if w.active(t):
                return i
        return -1

    def eval_M(self, q: Array, t: float = 0.0) -> Array:
        i = self._phase(t)
        return (self._m_base if i < 0 else self._m_loaded[i]).copy()

    def eval_C(self, q: Array, qdot: Array) -> Array:
        return np.zeros((2, 2))

    def eval_g(self, q: Array) -> Array:
        return np.zeros(2)

    def eval_f(self, qdot: Array) -> Array:
        if self.friction is None:
            return np.zeros(2)
        return self.friction.force(qdot)

    def eval_ds(self, t: float) -> Array:
        if self.disturbance is None:
            return np.zeros(2)
        return self.disturbance.value(t)

    def accel(self, q: Array, qdot: Array, tau: Array, t: float) -> Array:
        i = self._phase(t)
        minv = self._minv_base if i < 0 else self._minv_loaded[i]
        return minv @ (tau - self.eval_f(qdot) - self.eval_ds(t))

    def constants(self) -> PlantConstants:
        mats = [self._m_base] + self._m_loaded
        mu1 = min(float(m[0, 0] - abs(m[0, 1])) for m in mats)
        mu2 = max(float(m[0, 0] + abs(m[0, 1])) for m in mats)
        f_b = self.friction.bound() if self.friction is not None else 0.0
        d_bar = self.disturbance.bound() if self.disturbance is not None else 0.0
        return PlantConstants(mu1=mu1, mu2=mu2, c_b=0.0, g_b=0.0, f_b=f_b, d_bar=d_bar)


@dataclass(frozen=True)
class ArmParams:
    """Two-link planar arm with gravity; inertias default to slender rods."""

    m1: float = 1.0
    m2: float = 1.0
    l1: float = 0.5
    l2: float = 0.5
    lc1: float = field(default=-1.0)
    lc2: float = field(default=-1.0)
    i1: float = field(default=-1.0)
    i2: float = field(default=-1.0)
    gravity: float = 9.81

    def __post_init__(self) -> None:
        if self.lc1 < 0:
            object.__setattr__(self, "lc1", self.l1 / 2.0)
        if self.lc2 < 0:
            object.__setattr__(self, "lc2", self.l2 / 2.0)
        if self.i1 < 0:
            object.__setattr__(self, "i1", self.m1 * self.l1 * self.l1 / 12.0)
        if self.i2 < 0:
            object.__setattr__(self, "i2", self.m2 * self.l2 * self.l2 / 12.0)


class CoriolisPlant:
    """Two-link arm: exercises the full (M, C, g) structure.

    Mass matrix entries use a = I1 + I2 + m1 lc1^2 + m2 (l1^2 + lc2^2),
    b = m2 l1 lc2, d = I2 + m2 lc2^2; C comes from the Christoffel symbols so
    that dM/dt - 2C stays skew-symmetric.
    """

    n = 2

    def __init__(
        self,
        params: ArmParams = ArmParams(),
        friction: FrictionParams | None = FrictionParams(coulomb=0.0),
        disturbance=SinusoidDisturbance(),
    ) -> None:
        self.params = params
        self.friction = friction
        self.disturbance = disturbance
        p = params
        self._a = p.i1 + p.i2 + p.m1 * p.lc1 ** 2 + p.m2 * (p.l1 ** 2 + p.lc2 ** 2)
        self._b = p.m2 * p.l1 * p.lc2
        self._d = p.i2 + p.m2 * p.lc2 ** 2
        self._g1 = (p.m1 * p.lc1 + p.m2 * p.l1) * p.gravity
        self._g2 = p.m2 * p.lc2 * p.gravity

    def eval_M(self, q: Array, t: float = 0.0) -> Array:
        c2 = math.cos(q[1])
        off = self._d + self._b * c2
        return np.array([[self._a + 2.0 * self._b * c2, off], [off, self._d]])

    def eval_C(self, q: Array, qdot: Array) -> Array:
        bs2 = self._b * math.sin(q[1])
        return np.array(
            [
                [-bs2 * qdot[1], -bs2 * (qdot[0] + qdot[1])],
                [bs2 * qdot[0], 0.0],
            ]
        )

    def eval_g(self, q: Array) -> Array:
        c1 = math.cos(q[0])
        c12 = math.cos(q[0] + q[1])
        return np.array([self._g1 * c1 + self._g2 * c12, self._g2 * c12])

    def eval_f(self, qdot: Array) -> Array:
        if self.friction is None:
            return np.zeros(2)
        return self.friction.force(qdot)

    def eval_ds(self, t: float) -> Array:
        if self.disturbance is None:
            return np.zeros(2)
        return self.disturbance.value(t)

    def accel(self, q: Array, qdot: Array, tau: Array, t: float) -> Array:
        c2 = math.cos(q[1])
        m11 = self._a + 2.0 * self._b * c2
        m12 = self._d + self._b * c2
        m22 = self._d
        det = m11 * m22 - m12 * m12
        bs2 = self._b * math.sin(q[1])
        cqd0 = -bs2 * qdot[1] * qdot[0] - bs2 * (qdot[0] + qdot[1]) * qdot[1]
        cqd1 = bs2 * qdot[0] * qdot[0]
        c1 = math.cos(q[0])
        c12 = math.cos(q[0] + q[1])
        r0 = tau[0] - cqd0 - (self._g1 * c1 + self._g2 * c12)
        r1 = tau[1] - cqd1 - self._g2 * c12
        if self.friction is not None:
            f = self.friction.force(qdot)
            r0 -= f[0]
            r1 -= f[1]
        if self.disturbance is not None:
            ds = self.disturbance.value(t)
            r0 -= ds[0]
            r1 -= ds[1]
        return np.array([(m22 * r0 - m12 * r1) / det, (m11 * r1 - m12 * r0) / det])

    def potential(self, q: Array) -> float:
        """Gravitational potential; its gradient is eval_g."""
        s1 = math.sin(q[0])
        s12 = math.sin(q[0] + q[1])
        return self._g1 * s1 + self._g2 * s12

    def energy(self, q: Array, qdot: Array) -> float:
        m = self.eval_M(q)
        return 0.5 * float(qdot @ m @ qdot) + self.potential(q)

    def constants(self) -> PlantConstants:
        # closed-form 2x2 eigenvalues on a dense cos(q2) grid; the eigenvalues
        # are smooth in c2 so a small guard band covers interpolation error
        c2 = np.linspace(-1.0, 1.0, 4001)
        m11 = self._a + 2.0 * self._b * c2
        m12 = self._d + self._b * c2
        tr = m11 + self._d
        det = m11 * self._d - m12 * m12
        disc = np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0))
        mu1 = float(np.min((tr - disc) / 2.0)) - 1e-6
        mu2 = float(np.max((tr + disc) / 2.0)) + 1e-6
        if mu1 <= 0:
            raise ConfigurationError("arm mass matrix not uniformly positive definite")
        c_b = math.sqrt(3.0) * self._b
        g_b = math.hypot(self._g1 + self._g2, self._g2)
        f_b = self.friction.bound() if self.friction is not None else 0.0
        d_bar = self.disturbance.bound() if self.disturbance is not None else 0.0
        return PlantConstants(mu1=mu1, mu2=mu2, c_b=c_b, g_b=g_b, f_b=f_b, d_bar=d_bar)
