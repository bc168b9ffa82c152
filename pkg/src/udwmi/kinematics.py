"""Circular worldline kinematics for uniformly rotating pointlike detectors.

All quantities are dimensionless, measured in units of the Gaussian
switching width sigma (sigma = 1) with c = 1. A detector on a circular
orbit of radius R whose proper acceleration is a rotates with angular
velocity

    omega = sqrt(a / (R * (1 + a * R)))

which inverts a = gamma^2 omega^2 R, where v = omega * R is the orbital
speed and gamma = 1 / sqrt(1 - v^2). Since v^2 = a R / (1 + a R) < 1 the
speed stays subluminal for every finite a >= 0, R > 0.

Worldlines are parameterized by proper time tau. The orbit lies in a
plane parallel to the reflecting boundary (the z = 0 plane), at constant
height z, so the coordinate time along the orbit is t = gamma * tau and
the rotation phase is omega * gamma * tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainError",
    "CircularDetectorSpec",
    "SpacetimePoint",
    "omega_from_accel_radius",
    "detector_from_accel_radius",
    "trajectory_point",
]


class DomainError(ValueError):
    """An input lies outside the physically admissible domain."""


@dataclass(frozen=True)
class CircularDetectorSpec:
    """A two-level detector on a circular orbit.

    energy_gap is the level splitting Omega (in units of 1/sigma), accel
    the proper acceleration a, radius the orbit radius R. omega, speed
    and gamma are derived; build instances with detector_from_accel_radius
    so they stay consistent.
    """

    energy_gap: float
    accel: float
    radius: float
    omega: float
    speed: float
    gamma: float

    def __post_init__(self) -> None:
        if not all(
            math.isfinite(v)
            for v in (self.energy_gap, self.accel, self.radius, self.omega,
                      self.speed, self.gamma)
        ):
            raise DomainError("detector parameters must be finite")
        if self.radius <= 0.0:
            raise DomainError(f"radius must be positive, got {self.radius}")
        if self.accel < 0.0:
            raise DomainError(f"accel must be nonnegative, got {self.accel}")
        if not 0.0 <= self.speed < 1.0:
            raise DomainError(f"orbital speed must satisfy 0 <= v < 1, got {self.speed}")
        if self.gamma < 1.0:
            raise DomainError(f"gamma must be >= 1, got {self.gamma}")


@dataclass(frozen=True)
class SpacetimePoint:
    """An event (t, x, y, z). Fields may be scalars or numpy arrays."""

    t: float | np.ndarray
    x: float | np.ndarray
    y: float | np.ndarray
    z: float | np.ndarray


def omega_from_accel_radius(accel: float, radius: float) -> float:
    """Angular velocity of the circular orbit with proper acceleration accel.

    Returns omega = sqrt(accel / (radius * (1 + accel * radius))); zero
    acceleration gives omega = 0 (a static detector at distance radius
    from the rotation axis).
    """
    if radius <= 0.0:
        raise DomainError(f"radius must be positive, got {radius}")
    if accel < 0.0:
        raise DomainError(f"accel must be nonnegative, got {accel}")
    return math.sqrt(accel / (radius * (1.0 + accel * radius)))


def detector_from_accel_radius(energy_gap: float, accel: float,
                               radius: float) -> CircularDetectorSpec:
    """Build a consistent CircularDetectorSpec from (Omega, a, R)."""
    omega = omega_from_accel_radius(accel, radius)
    speed = omega * radius
    # v^2 = a R / (1 + a R) in exact arithmetic; compute from omega*R to keep
    # speed, omega and radius consistent to the last float digit.
    gamma = 1.0 / math.sqrt(1.0 - speed * speed)
    return CircularDetectorSpec(
        energy_gap=float(energy_gap),
        accel=float(accel),
        radius=float(radius),
        omega=omega,
        speed=speed,
        gamma=gamma,
    )


def trajectory_point(spec: CircularDetectorSpec, z_offset: float,
                     tau: float | np.ndarray) -> SpacetimePoint:
    """Event on the orbit at proper time tau, at constant height z_offset.

    Accepts scalar or array tau. The orbit starts at (R, 0, z_offset) at
    tau = 0 and rotates counterclockwise in the x-y plane.
    """
    tau = np.asarray(tau, dtype=float) if isinstance(tau, np.ndarray) else tau
    phase = spec.omega * spec.gamma * tau
    return SpacetimePoint(
        t=spec.gamma * tau,
        x=spec.radius * np.cos(phase),
        y=spec.radius * np.sin(phase),
        z=z_offset * np.ones_like(phase) if isinstance(phase, np.ndarray) else z_offset,
    )
