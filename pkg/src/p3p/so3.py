"""Rotation and vector algebra.

Angles follow the left-hand rule throughout the package::

    C(k, theta) = cos(theta) I - sin(theta) [k]x + (1 - cos(theta)) k k^T

Most libraries (scipy, OpenCV, Eigen) use the opposite sign on the skew
term, so ``rodrigues(k, theta)`` equals their rotation by ``-theta``.
"""

from __future__ import annotations

import math

import numpy as np

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def skew(v) -> np.ndarray:
    """Cross-product matrix: ``skew(v) @ a == np.cross(v, a)``."""
    x, y, z = (float(c) for c in v)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def rodrigues(k, theta: float) -> np.ndarray:
    """Rotation about unit axis ``k`` by ``theta`` (left-hand rule)."""
    k = np.asarray(k, dtype=float)
    c, s = math.cos(theta), math.sin(theta)
    return c * np.eye(3) - s * skew(k) + (1.0 - c) * np.outer(k, k)


def rotate_linear_form(k, v) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split ``rodrigues(k, theta) @ v`` into ``a cos(theta) + b sin(theta) + c``."""
    k = np.asarray(k, dtype=float)
    v = np.asarray(v, dtype=float)
    kx = skew(k)
    return -kx @ kx @ v, -kx @ v, float(k @ v) * k


def rotation_angle_error(C_est, C_true) -> float:
    """Angle in [0, pi] of the relative rotation ``C_est @ C_true.T``.

    Uses atan2 of the skew and trace parts; arccos of the trace alone cannot
    resolve angles below ~1.5e-8 in double precision.
    """
    R = np.asarray(C_est, dtype=float) @ np.asarray(C_true, dtype=float).T
    cos_part = min(1.0, max(-1.0, (R[0, 0] + R[1, 1] + R[2, 2] - 1.0) / 2.0))
    sin_part = 0.5 * math.sqrt(
        (R[2, 1] - R[1, 2]) ** 2 + (R[0, 2] - R[2, 0]) ** 2 + (R[1, 0] - R[0, 1]) ** 2
    )
    return math.atan2(sin_part, cos_part)


def is_rotation(C, tol: float = 1e-10) -> bool:
    C = np.asarray(C, dtype=float)
    if C.shape != (3, 3) or not np.all(np.isfinite(C)):
        return False
    return bool(np.max(np.abs(C.T @ C - np.eye(3))) <= tol and abs(np.linalg.det(C) - 1.0) <= tol)
