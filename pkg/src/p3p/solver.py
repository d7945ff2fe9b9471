"""Algebraic P3P: camera orientation first, then position.

The orientation is factored through an intermediate frame built once per
feature triad. Eliminating two rotation angles leaves a quartic in the cosine
of the remaining one; each real root yields at most one physically valid pose.

Conventions: ``PoseSolution.rotation`` maps camera-frame vectors into the
world frame and ``PoseSolution.position`` is the camera centre in world
coordinates, so that ``p_i = position + d_i * rotation @ b_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import (
    CandidateRejected,
    DegenerateBearings,
    DegenerateCollinearFeatures,
    DegenerateDenominator,
    DegenerateParallel,
    NonPositiveDepth,
    RankDeficient,
    SignUndetermined,
)
from .polyroots import QuarticPoly, polish_roots, solve_quartic

Vec = tuple[float, float, float]


def _sub(a, b) -> Vec:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _dot(a, b) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b) -> Vec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _norm(a) -> float:
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def _scale(a, s: float) -> Vec:
    return (a[0] * s, a[1] * s, a[2] * s)


@dataclass(frozen=True)
class FeatureTriad:
    """Three world points and their unit bearings in the camera frame."""

    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    b3: np.ndarray

    def __post_init__(self):
        for name in ("p1", "p2", "p3", "b1", "b2", "b3"):
            v = np.array(getattr(self, name), dtype=float).reshape(3)
            if not np.all(np.isfinite(v)):
                raise ValueError(f"{name} has non-finite entries")
            v.flags.writeable = False
            object.__setattr__(self, name, v)
        for name in ("b1", "b2", "b3"):
            n = float(np.linalg.norm(getattr(self, name)))
            if abs(n - 1.0) > 1e-12:
                raise ValueError(f"bearing {name} is not unit length (norm {n!r})")

    @classmethod
    def from_arrays(cls, points, bearings) -> "FeatureTriad":
        """Build from (3, 3) arrays whose rows are the points / bearings."""
        points = np.asarray(points, dtype=float)
        bearings = np.asarray(bearings, dtype=float)
        return cls(points[0], points[1], points[2], bearings[0], bearings[1], bearings[2])

    @property
    def points(self) -> np.ndarray:
        return np.stack([self.p1, self.p2, self.p3])

    @property
    def bearings(self) -> np.ndarray:
        return np.stack([self.b1, self.b2, self.b3])

    def scale(self) -> float:
        """Largest pairwise distance between the world points."""
        P = self.points
        return float(max(np.linalg.norm(P[i] - P[j]) for i, j in ((0, 1), (0, 2), (1, 2))))


@dataclass(frozen=True, slots=True)
class IntermediateFrame:
    k1: Vec
    k2: Vec
    k3: Vec
    k3pp: Vec
    u1: Vec
    u2: Vec
    v1: Vec
    v2: Vec
    delta: float
    f11: float
    f21: float
    f22: float
    f13: float
    f23: float
    f24: float
    f15: float
    f25: float
    g: tuple[float, float, float, float, float, float, float]  # g1..g7
    Cbar: tuple[Vec, Vec, Vec]  # rows
    Cbarbar: tuple[Vec, Vec, Vec]  # rows
    k3_dot_b3: float

    @property
    def g1(self) -> float:
        return self.g[0]

    def Cbar_matrix(self) -> np.ndarray:
        return np.array(self.Cbar)

    def Cbarbar_matrix(self) -> np.ndarray:
        return np.array(self.Cbarbar)


@dataclass(frozen=True)
class PoseSolution:
    rotation: np.ndarray  # camera-to-world
    position: np.ndarray  # camera centre in world coordinates
    cos_t1p: float
    sin_t1p: float
    d3: float

    def world_to_camera(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(R, t)`` with ``x_cam = R @ x_world + t``."""
        R = self.rotation.T
        return R, -R @ self.position


@dataclass(frozen=True)
class SolverOptions:
    polish_iters: int = 2
    position_method: Literal["direct", "least_squares"] = "direct"
    degeneracy_eps: float = 1e-9
    refine_iters: int = 3  # joint Newton steps for poses inconsistent with the 2x2 system
    refine_tol: float = 1e-12  # relative residual that triggers them; ~1e-15 trades speed for accuracy

    def __post_init__(self):
        if self.polish_iters < 0:
            raise ValueError("polish_iters must be >= 0")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be >= 0")
        if not self.refine_tol >= 0.0:
            raise ValueError("refine_tol must be >= 0")
        if self.position_method not in ("direct", "least_squares"):
            raise ValueError(f"unknown position_method {self.position_method!r}")


def build_frame(t: FeatureTriad, degeneracy_eps: float = 1e-9) -> IntermediateFrame:
    """Precompute every pose-independent quantity of the solver."""
    eps = degeneracy_eps
    p1, p2, p3 = t.p1.tolist(), t.p2.tolist(), t.p3.tolist()
    b1, b2, b3 = t.b1.tolist(), t.b2.tolist(), t.b3.tolist()

    d12 = _sub(p1, p2)
    u1 = _sub(p1, p3)
    u2 = _sub(p2, p3)
    n12, nu1, nu2 = _norm(d12), _norm(u1), _norm(u2)
    if min(n12, nu1, nu2) <= eps:
        raise DegenerateCollinearFeatures("two world points coincide")

    b1xb2 = _cross(b1, b2)
    v1 = _cross(b1, b3)
    v2 = _cross(b2, b3)
    nb12 = _norm(b1xb2)
    if min(nb12, _norm(v1), _norm(v2)) <= eps:
        raise DegenerateBearings("two bearing measurements coincide")

    k1 = _scale(d12, 1.0 / n12)
    u1xk1 = _cross(u1, k1)
    delta = _norm(u1xk1)
    if delta <= eps * nu1:
        raise DegenerateCollinearFeatures("world points are collinear")
    k3pp = _scale(u1xk1, 1.0 / delta)

    k3 = _scale(b1xb2, 1.0 / nb12)
    k1xk3 = _cross(k1, k3)
    nk = _norm(k1xk3)
    if nk <= eps:
        raise DegenerateParallel("baseline direction parallel to bearing-plane normal")
    k2 = _scale(k1xk3, 1.0 / nk)

    k3b3 = _dot(k3, b3)
    b12 = _dot(b1, b2)
    u1k1 = _dot(u1, k1)
    u2k1 = _dot(u2, k1)

    f11 = delta * k3b3
    f21 = delta * b12 * k3b3
    f22 = delta * k3b3 * nb12
    f13 = delta * _dot(v1, k3)
    f23 = delta * _dot(v2, k3)
    f24 = u2k1 * k3b3 * nb12
    f15 = -u1k1 * k3b3
    f25 = -u2k1 * b12 * k3b3

    g = (
        f13 * f22,
        f13 * f25 - f15 * f23,
        f11 * f23 - f13 * f21,
        -f13 * f24,
        f11 * f22,
        f11 * f25 - f15 * f21,
        -f15 * f24,
    )

    c3 = _cross(k1, k3pp)
    Cbar = (
        (k1[0], k3pp[0], c3[0]),
        (k1[1], k3pp[1], c3[1]),
        (k1[2], k3pp[2], c3[2]),
    )
    Cbarbar = (tuple(b1), k3, _cross(b1, k3))

    return IntermediateFrame(
        k1=k1, k2=k2, k3=k3, k3pp=k3pp, u1=u1, u2=u2, v1=v1, v2=v2, delta=delta,
        f11=f11, f21=f21, f22=f22, f13=f13, f23=f23, f24=f24, f15=f15, f25=f25,
        g=g, Cbar=Cbar, Cbarbar=Cbarbar, k3_dot_b3=k3b3,
    )


def quartic_from_frame(fr: IntermediateFrame) -> QuarticPoly:
    """Quartic in cos(theta1') whose real roots index the candidate poses."""
    g1, g2, g3, g4, g5, g6, g7 = fr.g
    return QuarticPoly((
        g7 * g7 - g2 * g2 - g4 * g4,
        2.0 * (g6 * g7 - g1 * g2 - g3 * g4),
        g6 * g6 + 2.0 * g5 * g7 + g2 * g2 + g4 * g4 - g1 * g1 - g3 * g3,
        2.0 * (g5 * g6 + g1 * g2 + g3 * g4),
        g5 * g5 + g1 * g1 + g3 * g3,
    ))


def sign_of_sin_theta1(fr: IntermediateFrame, b3=None, degeneracy_eps: float = 1e-9) -> float:
    """Sign of sin(theta1') that keeps the depth of feature 3 positive."""
    k3b3 = fr.k3_dot_b3 if b3 is None else _dot(fr.k3, tuple(np.asarray(b3, dtype=float)))
    if abs(k3b3) <= degeneracy_eps:
        raise SignUndetermined("bearing 3 lies in the plane of bearings 1 and 2")
    return 1.0 if k3b3 > 0.0 else -1.0


def theta3_from_theta1(fr: IntermediateFrame, cos_t1p: float, sin_t1p: float) -> tuple[float, float]:
    g1, g2, g3, g4, g5, g6, g7 = fr.g
    den = (g5 * cos_t1p + g6) * cos_t1p + g7
    if abs(den) <= 1e-14 * max(abs(x) for x in fr.g):
        raise DegenerateDenominator("theta3' denominator vanishes")
    f = sin_t1p / den
    c3 = f * (g1 * cos_t1p + g2)
    s3 = f * (g3 * cos_t1p + g4)
    n = math.hypot(c3, s3)
    if n == 0.0:
        raise DegenerateDenominator("theta3' direction is undefined (sin theta1' = 0)")
    return c3 / n, s3 / n


def angle_system(fr: IntermediateFrame, c1: float, s1: float, c3: float, s3: float):
    """Residuals of the two equations in (theta1', theta3') and their Jacobian."""
    a21 = fr.f21 * c1 + fr.f24
    a22 = fr.f22 * c1 + fr.f25
    e = (fr.f11 * c1 * c3 + fr.f15 * s3 - fr.f13 * s1,
         a21 * c3 + a22 * s3 - fr.f23 * s1)
    jac = ((-fr.f11 * s1 * c3 - fr.f13 * c1, -fr.f11 * c1 * s3 + fr.f15 * c3),
           (-(fr.f21 * c3 + fr.f22 * s3) * s1 - fr.f23 * c1, -a21 * s3 + a22 * c3))
    return e, jac


def refine_angles(fr: IntermediateFrame, c1: float, s1: float, c3: float, s3: float,
                  iters: int = 3, rel_tol: float = 1e-12) -> tuple[float, float, float, float]:
    """Joint Newton on both angles when eliminating theta3' lost consistency.

    Near a pair of close quartic roots the 2x2 solve for theta3' is nearly
    singular, so a root that is exact to rounding still yields a pose that
    misses the constraints. Poses already consistent to ``rel_tol`` are
    returned untouched.
    """
    fs = max(abs(fr.f11), abs(fr.f21), abs(fr.f22), abs(fr.f13),
             abs(fr.f23), abs(fr.f24), abs(fr.f15), abs(fr.f25))
    e, jac = angle_system(fr, c1, s1, c3, s3)
    err = max(abs(e[0]), abs(e[1]))
    if err <= rel_tol * fs:
        return c1, s1, c3, s3
    t1, t3 = math.atan2(s1, c1), math.atan2(s3, c3)
    best = (err, c1, s1, c3, s3)
    for _ in range(iters):
        (j11, j12), (j21, j22) = jac
        det = j11 * j22 - j12 * j21
        if det == 0.0:
            break
        t1 -= (j22 * e[0] - j12 * e[1]) / det
        t3 -= (j11 * e[1] - j21 * e[0]) / det
        c1, s1, c3, s3 = math.cos(t1), math.sin(t1), math.cos(t3), math.sin(t3)
        e, jac = angle_system(fr, c1, s1, c3, s3)
        err = max(abs(e[0]), abs(e[1]))
        if err < best[0]:
            best = (err, c1, s1, c3, s3)
    _, c1, s1, c3, s3 = best
    return c1, s1, c3, s3


def _assemble(fr: IntermediateFrame, ca: float, sa: float, cb: float, sb: float):
    # C(e1, a) @ C(e2, b), left-hand rule, expanded by hand
    M = (
        (cb, 0.0, -sb),
        (sa * sb, ca, sa * cb),
        (ca * sb, -sa, ca * cb),
    )
    A, B = fr.Cbar, fr.Cbarbar
    AM = [
        [A[i][0] * M[0][j] + A[i][1] * M[1][j] + A[i][2] * M[2][j] for j in range(3)]
        for i in range(3)
    ]
    return [
        [AM[i][0] * B[0][j] + AM[i][1] * B[1][j] + AM[i][2] * B[2][j] for j in range(3)]
        for i in range(3)
    ]


def assemble_rotation(fr: IntermediateFrame, cos_t1p: float, sin_t1p: float,
                      cos_t3p: float, sin_t3p: float) -> np.ndarray:
    """Camera-to-world rotation ``Cbar @ C(e1, t1') @ C(e2, t3') @ Cbarbar``."""
    return np.array(_assemble(fr, cos_t1p, sin_t1p, cos_t3p, sin_t3p))


def position_direct(fr: IntermediateFrame, C, sin_t1p: float, t: FeatureTriad) -> tuple[np.ndarray, float]:
    """Camera centre from feature 3 alone, plus the depth of feature 3."""
    d3 = fr.delta * sin_t1p / fr.k3_dot_b3
    if not d3 > 0.0:
        raise NonPositiveDepth(f"d3 = {d3!r}")
    C = np.asarray(C, dtype=float)
    return t.p3 - d3 * (C @ t.b3), d3


def _lsq_system(C, t: FeatureTriad) -> tuple[np.ndarray, np.ndarray]:
    C = np.asarray(C, dtype=float)
    A = np.zeros((9, 6))
    for i, b in enumerate((t.b1, t.b2, t.b3)):
        A[3 * i:3 * i + 3, i] = C @ b
        A[3 * i:3 * i + 3, 3:] = np.eye(3)
    return A, np.concatenate([t.p1, t.p2, t.p3])


def position_least_squares(C, t: FeatureTriad, return_depths: bool = False):
    """Camera centre from all three features via QR least squares."""
    from scipy.linalg import solve_triangular

    A, rhs = _lsq_system(C, t)
    Q, R = np.linalg.qr(A)
    diag = np.abs(np.diag(R))
    if diag.min() <= 1e-12 * diag.max():
        raise RankDeficient("stacked position system is rank deficient")
    x = solve_triangular(R, Q.T @ rhs)
    if return_depths:
        return x[3:], x[:3]
    return x[3:]


def solve(t: FeatureTriad, opts: SolverOptions | None = None) -> list[PoseSolution]:
    """All physically valid camera poses for the triad, by ascending cos(theta1')."""
    opts = opts or _DEFAULT
    fr = build_frame(t, opts.degeneracy_eps)
    sign = sign_of_sin_theta1(fr, degeneracy_eps=opts.degeneracy_eps)
    poly = quartic_from_frame(fr)
    roots = solve_quartic(poly)
    if opts.polish_iters:
        roots = polish_roots(poly, roots, opts.polish_iters)

    p1, p2, p3 = t.p1.tolist(), t.p2.tolist(), t.p3.tolist()
    b1, b2, b3 = t.b1.tolist(), t.b2.tolist(), t.b3.tolist()
    out = []
    for c in roots:
        s = sign * math.sqrt(max(0.0, 1.0 - c * c))
        try:
            c3, s3 = theta3_from_theta1(fr, c, s)
        except CandidateRejected:
            continue
        if opts.refine_iters:
            r = refine_angles(fr, c, s, c3, s3, opts.refine_iters, opts.refine_tol)
            if r[1] * s > 0.0:  # never let refinement cross the sign rule
                c, s, c3, s3 = r
        R = _assemble(fr, c, s, c3, s3)
        if opts.position_method == "direct":
            d3 = fr.delta * s / fr.k3_dot_b3
            if not d3 > 0.0:
                continue
            Rb3 = (_dot(R[0], b3), _dot(R[1], b3), _dot(R[2], b3))
            pc = _sub(p3, _scale(Rb3, d3))
        else:
            try:
                pos, depths = position_least_squares(R, t, return_depths=True)
            except RankDeficient:
                continue
            pc, d3 = tuple(pos.tolist()), float(depths[2])
            if not d3 > 0.0:
                continue
        # cheirality of features 1 and 2; feature 3 is fixed by the sign choice
        ok = True
        for p, b in ((p1, b1), (p2, b2)):
            Rb = (_dot(R[0], b), _dot(R[1], b), _dot(R[2], b))
            if _dot(Rb, _sub(p, pc)) <= 0.0:
                ok = False
                break
        if not ok:
            continue
        out.append(PoseSolution(np.array(R), np.array(pc), c, s, d3))
    out.sort(key=lambda p: p.cos_t1p)
    return out


_DEFAULT = SolverOptions()
