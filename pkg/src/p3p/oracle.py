"""Independent reference machinery used to validate the solver.

Nothing here shares code paths with the algebraic solver beyond input
validation: roots come from an eigenvalue iteration on the companion matrix,
and the reference pose solver works from the law of cosines in the feature
distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidPolynomial
from .polyroots import TOL_LEAD, QuarticPoly, horner
from .solver import FeatureTriad, PoseSolution, build_frame

_EPS = np.finfo(float).eps


def companion_matrix(coeffs) -> np.ndarray:
    """Upper-Hessenberg companion matrix of a polynomial given lowest-first."""
    c = np.asarray(coeffs, dtype=float)
    n = len(c) - 1
    C = np.zeros((n, n))
    C[0, :] = -c[-2::-1] / c[-1]
    C[np.arange(1, n), np.arange(n - 1)] = 1.0
    return C


def _balance(A: np.ndarray) -> np.ndarray:
    """Diagonal similarity scaling by powers of two (Parlett-Reinsch)."""
    A = A.copy()
    n = A.shape[0]
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = np.sum(np.abs(A[:, i])) - abs(A[i, i])
            r = np.sum(np.abs(A[i, :])) - abs(A[i, i])
            if c == 0.0 or r == 0.0:
                continue
            f = 1.0
            s = c + r
            while c < r / 2.0:
                c *= 2.0
                r /= 2.0
                f *= 2.0
            while c >= r * 2.0:
                c /= 2.0
                r *= 2.0
                f /= 2.0
            if (c + r) < 0.95 * s:
                converged = False
                A[i, :] /= f
                A[:, i] *= f
    return A


def _givens(x: complex, y: complex) -> np.ndarray:
    ax, ay = abs(x), abs(y)
    r = math.hypot(ax, ay)
    if r == 0.0:
        return np.eye(2, dtype=complex)
    if ax == 0.0:
        s = np.conj(y) / ay
        return np.array([[0.0, s], [-np.conj(s), 0.0]], dtype=complex)
    c = ax / r
    s = (x / ax) * np.conj(y) / r
    return np.array([[c, s], [-np.conj(s), c]], dtype=complex)


def hessenberg_eigvals(H, max_iter: int = 200) -> np.ndarray:
    """Eigenvalues of an upper-Hessenberg matrix by shifted complex QR.

    Wilkinson shifts with deflation from the bottom; exceptional shifts
    every 10 stalled iterations.
    """
    H = np.array(H, dtype=complex)
    n = H.shape[0]
    eig = []
    hi = n - 1
    stall = 0
    total = 0
    while hi >= 0:
        if hi == 0:
            eig.append(H[0, 0])
            break
        lo = hi
        while lo > 0 and abs(H[lo, lo - 1]) > _EPS * (abs(H[lo, lo]) + abs(H[lo - 1, lo - 1])):
            lo -= 1
        if lo == hi:
            eig.append(H[hi, hi])
            hi -= 1
            stall = 0
            continue
        if lo > 0:
            H[lo, lo - 1] = 0.0
        total += 1
        if total > max_iter:
            raise RuntimeError("QR iteration did not converge")
        stall += 1
        a, b = H[hi - 1, hi - 1], H[hi - 1, hi]
        c, d = H[hi, hi - 1], H[hi, hi]
        if stall % 10 == 0:
            mu = d + 0.75 * abs(c)
        else:
            half_tr = 0.5 * (a + d)
            disc = np.sqrt(half_tr * half_tr - (a * d - b * c))
            mu1, mu2 = half_tr + disc, half_tr - disc
            mu = mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2

        blk = H[lo:hi + 1, lo:hi + 1] - mu * np.eye(hi - lo + 1)
        rots = []
        for k in range(hi - lo):
            G = _givens(blk[k, k], blk[k + 1, k])
            blk[k:k + 2, k:] = G @ blk[k:k + 2, k:]
            rots.append(G)
        for k, G in enumerate(rots):
            blk[:, k:k + 2] = blk[:, k:k + 2] @ G.conj().T
        H[lo:hi + 1, lo:hi + 1] = blk + mu * np.eye(hi - lo + 1)
    return np.array(eig[::-1])


def companion_roots(poly, imag_tol: float = 1e-8) -> list[float]:
    """Real roots of a quartic as real eigenvalues of its balanced companion matrix."""
    if not isinstance(poly, QuarticPoly):
        poly = QuarticPoly(tuple(poly))
    alpha = np.array(poly.alpha)
    if abs(alpha[4]) < TOL_LEAD * poly.scale:
        raise InvalidPolynomial("leading coefficient is zero")
    lam = hessenberg_eigvals(_balance(companion_matrix(alpha)))
    return sorted(float(z.real) for z in lam if abs(z.imag) <= imag_tol * max(1.0, abs(z)))


@dataclass(frozen=True)
class ResidualReport:
    c12: float
    c13: float
    c23: float
    reproj: tuple[float, float, float]

    @property
    def max_constraint(self) -> float:
        return max(abs(self.c12), abs(self.c13), abs(self.c23))

    @property
    def max_reproj(self) -> float:
        return max(self.reproj)


def check_pose(t: FeatureTriad, s: PoseSolution) -> ResidualReport:
    """Orthogonality constraints between point differences and rotated bearing
    cross products, plus per-feature bearing mismatch."""
    C, pc = np.asarray(s.rotation), np.asarray(s.position)
    P, B = t.points, t.bearings
    c = {}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        c[i, j] = float((P[i] - P[j]) @ C @ np.cross(B[i], B[j]))
    reproj = []
    for i in range(3):
        q = C.T @ (P[i] - pc)
        reproj.append(float(np.linalg.norm(q / np.linalg.norm(q) - B[i])))
    return ResidualReport(c[0, 1], c[0, 2], c[1, 2], tuple(reproj))


def _triad_basis(x1, x2, x3) -> np.ndarray:
    e1 = x2 - x1
    e1 = e1 / np.linalg.norm(e1)
    e3 = np.cross(e1, x3 - x1)
    e3 = e3 / np.linalg.norm(e3)
    return np.column_stack([e1, np.cross(e3, e1), e3])


def _pmul(x, y):
    out = [0] * (len(x) + len(y) - 1)
    for i, a in enumerate(x):
        for j, b in enumerate(y):
            out[i + j] += a * b
    return out


def _at(c, j):
    return c[j] if j < len(c) else 0


def _exact_sign(coeffs, x: float) -> int:
    acc = Fraction(0)
    fx = Fraction(x)
    for a in reversed(coeffs):
        acc = acc * fx + a
    return (acc > 0) - (acc < 0)


def exact_real_roots(coeffs, max_bisect: int = 200) -> list[float]:
    """Real roots of a polynomial with exact (Fraction) coefficients, to double precision.

    Brackets come from the critical points, so close root pairs are found
    whenever the exact polynomial has them. Signs are taken from float Horner
    when a rounding bound certifies them and from exact arithmetic otherwise.
    """
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    n = len(coeffs) - 1
    if n < 1:
        raise InvalidPolynomial("constant polynomial has no isolated roots")
    fc = [float(a) for a in coeffs]
    ac = [abs(a) for a in fc]
    eps = np.finfo(float).eps

    def sign(x):
        val = horner(fc, x)
        if abs(val) > 16 * n * eps * horner(ac, abs(x)) + 1e-300:
            return 1 if val > 0 else -1
        return _exact_sign(coeffs, x)

    bound = 1.0 + max(abs(a / coeffs[-1]) for a in coeffs[:-1]) if n else 1.0
    bound = float(bound) * (1 + 1e-12)
    crit = []
    if n > 1:
        d = [j * fc[j] for j in range(1, n + 1)]
        crit = sorted(float(z.real) for z in np.roots(d[::-1]) if abs(z.imag) <= 1e-7 * max(1.0, abs(z)))
    marks = [-bound] + [c for c in crit if -bound < c < bound] + [bound]
    roots = []
    for lo, hi in zip(marks, marks[1:]):
        slo, shi = sign(lo), sign(hi)
        if slo == 0:
            if not roots or roots[-1] != lo:
                roots.append(lo)
            continue
        if shi == 0 or slo == shi:
            continue
        for _ in range(max_bisect):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            sm = sign(mid)
            if sm == 0:
                lo = hi = mid
                break
            if sm == slo:
                lo = mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    if sign(marks[-1]) == 0:
        roots.append(marks[-1])
    return roots


def grunert_reference(t: FeatureTriad, degeneracy_eps: float = 1e-9):
    """Distance-first P3P through the law of cosines.

    With ``d2 = u d1`` and ``d3 = v d1`` the three law-of-cosines equations
    reduce to ``u`` rational in ``v`` and a quartic in ``v``. Distances then
    fix the camera-frame points, and the rotation aligns two orthonormal
    triads built from the point differences.

    Returns a list of ``(d1, d2, d3, PoseSolution)`` with all distances
    positive.
    """
    fr = build_frame(t, degeneracy_eps)  # same degeneracy gates as the solver
    Pw, B = t.points, t.bearings
    # Coefficients are formed in exact rational arithmetic from the float
    # inputs. In narrow fields of view the depth ratios cluster near 1 and the
    # quartic's roots react ~1e5x to coefficient rounding, which double
    # precision formation would feed straight into the reference poses.
    X = [[Fraction(float(x)) for x in row] for row in Pw]
    Y = [[Fraction(float(x)) for x in row] for row in B]

    def sq(p, q):
        return sum((p[k] - q[k]) ** 2 for k in range(3))

    def dot(p, q):
        return sum(p[k] * q[k] for k in range(3))

    a2, b2, c2 = sq(X[1], X[2]), sq(X[0], X[2]), sq(X[0], X[1])
    ca, cb, cg = dot(Y[1], Y[2]), dot(Y[0], Y[2]), dot(Y[0], Y[1])
    K = (a2 - c2) / b2
    N = [1 + K, -2 * K * cb, K - 1]  # numerator of u(v), lowest first
    D = [2 * cg, -2 * ca]  # denominator of u(v)
    S = [Fraction(1), -2 * cb, Fraction(1)]  # 1 + v^2 - 2 v cos(beta)
    # b^2 (D^2 + N^2 - 2 cos(gamma) N D) = c^2 S D^2
    DD, NN, ND = _pmul(D, D), _pmul(N, N), _pmul(N, D)
    SDD = _pmul(S, DD)
    quartic = [b2 * (_at(DD, j) + _at(NN, j) - 2 * cg * _at(ND, j)) - c2 * _at(SDD, j) for j in range(5)]
    N = [float(x) for x in N]
    a2, b2, c2, ca, cb, cg = (float(x) for x in (a2, b2, c2, ca, cb, cg))

    out = []
    for v in exact_real_roots(quartic):
        den = 2.0 * (cg - v * ca)
        sv = 1.0 + v * v - 2.0 * v * cb
        if abs(den) < 1e-14 or sv <= 0.0:
            continue
        u = (N[0] + N[1] * v + N[2] * v * v) / den
        d1 = math.sqrt(b2 / sv)
        d2, d3 = u * d1, v * d1
        if min(d1, d2, d3) <= 0.0:
            continue
        Q = B * np.array([d1, d2, d3])[:, None]
        R = _triad_basis(*Pw) @ _triad_basis(*Q).T
        pc = np.mean(Pw - Q @ R.T, axis=0)
        # theta1' for bookkeeping only: Cbar^T R Cbarbar^T = C(e1, t1') C(e2, t3')
        M = fr.Cbar_matrix().T @ R @ fr.Cbarbar_matrix().T
        ct, st = M[1, 1], -M[2, 1]
        n = math.hypot(ct, st)
        out.append((d1, d2, d3, PoseSolution(R, pc, ct / n, st / n, d3)))
    return out
