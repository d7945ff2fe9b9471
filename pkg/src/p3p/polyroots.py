"""Closed-form real roots of low-degree polynomials.

Quartics are solved by Ferrari's method: the quartic is split into two
quadratics using the largest root of its resolvent cubic, which in turn comes
from Cardano's formula (trigonometric form when all three cubic roots are
real). Newton polishing is provided separately.

Coefficients are stored lowest degree first, ``alpha[j]`` multiplying ``x**j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidPolynomial

TOL_LEAD = 1e-12  # relative size below which a leading coefficient is dropped
TOL_IMAG = 1e-10  # largest imaginary part still accepted as a (double) real root
TOL_ACCEPT = 1e-8  # relative residual every returned root is expected to meet
TOL_DERIV = 1e-14  # relative |p'(r)| below which a Newton step is skipped
DEDUP_TOL = 1e-10

RealRoots = list  # ascending list of 0-4 floats


@dataclass(frozen=True)
class QuarticPoly:
    alpha: tuple[float, float, float, float, float]

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        if len(alpha) != 5:
            raise InvalidPolynomial(f"expected 5 coefficients, got {len(alpha)}")
        _check_coefficients(alpha)
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def from_roots(cls, roots: Sequence[float], lead: float = 1.0) -> "QuarticPoly":
        """Expand ``lead * prod(x - r)`` for four real roots."""
        coeffs = [float(lead)]  # highest degree first while expanding
        for r in roots:
            coeffs = [a - r * b for a, b in zip(coeffs + [0.0], [0.0] + coeffs)]
        return cls(tuple(reversed(coeffs)))

    def __call__(self, x: float) -> float:
        return horner(self.alpha, x)

    def derivative(self, x: float) -> float:
        a = self.alpha
        return ((4.0 * a[4] * x + 3.0 * a[3]) * x + 2.0 * a[2]) * x + a[1]

    @property
    def scale(self) -> float:
        return max(abs(a) for a in self.alpha)


def horner(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _check_coefficients(coeffs) -> float:
    if not all(math.isfinite(c) for c in coeffs):
        raise InvalidPolynomial(f"non-finite coefficient in {coeffs}")
    scale = max(abs(c) for c in coeffs)
    if scale == 0.0:
        raise InvalidPolynomial("all coefficients are zero")
    return scale


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _dedup(roots: list[float]) -> list[float]:
    roots = sorted(roots)
    out: list[float] = []
    group: list[float] = []
    for r in roots:
        if group and r - group[-1] > DEDUP_TOL:
            out.append(sum(group) / len(group))
            group = []
        group.append(r)
    if group:
        out.append(sum(group) / len(group))
    return out


def _quadratic(a: float, b: float, c: float) -> list[float]:
    """Real roots of a x^2 + b x + c, near-double complex pairs counted once."""
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        if math.sqrt(-disc) / (2.0 * abs(a)) > TOL_IMAG:
            return []
        return [-b / (2.0 * a)]
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b))
    if q == 0.0:
        return [0.0, 0.0]
    return [q / a, c / q]


def _depressed_cubic(p: float, q: float) -> list[float]:
    """Real roots of t^3 + p t + q."""
    if p == 0.0 and q == 0.0:
        return [0.0]
    half_q = 0.5 * q
    third_p = p / 3.0
    disc = half_q * half_q + third_p * third_p * third_p
    if disc > 0.0:
        a = -_cbrt(abs(half_q) + math.sqrt(disc)) if q >= 0.0 else _cbrt(abs(half_q) + math.sqrt(disc))
        b = -third_p / a if a != 0.0 else 0.0
        return [a + b]
    # three real roots, p < 0 here
    m = 2.0 * math.sqrt(-third_p)
    arg = min(1.0, max(-1.0, 3.0 * q / (p * m)))
    phi = math.acos(arg) / 3.0
    return [m * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3)]


def _newton_refine(coeffs: Sequence[float], x: float, steps: int) -> float:
    """Guarded Newton on a polynomial given lowest-first; never raises |p(x)|."""
    n = len(coeffs)
    deriv = [j * coeffs[j] for j in range(1, n)]
    fx = horner(coeffs, x)
    for _ in range(steps):
        if fx == 0.0:
            break
        d = horner(deriv, x)
        if d == 0.0:
            break
        xn = x - fx / d
        fn = horner(coeffs, xn)
        if abs(fn) > abs(fx):
            break
        x, fx = xn, fn
    return x


def _solve_low(coeffs: Sequence[float], scale: float) -> list[float]:
    """Degree <= 2 fallback after demotion; coeffs lowest first."""
    c0, c1, c2 = (list(coeffs) + [0.0, 0.0])[:3]
    if abs(c2) >= TOL_LEAD * scale:
        return _dedup(_quadratic(c2, c1, c0))
    if abs(c1) >= TOL_LEAD * scale:
        return [-c0 / c1]
    return []


def solve_cubic_real(c3: float, c2: float, c1: float, c0: float) -> list[float]:
    """All real roots of ``c3 x^3 + c2 x^2 + c1 x + c0``, ascending."""
    coeffs = (float(c0), float(c1), float(c2), float(c3))
    scale = _check_coefficients(coeffs)
    if abs(c3) < TOL_LEAD * scale:
        return _solve_low(coeffs[:3], scale)
    a, b, c = c2 / c3, c1 / c3, c0 / c3
    p = b - a * a / 3.0
    q = (2.0 * a * a / 27.0 - b / 3.0) * a + c
    monic = (c, b, a, 1.0)
    roots = [_newton_refine(monic, t - a / 3.0, 2) for t in _depressed_cubic(p, q)]
    return _dedup(roots)


def _largest_resolvent_root(b: float, c: float, d: float, e: float) -> float:
    # y^3 - c y^2 + (b d - 4 e) y - (b^2 e - 4 c e + d^2) = 0
    r2, r1, r0 = -c, b * d - 4.0 * e, -(b * b * e - 4.0 * c * e + d * d)
    shift = r2 / 3.0
    dp = r1 - r2 * shift
    dq = (2.0 * shift * shift - r1) * shift + r0
    y = max(_depressed_cubic(dp, dq)) - shift
    return _newton_refine((r0, r1, r2, 1.0), y, 2)


def solve_quartic(poly) -> RealRoots:
    """Real roots of a quartic by Ferrari's method, ascending.

    ``poly`` is a :class:`QuarticPoly` or five coefficients, lowest first.
    The monic quartic is written as ``(x^2 + b x/2 + y/2)^2 = (w x + h)^2``
    with ``y`` the largest resolvent root, then split into two quadratic
    factors whose coefficients are paired through Vieta's relations so the
    smaller one of each pair never suffers cancellation.

    Roots of complex pairs whose imaginary part stays below ``TOL_IMAG`` are
    kept as a single real root; roots closer than ``DEDUP_TOL`` are merged.
    """
    if not isinstance(poly, QuarticPoly):
        poly = QuarticPoly(tuple(poly))
    a0, a1, a2, a3, a4 = poly.alpha
    scale = poly.scale
    if abs(a4) < TOL_LEAD * scale:
        if abs(a3) < TOL_LEAD * scale:
            return _solve_low((a0, a1, a2), scale)
        return solve_cubic_real(a3, a2, a1, a0)

    b, c, d, e = a3 / a4, a2 / a4, a1 / a4, a0 / a4
    y = _largest_resolvent_root(b, c, d, e)

    w2 = 0.25 * b * b - c + y
    h2 = 0.25 * y * y - e
    wh2 = 0.5 * b * y - d  # equals 2 w h
    # take the root of the better-determined square, derive the other from 2wh
    if w2 >= h2:
        w = math.sqrt(max(w2, 0.0))
        h = wh2 / (2.0 * w) if w > 0.0 else 0.0
    else:
        h = math.copysign(math.sqrt(max(h2, 0.0)), wh2)
        w = wh2 / (2.0 * h) if h != 0.0 else 0.0

    sgn = 1.0 if b >= 0.0 else -1.0
    p1 = 0.5 * b + sgn * w
    p2 = (c - y) / p1 if p1 != 0.0 else 0.5 * b - sgn * w
    q1 = 0.5 * y + sgn * h
    q2 = 0.5 * y - sgn * h
    if abs(q1) >= abs(q2):
        if q1 != 0.0:
            q2 = e / q1
    else:
        q1 = e / q2
    return _dedup(_quadratic(1.0, p1, q1) + _quadratic(1.0, p2, q2))


def polish_roots(poly, roots: Sequence[float], iters: int = 2) -> RealRoots:
    """Newton-polish each root ``iters`` times without ever raising ``|p(r)|``."""
    if iters < 0:
        raise ValueError("iters must be >= 0")
    if not isinstance(poly, QuarticPoly):
        poly = QuarticPoly(tuple(poly))
    if iters == 0:
        return list(roots)
    a0, a1, a2, a3, a4 = poly.alpha
    d_floor = TOL_DERIV * poly.scale
    out = []
    for x in roots:
        fx = (((a4 * x + a3) * x + a2) * x + a1) * x + a0
        for _ in range(iters):
            if fx == 0.0:
                break
            dfx = ((4.0 * a4 * x + 3.0 * a3) * x + 2.0 * a2) * x + a1
            if abs(dfx) < d_floor:
                break
            xn = x - fx / dfx
            fn = (((a4 * xn + a3) * xn + a2) * xn + a1) * xn + a0
            if abs(fn) > abs(fx):
                break
            x, fx = xn, fn
        out.append(x)
    return sorted(out)
