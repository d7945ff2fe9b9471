"""Recompute the canonical-triad reference values at 50 digits.

Straight-line evaluation of the frame, the f/g coefficients, the quartic and
the truth angles with mpmath, written without touching the package. The
output is pasted into tests/canonical_values.py.
"""

import mpmath as mp

mp.mp.dps = 50

P = [mp.matrix([mp.mpf("0.1"), mp.mpf("0.1"), 0]),
     mp.matrix([mp.mpf("-0.1"), mp.mpf("0.05"), mp.mpf("0.1")]),
     mp.matrix([0, mp.mpf("-0.1"), mp.mpf("-0.05")])]
# the package stores the triad in doubles, so start from the same doubles
P = [mp.matrix([mp.mpf(float(x)) for x in p]) for p in P]
PC = mp.matrix([0, 0, 1])
# world-to-camera C(e1, pi) = diag(1, -1, -1) under either sign convention
W2C = mp.diag([1, -1, -1])
C = W2C.T  # camera-to-world


def cross(a, b):
    return mp.matrix([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def dot(a, b):
    return sum(a[i] * b[i] for i in range(3))


def unit(a):
    return a / mp.sqrt(dot(a, a))


B = [unit(W2C * (p - PC)) for p in P]
B = [mp.matrix([mp.mpf(float(x)) for x in b]) for b in B]  # bearings as stored

k1 = unit(P[0] - P[1])
k3 = unit(cross(B[0], B[1]))
k2 = unit(cross(k1, k3))
u1, u2 = P[0] - P[2], P[1] - P[2]
v1, v2 = cross(B[0], B[2]), cross(B[1], B[2])
w = cross(u1, k1)
delta = mp.sqrt(dot(w, w))
k3pp = w / delta
k3b3 = dot(k3, B[2])
nb12 = mp.sqrt(dot(cross(B[0], B[1]), cross(B[0], B[1])))
b1b2 = dot(B[0], B[1])
f11 = delta * k3b3
f21 = delta * b1b2 * k3b3
f22 = delta * k3b3 * nb12
f13 = delta * dot(v1, k3)
f23 = delta * dot(v2, k3)
f24 = dot(u2, k1) * k3b3 * nb12
f15 = -dot(u1, k1) * k3b3
f25 = -dot(u2, k1) * b1b2 * k3b3
g = [f13 * f22, f13 * f25 - f15 * f23, f11 * f23 - f13 * f21, -f13 * f24,
     f11 * f22, f11 * f25 - f15 * f21, -f15 * f24]
g1, g2, g3, g4, g5, g6, g7 = g
alpha = [g7**2 - g2**2 - g4**2,
         2 * (g6 * g7 - g1 * g2 - g3 * g4),
         g6**2 + 2 * g5 * g7 + g2**2 + g4**2 - g1**2 - g3**2,
         2 * (g5 * g6 + g1 * g2 + g3 * g4),
         g5**2 + g1**2 + g3**2]

Cbar = mp.matrix(3, 3)
c3 = cross(k1, k3pp)
b1k3 = cross(B[0], k3)
Cbb = mp.matrix(3, 3)
for i in range(3):
    Cbar[i, 0], Cbar[i, 1], Cbar[i, 2] = k1[i], k3pp[i], c3[i]
    Cbb[0, i], Cbb[1, i], Cbb[2, i] = B[0][i], k3[i], b1k3[i]
M = Cbar.T * C * Cbb.T
cos_t1p, sin_t1p = M[1, 1], -M[2, 1]
cos_t3p, sin_t3p = M[0, 0], -M[0, 2]
d3 = mp.sqrt(dot(P[2] - PC, P[2] - PC))


def show(name, x):
    if isinstance(x, mp.matrix):
        print(f"{name} = ({', '.join(mp.nstr(x[i], 20) for i in range(len(x)))})")
    elif isinstance(x, list):
        print(f"{name} = ({', '.join(mp.nstr(y, 20) for y in x)})")
    else:
        print(f"{name} = {mp.nstr(x, 20)}")


for name, val in [("K1", k1), ("K2", k2), ("K3", k3), ("K3PP", k3pp), ("DELTA", delta),
                  ("F", [f11, f21, f22, f13, f23, f24, f15, f25]), ("G", g), ("ALPHA", alpha),
                  ("COS_T1P", cos_t1p), ("SIN_T1P", sin_t1p), ("COS_T3P", cos_t3p), ("SIN_T3P", sin_t3p),
                  ("D3", d3)]:
    show(name, val)
