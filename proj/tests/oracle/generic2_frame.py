#!/usr/bin/env python3
"""Independent evaluation of the generic2 catalog formulas at one point.

Mirrors the closed forms documented in docs/spaces.md using numpy only.
The printed values are frozen into tests/test_core_spaces.cpp.
"""
import numpy as np

x = np.array([0.3, -0.2])
y = np.array([0.7, 0.9])

Lh = np.eye(2) + 0.1 * np.array(
    [
        [np.sin(x[0] + y[1]), np.cos(x[1]) * np.sin(y[0])],
        [np.cos(x[0] - y[0]), np.sin(x[1] + y[0])],
    ]
)
Lv = np.eye(2) + 0.1 * np.array(
    [
        [np.cos(x[1] + y[0]), np.sin(x[0]) * np.cos(y[1])],
        [np.sin(x[1]) * np.sin(y[0]), np.cos(x[0] - y[1])],
    ]
)
# N[a, mu] = 0.1 y^a cos(x^mu) + 0.05 y^(1-a) sin(x^(1-mu) + 0.4 a + 0.7 mu)
N = 0.1 * np.outer(y, np.cos(x))
for a in range(2):
    for mu in range(2):
        N[a, mu] += 0.05 * y[1 - a] * np.sin(x[1 - mu] + 0.4 * a + 0.7 * mu)

Ch = np.linalg.inv(Lh.T)  # mesh-first: sum_i Lh[i,a] Ch[i,b] = delta_ab
Cv = np.linalg.inv(Lv.T)
gh = Ch.T @ Ch  # g_h[alpha, beta] = sum_i Ch[i, alpha] Ch[i, beta]
gv = Cv.T @ Cv

np.set_printoptions(precision=17)
for name, m in [("Lh", Lh), ("Lv", Lv), ("N", N), ("Ch", Ch), ("gh", gh), ("gv", gv)]:
    print(name)
    for row in m:
        print("  " + ", ".join(f"{v:.17g}" for v in row))
print("det Lh", f"{np.linalg.det(Lh):.17g}")
print("det Lv", f"{np.linalg.det(Lv):.17g}")
