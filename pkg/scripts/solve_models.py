"""One-off search for Fibonacci / Ising consistency data.

This is the oracle used to produce the constants embedded in
``modfunctor.model``.  It works on dense arrays indexed by label, so it shares
no code with the library's dictionary-based residuals.

    python scripts/solve_models.py
"""
from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import minimize


def dense_fusion(k, rules):
    N = np.zeros((k, k, k), dtype=int)
    for a, b, c in rules:
        N[a, b, c] = N[b, a, c] = 1
    return N


def pentagon_defect(N, F):
    """Max |lhs - rhs| of the pentagon over all label tuples.

    F[a, b, c, d, x, y] with x the intermediate charge of (ab) and y of (bc).
    """
    k = N.shape[0]
    worst = 0.0
    r = range(k)
    for a, b, c, d, e in itertools.product(r, repeat=5):
        for f, g, k1, l in itertools.product(r, repeat=4):
            # (((ab)_f c)_g d)_e  ->  (a (b (cd)_l)_k1)_e
            if not (N[a, b, f] and N[f, c, g] and N[g, d, e]):
                continue
            if not (N[c, d, l] and N[b, l, k1] and N[a, k1, e]):
                continue
            lhs = F[f, c, d, e, g, l] * F[a, b, l, e, f, k1]
            rhs = sum(
                F[a, b, c, g, f, h] * F[a, h, d, e, g, k1] * F[b, c, d, k1, h, l]
                for h in r
            )
            worst = max(worst, abs(lhs - rhs))
    return worst


def hexagon_defect(N, F, R):
    """Max defect of the two hexagons (braiding and inverse braiding)."""
    k = N.shape[0]
    r = range(k)
    worst = 0.0
    Rinv = np.conj(np.transpose(R, (1, 0, 2)))
    for RR in (R, Rinv):
        for a, b, c, d, x, w in itertools.product(r, repeat=6):
            if not (N[a, b, x] and N[x, c, d] and N[a, b, w] and N[c, w, d]):
                continue
            lhs = RR[x, c, d] if x == w else 0.0
            rhs = 0.0
            for y, z in itertools.product(r, repeat=2):
                rhs += (
                    F[a, b, c, d, x, y]
                    * RR[b, c, y]
                    * np.conj(F[a, c, b, d, z, y])
                    * RR[a, c, z]
                    * F[c, a, b, d, z, w]
                )
            worst = max(worst, abs(lhs - rhs))
    return worst


def fib_F(t, chi):
    """Gauge-fixed ansatz: vacuum legs are 1, F^{ttt}_t a real reflection."""
    N = dense_fusion(2, [(0, 0, 0), (0, 1, 1), (1, 1, 0), (1, 1, 1)])
    F = np.zeros((2,) * 6, dtype=complex)
    for a, b, c, d, x, y in itertools.product(range(2), repeat=6):
        if N[a, b, x] and N[x, c, d] and N[b, c, y] and N[a, y, d]:
            F[a, b, c, d, x, y] = 1.0
    F[1, 1, 1, 1] = [[np.cos(t), np.sin(t)], [np.sin(t), -np.cos(t)]]
    F[1, 1, 1, 0, 1, 1] = np.exp(1j * chi)
    return N, F


def solve_fibonacci():
    best = []
    for t0 in np.linspace(0.05, np.pi / 2 - 0.05, 12):
        for chi0 in np.linspace(0, 2 * np.pi, 8, endpoint=False):
            res = minimize(
                lambda p: pentagon_defect(*fib_F(*p)), [t0, chi0], method="Nelder-Mead",
                options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 4000},
            )
            if res.fun < 1e-9:
                best.append(res.x)
    t, chi = best[0]
    N, F = fib_F(t, chi)
    print("fibonacci F^{ttt}_t:", F[1, 1, 1, 1].real.tolist())
    print("  cos t =", np.cos(t), " 1/phi =", 2 / (1 + 5**0.5))
    print("  F^{ttt}_1 =", F[1, 1, 1, 0, 1, 1], " pentagon defect", pentagon_defect(N, F))
    F = fib_F(np.arccos(2 / (1 + 5**0.5)), 0.0)[1]

    sols = []
    grid = np.linspace(-np.pi, np.pi, 41)
    for a0, b0 in itertools.product(grid, grid):
        def cost(p):
            R = np.ones((2, 2, 2), dtype=complex)
            R[1, 1, 0], R[1, 1, 1] = np.exp(1j * p[0]), np.exp(1j * p[1])
            return hexagon_defect(N, F, R)
        if cost([a0, b0]) > 1.0:
            continue
        res = minimize(cost, [a0, b0], method="Nelder-Mead",
                       options={"xatol": 1e-13, "fatol": 1e-15})
        if res.fun < 1e-9:
            sols.append(tuple(np.round(np.angle(np.exp(1j * res.x)) / np.pi * 5, 8)))
    print("fibonacci R solutions, phases in units of pi/5:", sorted(set(sols)))


def check_ising():
    N = dense_fusion(3, [(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 1, 0), (1, 1, 2), (1, 2, 1), (2, 2, 0)])
    F = np.zeros((3,) * 6, dtype=complex)
    for a, b, c, d, x, y in itertools.product(range(3), repeat=6):
        if N[a, b, x] and N[x, c, d] and N[b, c, y] and N[a, y, d]:
            F[a, b, c, d, x, y] = 1.0
    s = 2**-0.5
    F[1, 1, 1, 1][np.ix_([0, 2], [0, 2])] = [[s, s], [s, -s]]
    F[1, 2, 1, 2, 1, 1] = -1
    F[2, 1, 2, 1, 1, 1] = -1
    R = np.zeros((3, 3, 3), dtype=complex)
    for a, b, c in zip(*np.nonzero(N)):
        R[a, b, c] = 1
    R[1, 1, 0] = np.exp(-1j * np.pi / 8)
    R[1, 1, 2] = np.exp(3j * np.pi / 8)
    R[1, 2, 1] = R[2, 1, 1] = -1j
    R[2, 2, 0] = -1
    print("ising pentagon defect", pentagon_defect(N, F))
    print("ising hexagon defect", hexagon_defect(N, F, R))


if __name__ == "__main__":
    solve_fibonacci()
    check_ising()
