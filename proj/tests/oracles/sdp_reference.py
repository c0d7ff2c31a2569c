#!/usr/bin/env python3
"""Reference optimum for the tracking-covariance design, via cvxpy.

Solves  max t  s.t.  R >= 0 (PSD), diag(R) = P_R/M,
        P(theta0) - P(theta) >= t          on the sidelobe grid,
        0.5 (1 - band) P(theta0) <= P(edge) <= 0.5 (1 + band) P(theta0),
with P(theta) = a(theta)^H R a(theta), half-wavelength ULA, 1-degree grid,
sidelobes at |theta - theta0| >= width/2 + 5 deg. Prints the optimal margin
t* and P(theta0); test_waveform.cpp pins the library's achieved margin
against these.
"""
import numpy as np
import cvxpy as cp


def steering(m, deg):
    k = np.arange(m)
    return np.exp(2j * np.pi * 0.5 * k * np.sin(np.deg2rad(deg)))


def solve(m, p_r=1.0, theta0=0.0, width=10.0, band=0.02):
    half = width / 2
    grid = np.arange(-90.0, 90.0 + 1e-9, 1.0)
    side = grid[np.abs(grid - theta0) >= half + 5.0]
    a0 = steering(m, theta0)
    r = cp.Variable((m, m), hermitian=True)
    t = cp.Variable()
    p0 = cp.real(cp.quad_form(a0, r))
    cons = [r >> 0, cp.diag(r) == p_r / m]
    for s in side:
        cons.append(p0 - cp.real(cp.quad_form(steering(m, s), r)) >= t)
    for edge in (theta0 - half, theta0 + half):
        pe = cp.real(cp.quad_form(steering(m, edge), r))
        cons.append(pe >= 0.5 * (1 - band) * p0)
        cons.append(pe <= 0.5 * (1 + band) * p0)
    prob = cp.Problem(cp.Maximize(t), cons)
    prob.solve(solver=cp.SCS, eps=1e-9, max_iters=200000)
    rv = r.value
    return t.value, np.real(a0.conj() @ rv @ a0), np.linalg.eigvalsh(rv).min()


for m in (4, 16):
    t_star, p0, mineig = solve(m)
    print(f"m={m}: t*={t_star:.10f} P(theta0)={p0:.8f} mineig={mineig:.2e}")
