"""Independent brute-force oracles.

Everything here works point by point through KNumber arithmetic and the
scalar character chi, never through the vectorised grid machinery that the
library uses, so agreement is a genuine cross-check.
"""

import cmath
import math

import numpy as np

from nwbf.analysis import FREQUENCY, TIME, chi
from nwbf.local_field import KNumber, k_add, k_mul, k_norm, n_of_u, p_shift, u_of_n


def brute_kappa(k, spec, limit=64):
    """Largest j with p**j u(k) still a lattice point (inf for k = 0)."""
    if k == 0:
        return math.inf
    j = 0
    while j < limit and n_of_u(p_shift(u_of_n(spec, k), j + 1)) is not None:
        j += 1
    return j


def brute_fourier(values, grid, inverse=False):
    """Character sum with every chi evaluated on KNumber products."""
    src, dst = (FREQUENCY, TIME) if inverse else (TIME, FREQUENCY)
    measure = grid.cell_measure(src)
    src_pts = [grid.point(i, src) for i in range(grid.size)]
    out = np.zeros(grid.size, dtype=complex)
    for a in range(grid.size):
        y = grid.point(a, dst)
        acc = 0j
        for b, x in enumerate(src_pts):
            c = chi(k_mul(x, y))
            acc += values[b] * (c if inverse else c.conjugate())
        out[a] = measure * acc
    return out


def brute_t_k(primal, dual, k, J_max):
    """t_k(w) cell by cell from KNumber translates and p-shifts."""
    grid = primal.grid
    spec = grid.spec
    kap = brute_kappa(k, spec)
    top = J_max if kap == math.inf else min(kap, J_max)
    uk = u_of_n(spec, k)
    out = np.zeros(grid.size, dtype=complex)
    for i in range(grid.size):
        w = grid.point(i, FREQUENCY)
        wk = k_add(w, uk)
        c = grid.cell_of(wk, FREQUENCY)
        total = primal.psi0_hat.values[i] * np.conj(dual.psi0_hat.values[c])
        for j in range(int(top) + 1):
            a = grid.cell_of(p_shift(w, j), FREQUENCY)
            b = grid.cell_of(p_shift(wk, j), FREQUENCY)
            factor = float(grid.q) ** (-j * (primal.s + dual.s))
            for P, D in zip(primal.psis_hat, dual.psis_hat):
                total += factor * P.values[a] * np.conj(D.values[b])
        out[i] = total
    return out


def time_atom(psi_time, grid, ell, j, k, s):
    """q**(j(1/2 - s)) psi(p**-j x - u(k)) on the time grid, psi supported in D.

    ``psi_time`` holds time-domain samples of the generator; only the
    values on D-cells are read.  Used for generators whose time support
    lies in D (the Haar family).
    """
    spec = grid.spec
    factor = 1.0 if ell == 0 else float(grid.q) ** (j * (0.5 - s))
    uk = u_of_n(spec, k)
    out = np.zeros(grid.size, dtype=complex)
    for i in range(grid.size):
        y = k_add(p_shift(grid.point(i, TIME), -j), KNumber.zero(spec) - uk)
        if k_norm(y)[1] <= 1.0:
            out[i] = factor * psi_time[grid.cell_of(y, TIME)]
    return out


def unit_phase(p, t):
    return cmath.exp(2j * math.pi * t / p)
