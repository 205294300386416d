"""Independent reference computations used to freeze expected values.

Nothing here imports the code paths under test beyond the plain objective
formulas.
"""

import functools
import math

import numpy as np
from scipy import integrate, optimize


def normal_cdf_quad(z):
    dens = lambda t: math.exp(-0.5 * t * t) / math.sqrt(2 * math.pi)
    val, _ = integrate.quad(dens, -np.inf, z, epsabs=1e-14, epsrel=1e-13)
    return val


def shubert_C_direct(x):
    total = 0.0
    for j in range(1, 6):
        total += j * math.cos((j + 1) * x + j)
    return total


@functools.lru_cache(maxsize=None)
def shubert_grid_minimum(n=4000, lo=-10.0, hi=10.0):
    """Brute-force minimum of C(x1) C(x2) on an n x n grid, then Nelder-Mead polish."""
    g = np.linspace(lo, hi, n)
    C = np.array([shubert_C_direct(x) for x in g])
    F = np.multiply.outer(C, C)
    i, j = np.unravel_index(np.argmin(F), F.shape)
    f = lambda p: shubert_C_direct(p[0]) * shubert_C_direct(p[1])
    res = optimize.minimize(f, [g[i], g[j]], method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-12, "maxiter": 10_000})
    return float(min(res.fun, F[i, j])), tuple(res.x)


def cosine_grid_membership(omega, phi, t, direction, domain, n=100_000):
    xs = np.linspace(domain[0], domain[1], n)
    c = np.cos(omega * xs + phi)
    return xs, (c >= t) if direction == "ge" else (c <= t)


def rejection_truncnorm(mu, sigma2, intervals, n, seed):
    gen = np.random.default_rng(seed)
    out = []
    have = 0
    while have < n:
        z = gen.normal(mu, math.sqrt(sigma2), size=200_000)
        keep = np.zeros(z.shape, dtype=bool)
        for lo, hi in intervals:
            keep |= (z >= lo) & (z <= hi)
        out.append(z[keep])
        have += int(keep.sum())
    return np.concatenate(out)[:n]


def grid_iid(f, kappa, box, n, seed, m=1000):
    """Approximately exact iid draws from exp(-kappa f) on ``box``.

    Cells of an m x m grid are picked by their centre density, then the
    point is jittered uniformly inside the cell.
    """
    gen = np.random.default_rng(seed)
    a, b, c, d = box
    h1, h2 = (b - a) / m, (d - c) / m
    c1 = a + h1 * (np.arange(m) + 0.5)
    c2 = c + h2 * (np.arange(m) + 0.5)
    X1, X2 = np.meshgrid(c1, c2, indexing="ij")
    logp = -kappa * f(X1, X2)
    p = np.exp(logp - logp.max()).ravel()
    idx = gen.choice(p.size, size=n, p=p / p.sum())
    i, j = np.divmod(idx, m)
    return np.column_stack([c1[i] + h1 * (gen.random(n) - 0.5), c2[j] + h2 * (gen.random(n) - 0.5)])
