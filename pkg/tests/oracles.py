"""Independent reference computations used only by the tests.

None of these share code with the package paths they check.
"""
import cmath
import math

import mpmath


def j0_integral(x, dps=30):
    """J0 from its integral representation (1/pi) int_0^pi cos(x sin phi) dphi."""
    with mpmath.workdps(dps):
        val = mpmath.quad(lambda p: mpmath.cos(x * mpmath.sin(p)), [0, mpmath.pi]) / mpmath.pi
    return float(val)


def j0_root(guess):
    with mpmath.workdps(30):
        f = lambda x: mpmath.quad(lambda p: mpmath.cos(x * mpmath.sin(p)), [0, mpmath.pi])
        return float(mpmath.findroot(f, guess))


def fourier_piecewise_linear(times, values, omega):
    """int f(t) e^{-i w t} dt for a piecewise-linear f, integrated exactly segment by segment.

    On [a, b] with f = f_a + s (t - a):
        int e^{-iwt} dt      = (e^{-iwb} - e^{-iwa}) / (-iw)
        int (t-a) e^{-iwt}   = [(t-a) e^{-iwt} / (-iw)]_a^b - int e^{-iwt} / (-iw)
    """
    total = 0j
    iw = -1j * omega
    for a, b, fa, fb in zip(times[:-1], times[1:], values[:-1], values[1:]):
        if b == a:
            continue
        s = (fb - fa) / (b - a)
        ea, eb = cmath.exp(iw * a), cmath.exp(iw * b)
        base = (eb - ea) / iw
        lin = (b - a) * eb / iw - base / iw
        total += fa * base + s * lin
    return total


def trapezoid_profile(c, theta, T):
    """Breakpoints and separation values of the diverge / parallel / converge profile."""
    return [0.0, theta, theta + T, 2 * theta + T], [0.0, 2 * c, 2 * c, 0.0]


def brute_force_surface_integral(pair, envelope, omega, n_t=4001, n_z=401):
    """Composite Simpson in both t and z on a uniform grid (slow, simple)."""
    import numpy as np

    t = np.linspace(pair.t_start, pair.t_end, n_t)
    x = np.interp(t, pair.upper_path[:, 0], pair.upper_path[:, 1])
    zu = np.interp(t, pair.upper_path[:, 0], pair.upper_path[:, 3])
    zl = np.interp(t, pair.lower_path[:, 0], pair.lower_path[:, 3])
    u = np.linspace(0.0, 1.0, n_z)
    wz = np.ones(n_z)
    wz[1:-1:2], wz[2:-1:2] = 4, 2
    wz /= 3 * (n_z - 1)
    z = zl[:, None] + (zu - zl)[:, None] * u[None, :]
    g = (zu - zl) * (envelope(x[:, None], z) @ wz)
    wt = np.ones(n_t)
    wt[1:-1:2], wt[2:-1:2] = 4, 2
    wt *= (t[-1] - t[0]) / (3 * (n_t - 1))
    return complex(np.sum(wt * g * np.exp(-1j * omega * t)))


def sine_square_average(n=400):
    """Mean of sin^2(a) sin^2(b) over a dense uniform grid of a, b in [0, 20 pi)."""
    total = 0.0
    for i in range(n):
        a = 20 * math.pi * (i + 0.5) / n
        for j in range(n):
            b = 20 * math.pi * (j + 0.5) / n + 0.37
            total += (math.sin(a) * math.sin(b)) ** 2
    return total / (n * n)
