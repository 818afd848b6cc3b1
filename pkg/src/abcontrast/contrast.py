"""Contrast factor Upsilon = <exp(i theta)> and its independent estimates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ContrastReport",
    "bessel_j0",
    "contrast_analytic",
    "oracle_time_average",
    "finite_window_average",
    "contrast_gaussian_model",
    "contrast_taylor",
    "contrast_report",
    "J0_ZEROS",
]

# First zeros of J0, used for sanity checks and documentation only.
J0_ZEROS = (2.404825557695773, 5.520078110286311, 8.653727912911013, 11.791534439014281)

_SERIES_LIMIT = 12.0
_PI_4 = 0.25 * math.pi


def _j0_series(x: float) -> float:
    h = 0.25 * x * x
    term = 1.0
    terms = [term]
    k = 0
    while abs(term) >= 1e-18:
        k += 1
        term *= -h / (k * k)
        terms.append(term)
    return math.fsum(terms)


def _j0_hankel(x: float) -> float:
    # a_k = prod_{j<=k} -(2j-1)^2 / (k! 8^k); stop at the smallest term of the asymptotic series.
    a = 1.0
    p_terms = [1.0]
    q_terms = []
    last = 1.0
    k = 0
    while True:
        k += 1
        a *= -((2 * k - 1) ** 2) / (8.0 * k)
        term = a / x**k
        if abs(term) > last or abs(term) < 1e-17:
            break
        last = abs(term)
        if k % 2 == 0:
            p_terms.append(term if (k // 2) % 2 == 0 else -term)
        else:
            q_terms.append(term if ((k - 1) // 2) % 2 == 0 else -term)
    w = x - _PI_4
    p, q = math.fsum(p_terms), math.fsum(q_terms)
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(w) - q * math.sin(w))


def bessel_j0(x):
    """Bessel function of the first kind, order zero.

    Power series below |x| = 12, Hankel asymptotic expansion above; absolute
    error is around 1e-12 everywhere. Accepts scalars or arrays.
    """
    if np.ndim(x) == 0:
        x = abs(float(x))
        if not math.isfinite(x):
            raise ValueError("bessel_j0 requires a finite argument")
        return _j0_series(x) if x < _SERIES_LIMIT else _j0_hankel(x)
    arr = np.asarray(x, dtype=float)
    return np.array([bessel_j0(v) for v in arr.ravel()]).reshape(arr.shape)


def contrast_analytic(C) -> float:
    """J0(|C|): the emission-time averaged contrast."""
    return bessel_j0(abs(C))


def oracle_time_average(A: float, B: float, n_points: int = 1024) -> complex:
    """Average of exp(i(A cos phi + B sin phi)) over one period.

    Periodic trapezoid rule, which converges spectrally for this integrand.
    """
    if n_points < 16:
        raise ValueError("n_points must be at least 16")
    phi = 2.0 * math.pi * np.arange(n_points) / n_points
    vals = np.exp(1j * (A * np.cos(phi) + B * np.sin(phi)))
    return complex(math.fsum(vals.real), math.fsum(vals.imag)) / n_points


def finite_window_average(A: float, B: float, omega: float, window_Xi: float) -> complex:
    """(1 / 2 Xi) int_{-Xi}^{Xi} exp(i(A cos w t + B sin w t)) dt by composite Gauss-Legendre.

    Tends to `oracle_time_average` as Xi grows, with an O(1 / (w Xi)) deviation.
    """
    if not window_Xi > 0:
        raise ValueError("window_Xi must be positive")
    if not omega > 0:
        raise ValueError("omega must be positive")
    periods = 2.0 * window_Xi * omega / (2.0 * math.pi)
    per_period = 8 + 2 * math.ceil(math.hypot(A, B))
    n_panels = max(4, math.ceil(periods * per_period))
    x, w = np.polynomial.legendre.leggauss(10)
    edges = np.linspace(-window_Xi, window_Xi, n_panels + 1)
    half = 0.5 * np.diff(edges)[:, None]
    t = (edges[:-1, None] + half * (x + 1.0)).ravel()
    wt = (half * w).ravel()
    vals = wt * np.exp(1j * (A * np.cos(omega * t) + B * np.sin(omega * t)))
    return complex(math.fsum(vals.real), math.fsum(vals.imag)) / (2.0 * window_Xi)


def contrast_gaussian_model(C) -> float:
    """exp(-<theta^2>/2) with <theta^2> = |C|^2 / 2, the Gaussian-noise law."""
    return math.exp(-0.25 * abs(C) ** 2)


def contrast_taylor(C) -> float:
    """1 - |C|^2/4 + |C|^4/64. Only meaningful for |C| below about 1."""
    c2 = abs(C) ** 2
    return 1.0 - c2 / 4.0 + c2 * c2 / 64.0


@dataclass(frozen=True)
class ContrastReport:
    abs_C: float
    upsilon_analytic: float
    upsilon_oracle: complex
    upsilon_gaussian_model: float
    upsilon_taylor: float


def contrast_report(C: complex, n_points: int = 1024) -> ContrastReport:
    C = complex(C)
    return ContrastReport(
        abs_C=abs(C),
        upsilon_analytic=contrast_analytic(C),
        upsilon_oracle=oracle_time_average(C.real, C.imag, n_points),
        upsilon_gaussian_model=contrast_gaussian_model(C),
        upsilon_taylor=contrast_taylor(C),
    )
