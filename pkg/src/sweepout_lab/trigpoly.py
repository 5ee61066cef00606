"""Real trigonometric polynomials on the circle, their zero orders and zero sums."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import SamplingTooCoarse
from .s3geom import TWO_PI

UNIT_CIRCLE_TOL = 1e-8
CLUSTER_RADIUS = 1e-6


@dataclass(frozen=True)
class TrigPoly:
    """``T(alpha) = b0 + sum_j b_j cos(j alpha + theta_j)``.

    ``theta[j - 1]`` is the phase of the degree-``j`` term; trailing zero
    amplitudes are stripped so ``b[-1] != 0`` unless ``T`` is identically zero.
    """

    b: tuple
    theta: tuple

    def __init__(self, b, theta=None):
        b = [float(x) for x in b]
        theta = [0.0] * (len(b) - 1) if theta is None else [float(x) for x in theta]
        if len(theta) != len(b) - 1:
            raise ValueError("need one phase per nonconstant term")
        while len(b) > 1 and b[-1] == 0.0:
            b.pop()
            theta.pop()
        object.__setattr__(self, "b", tuple(b))
        object.__setattr__(self, "theta", tuple(t % TWO_PI for t in theta))

    @property
    def k(self) -> int:
        """Degree, with the zero function having degree -1."""
        if len(self.b) == 1 and self.b[0] == 0.0:
            return -1
        return len(self.b) - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.b))

    @property
    def is_zero(self) -> bool:
        return self.k == -1

    def __call__(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        out = np.full(alpha.shape, self.b[0])
        for j in range(1, len(self.b)):
            out = out + self.b[j] * np.cos(j * alpha + self.theta[j - 1])
        return out

    def derivative(self, alpha, order: int = 1):
        alpha = np.asarray(alpha, dtype=float)
        if order == 0:
            return self(alpha)
        out = np.zeros(alpha.shape)
        for j in range(1, len(self.b)):
            # d^m/dα^m cos(jα + θ) = j^m cos(jα + θ + mπ/2)
            out = out + self.b[j] * j ** order * np.cos(j * alpha + self.theta[j - 1] + order * math.pi / 2)
        return out


def to_complex_poly(T: TrigPoly) -> np.ndarray:
    """Coefficients (ascending powers) of ``q_T(z) = z^k T`` with ``cos(j a + t) -> (e^{it} z^j + e^{-it} z^{-j}) / 2``."""
    if T.is_zero:
        raise ValueError("q_T is undefined for the zero polynomial")
    k = T.k
    q = np.zeros(2 * k + 1, dtype=complex)
    q[k] = T.b[0]
    for j in range(1, k + 1):
        half = T.b[j] / 2.0
        q[k + j] += half * np.exp(1j * T.theta[j - 1])
        q[k - j] += half * np.exp(-1j * T.theta[j - 1])
    return q


def _root_clusters(roots: np.ndarray, radius: float = CLUSTER_RADIUS) -> list:
    """Groups roots by single-linkage within ``radius``; returns ``(mean, multiplicity)`` pairs."""
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) < radius:
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    return [(complex(np.mean(g)), len(g)) for g in groups.values()]


def q_roots(T: TrigPoly) -> np.ndarray:
    q = to_complex_poly(T)
    if len(q) == 1:
        return np.array([], dtype=complex)
    return np.roots(q[::-1])


def unit_circle_zeros(T: TrigPoly) -> list:
    """Zeros of ``T`` on the circle as ``(alpha, order)`` pairs sorted by angle."""
    roots = q_roots(T)
    out = []
    # a cluster mean cancels the eps^(1/m) splitting of an m-fold root to first order
    for z, m in _root_clusters(roots, CLUSTER_RADIUS):
        if abs(1.0 - abs(z)) < UNIT_CIRCLE_TOL:
            out.append((math.atan2(z.imag, z.real) % TWO_PI, m))
    return sorted(out)


def ord(T: TrigPoly) -> int:  # noqa: A001 - mirrors the mathematical name
    """Total order of the zero set of ``T`` on the circle."""
    if T.is_zero:
        raise ValueError("order of the zero polynomial is infinite")
    return int(sum(m for _, m in unit_circle_zeros(T)))


def zero_sum(T: TrigPoly) -> float:
    """Order-weighted sum of the zeros of ``T``, reduced mod 2 pi (0 when there are none)."""
    if T.is_zero:
        raise ValueError("zero sum of the zero polynomial is undefined")
    return float(sum(m * a for a, m in unit_circle_zeros(T)) % TWO_PI)


def circle_distance(x: float, y: float) -> float:
    d = (x - y) % TWO_PI
    return float(min(d, TWO_PI - d))


def spectral_derivatives(samples: np.ndarray, max_order: int) -> np.ndarray:
    """Derivatives ``0..max_order`` of a periodic function at its own sample points."""
    n = samples.size
    coef = np.fft.rfft(samples)
    k = np.arange(coef.size)
    out = np.empty((max_order + 1, n))
    for j in range(max_order + 1):
        c = coef * (1j * k) ** j
        if n % 2 == 0 and j % 2 == 1:
            c[-1] = 0.0  # Nyquist mode has no well-defined odd derivative
        out[j] = np.fft.irfft(c, n)
    return out


def c_norm(values_fn: Callable, order: int, n: int = 8192) -> float:
    """Spectral estimate of the ``C^order`` norm (max over derivatives of max |.|)."""
    alpha = np.linspace(0.0, TWO_PI, n, endpoint=False)
    d = spectral_derivatives(np.asarray(values_fn(alpha), dtype=float), order)
    return float(np.max(np.abs(d)))


@dataclass
class PerturbationReport:
    ord_ok: bool
    zsum_ok: bool
    ord_f: int
    zero_sum_f: float
    perturbation_norm: float
    within_hypothesis: bool


def verify_perturbed_bound(f: Callable, T: TrigPoly, delta1: float, n: int = 8192,
                           zsum_tol: float = 1e-3) -> PerturbationReport:
    """Checks ``ord(f) <= 2k`` and, at full order, ``dist(Z(f), -2 theta_k) <= zsum_tol``.

    ``f`` must be vectorized over angles.  ``within_hypothesis`` records
    whether ``||f - T||_{C^{2k}} <= delta1 ||T||`` held for the sampled estimate.
    """
    from .family import profile_of

    if T.is_zero or T.k == 0:
        raise ValueError("T must have positive degree")
    k = T.k
    alpha = np.linspace(0.0, TWO_PI, n, endpoint=False)
    fk = np.asarray(f(alpha), dtype=float)
    diff = spectral_derivatives(fk - T(alpha), 2 * k)
    # a resolved function has negligible energy in the top eighth of the spectrum
    spec = np.abs(np.fft.rfft(fk))
    tail = spec[-max(1, spec.size // 8):]
    if spec.max() > 0 and tail.max() > 1e-8 * spec.max():
        raise SamplingTooCoarse("f is not resolved by the sampling grid")
    pert = float(np.max(np.abs(diff)))
    prof = profile_of(f, n=n)
    ord_f = prof.total_order
    zs = float(sum(o * t for t, o in prof.zeros) % TWO_PI) if prof.zeros else 0.0
    ord_ok = ord_f <= 2 * k
    zsum_ok = True
    if ord_f == 2 * k:
        zsum_ok = circle_distance(zs, -2.0 * T.theta[-1]) <= zsum_tol
    return PerturbationReport(ord_ok, zsum_ok, ord_f, zs, pert, pert <= delta1 * T.norm)
