"""Defining functions of the RP^5 quadric family and its desingularized 7-parameter extension.

The quadric family is the zero set on S^3 of

    a0 + a1 x1 + a2 x2 + a3 x3 + a4 x4 + a5 x1 x2,

and the extended family adds, for parameters close to the singular locus,
a small handle-producing term ``a5 * rho(a, x) * g_z(alpha)`` with

    g_z(alpha) = r cos(theta + 2 alpha) + (1 - r) cos(3 alpha),   z = r e^{i theta}.

All functions accept a :class:`ProjParam` (unit-norm representative) so the
returned values are a fixed positive multiple of the textbook ``a5 = 1`` form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize

from .errors import NoCenter, UnresolvedZero
from .s3geom import TWO_PI, ChartPoint, S3Point, chart_to_ambient, sigma

PARAM_TOL = 1e-10


@dataclass(frozen=True)
class ProjParam:
    """Homogeneous coordinates ``[a0 : ... : a5]`` stored in canonical form.

    The canonical representative has unit Euclidean norm and its first
    nonzero entry is positive.
    """

    a: tuple

    def __init__(self, *coords):
        if len(coords) == 1 and np.ndim(coords[0]) == 1:
            coords = tuple(coords[0])
        arr = np.asarray(coords, dtype=float)
        if arr.shape != (6,):
            raise ValueError("ProjParam needs exactly 6 homogeneous coordinates")
        n = np.linalg.norm(arr)
        if n == 0.0:
            raise ValueError("[0:0:0:0:0:0] is not a point of RP^5")
        arr = arr / n
        nz = np.flatnonzero(np.abs(arr) > 0.0)
        if arr[nz[0]] < 0:
            arr = -arr
        object.__setattr__(self, "a", tuple(float(x) for x in arr))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.a)

    def affine(self) -> np.ndarray | None:
        """The representative with ``a5 = 1``, or ``None`` when ``a5 = 0``."""
        a5 = self.a[5]
        if abs(a5) <= PARAM_TOL:
            return None
        return self.array / a5

    @classmethod
    def singular(cls, a1: float, a2: float) -> "ProjParam":
        """The point ``[a1 a2 : a1 : a2 : 0 : 0 : 1]`` of the singular locus pattern."""
        return cls(a1 * a2, a1, a2, 0.0, 0.0, 1.0)

    def __repr__(self):
        return "ProjParam[" + ":".join(f"{x:.6g}" for x in self.a) + "]"


CENTRAL = ProjParam(0, 0, 0, 0, 0, 1)
GREAT_SPHERE = ProjParam(0, 1, 0, 0, 0, 0)


@dataclass(frozen=True)
class DiskParam:
    """A point ``z = r e^{i theta}`` of the closed unit disk."""

    r: float
    theta: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.r <= 1.0):
            raise ValueError(f"r = {self.r} is outside [0, 1]")
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)

    @property
    def on_boundary(self) -> bool:
        return self.r == 1.0


@dataclass(frozen=True)
class CutoffConfig:
    """Amplitude of the cut-off ``delta(s) = delta0 * exp(1 - 1/(1 - s^2))``."""

    delta0: float = 1e-3

    def __post_init__(self):
        if not (0.0 < self.delta0 <= 0.1):
            raise ValueError(f"delta0 = {self.delta0} must lie in (0, 0.1]")


@dataclass
class ZeroProfile:
    zeros: list = field(default_factory=list)  # (alpha, order) pairs, alpha-sorted

    @property
    def total_order(self) -> int:
        return int(sum(o for _, o in self.zeros))

    @property
    def count(self) -> int:
        return len(self.zeros)

    @property
    def angles(self) -> np.ndarray:
        return np.array([z for z, _ in self.zeros])

    @property
    def orders(self) -> list:
        return [o for _, o in self.zeros]

    @property
    def odd_count(self) -> int:
        return sum(1 for _, o in self.zeros if o % 2 == 1)

    def predicted_genus(self) -> int:
        """Genus of the level set from the zero pattern: ``max(0, #odd/2 - 1)``."""
        return max(0, self.odd_count // 2 - 1)


# ---------------------------------------------------------------------------
# cut-off functions

def delta_fn(s, cfg: CutoffConfig):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = cfg.delta0 * np.exp(1.0 - 1.0 / (1.0 - si * si))
    return out if out.ndim else float(out)


def _h(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def _dh(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    up = u[pos]
    out[pos] = np.exp(-1.0 / up) / (up * up)
    return out


def zeta(t):
    """Smooth non-increasing step: 1 on ``t <= 1/2``, 0 on ``t >= 1``."""
    t = np.asarray(t, dtype=float)
    p = _h(1.0 - t)
    q = _h(t - 0.5)
    out = p / (p + q)
    return out if out.ndim else float(out)


def zeta_prime(t):
    t = np.asarray(t, dtype=float)
    p, q = _h(1.0 - t), _h(t - 0.5)
    dp, dq = -_dh(1.0 - t), _dh(t - 0.5)
    out = (dp * q - p * dq) / np.square(p + q)
    return out if out.ndim else float(out)


def zeta_second(t, eps: float = 1e-6):
    t = np.asarray(t, dtype=float)
    return (zeta_prime(t + eps) - zeta_prime(t - eps)) / (2 * eps)


def _rho_parts(a: ProjParam, cfg: CutoffConfig):
    """Returns ``(center, radius_scale, amplitude)`` or ``None`` when rho vanishes identically.

    ``rho(x) = amplitude * zeta(|x - center|^2 / radius_scale)``.
    """
    b = a.affine()
    if b is None:
        return None
    s = b[1] ** 2 + b[2] ** 2
    if s >= 1.0:
        return None
    d = delta_fn(s, cfg)
    if d <= 0.0:
        return None
    amp = zeta((b[3] ** 2 + b[4] ** 2 + (b[0] - b[1] * b[2]) ** 2) / d) * d
    if amp <= 0.0:
        return None
    center = np.array([-b[2], -b[1]])
    radius_scale = (1.0 - s) ** 2 / 64.0
    return center, radius_scale, float(amp)


def rho_active(a: ProjParam, cfg: CutoffConfig = CutoffConfig()) -> bool:
    return _rho_parts(a, cfg) is not None


def kappa(a: ProjParam) -> float:
    b = a.affine()
    if b is None:
        return 0.0
    return (1.0 - math.sqrt(b[1] ** 2 + b[2] ** 2)) / 4.0


def rho_chart(a: ProjParam, x1, x2, cfg: CutoffConfig = CutoffConfig()):
    parts = _rho_parts(a, cfg)
    x1 = np.asarray(x1, dtype=float)
    if parts is None:
        return np.zeros(np.broadcast(x1, np.asarray(x2)).shape) if x1.ndim else 0.0
    c, rs, amp = parts
    u = (np.square(x1 - c[0]) + np.square(np.asarray(x2) - c[1])) / rs
    return amp * zeta(u)


def rho(a: ProjParam, q, cfg: CutoffConfig = CutoffConfig()) -> float:
    """Cut-off value at an S^3 point (or chart point)."""
    if isinstance(q, ChartPoint):
        x1, x2 = q.x1, q.x2
    else:
        w = q.array if isinstance(q, S3Point) else np.asarray(q, dtype=float)
        x1, x2 = w[0], w[1]
    return float(rho_chart(a, x1, x2, cfg))


def _rho_grad_hess(a: ProjParam, X: np.ndarray, cfg: CutoffConfig):
    """Gradient ``(n, 2)`` and Hessian ``(n, 2, 2)`` of rho in chart coordinates."""
    n = X.shape[0]
    grad = np.zeros((n, 2))
    hess = np.zeros((n, 2, 2))
    parts = _rho_parts(a, cfg)
    if parts is None:
        return grad, hess
    c, rs, amp = parts
    d = X - c
    u = np.sum(d * d, axis=1) / rs
    band = (u > 0.5) & (u < 1.0)
    if np.any(band):
        zp = zeta_prime(u[band])
        zpp = zeta_second(u[band])
        du = 2.0 * d[band] / rs
        grad[band] = amp * zp[:, None] * du
        hess[band] = amp * (zpp[:, None, None] * du[:, :, None] * du[:, None, :]
                            + zp[:, None, None] * (2.0 / rs) * np.eye(2)[None])
    return grad, hess


def trig_term(z: DiskParam, alpha):
    alpha = np.asarray(alpha, dtype=float)
    return z.r * np.cos(z.theta + 2 * alpha) + (1.0 - z.r) * np.cos(3 * alpha)


def trig_term_prime(z: DiskParam, alpha):
    alpha = np.asarray(alpha, dtype=float)
    return -2 * z.r * np.sin(z.theta + 2 * alpha) - 3 * (1.0 - z.r) * np.sin(3 * alpha)


# ---------------------------------------------------------------------------
# defining functions

def phi5_ambient(a: ProjParam, W: np.ndarray) -> np.ndarray:
    W = np.atleast_2d(np.asarray(W, dtype=float))
    c = a.a
    return c[0] + W @ np.array(c[1:5]) + c[5] * W[:, 0] * W[:, 1]


def phi5_eval(a: ProjParam, q) -> float:
    w = q.array if isinstance(q, S3Point) else np.asarray(q, dtype=float)
    return float(phi5_ambient(a, w[None])[0])


def is_singular_param(a: ProjParam) -> bool:
    """True when ``a`` is ``[a1 a2 : a1 : a2 : 0 : 0 : 1]`` with ``a1^2 + a2^2 < 1``."""
    b = a.affine()
    if b is None:
        return False
    tol = PARAM_TOL * max(1.0, float(np.max(np.abs(b))))
    if abs(b[3]) > tol or abs(b[4]) > tol:
        return False
    if abs(b[0] - b[1] * b[2]) > tol:
        return False
    return b[1] ** 2 + b[2] ** 2 < 1.0


def psi_ambient(a: ProjParam, z: DiskParam, W: np.ndarray, cfg: CutoffConfig = CutoffConfig()) -> np.ndarray:
    """Vectorized defining function of the extended family on ambient points."""
    W = np.atleast_2d(np.asarray(W, dtype=float))
    F = phi5_ambient(a, W)
    parts = _rho_parts(a, cfg)
    if parts is None:
        return F
    c, rs, amp = parts
    u = (np.square(W[:, 0] - c[0]) + np.square(W[:, 1] - c[1])) / rs
    live = u < 1.0
    if np.any(live):
        Wl = W[live]
        alpha = np.arctan2(Wl[:, 3], Wl[:, 2])
        F[live] += a.a[5] * amp * zeta(u[live]) * trig_term(z, alpha)
    return F


def psi_chart(a: ProjParam, z: DiskParam, x1, x2, alpha, cfg: CutoffConfig = CutoffConfig()):
    x1, x2, alpha = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float), np.asarray(alpha, float))
    c = a.a
    s = sigma(x1, x2)
    F = (c[0] + c[1] * x1 + c[2] * x2 + s * (c[3] * np.cos(alpha) + c[4] * np.sin(alpha))
         + c[5] * (x1 * x2 + rho_chart(a, x1, x2, cfg) * trig_term(z, alpha)))
    return F


def psi_eval(a: ProjParam, z: DiskParam, p, cfg: CutoffConfig = CutoffConfig()) -> float:
    if isinstance(p, ChartPoint):
        return float(psi_chart(a, z, p.x1, p.x2, p.alpha, cfg))
    w = p.array if isinstance(p, S3Point) else np.asarray(p, dtype=float)
    return float(psi_ambient(a, z, w[None], cfg)[0])


def _grad_hess_x(a: ProjParam, z: DiskParam, X: np.ndarray, alpha: np.ndarray, cfg: CutoffConfig):
    c = a.a
    x1, x2 = X[:, 0], X[:, 1]
    s = sigma(x1, x2)
    lin = c[3] * np.cos(alpha) + c[4] * np.sin(alpha)
    g = trig_term(z, alpha)
    rg, rh = _rho_grad_hess(a, X, cfg)
    grad = np.empty_like(X)
    grad[:, 0] = c[1] + c[5] * x2 - lin * x1 / s + c[5] * g * rg[:, 0]
    grad[:, 1] = c[2] + c[5] * x1 - lin * x2 / s + c[5] * g * rg[:, 1]
    hess = np.empty((X.shape[0], 2, 2))
    s3 = s ** 3
    hess[:, 0, 0] = lin * (-1.0 / s - x1 * x1 / s3)
    hess[:, 1, 1] = lin * (-1.0 / s - x2 * x2 / s3)
    hess[:, 0, 1] = hess[:, 1, 0] = c[5] - lin * x1 * x2 / s3
    hess += c[5] * g[:, None, None] * rh
    return grad, hess


def grad_x_F(a: ProjParam, z: DiskParam, p: ChartPoint, cfg: CutoffConfig = CutoffConfig()) -> np.ndarray:
    """Partial derivatives of the defining function in the chart variables ``(x1, x2)``."""
    g, _ = _grad_hess_x(a, z, np.array([[p.x1, p.x2]]), np.array([p.alpha]), cfg)
    return g[0]


def dalpha_F(a: ProjParam, z: DiskParam, X: np.ndarray, alpha, cfg: CutoffConfig = CutoffConfig()):
    c = a.a
    alpha = np.asarray(alpha, dtype=float)
    s = sigma(X[:, 0], X[:, 1])
    return (s * (-c[3] * np.sin(alpha) + c[4] * np.cos(alpha))
            + c[5] * rho_chart(a, X[:, 0], X[:, 1], cfg) * trig_term_prime(z, alpha))


# ---------------------------------------------------------------------------
# center curve and zero profile

def center_points(a: ProjParam, z: DiskParam, alpha, cfg: CutoffConfig = CutoffConfig(),
                  tol: float = 1e-11, max_iter: int = 50) -> np.ndarray:
    """Zero of ``grad_x F(., alpha)`` near ``(-a2, -a1)`` for each ``alpha``; shape ``(n, 2)``."""
    parts = _rho_parts(a, cfg)
    if parts is None:
        raise NoCenter(f"rho vanishes identically for {a}")
    seed = parts[0]
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    X = np.tile(seed, (alpha.size, 1))
    radius = kappa(a) / 4.0
    for _ in range(max_iter):
        g, H = _grad_hess_x(a, z, X, alpha, cfg)
        res = np.linalg.norm(g, axis=1)
        if np.all(res < tol):
            break
        X = X - np.linalg.solve(H, g[:, :, None])[:, :, 0]
        if not np.all(np.isfinite(X)):
            raise NoCenter("Newton iteration diverged")
    else:
        g, _ = _grad_hess_x(a, z, X, alpha, cfg)
        if not np.all(np.linalg.norm(g, axis=1) < tol):
            raise NoCenter(f"Newton did not converge in {max_iter} iterations")
    if np.any(np.linalg.norm(X - seed, axis=1) > radius):
        raise NoCenter("center left the disk of radius kappa/4")
    return X


def center_curve(a: ProjParam, z: DiskParam, cfg: CutoffConfig = CutoffConfig(), n: int = 256):
    alpha = np.linspace(0.0, TWO_PI, n, endpoint=False)
    return alpha, center_points(a, z, alpha, cfg)


def f_values(a: ProjParam, z: DiskParam, alpha, cfg: CutoffConfig = CutoffConfig()) -> np.ndarray:
    """Restriction ``f(alpha) = F(x_a(alpha), alpha)`` of the defining function to the center curve."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    X = center_points(a, z, alpha, cfg)
    return psi_chart(a, z, X[:, 0], X[:, 1], alpha, cfg)


def f_prime_values(a: ProjParam, z: DiskParam, alpha, cfg: CutoffConfig = CutoffConfig()) -> np.ndarray:
    # the x-gradient vanishes on the center curve, so only the alpha-partial survives
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    X = center_points(a, z, alpha, cfg)
    return dalpha_F(a, z, X, alpha, cfg)


def _spectral_derivatives(samples: np.ndarray, points: np.ndarray, max_order: int) -> np.ndarray:
    """Derivatives ``0..max_order`` at ``points`` of the trigonometric interpolant of periodic samples."""
    n = samples.size
    coef = np.fft.rfft(samples) / n
    k = np.arange(coef.size)
    weight = np.full(coef.size, 2.0)
    weight[0] = 1.0
    if n % 2 == 0:
        weight[-1] = 1.0
    phase = np.exp(1j * np.outer(points, k))
    out = np.empty((max_order + 1, points.size))
    for j in range(max_order + 1):
        out[j] = np.real(phase @ (weight * coef * (1j * k) ** j))
    return out


def _bisect_vectorized(fun, lo: np.ndarray, hi: np.ndarray, flo: np.ndarray, iters: int = 60):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


ZERO_REL_TOL = 1e-7
MAX_ORDER = 6


def profile_of(fun, fprime=None, n: int = 4096, rel_tol: float = ZERO_REL_TOL) -> ZeroProfile:
    """Zeros and orders of a smooth 2 pi-periodic function given as a vectorized callable."""
    alpha = np.linspace(0.0, TWO_PI, n, endpoint=False)
    fk = fun(alpha)
    scale = float(np.max(np.abs(fk)))
    if scale == 0.0:
        raise UnresolvedZero("function vanishes identically (infinite order)")
    thresh = rel_tol * scale
    nxt = np.roll(fk, -1)
    found = []

    exact = np.flatnonzero(fk == 0.0)
    found.extend(alpha[exact])

    cross = np.flatnonzero((fk * nxt < 0.0))
    if cross.size:
        lo = alpha[cross]
        hi = lo + TWO_PI / n
        found.extend(_bisect_vectorized(fun, lo, hi, fk[cross]) % TWO_PI)

    # touching zeros: local minima of |f| without a sign change
    absf = np.abs(fk)
    prv = np.roll(absf, 1)
    nx = np.roll(absf, -1)
    cand = np.flatnonzero((absf <= prv) & (absf <= nx) & (absf < 1e-3 * scale) & (fk != 0.0))
    step = TWO_PI / n
    for i in cand:
        if fk[i] * nxt[i] < 0 or fk[i] * np.roll(fk, 1)[i] < 0:
            continue
        sgn = np.sign(fk[i])
        res = optimize.minimize_scalar(lambda t: sgn * float(fun(np.array([t]))[0]),
                                       bounds=(alpha[i] - step, alpha[i] + step), method="bounded",
                                       options={"xatol": 1e-13})
        if abs(res.fun) < thresh:
            found.append(res.x % TWO_PI)

    if not found:
        return ZeroProfile([])
    found = np.sort(np.asarray(found) % TWO_PI)
    keep = [found[0]]
    for t in found[1:]:
        if t - keep[-1] > 1e-9:
            keep.append(t)
    if len(keep) > 1 and keep[0] + TWO_PI - keep[-1] <= 1e-9:
        keep.pop()
    zeros = np.array(keep)

    derivs = _spectral_derivatives(fk, zeros, MAX_ORDER)
    if fprime is not None:
        derivs[1] = fprime(zeros)
    out = []
    for i, t in enumerate(zeros):
        order = None
        for j in range(1, MAX_ORDER + 1):
            if abs(derivs[j, i]) >= thresh:
                order = j
                break
        if order is None:
            raise UnresolvedZero(f"zero at alpha={t:.6f} has order above {MAX_ORDER}")
        out.append((float(t), order))
    return ZeroProfile(out)


def f_profile(a: ProjParam, z: DiskParam, cfg: CutoffConfig = CutoffConfig(), n: int = 4096) -> ZeroProfile:
    """Zeros with orders of ``f(alpha) = F(x_a(alpha), alpha)``."""
    center_points(a, z, np.array([0.0]), cfg)  # raises NoCenter outside the regime
    return profile_of(lambda t: f_values(a, z, t, cfg), lambda t: f_prime_values(a, z, t, cfg), n=n)


def zero_ceiling(z: DiskParam) -> int:
    return 4 if z.on_boundary else 6


def checked_profile(a: ProjParam, z: DiskParam, cfg: CutoffConfig = CutoffConfig(), retries: int = 3):
    """``f_profile`` with the zero-count ceiling enforced by shrinking ``delta0``.

    Returns ``(profile, cfg_used)``; ``cfg_used.delta0`` is the value under
    which the ceiling held.
    """
    for _ in range(retries + 1):
        prof = f_profile(a, z, cfg)
        if prof.total_order <= zero_ceiling(z):
            return prof, cfg
        cfg = replace(cfg, delta0=cfg.delta0 / 10.0)
    raise UnresolvedZero(f"zero ceiling violated for {a}, {z} even at delta0={cfg.delta0 * 10}")


# ---------------------------------------------------------------------------
# critical points of squared distance on the model surfaces

HYPERBOLA = "hyperbola"  # {x1 x2 = 1} in R^3
SADDLE = "saddle"        # {x1 x2 = x3} in R^3


def _real_roots(coeffs_ascending: Sequence[float], imag_tol: float = 1e-9) -> np.ndarray:
    c = np.trim_zeros(np.asarray(coeffs_ascending, dtype=float)[::-1], "f")
    if c.size <= 1:
        return np.array([])
    roots = np.roots(c)
    scale = np.maximum(1.0, np.abs(roots))
    return np.real(roots[np.abs(roots.imag) <= imag_tol * scale])


def _quadratic_real(p: float, q: float) -> list:
    """Real roots of ``t^2 + p t + q``."""
    disc = p * p - 4 * q
    if disc < -1e-12:
        return []
    disc = math.sqrt(max(disc, 0.0))
    return [(-p + disc) / 2, (-p - disc) / 2]


def critical_points(kind: str, b: Iterable[float], tol: float = 1e-7) -> np.ndarray:
    """Critical points of ``|x - b|^2`` restricted to a model surface, as an ``(m, 3)`` array."""
    b1, b2, b3 = (float(v) for v in b)
    cands = []
    if kind == SADDLE:
        # s = x3 - b3; interior branch is a quintic in s
        lhs = np.array([b1 * b2, -(b1 ** 2 + b2 ** 2), b1 * b2, 0, 0, 0])
        rhs = np.array([b3, 1.0, -2 * b3, -2.0, b3, 1.0])
        for s in _real_roots(rhs - lhs):
            if abs(s * s - 1.0) < 1e-9:
                continue
            x1 = (b1 - b2 * s) / (1 - s * s)
            x2 = (b2 - b1 * s) / (1 - s * s)
            cands.append((x1, x2, s + b3))
        if abs(b1 - b2) <= 1e-12:  # s = +1: x1 + x2 = b1, x1 x2 = b3 + 1
            for x1 in _quadratic_real(-b1, b3 + 1):
                cands.append((x1, b1 - x1, b3 + 1))
        if abs(b1 + b2) <= 1e-12:  # s = -1: x1 - x2 = b1, x1 x2 = b3 - 1
            for x2 in _quadratic_real(b1, -(b3 - 1)):
                cands.append((x2 + b1, x2, b3 - 1))
        surf = lambda x: x[0] * x[1] - x[2]
        normal = lambda x: np.array([x[1], x[0], -1.0])
    elif kind == HYPERBOLA:
        # mu is the Lagrange multiplier; interior branch is a quartic in mu
        lhs = np.array([b1 * b2, -(b1 ** 2 + b2 ** 2), b1 * b2, 0, 0])
        rhs = np.array([1.0, 0.0, -2.0, 0.0, 1.0])
        for mu in _real_roots(rhs - lhs):
            if abs(mu * mu - 1.0) < 1e-9:
                continue
            cands.append(((b1 - b2 * mu) / (1 - mu * mu), (b2 - b1 * mu) / (1 - mu * mu), b3))
        if abs(b1 - b2) <= 1e-12:
            for x1 in _quadratic_real(-b1, 1.0):
                cands.append((x1, b1 - x1, b3))
        if abs(b1 + b2) <= 1e-12:
            for x2 in _quadratic_real(b1, -1.0):
                cands.append((x2 + b1, x2, b3))
        surf = lambda x: x[0] * x[1] - 1.0
        normal = lambda x: np.array([x[1], x[0], 0.0])
    else:
        raise ValueError(f"unknown surface kind {kind!r}")

    bvec = np.array([b1, b2, b3])
    pts = []
    for x in cands:
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            continue
        scale = max(1.0, float(np.max(np.abs(x))))
        if abs(surf(x)) > tol * scale ** 2:
            continue
        nrm = normal(x)
        d = x - bvec
        # d parallel to the surface normal
        if np.linalg.norm(np.cross(d, nrm)) > tol * scale ** 2 * max(1.0, np.linalg.norm(nrm)):
            continue
        if all(np.linalg.norm(x - y) > 1e-6 * scale for y in pts):
            pts.append(x)
    return np.array(pts).reshape(-1, 3)


def critical_count(kind: str, b: Iterable[float]) -> int:
    return int(critical_points(kind, b).shape[0])
