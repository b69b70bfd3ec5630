"""A desk-scale meromorphic laboratory.

Rational matrix-valued resolvent families with explicit Laurent data, used
to exercise the residue-to-time-domain dictionary, truncated inverse-
Laplace line integrals, band isolation by contour subtraction, rank-one
residue formulas with dual states, forcing-transform decay, and localized
pseudospectrum scans.  Everything is small and explicit so that every
contour identity can be checked against an independent residue oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import quad, quad_vec

from .errors import ConfigError, ContourError, HypothesisError, ResolutionError, StructureError


# ---------------------------------------------------------------------------
# rational resolvent families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pole:
    """A pole with its generalized Laurent coefficients.

    laurent[q-1] is the d x d coefficient of (omega - omega0)^(-q),
    q = 1..order; laurent[0] is the residue.
    """

    omega: complex
    order: int
    laurent: tuple

    def __post_init__(self):
        if self.order < 1 or len(self.laurent) != self.order:
            raise ConfigError("need one Laurent coefficient per pole order")
        mats = tuple(np.asarray(m, dtype=complex) for m in self.laurent)
        object.__setattr__(self, "laurent", mats)


@dataclass(frozen=True)
class RationalResolvent:
    """R(omega) = sum_poles sum_q Pi^[q] (omega-omega0)^(-q) + polynomial part."""

    poles: tuple
    hol: tuple = ()
    dim: int = 1

    def __post_init__(self):
        omegas = [p.omega for p in self.poles]
        if len(set(omegas)) != len(omegas):
            raise ConfigError("poles must be pairwise distinct")
        hol = tuple(np.asarray(m, dtype=complex) for m in self.hol)
        object.__setattr__(self, "hol", hol)

    def __call__(self, omega: complex) -> np.ndarray:
        val = np.zeros((self.dim, self.dim), dtype=complex)
        for k, mat in enumerate(self.hol):
            val += mat * omega**k
        for p in self.poles:
            dw = omega - p.omega
            for q, mat in enumerate(p.laurent, start=1):
                val += mat / dw**q
        return val

    def eval_many(self, omega: np.ndarray) -> np.ndarray:
        """Vectorized evaluation: (n,) frequencies -> (n, d, d) values."""
        omega = np.asarray(omega, dtype=complex)
        val = np.zeros(omega.shape + (self.dim, self.dim), dtype=complex)
        for k, mat in enumerate(self.hol):
            val += omega[:, None, None] ** k * mat
        for p in self.poles:
            dw = (omega - p.omega)[:, None, None]
            for q, mat in enumerate(p.laurent, start=1):
                val += mat / dw**q
        return val

    def poles_in_strip(self, im_lo: float, im_hi: float) -> list:
        return [p for p in self.poles if im_lo < p.omega.imag < im_hi]


def random_rational_resolvent(rng: np.random.Generator, dim: int = 2,
                              n_poles: int = 3, max_order: int = 2,
                              im_range: Tuple[float, float] = (-2.2, -0.4),
                              re_range: Tuple[float, float] = (-2.0, 2.0),
                              min_sep: float = 0.3) -> RationalResolvent:
    """Random small resolvent family with well-separated poles."""
    omegas: list = []
    while len(omegas) < n_poles:
        w = complex(rng.uniform(*re_range), rng.uniform(*im_range))
        if all(abs(w - v) >= min_sep for v in omegas):
            omegas.append(w)
    poles = []
    for w in omegas:
        order = int(rng.integers(1, max_order + 1))
        laurent = tuple(
            (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
            / (2.0 ** q)
            for q in range(order)
        )
        poles.append(Pole(omega=w, order=order, laurent=laurent))
    hol = (0.2 * (rng.standard_normal((dim, dim))
                  + 1j * rng.standard_normal((dim, dim))),)
    return RationalResolvent(poles=tuple(poles), hol=hol, dim=dim)


# ---------------------------------------------------------------------------
# compactly supported forcing and its transform
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ForcingSpec:
    """Smooth bump (t(1-t))^k e^{alpha t} on (0,1) carrying a payload vector.

    The bump vanishes to order k at both endpoints, so the transform decays
    like |omega|^-(k+1) on horizontal lines.
    """

    k: int
    payload: np.ndarray
    alpha: float = 1.0

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("smoothness order k must be >= 1")
        object.__setattr__(self, "payload", np.asarray(self.payload, dtype=complex))

    def bump(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t > 0.0) & (t < 1.0)
        val = np.where(inside, (t * (1.0 - t)) ** self.k * np.exp(self.alpha * t), 0.0)
        return val

    def bump_coefficients(self) -> np.ndarray:
        """Coefficients c_j of (t(1-t))^k = sum_j c_j t^j (ascending)."""
        c = np.zeros(2 * self.k + 1)
        for i in range(self.k + 1):
            c[self.k + i] = math.comb(self.k, i) * (-1.0) ** i
        return c

    def scalar_transform_closed_form(self, omega: complex) -> complex:
        """Exact integral of e^{i omega t} bump(t) over (0,1) via the moment recurrence."""
        s = self.alpha + 1j * omega
        coeffs = self.bump_coefficients()
        moments = _exp_moments(s, len(coeffs) - 1)
        return complex(np.dot(coeffs, moments))

    def scalar_transform_many(self, omega: np.ndarray) -> np.ndarray:
        s = self.alpha + 1j * np.asarray(omega, dtype=complex)
        coeffs = self.bump_coefficients()
        return _exp_moments_many(s, len(coeffs) - 1) @ coeffs.astype(complex)


def _exp_moments(s: complex, jmax: int) -> np.ndarray:
    """Moments I_j = integral of t^j e^{s t} over [0,1], j = 0..jmax."""
    out = np.empty(jmax + 1, dtype=complex)
    if abs(s) < 0.5:
        # series sum_p s^p / (p! (j+p+1)), fast and cancellation-free
        for j in range(jmax + 1):
            term = 1.0 / (j + 1.0)
            total = term
            p = 0
            while abs(term) > 1e-18 * abs(total) and p < 60:
                p += 1
                term = term * s / p * (j + p) / (j + p + 1.0)
                total += term
            out[j] = total
        return out
    es = np.exp(s)
    out[0] = (es - 1.0) / s
    for j in range(1, jmax + 1):
        out[j] = (es - j * out[j - 1]) / s
    return out


def _exp_moments_many(s: np.ndarray, jmax: int) -> np.ndarray:
    """Vectorized moments: (n,) exponents -> (n, jmax+1)."""
    s = np.asarray(s, dtype=complex)
    out = np.empty(s.shape + (jmax + 1,), dtype=complex)
    small = np.abs(s) < 0.5
    if np.any(small):
        ss = s[small]
        for j in range(jmax + 1):
            term = np.full(ss.shape, 1.0 / (j + 1.0), dtype=complex)
            total = term.copy()
            for p in range(1, 60):
                term = term * ss / p * (j + p) / (j + p + 1.0)
                total += term
                if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
                    break
            out[small, j] = total
    big = ~small
    if np.any(big):
        sb = s[big]
        es = np.exp(sb)
        prev = (es - 1.0) / sb
        out[big, 0] = prev
        for j in range(1, jmax + 1):
            prev = (es - j * prev) / sb
            out[big, j] = prev
    return out


def forcing_transform(f: ForcingSpec, omega: complex, tol: float = 1e-10) -> np.ndarray:
    """F_hat(omega) = payload * integral of e^{i omega t} bump(t) dt, by adaptive quadrature."""
    def integrand(t):
        return np.exp(1j * omega * t) * f.bump(t)

    val, _ = quad(integrand, 0.0, 1.0, epsabs=1e-15, epsrel=tol,
                  limit=200, complex_func=True)
    return f.payload * val


class _ForcingTransform:
    """Closed-form transform of a forcing spec, scalar and batched."""

    def __init__(self, spec: ForcingSpec):
        self.spec = spec

    def __call__(self, omega: complex) -> np.ndarray:
        return self.spec.payload * self.spec.scalar_transform_closed_form(omega)

    def eval_many(self, omega: np.ndarray) -> np.ndarray:
        scal = self.spec.scalar_transform_many(omega)
        return scal[:, None] * self.spec.payload


def forcing_transform_callable(f: ForcingSpec) -> Callable[[complex], np.ndarray]:
    """Fast exact transform omega -> F_hat(omega) (closed-form moments)."""
    return _ForcingTransform(f)


# ---------------------------------------------------------------------------
# derivatives of holomorphic callables
# ---------------------------------------------------------------------------

def holomorphic_derivatives(fn: Callable, z0: complex, max_order: int,
                            radius: float = 5e-2, npts: int = 64) -> list:
    """Derivatives F^(r)(z0), r = 0..max_order, of a holomorphic callable.

    Uses the trapezoid rule on a Cauchy circle, which converges spectrally
    for holomorphic integrands.  Objects exposing ``derivative(z, r)`` (for
    example window polynomials) are differentiated exactly instead.
    """
    if max_order == 0:
        return [np.asarray(fn(z0))]
    if hasattr(fn, "derivative"):
        return [np.asarray(fn(z0))] + [
            np.asarray(fn.derivative(z0, r)) for r in range(1, max_order + 1)]
    theta = 2.0 * np.pi * np.arange(npts) / npts
    ring = np.exp(1j * theta)
    samples = np.stack([np.asarray(fn(z0 + radius * w), dtype=complex) for w in ring])
    out = []
    for r in range(max_order + 1):
        phase = np.exp(-1j * r * theta)
        coeff = np.tensordot(phase, samples, axes=(0, 0)) / npts
        out.append(math.factorial(r) * coeff / radius**r)
    return out


# ---------------------------------------------------------------------------
# residue dictionary and line integrals
# ---------------------------------------------------------------------------

def residue_time_term(pole: Pole, fn: Callable, t: float, *,
                      radius: float = 5e-2, npts: int = 64) -> np.ndarray:
    """Time-domain contribution of one pole against a holomorphic d-vector fn.

    i e^{-i omega0 t} sum_{q=1..m} sum_{r=0..q-1}
        (-i t)^(q-1-r) / ((q-1-r)! r!) Pi^[q] fn^(r)(omega0);
    a simple pole reduces to i e^{-i omega0 t} Pi^[1] fn(omega0).
    """
    m = pole.order
    ders = holomorphic_derivatives(fn, pole.omega, m - 1, radius=radius, npts=npts)
    total = np.zeros(pole.laurent[0].shape[0], dtype=complex)
    for q in range(1, m + 1):
        mat = pole.laurent[q - 1]
        for r in range(q):
            coeff = ((-1j * t) ** (q - 1 - r)
                     / (math.factorial(q - 1 - r) * math.factorial(r)))
            total += coeff * (mat @ ders[r])
    return 1j * np.exp(-1j * pole.omega * t) * total


_LINE_CLEARANCE = 1e-6


def _check_line_clear(resolvent: RationalResolvent, nu: float):
    for p in resolvent.poles:
        if abs(p.omega.imag + nu) < _LINE_CLEARANCE:
            raise ContourError(f"pole at {p.omega} sits on the line Im(omega) = {-nu}")


def _eval_fhat_many(f_hat: Callable, omega: np.ndarray) -> np.ndarray:
    if hasattr(f_hat, "eval_many"):
        return f_hat.eval_many(omega)
    return np.stack([np.asarray(f_hat(w), dtype=complex) for w in omega])


def _eval_g_many(g: Optional[Callable], omega: np.ndarray) -> np.ndarray:
    if g is None:
        return np.ones(omega.shape, dtype=complex)
    return np.asarray(g(omega), dtype=complex)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _gl_line_sum(batch: Callable, a: float, b: float, n_panels: int) -> np.ndarray:
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    sigma = (mid[:, None] + half * _GL_NODES[None, :]).ravel()
    wts = np.tile(half * _GL_WEIGHTS, n_panels)
    vals = batch(sigma)
    return np.tensordot(wts, vals, axes=(0, 0))


def line_integral(resolvent: RationalResolvent, f_hat: Callable, g: Optional[Callable],
                  nu: float, t: float, sigma_max: float = 200.0,
                  tol: float = 1e-9) -> Tuple[np.ndarray, float]:
    """Truncated inverse-Laplace integral on the shifted line Im(omega) = -nu.

    (1/2 pi) * integral over |sigma| <= sigma_max of
        e^{-i omega t} g(omega) R(omega) F_hat(omega),  omega = sigma - i nu,
    by composite Gauss-Legendre with panels sized to the e^{-i sigma t}
    oscillation (the integrand is analytic, so a ten-point rule per half
    wavelength converges spectrally; a doubled-resolution pass guards the
    tolerance).  Returns (value, truncation estimate): the estimate
    extrapolates the integrand envelope beyond the truncation radius from
    its measured algebraic decay.
    """
    if t <= 0:
        raise ConfigError("line integral defined for t > 0")
    _check_line_clear(resolvent, nu)

    def batch(sigma):
        w = sigma - 1j * nu
        rf = np.einsum("nij,nj->ni", resolvent.eval_many(w),
                       _eval_fhat_many(f_hat, w))
        return (np.exp(-1j * w * t) * _eval_g_many(g, w))[:, None] * rf / (2.0 * np.pi)

    plen = min(4.0, 8.0 / max(t, 1.0))
    n_panels = max(8, int(np.ceil(2.0 * sigma_max / plen)))
    coarse = _gl_line_sum(batch, -sigma_max, sigma_max, n_panels)
    fine = _gl_line_sum(batch, -sigma_max, sigma_max, 2 * n_panels)
    step = 2
    while float(np.linalg.norm(fine - coarse)) > max(tol, 1e-14) and step < 16:
        coarse = fine
        step *= 2
        fine = _gl_line_sum(batch, -sigma_max, sigma_max, step * 2 * n_panels)
    return fine, _tail_estimate(resolvent, f_hat, g, nu, t, sigma_max)


def _tail_estimate(resolvent: RationalResolvent, f_hat: Callable,
                   g: Optional[Callable], nu: float, t: float,
                   sigma_max: float) -> float:
    """Envelope bound for the omitted |sigma| > sigma_max contribution."""
    def envelope(sigma):
        w = np.array([sigma - 1j * nu])
        rf = np.einsum("nij,nj->ni", resolvent.eval_many(w),
                       _eval_fhat_many(f_hat, w))
        return float(np.linalg.norm(_eval_g_many(g, w)[0] * rf[0]))

    e_half = envelope(sigma_max / 2.0) + envelope(-sigma_max / 2.0)
    e_full = envelope(sigma_max) + envelope(-sigma_max)
    if e_full <= 0 or e_half <= 0:
        return 0.0
    p = np.log(e_half / e_full) / np.log(2.0)  # local algebraic decay exponent
    return float(np.exp(-nu * t) * e_full * sigma_max
                 / max(p - 1.0, 0.1) / (2.0 * np.pi))


def choose_sigma_max(resolvent: RationalResolvent, f_hat: Callable,
                     g: Optional[Callable], nu: float, t: float,
                     tol: float, start: float = 50.0,
                     cap: float = 6400.0) -> float:
    """Double the truncation radius until the envelope tail estimate < tol/10."""
    sigma = start
    while sigma < cap:
        if _tail_estimate(resolvent, f_hat, g, nu, t, sigma) < tol / 10.0:
            return sigma
        sigma *= 2.0
    return cap


def band_subtract(resolvent: RationalResolvent, f_hat: Callable,
                  g: Optional[Callable], nu1: float, nu2: float, t: float,
                  sigma_max: Optional[float] = None, tol: float = 1e-8) -> dict:
    """Contour subtraction: poles strictly between the two lines are isolated.

    difference = I_{nu1}(t) - I_{nu2}(t) equals the sum over poles with
    -nu2 < Im(omega) < -nu1 of their time-domain contributions.  With both
    lines traversed left to right, moving the contour downward encircles
    each strip pole in the negative direction, so each pole enters as minus
    its positively oriented circle term (verified here against quadrature;
    the residue oracle below uses exactly that orientation).  The reported
    mismatch is the norm of the difference of the two computations.
    """
    if not nu1 < nu2:
        raise ConfigError("need nu1 < nu2")
    _check_line_clear(resolvent, nu1)
    _check_line_clear(resolvent, nu2)
    if sigma_max is None:
        sigma_max = max(choose_sigma_max(resolvent, f_hat, g, nu, t, tol)
                        for nu in (nu1, nu2))
    i1, tail1 = line_integral(resolvent, f_hat, g, nu1, t, sigma_max, tol)
    i2, tail2 = line_integral(resolvent, f_hat, g, nu2, t, sigma_max, tol)
    difference = i1 - i2

    gfun = g if g is not None else (lambda w: 1.0)

    def windowed(w):
        return complex(gfun(w)) * np.asarray(f_hat(w))

    if g is not None and hasattr(g, "derivative"):
        class _WithDeriv:
            def __call__(self, w):
                return windowed(w)

            def derivative(self, w, r):
                # Leibniz rule for g * f_hat using spectral derivatives of f_hat
                ders_f = holomorphic_derivatives(f_hat, w, r)
                total = np.zeros_like(np.asarray(ders_f[0]))
                for j in range(r + 1):
                    total += (math.comb(r, j) * complex(g.derivative(w, j) if j else g(w))
                              * ders_f[r - j])
                return total
        wfun: Callable = _WithDeriv()
    else:
        wfun = windowed

    residue_sum = np.zeros(resolvent.dim, dtype=complex)
    for pole in resolvent.poles_in_strip(-nu2, -nu1):
        residue_sum -= residue_time_term(pole, wfun, t)
    mismatch = float(np.linalg.norm(difference - residue_sum))
    return {"difference": difference, "residue_sum": residue_sum,
            "mismatch": mismatch, "sigma_max": sigma_max,
            "truncation_estimate": tail1 + tail2}


# ---------------------------------------------------------------------------
# rank-one residues and detector amplitudes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixPencil:
    """P(omega) = P0 + (omega-center) P1 + (omega-center)^2 P2 (P2 optional)."""

    p0: np.ndarray
    p1: np.ndarray
    p2: Optional[np.ndarray] = None
    center: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "p0", np.asarray(self.p0, dtype=complex))
        object.__setattr__(self, "p1", np.asarray(self.p1, dtype=complex))
        if self.p2 is not None:
            object.__setattr__(self, "p2", np.asarray(self.p2, dtype=complex))

    @property
    def dim(self) -> int:
        return self.p0.shape[0]

    def __call__(self, omega: complex) -> np.ndarray:
        dw = omega - self.center
        val = self.p0 + dw * self.p1
        if self.p2 is not None:
            val = val + dw * dw * self.p2
        return val

    def derivative(self, omega: complex) -> np.ndarray:
        if self.p2 is None:
            return self.p1
        return self.p1 + 2.0 * (omega - self.center) * self.p2


def rank_one_residue(pencil: MatrixPencil, omega0: complex,
                     kernel_rtol: float = 1e-8) -> dict:
    """Residue projector of P(omega)^-1 at a simple pole omega0.

    Pi f = <f, v0> u0 / <P'(omega0) u0, v0> with u0 spanning ker P(omega0)
    and v0 spanning the adjoint kernel (pairing <x, y> = y^H x).  The
    excitation denominator is reported: small values flag nonnormal
    amplification.
    """
    mat = pencil(omega0)
    u_svd, s, vh = np.linalg.svd(mat)
    if s[0] == 0:
        raise StructureError("pencil vanishes identically at omega0")
    if s[-1] > kernel_rtol * s[0]:
        raise StructureError("kernel dimension 0 at omega0 (not a pole)")
    if len(s) > 1 and s[-2] <= kernel_rtol * s[0]:
        raise StructureError("kernel dimension > 1 at omega0")
    u0 = vh[-1].conj()
    v0 = u_svd[:, -1]
    denom = complex(np.vdot(v0, pencil.derivative(omega0) @ u0))
    if abs(denom) < 1e-12 * float(np.linalg.norm(pencil.derivative(omega0))):
        raise StructureError("vanishing excitation denominator (higher-order pole?)")
    projector = np.outer(u0, v0.conj()) / denom
    return {"projector": projector, "u0": u0, "v0": v0, "denom": denom}


def cauchy_residue(fn: Callable, omega0: complex, radius: float = 1e-3,
                   npts: int = 128) -> np.ndarray:
    """(1/2 pi i) contour integral of a matrix-valued fn around omega0."""
    theta = 2.0 * np.pi * np.arange(npts) / npts
    ring = np.exp(1j * theta)
    total = None
    for w in ring:
        val = np.asarray(fn(omega0 + radius * w), dtype=complex) * w
        total = val if total is None else total + val
    return radius * total / npts


def amplitude_pairing(f_at_pole: np.ndarray, u0: np.ndarray, v0: np.ndarray,
                      p1: np.ndarray, detector: np.ndarray) -> complex:
    """Scalar detector amplitude (<F_hat, v0> / <P1 u0, v0>) * detector(u0).

    Vanishes iff the detector annihilates the resonant state u0 or the data
    are orthogonal to the dual state v0.
    """
    denom = complex(np.vdot(v0, np.asarray(p1) @ np.asarray(u0)))
    if denom == 0:
        raise StructureError("excitation denominator vanishes")
    pairing = complex(np.vdot(v0, np.asarray(f_at_pole)))
    return pairing / denom * complex(np.dot(np.asarray(detector), np.asarray(u0)))


# ---------------------------------------------------------------------------
# localized pseudospectrum
# ---------------------------------------------------------------------------

@dataclass
class PseudospectrumModel:
    """Scalar toy model: resolvent norm profile hol + E+ E- / |q(omega)|.

    q defaults to the product over (omega - pole_j); c_q and r_q are the
    linear lower-bound constant and its validity radius for
    |q(omega)| >= c_q |omega - pole_j| near each zero.
    """

    poles: tuple
    e_plus: float = 1.0
    e_minus: float = 1.0
    hol_bound: float = 0.0
    q: Optional[Callable] = None
    c_q: Optional[float] = None
    r_q: Optional[float] = None

    def __post_init__(self):
        self.poles = tuple(complex(p) for p in self.poles)
        if self.q is None:
            self.q = self._default_q
        if self.c_q is None or self.r_q is None:
            c, r = self._default_constants()
            self.c_q = c if self.c_q is None else self.c_q
            self.r_q = r if self.r_q is None else self.r_q

    def _default_q(self, omega):
        omega = np.asarray(omega, dtype=complex)
        val = np.ones(omega.shape, dtype=complex)
        for p in self.poles:
            val = val * (omega - p)
        return val if val.shape else complex(val)

    def _default_constants(self) -> Tuple[float, float]:
        # c_* = min_j |q'(pole_j)|; quadratic remainder bounded by sup |q''|
        # over disks of radius half the minimal pole separation
        prods = []
        for j, pj in enumerate(self.poles):
            others = [pj - pk for k, pk in enumerate(self.poles) if k != j]
            prods.append(np.prod([abs(d) for d in others]) if others else 1.0)
        c_star = float(min(prods))
        if len(self.poles) == 1:
            return 0.5 * c_star, np.inf
        sep = min(abs(a - b) for i, a in enumerate(self.poles)
                  for b in self.poles[i + 1:])
        r_cap = 0.25 * sep
        sup_q2 = 0.0
        for pj in self.poles:
            for theta in np.linspace(0, 2 * np.pi, 16, endpoint=False):
                w = pj + r_cap * np.exp(1j * theta)
                ders = holomorphic_derivatives(self.q, w, 2, radius=0.1 * r_cap)
                sup_q2 = max(sup_q2, abs(ders[2]))
        r_q = min(r_cap, c_star / sup_q2) if sup_q2 > 0 else r_cap
        return 0.5 * c_star, float(r_q)

    def norm(self, omega):
        with np.errstate(divide="ignore"):
            return self.hol_bound + self.e_plus * self.e_minus / np.abs(self.q(omega))

    def disk_radius(self, eps: float) -> float:
        """Certified confinement radius C(eps)*eps around each pole."""
        if eps * self.hol_bound >= 1.0:
            raise HypothesisError("eps too large: holomorphic part saturates 1/eps")
        q_crit = eps * self.e_plus * self.e_minus / (1.0 - eps * self.hol_bound)
        return q_crit / self.c_q


def pseudospectrum_scan(model: PseudospectrumModel, re_grid: np.ndarray,
                        im_grid: np.ndarray, eps: float,
                        require_resolved: bool = False) -> dict:
    """Mark grid points where the model norm exceeds 1/eps; check confinement.

    Returns the boolean region mask, the certified disk radius, and whether
    every flagged point lies within that radius of some pole.  With
    require_resolved, a grid coarser than the predicted radius raises.
    """
    re_grid = np.asarray(re_grid, dtype=float)
    im_grid = np.asarray(im_grid, dtype=float)
    radius = model.disk_radius(eps)
    spacing = max(np.diff(re_grid).max(), np.diff(im_grid).max())
    if require_resolved and spacing > radius:
        raise ResolutionError(
            f"grid spacing {spacing:.3g} coarser than predicted radius {radius:.3g}")
    omega = re_grid[None, :] + 1j * im_grid[:, None]
    mask = model.norm(omega) > 1.0 / eps
    dist = np.full(omega.shape, np.inf)
    for p in model.poles:
        dist = np.minimum(dist, np.abs(omega - p))
    violations = int(np.count_nonzero(mask & (dist > radius)))
    return {"mask": mask, "radius": radius, "violations": violations,
            "inclusion_holds": violations == 0, "spacing": float(spacing),
            "n_flagged": int(np.count_nonzero(mask))}
