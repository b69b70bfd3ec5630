"""Shared scene builders and oracles for the test suite.

Randomized scenes are built entirely from pure exponentials (damped modes,
exponential tails, leak floors, harmonic perturbations) so that every
weighted inner product has a closed form and the certified inequalities
can be checked at the continuum level with no quadrature slack.
"""
from __future__ import annotations

import numpy as np
import pytest

from ringlab import signal_model as sm


def make_setup(rng: np.random.Generator) -> sm.ObservationSetup:
    delta = float(rng.choice([0.5, 1.0]))
    n_delta = int(rng.integers(4, 13))  # T = n_delta * Delta > 3*Delta
    t0 = float(rng.uniform(0.0, 3.0))
    dt = delta / 10.0
    taper = str(rng.choice(["raised-cosine", "rectangular"]))
    return sm.ObservationSetup(t0=t0, t_len=n_delta * delta, delta=delta,
                               dt=dt, taper=taper)


def random_mode(rng: np.random.Generator) -> sm.Mode:
    omega = complex(rng.uniform(0.3, 3.0), -rng.uniform(0.02, 0.3))
    amp = float(rng.uniform(0.3, 2.0)) * np.exp(2j * np.pi * rng.random())
    return sm.Mode(freq=omega, amp=amp)


def random_residual_modes(rng: np.random.Generator) -> list:
    """Residual content as a mode list: exponential tail + leak + harmonics."""
    modes = [sm.Mode(freq=-1j * rng.uniform(0.05, 1.0), amp=rng.uniform(0.1, 1.0))]
    if rng.random() < 0.5:
        modes.append(sm.Mode(freq=0.0 + 0.0j, amp=rng.uniform(0.01, 0.2)))
    for _ in range(int(rng.integers(0, 3))):
        c, mu, phi = rng.uniform(0.05, 0.5), rng.uniform(0.0, 6.0), 2 * np.pi * rng.random()
        modes.append(sm.Mode(freq=-mu + 0.0j, amp=0.5 * c * np.exp(1j * phi)))
        modes.append(sm.Mode(freq=+mu + 0.0j, amp=0.5 * c * np.exp(-1j * phi)))
    return modes


def scaled_scene(rng: np.random.Generator, eps_target: float):
    """One-mode scene with residual rescaled to hit a target eps exactly.

    Returns (mode, residual_modes, setup, eps0, eps1, eps); all quantities
    evaluated with closed-form inner products.
    """
    setup = make_setup(rng)
    mode = random_mode(rng)
    residual = random_residual_modes(rng)
    y0_sq = sm.weighted_inner_exact([mode], [mode], setup).real
    if y0_sq <= 0:
        return scaled_scene(rng, eps_target)
    n0 = np.sqrt(y0_sq)
    r_sq = sm.weighted_inner_exact(residual, residual, setup).real
    shifted = [sm.Mode(freq=m.freq, amp=m.amp * np.exp(-1j * m.freq * setup.delta))
               for m in residual]
    rs_sq = sm.weighted_inner_exact(shifted, shifted, setup).real
    eps_now = max(np.sqrt(max(r_sq, 0.0)), np.sqrt(max(rs_sq, 0.0))) / n0
    if eps_now <= 0:
        return scaled_scene(rng, eps_target)
    scale = eps_target / eps_now
    residual = [sm.Mode(freq=m.freq, amp=m.amp * scale) for m in residual]
    eps0 = np.sqrt(max(r_sq, 0.0)) * scale / n0
    eps1 = np.sqrt(max(rs_sq, 0.0)) * scale / n0
    return mode, residual, setup, eps0, eps1, max(eps0, eps1)


def rayleigh_exact(mode: sm.Mode, residual_modes: list,
                   setup: sm.ObservationSetup) -> complex:
    """Closed-form shift Rayleigh quotient of the scene y = mode + residual."""
    y = [mode] + list(residual_modes)
    y_shift = [sm.Mode(freq=m.freq, amp=m.amp * np.exp(-1j * m.freq * setup.delta))
               for m in y]
    num = sm.weighted_inner_exact(y_shift, y, setup)
    den = sm.weighted_inner_exact(y, y, setup)
    return num / den


def fit_decay_order(sigma: np.ndarray, vals: np.ndarray, n_bins: int = 10) -> float:
    """Fitted algebraic decay order of an oscillatory magnitude profile.

    Bins log-spaced points into octaves, takes the max per bin (the
    envelope, insensitive to the oscillation nulls), and returns minus the
    log-log slope of the envelope.
    """
    sigma = np.asarray(sigma, dtype=float)
    vals = np.asarray(vals, dtype=float)
    edges = np.geomspace(sigma[0], sigma[-1], n_bins + 1)
    xs, ys = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mask = (sigma >= lo) & (sigma <= hi)
        if not np.any(mask):
            continue
        idx = np.argmax(vals[mask])
        xs.append(sigma[mask][idx])
        ys.append(vals[mask][idx])
    slope = np.polyfit(np.log(xs), np.log(ys), 1)[0]
    return -float(slope)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
