"""Short-time Fourier transform on the grid and Moyal-identity diagnostics.

The STFT with window phi is

    V f(x, xi) = integral f(t) conj(phi(t - x)) exp(-i t xi) dt,

equivalently exp(-i x xi) (f * M_xi phi~)(x) with phi~(t) = conj(phi(-t)).
For fixed x the integrand is a windowed copy of f, so each column of the
time-frequency matrix is one forward transform; the full matrix is a single
batched FFT.  On the periodic grid the discrete Moyal identity

    <V_phi f, V_psi g> = 2 pi <psi, phi> <f, g>

holds exactly up to rounding, which the residual diagnostics verify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CostGateError
from .grid import Grid, SampledSignal, _check_same_grid, inner_product, weighted_lp_norm

__all__ = [
    "TimeFrequencyMatrix",
    "gaussian_window",
    "stft",
    "moyal_residual",
    "stft_l2_identity_ratio",
]

# Full matrices cost O(n^2 log n) time and O(n^2) memory; block-based norm
# computation is the intended path for anything larger.
MAX_STFT_SIZE = 4096


@dataclass(frozen=True)
class TimeFrequencyMatrix:
    """Dense STFT samples V[j, k] = V f(x_j, xi_k) on grid x grid."""

    grid: Grid
    values: np.ndarray
    window_l2: float

    def __post_init__(self):
        n = self.grid.n
        if self.values.shape != (n, n):
            raise ValueError(f"expected a {n} x {n} matrix, got {self.values.shape}")
        self.values.setflags(write=False)

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


def gaussian_window(grid: Grid) -> SampledSignal:
    """Default analysis window exp(-t^2 / 2)."""
    return SampledSignal.from_function(grid, lambda t: np.exp(-(t**2) / 2.0))


def stft(f: SampledSignal, window: SampledSignal) -> TimeFrequencyMatrix:
    """Dense STFT of f against the given window.

    Row j of the result fixes x_j and holds the forward transform of
    t -> f(t) conj(window(t - x_j)); the translated windows wrap
    periodically, so the window should decay inside the domain.
    """
    _check_same_grid(f, window, "stft")
    grid = f.grid
    n = grid.n
    if n > MAX_STFT_SIZE:
        raise CostGateError(
            f"dense STFT is gated at n <= {MAX_STFT_SIZE} (got n={n}); "
            "use the frequency-block norm path for larger grids"
        )
    wnorm = weighted_lp_norm(window, 2.0)
    if wnorm == 0.0:
        raise ValueError("stft window must be nonzero")

    # windowed[j, t] = f(t) * conj(window(t - x_j)) with periodic translation
    t_idx = np.arange(n)
    shift = (t_idx[None, :] - t_idx[:, None] + n // 2) % n
    windowed = f.samples[None, :] * np.conj(window.samples[shift])

    spectrum = grid.dx * np.fft.fftshift(
        np.fft.fft(np.fft.ifftshift(windowed, axes=1), axis=1), axes=1
    )
    return TimeFrequencyMatrix(grid, spectrum, wnorm)


def _planar_inner(a: TimeFrequencyMatrix, b: TimeFrequencyMatrix) -> complex:
    grid = a.grid
    return complex(grid.dx * grid.dxi * np.vdot(b.values, a.values))


def moyal_residual(
    f: SampledSignal,
    g: SampledSignal,
    phi: SampledSignal,
    psi: SampledSignal,
) -> float:
    """Normalized defect of the Moyal identity for the quadruple (f, g, phi, psi).

    Returns |<V_phi f, V_psi g> - 2 pi <psi, phi> <f, g>| divided by the
    product of the four L2 norms.
    """
    norms = [weighted_lp_norm(h, 2.0) for h in (f, g, phi, psi)]
    if min(norms) == 0.0:
        raise ValueError("moyal residual needs four nonzero signals")
    lhs = _planar_inner(stft(f, phi), stft(g, psi))
    rhs = 2.0 * math.pi * inner_product(psi, phi) * inner_product(f, g)
    return abs(lhs - rhs) / math.prod(norms)


def stft_l2_identity_ratio(f: SampledSignal, window: SampledSignal) -> float:
    """Ratio (integral |V f|^2)^(1/2) / ||f||_2; equals sqrt(2 pi) ||window||_2."""
    norm_f = weighted_lp_norm(f, 2.0)
    if norm_f == 0.0:
        raise ValueError("identity ratio needs a nonzero signal")
    tfm = stft(f, window)
    grid = f.grid
    planar = math.sqrt(grid.dx * grid.dxi * float(np.sum(np.abs(tfm.values) ** 2)))
    return planar / norm_f
