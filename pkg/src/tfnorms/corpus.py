"""The fixed 12-signal test corpus.

Spans band-limited, broadband, and oscillatory regimes: Gaussians at three
widths, three modulated Gaussians, compactly supported bumps at three widths,
a chirp, and two seeded random band-limited signals.  Deterministic for a
given (grid, seed).
"""

from __future__ import annotations

import numpy as np

from .grid import Grid, SampledSignal, fourier_inverse
from .partition import bump_profile

__all__ = ["corpus_names", "make_signal", "make_corpus", "random_band_limited"]

_GAUSSIAN_WIDTHS = {"gaussian-narrow": 0.5, "gaussian-unit": 1.0, "gaussian-wide": 2.0}
_MODULATION_FREQS = {"modgauss-2": 2.0, "modgauss-5": 5.0, "modgauss-8": 8.0}
_BUMP_WIDTHS = {"bump-2": 2.0, "bump-4": 4.0, "bump-8": 8.0}


def corpus_names() -> list:
    return (
        list(_GAUSSIAN_WIDTHS)
        + list(_MODULATION_FREQS)
        + list(_BUMP_WIDTHS)
        + ["chirp", "randband-0", "randband-1"]
    )


def random_band_limited(
    grid: Grid, seed: int, cutoff: float = 20.0
) -> SampledSignal:
    """Seeded random signal with spectrum confined to |xi| < cutoff."""
    rng = np.random.default_rng(seed)
    xi = grid.frequencies()
    envelope = np.exp(-((xi / cutoff) ** 2) * 4.0) * (np.abs(xi) < cutoff)
    coeffs = envelope * (rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n))
    f = fourier_inverse(SampledSignal(grid.dual(), coeffs))
    scale = np.sqrt(grid.dx * np.sum(np.abs(f.samples) ** 2))
    return f * (1.0 / scale)


def make_signal(name: str, grid: Grid, seed: int = 0) -> SampledSignal:
    x = grid.points()
    if name in _GAUSSIAN_WIDTHS:
        w = _GAUSSIAN_WIDTHS[name]
        return SampledSignal(grid, np.exp(-(x**2) / (2.0 * w**2)).astype(complex))
    if name in _MODULATION_FREQS:
        eta = _MODULATION_FREQS[name]
        return SampledSignal(grid, np.exp(1j * eta * x) * np.exp(-(x**2) / 2.0))
    if name in _BUMP_WIDTHS:
        w = _BUMP_WIDTHS[name]
        return SampledSignal(grid, bump_profile(x, inner=w / 2.0, outer=w).astype(complex))
    if name == "chirp":
        return SampledSignal(grid, np.exp(1j * x**2 / 4.0) * np.exp(-(x**2) / 50.0))
    if name == "randband-0":
        return random_band_limited(grid, seed=1000 + seed)
    if name == "randband-1":
        return random_band_limited(grid, seed=2000 + seed)
    raise ValueError(f"unknown corpus signal {name!r}")


def make_corpus(grid: Grid, seed: int = 0) -> list:
    """All twelve (name, signal) pairs."""
    return [(name, make_signal(name, grid, seed)) for name in corpus_names()]
