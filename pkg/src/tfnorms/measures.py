"""Finite atomic measures, their transforms, and flat-spectrum constructions.

A :class:`DiscreteMeasure` is sum_j w_j delta_{x_j} with exact transform
mu^(xi) = sum_j w_j exp(-i x_j xi).  The sign-flip recursion

    mu_j = mu_{j-1} + nu_{j-1} * delta_{N_j},
    nu_j = mu_{j-1} - nu_{j-1} * delta_{N_j},      N_j = 2^(j-1) N,

starting from mu_0 = nu_0 = delta_0 produces measures supported on 2^m
points with all weights +-1 and satisfies the exact flatness identity

    |mu_m^(xi)|^2 + |nu_m^(xi)|^2 = 2^(m+1)   for every xi,

so ||mu_m^||_inf <= 2^((m+1)/2) against total variation 2^m.  Locations are
integers, so atom merging compares exactly, never by float tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CostGateError
from .grid import SampledSignal

__all__ = [
    "DiscreteMeasure",
    "Normalization",
    "RudinShapiroPair",
    "dirac",
    "convolve_measures",
    "fourier_stieltjes",
    "rudin_shapiro",
    "rudin_shapiro_transforms",
    "disjointness_spacing",
    "measure_signal_convolve",
]

CONVOLUTION_ATOM_GATE = 10**7


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finite atomic measure with sorted, pairwise-distinct locations."""

    locations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        locations = np.asarray(self.locations, dtype=float)
        weights = np.asarray(self.weights, dtype=complex)
        if locations.ndim != 1 or locations.shape != weights.shape:
            raise ValueError("locations and weights must be matching 1-d arrays")
        if not np.all(np.isfinite(locations)):
            raise ValueError("atom locations must be finite")
        if not np.all(np.isfinite(weights)):
            raise ValueError("atom weights must be finite")
        # merge duplicates by exact location equality, drop zero weights
        order = np.argsort(locations, kind="stable")
        locations, weights = locations[order], weights[order]
        if locations.size:
            unique, inverse = np.unique(locations, return_inverse=True)
            merged = np.zeros(unique.size, dtype=complex)
            np.add.at(merged, inverse, weights)
            keep = merged != 0.0
            locations, weights = unique[keep], merged[keep]
        locations.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "locations", locations)
        object.__setattr__(self, "weights", weights)

    @property
    def atom_count(self) -> int:
        return self.locations.size

    @property
    def total_variation(self) -> float:
        return float(np.sum(np.abs(self.weights)))

    def scaled(self, factor: complex) -> "DiscreteMeasure":
        return DiscreteMeasure(self.locations, factor * self.weights)

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return DiscreteMeasure(
            np.concatenate([self.locations, other.locations]),
            np.concatenate([self.weights, other.weights]),
        )

    def __sub__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return self + other.scaled(-1.0)

    def is_atom_equal(self, other: "DiscreteMeasure") -> bool:
        return (
            self.atom_count == other.atom_count
            and np.array_equal(self.locations, other.locations)
            and np.array_equal(self.weights, other.weights)
        )

    def to_json_dict(self) -> dict:
        return {
            "atoms": [
                {"x": float(x), "re": float(w.real), "im": float(w.imag)}
                for x, w in zip(self.locations, self.weights)
            ]
        }


def dirac(a: float) -> DiscreteMeasure:
    """Unit mass at the point a."""
    return DiscreteMeasure(np.array([a]), np.array([1.0 + 0.0j]))


def convolve_measures(mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    """Bilinear extension of delta_a * delta_b = delta_{a+b}."""
    pairs = mu.atom_count * nu.atom_count
    if pairs > CONVOLUTION_ATOM_GATE:
        raise CostGateError(
            f"measure convolution gated at {CONVOLUTION_ATOM_GATE} atom pairs, got {pairs}"
        )
    locations = np.add.outer(mu.locations, nu.locations).ravel()
    weights = np.multiply.outer(mu.weights, nu.weights).ravel()
    return DiscreteMeasure(locations, weights)


def fourier_stieltjes(mu: DiscreteMeasure, xis: np.ndarray) -> np.ndarray:
    """Exact transform values sum_j w_j exp(-i x_j xi); no quadrature."""
    xis = np.atleast_1d(np.asarray(xis, dtype=float))
    return np.exp(-1j * np.outer(xis, mu.locations)) @ mu.weights


class Normalization(str, Enum):
    RAW = "raw"
    TOTAL_VARIATION = "total_variation"
    LP_ATOMS = "lp_atoms"


def _scale_factor(m: int, normalization: Normalization, p: float | None) -> float:
    if normalization is Normalization.RAW:
        return 1.0
    if normalization is Normalization.TOTAL_VARIATION:
        return 2.0**-m
    if p is None or not (1.0 <= p < 2.0):
        raise ValueError("lp_atoms normalization needs an exponent p in [1, 2)")
    return 2.0 ** (-m / p)


@dataclass(frozen=True, eq=False)
class RudinShapiroPair:
    """Companion measures from the sign-flip recursion at depth m."""

    mu: DiscreteMeasure
    nu: DiscreteMeasure
    depth: int
    base_spacing: int
    normalization: Normalization
    p: float | None = None

    @property
    def flatness_bound(self) -> float:
        """Bound on ||mu^||_inf implied by the exact identity."""
        return _scale_factor(self.depth, self.normalization, self.p) * 2.0 ** (
            (self.depth + 1) / 2.0
        )

    def identity_value(self) -> float:
        """The constant |mu^|^2 + |nu^|^2 equals at every frequency."""
        return _scale_factor(self.depth, self.normalization, self.p) ** 2 * 2.0 ** (
            self.depth + 1
        )


def rudin_shapiro(
    m: int,
    base_spacing: int = 1,
    normalization: Normalization | str = Normalization.RAW,
    p: float | None = None,
) -> RudinShapiroPair:
    """Run the sign-flip recursion to depth m with spacings N_j = 2^(j-1) N."""
    if m < 0:
        raise ValueError("depth m must be >= 0")
    if base_spacing < 1:
        raise ValueError("base spacing N must be a positive integer")
    normalization = Normalization(normalization)
    mu, nu = dirac(0.0), dirac(0.0)
    for j in range(1, m + 1):
        shift = dirac(float(2 ** (j - 1) * base_spacing))
        shifted = convolve_measures(nu, shift)
        mu, nu = mu + shifted, mu - shifted
    scale = _scale_factor(m, normalization, p)
    if scale != 1.0:
        mu, nu = mu.scaled(scale), nu.scaled(scale)
    return RudinShapiroPair(mu, nu, m, base_spacing, normalization, p)


def rudin_shapiro_transforms(
    m: int,
    base_spacing: int,
    xis: np.ndarray,
    normalization: Normalization | str = Normalization.RAW,
    p: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate mu_m^ and nu_m^ on a frequency sample set in O(m len(xis)).

    Runs the recursion on transform values directly,
    mu_j^ = mu_{j-1}^ + exp(-i N_j xi) nu_{j-1}^, avoiding the 2^m atom sum.
    """
    if m < 0:
        raise ValueError("depth m must be >= 0")
    normalization = Normalization(normalization)
    xis = np.atleast_1d(np.asarray(xis, dtype=float))
    mu_hat = np.ones(xis.size, dtype=complex)
    nu_hat = np.ones(xis.size, dtype=complex)
    for j in range(1, m + 1):
        phase = np.exp(-1j * (2 ** (j - 1) * base_spacing) * xis)
        shifted = phase * nu_hat
        mu_hat, nu_hat = mu_hat + shifted, mu_hat - shifted
    scale = _scale_factor(m, normalization, p)
    return scale * mu_hat, scale * nu_hat


def disjointness_spacing(k_halfwidth: float, m: int) -> int:
    """Smallest integer spacing N making the translates {-x + [-K, K]} of the
    depth-m support pairwise disjoint.

    Distinct support points differ by at least N, so disjointness needs
    N > 2K; the depth only affects how many translates there are.
    """
    if k_halfwidth <= 0:
        raise ValueError("interval half-width must be positive")
    if m < 0:
        raise ValueError("depth m must be >= 0")
    return int(math.floor(2.0 * k_halfwidth)) + 1


def measure_signal_convolve(mu: DiscreteMeasure, f: SampledSignal) -> SampledSignal:
    """sum_j w_j f(. - x_j) by exact index shifts.

    Atom locations must be grid aligned and the shifted essential supports
    must stay inside the domain; wraparound is an error, not a warning.
    """
    grid = f.grid
    dx = grid.dx
    steps = mu.locations / dx
    rounded = np.rint(steps)
    if np.max(np.abs(steps - rounded)) > 1e-9:
        raise ValueError("atom locations must be integer multiples of the grid spacing")
    shifts = rounded.astype(int)

    mags = np.abs(f.samples)
    peak = float(np.max(mags))
    out = np.zeros(grid.n, dtype=complex)
    if peak == 0.0:
        return SampledSignal(grid, out)
    essential = np.nonzero(mags > 1e-13 * peak)[0]
    lo, hi = int(essential[0]), int(essential[-1])
    for shift, w in zip(shifts, mu.weights):
        if lo + shift < 0 or hi + shift >= grid.n:
            raise ValueError(
                f"shift by {shift * dx:+.6g} pushes the signal support outside the domain"
            )
        if shift >= 0:
            out[shift:] += w * f.samples[: grid.n - shift]
        else:
            out[:shift] += w * f.samples[-shift:]
    return SampledSignal(grid, out)
