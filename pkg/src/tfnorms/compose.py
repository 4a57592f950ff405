"""Analytic functions applied to signals through norm-controlled power series.

The construction is local: around a point x0, pick a smooth cutoff tau that
is 1 near the origin, find a dilation lambda so the rescaled increment

    (f(x0 + x / lambda) - f(x0)) tau(x)

has spec-norm below radius / (2 c_hat), where c_hat is the measured
multiplication constant of the algebra, and then sum the series

    g(x) = F(f(x0)) tau_l(x) + sum_j c_j ((f(x) - f(x0)) tau_l(x))^j,

with tau_l(x) = tau(lambda (x - x0)).  On the cutoff plateau g equals F(f).
Local patches are glued with the telescoping partition h_j = tau_j
prod_{i<j} (1 - tau_i), and a global variant splits f into a small-tail part
(handled by the series at 0) plus a compactly supported part (handled by
gluing).  Truncation is certified by an explicit geometric tail bound; norm
convergence is gated on the measured constant with a 2x safety factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoverError, ToleranceNotReachedError
from .grid import Grid, NormSpec, SampledSignal, Space, upsample
from .norms import norm_value, partition_for
from .partition import FrequencyPartition, bump_profile
from .windows import PlateauWindow

__all__ = [
    "PowerSeries",
    "series_identity",
    "series_square",
    "series_reciprocal",
    "series_mobius",
    "series_expm1",
    "named_series",
    "dilation_difference_norm",
    "LocalPatch",
    "local_compose",
    "GlueResult",
    "glue_local",
    "reciprocal_on_compact",
    "global_compose",
    "point_ditkin_window",
]

DEFAULT_TERMS = 400
TAIL_TOLERANCE = 1e-8

# Local cutoff: 1 on [-1, 1], supported in [-2, 2], dilated per patch.
CUTOFF_PLATEAU = 1.0
CUTOFF_SUPPORT = 2.0


def _cutoff_samples(grid: Grid, center: float, lam: float) -> np.ndarray:
    return bump_profile(
        lam * (grid.points() - center), inner=CUTOFF_PLATEAU, outer=CUTOFF_SUPPORT
    )


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Truncated expansion F(z) = constant + sum_j c_j (z - center)^j.

    `complete` marks polynomial expansions whose stored coefficients are the
    whole function; only then is the tail beyond the last stored term exactly
    zero.  For truncated transcendental series the geometric tail bound

        |sum_{j>J} c_j w^j| <= max_j |c_j| r^j * (|w|/r)^(J+1) / (1 - |w|/r)

    is evaluated with r strictly between |w| and the radius; the stored range
    must contain the maximizing index, which holds for the shipped families.
    """

    name: str
    center: complex
    constant: complex
    coefficients: np.ndarray
    radius: float
    complete: bool = False

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("need at least one series coefficient")
        if not self.radius > 0:
            raise ValueError("convergence radius must be positive")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def max_terms(self) -> int:
        return self.coefficients.size

    def _tail_radius(self, w_abs: float) -> float:
        if math.isinf(self.radius):
            return 2.0 * w_abs if w_abs > 0 else 1.0
        return min(0.5 * (w_abs + self.radius), 0.999 * self.radius)

    def tail_bound(self, w_abs: float, terms: int) -> float:
        """Upper bound on the dropped tail for |w| <= w_abs after `terms` terms."""
        if w_abs == 0.0:
            return 0.0
        if self.complete and terms >= self.max_terms:
            return 0.0
        if w_abs >= self.radius:
            return math.inf
        r = self._tail_radius(w_abs)
        j = np.arange(1, self.max_terms + 1)
        envelope = float(np.max(np.abs(self.coefficients) * r**j))
        rho = w_abs / r
        return envelope * rho ** (terms + 1) / (1.0 - rho)

    def choose_truncation(self, w_abs: float, tol: float = TAIL_TOLERANCE) -> int:
        """Smallest term count whose tail bound is below tol."""
        if w_abs == 0.0:
            return 1
        if w_abs >= self.radius:
            raise ToleranceNotReachedError(
                f"series {self.name}: |w| = {w_abs:.4g} reaches the radius {self.radius:.4g}"
            )
        r = self._tail_radius(w_abs)
        rho = w_abs / r
        j = np.arange(1, self.max_terms + 1)
        envelope = float(np.max(np.abs(self.coefficients) * r**j))
        if envelope == 0.0:
            return 1
        needed = math.log(tol * (1.0 - rho) / envelope) / math.log(rho) - 1.0
        terms = max(1, int(math.ceil(needed)))
        if terms > self.max_terms:
            if self.complete:
                return self.max_terms
            raise ToleranceNotReachedError(
                f"series {self.name}: needs {terms} terms, only {self.max_terms} stored"
            )
        return terms

    def evaluate_increment(self, w: np.ndarray, terms: int) -> np.ndarray:
        """sum_{j=1..terms} c_j w^j by Horner evaluation."""
        c = self.coefficients[:terms]
        out = np.full_like(w, c[-1], dtype=complex)
        for coeff in c[-2::-1]:
            out = out * w + coeff
        return out * w

    def evaluate(self, z: np.ndarray, terms: int | None = None) -> np.ndarray:
        terms = self.max_terms if terms is None else terms
        return self.constant + self.evaluate_increment(np.asarray(z) - self.center, terms)

    def recenter(self, new_center: complex) -> "PowerSeries":
        """Taylor-shift the stored expansion to a new center inside the disk."""
        d = complex(new_center) - complex(self.center)
        if d == 0.0:
            return self
        if math.isfinite(self.radius):
            remaining = self.radius - abs(d)
            if remaining <= 0:
                raise ValueError(
                    f"new center is outside the convergence disk of {self.name}"
                )
        else:
            remaining = math.inf
        full = np.concatenate([[self.constant], self.coefficients])
        # synthetic division: full[i] becomes the i-th Taylor coefficient at d
        for i in range(full.size):
            for j in range(full.size - 2, i - 1, -1):
                full[j] += d * full[j + 1]
        return PowerSeries(
            self.name, new_center, full[0], full[1:], remaining, self.complete
        )


def series_identity(center: complex = 0.0) -> PowerSeries:
    return PowerSeries("identity", center, complex(center), np.array([1.0 + 0j]), math.inf, True)


def series_square(center: complex = 0.0) -> PowerSeries:
    c = complex(center)
    return PowerSeries("square", c, c * c, np.array([2.0 * c, 1.0 + 0j]), math.inf, True)


def series_reciprocal(center: complex) -> PowerSeries:
    """1/z expanded at a nonzero center; radius is the distance to the pole."""
    z0 = complex(center)
    if z0 == 0.0:
        raise ValueError("1/z has no expansion at 0")
    j = np.arange(1, DEFAULT_TERMS + 1)
    coeffs = (-1.0) ** j / z0 ** (j + 1)
    return PowerSeries("reciprocal", z0, 1.0 / z0, coeffs, abs(z0))


def series_mobius(center: complex = 0.0, scale: float = 4.0) -> PowerSeries:
    """z / (1 + z/scale) expanded at the center; pole at -scale."""
    z0 = complex(center)
    a = float(scale)
    denom = 1.0 + z0 / a
    if denom == 0.0:
        raise ValueError("expansion center sits on the pole")
    j = np.arange(1, DEFAULT_TERMS + 1)
    coeffs = (-1.0) ** (j - 1) / (denom * (a * denom) ** (j - 1)) * (1.0 - z0 / (a * denom))
    return PowerSeries("mobius", z0, z0 / denom, coeffs, abs(a + z0))


def series_expm1(center: complex = 0.0) -> PowerSeries:
    """exp(z) - 1 expanded at the center."""
    z0 = complex(center)
    j = np.arange(1, DEFAULT_TERMS + 1)
    log_fact = np.cumsum(np.log(j))
    coeffs = np.exp(z0) * np.exp(-log_fact)
    return PowerSeries("expm1", z0, np.exp(z0) - 1.0, coeffs, math.inf)


_SERIES_BUILDERS = {
    "identity": series_identity,
    "square": series_square,
    "mobius": series_mobius,
    "expm1": series_expm1,
}

_POINTWISE = {
    "identity": lambda z: z,
    "square": lambda z: z * z,
    "mobius": lambda z: z / (1.0 + z / 4.0),
    "expm1": lambda z: np.expm1(z),
    "reciprocal": lambda z: 1.0 / z,
}


def named_series(name: str, center: complex = 0.0) -> PowerSeries:
    if name == "reciprocal":
        return series_reciprocal(center)
    try:
        return _SERIES_BUILDERS[name](center)
    except KeyError:
        raise ValueError(f"unknown series {name!r}; choose from {sorted(_SERIES_BUILDERS) + ['reciprocal']}")


def pointwise_oracle(name: str):
    """Direct evaluation of the named function, for composition error checks."""
    return _POINTWISE[name]


def _snap_to_grid(grid: Grid, x0: float) -> tuple[int, float]:
    idx = int(round((x0 + grid.half_width) / grid.dx))
    idx = min(max(idx, 0), grid.n - 1)
    return idx, float(grid.points()[idx])


def _aligned_index(grid: Grid, x0: float) -> int | None:
    pos = (x0 + grid.half_width) / grid.dx
    idx = int(round(pos))
    if abs(pos - idx) <= 1e-9 and 0 <= idx < grid.n:
        return idx
    return None


def dilation_difference_norm(
    f: SampledSignal,
    x0: float,
    tau: SampledSignal,
    lam: float,
    spec: NormSpec,
    part: FrequencyPartition | None = None,
) -> float:
    """Spec-norm of (f(x0 + x / lam) - f(x0)) tau(x).

    f is evaluated off the grid by band-limited interpolation, so the
    spectral support assumptions behind the block norms survive the
    rescaling.  For integer lam and a grid-aligned x0 the interpolation is
    done exactly by zero-padded upsampling; other parameters fall back to a
    chirp-z evaluation of the interpolant.
    """
    if lam <= 0:
        raise ValueError("dilation parameter must be positive")
    grid = f.grid
    support = np.nonzero(np.abs(tau.samples) > 0.0)[0]
    if support.size == 0:
        return 0.0
    lo, hi = int(support[0]), int(support[-1])
    x = grid.points()
    start = x0 + x[lo] / lam
    stop = x0 + x[hi] / lam
    if start < -grid.half_width or stop >= grid.half_width:
        raise ValueError(
            "rescaled cutoff support leaves the domain: "
            f"[{start:.3g}, {stop:.3g}] vs [{-grid.half_width:.3g}, {grid.half_width:.3g})"
        )

    idx0 = _aligned_index(grid, x0)
    lam_int = int(round(lam))
    if idx0 is not None and abs(lam - lam_int) <= 1e-12 and lam_int >= 1:
        fine = upsample(f, lam_int)
        half = grid.n // 2
        first = lam_int * idx0 + lo - half
        values = fine.samples[first : first + (hi - lo + 1)]
        fx0 = complex(f.samples[idx0])
    else:
        values = resample_progression(f, start, grid.dx / lam, hi - lo + 1)
        fx0 = complex(resample_progression(f, x0, grid.dx, 1)[0])
    samples = np.zeros(grid.n, dtype=complex)
    samples[lo : hi + 1] = (values - fx0) * tau.samples[lo : hi + 1]
    return norm_value(SampledSignal(grid, samples), spec, part)


def resample_progression(
    f: SampledSignal, start: float, step: float, count: int
) -> np.ndarray:
    """Trigonometric interpolation of f along start + m*step, via chirp-z."""
    from scipy.signal import czt

    from .grid import fourier_forward

    grid = f.grid
    spectrum = fourier_forward(f).samples
    dxi = grid.dxi
    half = grid.n // 2
    # sum_k spectrum_k e^{i (start + m step)(k - half) dxi}, evaluated as a czt
    weighted = spectrum * np.exp(1j * start * dxi * np.arange(grid.n))
    transformed = czt(weighted, m=count, w=np.exp(1j * step * dxi), a=1.0 + 0.0j)
    m = np.arange(count)
    phase = np.exp(-1j * (start + m * step) * half * dxi)
    return (dxi / (2.0 * math.pi)) * phase * transformed


@dataclass(frozen=True, eq=False)
class LocalPatch:
    """One local composition around a grid point.

    The patch equals F(f) on the cutoff plateau (radius plateau_radius).
    glue_cutoff is a second, narrower bump supported inside that plateau;
    the telescoping partition must be built from these subordinate cutoffs,
    because outside its plateau a patch no longer represents F(f).
    """

    center: float
    lam: float
    values: SampledSignal
    cutoff: SampledSignal
    glue_cutoff: SampledSignal
    plateau_radius: float
    glue_radius: float
    truncation: int
    tail_bound: float
    increment_norm: float
    increment_sup: float
    series_name: str


def local_compose(
    f: SampledSignal,
    x0: float,
    series: PowerSeries,
    spec: NormSpec,
    c_hat: float,
    part: FrequencyPartition | None = None,
    lam_start: float = 1.0,
    tail_tol: float = TAIL_TOLERANCE,
) -> LocalPatch:
    """Compose F with f near x0, returning g = F(f) on the cutoff plateau.

    The dilation doubles until the rescaled increment norm falls below
    radius / (2 c_hat) (the measured algebra constant with a 2x safety
    factor) and the pointwise increment stays inside the disk.
    """
    if spec.space is not Space.MODULATION or not spec.in_algebra_regime():
        raise ValueError("composition requires a modulation spec in the algebra regime")
    if c_hat <= 0:
        raise ValueError("need a positive measured algebra constant")
    grid = f.grid
    if part is None:
        part = partition_for(grid)
    idx, x0g = _snap_to_grid(grid, x0)
    fx0 = complex(f.samples[idx])
    if abs(series.center - fx0) > 1e-9 * (1.0 + abs(fx0)):
        raise ValueError(
            f"series is centered at {series.center:.6g} but f(x0) = {fx0:.6g}"
        )
    threshold = series.radius / (2.0 * c_hat)
    lam_cap = 1.0 / (8.0 * grid.dx)  # keep the cutoff resolved on the grid
    base_tau = SampledSignal(grid, _cutoff_samples(grid, 0.0, 1.0).astype(complex))

    lam = float(lam_start)
    history = []
    while True:
        increment_norm = dilation_difference_norm(f, x0g, base_tau, lam, spec, part)
        tau_l = _cutoff_samples(grid, x0g, lam)
        w = (f.samples - fx0) * tau_l
        wsup = float(np.max(np.abs(w)))
        history.append((lam, increment_norm, wsup))
        if increment_norm < threshold and wsup < 0.95 * series.radius:
            break
        lam *= 2.0
        if lam > lam_cap:
            raise ToleranceNotReachedError(
                f"composition at x0 = {x0g:.4g}: increment norm still "
                f"{increment_norm:.4g} (threshold {threshold:.4g}) at the grid's "
                f"resolution budget; history = {history}"
            )

    terms = series.choose_truncation(wsup, tail_tol)
    tail = series.tail_bound(wsup, terms)
    values = series.constant * tau_l + series.evaluate_increment(w, terms)
    glue = bump_profile(
        lam * (grid.points() - x0g), inner=CUTOFF_PLATEAU / 2.0, outer=CUTOFF_PLATEAU
    )
    return LocalPatch(
        center=x0g,
        lam=lam,
        values=SampledSignal(grid, values),
        cutoff=SampledSignal(grid, tau_l.astype(complex)),
        glue_cutoff=SampledSignal(grid, glue.astype(complex)),
        plateau_radius=CUTOFF_PLATEAU / lam,
        glue_radius=CUTOFF_PLATEAU / (2.0 * lam),
        truncation=terms,
        tail_bound=tail,
        increment_norm=increment_norm,
        increment_sup=wsup,
        series_name=series.name,
    )


@dataclass(frozen=True, eq=False)
class GlueResult:
    values: SampledSignal
    partition_defect: float
    patch_count: int


def glue_local(
    f: SampledSignal, interval: tuple, patches: list
) -> GlueResult:
    """Combine local patches with the telescoping partition of unity.

    h_1 = sigma_1 and h_j = sigma_j (1 - sigma_1) ... (1 - sigma_{j-1}),
    built from each patch's subordinate glue cutoff so that every h_j is
    supported where its patch equals F(f).  The sum of the h_j equals 1
    wherever some glue plateau covers the point, so the glue plateaus must
    cover the interval.
    """
    a, b = float(interval[0]), float(interval[1])
    if not patches:
        raise CoverError("no patches supplied")
    ordered = sorted(patches, key=lambda p: p.center)
    covered = a
    for p in ordered:
        left, right = p.center - p.glue_radius, p.center + p.glue_radius
        if left > covered + 1e-12:
            raise CoverError(
                f"cover gap: plateaus reach {covered:.6g} but next starts {left:.6g}"
            )
        covered = max(covered, right)
    if covered < b - 1e-12:
        raise CoverError(f"plateaus end at {covered:.6g}, interval ends at {b:.6g}")

    grid = ordered[0].values.grid
    remainder = np.ones(grid.n)
    total = np.zeros(grid.n, dtype=complex)
    hsum = np.zeros(grid.n)
    for p in ordered:
        sigma = p.glue_cutoff.samples.real
        h = sigma * remainder
        total += h * p.values.samples
        hsum += h
        remainder = remainder * (1.0 - sigma)
    inside = (grid.points() >= a) & (grid.points() <= b)
    defect = float(np.max(np.abs(hsum[inside] - 1.0))) if np.any(inside) else 0.0
    return GlueResult(SampledSignal(grid, total), defect, len(ordered))


def _patch_cover(
    f: SampledSignal,
    interval: tuple,
    make_series,
    spec: NormSpec,
    c_hat: float,
    part: FrequencyPartition,
) -> list:
    """Greedy left-to-right patch placement until the interval is covered."""
    a, b = float(interval[0]), float(interval[1])
    patches = []
    x = a
    lam_hint = 1.0
    while True:
        idx, xg = _snap_to_grid(f.grid, x)
        patch = local_compose(
            f, xg, make_series(complex(f.samples[idx])), spec, c_hat, part, lam_start=lam_hint
        )
        patches.append(patch)
        lam_hint = patch.lam
        if patch.center + patch.glue_radius >= b:
            return patches
        x = patch.center + patch.glue_radius


def reciprocal_on_compact(
    f: SampledSignal,
    interval: tuple,
    spec: NormSpec,
    c_hat: float,
    part: FrequencyPartition | None = None,
) -> tuple:
    """g with f g = 1 on the interval, from glued local 1/z expansions."""
    grid = f.grid
    if part is None:
        part = partition_for(grid)
    a, b = float(interval[0]), float(interval[1])
    inside = (grid.points() >= a) & (grid.points() <= b)
    minimum = float(np.min(np.abs(f.samples[inside])))
    if minimum <= 0.0:
        raise ValueError("f vanishes on the interval; no reciprocal exists there")
    patches = _patch_cover(f, (a, b), series_reciprocal, spec, c_hat, part)
    glued = glue_local(f, (a, b), patches)
    return glued.values, glued, patches


def global_compose(
    f: SampledSignal,
    series: PowerSeries,
    spec: NormSpec,
    c_hat: float,
    part: FrequencyPartition | None = None,
) -> tuple:
    """Compose F (analytic near the closed range of f, F(0) = 0) with f globally.

    Splits f into a small-tail part handled by the series at 0 and a
    compactly supported part handled by glued local patches:
    g = (1 - tau0) g0 + tau0 g1.
    """
    if abs(series.center) > 0 or abs(series.constant) > 1e-14:
        raise ValueError("global composition needs a series at 0 with F(0) = 0")
    grid = f.grid
    if part is None:
        part = partition_for(grid)
    threshold = series.radius / (2.0 * c_hat)

    width = 1.0
    history = []
    while True:
        plateau = bump_profile(grid.points() / width, inner=1.0, outer=2.0)
        tail = SampledSignal(grid, (1.0 - plateau) * f.samples)
        tail_norm = norm_value(tail, spec, part)
        tail_sup = float(np.max(np.abs(tail.samples)))
        history.append((width, tail_norm, tail_sup))
        if tail_norm < threshold and tail_sup < 0.95 * series.radius:
            break
        width *= 2.0
        if 2.0 * width + 2.0 >= 0.9 * grid.half_width:
            raise ToleranceNotReachedError(
                f"tail norm never met the threshold {threshold:.4g}; history = {history}"
            )

    terms0 = series.choose_truncation(float(np.max(np.abs(tail.samples))), TAIL_TOLERANCE)
    g0 = series.evaluate_increment(tail.samples, terms0)

    support_radius = 2.0 * width  # cutoff plateau ends here
    tau0 = bump_profile(grid.points(), inner=support_radius, outer=support_radius + 2.0)
    patch_interval = (-support_radius - 2.0, support_radius + 2.0)
    patches = _patch_cover(f, patch_interval, series.recenter, spec, c_hat, part)
    glued = glue_local(f, patch_interval, patches)

    values = (1.0 - tau0) * g0 + tau0 * glued.values.samples
    diagnostics = {
        "tail_width": width,
        "tail_norm": tail_norm,
        "series_terms_tail": terms0,
        "patch_count": glued.patch_count,
        "partition_defect": glued.partition_defect,
    }
    return SampledSignal(grid, values), diagnostics, patches


def point_ditkin_window(
    f: SampledSignal,
    x0: float,
    spec: NormSpec,
    eps: float,
    base: PlateauWindow,
    part: FrequencyPartition | None = None,
    lam_start: float = 1.0,
    max_doublings: int = 24,
) -> tuple:
    """Shrinking dilations of a plateau window until ||(f - f(x0)) w|| < eps.

    The dilated window w(x) = base(lam (x - x0)) keeps the value 1 on a
    neighborhood of x0 of radius inner_radius / lam; returns
    (window, lam, residual).
    """
    if spec.space is not Space.MODULATION or spec.q != 1.0 or not 0.0 <= spec.s < 1.0:
        raise ValueError("the one-point window search needs a modulation spec with q = 1 and 0 <= s < 1")
    grid = f.grid
    if part is None:
        part = partition_for(grid)
    idx, x0g = _snap_to_grid(grid, x0)
    fx0 = complex(f.samples[idx])
    support_radius = base.support_radius

    lam = float(lam_start)
    history = []
    for _ in range(max_doublings):
        window = _dilated_window_samples(base, grid, x0g, lam, support_radius)
        residual = norm_value(
            SampledSignal(grid, (f.samples - fx0) * window), spec, part
        )
        history.append((lam, residual))
        if residual < eps:
            return SampledSignal(grid, window.astype(complex)), lam, residual
        lam *= 2.0
    raise ToleranceNotReachedError(
        f"residual never fell below {eps:.3g}; history = {history}"
    )


def _dilated_window_samples(
    base: PlateauWindow, grid: Grid, x0: float, lam: float, support_radius: float
) -> np.ndarray:
    """Samples of base(lam (x - x0)).

    For integer lam and grid-aligned x0 the scaled arguments are grid points
    of the base window, so the values are exact samples; otherwise the base
    window is interpolated.
    """
    x = grid.points()
    out = np.zeros(grid.n)
    scaled_lo = (base.center - support_radius) / lam + x0
    scaled_hi = (base.center + support_radius) / lam + x0
    inside = np.nonzero((x >= scaled_lo - grid.dx) & (x <= scaled_hi + grid.dx))[0]
    if inside.size == 0:
        return out

    idx0 = _aligned_index(grid, x0)
    lam_int = int(round(lam))
    if idx0 is not None and abs(lam - lam_int) <= 1e-12 and lam_int >= 1:
        src = lam_int * (inside - idx0) + grid.n // 2
        valid = (src >= 0) & (src < grid.n)
        out[inside[valid]] = base.window.samples.real[src[valid]]
        return out

    lo = int(inside[0])
    values = resample_progression(
        base.window, lam * (x[lo] - x0), lam * grid.dx, inside.size
    )
    out[inside] = np.clip(values.real, 0.0, None)
    return out
