"""Planar spiral coil geometry: inductance, synthesis, parasitics.

Maps a target self-inductance to physical spiral layouts under an
implant area cap using the current-sheet approximation

    L = (C1 mu0 mur n^2 d_avg / 2) [ln(C2/phi) + C3 phi + C4 phi^2]

with the fill ratio phi = sqrt(A)/d_avg - 1, the average diameter
d_avg = (2r + n dr) cos(pi/seg) and the footprint
A = [w + 2 (r + n dr) cos(pi/seg)]^2.  Also estimates AC trace
resistance (skin effect) and the coupling coefficient between two
coaxial spirals (per-turn filament loops, Neumann integral).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MU_0 = 4e-7 * math.pi          # H/m
COPPER_RESISTIVITY = 1.68e-8   # ohm*m
DEFAULT_TRACE_THICKNESS = 35e-6      # m, 1 oz copper
DEFAULT_SUBSTRATE_THICKNESS = 25e-6  # m, polyimide film

CIRCULAR_SEG = math.inf


@dataclass(frozen=True)
class ShapeCoefficients:
    """Current-sheet coefficients for one polygon order.

    ``seg`` is the polygon order (>= 3); math.inf marks a circle.
    """

    name: str
    seg: float
    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self):
        if not (self.c1 > 0 and self.c2 > 0):
            raise ValueError("C1 and C2 must be > 0")
        if self.seg != CIRCULAR_SEG and self.seg < 3:
            raise ValueError(f"polygon order must be >= 3, got {self.seg}")

    @property
    def cos_factor(self) -> float:
        return 1.0 if self.seg == CIRCULAR_SEG else math.cos(math.pi / self.seg)


SQUARE = ShapeCoefficients("square", 4, 1.27, 2.07, 0.18, 0.13)
HEXAGONAL = ShapeCoefficients("hexagonal", 6, 1.09, 2.23, 0.00, 0.17)
OCTAGONAL = ShapeCoefficients("octagonal", 8, 1.07, 2.29, 0.00, 0.19)
CIRCULAR = ShapeCoefficients("circular", CIRCULAR_SEG, 1.00, 2.46, 0.00, 0.20)

SHAPES = {s.name: s for s in (SQUARE, HEXAGONAL, OCTAGONAL, CIRCULAR)}

# Modified-Wheeler coefficients (K1, K2), used as the cross-model
# consistency gate on synthesized candidates.  Circles borrow the
# octagon values (nearest tabulated polygon).
_WHEELER_K = (
    (SQUARE.cos_factor, 2.34, 2.75),
    (HEXAGONAL.cos_factor, 2.33, 3.82),
    (OCTAGONAL.cos_factor, 2.25, 3.55),
    (1.0, 2.25, 3.55),
)


def shape_for(seg: float) -> ShapeCoefficients:
    """Coefficients for an arbitrary polygon order.

    Known orders return the tabulated entry; anything else is linearly
    interpolated in cos(pi/seg) between the tabulated shapes (FEM-grade
    coefficients are out of scope, this is a documented approximation).
    """
    if seg == CIRCULAR_SEG:
        return CIRCULAR
    if seg < 3:
        raise ValueError(f"polygon order must be >= 3, got {seg}")
    for known in (SQUARE, HEXAGONAL, OCTAGONAL):
        if seg == known.seg:
            return known
    anchors = [SQUARE, HEXAGONAL, OCTAGONAL, CIRCULAR]
    x = math.cos(math.pi / seg)
    xs = [a.cos_factor for a in anchors]
    x = min(max(x, xs[0]), xs[-1])
    for lo, hi in zip(anchors, anchors[1:]):
        if x <= hi.cos_factor:
            t = (x - lo.cos_factor) / (hi.cos_factor - lo.cos_factor)
            return ShapeCoefficients(
                f"polygon-{seg:g}", seg,
                lo.c1 + t * (hi.c1 - lo.c1),
                lo.c2 + t * (hi.c2 - lo.c2),
                lo.c3 + t * (hi.c3 - lo.c3),
                lo.c4 + t * (hi.c4 - lo.c4),
            )
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class SpiralGeometry:
    """Layout of one planar spiral: shape, turn count n, initial radius
    r, per-turn radius increment dr, trace width w and thickness t."""

    shape: ShapeCoefficients
    n: int
    r: float
    dr: float
    w: float
    t: float = DEFAULT_TRACE_THICKNESS

    def __post_init__(self):
        if self.n < 1 or self.n != int(self.n):
            raise ValueError(f"turn count must be a positive integer, got {self.n}")
        if not self.w > 0:
            raise ValueError("trace width must be > 0")
        if self.dr < self.w:
            raise ValueError(f"radius increment {self.dr} overlaps trace width {self.w}")
        if not self.r > 0:
            raise ValueError("initial radius must be > 0")
        if not self.t > 0:
            raise ValueError("trace thickness must be > 0")

    @property
    def avg_diameter(self) -> float:
        return (2.0 * self.r + self.n * self.dr) * self.shape.cos_factor

    @property
    def area(self) -> float:
        edge = self.w + 2.0 * (self.r + self.n * self.dr) * self.shape.cos_factor
        return edge * edge

    @property
    def fill_ratio(self) -> float:
        return math.sqrt(self.area) / self.avg_diameter - 1.0


def avg_diameter(g: SpiralGeometry) -> float:
    return g.avg_diameter


def coil_area(g: SpiralGeometry) -> float:
    return g.area


def fill_ratio(g: SpiralGeometry) -> float:
    return g.fill_ratio


def inductance(g: SpiralGeometry, mu_r: float = 1.0) -> float:
    """Current-sheet self-inductance of the spiral.

    mu_r stays 1 for implants: tissue and polyimide are non-magnetic.
    """
    phi = g.fill_ratio
    if phi <= 0.0:
        raise ValueError(f"fill ratio must be > 0, got {phi}")
    c = g.shape
    bracket = math.log(c.c2 / phi) + c.c3 * phi + c.c4 * phi * phi
    return 0.5 * c.c1 * MU_0 * mu_r * g.n * g.n * g.avg_diameter * bracket


def modified_wheeler(g: SpiralGeometry) -> float:
    """Modified-Wheeler inductance estimate for the same layout.

    Uses the classic outer/inner diameters d_out = sqrt(A) and
    d_in = 2 d_avg - d_out; serves as the independent cross-check the
    synthesizer gates its candidates on.
    """
    d_avg = g.avg_diameter
    d_out = math.sqrt(g.area)
    d_in = 2.0 * d_avg - d_out
    if d_in <= 0.0:
        raise ValueError("winding fills past the center; Wheeler estimate invalid")
    rho = (d_out - d_in) / (d_out + d_in)
    x = g.shape.cos_factor
    ks = _WHEELER_K
    x = min(max(x, ks[0][0]), ks[-1][0])
    k1, k2 = ks[-1][1], ks[-1][2]
    for (x0, k1a, k2a), (x1, k1b, k2b) in zip(ks, ks[1:]):
        if x <= x1:
            t = 0.0 if x1 == x0 else (x - x0) / (x1 - x0)
            k1 = k1a + t * (k1b - k1a)
            k2 = k2a + t * (k2b - k2a)
            break
    return k1 * MU_0 * g.n * g.n * d_avg / (1.0 + k2 * rho)


@dataclass(frozen=True)
class FabConstraints:
    """Manufacturing limits the synthesizer must respect."""

    min_trace_width: float = 100e-6
    min_spacing: float = 100e-6
    max_area: float = (18e-3) ** 2
    substrate_thickness: float = DEFAULT_SUBSTRATE_THICKNESS

    def __post_init__(self):
        for name in ("min_trace_width", "min_spacing", "max_area", "substrate_thickness"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class NearMiss:
    """Best infeasible point seen during synthesis."""

    geometry: SpiralGeometry
    inductance: float
    rel_error: float


@dataclass(frozen=True)
class SynthesisResult:
    l_target: float
    candidates: tuple[SpiralGeometry, ...]
    nearest: NearMiss | None

    def __bool__(self) -> bool:
        return bool(self.candidates)


def synthesize(l_target: float, fab: FabConstraints, shape: ShapeCoefficients,
               *, n_max: int = 40, w_steps: int = 12, dr_steps: int = 12,
               trace_step: float = 50e-6, r_step: float = 100e-6,
               l_tol: float = 0.01, wheeler_tol: float = 0.05,
               trace_thickness: float = DEFAULT_TRACE_THICKNESS) -> SynthesisResult:
    """Grid-search spiral layouts hitting ``l_target`` inside the area cap.

    The grid is exhaustive and deterministic: n in [1, n_max], w and dr
    stepped at the fabrication resolution, r stepped at ``r_step``.
    Candidates must sit within ``l_tol`` of the target, fit the area cap
    and agree with the modified-Wheeler estimate within ``wheeler_tol``
    (cross-model sanity gate).  Results are ranked by descending area:
    for the same inductance a larger coil couples better.
    """
    if not l_target > 0:
        raise ValueError("target inductance must be > 0")
    cosf = shape.cos_factor
    edge_max = math.sqrt(fab.max_area)
    candidates: list[tuple[float, int, float, float, float, SpiralGeometry]] = []
    nearest: NearMiss | None = None

    for n in range(1, n_max + 1):
        for iw in range(w_steps):
            w = fab.min_trace_width + iw * trace_step
            for idr in range(dr_steps):
                dr = w + fab.min_spacing + idr * trace_step
                r_hi = (edge_max - w) / (2.0 * cosf) - n * dr
                if r_hi < r_step:
                    continue
                r = np.arange(r_step, r_hi + 0.5 * r_step, r_step)
                if r.size == 0:
                    continue
                d_avg = (2.0 * r + n * dr) * cosf
                edge = w + 2.0 * (r + n * dr) * cosf
                phi = edge / d_avg - 1.0
                with np.errstate(invalid="ignore"):
                    bracket = np.log(shape.c2 / phi) + shape.c3 * phi + shape.c4 * phi**2
                l_val = 0.5 * shape.c1 * MU_0 * n * n * d_avg * bracket
                ok_area = edge * edge <= fab.max_area * (1.0 + 1e-12)
                ok_model = l_val > 0.0
                rel = np.abs(l_val - l_target) / l_target
                usable = ok_area & ok_model
                for i in np.nonzero(usable)[0]:
                    err = float(rel[i])
                    if err <= l_tol:
                        g = SpiralGeometry(shape, n, float(r[i]), dr, w, trace_thickness)
                        try:
                            l_mw = modified_wheeler(g)
                        except ValueError:
                            continue
                        l_cs = float(l_val[i])
                        if abs(l_cs - l_mw) / l_cs > wheeler_tol:
                            continue
                        candidates.append((-g.area, n, w, dr, float(r[i]), g))
                    elif nearest is None or err < nearest.rel_error:
                        g = SpiralGeometry(shape, n, float(r[i]), dr, w, trace_thickness)
                        nearest = NearMiss(g, float(l_val[i]), err)

    candidates.sort(key=lambda item: item[:5])
    ranked = tuple(item[5] for item in candidates)
    if not ranked and nearest is None:
        # Area cap excludes even the smallest one-turn coil; report that
        # coil as the miss so the caller sees how far off the cap is.
        w = fab.min_trace_width
        g = SpiralGeometry(shape, 1, r_step, w + fab.min_spacing, w, trace_thickness)
        try:
            l_min = inductance(g)
            nearest = NearMiss(g, l_min, abs(l_min - l_target) / l_target)
        except ValueError:
            nearest = None
    return SynthesisResult(l_target, ranked, nearest if not ranked else None)


def trace_length(g: SpiralGeometry) -> float:
    """Total centre-line length of the winding (sum of turn perimeters)."""
    total = 0.0
    for i in range(g.n):
        radius = g.r + i * g.dr
        if g.shape.seg == CIRCULAR_SEG:
            total += 2.0 * math.pi * radius
        else:
            total += g.shape.seg * 2.0 * radius * math.sin(math.pi / g.shape.seg)
    return total


def skin_depth(f: float, resistivity: float = COPPER_RESISTIVITY) -> float:
    if not f > 0:
        raise ValueError("frequency must be > 0")
    return math.sqrt(resistivity / (math.pi * f * MU_0))


def ac_resistance(g: SpiralGeometry, f: float,
                  resistivity: float = COPPER_RESISTIVITY) -> float:
    """Series trace resistance at f with single-sided skin-effect crowding:
    R = rho l / (w t_eff), t_eff = delta (1 - exp(-t/delta))."""
    if f < 0:
        raise ValueError("frequency must be >= 0")
    length = trace_length(g)
    if f == 0.0:
        return resistivity * length / (g.w * g.t)
    delta = skin_depth(f, resistivity)
    t_eff = delta * (1.0 - math.exp(-g.t / delta))
    return resistivity * length / (g.w * t_eff)


def _equivalent_loop_radius(shape: ShapeCoefficients, circumradius: float) -> float:
    # Equal-area circular filament for one polygonal turn.
    if shape.seg == CIRCULAR_SEG:
        return circumradius
    seg = shape.seg
    return circumradius * math.sqrt(seg * math.sin(2.0 * math.pi / seg) / (2.0 * math.pi))


def _loop_mutual(a: float, b: float, d: float) -> float:
    """Neumann integral between coaxial circular filaments of radii a, b
    separated axially by d:

        M = (mu0 a b / 2) Int_0^2pi cos(psi) / sqrt(a^2+b^2+d^2-2ab cos psi) dpsi

    evaluated by the periodic trapezoid rule (spectrally accurate for
    the smooth separations this tool sees).
    """
    closeness = math.sqrt(a * b) / max(math.hypot(a - b, d), 1e-12)
    npts = int(min(max(256, 64 * math.ceil(closeness) * 8), 65536))
    psi = np.linspace(0.0, 2.0 * math.pi, npts, endpoint=False)
    integrand = np.cos(psi) / np.sqrt(a * a + b * b + d * d - 2.0 * a * b * np.cos(psi))
    return float(0.5 * MU_0 * a * b * np.mean(integrand) * 2.0 * math.pi)


def mutual_inductance(tx: SpiralGeometry, rx: SpiralGeometry, distance: float) -> float:
    """Mutual inductance of two coaxially aligned spirals by per-turn
    filament summation."""
    if not distance > 0:
        raise ValueError("distance must be > 0")
    total = 0.0
    for i in range(tx.n):
        a = _equivalent_loop_radius(tx.shape, tx.r + i * tx.dr)
        for j in range(rx.n):
            b = _equivalent_loop_radius(rx.shape, rx.r + j * rx.dr)
            total += _loop_mutual(a, b, distance)
    return total


def estimate_k(tx: SpiralGeometry, rx: SpiralGeometry, distance: float) -> float:
    """Coupling coefficient k = M / sqrt(L_tx L_rx), clamped to [0, 1)."""
    m = mutual_inductance(tx, rx, distance)
    k = m / math.sqrt(inductance(tx) * inductance(rx))
    return min(max(k, 0.0), 1.0 - 1e-12)


def candidate_record(g: SpiralGeometry, f0: float | None = None) -> dict:
    """Flat record of one candidate for export (lengths in metres)."""
    rec = {
        "shape": g.shape.name,
        "n": g.n,
        "r_m": g.r,
        "dr_m": g.dr,
        "w_m": g.w,
        "l_h": inductance(g),
        "area_m2": g.area,
    }
    if f0 is not None:
        rec["r_ac_ohm"] = ac_resistance(g, f0)
    return rec
