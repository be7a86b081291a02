"""Frequency-dependent dielectric model of layered biological tissue.

Cole-Cole permittivity per layer,

    eps(w) = eps_inf + sum_i d_eps_i / (1 + (jw tau_i)^(1-alpha_i)) + sigma/(jw eps0),

conductive-loss scaling (P_loss ~ sigma w^2), and a discretized
impedance-ladder two-port that cascades with the bare-coil ABCD to give
the tissue-modified link.

Ladder construction: each slab section of thickness t contributes a
longitudinal element equal to the eddy-current impedance the section
reflects into the link, Z_H = w^2 (mu0 sqrt(A))^2 sigma_eff t, and a
transverse plate admittance Y_V = sigma_eff t, with the complex
admittivity sigma_eff = jw eps0 eps(f).  Re{Z_H} grows as sigma w^2
(the eddy-loss law), both elements vanish with the section thickness,
and the whole ladder is passive and reciprocal.  This is an explicit
trend-level approximation; measured or FEM data can replace it
wholesale through :func:`import_override`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import netcore
from .errors import DegenerateNetworkError
from .netcore import TwoPortMatrix, cascade, identity_abcd, s_matrix

EPS_0 = 8.8541878128e-12  # F/m


@dataclass(frozen=True)
class ColeColeLayer:
    """One tissue layer: multi-term Cole-Cole dispersion plus static
    ionic conductivity, with a physical thickness.

    ``dispersions`` is a sequence of (delta_eps, tau_s, alpha) terms.
    """

    name: str
    eps_inf: float
    dispersions: tuple[tuple[float, float, float], ...]
    sigma_static: float
    thickness: float

    def __post_init__(self):
        if self.eps_inf < 1.0:
            raise ValueError(f"eps_inf must be >= 1, got {self.eps_inf}")
        if self.sigma_static < 0.0:
            raise ValueError("static conductivity must be >= 0")
        if not self.thickness > 0.0:
            raise ValueError("layer thickness must be > 0")
        terms = tuple((float(d), float(t), float(a)) for d, t, a in self.dispersions)
        for d_eps, tau, alpha in terms:
            if d_eps < 0.0 or tau <= 0.0:
                raise ValueError(f"bad dispersion term ({d_eps}, {tau}, {alpha})")
            if not 0.0 <= alpha < 1.0:
                raise ValueError(f"alpha must be in [0, 1), got {alpha}")
        object.__setattr__(self, "dispersions", terms)

    def scaled_sigma(self, factor: float) -> "ColeColeLayer":
        """Copy of this layer with sigma_static multiplied by ``factor``."""
        return ColeColeLayer(self.name, self.eps_inf, self.dispersions,
                             self.sigma_static * factor, self.thickness)


# Gabriel-style four-term dispersion parameters (literature values);
# any layer can be overridden by the user.
def skin_dry(thickness: float = 2e-3) -> ColeColeLayer:
    return ColeColeLayer("skin (dry)", 4.0, (
        (32.0, 7.23e-12, 0.00),
        (1100.0, 32.48e-9, 0.20),
        (0.0, 159.15e-6, 0.20),
        (0.0, 15.915e-3, 0.20),
    ), 0.0002, thickness)


def fat(thickness: float = 2e-3) -> ColeColeLayer:
    return ColeColeLayer("fat", 2.5, (
        (3.0, 7.96e-12, 0.20),
        (15.0, 15.92e-9, 0.10),
        (3.3e4, 159.15e-6, 0.05),
        (1.0e7, 15.915e-3, 0.01),
    ), 0.01, thickness)


def muscle(thickness: float = 10e-3) -> ColeColeLayer:
    return ColeColeLayer("muscle", 4.0, (
        (50.0, 7.23e-12, 0.10),
        (7000.0, 353.68e-9, 0.10),
        (1.2e6, 318.31e-6, 0.10),
        (2.5e7, 2.274e-3, 0.00),
    ), 0.2, thickness)


TISSUE_LIBRARY = {
    "skin": skin_dry,
    "fat": fat,
    "muscle": muscle,
}


@dataclass(frozen=True)
class TissueStack:
    """Ordered layer stack discretized into ``sections_per_layer``
    symmetric sections over a field cross-section ``face_area``.

    ``transverse_aspect`` scales the transverse (shunt) conduction path;
    ``eddy_coupling`` scales the longitudinal eddy-reflected impedance.
    Both default to the unit-aspect plate model and exist so measured
    attenuation can be calibrated in.
    """

    layers: tuple[ColeColeLayer, ...]
    sections_per_layer: int = 10
    face_area: float = (18e-3) ** 2
    transverse_aspect: float = 1.0
    eddy_coupling: float = 1.0

    def __post_init__(self):
        if not self.layers:
            raise ValueError("tissue stack needs at least one layer")
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.sections_per_layer < 1:
            raise ValueError("sections_per_layer must be >= 1")
        if not self.face_area > 0:
            raise ValueError("face_area must be > 0")
        if not self.transverse_aspect > 0:
            raise ValueError("transverse_aspect must be > 0")
        if not self.eddy_coupling > 0:
            raise ValueError("eddy_coupling must be > 0")

    @property
    def total_thickness(self) -> float:
        return sum(layer.thickness for layer in self.layers)

    def with_sections(self, sections: int) -> "TissueStack":
        return TissueStack(self.layers, sections, self.face_area,
                           self.transverse_aspect, self.eddy_coupling)


def default_implant_stack(face_area: float = (18e-3) ** 2,
                          sections_per_layer: int = 10) -> TissueStack:
    """2 mm skin / 2 mm fat / 10 mm muscle evaluation stack."""
    return TissueStack((skin_dry(2e-3), fat(2e-3), muscle(10e-3)),
                       sections_per_layer, face_area)


def complex_permittivity(layer: ColeColeLayer, f: float) -> complex:
    """Relative complex permittivity of the layer at frequency f."""
    if not f > 0:
        raise ValueError("frequency must be > 0")
    w = 2.0 * math.pi * f
    eps = complex(layer.eps_inf, 0.0)
    for d_eps, tau, alpha in layer.dispersions:
        eps += d_eps / (1.0 + (1j * w * tau) ** (1.0 - alpha))
    if layer.sigma_static > 0.0:
        eps += layer.sigma_static / (1j * w * EPS_0)
    return eps


def effective_conductivity(layer: ColeColeLayer, f: float) -> float:
    """Total loss conductivity sigma_eff = w eps0 (-Im eps), S/m."""
    return -2.0 * math.pi * f * EPS_0 * complex_permittivity(layer, f).imag


def loss_scaling(sigma: float, omega: float) -> float:
    """Tissue eddy-loss proportionality sigma * w^2 (geometry constant
    is the caller's)."""
    if sigma < 0.0:
        raise ValueError("conductivity must be >= 0")
    if not omega > 0:
        raise ValueError("angular frequency must be > 0")
    return sigma * omega * omega


def _section_abcd(z_through: complex, y_shunt: complex) -> TwoPortMatrix:
    # Symmetric T-section: Z/2 - Y - Z/2 (unit determinant, second-order
    # accurate discretization of the distributed slab).
    half = 0.5 * z_through
    a = 1.0 + half * y_shunt
    b = z_through + half * half * y_shunt
    return netcore.abcd_matrix(a, b, y_shunt, a)


def ladder_two_port(stack: TissueStack, f: float) -> TwoPortMatrix:
    """ABCD of the discretized tissue slab at frequency f.

    Each section of thickness t_s uses the complex admittivity
    sigma_eff = jw eps0 eps(f): a longitudinal eddy-reflected impedance
    Z = w^2 (mu0 sqrt(A))^2 sigma_eff t_s (so Re{Z} follows the
    sigma w^2 loss law) and a transverse plate admittance
    Y = sigma_eff t_s, assembled as symmetric T-sections so the
    thin-slab limit is the identity and the discretization converges
    quadratically.
    """
    if not f > 0:
        raise ValueError("frequency must be > 0")
    w = 2.0 * math.pi * f
    mu0 = 4e-7 * math.pi
    coupling = stack.eddy_coupling * mu0 * math.sqrt(stack.face_area)
    out = identity_abcd()
    for layer in stack.layers:
        sigma_eff = 1j * w * EPS_0 * complex_permittivity(layer, f)
        t_s = layer.thickness / stack.sections_per_layer
        z = (w * coupling) ** 2 * sigma_eff * t_s
        y = sigma_eff * t_s * stack.transverse_aspect
        section = _section_abcd(z, y)
        for _ in range(stack.sections_per_layer):
            out = cascade(out, section)
    return out


def modified_coil_abcd(t_coil: TwoPortMatrix, stack: TissueStack, f: float) -> TwoPortMatrix:
    """Tissue-modified transmission matrix: the RX side is embedded, so
    the slab ladder cascades after the bare-coil ABCD."""
    return cascade(t_coil, ladder_two_port(stack, f))


@dataclass(frozen=True)
class NetworkTable:
    """Frequency-indexed two-port data, linearly interpolated in the
    real/imaginary parts of each S entry.  Stands in for the analytic
    ladder wherever a tissue-modified network is expected."""

    frequencies: tuple[float, ...]
    s11: tuple[complex, ...]
    s12: tuple[complex, ...]
    s21: tuple[complex, ...]
    s22: tuple[complex, ...]
    zp: float = 50.0
    _f: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_f", np.asarray(self.frequencies, dtype=float))

    def at(self, f: float) -> TwoPortMatrix:
        grid = self._f
        if not grid[0] <= f <= grid[-1]:
            raise ValueError(
                f"frequency {f:g} Hz outside tabulated range "
                f"[{grid[0]:g}, {grid[-1]:g}] Hz")
        entries = []
        for column in (self.s11, self.s12, self.s21, self.s22):
            col = np.asarray(column, dtype=complex)
            re = float(np.interp(f, grid, col.real))
            im = float(np.interp(f, grid, col.imag))
            entries.append(complex(re, im))
        return s_matrix(*entries, self.zp, self.zp)

    def abcd_at(self, f: float) -> TwoPortMatrix:
        return netcore.s_to_abcd(self.at(f))


def import_override(record, reciprocity_tol: float = 1e-3) -> NetworkTable:
    """Build an interpolable network table from a parsed Touchstone
    record, rejecting non-monotone or non-reciprocal rows (the row index
    is named in the error)."""
    freqs = list(record.frequencies)
    if len(freqs) < 2:
        raise ValueError("need at least two frequency rows to interpolate")
    s11, s12, s21, s22 = [], [], [], []
    for i, f in enumerate(freqs):
        if i > 0 and f <= freqs[i - 1]:
            raise ValueError(f"row {i}: frequency axis not strictly increasing")
        a, b, c, d = record.s[i]
        scale = max(abs(b), abs(c), 1e-300)
        if abs(b - c) > reciprocity_tol * scale:
            raise ValueError(
                f"row {i}: |S12 - S21| = {abs(b - c):.3g} exceeds reciprocity "
                f"tolerance {reciprocity_tol:g}")
        s11.append(a)
        s12.append(b)
        s21.append(c)
        s22.append(d)
    return NetworkTable(tuple(freqs), tuple(s11), tuple(s12), tuple(s21), tuple(s22),
                        zp=record.resistance)


def layer_from_dict(data: dict) -> ColeColeLayer:
    """Layer override record: name, eps_inf, dispersions, sigma, thickness."""
    try:
        return ColeColeLayer(
            str(data["name"]),
            float(data["eps_inf"]),
            tuple((float(d), float(t), float(a)) for d, t, a in data["dispersions"]),
            float(data["sigma_s_per_m"]),
            float(data["thickness_m"]),
        )
    except KeyError as exc:
        raise ValueError(f"tissue layer record missing field {exc}") from exc


def layer_to_dict(layer: ColeColeLayer) -> dict:
    return {
        "name": layer.name,
        "eps_inf": layer.eps_inf,
        "dispersions": [list(term) for term in layer.dispersions],
        "sigma_s_per_m": layer.sigma_static,
        "thickness_m": layer.thickness,
    }
