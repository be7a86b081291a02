"""End-to-end design pipeline, sweep engine and report rendering.

Order of play for one design run: optimal inductance -> symmetric or
asymmetric split -> spiral synthesis per side under the area caps ->
AC-resistance estimation -> tissue-modified transmission matrix ->
parameter re-extraction -> matching-network synthesis -> efficiency and
safety budget -> optional harvester sizing.  Any infeasible stage halts
with the stage name and its nearest-miss data.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import coil, efficiency, harvester, imn, netcore, spiral, tissue
from .coil import CoilPair, PortPair
from .errors import InfeasibleDesignError, UnmatchableError
from .netcore import TwoPortMatrix
from .tissue import NetworkTable, TissueStack

DEFAULT_SWEEP_POINTS = 1001


# -- SI-prefixed formatting: every human-readable number carries a unit --

_PREFIXES = (
    (1e9, "G"), (1e6, "M"), (1e3, "k"), (1.0, ""),
    (1e-3, "m"), (1e-6, "u"), (1e-9, "n"), (1e-12, "p"), (1e-15, "f"),
)


def si(value: float, unit: str, digits: int = 4) -> str:
    """Format a value with an SI prefix and unit, deterministically."""
    if value != value:  # NaN
        return f"nan {unit}"
    if value == 0.0:
        return f"0 {unit}"
    mag = abs(value)
    for scale, prefix in _PREFIXES:
        if mag >= scale:
            return f"{value / scale:.{digits}g} {prefix}{unit}"
    scale, prefix = _PREFIXES[-1]
    return f"{value / scale:.{digits}g} {prefix}{unit}"


# -- design spec ----------------------------------------------------------


@dataclass(frozen=True)
class CoilSideSpec:
    shape: spiral.ShapeCoefficients
    max_area: float

    def __post_init__(self):
        if not self.max_area > 0:
            raise ValueError("max coil area must be > 0")


@dataclass(frozen=True)
class TissueSettings:
    enabled: bool = True
    sections_per_layer: int = 10
    face_area: float | None = None      # None -> RX area cap
    layers: tuple[tissue.ColeColeLayer, ...] | None = None  # None -> default stack
    override: NetworkTable | None = None


@dataclass(frozen=True)
class HarvesterSettings:
    v_rx: float
    target_v_out: float
    n_range: tuple[int, ...]
    q_values: tuple[float, ...]
    max_charge_time: float
    tissue_z: complex
    i_load_avg: float = 1e-6
    c_store: float = harvester.DEFAULT_STORE_CAPACITOR
    v_t: float = harvester.BODY_THERMAL_VOLTAGE
    r_stage: float = 1e3
    c_stage: float = 1e-12


@dataclass(frozen=True)
class DesignSpec:
    """Validated input of one pipeline run."""

    f0: float
    ports: PortPair = PortPair()
    k: float | None = 0.1               # None -> estimate from geometry
    distance: float | None = None       # required when k is estimated
    r1_init: float = 0.5
    r2_init: float = 0.5
    l1_pinned: float | None = None
    tx: CoilSideSpec = field(default_factory=lambda: CoilSideSpec(spiral.SQUARE, (18e-3) ** 2))
    rx: CoilSideSpec = field(default_factory=lambda: CoilSideSpec(spiral.SQUARE, (18e-3) ** 2))
    fab: spiral.FabConstraints = field(default_factory=spiral.FabConstraints)
    tissue: TissueSettings = field(default_factory=TissueSettings)
    sar_p_tx_max: float | None = None
    sar_limit: float = 1.6
    harvest: HarvesterSettings | None = None

    def __post_init__(self):
        if not self.f0 > 0:
            raise ValueError("design frequency must be > 0")
        if self.k is not None and not (0.0 <= self.k < 1.0):
            raise ValueError(f"coupling coefficient must be in [0, 1), got {self.k}")
        if self.k is None and (self.distance is None or not self.distance > 0):
            raise ValueError("estimating k requires a positive coil distance")
        if self.r1_init < 0 or self.r2_init < 0:
            raise ValueError("initial coil resistances must be >= 0")
        if self.l1_pinned is not None and not self.l1_pinned > 0:
            raise ValueError("pinned L1 must be > 0")


def _shape_from_name(name: str) -> spiral.ShapeCoefficients:
    try:
        return spiral.SHAPES[name]
    except KeyError:
        raise ValueError(
            f"unknown coil shape {name!r}; choose from {sorted(spiral.SHAPES)}")


def spec_from_dict(data: dict) -> DesignSpec:
    """Build a DesignSpec from a parsed JSON document (schema in README)."""
    try:
        f0 = float(data["f0_hz"])
    except KeyError:
        raise ValueError("design spec needs f0_hz")
    ports_d = data.get("ports", {})
    ports = PortPair(float(ports_d.get("zp1_ohm", 50.0)), float(ports_d.get("zp2_ohm", 50.0)))

    k_raw = data.get("k", 0.1)
    k = None if k_raw == "estimate" else float(k_raw)
    distance = data.get("distance_m")
    distance = float(distance) if distance is not None else None

    def side(key: str, default_area: float) -> CoilSideSpec:
        d = data.get(key, {})
        return CoilSideSpec(_shape_from_name(d.get("shape", "square")),
                            float(d.get("max_area_m2", default_area)))

    fab_d = data.get("fab", {})
    fab = spiral.FabConstraints(
        min_trace_width=float(fab_d.get("min_trace_width_m", 100e-6)),
        min_spacing=float(fab_d.get("min_spacing_m", 100e-6)),
        max_area=float(data.get("tx", {}).get("max_area_m2", (18e-3) ** 2)),
        substrate_thickness=float(fab_d.get("substrate_thickness_m",
                                            spiral.DEFAULT_SUBSTRATE_THICKNESS)),
    )

    t_d = data.get("tissue", {})
    layers = None
    if t_d.get("layers") is not None:
        layers = tuple(tissue.layer_from_dict(item) for item in t_d["layers"])
    override = None
    if t_d.get("override_s2p"):
        from .touchstone import read_touchstone
        override = tissue.import_override(read_touchstone(t_d["override_s2p"]))
    t_settings = TissueSettings(
        enabled=bool(t_d.get("enabled", True)),
        sections_per_layer=int(t_d.get("sections_per_layer", 10)),
        face_area=(float(t_d["face_area_m2"]) if t_d.get("face_area_m2") is not None else None),
        layers=layers,
        override=override,
    )

    sar_d = data.get("sar", {})
    p_tx = sar_d.get("p_tx_max_w")

    harvest = None
    h_d = data.get("harvester")
    if h_d:
        n_min, n_max = int(h_d.get("n_min", 1)), int(h_d.get("n_max", 60))
        tz = h_d.get("tissue_z_ohm")
        tissue_z = complex(tz[0], tz[1]) if tz is not None else complex(ports.zp2, 0.0)
        harvest = HarvesterSettings(
            v_rx=float(h_d["v_rx_v"]),
            target_v_out=float(h_d["target_v_out_v"]),
            n_range=tuple(range(n_min, n_max + 1)),
            q_values=tuple(float(q) for q in h_d.get("q_values", [1.0])),
            max_charge_time=float(h_d.get("max_charge_time_s", 10.0)),
            tissue_z=tissue_z,
            i_load_avg=float(h_d.get("i_load_avg_a", 1e-6)),
            c_store=float(h_d.get("c_store_f", harvester.DEFAULT_STORE_CAPACITOR)),
            v_t=float(h_d.get("v_t_v", harvester.BODY_THERMAL_VOLTAGE)),
            r_stage=float(h_d.get("r_stage_ohm", 1e3)),
            c_stage=float(h_d.get("c_stage_f", 1e-12)),
        )

    return DesignSpec(
        f0=f0, ports=ports, k=k, distance=distance,
        r1_init=float(data.get("r1_init_ohm", 0.5)),
        r2_init=float(data.get("r2_init_ohm", 0.5)),
        l1_pinned=(float(data["l1_pinned_h"]) if data.get("l1_pinned_h") is not None else None),
        tx=side("tx", (18e-3) ** 2),
        rx=side("rx", (18e-3) ** 2),
        fab=fab,
        tissue=t_settings,
        sar_p_tx_max=(float(p_tx) if p_tx is not None else None),
        sar_limit=float(sar_d.get("sar_limit_w_per_kg", 1.6)),
        harvest=harvest,
    )


def load_design_spec(path: str | Path) -> DesignSpec:
    with open(path) as fh:
        return spec_from_dict(json.load(fh))


# -- link model (single source of truth for design and sweeps) ------------


@dataclass(frozen=True)
class LinkModel:
    """Everything needed to evaluate the link at any frequency."""

    ports: PortPair
    coils: CoilPair | None
    stack: TissueStack | None
    override: NetworkTable | None
    matching: imn.LSectionIMN | None
    f0: float

    def coil_abcd_at(self, f: float) -> TwoPortMatrix:
        if self.override is not None:
            return self.override.abcd_at(f)
        t = coil.coil_abcd(self.coils, f)
        if self.stack is not None:
            t = tissue.modified_coil_abcd(t, self.stack, f)
        return t

    def s_at(self, f: float, with_imn: bool = True) -> TwoPortMatrix:
        t = self.coil_abcd_at(f)
        if with_imn and self.matching is not None:
            t = imn.assemble_link(self.matching, t, f, self.ports).t_link
        return netcore.abcd_to_s(t, self.ports.zp1, self.ports.zp2)


# -- pipeline stages -------------------------------------------------------


def _synthesize_side(name: str, l_target: float, side: CoilSideSpec,
                     fab: spiral.FabConstraints) -> tuple[spiral.SpiralGeometry, int]:
    fab_side = replace(fab, max_area=side.max_area)
    result = spiral.synthesize(l_target, fab_side, side.shape)
    if not result.candidates:
        near = result.nearest
        detail = "no grid point reached the target"
        if near is not None:
            detail = (f"best miss: L = {si(near.inductance, 'H')} "
                      f"({near.rel_error * 100:.2f} % off) at n={near.geometry.n}, "
                      f"area {si(near.geometry.area * 1e6, '')} mm^2")
        raise InfeasibleDesignError(f"{name} coil synthesis",
                                    f"target {si(l_target, 'H')} infeasible; {detail}",
                                    nearest=near)
    return result.candidates[0], len(result.candidates)


@dataclass(frozen=True)
class CoilStage:
    geometry: spiral.SpiralGeometry
    inductance: float
    r_ac: float
    candidate_count: int
    area_cap: float


@dataclass(frozen=True)
class DesignReport:
    spec: DesignSpec
    l_opt: float
    l1_target: float
    l2_target: float
    tx_stage: CoilStage
    rx_stage: CoilStage
    coils: CoilPair
    k_source: str = "given"
    f_opt: float = 0.0
    s_max_bare: float = 0.0
    s21_bare_f0: float = 0.0
    stack: TissueStack | None = None
    extraction: coil.ExtractedParams | None = None
    imn_synthesis: imn.ImnSynthesis | None = None
    match_report: imn.MatchReport | None = None
    pte_report: efficiency.PteReport | None = None
    sar: efficiency.SarBudget | None = None
    harvest_result: harvester.DesignSpaceResult | None = None
    link: LinkModel | None = None

    def best_imn(self) -> imn.ImnSolution | None:
        if self.imn_synthesis and self.imn_synthesis.solutions:
            return self.imn_synthesis.solutions[0]
        return None

    def text(self) -> str:
        return render_report(self)

    def footer(self) -> dict[str, float | int | str]:
        out: dict[str, float | int | str] = {
            "f0_hz": self.spec.f0,
            "zp1_ohm": self.spec.ports.zp1,
            "zp2_ohm": self.spec.ports.zp2,
            "k": self.coils.k,
            "k_source": self.k_source,
            "l_opt_h": self.l_opt,
            "l1_h": self.coils.l1,
            "l2_h": self.coils.l2,
            "r1_ohm": self.coils.r1,
            "r2_ohm": self.coils.r2,
            "f_opt_hz": self.f_opt,
            "s_max": self.s_max_bare,
            "tx_turns": self.tx_stage.geometry.n,
            "rx_turns": self.rx_stage.geometry.n,
            "tx_area_m2": self.tx_stage.geometry.area,
            "rx_area_m2": self.rx_stage.geometry.area,
        }
        if self.extraction is not None:
            out.update({
                "l1_eff_h": self.extraction.l1, "l2_eff_h": self.extraction.l2,
                "r1_eff_ohm": self.extraction.r1, "r2_eff_ohm": self.extraction.r2,
                "k_eff": self.extraction.k,
            })
        best = self.best_imn()
        if best is not None:
            for label, elem in zip(("tx_series", "tx_shunt", "rx_series", "rx_shunt"),
                                   best.imn.elements):
                unit = "f" if elem.kind.is_capacitor else "h"
                out[f"imn_{label}_{unit}"] = elem.value
                out[f"imn_{label}_kind"] = elem.kind.value
            out["imn_case"] = best.imn.topology_case
            out["s11_link_db"] = best.s11_db
            out["s22_link_db"] = best.s22_db
            out["s21_link_db"] = best.s21_db
        if self.pte_report is not None:
            out["pte"] = self.pte_report.pte
            out["pte_max"] = self.pte_report.pte_max
            out["k_r"] = self.pte_report.k_r
            out["gamma"] = self.pte_report.gamma
        if self.sar is not None:
            out["p_tx_max_w"] = self.sar.p_tx_max
            out["pdl_max_w"] = self.sar.pdl_max
        if self.harvest_result is not None and self.harvest_result.chosen:
            chosen = self.harvest_result.chosen
            out["harvester_n"] = chosen.n_stages
            out["harvester_q"] = chosen.q_boost
        return out


def run_design(spec: DesignSpec) -> DesignReport:
    """Execute the full design flow for one spec."""
    ports = spec.ports
    k_value = spec.k if spec.k is not None else 0.1
    k_source = "given" if spec.k is not None else "estimated"
    passes = 1 if spec.k is not None else 2

    tx_stage = rx_stage = None
    l_opt_val = l1_target = l2_target = 0.0
    for _ in range(passes):
        l_opt_val = coil.l_opt(spec.f0, spec.r1_init, spec.r2_init, ports, k_value)
        if spec.l1_pinned is not None:
            l1_target = spec.l1_pinned
            l2_target = coil.asymmetric_partner(l_opt_val, l1_target)
        else:
            l1_target = l2_target = l_opt_val
        tx_geom, tx_count = _synthesize_side("tx", l1_target, spec.tx, spec.fab)
        rx_geom, rx_count = _synthesize_side("rx", l2_target, spec.rx, spec.fab)
        tx_stage = CoilStage(tx_geom, spiral.inductance(tx_geom),
                             spiral.ac_resistance(tx_geom, spec.f0), tx_count,
                             spec.tx.max_area)
        rx_stage = CoilStage(rx_geom, spiral.inductance(rx_geom),
                             spiral.ac_resistance(rx_geom, spec.f0), rx_count,
                             spec.rx.max_area)
        if spec.k is None:
            k_value = spiral.estimate_k(tx_geom, rx_geom, spec.distance)

    coils = CoilPair(tx_stage.inductance, rx_stage.inductance,
                     tx_stage.r_ac, rx_stage.r_ac, k_value)
    f_opt_val = coil.f_opt(coils, ports)
    s_max_val = coil.s_max(coils, ports)
    s21_bare = coil.s21_mag(coils, ports, spec.f0)

    stack = None
    if spec.tissue.override is None and spec.tissue.enabled:
        face = spec.tissue.face_area if spec.tissue.face_area is not None else spec.rx.max_area
        if spec.tissue.layers is not None:
            stack = TissueStack(spec.tissue.layers, spec.tissue.sections_per_layer, face)
        else:
            stack = tissue.default_implant_stack(face, spec.tissue.sections_per_layer)

    model = LinkModel(ports, coils, stack, spec.tissue.override, None, spec.f0)
    t_eff = model.coil_abcd_at(spec.f0)
    extraction = coil.extract_params(
        netcore.abcd_to_s(t_eff, ports.zp1, ports.zp2), spec.f0)

    try:
        synthesis = imn.synthesize_imn(t_eff, ports, spec.f0)
    except UnmatchableError as exc:
        raise InfeasibleDesignError("imn synthesis", str(exc)) from exc
    if not synthesis.solutions and not synthesis.already_matched:
        raise InfeasibleDesignError(
            "imn synthesis", "no positive-element L-section matches both ports")

    if synthesis.solutions:
        best = synthesis.solutions[0]
        model = replace(model, matching=best.imn)
        link = imn.assemble_link(best.imn, t_eff, spec.f0, ports)
        match_rep = imn.verify_match(link)
        s_link = netcore.abcd_to_s(link.t_link, ports.zp1, ports.zp2)
        s21_link = s_link.m21
    else:  # already matched: the bare network is the link
        match_rep = imn.verify_match(imn.LinkNetwork(t_eff, spec.f0, ports))
        s21_link = netcore.abcd_to_s(t_eff, ports.zp1, ports.zp2).m21

    max_eff = efficiency.pte_max(netcore.abcd_to_s(t_eff, ports.zp1, ports.zp2))
    pte_val = efficiency.pte_link(s21_link, ports)
    pte_rep = efficiency.PteReport(pte_val, max_eff.pte_max, max_eff.k_r,
                                   efficiency.gamma_factor(ports), spec.f0)

    sar = None
    if spec.sar_p_tx_max is not None:
        sar = efficiency.sar_constrained_pdl(spec.sar_p_tx_max, min(pte_val, 1.0),
                                             spec.sar_limit)

    harvest_result = None
    if spec.harvest is not None:
        h = spec.harvest
        constraints = harvester.HarvesterConstraints(
            n_range=h.n_range, q_range=h.q_values,
            max_charge_time=h.max_charge_time, tissue_z=h.tissue_z,
            f0=spec.f0, c_store=h.c_store, i_load_avg=h.i_load_avg, v_t=h.v_t)
        harvest_result = harvester.design_space(
            h.v_rx, h.target_v_out, constraints,
            harvester.stage_scaling_model(h.r_stage, h.c_stage))
        if harvest_result.chosen is None:
            misses = "; ".join(
                f"{label}: n={p.n} q={p.q:g} v_out={si(p.v_out, 'V')} "
                f"tau={si(p.charge_time, 's')}"
                for label, p in harvest_result.nearest.items())
            raise InfeasibleDesignError("harvester sizing",
                                        f"no (n, q) point meets the targets; {misses}",
                                        nearest=harvest_result.nearest)

    return DesignReport(
        spec=spec, l_opt=l_opt_val, l1_target=l1_target, l2_target=l2_target,
        tx_stage=tx_stage, rx_stage=rx_stage, coils=coils, k_source=k_source,
        f_opt=f_opt_val, s_max_bare=s_max_val, s21_bare_f0=s21_bare,
        stack=stack, extraction=extraction, imn_synthesis=synthesis,
        match_report=match_rep, pte_report=pte_rep, sar=sar,
        harvest_result=harvest_result, link=model,
    )


# -- report rendering ------------------------------------------------------


def _db(mag: float) -> float:
    return 20.0 * math.log10(max(mag, 1e-300))


def render_report(report: DesignReport) -> str:
    spec = report.spec
    lines: list[str] = []
    add = lines.append
    add("inductive link design report")
    add("============================")
    add("")
    add("[inputs]")
    add(f"  design frequency     {si(spec.f0, 'Hz')}")
    add(f"  port impedances      {si(spec.ports.zp1, 'ohm')} / {si(spec.ports.zp2, 'ohm')}")
    add(f"  coupling coefficient {report.coils.k:.6g} ({report.k_source})")
    add(f"  initial resistances  {si(spec.r1_init, 'ohm')} / {si(spec.r2_init, 'ohm')}")
    add("")
    add("[inductance]")
    add(f"  L_opt                {si(report.l_opt, 'H')}")
    if spec.l1_pinned is not None:
        add(f"  L1 (pinned)          {si(report.l1_target, 'H')}")
        add(f"  L2 = L_opt^2/L1      {si(report.l2_target, 'H')}")
    else:
        add(f"  L1 = L2 = L_opt      {si(report.l1_target, 'H')}")
    add("")
    for label, stage in (("tx coil", report.tx_stage), ("rx coil", report.rx_stage)):
        g = stage.geometry
        add(f"[{label}]")
        add(f"  shape                {g.shape.name}")
        add(f"  turns                {g.n}")
        add(f"  initial radius       {si(g.r, 'm')}")
        add(f"  radius increment     {si(g.dr, 'm')}")
        add(f"  trace width          {si(g.w, 'm')}")
        add(f"  inductance           {si(stage.inductance, 'H')}")
        add(f"  footprint            {stage.geometry.area * 1e6:.4g} mm^2 "
            f"(cap {stage.area_cap * 1e6:.4g} mm^2)")
        add(f"  AC resistance        {si(stage.r_ac, 'ohm')}")
        add(f"  candidates in band   {stage.candidate_count}")
        add("")
    add("[bare link]")
    add(f"  f_opt                {si(report.f_opt, 'Hz')}")
    add(f"  peak |S21|           {report.s_max_bare:.6g} ({_db(report.s_max_bare):.4g} dB)")
    add(f"  |S21| at f0          {report.s21_bare_f0:.6g} ({_db(report.s21_bare_f0):.4g} dB)")
    add("")
    if report.stack is not None:
        add("[tissue channel]")
        for layer in report.stack.layers:
            add(f"  layer                {layer.name}: {si(layer.thickness, 'm')}, "
                f"sigma {si(layer.sigma_static, 'S/m')}")
        add(f"  sections per layer   {report.stack.sections_per_layer}")
        add(f"  face area            {report.stack.face_area * 1e6:.4g} mm^2")
        add("")
    if report.extraction is not None:
        ex = report.extraction
        add("[effective coil parameters (re-extracted)]")
        add(f"  L1'                  {si(ex.l1, 'H')}")
        add(f"  L2'                  {si(ex.l2, 'H')}")
        add(f"  R1'                  {si(ex.r1, 'ohm')}")
        add(f"  R2'                  {si(ex.r2, 'ohm')}")
        add(f"  k'                   {ex.k:.6g}")
        if not ex.valid:
            add(f"  flagged non-physical: {', '.join(ex.issues)}")
        add("")
    best = report.best_imn()
    if best is not None:
        add("[matching network]")
        add(f"  topology case        {best.imn.topology_case}")
        for label, elem in zip(("tx series", "tx shunt ", "rx series", "rx shunt "),
                               best.imn.elements):
            unit = "F" if elem.kind.is_capacitor else "H"
            add(f"  {label}            {elem.kind.value}: {si(elem.value, unit)}")
        add(f"  solutions found      {len(report.imn_synthesis.solutions)}")
        add(f"  |S11| at f0          {best.s11_db:.4g} dB")
        add(f"  |S22| at f0          {best.s22_db:.4g} dB")
        add(f"  |S21| at f0          {best.s21_db:.4g} dB")
        add("")
    elif report.imn_synthesis is not None and report.imn_synthesis.already_matched:
        add("[matching network]")
        add("  ports already matched; no finite L-section required")
        add("")
    if report.pte_report is not None:
        p = report.pte_report
        add("[efficiency]")
        add(f"  PTE at f0            {p.pte * 100:.4g} %")
        add(f"  PTE_max              {p.pte_max * 100:.4g} %")
        add(f"  K_r                  {p.k_r:.6g}")
        add(f"  gamma                {p.gamma:.6g}")
        add("")
    if report.sar is not None:
        add("[sar budget]")
        add(f"  SAR limit            {report.sar.sar_limit:.4g} W/kg")
        add(f"  max TX power         {si(report.sar.p_tx_max, 'W')}")
        add(f"  max delivered power  {si(report.sar.pdl_max, 'W')}")
        add("")
    if report.harvest_result is not None and report.harvest_result.chosen is not None:
        chosen = report.harvest_result.chosen
        point = next(p for p in report.harvest_result.table
                     if p.n == chosen.n_stages and p.q == chosen.q_boost)
        add("[harvester]")
        add(f"  stages               {chosen.n_stages}")
        add(f"  boost Q              {chosen.q_boost:.4g}")
        add(f"  V_out                {si(point.v_out, 'V')}")
        add(f"  R_rect               {si(point.r_rect, 'ohm')}")
        add(f"  C_rect               {si(point.c_rect, 'F')}")
        add(f"  charge time          {si(point.charge_time, 's')}")
        add(f"  grid points swept    {len(report.harvest_result.table)}")
        add("")
    add("[footer]")
    for key, value in report.footer().items():
        if isinstance(value, float):
            add(f"{key}={value:.12g}")
        else:
            add(f"{key}={value}")
    return "\n".join(lines) + "\n"


# -- frequency sweeps ------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    f: float
    s11_db: float
    s21_db: float
    s22_db: float
    pte_pct: float
    pte_max_pct: float


SWEEP_HEADER = ("f_hz", "s11_db", "s21_db", "s22_db", "pte_pct", "pte_max_pct")


def frequency_grid(f_start: float, f_stop: float, points: int, scale: str = "log") -> list[float]:
    if not (f_start > 0 and f_stop > f_start):
        raise ValueError("need 0 < f_start < f_stop")
    if points < 2:
        raise ValueError("need at least 2 sweep points")
    if scale == "log":
        return [float(f) for f in np.geomspace(f_start, f_stop, points)]
    if scale == "linear":
        return [float(f) for f in np.linspace(f_start, f_stop, points)]
    raise ValueError(f"scale must be 'log' or 'linear', got {scale!r}")


def _row_from_s(f: float, s: TwoPortMatrix, ports: PortPair) -> SweepRow:
    pte = efficiency.pte_link(s.m21, ports)
    try:
        max_eff = efficiency.pte_max(s)
        pte_max_pct = max_eff.pte_max * 100.0 if max_eff.physical else float("nan")
    except ValueError:
        pte_max_pct = float("nan")
    return SweepRow(f, _db(abs(s.m11)), _db(abs(s.m21)), _db(abs(s.m22)),
                    pte * 100.0, pte_max_pct)


def sweep_link(model: LinkModel, frequencies: Sequence[float],
               with_imn: bool = True) -> list[SweepRow]:
    return [_row_from_s(f, model.s_at(f, with_imn=with_imn), model.ports)
            for f in frequencies]


def sweep_table(table: NetworkTable, frequencies: Sequence[float] | None = None) -> list[SweepRow]:
    ports = PortPair(table.zp, table.zp)
    freqs = list(frequencies) if frequencies is not None else list(table.frequencies)
    return [_row_from_s(f, table.at(f), ports) for f in freqs]


def write_sweep_csv(rows: Sequence[SweepRow], target) -> None:
    """Write sweep rows as CSV with a header, '.' decimals, no locale."""
    own = isinstance(target, (str, Path))
    fh = open(target, "w", newline="") if own else target
    try:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_HEADER)
        for row in rows:
            writer.writerow([f"{row.f:.12g}", f"{row.s11_db:.12g}", f"{row.s21_db:.12g}",
                             f"{row.s22_db:.12g}", f"{row.pte_pct:.12g}",
                             f"{row.pte_max_pct:.12g}"])
    finally:
        if own:
            fh.close()


def sweep_csv_text(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    return buf.getvalue()
