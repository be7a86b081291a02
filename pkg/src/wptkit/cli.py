"""Command-line front end.

Commands: ``design``, ``sweep``, ``match``, ``coil synth``,
``tissue table``, ``harvester explore``, ``s2p convert``.  Exit codes:
0 success, 2 validation failure, 3 infeasible design, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import harvester, pipeline, spiral, tissue
from .errors import InfeasibleDesignError, TouchstoneFormatError, UnmatchableError
from .pipeline import si
from .touchstone import read_touchstone, write_touchstone

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


def _write_out(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_design(args) -> int:
    spec = pipeline.load_design_spec(args.spec)
    report = pipeline.run_design(spec)
    _write_out(report.text(), args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.s2p:
        table = tissue.import_override(read_touchstone(args.s2p))
        if args.points is not None:
            start = args.start or table.frequencies[0]
            stop = args.stop or table.frequencies[-1]
            freqs = pipeline.frequency_grid(start, stop, args.points, args.scale)
        else:
            freqs = None
        rows = pipeline.sweep_table(table, freqs)
    else:
        spec = pipeline.load_design_spec(args.spec)
        report = pipeline.run_design(spec)
        start = args.start or spec.f0 / 10.0
        stop = args.stop or spec.f0 * 10.0
        points = args.points if args.points is not None else pipeline.DEFAULT_SWEEP_POINTS
        freqs = pipeline.frequency_grid(start, stop, points, args.scale)
        rows = pipeline.sweep_link(report.link, freqs, with_imn=not args.bare)
    text = pipeline.sweep_csv_text(rows)
    _write_out(text, args.out)
    return EXIT_OK


def _cmd_match(args) -> int:
    spec = pipeline.load_design_spec(args.spec)
    report = pipeline.run_design(spec)
    synthesis = report.imn_synthesis
    lines = [f"matching solutions at {si(spec.f0, 'Hz')} "
             f"(ports {si(spec.ports.zp1, 'ohm')} / {si(spec.ports.zp2, 'ohm')})"]
    if synthesis.already_matched:
        lines.append("ports already matched; no finite L-section required")
    for rank, sol in enumerate(synthesis.solutions[: args.top], start=1):
        parts = [f"#{rank} case {sol.imn.topology_case}"]
        for label, elem in zip(("tx-se", "tx-sh", "rx-se", "rx-sh"), sol.imn.elements):
            unit = "F" if elem.kind.is_capacitor else "H"
            parts.append(f"{label} {elem.kind.value} {si(elem.value, unit)}")
        parts.append(f"S11 {sol.s11_db:.4g} dB")
        parts.append(f"S22 {sol.s22_db:.4g} dB")
        parts.append(f"S21 {sol.s21_db:.4g} dB")
        lines.append("  ".join(parts))
    _write_out("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_coil_synth(args) -> int:
    shape = spiral.SHAPES.get(args.shape)
    if shape is None:
        raise ValueError(f"unknown shape {args.shape!r}; choose from {sorted(spiral.SHAPES)}")
    fab = spiral.FabConstraints(
        min_trace_width=args.min_width, min_spacing=args.min_spacing,
        max_area=args.max_area)
    result = spiral.synthesize(args.target_l, fab, shape)
    if not result.candidates:
        near = result.nearest
        detail = ""
        if near is not None:
            detail = (f"; best miss L = {si(near.inductance, 'H')} "
                      f"({near.rel_error * 100:.2f} % off)")
        raise InfeasibleDesignError("coil synthesis",
                                    f"no candidate within 1 % of {si(args.target_l, 'H')}{detail}",
                                    nearest=near)
    records = [spiral.candidate_record(g, args.f0) for g in result.candidates[: args.top]]
    if args.format == "csv":
        import io
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(records[0].keys()))
        writer.writeheader()
        writer.writerows(records)
        _write_out(buf.getvalue(), args.out)
    else:
        lines = []
        for rec in records:
            fields = [f"shape={rec['shape']}", f"n={rec['n']}",
                      f"r={si(rec['r_m'], 'm')}", f"dr={si(rec['dr_m'], 'm')}",
                      f"w={si(rec['w_m'], 'm')}", f"L={si(rec['l_h'], 'H')}",
                      f"area={rec['area_m2'] * 1e6:.4g} mm^2"]
            if "r_ac_ohm" in rec:
                fields.append(f"R_ac={si(rec['r_ac_ohm'], 'ohm')}")
            lines.append("  ".join(fields))
        _write_out("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_tissue_table(args) -> int:
    lines = []
    for name, factory in tissue.TISSUE_LIBRARY.items():
        layer = factory()
        lines.append(f"[{name}]")
        lines.append(f"  eps_inf   {layer.eps_inf:g}")
        for i, (d_eps, tau, alpha) in enumerate(layer.dispersions, start=1):
            lines.append(f"  term {i}    d_eps={d_eps:g}  tau={si(tau, 's')}  alpha={alpha:g}")
        lines.append(f"  sigma     {si(layer.sigma_static, 'S/m')}")
        if args.f:
            eps = tissue.complex_permittivity(layer, args.f)
            lines.append(f"  at {si(args.f, 'Hz')}: eps' = {eps.real:.6g}, "
                         f"sigma_eff = {si(tissue.effective_conductivity(layer, args.f), 'S/m')}")
        lines.append("")
    _write_out("\n".join(lines), args.out)
    return EXIT_OK


def _cmd_harvester_explore(args) -> int:
    constraints = harvester.HarvesterConstraints(
        n_range=tuple(range(args.n_min, args.n_max + 1)),
        q_range=tuple(args.q),
        max_charge_time=args.max_charge_time,
        tissue_z=complex(args.tissue_r, args.tissue_x),
        f0=args.f0,
        c_store=args.c_store,
        i_load_avg=args.i_load,
        v_t=args.v_t,
    )
    result = harvester.design_space(
        args.v_rx, args.target_v, constraints,
        harvester.stage_scaling_model(args.r_stage, args.c_stage))
    import io
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n", "q", "r_rect_ohm", "c_rect_f", "v_out_v",
                     "charge_time_s", "match_residual"])
    for p in result.table:
        writer.writerow([p.n, f"{p.q:.12g}", f"{p.r_rect:.12g}", f"{p.c_rect:.12g}",
                         f"{p.v_out:.12g}", f"{p.charge_time:.12g}",
                         f"{p.match_residual:.12g}"])
    text = buf.getvalue()
    if result.chosen is not None:
        chosen = result.chosen
        text += (f"# chosen: n={chosen.n_stages} q={chosen.q_boost:g} "
                 f"v_t={si(chosen.v_t, 'V')} c_store={si(chosen.c_store, 'F')}\n")
    else:
        text += "# no feasible point; nearest misses follow\n"
        for label, p in result.nearest.items():
            text += (f"# {label}: n={p.n} q={p.q:g} v_out={si(p.v_out, 'V')} "
                     f"charge_time={si(p.charge_time, 's')}\n")
    _write_out(text, args.out)
    return EXIT_OK if result.chosen is not None else EXIT_INFEASIBLE


def _cmd_s2p_convert(args) -> int:
    record = read_touchstone(args.input)
    write_touchstone(record, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wptkit",
        description="Design toolkit for two-coil inductive power links")
    parser.add_argument("--seedless", action="store_true",
                        help="assert the run uses no randomness (always true; "
                             "the pipeline is deterministic)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="run the full design pipeline on a spec file")
    p.add_argument("spec")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_design)

    p = sub.add_parser("sweep", help="frequency sweep to CSV")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="design spec JSON (analytic link)")
    src.add_argument("--s2p", help="imported Touchstone file")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--scale", choices=("log", "linear"), default="log")
    p.add_argument("--bare", action="store_true", help="sweep without the matching network")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("match", help="rank matching-network solutions for a spec")
    p.add_argument("spec")
    p.add_argument("--top", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_match)

    coil_group = sub.add_parser("coil", help="coil geometry tools")
    coil_sub = coil_group.add_subparsers(dest="coil_command", required=True)
    p = coil_sub.add_parser("synth", help="synthesize spiral candidates for a target inductance")
    p.add_argument("--target-l", type=float, required=True, help="target inductance, H")
    p.add_argument("--max-area", type=float, required=True, help="area cap, m^2")
    p.add_argument("--shape", default="square")
    p.add_argument("--min-width", type=float, default=100e-6)
    p.add_argument("--min-spacing", type=float, default=100e-6)
    p.add_argument("--f0", type=float, default=20e6, help="frequency for R_ac, Hz")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_coil_synth)

    tissue_group = sub.add_parser("tissue", help="tissue model tools")
    tissue_sub = tissue_group.add_subparsers(dest="tissue_command", required=True)
    p = tissue_sub.add_parser("table", help="print the embedded dielectric parameters")
    p.add_argument("--f", type=float, help="also evaluate permittivity at this frequency, Hz")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_tissue_table)

    harv_group = sub.add_parser("harvester", help="rectifier design tools")
    harv_sub = harv_group.add_subparsers(dest="harvester_command", required=True)
    p = harv_sub.add_parser("explore", help="sweep the (n, q) rectifier design space")
    p.add_argument("--v-rx", type=float, required=True, help="received amplitude, V")
    p.add_argument("--target-v", type=float, required=True, help="target DC output, V")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=60)
    p.add_argument("--q", type=float, nargs="+", default=[1.0])
    p.add_argument("--max-charge-time", type=float, default=10.0)
    p.add_argument("--f0", type=float, default=20e6)
    p.add_argument("--tissue-r", type=float, default=50.0)
    p.add_argument("--tissue-x", type=float, default=0.0)
    p.add_argument("--c-store", type=float, default=harvester.DEFAULT_STORE_CAPACITOR)
    p.add_argument("--i-load", type=float, default=1e-6)
    p.add_argument("--v-t", type=float, default=harvester.BODY_THERMAL_VOLTAGE)
    p.add_argument("--r-stage", type=float, default=1e3)
    p.add_argument("--c-stage", type=float, default=1e-12)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_harvester_explore)

    s2p_group = sub.add_parser("s2p", help="Touchstone file tools")
    s2p_sub = s2p_group.add_subparsers(dest="s2p_command", required=True)
    p = s2p_sub.add_parser("convert", help="normalize a Touchstone file to RI/Hz")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=_cmd_s2p_convert)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InfeasibleDesignError, UnmatchableError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except TouchstoneFormatError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
