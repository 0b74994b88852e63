"""Command-line front end.

Subcommands:
  synthesize  per-pair load table (CSV or JSON) for a Z-matrix document
  verify      re-solve a load table with the network solver and grade it
  calibrate   recover the pair enumeration and spacing argument from the
              reference table
  ber         Monte Carlo BER curves for the supported transmitter modes

Exit codes: 0 success, 1 verification/acceptance failure, 2 usage or
parse failure.  All numeric file output is fixed-notation with at least
12 significant digits, so tables round-trip well below the verification
tolerances.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from .antenna import AntennaZMatrix, reference_fixture
from .beamspace import BasisConfig, SymbolPair
from .calibration import calibrate, enumerate_pairs
from .errors import ConfigError, LmArrayError, ValidationError
from .formatting import format_fixed
from .linksim import (
    BerConfig,
    LoadErrorKind,
    LoadErrorModel,
    Receiver,
    Transmitter,
    binomial_stderr,
    curve_to_csv,
    run_ber,
)
from .oracle import solve_network
from .synthesis import synthesize
from .twoport import ReactanceTuple, Topology

_TOPOLOGY_NAMES = {
    "t-with-tl": Topology.T_WITH_TL,
    "pi-no-tl": Topology.PI_NO_TL,
}

#: Denormalized component column names per topology (element 1, element 2).
_LOAD_COLUMNS = {
    Topology.T_WITH_TL: (
        "X1_1_ohm", "B2_1_S", "X3_1_ohm", "X1_2_ohm", "B2_2_S", "X3_2_ohm",
    ),
    Topology.PI_NO_TL: (
        "B1_1_S", "X2_1_ohm", "B3_1_S", "B1_2_S", "X2_2_ohm", "B3_2_S",
    ),
}

_FIXED_COLUMNS = (
    "ind", "s1_re", "s1_im", "s2_re", "s2_im", "Vin_V",
    "I1_re", "I1_im", "I2_re", "I2_im", "phi_deg", "P1_W", "P2_W",
)


def _load_zmatrix(path: str | None) -> AntennaZMatrix:
    if path is None:
        return reference_fixture()
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"Z-matrix file not found: {path}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Z-matrix file is not valid JSON: {exc}") from exc
    return AntennaZMatrix.from_json_dict(doc)


def _parse_sweep(spec: str) -> list[float]:
    """'start:stop:step' inclusive of both ends (within half a step)."""
    try:
        start, stop, step = (float(tok) for tok in spec.split(":"))
    except ValueError as exc:
        raise ConfigError(f"bad sweep spec {spec!r}, expected start:stop:step") from exc
    if step == 0.0 or (stop - start) * step < 0.0:
        raise ConfigError(f"sweep {spec!r} does not terminate")
    values = []
    k = 0
    while True:
        v = start + k * step
        if (step > 0 and v > stop + abs(step) * 0.5) or (
            step < 0 and v < stop - abs(step) * 0.5
        ):
            break
        values.append(v)
        k += 1
    return values


def _parse_grid(spec: str) -> list[float]:
    """Comma list or start:stop:step."""
    if ":" in spec:
        return _parse_sweep(spec)
    return [float(tok) for tok in spec.split(",") if tok.strip()]


def synthesize_table(
    zm: AntennaZMatrix,
    cfg: BasisConfig,
    topology: Topology = Topology.T_WITH_TL,
    s: float = 0.0,
    rows: int | None = None,
    pairs: list[SymbolPair] | None = None,
) -> list[dict]:
    """Per-pair table rows; synthesis failures land in the status field."""
    if pairs is None:
        pairs = enumerate_pairs()
    if rows is not None:
        pairs = pairs[:rows]
    load_cols = _LOAD_COLUMNS[topology]
    out = []
    for ind, pair in enumerate(pairs, start=1):
        row = {
            "ind": ind,
            "s1_re": pair.s1.real, "s1_im": pair.s1.imag,
            "s2_re": pair.s2.real, "s2_im": pair.s2.imag,
        }
        try:
            res = synthesize(pair, zm, cfg, topology=topology, s=s)
        except LmArrayError as exc:
            for col in ("Vin_V", "I1_re", "I1_im", "I2_re", "I2_im",
                        "phi_deg", "P1_W", "P2_W", *load_cols):
                row[col] = None
            row["status"] = type(exc).__name__
            out.append(row)
            continue
        d1 = res.loads1.denormalized(zm.z0)
        d2 = res.loads2.denormalized(zm.z0)
        row.update({
            "Vin_V": abs(res.vin),
            "I1_re": res.i1.real, "I1_im": res.i1.imag,
            "I2_re": res.i2.real, "I2_im": res.i2.imag,
            "phi_deg": math.degrees(cfg.phase_shift_rad),
            "P1_W": res.p1, "P2_W": res.p2,
        })
        row.update(dict(zip(load_cols, (*d1, *d2))))
        row["status"] = "ok"
        out.append(row)
    return out


def _write_table(rows: list[dict], topology: Topology, path: Path, fmt: str):
    header = (*_FIXED_COLUMNS, *_LOAD_COLUMNS[topology], "status")
    if fmt == "json":
        path.write_text(json.dumps(rows, indent=1) + "\n")
        return
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            rec = []
            for col in header:
                val = row[col]
                if val is None:
                    rec.append("")
                elif col in ("ind", "status"):
                    rec.append(val)
                else:
                    rec.append(format_fixed(float(val)))
            writer.writerow(rec)


def cmd_synthesize(args) -> int:
    zm = _load_zmatrix(args.z_matrix)
    cfg = BasisConfig(
        b=args.b, phase_shift_rad=math.radians(args.phi_deg), z0=zm.z0
    )
    topology = _TOPOLOGY_NAMES[args.topology]
    s_values = _parse_sweep(args.s_sweep) if args.s_sweep else [args.s]
    out_base = Path(args.out)
    for s in s_values:
        rows = synthesize_table(zm, cfg, topology, s, args.rows)
        if len(s_values) == 1:
            path = out_base
        else:
            path = out_base.with_name(
                f"{out_base.stem}_s{s:+.3f}{out_base.suffix}"
            )
        _write_table(rows, topology, path, args.format)
        n_ok = sum(1 for r in rows if r["status"] == "ok")
        print(f"{path}: {n_ok}/{len(rows)} pairs synthesized (s={s:g})")
        if n_ok == 0:
            return 1
    return 0


def _read_table(path: Path) -> tuple[list[dict], Topology]:
    if not path.exists():
        raise ConfigError(f"load table not found: {path}")
    if path.suffix == ".json":
        rows = json.loads(path.read_text())
        if not rows:
            raise ConfigError("empty load table")
        header = rows[0].keys()
    else:
        with path.open() as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
        if not rows:
            raise ConfigError("empty load table")
        header = reader.fieldnames
    for topo, cols in _LOAD_COLUMNS.items():
        if set(cols) <= set(header):
            return rows, topo
    raise ConfigError("table header matches no known topology")


def cmd_verify(args) -> int:
    zm = _load_zmatrix(args.z_matrix)
    rows, topology = _read_table(Path(args.table))
    load_cols = _LOAD_COLUMNS[topology]
    report_rows = []
    all_pass = True
    for row in rows:
        ind = row["ind"]
        if row["status"] != "ok":
            report_rows.append((ind, None, None, None, f"skipped ({row['status']})"))
            continue
        vals = [float(row[c]) for c in load_cols]
        if topology is Topology.T_WITH_TL:
            t1 = ReactanceTuple(topology, vals[0] / zm.z0, vals[1] * zm.z0, vals[2] / zm.z0)
            t2 = ReactanceTuple(topology, vals[3] / zm.z0, vals[4] * zm.z0, vals[5] / zm.z0)
        else:
            t1 = ReactanceTuple(topology, vals[0] * zm.z0, vals[1] / zm.z0, vals[2] * zm.z0)
            t2 = ReactanceTuple(topology, vals[3] * zm.z0, vals[4] / zm.z0, vals[5] * zm.z0)
        vin = complex(float(row["Vin_V"]))
        i1_ref = complex(float(row["I1_re"]), float(row["I1_im"]))
        i2_ref = complex(float(row["I2_re"]), float(row["I2_im"]))
        sol = solve_network(t1, t2, zm, vin)
        zin_err = abs(sol.zin - zm.z0)
        i_scale = max(abs(i1_ref), abs(i2_ref))
        i_err = max(abs(sol.i1 - i1_ref), abs(sol.i2 - i2_ref)) / i_scale
        p_res = abs(sol.pin - sol.prad) / max(abs(sol.pin), 1e-300)
        ok = zin_err < args.tol_z and i_err < args.tol_rel and p_res < args.tol_rel
        all_pass = all_pass and ok
        report_rows.append((ind, zin_err, i_err, p_res, "pass" if ok else "FAIL"))

    out = Path(args.out) if args.out else None
    lines = ["ind,zin_err_ohm,current_rel_err,power_residual,result"]
    for ind, zin_err, i_err, p_res, verdict in report_rows:
        if zin_err is None:
            lines.append(f"{ind},,,,{verdict}")
        else:
            lines.append(
                f"{ind},{format_fixed(zin_err)},{format_fixed(i_err)},"
                f"{format_fixed(p_res)},{verdict}"
            )
    text = "\n".join(lines) + "\n"
    if out:
        out.write_text(text)
    else:
        sys.stdout.write(text)
    n_checked = sum(1 for r in report_rows if r[1] is not None)
    print(f"verified {n_checked} rows: {'all pass' if all_pass else 'FAILURES present'}")
    return 0 if all_pass else 1


def cmd_calibrate(args) -> int:
    zm = _load_zmatrix(args.z_matrix)
    grid = _parse_grid(args.b_grid) if args.b_grid else None
    report = calibrate(zm, b_grid=grid)
    doc = {
        "first_s1": {"re": report.first_s1.real, "im": report.first_s1.imag},
        "order": [{"re": c.real, "im": c.imag} for c in report.order],
        "order_desc": report.order_desc,
        "b_best": report.b_best,
        "b_default": math.pi / 4.0,
        "residual_best": report.residual_best,
        "residual_default_b": report.residual_default_b,
        "default_b_consistent": report.default_b_consistent,
        "vin_only": report.vin_only,
        "candidates_scored": report.candidates_scored,
        "notes": report.notes,
    }
    text = json.dumps(doc, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(
        f"calibrated: {report.order_desc}; b = {report.b_best:.6f} "
        f"(residual {report.residual_best:.3e})"
    )
    return 0


_MODE_NAMES = {
    "conventional": Transmitter.CONVENTIONAL,
    "lma-ideal": Transmitter.LMA_IDEAL,
    "lma-erred": Transmitter.LMA_ERRED,
}


def cmd_ber(args) -> int:
    zm = _load_zmatrix(args.z_matrix)
    grid = tuple(_parse_grid(args.snr_grid))
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    for m in modes:
        if m not in _MODE_NAMES:
            raise ConfigError(f"unknown mode {m!r}")
    error_model = LoadErrorModel(
        kind=LoadErrorKind(args.error_kind),
        tolerance=args.tolerance,
        step=args.quant_step,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    curves = {}
    for mode in modes:
        config = BerConfig(
            snr_grid_db=grid,
            min_bit_errors=args.min_bit_errors,
            max_bits=args.max_bits,
            seed=args.seed,
            transmitter=_MODE_NAMES[mode],
            error_model=error_model,
            receiver=Receiver(args.receiver),
        )
        curve = run_ber(config, zm)
        curves[mode] = curve
        path = out_dir / f"ber_{mode.replace('-', '_')}.csv"
        path.write_text(curve_to_csv(curve))
        print(f"{path}: " + " ".join(
            f"{p.snr_db:g}dB={p.ber:.3e}" for p in curve.points
        ))

    if "conventional" in curves:
        ref = curves["conventional"]
        for mode, curve in curves.items():
            if mode == "conventional":
                continue
            for p_ref, p in zip(ref.points, curve.points):
                se = math.hypot(
                    binomial_stderr(p_ref.ber, p_ref.bits_simulated),
                    binomial_stderr(p.ber, p.bits_simulated),
                )
                diff = p.ber - p_ref.ber
                verdict = "within CI" if abs(diff) <= 3.0 * se else (
                    "degraded" if diff > 0 else "OUTSIDE CI (better?)"
                )
                print(
                    f"parity {mode} vs conventional @ {p.snr_db:g} dB: "
                    f"diff={diff:+.3e} (3se={3 * se:.3e}) {verdict}"
                )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmarray",
        description="Load synthesis and BER evaluation for a single-RF "
        "load-modulated two-element array",
    )
    parser.add_argument("--config", help="JSON file with default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--z-matrix", help="Z-matrix JSON document (default: built-in fixture)")

    p_syn = sub.add_parser("synthesize", help="emit the per-pair load table")
    add_common(p_syn)
    p_syn.add_argument("--b", type=float, default=math.pi / 4.0)
    p_syn.add_argument("--phi-deg", type=float, default=-10.0)
    p_syn.add_argument("--topology", choices=sorted(_TOPOLOGY_NAMES), default="t-with-tl")
    p_syn.add_argument("--s", type=float, default=0.0, help="free parameter")
    p_syn.add_argument("--s-sweep", help="start:stop:step sweep of the free parameter")
    p_syn.add_argument("--rows", type=int, help="only the first N pairs")
    p_syn.add_argument("--format", choices=("csv", "json"), default="csv")
    p_syn.add_argument("--out", default="load_table.csv")
    p_syn.set_defaults(func=cmd_synthesize)

    p_ver = sub.add_parser("verify", help="grade a load table with the network solver")
    add_common(p_ver)
    p_ver.add_argument("--table", required=True)
    p_ver.add_argument("--tol-z", type=float, default=1e-6, help="ohms")
    p_ver.add_argument("--tol-rel", type=float, default=1e-9)
    p_ver.add_argument("--out", help="report CSV (default: stdout)")
    p_ver.set_defaults(func=cmd_verify)

    p_cal = sub.add_parser("calibrate", help="recover enumeration and spacing argument")
    add_common(p_cal)
    p_cal.add_argument("--b-grid", help="comma list or start:stop:step")
    p_cal.add_argument("--out", help="report JSON (default: stdout)")
    p_cal.set_defaults(func=cmd_calibrate)

    p_ber = sub.add_parser("ber", help="Monte Carlo BER curves")
    add_common(p_ber)
    p_ber.add_argument("--snr-grid", default="0:20:2", help="dB; comma list or start:stop:step")
    p_ber.add_argument("--modes", default="conventional,lma-ideal")
    p_ber.add_argument("--error-kind", choices=[k.value for k in LoadErrorKind],
                       default="multiplicative")
    p_ber.add_argument("--tolerance", type=float, default=0.05)
    p_ber.add_argument("--quant-step", type=float, default=0.05)
    p_ber.add_argument("--min-bit-errors", type=int, default=200)
    p_ber.add_argument("--max-bits", type=int, default=40_000_000)
    p_ber.add_argument("--seed", type=int, default=1)
    p_ber.add_argument("--receiver", choices=[r.value for r in Receiver], default="ml")
    p_ber.add_argument("--out-dir", default="ber_out")
    p_ber.set_defaults(func=cmd_ber)
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Fold --config JSON values in as defaults (explicit flags win)."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        cfg_path = argv[idx + 1]
    except IndexError:
        raise ConfigError("--config needs a file argument")
    path = Path(cfg_path)
    if not path.exists():
        raise ConfigError(f"config file not found: {cfg_path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}")
    rest = argv[:idx] + argv[idx + 2:]
    injected = []
    for key, value in doc.items():
        flag = "--" + key.replace("_", "-")
        if flag in rest:
            continue  # explicit flag wins
        injected.extend([flag, str(value)])
    # injected defaults go after the subcommand token
    for i, tok in enumerate(rest):
        if not tok.startswith("-"):
            return rest[: i + 1] + injected + rest[i + 1:]
    return rest + injected


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LmArrayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
