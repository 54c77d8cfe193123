"""Command-line entry point.

    sled-oam rates|dm|fidelity --config <path-or-preset> [--out DIR]
             [--format csv,json,svg] [--threads N] [--log-scale]
             [--set section.key=value]...

Exit codes: 0 success, 2 configuration error, 3 numerical-convergence error,
4 I/O error.  Errors are reported as a one-line JSON record on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__, outputs, pair_state, spectral
from .config import PRESET_NAMES, RunConfig, load_config
from .errors import ConfigError, ConvergenceError, SledOamError
from .metrics import bell_target, fidelity_curve

THREADS_ENV_VAR = "SLED_OAM_THREADS"


def _num_token(value: float) -> str:
    return f"{value:g}"


def _pair_label(pair) -> str:
    return f"({pair[0]},{pair[1]})"


def cmd_rates(config: RunConfig) -> list:
    """Rate surfaces for both channels: rates_cp.csv, rates_bqp.csv (+ heatmaps)."""
    cp, bqp = spectral.rate_surfaces(config.grid, config.junction, workers=config.threads or 0)
    written = []
    temps = config.grid.temperatures
    detunings = config.grid.detunings
    for surface, name in ((cp, "rates_cp"), (bqp, "rates_bqp")):
        rows = [
            (t, d, surface.values[i, j])
            for i, t in enumerate(temps)
            for j, d in enumerate(detunings)
        ]
        path = os.path.join(config.out_dir, f"{name}.csv")
        outputs.write_csv(path, "t_over_tc,detuning_over_delta0,rate_normalized", rows)
        written.append(path)
        if "svg" in config.formats:
            svg = outputs.svg_heatmap(
                surface.values,
                [_num_token(d) for d in detunings],
                [_num_token(t) for t in temps],
                f"{surface.channel} two-photon rate (normalized)",
                "detuning / delta0",
                "T / Tc",
                vmax=1.0,
                log_scale=config.log_scale,
            )
            svg_path = os.path.join(config.out_dir, f"{name}.svg")
            outputs.write_text(svg_path, svg)
            written.append(svg_path)
    return written


def _emitted_matrix(config: RunConfig, basis, t: float, enh: float):
    coh = spectral.CoherenceParams(enh)
    quad = config.grid.k_integration
    if config.qubit is not None:
        return pair_state.rho_total_superposition(
            config.qubit,
            config.winding,
            basis,
            config.geometry,
            config.detuning_for_dm,
            t,
            config.junction,
            coh,
            quad,
        )
    return pair_state.rho_total(
        config.winding,
        basis,
        config.geometry,
        config.detuning_for_dm,
        t,
        config.junction,
        coh,
        quad,
    )


def cmd_dm(config: RunConfig) -> list:
    """Density matrices for every (temperature, enhancement): dm_{t}_{enh}.json."""
    basis = config.basis()
    written = []
    for t in config.grid.temperatures:
        for enh in config.enhancements:
            rho = _emitted_matrix(config, basis, t, enh)
            stem = f"dm_{_num_token(t)}_{_num_token(enh)}"
            path = os.path.join(config.out_dir, f"{stem}.json")
            outputs.write_json(path, rho.to_json_dict())
            written.append(path)
            if "svg" in config.formats:
                magnitudes = abs(rho.entries)
                populated = [
                    i for i in range(len(basis)) if magnitudes[i].max() > 1e-15
                ]
                sub = magnitudes[populated][:, populated]
                labels = [_pair_label(basis.pairs[i]) for i in populated]
                svg = outputs.svg_matrix(
                    sub,
                    labels,
                    f"|rho| at T/Tc={_num_token(t)}, enhancement={_num_token(enh)}",
                )
                svg_path = os.path.join(config.out_dir, f"{stem}.svg")
                outputs.write_text(svg_path, svg)
                written.append(svg_path)
    return written


def cmd_fidelity(config: RunConfig) -> list:
    """Bell-state fidelity versus temperature per enhancement: fidelity.csv."""
    basis = config.basis()
    table = fidelity_curve(
        config.grid.temperatures,
        config.enhancements,
        config.winding,
        basis,
        config.geometry,
        config.detuning_for_dm,
        config.junction,
        quad=config.grid.k_integration,
        target=bell_target(basis, config.winding),
    )
    rows = [
        (t, enh, table.values[i, j])
        for i, t in enumerate(table.temperatures)
        for j, enh in enumerate(table.enhancements)
    ]
    path = os.path.join(config.out_dir, "fidelity.csv")
    outputs.write_csv(path, "t_over_tc,enhancement,fidelity", rows)
    written = [path]
    if "svg" in config.formats:
        series = {
            f"L/L_phi = {_num_token(enh)}": table.values[:, j]
            for j, enh in enumerate(table.enhancements)
        }
        svg = outputs.svg_lines(
            table.temperatures,
            series,
            "Bell-state fidelity of the emitted pair",
            "T / Tc",
            "fidelity",
        )
        svg_path = os.path.join(config.out_dir, "fidelity.svg")
        outputs.write_text(svg_path, svg)
        written.append(svg_path)
    return written


_COMMANDS = {"rates": cmd_rates, "dm": cmd_dm, "fidelity": cmd_fidelity}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sled-oam",
        description="Two-photon OAM emission simulator for a ring-contact superconducting LED",
    )
    parser.add_argument("--version", action="version", version=f"sled-oam {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "rates": "rate surfaces over the detuning/temperature grid",
        "dm": "pair density matrices per (temperature, enhancement)",
        "fidelity": "Bell-state fidelity versus temperature",
    }
    for name, text in helps.items():
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument(
            "--config",
            required=True,
            help=f"config file path or built-in preset ({', '.join(PRESET_NAMES)})",
        )
        cmd.add_argument("--out", help="output directory (overrides output.directory)")
        cmd.add_argument("--format", help="comma list of csv,json,svg (overrides output.formats)")
        cmd.add_argument("--threads", type=int, help="worker threads, 0 = auto")
        cmd.add_argument(
            "--log-scale",
            action="store_const",
            const=True,
            help="use a logarithmic color scale in SVG heatmaps",
        )
        cmd.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override any config key (repeatable; flag wins over file)",
        )
    return parser


def _flag_overrides(args: argparse.Namespace) -> list:
    overrides = list(args.overrides)
    if args.out is not None:
        overrides.append(f"output.directory={args.out}")
    if args.format is not None:
        overrides.append(f"output.formats={args.format}")
    threads = args.threads
    if threads is None and os.environ.get(THREADS_ENV_VAR):
        try:
            threads = int(os.environ[THREADS_ENV_VAR])
        except ValueError as exc:
            raise ConfigError(
                f"{THREADS_ENV_VAR} must be an integer, got {os.environ[THREADS_ENV_VAR]!r}"
            ) from exc
    if threads is not None:
        overrides.append(f"output.threads={threads}")
    if args.log_scale is not None:
        overrides.append("output.log_scale=true")
    return overrides


def _error_record(exc: BaseException) -> None:
    record = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record), file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        config = load_config(args.config, _flag_overrides(args))
        os.makedirs(config.out_dir, exist_ok=True)
        written = _COMMANDS[args.command](config)
        outputs.write_manifest(
            config.out_dir,
            config.resolved,
            config.defaulted,
            __version__,
            time.monotonic() - started,
            written,
        )
    except ConfigError as exc:
        _error_record(exc)
        return 2
    except ConvergenceError as exc:
        _error_record(exc)
        return 3
    except OSError as exc:
        _error_record(exc)
        return 4
    except SledOamError as exc:
        _error_record(exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
