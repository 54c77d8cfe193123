"""Run-configuration parsing and validation.

Configs are flat INI-style files with ``key = value`` lines grouped into
sections.  Every key has a documented default, so a minimal file (even just a
material preset) expands to a complete run; unknown sections or keys are
rejected by name.  Built-in figure presets (``fig2`` .. ``fig5``) ship with
the package and can be passed anywhere a config path is accepted.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .bcs import MATERIAL_PRESETS, JunctionParams, gaas_nb_junction
from .errors import ConfigError, DomainError
from .modes import AnnulusGeometry
from .pair_state import OamPairBasis, QubitState
from .spectral import KQuadrature, SpectralGrid

PRESET_NAMES = ("fig2", "fig3", "fig4", "fig5")

_DEFAULT_TEMPS = ", ".join(f"{0.05 * i:g}" for i in range(1, 20))

# section -> key -> default string; None marks "no default, optional key"
_SCHEMA = {
    "material": {
        "preset": "GaAs-Nb",
        "delta0_mev": "1.4",
        "tc_k": "9.2",
        "electron_mass": "0.067",
        "hole_mass": "0.45",
        "electron_density_cm2": "1e12",
        "hole_density_cm2": "1e12",
        "band_gap_mev": "1519.0",
        "dephasing_time_fs": "1000.0",
        "gap_scale_conduction": "1.0",
        "gap_scale_valence": "1.0",
    },
    "geometry": {
        "r_inner_um": "4.0",
        "r_outer_um": "5.0",
        "waist_um": None,  # default derived: (r_inner + r_outer)/sqrt(2)
    },
    "grid": {
        "detuning_min": "-6.0",
        "detuning_max": "6.0",
        "detuning_points": "121",
        "temperatures": _DEFAULT_TEMPS,
        "quadrature_nodes": "4096",
        "cutoff_delta0": "40.0",
        "patch_area_um2": "0.1",
        "verify_quadrature": "false",
    },
    "emission": {
        "winding": "2",
        "l_max": "3",
        "l_values": None,  # optional restriction of detected OAM values
        "detuning_for_dm": "5.0",
        "enhancements": "10, 100",
        "qubit_a": None,  # "magnitude, phase"; both qubit keys or neither
        "qubit_b": None,
    },
    "output": {
        "directory": "out",
        "formats": "csv,json",
        "threads": "0",
        "log_scale": "false",
    },
}


@dataclass
class RunConfig:
    """Fully resolved and validated run parameters."""

    junction: JunctionParams
    material_name: str
    geometry: AnnulusGeometry
    grid: SpectralGrid
    winding: int
    l_max: int
    l_values: tuple | None
    detuning_for_dm: float
    enhancements: tuple
    qubit: QubitState | None
    out_dir: str
    formats: tuple
    threads: int
    log_scale: bool
    resolved: dict
    defaulted: tuple

    def basis(self) -> OamPairBasis:
        if self.l_values is not None:
            return OamPairBasis.from_l_values(self.l_values)
        return OamPairBasis.full(self.l_max)


def _parse_float(raw: str, where: str) -> float:
    try:
        value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: expected a number, got {raw!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"{where}: value must be finite, got {raw!r}")
    return value


def _parse_int(raw: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: expected an integer, got {raw!r}") from exc


def _parse_bool(raw: str, where: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{where}: expected a boolean, got {raw!r}")


def _parse_list(raw: str, where: str, item_parser):
    items = [s.strip() for s in raw.split(",") if s.strip()]
    if not items:
        raise ConfigError(f"{where}: expected a comma-separated list, got {raw!r}")
    return tuple(item_parser(s, where) for s in items)


def _parse_pair(raw: str, where: str):
    parts = [s.strip() for s in raw.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"{where}: expected 'magnitude, phase', got {raw!r}")
    return _parse_float(parts[0], where), _parse_float(parts[1], where)


def _resolve_source(path_or_preset: str) -> str:
    if os.path.exists(path_or_preset):
        with open(path_or_preset, encoding="utf-8") as fh:
            return fh.read()
    if path_or_preset in PRESET_NAMES:
        ref = resources.files("sled_oam").joinpath(f"presets/{path_or_preset}.conf")
        return ref.read_text(encoding="utf-8")
    raise ConfigError(
        f"config {path_or_preset!r} is neither an existing file nor one of the "
        f"built-in presets {', '.join(PRESET_NAMES)}"
    )


def _apply_overrides(parser: configparser.ConfigParser, overrides) -> None:
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        target, _, value = item.partition("=")
        if "." not in target:
            raise ConfigError(f"override target {target!r} must look like section.key")
        section, _, key = target.strip().partition(".")
        key = key.strip()
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, value.strip())


def load_config(path_or_preset: str, overrides=()) -> RunConfig:
    """Parse, validate and default a run configuration.

    ``overrides`` are ``section.key=value`` strings applied on top of the file
    (command-line ``--set`` entries); they are validated like file content.
    """
    text = _resolve_source(path_or_preset)
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=str(path_or_preset))
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    _apply_overrides(parser, overrides)

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown config key {section}.{key}")

    resolved: dict = {}
    defaulted: list = []

    def raw(section: str, key: str) -> str | None:
        if parser.has_option(section, key):
            value = parser.get(section, key).strip()
            resolved[f"{section}.{key}"] = value
            return value
        default = _SCHEMA[section][key]
        if default is not None:
            resolved[f"{section}.{key}"] = default
            defaulted.append(f"{section}.{key}")
        return default

    def floatval(section, key):
        return _parse_float(raw(section, key), f"{section}.{key}")

    def intval(section, key):
        return _parse_int(raw(section, key), f"{section}.{key}")

    # material
    preset = raw("material", "preset")
    if preset not in MATERIAL_PRESETS:
        raise ConfigError(
            f"material.preset: unknown preset {preset!r}; known: {sorted(MATERIAL_PRESETS)}"
        )
    try:
        junction = gaas_nb_junction(
            delta0=floatval("material", "delta0_mev"),
            tc=floatval("material", "tc_k"),
            electron_mass=floatval("material", "electron_mass"),
            hole_mass=floatval("material", "hole_mass"),
            electron_density_cm2=floatval("material", "electron_density_cm2"),
            hole_density_cm2=floatval("material", "hole_density_cm2"),
            band_gap=floatval("material", "band_gap_mev"),
            dephasing_time=floatval("material", "dephasing_time_fs"),
            gap_scale_conduction=floatval("material", "gap_scale_conduction"),
            gap_scale_valence=floatval("material", "gap_scale_valence"),
        )
    except DomainError as exc:
        raise ConfigError(f"material: {exc}") from exc

    # geometry
    r_inner = floatval("geometry", "r_inner_um")
    r_outer = floatval("geometry", "r_outer_um")
    waist_raw = raw("geometry", "waist_um")
    if waist_raw is None:
        waist = (r_inner + r_outer) / math.sqrt(2.0)
        resolved["geometry.waist_um"] = repr(waist)
        defaulted.append("geometry.waist_um")
    else:
        waist = _parse_float(waist_raw, "geometry.waist_um")
    try:
        geometry = AnnulusGeometry(r_inner=r_inner, r_outer=r_outer, waist=waist)
    except DomainError as exc:
        raise ConfigError(f"geometry: {exc}") from exc

    # grid
    d_min = floatval("grid", "detuning_min")
    d_max = floatval("grid", "detuning_max")
    d_points = intval("grid", "detuning_points")
    if d_points < 2:
        raise ConfigError("grid.detuning_points: need at least 2 points")
    temps = _parse_list(raw("grid", "temperatures"), "grid.temperatures", _parse_float)
    try:
        quad = KQuadrature(
            nodes=intval("grid", "quadrature_nodes"),
            cutoff_delta0=floatval("grid", "cutoff_delta0"),
            patch_area_um2=floatval("grid", "patch_area_um2"),
            verify=_parse_bool(raw("grid", "verify_quadrature"), "grid.verify_quadrature"),
        )
        grid = SpectralGrid(
            detunings=tuple(np.linspace(d_min, d_max, d_points)),
            temperatures=temps,
            k_integration=quad,
        )
    except DomainError as exc:
        raise ConfigError(f"grid: {exc}") from exc

    # emission
    winding = intval("emission", "winding")
    l_max = intval("emission", "l_max")
    if l_max < 0:
        raise ConfigError("emission.l_max: must be non-negative")
    l_values_raw = raw("emission", "l_values")
    l_values = (
        _parse_list(l_values_raw, "emission.l_values", _parse_int)
        if l_values_raw is not None
        else None
    )
    if l_values is not None and any(abs(v) > l_max for v in l_values):
        raise ConfigError("emission.l_values: entries must satisfy |l| <= l_max")
    detuning_for_dm = floatval("emission", "detuning_for_dm")
    enhancements = _parse_list(raw("emission", "enhancements"), "emission.enhancements", _parse_float)
    if any(e < 1.0 for e in enhancements):
        raise ConfigError("emission.enhancements: every enhancement must be >= 1")
    qubit_a_raw = raw("emission", "qubit_a")
    qubit_b_raw = raw("emission", "qubit_b")
    if (qubit_a_raw is None) != (qubit_b_raw is None):
        raise ConfigError("emission.qubit_a and emission.qubit_b must be given together")
    qubit = None
    if qubit_a_raw is not None:
        mag_a, phase_a = _parse_pair(qubit_a_raw, "emission.qubit_a")
        mag_b, phase_b = _parse_pair(qubit_b_raw, "emission.qubit_b")
        try:
            qubit = QubitState.from_polar(mag_a, phase_a, mag_b, phase_b)
        except DomainError as exc:
            raise ConfigError(f"emission.qubit_a/qubit_b: {exc}") from exc

    # output
    out_dir = raw("output", "directory")
    formats = tuple(
        s.strip().lower() for s in raw("output", "formats").split(",") if s.strip()
    )
    for fmt in formats:
        if fmt not in ("csv", "json", "svg"):
            raise ConfigError(f"output.formats: unknown format {fmt!r}")
    threads = intval("output", "threads")
    if threads < 0:
        raise ConfigError("output.threads: must be >= 0 (0 means auto)")
    log_scale = _parse_bool(raw("output", "log_scale"), "output.log_scale")

    return RunConfig(
        junction=junction,
        material_name=preset,
        geometry=geometry,
        grid=grid,
        winding=winding,
        l_max=l_max,
        l_values=l_values,
        detuning_for_dm=detuning_for_dm,
        enhancements=enhancements,
        qubit=qubit,
        out_dir=out_dir,
        formats=formats,
        threads=threads,
        log_scale=log_scale,
        resolved=resolved,
        defaulted=tuple(defaulted),
    )
