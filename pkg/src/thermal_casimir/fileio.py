"""File formats: optical tables, residual bounds, geometry and gamma maps.

Input conventions (all text, '#' starts a comment):
  optical table   two columns, omega in eV and Im eps (dimensionless)
  residual bound  two columns (comma or whitespace), z in nm, Delta_tot in mPa
  gamma map       two columns, T in K and gamma in eV
  geometry        JSON with "body_a" and "body_b" objects

Output tables are deterministic: fixed float formatting, no timestamps, and a
provenance header carrying only a hash of the resolved configuration.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .constants import ev_to_angular_frequency
from .errors import DomainError
from .materials import ConstantEpsilon, DrudeTail, OpticalTable, TabulatedGamma
from .yukawa import FiniteSlab, Layer, ResidualBound, SemispacePlate, Sphere


class FileFormatError(ValueError):
    """An input file does not match its documented format."""


def _data_rows(path, columns, separators=True):
    rows = []
    for number, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split() if separators else line.split()
        if len(parts) != columns:
            raise FileFormatError(f"{path}:{number}: expected {columns} columns, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise FileFormatError(f"{path}:{number}: non-numeric value in {line!r}") from None
    if not rows:
        raise FileFormatError(f"{path}: no data rows")
    return np.asarray(rows)


def parse_extrapolation(spec):
    """Parse an extrapolation rule: 'drude:WP_EV:GAMMA_EV', 'constant:EPS0' or 'none'."""
    if spec is None or spec == "none":
        return None
    parts = spec.split(":")
    try:
        if parts[0] == "drude" and len(parts) == 3:
            return DrudeTail(
                ev_to_angular_frequency(float(parts[1])),
                ev_to_angular_frequency(float(parts[2])),
            )
        if parts[0] == "constant" and len(parts) == 2:
            return ConstantEpsilon(float(parts[1]))
    except ValueError:
        pass
    raise FileFormatError(
        f"bad extrapolation spec {spec!r}; use drude:WP_EV:GAMMA_EV, constant:EPS0 or none"
    )


def load_optical_table(path, extrapolation=None):
    """Load a two-column optical table (omega in eV, Im eps)."""
    data = _data_rows(path, 2)
    try:
        return OpticalTable(
            omega=ev_to_angular_frequency(data[:, 0]),
            im_eps=data[:, 1],
            extrapolation=extrapolation,
            provenance=f"loaded from {Path(path).name}",
        )
    except DomainError as exc:
        raise FileFormatError(f"{path}: {exc}") from None


def load_residual_bound(path):
    """Load a residual confidence bound (z in nm, Delta_tot in mPa)."""
    data = _data_rows(path, 2)
    try:
        return ResidualBound(z=data[:, 0] * 1e-9, delta_tot=data[:, 1] * 1e-3)
    except DomainError as exc:
        raise FileFormatError(f"{path}: {exc}") from None


def load_gamma_map(path):
    """Load a tabulated relaxation map (T in K, gamma in eV)."""
    data = _data_rows(path, 2)
    try:
        return TabulatedGamma(
            temperatures=tuple(data[:, 0]),
            gammas=tuple(ev_to_angular_frequency(data[:, 1])),
        )
    except DomainError as exc:
        raise FileFormatError(f"{path}: {exc}") from None


def _body_from_mapping(mapping, label):
    try:
        shape = mapping["shape"]
        coatings = tuple(
            Layer(float(c["thickness_m"]), float(c["density_kg_m3"]))
            for c in mapping.get("coatings", [])
        )
        density = float(mapping["density_kg_m3"])
        if shape == "semispace":
            return SemispacePlate(density, coatings)
        if shape == "slab":
            return FiniteSlab(float(mapping["thickness_m"]), density, coatings)
        if shape == "sphere":
            return Sphere(float(mapping["radius_m"]), density, coatings)
    except (KeyError, TypeError, ValueError, DomainError) as exc:
        raise FileFormatError(f"{label}: bad body spec ({exc})") from None
    raise FileFormatError(f"{label}: unknown shape {shape!r}")


def load_geometry_pair(path):
    """Load the two interacting bodies from a JSON geometry file."""
    try:
        document = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(document, dict) or "body_a" not in document or "body_b" not in document:
        raise FileFormatError(f"{path}: geometry JSON needs 'body_a' and 'body_b'")
    return (
        _body_from_mapping(document["body_a"], f"{path}:body_a"),
        _body_from_mapping(document["body_b"], f"{path}:body_b"),
    )


# ---------------------------------------------------------------------------
# deterministic output
# ---------------------------------------------------------------------------


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "yes" if value else "no"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if np.isinf(value):
            return "inf"
        return f"{float(value):.12e}"
    return str(value)


def config_hash(config):
    """Stable hash of the resolved run configuration."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def render_table(command, config, columns, units, rows, fmt, notes=()):
    """Render a result table as deterministic CSV or JSON text.

    ``rows`` is a sequence of equal-length value sequences matching
    ``columns``; ``units`` maps column names to unit strings.
    """
    digest = config_hash(config)
    if fmt == "csv":
        lines = [f"# thermal-casimir {command}", f"# config-hash: sha256:{digest}"]
        for key in sorted(config):
            value = config[key]
            lines.append(f"# {key}: {'' if value is None else value}")
        for note in notes:
            lines.append(f"# note: {note}")
        lines.append("# units: " + ",".join(units[c] for c in columns))
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(format_value(v) for v in row))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        document = {
            "command": command,
            "config": config,
            "config_hash": f"sha256:{digest}",
            "columns": list(columns),
            "units": {c: units[c] for c in columns},
            "notes": list(notes),
            "rows": [[_json_value(v) for v in row] for row in rows],
        }
        return json.dumps(document, sort_keys=True, indent=2) + "\n"
    raise DomainError(f"unknown output format {fmt!r}")


def _json_value(value):
    if value is None:
        return None
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return "inf" if np.isinf(value) else float(value)
    return str(value)


def render_entropy_scan(scan, config, fmt):
    """Serialize an entropy scan: (T, S) table plus a JSON diagnostics header."""
    diagnostics = {
        "verdict": scan.verdict,
        "prescription": scan.prescription,
        "z_m": scan.z,
        "extrapolated_zero": scan.extrapolated_zero,
        "uncertainty": scan.uncertainty,
        "fit_intercepts": list(scan.fit_intercepts),
        "all_converged": bool(scan.all_converged),
    }
    rows = list(zip(scan.temperatures, scan.entropy_values))
    columns = ("T_K", "entropy_J_per_K_m2")
    units = {"T_K": "K", "entropy_J_per_K_m2": "J/(K m^2)"}
    if fmt == "csv":
        digest = config_hash(config)
        lines = [
            "# thermal-casimir entropy",
            f"# config-hash: sha256:{digest}",
            "# json: " + json.dumps(diagnostics, sort_keys=True, separators=(",", ":")),
            ",".join(columns),
        ]
        for row in rows:
            lines.append(",".join(format_value(v) for v in row))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        document = {
            "command": "entropy",
            "config": config,
            "config_hash": f"sha256:{config_hash(config)}",
            "diagnostics": diagnostics,
            "columns": list(columns),
            "units": units,
            "rows": [[float(t), float(s)] for t, s in rows],
        }
        return json.dumps(document, sort_keys=True, indent=2) + "\n"
    raise DomainError(f"unknown output format {fmt!r}")
