"""Defect dossier: the JSON input document aggregating everything a report needs.

Every numeric key carries a unit suffix (``_ev``, ``_mhz``, ``_ang``, ...);
only a handful of dimensionless keys are exempt. Referenced files are
resolved relative to the dossier's directory.
"""

import json
import os

import jsonschema

from .exceptions import SchemaError
from .geometry import POINT_GROUPS
from .optics import STRAIN_OBSERVABLES

DIMENSIONLESS_KEYS = {"q", "spin", "count", "isotope", "n_r", "strain", "band", "cutoff"}

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_vec3 = {"type": "array", "items": _num, "minItems": 3, "maxItems": 3}
_str = {"type": "string"}


def _obj(props, required=(), **extra):
    return {"type": "object", "properties": props, "required": list(required),
            "additionalProperties": False, **extra}


SCHEMA = _obj({
    "name": _str,
    "host": _str,
    "species": {"type": "array", "items": _str},
    "description": _str,
    "constants": _obj({"gap_ev": _pos, "accuracy_band_ev": _pos, "bulk_modulus_gpa": _pos}),
    "e_vbm_ev": _num,
    "geometry": _obj({
        "structures": {"type": "object", "additionalProperties": _str, "minProperties": 1},
        "center_ang": _vec3,
        "pairs": {"type": "array", "items": {"type": "array", "items": _str, "minItems": 2, "maxItems": 2}},
        "symmetry_tol_ang": _pos,
    }, ["structures"]),
    "charge_states": {"type": "array", "minItems": 1, "items": _obj({
        "q": {"type": "integer"},
        "e_tot_ev": _num,
        "e_corr_ev": {"type": "number", "minimum": 0},
        "spin": {"type": "number", "minimum": 0, "multipleOf": 0.5},
        "point_group": {"enum": list(POINT_GROUPS)},
        "jt_ev": {"type": "number", "minimum": 0},
    }, ["q", "e_tot_ev"])},
    "optics": _obj({
        "n_r": _pos,
        "band_span_ev": {"type": "number", "minimum": 0},
        "calibration": _obj({"calc_ref_ev": _num, "exp_ref_ev": _num}, ["calc_ref_ev", "exp_ref_ev"]),
        "transitions": {"type": "array", "items": _obj({
            "label": _str,
            "zpl_calc_ev": _pos,
            "transition_dipole_debye": _vec3,
            "lifetime_s": _pos,
        }, ["label", "zpl_calc_ev"], **{"not": {"required": ["transition_dipole_debye", "lifetime_s"]}})},
        "exciton": _obj({"vertical_excitation_ev": _num, "homo_lumo_gap_ev": _num},
                        ["vertical_excitation_ev", "homo_lumo_gap_ev"]),
    }),
    "vibronic": {"type": "array", "items": _obj({
        "label": _str, "e_fc_ev": {"type": "number", "minimum": 0}, "q_amu_ang": _pos,
    }, ["label", "e_fc_ev", "q_amu_ang"])},
    "spin": {"type": "array", "items": _obj({
        "label": _str,
        "spin": {"type": "number", "exclusiveMinimum": 0, "multipleOf": 0.5},
        "zfs": _obj({"d_mhz": _num, "e_mhz": _num}, ["d_mhz", "e_mhz"]),
        "tensor_mhz": {"type": "array", "items": _vec3, "minItems": 3, "maxItems": 3},
        "density_cube": _str,
        "cutoff": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "hyperfine": {"type": "array", "items": _obj({
            "count": {"type": "integer", "minimum": 1},
            "species": _str,
            "isotope": {"type": "integer", "minimum": 1},
            "axx_mhz": _num, "ayy_mhz": _num, "azz_mhz": _num,
        }, ["count", "species", "axx_mhz", "ayy_mhz", "azz_mhz"])},
    }, ["label", "spin"])},
    "strain": {"type": "array", "items": _obj({
        "label": _str,
        "observable": {"enum": list(STRAIN_OBSERVABLES)},
        "points": {"type": "array", "minItems": 2, "items": _obj(
            {"strain": _num, "zpl_ev": _num, "zfs_mhz": _num}, ["strain"], minProperties=2, maxProperties=2)},
    }, ["label", "observable", "points"])},
    "reactions": {"type": "array", "items": _obj({
        "label": _str, "reactant_ev": _num, "products_ev": _num,
    }, ["label", "reactant_ev", "products_ev"])},
    "localization": {"type": "array", "items": _obj({
        "label": _str,
        "band": {"type": "integer"},
        "cube": _str,
        "center_ang": _vec3,
        "radius_bohr": _pos,
        "threshold": {"type": "number", "minimum": 0, "maximum": 1},
    }, ["cube", "center_ang", "radius_bohr"])},
}, ["name"])

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _path(parts):
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def _format_error(err):
    where = list(err.absolute_path)
    if err.validator == "required":
        missing = err.message.split("'")[1]
        return f"{_path(where + [missing])}: missing required field"
    if err.validator == "additionalProperties":
        extra = sorted(set(err.instance) - set(err.schema.get("properties", {})))
        msgs = []
        for key in extra:
            val = err.instance[key]
            if isinstance(val, (int, float)) and not isinstance(val, bool) and key not in DIMENSIONLESS_KEYS:
                msgs.append(f"{_path(where + [key])}: numeric key without a recognized unit suffix")
            else:
                msgs.append(f"{_path(where + [key])}: unknown field")
        return "; ".join(msgs)
    if err.validator == "not" and where and "transitions" in where:
        return f"{_path(where)}: give either transition_dipole_debye or lifetime_s, not both"
    return f"{_path(where)}: {err.message}"


def _referenced_files(doc):
    geo = doc.get("geometry", {})
    for key, rel in sorted(geo.get("structures", {}).items()):
        yield f"geometry.structures.{key}", rel
    for i, entry in enumerate(doc.get("spin", [])):
        if "density_cube" in entry:
            yield f"spin[{i}].density_cube", entry["density_cube"]
    for i, entry in enumerate(doc.get("localization", [])):
        yield f"localization[{i}].cube", entry["cube"]


def _semantic_errors(doc):
    errs = []
    for i, entry in enumerate(doc.get("strain", [])):
        obs = entry.get("observable")
        for j, pt in enumerate(entry.get("points", [])):
            if obs in STRAIN_OBSERVABLES and isinstance(pt, dict) and obs not in pt:
                errs.append(f"strain[{i}].points[{j}]: expected key {obs!r} for observable {obs}")
        strains = {pt.get("strain") for pt in entry.get("points", []) if isinstance(pt, dict)}
        if len(strains) < 2:
            errs.append(f"strain[{i}].points: need at least two distinct strain values")
    qs = [cs.get("q") for cs in doc.get("charge_states", [])]
    if len(set(qs)) != len(qs):
        errs.append("charge_states: duplicate charge")
    for i, cs in enumerate(doc.get("charge_states", [])):
        if cs.get("q") == 0 and cs.get("e_corr_ev", 0) != 0:
            errs.append(f"charge_states[{i}].e_corr_ev: neutral state cannot carry a correction")
    for i, entry in enumerate(doc.get("spin", [])):
        sources = [k for k in ("zfs", "tensor_mhz", "density_cube") if k in entry]
        if len(sources) > 1:
            errs.append(f"spin[{i}]: give at most one of zfs, tensor_mhz, density_cube")
    return errs


def read_json(path):
    with open(path) as fh:
        text = fh.read()
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise SchemaError([f"<root>: invalid JSON ({exc.msg} at line {exc.lineno})"]) from None


def check(doc, base_dir="."):
    """All schema, semantic and file-reference problems of a parsed dossier."""
    errs = [_format_error(e) for e in sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))]
    if isinstance(doc, dict):
        errs.extend(_semantic_errors(doc))
        for where, rel in _referenced_files(doc):
            if not os.path.isfile(os.path.join(base_dir, rel)):
                errs.append(f"{where}: file not found: {rel}")
    return errs


def validate_dossier(path):
    """Return the list of problems found in the dossier at ``path`` (empty when valid).

    Raises ``OSError`` when the file cannot be read.
    """
    try:
        doc, _ = read_json(path)
    except SchemaError as exc:
        return exc.errors
    return check(doc, os.path.dirname(os.path.abspath(path)))


def load_dossier(path):
    """Parse and validate; returns ``(doc, raw_text, base_dir)`` or raises :class:`SchemaError`."""
    doc, text = read_json(path)
    base = os.path.dirname(os.path.abspath(path))
    errs = check(doc, base)
    if errs:
        raise SchemaError(errs)
    return doc, text, base


def bundled(name):
    """Path of a dossier or fixture shipped with the package."""
    return os.path.join(os.path.dirname(__file__), "data", name)
