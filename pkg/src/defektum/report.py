"""Run every pipeline a dossier asks for and render the result as text, JSON or CSV.

Output is byte-for-byte deterministic: fixed table order, fixed column
order and floats printed with six significant digits.
"""

import csv
import hashlib
import io
import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .charge import ChargeState, reaction_energy, stability_map, transition_levels
from .charge import DEFAULT_ACCURACY_EV, DEFAULT_GAP_EV
from .constants import BOHR_TO_ANG
from .fields import classify_localized_levels, localization_factor, read_volumetric
from .geometry import DEFAULT_SYMMETRY_TOL, detect_point_group, read_structure, shell_distances
from .optics import (
    DEFAULT_BULK_MODULUS_GPA, DEFAULT_REFRACTIVE_INDEX, StrainSeries, calibrate_zpl,
    debye_to_cm, dipole_from_lifetime, exciton_binding, fit_linear_response,
    radiative_lifetime, stress_coupling, telecom_band,
)
from .spin import (
    dipolar_tensor, expand_hyperfine_rows, group_equivalent_nuclei, zfs_levels,
    zfs_result,
)
from .vibronic import summarize

SIG_DIGITS = 6

TABLE_ORDER = ("geometry", "vibronic", "optics", "exciton", "transition_levels",
               "stability_windows", "reactions", "zfs", "hyperfine", "strain", "localization")


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)


@dataclass
class Report:
    name: str
    tables: dict
    provenance: dict
    errors: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.errors


def fmt(value):
    """Render one cell: floats with fixed significant digits, None as empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v == 0.0:
            return "0"
        return f"{v:.{SIG_DIGITS}g}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return " ".join(fmt(v) for v in value)
    return str(value)


def _json_value(value):
    if isinstance(value, (float, np.floating)):
        return float(fmt(value))
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_json_value(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    return value


def _charge(q):
    return f"{q:+d}" if q else "0"


# ---------------------------------------------------------------------------
# pipelines; each returns {table name: Table}


def _geometry(doc, base):
    geo = doc["geometry"]
    center = geo.get("center_ang", [0.0, 0.0, 0.0])
    tol = geo.get("symmetry_tol_ang", DEFAULT_SYMMETRY_TOL)
    pairs = geo.get("pairs", [])
    t = Table(["structure", "point_group", "pair", "n_pairs", "min_ang", "max_ang", "shells_ang"])
    for key, rel in sorted(geo["structures"].items()):
        s = read_structure(os.path.join(base, rel))
        pg = detect_point_group(s, center, tol)
        if not pairs:
            t.rows.append([key, pg, "", None, None, None, ""])
        for a, b in pairs:
            d = shell_distances(s, a, b)
            shells = _shells(d, tol)
            t.rows.append([key, pg, f"{a}-{b}", len(d), min(d), max(d),
                           " ".join(f"{fmt(v)}x{n}" for v, n in shells)])
    return {"geometry": t}


def _shells(distances, tol):
    shells = []
    for d in distances:
        if shells and d - shells[-1][0][-1] <= tol:
            shells[-1][0].append(d)
        else:
            shells.append([[d]])
    return [(float(np.mean(g[0])), len(g[0])) for g in shells]


def _vibronic(doc, base):
    t = Table(["label", "E_FC_eV", "Q_amu^1/2_ang", "hbar_omega_eV", "S", "DWF_pct"])
    for row in doc["vibronic"]:
        v = summarize(row["e_fc_ev"], row["q_amu_ang"])
        t.rows.append([row["label"], v.E_FC, v.Q, v.hbar_omega, v.S, v.dwf_percent])
    return {"vibronic": t}


def _optics(doc, base):
    opt = doc["optics"]
    out = {}
    n_r = opt.get("n_r", DEFAULT_REFRACTIVE_INDEX)
    span = opt.get("band_span_ev", 0.1)
    cal = opt.get("calibration")
    transitions = opt.get("transitions", [])
    if transitions:
        calc = [tr["zpl_calc_ev"] for tr in transitions]
        shifted = calibrate_zpl(cal["calc_ref_ev"], cal["exp_ref_ev"], calc) if cal else calc
        shift = cal["exp_ref_ev"] - cal["calc_ref_ev"] if cal else 0.0
        t = Table(["label", "zpl_calc_eV", "shift_eV", "zpl_eV", "wavelength_nm", "band", "band_span",
                   "lifetime_s", "dipole_Cm"])
        for tr, e in zip(transitions, shifted):
            band = telecom_band(e, span)
            tau = mu = None
            # lifetimes refer to the calculated transition energy
            if "transition_dipole_debye" in tr:
                mu_vec = debye_to_cm(tr["transition_dipole_debye"])
                mu = float(np.linalg.norm(mu_vec))
                tau = radiative_lifetime(mu_vec, tr["zpl_calc_ev"], n_r)
            elif "lifetime_s" in tr:
                tau = tr["lifetime_s"]
                mu = dipole_from_lifetime(tau, tr["zpl_calc_ev"], n_r)
            t.rows.append([tr["label"], tr["zpl_calc_ev"], shift, e, band.wavelength_nm, band.band or "none",
                           "/".join(band.span) or "none", tau, mu])
        out["optics"] = t
    if "exciton" in opt:
        ex = opt["exciton"]
        b = exciton_binding(ex["vertical_excitation_ev"], ex["homo_lumo_gap_ev"])
        out["exciton"] = Table(["vertical_excitation_eV", "homo_lumo_gap_eV", "binding_eV", "bound"],
                               [[ex["vertical_excitation_ev"], ex["homo_lumo_gap_ev"], b.energy, b.bound]])
    return out


def _charge_states(doc, base):
    consts = doc.get("constants", {})
    gap = consts.get("gap_ev", DEFAULT_GAP_EV)
    acc = consts.get("accuracy_band_ev", DEFAULT_ACCURACY_EV)
    states = [ChargeState(cs["q"], cs["e_tot_ev"], cs.get("e_corr_ev", 0.0), cs.get("spin"),
                          cs.get("point_group"), cs.get("jt_ev")) for cs in doc["charge_states"]]
    levels = transition_levels(states, doc.get("e_vbm_ev", 0.0))
    if not levels:
        return {}
    diagram = stability_map(levels, gap, acc)
    lt = Table(["level", "epsilon_eV", "undetermined", "negative_U"])
    for lvl in diagram.levels:
        lt.rows.append([lvl.label, lvl.epsilon, lvl.undetermined, lvl.negative_u])
    by_q = {s.q: s for s in states}
    wt = Table(["charge", "fermi_lo_eV", "fermi_hi_eV", "spin", "point_group"])
    for w in diagram.windows:
        s = by_q[w.q]
        wt.rows.append([_charge(w.q), w.lo, w.hi, s.spin, s.point_group])
    return {"transition_levels": lt, "stability_windows": wt}


def _reactions(doc, base):
    t = Table(["label", "reactant_eV", "products_eV", "reaction_energy_eV", "endothermic"])
    for r in doc["reactions"]:
        e = reaction_energy(r["reactant_ev"], r["products_ev"])
        t.rows.append([r["label"], r["reactant_ev"], r["products_ev"], e, e > 0])
    return {"reactions": t}


def _spin(doc, base):
    zt = Table(["label", "S", "source", "D_MHz", "E_MHz", "axis", "levels_MHz", "transitions_MHz"])
    ht = Table(["label", "nucleus", "count", "Axx_MHz", "Ayy_MHz", "Azz_MHz"])
    for entry in doc["spin"]:
        S = entry["spin"]
        res, source = None, None
        if "zfs" in entry:
            D, E, axis, source = entry["zfs"]["d_mhz"], entry["zfs"]["e_mhz"], None, "input"
        elif "tensor_mhz" in entry:
            res, source = zfs_result(entry["tensor_mhz"]), "tensor"
        elif "density_cube" in entry:
            field_ = read_volumetric(os.path.join(base, entry["density_cube"]))
            res, source = dipolar_tensor(field_, S, entry.get("cutoff", 0.0)), "dipolar"
        if res is not None:
            D, E, axis = res.D, res.E, res.axis
        if source is not None:
            if S >= 1:
                lv = zfs_levels(D, E, S)
                levels, trans = lv.energies, lv.transitions
            else:
                levels = trans = None
            zt.rows.append([entry["label"], float(S), source, D, E, axis, levels, trans])
        if "hyperfine" in entry:
            for rec in group_equivalent_nuclei(expand_hyperfine_rows(entry["hyperfine"])):
                nucleus = f"{rec.isotope}{rec.species}" if rec.isotope else rec.species
                ht.rows.append([entry["label"], nucleus, rec.multiplicity, rec.axx, rec.ayy, rec.azz])
    out = {}
    if zt.rows:
        out["zfs"] = zt
    if ht.rows:
        out["hyperfine"] = ht
    return out


def _strain(doc, base):
    bulk = doc.get("constants", {}).get("bulk_modulus_gpa", DEFAULT_BULK_MODULUS_GPA)
    t = Table(["label", "observable", "slope_per_strain", "slope_stderr", "intercept", "per_GPa", "per_GPa_stderr"])
    for entry in doc["strain"]:
        obs = entry["observable"]
        series = StrainSeries([p["strain"] for p in entry["points"]], [p[obs] for p in entry["points"]], obs)
        fit = fit_linear_response(series)
        t.rows.append([entry["label"], obs, fit.slope, fit.slope_stderr, fit.intercept,
                       stress_coupling(fit.slope, bulk), stress_coupling(fit.slope_stderr, bulk)])
    return {"strain": t}


def _localization(doc, base):
    t = Table(["label", "band", "L", "class"])
    for i, entry in enumerate(doc["localization"]):
        f = read_volumetric(os.path.join(base, entry["cube"]))
        L = localization_factor(f, entry["center_ang"], entry["radius_bohr"] * BOHR_TO_ANG)
        band = entry.get("band", i)
        cls = classify_localized_levels([(band, min(L, 1.0))], entry.get("threshold", 0.1))[0]
        t.rows.append([entry.get("label", f"band {band}"), band, L, cls.label])
    return {"localization": t}


PIPELINES = (
    ("geometry", _geometry),
    ("vibronic", _vibronic),
    ("optics", _optics),
    ("charge_states", _charge_states),
    ("reactions", _reactions),
    ("spin", _spin),
    ("strain", _strain),
    ("localization", _localization),
)


def build_report(doc, text, base):
    """Run every pipeline whose input block is present. Pipeline failures are
    collected in ``errors`` instead of aborting the report."""
    tables, errors = {}, []
    for key, pipeline in PIPELINES:
        if key not in doc:
            continue
        try:
            tables.update(pipeline(doc, base))
        except OSError as exc:
            errors.append({"section": key, "kind": "io", "message": str(exc)})
        except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            errors.append({"section": key, "kind": "numeric", "message": str(exc)})
    provenance = {
        "dossier": doc["name"],
        "sha256": hashlib.sha256(text.encode()).hexdigest(),
        "toolkit_version": __version__,
        "inputs": doc,
    }
    ordered = {k: tables[k] for k in TABLE_ORDER if k in tables}
    return Report(doc["name"], ordered, provenance, errors)


def run_report(path):
    from .dossier import load_dossier

    doc, text, base = load_dossier(path)
    return build_report(doc, text, base)


# ---------------------------------------------------------------------------
# rendering


def render_text(report):
    out = [f"# dossier {report.name}  sha256 {report.provenance['sha256'][:16]}  defektum {__version__}"]
    for name, t in report.tables.items():
        cells = [t.columns] + [[fmt(v) for v in row] for row in t.rows]
        widths = [max(len(r[k]) for r in cells) for k in range(len(t.columns))]
        out.append("")
        out.append(f"== {name} ==")
        for r in cells:
            out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    if report.errors:
        out.append("")
        out.append("== errors ==")
        for e in report.errors:
            out.append(f"{e['section']}: [{e['kind']}] {e['message']}")
    return "\n".join(out) + "\n"


def render_json(report):
    doc = {
        "name": report.name,
        "tables": {name: {"columns": t.columns, "rows": [[_json_value(v) for v in row] for row in t.rows]}
                   for name, t in report.tables.items()},
        "errors": report.errors,
        "provenance": report.provenance,
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def render_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for name, t in report.tables.items():
        w.writerow(["table"] + t.columns)
        for row in t.rows:
            w.writerow([name] + [fmt(v) for v in row])
    for e in report.errors:
        w.writerow(["error", e["section"], e["kind"], e["message"]])
    return buf.getvalue()


RENDERERS = {"text": render_text, "json": render_json, "csv": render_csv}
