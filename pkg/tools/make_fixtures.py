"""Regenerate the bundled structure fixtures and example dossiers.

Clusters are built from the Li-Li and Si-Si neighbor distances of the Li4V
ground state and of its two excited-state geometries.
Charge-state total energies are back-solved so that the corrected energy
differences reproduce the reference transition levels.

    python3 tools/make_fixtures.py
"""

import json
import os

import numpy as np

from defektum.geometry import Structure, format_structure

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "defektum", "data")

# tetrahedron vertices along <111>; the Si set is the inverted tetrahedron
TET = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
SI_MASS = 28.085
LI_MASS = 6.94


def tetrahedron(edge, inverted=False):
    # edge of the (+-a) tetrahedron is 2*sqrt(2)*a
    a = edge / (2.0 * np.sqrt(2.0))
    return (-TET if inverted else TET) * a


def trigonal_pyramid(basal, axial, phase, apex_sign):
    """Apex on the [111] axis, three basal atoms; basal-basal = ``basal``,
    apex-basal = ``axial``. The centroid sits at the origin."""
    z = np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0)
    x = np.array([1.0, -1.0, 0.0]) / np.sqrt(2.0)
    y = np.cross(z, x)
    rho = basal / np.sqrt(3.0)
    dh = np.sqrt(axial**2 - rho**2)
    h_apex, h_base = 0.75 * dh, -0.25 * dh
    pts = [apex_sign * h_apex * z]
    for k in range(3):
        phi = phase + 2.0 * np.pi * k / 3.0
        pts.append(apex_sign * h_base * z + rho * (np.cos(phi) * x + np.sin(phi) * y))
    return np.array(pts)


def cluster(li, si=None):
    species = ["X"] + ["Li"] * 4
    pos = [np.zeros(3), *li]
    masses = [0.0] + [LI_MASS] * 4
    if si is not None:
        species += ["Si"] * 4
        pos += list(si)
        masses += [SI_MASS] * 4
    return Structure(species, np.array(pos), np.array(masses))


def write(name, s, comment):
    with open(os.path.join(DATA, name), "w") as fh:
        fh.write(format_structure(s, comment))


def main():
    os.makedirs(DATA, exist_ok=True)
    write("li4v_first_shell.xyz", cluster(tetrahedron(2.761)), "Li4V first shell, ground state Td")
    write("li4v_ground_td.xyz", cluster(tetrahedron(2.761), tetrahedron(4.080, True)),
          "Li4V ground state Td")
    write("li4v_excited_td.xyz", cluster(tetrahedron(2.797), tetrahedron(4.117, True)),
          "Li4V excited state Td")
    write("li4v_excited_c3v.xyz",
          cluster(trigonal_pyramid(2.882, 2.770, 0.0, 1.0),
                  trigonal_pyramid(4.106, 4.154, np.pi / 3.0, -1.0)),
          "Li4V excited state C3v, axis [111]")

    e_vbm = 5.0
    li_states = back_solve(
        e_vbm, -1000.0,
        [(1, 0.185, 0.1, 0.5, "C3v", 0.08), (2, 0.007, 0.3, 1.0, "C1h", 0.045)],
        neutral=(0.0, "Td"))
    li = {
        "name": "Li4V",
        "host": "Si",
        "species": ["Li"],
        "constants": {"gap_ev": 1.17, "accuracy_band_ev": 0.1, "bulk_modulus_gpa": 97.8},
        "geometry": {
            "structures": {
                "ground_td": "li4v_ground_td.xyz",
                "excited_td": "li4v_excited_td.xyz",
                "excited_c3v": "li4v_excited_c3v.xyz",
            },
            "center_ang": [0.0, 0.0, 0.0],
            "pairs": [["Li", "Li"], ["Si", "Si"]],
            "symmetry_tol_ang": 0.01,
        },
        "e_vbm_ev": e_vbm,
        "charge_states": li_states,
        "optics": {
            "n_r": 3.5,
            "calibration": {"calc_ref_ev": 0.99, "exp_ref_ev": 1.045},
            "transitions": [{"label": "Li4V0", "zpl_calc_ev": 0.99, "lifetime_s": 9.3e-6}],
            "exciton": {"vertical_excitation_ev": 1.088, "homo_lumo_gap_ev": 1.12},
        },
        "vibronic": [{"label": "Li4V0", "e_fc_ev": 0.122, "q_amu_ang": 1.0072}],
        "strain": [{
            "label": "Li4V0 ZPL",
            "observable": "zpl_ev",
            "points": [{"strain": s, "zpl_ev": round(0.99 + 1.43 * s, 10)} for s in (-0.01, -0.005, 0.0, 0.005, 0.01)],
        }],
        "reactions": [{"label": "Li4V -> Li_i + Li3V", "reactant_ev": -1000.0, "products_ev": -998.76}],
    }

    na_states = back_solve(
        e_vbm, -1200.0,
        [(1, 0.577, 0.1, 0.5, "C3v", None), (2, 0.311, 0.3, 1.0, "C1h", None), (3, 0.184, 0.6, 1.5, "Td", None)],
        neutral=(0.0, "Td"))
    na = {
        "name": "Na4V",
        "host": "Si",
        "species": ["Na"],
        "constants": {"gap_ev": 1.17, "accuracy_band_ev": 0.1, "bulk_modulus_gpa": 97.8},
        "e_vbm_ev": e_vbm,
        "charge_states": na_states,
        "optics": {
            "n_r": 3.5,
            "calibration": {"calc_ref_ev": 0.99, "exp_ref_ev": 1.045},
            "transitions": [
                {"label": "Na4V0", "zpl_calc_ev": 0.64, "lifetime_s": 0.5e-6},
                {"label": "Na4V+", "zpl_calc_ev": 0.719},
                {"label": "Na4V2+", "zpl_calc_ev": 0.728},
            ],
        },
        "vibronic": [
            {"label": "Na4V0", "e_fc_ev": 0.107, "q_amu_ang": 1.2741},
            {"label": "Na4V+", "e_fc_ev": 0.111, "q_amu_ang": 1.0726},
            {"label": "Na4V2+", "e_fc_ev": 0.101, "q_amu_ang": 1.0081},
        ],
        "spin": [
            {"label": "Na4V+", "spin": 0.5, "hyperfine": [
                {"count": 1, "species": "Na", "isotope": 23, "axx_mhz": 16.305542, "ayy_mhz": 16.305542, "azz_mhz": 18.809742},
                {"count": 3, "species": "Na", "isotope": 23, "axx_mhz": -1.545248, "ayy_mhz": -1.832048, "azz_mhz": 5.765952},
                {"count": 1, "species": "Si", "isotope": 29, "axx_mhz": -4.823545, "ayy_mhz": -4.823545, "azz_mhz": -125.441745},
                {"count": 3, "species": "Si", "isotope": 29, "axx_mhz": -1.609119, "ayy_mhz": -1.580319, "azz_mhz": -13.767919},
            ]},
            {"label": "Na4V2+", "spin": 1.0, "zfs": {"d_mhz": 327.0, "e_mhz": 34.0}, "hyperfine": [
                {"count": 1, "species": "Na", "isotope": 23, "axx_mhz": 4.2536325, "ayy_mhz": 6.2752325, "azz_mhz": 8.2426825},
                {"count": 1, "species": "Na", "isotope": 23, "axx_mhz": -1.470978, "ayy_mhz": -1.472828, "azz_mhz": -4.962778},
                {"count": 2, "species": "Na", "isotope": 23, "axx_mhz": 3.7660625, "ayy_mhz": 5.9553625, "azz_mhz": 7.7111625},
                {"count": 1, "species": "Si", "isotope": 29, "axx_mhz": -1.091922, "ayy_mhz": -2.116222, "azz_mhz": -53.610422},
                {"count": 1, "species": "Si", "isotope": 29, "axx_mhz": 2.5132035, "ayy_mhz": 2.7784535, "azz_mhz": 3.4853035},
                {"count": 2, "species": "Si", "isotope": 29, "axx_mhz": -2.1759935, "ayy_mhz": -3.1418435, "azz_mhz": -49.2603935},
            ]},
        ],
        "strain": [
            {"label": "Na4V0 ZPL", "observable": "zpl_ev",
             "points": [{"strain": s, "zpl_ev": round(0.64 + 1.21 * s, 10)} for s in (-0.01, -0.005, 0.0, 0.005, 0.01)]},
            {"label": "Na4V2+ D", "observable": "zfs_mhz",
             "points": [{"strain": s, "zfs_mhz": round(327.0 - 260.0 * s, 10)} for s in (-0.01, -0.005, 0.0, 0.005, 0.01)]},
        ],
        "reactions": [{"label": "Na4V -> Na_i + Na3V", "reactant_ev": -1200.0, "products_ev": -1198.05}],
    }

    for name, doc in (("li4v.json", li), ("na4v.json", na)):
        with open(os.path.join(DATA, name), "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")


def back_solve(e_vbm, e_neutral, charged, neutral):
    """Total energies such that (E+corr)(q) - (E+corr)(q+1) - E_vbm equals each level."""
    spin0, pg0 = neutral
    states = [{"q": 0, "e_tot_ev": e_neutral, "e_corr_ev": 0.0, "spin": spin0, "point_group": pg0}]
    corrected = e_neutral
    for q, eps, corr, spin, pg, jt in charged:
        corrected = corrected - eps - e_vbm
        st = {"q": q, "e_tot_ev": round(corrected - corr, 10), "e_corr_ev": corr, "spin": spin, "point_group": pg}
        corrected = st["e_tot_ev"] + corr
        if jt is not None:
            st["jt_ev"] = jt
        states.append(st)
    return states


if __name__ == "__main__":
    main()
