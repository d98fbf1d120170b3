"""Command-line front end.

Exit codes: 0 success, 1 schema error, 2 numeric error, 3 I/O error.
"""

import argparse
import csv
import sys

import numpy as np

from . import __version__
from .charge import DEFAULT_ACCURACY_EV, DEFAULT_GAP_EV, TransitionLevel, stability_map
from .constants import BOHR_TO_ANG
from .dossier import validate_dossier
from .exceptions import ParseError, SchemaError
from .fields import DEFAULT_LOCALIZATION_THRESHOLD, classify_localized_levels, localization_factor, read_volumetric
from .optics import DEFAULT_BULK_MODULUS_GPA, STRAIN_OBSERVABLES, StrainSeries, fit_linear_response, stress_coupling
from .report import RENDERERS, fmt, run_report
from .spin import dipolar_tensor, zfs_levels, zfs_result
from .tightbinding import build_hamiltonian, build_trigonal_hamiltonian, classify_irreps, solve_levels
from .vibronic import franck_condon_energy, summarize

EXIT_OK, EXIT_SCHEMA, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # malformed command lines are input errors, not numeric ones
        self.print_usage(sys.stderr)
        self.exit(EXIT_SCHEMA, f"{self.prog}: error: {message}\n")


def _vec3(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}") from None
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    return np.array(vals)


def _level(text):
    # "3=0.184" -> transition level (3/2) at 0.184 eV
    try:
        q, eps = text.split("=")
        q = int(q.rstrip("+"))
        return TransitionLevel((q, q - 1), float(eps))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HIGHER_CHARGE=EPSILON, got {text!r}") from None


def _emit(lines):
    for key, value in lines:
        print(f"{key}: {fmt(value)}")


def cmd_validate(args):
    errors = validate_dossier(args.dossier)
    if errors:
        for e in errors:
            print(e)
        return EXIT_SCHEMA
    print("ok")
    return EXIT_OK


def cmd_report(args):
    report = run_report(args.dossier)
    fmt_name = "json" if args.json else "csv" if args.csv else "text"
    text = RENDERERS[fmt_name](report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if any(e["kind"] == "io" for e in report.errors):
        return EXIT_IO
    return EXIT_NUMERIC if report.errors else EXIT_OK


def cmd_vibronic(args):
    e_fc = args.e_fc
    if e_fc is None:
        if args.zpl is None or args.vertical_emission is None:
            raise ValueError("give --e-fc or both --zpl and --vertical-emission")
        e_fc = franck_condon_energy(args.zpl, args.vertical_emission)
    v = summarize(e_fc, args.q)
    _emit([("E_FC_eV", v.E_FC), ("Q_amu^1/2_ang", v.Q), ("hbar_omega_eV", v.hbar_omega),
           ("S", v.S), ("DWF_pct", v.dwf_percent)])
    return EXIT_OK


def cmd_zfs(args):
    if args.density:
        res = dipolar_tensor(read_volumetric(args.density), args.spin, args.cutoff, args.threads)
        D, E = res.D, res.E
        _emit([("tensor_MHz", res.tensor.reshape(-1)), ("axis", res.axis)])
    elif args.tensor:
        res = zfs_result(np.array([float(v) for v in args.tensor.split(",")]).reshape(3, 3))
        D, E = res.D, res.E
        _emit([("axis", res.axis)])
    else:
        if args.d is None or args.e is None:
            raise ValueError("give --d and --e, --tensor or --density")
        D, E = args.d, args.e
    lv = zfs_levels(D, E, args.spin)
    _emit([("D_MHz", D), ("E_MHz", E), ("levels_MHz", lv.energies), ("transitions_MHz", lv.transitions)])
    return EXIT_OK


def cmd_stability(args):
    diagram = stability_map(args.level, args.gap, args.accuracy)
    for lvl in diagram.levels:
        flags = [f for f, on in (("undetermined", lvl.undetermined), ("negative-U", lvl.negative_u)) if on]
        print(f"level {lvl.label}: {fmt(lvl.epsilon)} eV {' '.join(flags)}".rstrip())
    for w in diagram.windows:
        q = f"{w.q:+d}" if w.q else "0"
        print(f"window {q}: {fmt(w.lo)} {fmt(w.hi)}")
    return EXIT_OK


def cmd_localize(args):
    f = read_volumetric(args.cube)
    scale = BOHR_TO_ANG if args.unit == "bohr" else 1.0
    L = localization_factor(f, args.center * scale, args.radius * scale, threads=args.threads)
    label = classify_localized_levels([(args.band, min(L, 1.0))], args.threshold)[0].label
    _emit([("L", L), ("class", label)])
    return EXIT_OK


def cmd_strainfit(args):
    with open(args.csv) as fh:
        rows = list(csv.reader(line for line in fh if line.strip() and not line.startswith("#")))
    header = [h.strip() for h in rows[0]]
    if len(header) != 2 or header[0] != "strain" or header[1] not in STRAIN_OBSERVABLES:
        raise ParseError(f"header must be 'strain,<{'|'.join(STRAIN_OBSERVABLES)}>'", 1)
    try:
        data = np.array([[float(a), float(b)] for a, b in rows[1:]])
    except ValueError:
        raise ParseError("non-numeric or malformed data row") from None
    fit = fit_linear_response(StrainSeries(data[:, 0], data[:, 1], header[1]))
    _emit([("observable", header[1]), ("slope_per_strain", fit.slope), ("slope_stderr", fit.slope_stderr),
           ("intercept", fit.intercept), ("per_GPa", stress_coupling(fit.slope, args.bulk_modulus)),
           ("per_GPa_stderr", stress_coupling(fit.slope_stderr, args.bulk_modulus))])
    return EXIT_OK


def cmd_tb(args):
    if args.alpha_bas is None and args.beta_bas is None:
        model, group = build_hamiltonian(args.alpha, args.beta), args.group or "Td"
    else:
        model = build_trigonal_hamiltonian(
            args.alpha, args.alpha if args.alpha_bas is None else args.alpha_bas,
            args.beta, args.beta if args.beta_bas is None else args.beta_bas)
        group = args.group or "C3v"
    ls = classify_irreps(solve_levels(model), group)
    for lvl in ls.levels:
        print(f"{lvl.irrep:3s} {fmt(lvl.energy)} eV  x{lvl.degeneracy}")
    if len(ls.levels) > 1:
        print(f"splitting: {fmt(ls.levels[-1].energy - ls.levels[0].energy)} eV")
    return EXIT_OK


def build_parser():
    p = _Parser(prog="defektum", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"defektum {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check a dossier against the schema")
    s.add_argument("dossier")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("report", help="run every pipeline of a dossier")
    s.add_argument("dossier")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true")
    g.add_argument("--csv", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("vibronic", help="Huang-Rhys and Debye-Waller factors of one transition")
    s.add_argument("--e-fc", type=float, help="relaxation energy (eV)")
    s.add_argument("--zpl", type=float, help="ZPL energy (eV)")
    s.add_argument("--vertical-emission", type=float, help="vertical emission energy (eV)")
    s.add_argument("--q", type=float, required=True, help="mode length (amu^1/2 Angstrom)")
    s.set_defaults(func=cmd_vibronic)

    s = sub.add_parser("zfs", help="zero-field splitting levels")
    s.add_argument("--spin", type=float, default=1.0)
    s.add_argument("--d", type=float, help="D (MHz)")
    s.add_argument("--e", type=float, help="E (MHz)")
    s.add_argument("--tensor", help="9 comma-separated tensor elements (MHz); write --tensor=-75,... for a leading minus")
    s.add_argument("--density", help="spin-density cube file")
    s.add_argument("--cutoff", type=float, default=1e-3, help="drop voxels below this fraction of the peak")
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_zfs)

    s = sub.add_parser("stability", help="Fermi-level stability windows")
    s.add_argument("--level", type=_level, action="append", required=True,
                   help="HIGHER_CHARGE=EPSILON, e.g. 3=0.184 for the (3+/2+) level; repeatable")
    s.add_argument("--gap", type=float, default=DEFAULT_GAP_EV)
    s.add_argument("--accuracy", type=float, default=DEFAULT_ACCURACY_EV)
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("localize", help="localization factor of a density in a sphere")
    s.add_argument("cube")
    s.add_argument("--center", type=_vec3, required=True, help="x,y,z")
    s.add_argument("--radius", type=float, required=True)
    s.add_argument("--unit", choices=("bohr", "angstrom"), default="bohr")
    s.add_argument("--band", type=int, default=0)
    s.add_argument("--threshold", type=float, default=DEFAULT_LOCALIZATION_THRESHOLD)
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_localize)

    s = sub.add_parser("strainfit", help="linear strain coupling from a CSV series")
    s.add_argument("csv")
    s.add_argument("--bulk-modulus", type=float, default=DEFAULT_BULK_MODULUS_GPA, help="GPa")
    s.set_defaults(func=cmd_strainfit)

    s = sub.add_parser("tb", help="four-site vacancy tight-binding levels")
    s.add_argument("--alpha", type=float, required=True, help="onsite energy (eV); axial site if trigonal")
    s.add_argument("--beta", type=float, required=True, help="hopping (eV); axial-basal if trigonal")
    s.add_argument("--alpha-bas", type=float, help="basal onsite energy (eV)")
    s.add_argument("--beta-bas", type=float, help="basal-basal hopping (eV)")
    s.add_argument("--group", choices=("Td", "C3v"))
    s.set_defaults(func=cmd_tb)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        for e in exc.errors:
            print(e, file=sys.stderr)
        return EXIT_SCHEMA
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
