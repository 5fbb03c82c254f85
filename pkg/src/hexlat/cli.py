"""Command-line front end.

Subcommands:

* ``suite``      run a verification battery and emit a JSON certificate
* ``probe``      random local-optimality probes with certified energy gaps
* ``landscape``  export a CSV grid of the direction-weighted sum and its gap
* ``energy``     compute lattice energies / perturbed differences

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.
Certificates depend only on flags and seed, never on wall-clock state.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import energy as energy_mod
from . import suites
from .perturbation import load_perturbation

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexlat",
        description="interaction energies of the hexagonal lattice and "
        "certified checks of its local optimality",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_suite = sub.add_parser("suite", help="run a verification battery")
    p_suite.add_argument("--suite", required=True, choices=suites.SUITE_NAMES)
    p_suite.add_argument("--seed", type=int, default=0)
    p_suite.add_argument("--out", help="write the JSON certificate here instead of stdout")
    p_suite.add_argument("--json", action="store_true", help="certificate output (default)")

    p_probe = sub.add_parser("probe", help="random local-optimality probes")
    p_probe.add_argument("--alpha", type=float, action="append", required=True,
                         help="Gaussian width; repeatable")
    p_probe.add_argument("--n-period", type=int, action="append", required=True,
                         help="perturbation period; repeatable")
    p_probe.add_argument("--trials", type=int, default=100)
    p_probe.add_argument("--seed", type=int, default=0)
    p_probe.add_argument("--sup-norm", type=float, default=None,
                         help="override the default min(1/alpha, r*/20)")
    p_probe.add_argument("--out")
    p_probe.add_argument("--json", action="store_true", help="emit the full JSON report")

    p_land = sub.add_parser("landscape", help="CSV landscape of the weighted sum")
    p_land.add_argument("--alpha", type=float, required=True)
    p_land.add_argument("--v-angle", type=float, default=0.0)
    p_land.add_argument("--grid", type=int, default=60)
    p_land.add_argument("--out", required=True)

    p_energy = sub.add_parser("energy", help="lattice energies and differences")
    p_energy.add_argument("--alpha", type=float, help="Gaussian width")
    p_energy.add_argument("--riesz", type=float, help="Riesz exponent s > 2")
    p_energy.add_argument("--tol", type=float, default=1e-12)
    p_energy.add_argument("--perturbation", help="JSON displacement table; compute the energy difference")
    p_energy.add_argument("--json", action="store_true")
    p_energy.add_argument("--out")
    return parser


def _emit(payload: str, out_path) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "suite":
        code, cert = suites.run_suite(args.suite, seed=args.seed)
        _emit(json.dumps(cert, sort_keys=True, indent=2) + "\n", args.out)
        return code

    if args.command == "probe":
        rule = suites.default_sup_norm if args.sup_norm is None else (lambda a: args.sup_norm)
        try:
            report = suites.probe(args.alpha, args.n_period, args.trials, seed=args.seed,
                                  sup_norm_rule=rule)
        except ValueError as exc:
            parser.error(str(exc))
        certified = all(rec["certified_gap"] >= 0.0 for rec in report.records)
        if args.json or args.out:
            _emit(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", args.out)
        if not (args.json and not args.out):
            print(f"trials={len(report.records)} min_ratio={report.min_ratio:.6g} "
                  f"certified={'yes' if certified else 'NO'}")
        return 0 if certified else 1

    if args.command == "landscape":
        try:
            suites.write_landscape(args.alpha, args.v_angle, args.grid, args.out)
        except (OSError, ValueError) as exc:
            print(f"landscape export failed for {args.out!r}: {exc}", file=sys.stderr)
            return 2 if isinstance(exc, ValueError) else 1
        return 0

    if args.command == "energy":
        payload: dict = {}
        if args.riesz is not None:
            ev = energy_mod.riesz_energy(args.riesz, args.tol)
            payload["riesz"] = {"s": args.riesz, "value": ev.value, "error_bound": ev.error_bound}
        if args.alpha is not None:
            if args.perturbation:
                p = load_perturbation(args.perturbation)
                ev = energy_mod.perturbed_energy_diff(p, args.alpha, args.tol)
                payload["gaussian_diff"] = {
                    "alpha": args.alpha,
                    "value": ev.value,
                    "error_bound": ev.error_bound,
                }
            else:
                ev = energy_mod.gaussian_lattice_energy(args.alpha, args.tol)
                payload["gaussian"] = {
                    "alpha": args.alpha,
                    "value": ev.value,
                    "error_bound": ev.error_bound,
                }
        if not payload:
            parser.error("energy needs --alpha and/or --riesz")
        if args.json or args.out:
            _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
        else:
            for key, rec in payload.items():
                print(f"{key}: value={rec['value']!r} error_bound={rec['error_bound']:.3g}")
        return 0

    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
