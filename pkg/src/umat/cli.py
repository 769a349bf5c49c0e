"""Command line entry point ``umat``.

Exit status: 0 success, 1 failed checks or other material errors,
2 parse, usage or invalid-argument errors, 3 convergence or step failures.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import presets as _presets
from .errors import NoConvergence, ParseError, StepFailure, UmatError
from .input_deck import parse_deck, serialize_deck
from .kinematics import FiberSet, compute_invariants, make_deformation_state
from .point_driver import LoadPath, emit_csv, run_path, shear_mode_plane
from .stress_tangent import cauchy_stress
from .verify import check_spec, run_all

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_SOLVE = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _floats(text, n=None, what="values"):
    try:
        vals = [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise _UsageError(f"could not read {what} from {text!r}") from None
    if n is not None and len(vals) != n:
        raise _UsageError(f"expected {n} {what}, got {len(vals)}")
    return vals


def _params(items):
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise _UsageError(f"parameter must look like name=value, got {item!r}")
        out[key.strip()] = _floats(val, 1, f"value for {key}")[0]
    return out


def _load_spec(args):
    if getattr(args, "deck", None):
        with open(args.deck, encoding="utf-8") as fh:
            return parse_deck(fh.read()), args.deck
    name = args.preset
    return _presets.build_preset(name, **_params(args.param)), name


def _plane(text):
    text = text.strip().lower()
    if len(text) == 2 and text.isdigit():
        return (int(text[0]), int(text[1]))
    if len(text) == 2 and set(text) <= set("fsn"):
        return shear_mode_plane(text)
    raise _UsageError(f"plane must be two axis digits (e.g. 12) or a shear mode (e.g. fs), got {text!r}")


def _range(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"range must be A:B:N, got {text!r}")
    a, b = _floats(parts[0], 1, "range start")[0], _floats(parts[1], 1, "range stop")[0]
    try:
        n = int(parts[2])
    except ValueError:
        raise _UsageError(f"range count must be an integer, got {parts[2]!r}") from None
    if n < 1:
        raise _UsageError("range count must be at least 1")
    return np.linspace(a, b, n)


def cmd_eval(args, out):
    spec, _ = _load_spec(args)
    F = np.array(_floats(args.F, 9, "deformation gradient entries")).reshape(3, 3)
    if args.fibers:
        vecs = [_floats(v, 3, "fiber components") for v in args.fibers.split(";")]
        fibers = FiberSet.from_vectors(vecs, normalize=True)
    else:
        fibers = spec.fiber_set()
    st = cauchy_stress(spec.table, F, fibers, args.pressure)
    inv = compute_invariants(make_deformation_state(F), fibers, spec.table.mixed)
    result = {
        "units": spec.units,
        "energy": st.energy.UA,
        "sigma": st.sigma.tolist(),
        "invariants": inv.values.tolist(),
        "dpsi_dI": st.energy.UI1.tolist(),
    }
    if args.json:
        out.write(json.dumps(result, indent=2) + "\n")
    else:
        out.write(f"energy  {st.energy.UA:.9e}\n")
        out.write(f"sigma{(' [' + spec.units + ']') if spec.units else ''}\n")
        for row in st.sigma:
            out.write("  " + "  ".join(f"{v: .9e}" for v in row) + "\n")
        out.write("invariants\n  " + "  ".join(f"{v:.9g}" for v in inv.values) + "\n")
    return EXIT_OK


def cmd_curve(args, out):
    spec, _ = _load_spec(args)
    plane = _plane(args.plane)
    path = LoadPath(args.mode, tuple(_range(args.range)), plane=plane)
    curve = run_path(spec, path)
    text = emit_csv(curve, path.mode, spec.units, plane)
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_preset(args, out):
    if args.action == "list":
        for n in _presets.list_presets():
            info = _presets.preset_info(n)
            out.write(f"{n:34s} [{info.units}] {info.description}\n")
        return EXIT_OK
    if not args.name:
        raise _UsageError("preset show needs a preset name")
    info = _presets.preset_info(args.name)
    out.write(f"{info.name}: {info.description}\nunits: {info.units}\ndefaults:\n")
    for k, v in info.defaults.items():
        out.write(f"  {k} = {v!r}\n")
    out.write("\n" + serialize_deck(_presets.build_preset(info.name, **_params(args.param))))
    return EXIT_OK


def cmd_check(args, out):
    if args.deck or args.preset:
        spec, name = _load_spec(args)
        rep = check_spec(spec, name, args.samples, args.seed)
    else:
        rep = run_all(samples=args.samples, seed=args.seed)
    out.write(rep.format_text() + "\n")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(rep.to_json() + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="umat", description="Invariant-based anisotropic hyperelastic material kernel.")
    sub = p.add_subparsers(dest="command", required=True)

    def source(sp, required=True):
        g = sp.add_mutually_exclusive_group(required=required)
        g.add_argument("--deck", help="input deck file")
        g.add_argument("--preset", help="preset name (see `umat preset list`)")
        sp.add_argument("--param", action="append", metavar="NAME=VALUE",
                        help="override a preset parameter (repeatable)")

    e = sub.add_parser("eval", help="energy and Cauchy stress at one deformation gradient")
    source(e)
    e.add_argument("--F", required=True, help="nine comma-separated entries f11,f12,...,f33 (row major)")
    e.add_argument("--fibers", help="fiber directions 'x,y,z;x,y,z' (normalized)")
    e.add_argument("--pressure", type=float, help="hydrostatic pressure for incompressible tables")
    e.add_argument("--json", action="store_true", help="machine-readable output")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("curve", help="run a homogeneous load path and write CSV")
    source(c)
    c.add_argument("--mode", required=True, choices=["uniaxial", "equibiaxial", "shear", "simple_shear", "volumetric"])
    c.add_argument("--range", required=True, help="A:B:N control values (first must be the reference)")
    c.add_argument("--plane", default="12", help="shear plane 'ab' (F = I + g e_a e_b) or mode like 'fs'")
    c.add_argument("--out", help="output CSV file (default stdout)")
    c.set_defaults(func=cmd_curve)

    pr = sub.add_parser("preset", help="list or show presets")
    pr.add_argument("action", choices=["list", "show"])
    pr.add_argument("name", nargs="?")
    pr.add_argument("--param", action="append", metavar="NAME=VALUE")
    pr.set_defaults(func=cmd_preset)

    k = sub.add_parser("check", help="run the verification suite")
    source(k, required=False)
    k.add_argument("--samples", type=int, default=100)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--json", help="write a machine-readable report to this file")
    k.set_defaults(func=cmd_check)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ParseError, _UsageError, ValueError) as exc:
        print(f"umat: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NoConvergence, StepFailure) as exc:
        print(f"umat: error: {exc}", file=sys.stderr)
        return EXIT_SOLVE
    except (UmatError, OSError) as exc:
        print(f"umat: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
