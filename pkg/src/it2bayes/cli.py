"""Command-line entry point.

Subcommands::

    it2bayes synth  [INPUT ...] [--manifest M]   interval files -> MF descriptors + curves
    it2bayes bayes  --likelihood F --prior F --evidence F | --manifest M
    it2bayes cuts   INPUT                        alpha-cut table of one MF
    it2bayes centroid CURVE                      centroid interval of a sampled FOU

Exit codes: 0 success, 1 validation error, 2 computation error. Failures
print one JSON record per error on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .bayes import BayesInputs, SampledFOU, alpha_cuts, fou_from_cuts, posterior_fou
from .centroid import centroid_of, ekm_centroid
from .errors import ComputationError, InputError
from .synthesis import SynthesisConfig, eval_trapezoid, synthesize_signed

EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTATION = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _report("validation", f"usage: {message}")
        sys.exit(EXIT_VALIDATION)


def _report(kind: str, message: str, **extra) -> None:
    rec = {"error": kind, "message": message}
    rec.update(extra)
    print(json.dumps(rec), file=sys.stderr)


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("synthesis")
    rg = g.add_mutually_exclusive_group()
    rg.add_argument("--r", type=float, help="tail exponent (>= 1)")
    rg.add_argument("--auto-r", action="store_true", help="pick r from interval consistency (default)")
    g.add_argument("--r0", type=float, help="left droop LMF exponent (default 1)")
    g.add_argument("--r1", type=float, help="right droop LMF exponent (default 1)")
    g.add_argument("--seed", type=int, help="seed for single-expert expansion")
    g.add_argument("--bounds", help="natural domain LO,HI (leave a side empty for unbounded)")
    g.add_argument("--format", choices=("csv", "json"), help="interval file format (default: by suffix)")
    p.add_argument("--alpha-levels", type=int, help="number of alpha levels (default 101)")
    p.add_argument("--grid-points", type=int, help="samples per curve (default 2001)")
    p.add_argument("--out", help="output directory (default: current directory)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="it2bayes", description="IT2 fuzzy Bayes from expert interval estimates")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="build IT2 membership functions from interval files")
    p.add_argument("inputs", nargs="*", help="interval files (name = file stem)")
    p.add_argument("--manifest", help="JSON run manifest")
    _common(p)

    p = sub.add_parser("bayes", help="posterior IT2 MF for P(H|E)")
    for role in io.BAYES_ROLES:
        p.add_argument(f"--{role}", help=f"interval file or MF descriptor for the {role}")
    p.add_argument("--manifest", help="JSON run manifest naming likelihood, prior, evidence")
    _common(p)

    p = sub.add_parser("cuts", help="alpha-cut table of a membership function")
    p.add_argument("input", help="interval file or MF descriptor (.json with 'umf')")
    _common(p)

    p = sub.add_parser("centroid", help="centroid interval of a sampled FOU (x,umf,lmf CSV)")
    p.add_argument("curve")
    p.add_argument("--grid-points", type=int, help="resample on this many points first")
    p.add_argument("--out", help="output directory (default: print only)")
    return parser


def _config(args) -> SynthesisConfig:
    base = SynthesisConfig()
    return SynthesisConfig(
        r=args.r if args.r is not None else "auto",
        r0=base.r0 if args.r0 is None else args.r0,
        r1=base.r1 if args.r1 is None else args.r1,
        rng_seed=base.rng_seed if args.seed is None else args.seed,
    )


def _overrides(args) -> dict:
    out = {}
    if args.r is not None:
        out["r"] = args.r
    elif args.auto_r:
        out["r"] = "auto"
    for flag, key in (("r0", "r0"), ("r1", "r1"), ("seed", "rng_seed")):
        if getattr(args, flag) is not None:
            out[key] = getattr(args, flag)
    return out


def _manifest(args) -> io.RunManifest:
    m = io.load_manifest(args.manifest, _overrides(args))
    if args.alpha_levels is not None:
        m.alpha_levels = args.alpha_levels
    if args.grid_points is not None:
        m.grid_points = args.grid_points
    if args.out is not None:
        m.out = args.out
    return m


def _out_dir(path) -> Path:
    out = Path(path or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _levels(args, default=101) -> int:
    n = default if args.alpha_levels is None else args.alpha_levels
    if n < 2:
        raise InputError("--alpha-levels must be at least 2")
    return n


def _grid(args, default=2001) -> int:
    n = default if args.grid_points is None else args.grid_points
    if n < 2:
        raise InputError("--grid-points must be at least 2")
    return n


def mf_curve(mf, grid_points: int) -> tuple:
    x = np.linspace(mf.umf.clip_lo, mf.umf.clip_hi, grid_points)
    return x, eval_trapezoid(x, mf.umf), eval_trapezoid(x, mf.lmf)


def _emit_mf(out: Path, name: str, mf, grid_points: int) -> list:
    desc, curve = out / f"{name}.mf.json", out / f"{name}.curve.csv"
    io.write_json(desc, io.mf_to_dict(mf, name))
    io.write_curve(curve, *mf_curve(mf, grid_points))
    return [str(desc), str(curve)]


def cmd_synth(args) -> int:
    if args.manifest:
        m = _manifest(args)
        quantities, grid, out = m.quantities, m.grid_points, _out_dir(m.out)
    else:
        if not args.inputs:
            raise InputError("synth needs interval files or --manifest")
        cfg = _config(args)
        bounds = io.parse_bounds(args.bounds) if args.bounds else None
        quantities = []
        for path in args.inputs:
            name = Path(path).name.split(".")[0]
            if any(q.name == name for q in quantities):
                raise InputError(f"duplicate quantity name {name!r}")
            quantities.append(io.QuantitySpec(name, io.load_intervals(path, args.format, bounds), cfg))
        grid, out = _grid(args), _out_dir(args.out)

    written, status = [], EXIT_OK
    for q in quantities:
        try:
            mf = synthesize_signed(q.intervals, q.config)
            written += _emit_mf(out, q.name, mf, grid)
        except InputError as exc:
            _report("validation", str(exc), quantity=q.name)
            status = max(status, EXIT_VALIDATION)
        except ComputationError as exc:
            _report("computation", str(exc), quantity=q.name)
            status = EXIT_COMPUTATION
    print(json.dumps({"command": "synth", "outputs": written}))
    return status


def _load_role(path, cfg, fmt_name, levels):
    if Path(path).suffix.lower() == ".json":
        doc = io.read_json(path)
        if isinstance(doc, dict) and "umf" in doc:
            mf = io.mf_from_dict(doc)
            return mf, alpha_cuts(mf, levels)
    ivset = io.load_intervals(path, fmt_name, (0.0, 1.0))
    mf = synthesize_signed(ivset, cfg)
    return mf, alpha_cuts(mf, levels)


def cmd_bayes(args) -> int:
    if args.manifest:
        m = _manifest(args)
        m.check_bayes()
        levels, grid, out = m.alpha_levels, m.grid_points, _out_dir(m.out)
        mfs = {}
        for role in io.BAYES_ROLES:
            q = m.quantity(role)
            mfs[role] = synthesize_signed(q.intervals, q.config)
        cuts = {role: alpha_cuts(mf, levels) for role, mf in mfs.items()}
    else:
        missing = [r for r in io.BAYES_ROLES if getattr(args, r) is None]
        if missing:
            raise InputError(f"bayes needs --{', --'.join(missing)} (or --manifest)")
        if args.bounds and io.parse_bounds(args.bounds) != (0.0, 1.0):
            raise InputError("probability quantities must have bounds 0,1")
        levels, grid, out = _levels(args), _grid(args), _out_dir(args.out)
        cfg = _config(args)
        mfs, cuts = {}, {}
        for role in io.BAYES_ROLES:
            mfs[role], cuts[role] = _load_role(getattr(args, role), cfg, args.format, levels)

    for role, mf in mfs.items():
        for iv in (mf.umf.support, mf.lmf.support):
            if iv.lo < 0 or iv.hi > 1:
                raise InputError(f"{role} membership function leaves [0, 1]")

    try:
        result = posterior_fou(BayesInputs(cuts["likelihood"], cuts["prior"], cuts["evidence"]))
    except ComputationError as exc:
        raise ComputationError(f"posterior: {exc}") from None
    sampled = fou_from_cuts(result.fou, grid)
    centroid = ekm_centroid(sampled.x, sampled.umf, sampled.lmf)

    written = []
    for role, mf in mfs.items():
        written += _emit_mf(out, role, mf, grid)
    paths = {
        "product_cuts": out / "product_cuts.csv",
        "posterior_cuts": out / "posterior_cuts.csv",
        "posterior_curve": out / "posterior_curve.csv",
        "centroid": out / "centroid.json",
    }
    io.write_cuts(paths["product_cuts"], result.product)
    io.write_cuts(paths["posterior_cuts"], result.fou, result.umf_adjusted, result.lmf_adjusted)
    io.write_curve(paths["posterior_curve"], sampled.x, sampled.umf, sampled.lmf)
    io.write_json(paths["centroid"], centroid.as_dict())
    written += [str(p) for p in paths.values()]
    print(json.dumps({
        "command": "bayes",
        "outputs": written,
        "centroid": centroid.as_dict(),
        "adjusted_levels": {"umf": sum(result.umf_adjusted), "lmf": sum(result.lmf_adjusted)},
    }))
    return EXIT_OK


def cmd_cuts(args) -> int:
    levels = _levels(args)
    path = Path(args.input)
    mf = None
    if path.suffix.lower() == ".json":
        doc = io.read_json(path)
        if isinstance(doc, dict) and "umf" in doc:
            mf = io.mf_from_dict(doc)
    if mf is None:
        bounds = io.parse_bounds(args.bounds) if args.bounds else None
        mf = synthesize_signed(io.load_intervals(path, args.format, bounds), _config(args))
    out = _out_dir(args.out)
    target = out / f"{path.name.split('.')[0]}.cuts.csv"
    io.write_cuts(target, alpha_cuts(mf, levels))
    print(json.dumps({"command": "cuts", "outputs": [str(target)]}))
    return EXIT_OK


def cmd_centroid(args) -> int:
    x, umf, lmf = io.read_curve(args.curve)
    result = centroid_of(SampledFOU(x, umf, lmf), args.grid_points)
    outputs = []
    if args.out:
        target = _out_dir(args.out) / "centroid.json"
        io.write_json(target, result.as_dict())
        outputs.append(str(target))
    print(json.dumps({"command": "centroid", "outputs": outputs, "centroid": result.as_dict()}))
    return EXIT_OK


COMMANDS = {"synth": cmd_synth, "bayes": cmd_bayes, "cuts": cmd_cuts, "centroid": cmd_centroid}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        _report("validation", str(exc))
        return EXIT_VALIDATION
    except ComputationError as exc:
        _report("computation", str(exc))
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
